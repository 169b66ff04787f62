//! Finite residue fields `F_q`, `q = p^f`.
//!
//! Elements are encoded as integers `Σ c_j p^j` where `c_j` is the coefficient
//! of `X^j` in the polynomial basis modulo a fixed primitive polynomial. The
//! polynomial `X` then generates the multiplicative group, so multiplication
//! goes through discrete log tables.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

/// Element of a [`ResidueField`], in the digit encoding described above.
pub type Fq = u32;

/// Largest field size we are willing to tabulate.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug)]
struct Tables {
    p: u32,
    f: u32,
    q: u32,
    /// Monic primitive polynomial, ascending coefficients, length `f + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = X^i` for `0 <= i < q - 1`.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` unused.
    log: Vec<u32>,
}

/// The field `F_{p^f}` together with its arithmetic tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone, Debug)]
pub struct ResidueField(Arc<Tables>);

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.f == other.0.f
    }
}
impl Eq for ResidueField {}

impl ResidueField {
    /// Builds `F_{p^f}` with the lexicographically least primitive modulus.
    ///
    /// Panics if `p` is not prime or `p^f` exceeds [`MAX_FIELD_SIZE`].
    pub fn new(p: u32, f: u32) -> Self {
        assert!(is_prime(p as u64), "characteristic must be prime");
        assert!(f >= 1, "degree must be positive");
        let q64 = (p as u64).checked_pow(f).expect("field too large");
        assert!(q64 <= MAX_FIELD_SIZE, "field too large");
        let q = q64 as u32;

        // candidates X^f + c_{f-1} X^{f-1} + ... + c_0 enumerated by their encoding
        for code in 0..q {
            let mut modulus = digits(code, p, f);
            if modulus[0] == 0 {
                continue;
            }
            modulus.push(1);
            if let Some((exp, log)) = try_primitive(p, f, q, &modulus) {
                return ResidueField(Arc::new(Tables {
                    p,
                    f,
                    q,
                    modulus,
                    exp,
                    log,
                }));
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.f
    }

    pub fn size(&self) -> u32 {
        self.0.q
    }

    /// Monic defining polynomial over `F_p`, ascending coefficients.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Fq {
        0
    }

    pub fn one(&self) -> Fq {
        1
    }

    /// The generator `X` (equal to a primitive root of `F_p` when `f = 1`).
    pub fn generator(&self) -> Fq {
        self.0.exp[1 % (self.0.q - 1) as usize]
    }

    /// Embeds an integer through `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.0.p as i64) as u32
    }

    /// Returns the prime-field value if `a` lies in `F_p`.
    pub fn as_prime_field(&self, a: Fq) -> Option<u32> {
        (a < self.0.p).then_some(a)
    }

    /// Coefficients of `a` in the polynomial basis `1, X, ..., X^{f-1}`.
    pub fn to_digits(&self, a: Fq) -> Vec<u32> {
        digits(a, self.0.p, self.0.f)
    }

    pub fn from_digits(&self, ds: &[u32]) -> Fq {
        let p = self.0.p;
        let mut acc = 0u32;
        for &d in ds.iter().take(self.0.f as usize).rev() {
            acc = acc * p + d % p;
        }
        acc
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let p = self.0.p;
        if self.0.f == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.0.f {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let p = self.0.p;
        if self.0.f == 1 {
            return (p - a) % p;
        }
        let mut a = a;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.0.f {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        out
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.q - 1;
        let l = (self.0.log[a as usize] + self.0.log[b as usize]) % n;
        self.0.exp[l as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return None;
        }
        let n = self.0.q - 1;
        let l = (n - self.0.log[a as usize]) % n;
        Some(self.0.exp[l as usize])
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fq, k: u64) -> Fq {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.q - 1) as u64;
        let l = (self.0.log[a as usize] as u64 * (k % n)) % n;
        self.0.exp[l as usize]
    }

    /// Discrete logarithm to base [`ResidueField::generator`].
    pub fn log(&self, a: Fq) -> Option<u32> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    /// The unique `p`-th root (Frobenius is bijective on a finite field).
    pub fn pth_root(&self, a: Fq) -> Fq {
        // a^(q/p) is the inverse of Frobenius
        self.pow(a, (self.0.q / self.0.p) as u64)
    }

    pub fn is_square(&self, a: Fq) -> bool {
        a == 0 || self.0.p == 2 || self.0.log[a as usize].is_multiple_of(2)
    }

    /// Square root with the least encoding among the (at most two) roots.
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return Some(0);
        }
        if self.0.p == 2 {
            return Some(self.pth_root(a));
        }
        let l = self.0.log[a as usize];
        if !l.is_multiple_of(2) {
            return None;
        }
        let r = self.0.exp[(l / 2) as usize];
        Some(r.min(self.neg(r)))
    }

    /// Iterates over all field elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.0.q
    }
}

fn digits(mut code: u32, p: u32, f: u32) -> Vec<u32> {
    let mut out = vec![0; f as usize];
    for d in out.iter_mut() {
        *d = code % p;
        code /= p;
    }
    out
}

fn try_primitive(p: u32, f: u32, q: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let fu = f as usize;
    let mut exp = Vec::with_capacity((q - 1) as usize);
    let mut log = vec![u32::MAX; q as usize];
    // current power of X as a coefficient vector
    let mut cur = vec![0u32; fu];
    cur[0] = 1;
    if f == 1 {
        // X = -c_0 in F_p
        let g = (p - modulus[0]) % p;
        let mut x = 1u32;
        for i in 0..q - 1 {
            if log[x as usize] != u32::MAX {
                return None;
            }
            log[x as usize] = i;
            exp.push(x);
            x = x * g % p;
        }
        return (x == 1).then_some((exp, log));
    }
    for i in 0..q - 1 {
        let code = encode(&cur, p);
        if log[code as usize] != u32::MAX {
            return None;
        }
        log[code as usize] = i;
        exp.push(code);
        // multiply by X, reduce with X^f = -Σ c_j X^j
        let top = cur[fu - 1];
        for j in (1..fu).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..fu {
                cur[j] = (cur[j] + (p - modulus[j]) * top) % p;
            }
        }
    }
    (encode(&cur, p) == 1).then_some((exp, log))
}

fn encode(cs: &[u32], p: u32) -> u32 {
    cs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let k = ResidueField::new(5, 1);
        assert_eq!(k.size(), 5);
        assert_eq!(k.mul(2, 3), 1);
        assert_eq!(k.inv(2), Some(3));
        assert_eq!(k.neg(1), 4);
        assert_eq!(k.sqrt(4), Some(2));
        assert_eq!(k.sqrt(2), None);
        assert_eq!(k.pth_root(3), 3);
    }

    #[test]
    fn extension_field_is_a_field() {
        for &(p, f) in &[(3, 2), (5, 2), (7, 2), (3, 3), (2, 4)] {
            let k = ResidueField::new(p, f);
            for a in k.elements().skip(1) {
                let ai = k.inv(a).unwrap();
                assert_eq!(k.mul(a, ai), 1);
                assert_eq!(k.pow(k.pth_root(a), p as u64), a);
                assert_eq!(k.add(a, k.neg(a)), 0);
            }
        }
    }

    #[test]
    fn squares_in_quadratic_extension() {
        // every element of F_p is a square in F_{p^2}
        let k = ResidueField::new(7, 2);
        for a in 0..7 {
            let r = k.sqrt(a).unwrap();
            assert_eq!(k.mul(r, r), a);
        }
    }

    #[test]
    fn distributive_law() {
        let k = ResidueField::new(3, 3);
        for a in k.elements() {
            for b in k.elements().step_by(5) {
                for c in k.elements().step_by(7) {
                    assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                }
            }
        }
    }
}
