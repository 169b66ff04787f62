//! Dense univariate polynomials over a [`ResidueField`].

use alloc::vec;
use alloc::vec::Vec;

use super::field::{Fq, ResidueField};

/// Polynomial with ascending coefficients; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqPoly {
    coeffs: Vec<Fq>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn zero() -> Self {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Fq) -> Self {
        FqPoly::new(vec![c])
    }

    pub fn one() -> Self {
        FqPoly::constant(1)
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: Fq, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        FqPoly::new(v)
    }

    pub fn x() -> Self {
        FqPoly::monomial(1, 1)
    }

    /// `x - a`.
    pub fn linear(k: &ResidueField, a: Fq) -> Self {
        FqPoly::new(vec![k.neg(a), 1])
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, k: &ResidueField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        FqPoly::new((0..n).map(|i| k.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, k: &ResidueField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        FqPoly::new((0..n).map(|i| k.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, k: &ResidueField) -> Self {
        FqPoly::new(self.coeffs.iter().map(|&c| k.neg(c)).collect())
    }

    pub fn scale(&self, k: &ResidueField, c: Fq) -> Self {
        FqPoly::new(self.coeffs.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, k: &ResidueField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        FqPoly::new(out)
    }

    pub fn pow(&self, k: &ResidueField, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = FqPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(k, &base);
            }
        }
        acc
    }

    /// Shifts by `x^s`.
    pub fn shl(&self, s: usize) -> Self {
        if self.is_zero() {
            return FqPoly::zero();
        }
        let mut v = vec![0; s];
        v.extend_from_slice(&self.coeffs);
        FqPoly::new(v)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, k: &ResidueField, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = k.inv(d.lead()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (FqPoly::zero(), self.clone());
        }
        let mut qv = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = k.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            qv[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = k.sub(r[i - dd + j], k.mul(c, b));
            }
        }
        r.truncate(dd);
        (FqPoly::new(qv), FqPoly::new(r))
    }

    pub fn rem(&self, k: &ResidueField, d: &Self) -> Self {
        self.div_rem(k, d).1
    }

    pub fn monic(&self, k: &ResidueField) -> Self {
        if self.is_zero() {
            return FqPoly::zero();
        }
        self.scale(k, k.inv(self.lead()).unwrap())
    }

    /// Monic gcd (zero if both inputs vanish).
    pub fn gcd(&self, k: &ResidueField, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(k, &b);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// Extended gcd: returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn xgcd(&self, k: &ResidueField, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FqPoly::one(), FqPoly::zero());
        let (mut t0, mut t1) = (FqPoly::zero(), FqPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(k, &r1);
            let s2 = s0.sub(k, &q.mul(k, &s1));
            let t2 = t0.sub(k, &q.mul(k, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = k.inv(r0.lead()).unwrap();
        (r0.scale(k, li), s0.scale(k, li), t0.scale(k, li))
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, k: &ResidueField, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(k, m).xgcd(k, m);
        (g == FqPoly::one()).then(|| s.rem(k, m))
    }

    pub fn mul_mod(&self, k: &ResidueField, other: &Self, m: &Self) -> Self {
        self.mul(k, other).rem(k, m)
    }

    pub fn pow_mod(&self, k: &ResidueField, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(k, m);
        let mut acc = FqPoly::one().rem(k, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(k, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(k, &base, m);
            }
        }
        acc
    }

    pub fn derivative(&self, k: &ResidueField) -> Self {
        FqPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| k.mul(k.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, k: &ResidueField, x: Fq) -> Fq {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// `self(g(x))`.
    pub fn compose(&self, k: &ResidueField, g: &Self) -> Self {
        self.coeffs.iter().rev().fold(FqPoly::zero(), |acc, &c| {
            acc.mul(k, g).add(k, &FqPoly::constant(c))
        })
    }

    /// True iff every monomial with nonzero coefficient has exponent divisible by `p`.
    pub fn is_pth_power(&self, k: &ResidueField) -> bool {
        let p = k.p() as usize;
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || i % p == 0)
    }

    /// `p`-th root of a `p`-th power (see [`FqPoly::is_pth_power`]).
    pub fn pth_root(&self, k: &ResidueField) -> Option<Self> {
        if !self.is_pth_power(k) {
            return None;
        }
        let p = k.p() as usize;
        Some(FqPoly::new(
            self.coeffs
                .iter()
                .step_by(p)
                .map(|&c| k.pth_root(c))
                .collect(),
        ))
    }

    /// Roots in `F_q`, ascending by encoding, without multiplicity.
    pub fn roots(&self, k: &ResidueField) -> Vec<Fq> {
        if self.is_zero() {
            return Vec::new();
        }
        k.elements().filter(|&a| self.eval(k, a) == 0).collect()
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, k: &ResidueField, a: Fq) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = FqPoly::linear(k, a);
        let mut cur = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = cur.div_rem(k, &lin);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            cur = q;
        }
    }

    /// Factorization into monic irreducibles with multiplicities, sorted.
    ///
    /// Returns the leading coefficient separately. Panics on the zero polynomial.
    pub fn factor(&self, k: &ResidueField) -> (Fq, Vec<(FqPoly, usize)>) {
        assert!(!self.is_zero(), "cannot factor zero");
        let lead = self.lead();
        let mut out: Vec<(FqPoly, usize)> = Vec::new();
        for (sqf, mult) in squarefree(k, &self.monic(k)) {
            for (deg_part, d) in distinct_degree(k, &sqf) {
                for fac in equal_degree(k, &deg_part, d) {
                    out.push((fac, mult));
                }
            }
        }
        out.sort();
        // merge repeated factors that appeared through different squarefree parts
        let mut merged: Vec<(FqPoly, usize)> = Vec::new();
        for (f, m) in out {
            match merged.last_mut() {
                Some((g, n)) if *g == f => *n += m,
                _ => merged.push((f, m)),
            }
        }
        (lead, merged)
    }

    pub fn is_irreducible(&self, k: &ResidueField) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => {
                let (_, fs) = self.factor(k);
                fs.len() == 1 && fs[0].1 == 1
            }
        }
    }
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with
/// `f = Π g^m`, each `g` squarefree and pairwise coprime.
fn squarefree(k: &ResidueField, f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = k.p() as usize;
    let df = f.derivative(k);
    if df.is_zero() {
        let root = f.pth_root(k).unwrap();
        for (g, m) in squarefree(k, &root) {
            out.push((g, m * p));
        }
        return out;
    }
    // Yun-style loop with the characteristic-p correction
    let mut c = f.gcd(k, &df);
    let mut w = f.div_rem(k, &c).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(k, &c);
        let z = w.div_rem(k, &y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(k), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(k, &w).0;
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = c.monic(k).pth_root(k).expect("remaining cofactor is a p-th power");
        for (g, m) in squarefree(k, &root) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(k: &ResidueField, f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let q = k.size() as u128;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = FqPoly::x();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(k, q, &rest);
        let g = h.sub(k, &x).gcd(k, &rest);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), d));
            rest = rest.div_rem(k, &g).0;
            h = h.rem(k, &rest);
        }
    }
    if let Some(dr) = rest.degree() {
        if dr > 0 {
            out.push((rest.monic(k), dr));
        }
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting with deterministically enumerated
/// trial polynomials.
fn equal_degree(k: &ResidueField, f: &FqPoly, d: usize) -> Vec<FqPoly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.monic(k)];
    }
    let q = k.size() as u128;
    let qd = q.pow(d as u32);
    let mut trial: u64 = 0;
    loop {
        trial += 1;
        let a = trial_poly(k, trial, n);
        if a.is_constant() {
            continue;
        }
        let g0 = a.gcd(k, f);
        let splitter = if g0.degree().unwrap_or(0) > 0 && g0.degree() != f.degree() {
            g0
        } else if k.p() == 2 {
            // trace map a + a^2 + ... + a^(2^(fd-1))
            let mut t = a.rem(k, f);
            let mut acc = t.clone();
            for _ in 1..(k.degree() as usize * d) {
                t = t.mul_mod(k, &t, f);
                acc = acc.add(k, &t);
            }
            acc.gcd(k, f)
        } else {
            let b = a.pow_mod(k, (qd - 1) / 2, f);
            b.sub(k, &FqPoly::one()).gcd(k, f)
        };
        let sd = splitter.degree().unwrap_or(0);
        if sd > 0 && sd < n {
            let other = f.div_rem(k, &splitter).0;
            let mut out = equal_degree(k, &splitter, d);
            out.extend(equal_degree(k, &other, d));
            return out;
        }
    }
}

fn trial_poly(k: &ResidueField, mut code: u64, n: usize) -> FqPoly {
    let q = k.size() as u64;
    let mut cs = Vec::new();
    while code > 0 && cs.len() < n {
        cs.push((code % q) as u32);
        code /= q;
    }
    FqPoly::new(cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[u32]) -> FqPoly {
        FqPoly::new(cs.to_vec())
    }

    #[test]
    fn division_identity() {
        let k = ResidueField::new(5, 1);
        let a = poly(&[1, 2, 3, 4, 1]);
        let b = poly(&[2, 0, 1]);
        let (q, r) = a.div_rem(&k, &b);
        assert_eq!(q.mul(&k, &b).add(&k, &r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn factor_reassembles() {
        let k = ResidueField::new(3, 1);
        // (x^2+1)^2 (x+1)^3 x
        let a = poly(&[1, 0, 1]);
        let b = poly(&[1, 1]);
        let f = a.pow(&k, 2).mul(&k, &b.pow(&k, 3)).mul(&k, &FqPoly::x());
        let (lead, fs) = f.factor(&k);
        assert_eq!(lead, 1);
        let mut back = FqPoly::one();
        for (g, m) in &fs {
            assert!(g.is_irreducible(&k));
            back = back.mul(&k, &g.pow(&k, *m as u64));
        }
        assert_eq!(back, f);
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn factor_over_extension() {
        let k = ResidueField::new(7, 2);
        // x^2 + 1 splits over F_49
        let f = poly(&[1, 0, 1]);
        let (_, fs) = f.factor(&k);
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(g, m)| g.degree() == Some(1) && *m == 1));
    }

    #[test]
    fn factor_in_char_two() {
        let k = ResidueField::new(2, 1);
        // x^4 + x + 1 irreducible; times (x+1)^2
        let f = poly(&[1, 1, 0, 0, 1]).mul(&k, &poly(&[1, 0, 1]));
        let (_, fs) = f.factor(&k);
        assert_eq!(fs, vec![(poly(&[1, 1]), 2), (poly(&[1, 1, 0, 0, 1]), 1)]);
    }

    #[test]
    fn pth_powers() {
        let k = ResidueField::new(5, 1);
        assert!(poly(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]).is_pth_power(&k));
        assert!(!poly(&[0, 0, 0, 1]).is_pth_power(&k));
    }
}
