use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{PadicError, Q};
use crate::residue::field::is_prime;
use crate::residue::{Fq, ResidueField};

/// Extra `p`-adic digits carried beyond the requested precision.
const GUARD_DIGITS: u32 = 2;

#[derive(Debug)]
pub(crate) struct TowerData {
    pub(crate) p: u32,
    pub(crate) e: u32,
    pub(crate) f: u32,
    pub(crate) precision: u32,
    /// Number of `p`-adic digits carried per coefficient.
    pub(crate) cap: u32,
    pub(crate) pk: BigInt,
    pub(crate) bp: BigInt,
    /// Monic lift of the residue field modulus, length `f + 1`.
    pub(crate) unram: Vec<BigInt>,
    pub(crate) field: ResidueField,
}

/// The ring `W(F_{p^f})[π]` with `π^e = -p`, carried to a fixed number of
/// `π`-digits.
///
/// Valuations are normalized by `v(p) = 1`, so `v(π) = 1/e`.
#[derive(Clone, Debug)]
pub struct FieldTower(pub(crate) Arc<TowerData>);

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.e == other.0.e
                && self.0.f == other.0.f
                && self.0.precision == other.0.precision)
    }
}
impl Eq for FieldTower {}

/// Default relative precision, in units of `v(p)`.
pub const DEFAULT_PRECISION_UNITS: u32 = 50;

impl FieldTower {
    /// Builds the tower; `precision` counts `π`-digits.
    pub fn new(p: u32, e: u32, f: u32, precision: u32) -> Result<Self, PadicError> {
        if p < 2 || !is_prime(p as u64) {
            return Err(PadicError::InvalidTower("p must be a prime"));
        }
        if e == 0 {
            return Err(PadicError::InvalidTower("ramification index must be positive"));
        }
        if f == 0 {
            return Err(PadicError::InvalidTower("residue degree must be positive"));
        }
        if precision == 0 {
            return Err(PadicError::InvalidTower("precision must be positive"));
        }
        let field = ResidueField::new(p, f);
        let cap = precision.div_ceil(e) + GUARD_DIGITS;
        let bp = BigInt::from(p);
        let pk = num_traits::pow(bp.clone(), cap as usize);
        let unram = field.modulus().iter().map(|&c| BigInt::from(c)).collect();
        Ok(FieldTower(Arc::new(TowerData {
            p,
            e,
            f,
            precision,
            cap,
            pk,
            bp,
            unram,
            field,
        })))
    }

    /// Tower with the default precision of `50·e` digits.
    pub fn with_default_precision(p: u32, e: u32, f: u32) -> Result<Self, PadicError> {
        Self::new(p, e, f, DEFAULT_PRECISION_UNITS * e.max(1))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn f(&self) -> u32 {
        self.0.f
    }

    /// Relative precision in `π`-digits.
    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.0.field
    }

    /// `v(π) = 1/e`.
    pub fn uniformizer_valuation(&self) -> Q {
        Q::new(1, self.0.e as i64)
    }

    /// `v(τ) = p/(p-1)` for `τ = (-p)^{p/(p-1)}`.
    pub fn tau_valuation(&self) -> Q {
        Q::new(self.0.p as i64, self.0.p as i64 - 1)
    }

    /// Ramification index of the base ring `Z_p[(-p)^{1/(p-1)}]`.
    pub fn base_e(&self) -> u32 {
        (self.0.p - 1).max(1)
    }

    /// The same tower with ramification multiplied by `em` and residue degree
    /// set to `f`, keeping the relative precision in units of `v(p)`.
    pub fn enlarged(&self, em: u32, f: u32) -> Result<Self, PadicError> {
        let units = self.0.precision.div_ceil(self.0.e);
        let e = self.0.e * em;
        FieldTower::new(self.0.p, e, f, units * e)
    }

    /// Same tower at `factor` times the precision.
    pub fn with_precision_factor(&self, factor: u32) -> Result<Self, PadicError> {
        FieldTower::new(self.0.p, self.0.e, self.0.f, self.0.precision * factor)
    }

    /// Whether a valuation lies in the value group `(1/e)Z`.
    pub fn in_value_group(&self, v: Q) -> bool {
        (v * Q::from_integer(self.0.e as i64)).is_integer()
    }

    /// Converts a valuation to a `π`-exponent, or reports the ramification
    /// needed to express it.
    pub fn pi_exponent(&self, v: Q) -> Result<i64, PadicError> {
        let scaled = v * Q::from_integer(self.0.e as i64);
        if scaled.is_integer() {
            Ok(scaled.to_integer())
        } else {
            let need = num_integer::lcm(self.0.e as i64, *v.denom()) as u32;
            Err(PadicError::NeedsExtension {
                e: need,
                f: self.0.f,
            })
        }
    }
}

// Body-level arithmetic. A body is a flat vector of `e·f` integers in
// `[0, p^cap)`, the entry `i·f + j` holding the coefficient of `π^i X^j`.
impl TowerData {
    pub(crate) fn len(&self) -> usize {
        (self.e * self.f) as usize
    }

    pub(crate) fn zero_body(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.len()]
    }

    pub(crate) fn one_body(&self) -> Vec<BigInt> {
        let mut b = self.zero_body();
        b[0] = BigInt::one();
        b
    }

    pub(crate) fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.pk)
    }

    /// Product in `W/p^cap`, elements given as `f` coefficients.
    fn zq_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let f = self.f as usize;
        if f == 1 {
            return vec![(&a[0] * &b[0]) % &self.pk];
        }
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    prod[i + j] += ai * bj;
                }
            }
        }
        // X^f = -Σ_{j<f} m_j X^j
        for d in (f..2 * f - 1).rev() {
            let top = core::mem::take(&mut prod[d]);
            if top.is_zero() {
                continue;
            }
            for j in 0..f {
                prod[d - f + j] -= &top * &self.unram[j];
            }
        }
        prod.truncate(f);
        prod.iter().map(|c| self.reduce(c)).collect()
    }

    pub(crate) fn body_mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let (e, f) = (self.e as usize, self.f as usize);
        let mut acc = vec![BigInt::zero(); 2 * e * f];
        for i in 0..e {
            let xi = &x[i * f..(i + 1) * f];
            if xi.iter().all(Zero::is_zero) {
                continue;
            }
            for j in 0..e {
                let yj = &y[j * f..(j + 1) * f];
                if yj.iter().all(Zero::is_zero) {
                    continue;
                }
                let prod = self.zq_mul(xi, yj);
                for (t, c) in prod.into_iter().enumerate() {
                    acc[(i + j) * f + t] += c;
                }
            }
        }
        // π^{e+i} = -p π^i
        for idx in (e * f..2 * e * f).rev() {
            let top = core::mem::take(&mut acc[idx]);
            if !top.is_zero() {
                acc[idx - e * f] -= top * &self.bp;
            }
        }
        acc.truncate(e * f);
        acc.iter().map(|c| self.reduce(c)).collect()
    }

    pub(crate) fn body_add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        x.iter().zip(y).map(|(a, b)| self.reduce(&(a + b))).collect()
    }

    pub(crate) fn body_neg(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter().map(|a| self.reduce(&-a)).collect()
    }

    /// Multiplies by `π^k`, `k >= 0`, modulo `p^cap`.
    pub(crate) fn body_shl(&self, x: &[BigInt], k: u64) -> Vec<BigInt> {
        let (e, f) = (self.e as u64, self.f as usize);
        if k >= e * self.cap as u64 {
            return self.zero_body();
        }
        let wraps = k / e;
        let r = (k % e) as usize;
        let mut out = self.zero_body();
        for i in 0..e as usize {
            let (target, extra) = if i + r >= e as usize {
                (i + r - e as usize, 1)
            } else {
                (i + r, 0)
            };
            let factor = num_traits::pow(-self.bp.clone(), (wraps + extra) as usize);
            for j in 0..f {
                out[target * f + j] = self.reduce(&(&x[i * f + j] * &factor));
            }
        }
        out
    }

    /// Divides by `π^k` assuming the body is divisible by it. Digits that
    /// become unknown are set to zero.
    pub(crate) fn body_shr(&self, x: &[BigInt], k: u64) -> Vec<BigInt> {
        let (e, f) = (self.e as u64, self.f as usize);
        let wraps = k / e;
        let r = (k % e) as usize;
        let mut out = self.zero_body();
        for i in 0..e as usize {
            // coefficient at π^i moves to π^{i - r}, borrowing one π^e = -p if needed
            let (target, extra) = if i >= r { (i - r, 0) } else { (i + e as usize - r, 1) };
            let divisor = num_traits::pow(self.bp.clone(), (wraps + extra) as usize);
            let sign = if (wraps + extra) % 2 == 1 { -1 } else { 1 };
            for j in 0..f {
                let c = &x[i * f + j];
                if c.is_zero() {
                    continue;
                }
                let (q, _r) = c.div_rem(&divisor);
                debug_assert!(_r.is_zero());
                out[target * f + j] = self.reduce(&(q * sign));
            }
        }
        out
    }

    /// `π`-adic valuation of a body, ignoring digits at positions `>= limit`.
    pub(crate) fn body_valuation(&self, x: &[BigInt], limit: i64) -> Option<i64> {
        let (e, f) = (self.e as i64, self.f as usize);
        let mut best: Option<i64> = None;
        for i in 0..e as usize {
            for j in 0..f {
                let c = &x[i * f + j];
                if c.is_zero() {
                    continue;
                }
                let t = vp(c, &self.bp) as i64;
                let pos = e * t + i as i64;
                if pos < limit && best.is_none_or(|b| pos < b) {
                    best = Some(pos);
                }
            }
        }
        best
    }

    /// Zeroes every digit at position `>= limit`.
    pub(crate) fn body_truncate(&self, x: &mut [BigInt], limit: i64) {
        let (e, f) = (self.e as i64, self.f as usize);
        for i in 0..e as usize {
            let digits = if limit <= i as i64 {
                0
            } else {
                (limit - i as i64 + e - 1) / e
            };
            if digits >= self.cap as i64 {
                continue;
            }
            let m = num_traits::pow(self.bp.clone(), digits as usize);
            for j in 0..f {
                let c = &mut x[i * f + j];
                *c = c.mod_floor(&m);
            }
        }
    }

    pub(crate) fn body_residue(&self, x: &[BigInt]) -> Fq {
        let ds: Vec<u32> = (0..self.f as usize)
            .map(|j| {
                let d = x[j].mod_floor(&self.bp);
                d.iter_u32_digits().next().unwrap_or(0)
            })
            .collect();
        self.field.from_digits(&ds)
    }

    pub(crate) fn body_from_residue(&self, a: Fq) -> Vec<BigInt> {
        let mut b = self.zero_body();
        for (j, d) in self.field.to_digits(a).into_iter().enumerate() {
            b[j] = BigInt::from(d);
        }
        b
    }

    /// Inverse of a unit body (residue nonzero) by Newton iteration.
    pub(crate) fn body_inv(&self, x: &[BigInt]) -> Vec<BigInt> {
        let r = self.body_residue(x);
        let ri = self.field.inv(r).expect("unit body");
        let mut y = self.body_from_residue(ri);
        let total = self.e as u64 * self.cap as u64;
        let mut known = 1u64;
        let mut two = self.zero_body();
        two[0] = BigInt::from(2);
        while known < total {
            let xy = self.body_mul(x, &y);
            let corr = self.body_add(&two, &self.body_neg(&xy));
            y = self.body_mul(&y, &corr);
            known *= 2;
        }
        y
    }
}

/// `p`-adic valuation of a nonzero integer.
pub(crate) fn vp(c: &BigInt, p: &BigInt) -> u32 {
    let mut c = c.abs();
    let mut t = 0;
    loop {
        let (q, r) = c.div_rem(p);
        if !r.is_zero() {
            return t;
        }
        c = q;
        t += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldTower::new(2, 0, 1, 50).is_err());
        assert!(FieldTower::new(1, 1, 1, 50).is_err());
        assert!(FieldTower::new(4, 1, 1, 50).is_err());
        assert!(FieldTower::new(5, 4, 1, 0).is_err());
    }

    #[test]
    fn value_group() {
        let t = FieldTower::new(5, 4, 1, 50).unwrap();
        assert_eq!(t.uniformizer_valuation(), Q::new(1, 4));
        assert_eq!(t.pi_exponent(Q::new(5, 4)).unwrap(), 5);
        assert_eq!(
            t.pi_exponent(Q::new(5, 8)),
            Err(PadicError::NeedsExtension { e: 8, f: 1 })
        );
        assert_eq!(t.residue_field().size(), 5);
    }
}
