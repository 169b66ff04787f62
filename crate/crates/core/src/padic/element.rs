use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::tower::{vp, FieldTower};
use super::{PadicError, Valuation, Q};
use crate::residue::Fq;

/// An exactly known value `q·π^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTerm {
    pub q: BigRational,
    pub k: i64,
}

/// A finite-precision element `π^shift · body + O(π^prec)` of a [`FieldTower`].
///
/// The body is a unit (or zero when the element is indistinguishable from 0,
/// in which case `shift == prec`). Digits of the body at relative positions
/// `>= prec - shift` are kept at zero.
#[derive(Clone)]
pub struct PadicElement {
    tower: FieldTower,
    shift: i64,
    body: Vec<BigInt>,
    prec: i64,
    exact: Option<ExactTerm>,
}

impl PartialEq for PadicElement {
    /// Equality of the known digits at equal precision.
    fn eq(&self, other: &Self) -> bool {
        self.tower == other.tower
            && self.shift == other.shift
            && self.prec == other.prec
            && self.body == other.body
    }
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PadicElement {
    fn build(tower: &FieldTower, shift: i64, body: Vec<BigInt>, prec: i64, exact: Option<ExactTerm>) -> Self {
        let td = &tower.0;
        let cap = td.e as i64 * td.cap as i64;
        let limit = (prec - shift).min(cap);
        let mut out = match td.body_valuation(&body, limit) {
            None => PadicElement {
                tower: tower.clone(),
                shift: prec,
                body: td.zero_body(),
                prec,
                exact: None,
            },
            Some(v) => {
                let mut b = if v == 0 { body } else { td.body_shr(&body, v as u64) };
                td.body_truncate(&mut b, limit - v);
                PadicElement {
                    tower: tower.clone(),
                    shift: shift + v,
                    body: b,
                    prec,
                    exact: None,
                }
            }
        };
        out.exact = exact;
        if let Some(ex) = &out.exact {
            if ex.q.is_zero() {
                out.shift = out.prec;
            }
        }
        out
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// Absolute precision in `π`-digits.
    pub fn abs_precision(&self) -> i64 {
        self.prec
    }

    /// Absolute precision as a valuation.
    pub fn precision_valuation(&self) -> Q {
        Q::new(self.prec, self.tower.e() as i64)
    }

    pub fn exact_term(&self) -> Option<&ExactTerm> {
        self.exact.as_ref()
    }

    pub fn zero(tower: &FieldTower) -> Self {
        Self::from_rational(tower, &BigRational::zero())
    }

    pub fn one(tower: &FieldTower) -> Self {
        Self::from_int(tower, 1)
    }

    pub fn from_int(tower: &FieldTower, n: i64) -> Self {
        Self::from_rational(tower, &BigRational::from_integer(BigInt::from(n)))
    }

    /// `π`-adic expansion of a rational, flagged exact.
    pub fn from_rational(tower: &FieldTower, q: &BigRational) -> Self {
        let td = &tower.0;
        let e = td.e as i64;
        let rel = td.precision as i64;
        let exact = Some(ExactTerm { q: q.clone(), k: 0 });
        if q.is_zero() {
            let mut z = Self::build(tower, rel, td.zero_body(), rel, None);
            z.exact = exact;
            return z;
        }
        let (num, den) = (q.numer().clone(), q.denom().clone());
        let a = vp(&num, &td.bp) as i64 - vp(&den, &td.bp) as i64;
        let pa = num_traits::pow(td.bp.clone(), a.unsigned_abs() as usize);
        let (num, den) = if a >= 0 { (num / &pa, den) } else { (num, den / &pa) };
        let den_inv = mod_inverse(&den.mod_floor(&td.pk), &td.pk);
        let mut unit = (num * den_inv).mod_floor(&td.pk);
        // p^a = (-1)^a π^{ea}
        if a.rem_euclid(2) == 1 {
            unit = td.reduce(&-unit);
        }
        let mut body = td.zero_body();
        body[0] = unit;
        let shift = e * a;
        Self::build(tower, shift, body, shift + rel, exact)
    }

    pub fn from_ratio(tower: &FieldTower, n: i64, d: i64) -> Self {
        Self::from_rational(tower, &BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `π^k`, exact.
    pub fn pi_power(tower: &FieldTower, k: i64) -> Self {
        let td = &tower.0;
        Self::build(
            tower,
            k,
            td.one_body(),
            k + td.precision as i64,
            Some(ExactTerm {
                q: BigRational::one(),
                k,
            }),
        )
    }

    /// `τ = (-p)^{p/(p-1)} = π^{ep/(p-1)}`.
    pub fn tau(tower: &FieldTower) -> Result<Self, PadicError> {
        let k = tower.pi_exponent(tower.tau_valuation())?;
        Ok(Self::pi_power(tower, k))
    }

    /// The generator of the unramified part, `ζ_{q-1}` up to higher-order
    /// terms. Not a Teichmüller lift.
    pub fn from_residue(tower: &FieldTower, a: Fq) -> Self {
        let td = &tower.0;
        let rel = td.precision as i64;
        Self::build(tower, 0, td.body_from_residue(a), rel, None)
    }

    /// A primitive `p`-th root of unity `ζ = 1 + π_0·u` with `u ≡ 1`, where
    /// `π_0 = π^{e/(p-1)}`; available when `(p-1) | e`.
    pub fn zeta(tower: &FieldTower) -> Result<Self, PadicError> {
        let p = tower.p() as i64;
        let step = tower.pi_exponent(Q::new(1, p - 1))?;
        let pi0 = Self::pi_power(tower, step);
        // Φ_p(1 + π_0 u)/p = 1 - u^{p-1} + Σ_{2≤i<p} C(p,i)/p·π_0^{i-1} u^{i-1}
        let mut cs = alloc::vec![Self::zero(tower); p as usize];
        cs[0] = Self::one(tower);
        cs[p as usize - 1] = Self::from_int(tower, -1);
        let mut binom = BigInt::from(p);
        for i in 2..p {
            binom = binom * BigInt::from(p - i + 1) / BigInt::from(i);
            let c = Self::from_rational(tower, &BigRational::new(binom.clone(), BigInt::from(p)));
            let term = c.mul(&pi0.pow(i - 1)?);
            cs[i as usize - 1] = cs[i as usize - 1].add(&term);
        }
        let h = super::poly::PadicPoly::new(tower, cs);
        let u = h.newton_root(&Self::one(tower))?;
        Ok(Self::one(tower).add(&pi0.mul(&u)))
    }

    /// Copies a base-field value into a larger tower with `π_old = π_new^m`.
    pub fn embed(&self, target: &FieldTower) -> Result<Self, PadicError> {
        if *target == self.tower {
            return Ok(self.clone());
        }
        let (src, dst) = (&self.tower.0, &target.0);
        if src.p != dst.p || dst.e % src.e != 0 || (src.f != 1 && src.f != dst.f) {
            return Err(PadicError::TowerMismatch);
        }
        let m = (dst.e / src.e) as i64;
        if let Some(ex) = &self.exact {
            let base = Self::from_rational(target, &ex.q);
            if ex.q.is_zero() {
                return Ok(base);
            }
            return Ok(base.mul(&Self::pi_power(target, ex.k * m)));
        }
        let mut body = dst.zero_body();
        for i in 0..src.e as usize {
            for j in 0..src.f as usize {
                let c = &self.body[i * src.f as usize + j];
                body[(i * m as usize) * dst.f as usize + j] = dst.reduce(c);
            }
        }
        let prec = self.prec * m;
        let shift = if self.is_indistinguishable_from_zero() { prec } else { self.shift * m };
        Ok(Self::build(target, shift, body, prec, None))
    }

    /// Re-expands at a new precision; exact elements lose nothing.
    pub fn with_tower_precision(&self, target: &FieldTower) -> Result<Self, PadicError> {
        self.embed(target)
    }

    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.body.iter().all(Zero::is_zero)
    }

    /// True for the exact zero.
    pub fn is_exact_zero(&self) -> bool {
        self.exact.as_ref().is_some_and(|ex| ex.q.is_zero())
    }

    /// Valuation, `Infinity` only for the exact zero.
    pub fn valuation(&self) -> Result<Valuation, PadicError> {
        if let Some(ex) = &self.exact {
            if ex.q.is_zero() {
                return Ok(Valuation::Infinity);
            }
            let td = &self.tower.0;
            let a = vp(ex.q.numer(), &td.bp) as i64 - vp(ex.q.denom(), &td.bp) as i64;
            return Ok(Valuation::Finite(
                Q::from_integer(a) + Q::new(ex.k, td.e as i64),
            ));
        }
        if self.is_indistinguishable_from_zero() {
            return Err(PadicError::InsufficientPrecision);
        }
        Ok(Valuation::Finite(Q::new(self.shift, self.tower.e() as i64)))
    }

    /// Valuation of a nonzero element.
    pub fn val(&self) -> Result<Q, PadicError> {
        match self.valuation()? {
            Valuation::Finite(v) => Ok(v),
            Valuation::Infinity => Err(PadicError::InsufficientPrecision),
        }
    }

    /// Valuation in `π`-digits of a nonzero element.
    pub fn ord(&self) -> Result<i64, PadicError> {
        let v = self.val()? * Q::from_integer(self.tower.e() as i64);
        Ok(v.to_integer())
    }

    /// A lower bound for the valuation, valid also for zero.
    pub fn valuation_lower_bound(&self) -> Valuation {
        match self.valuation() {
            Ok(v) => v,
            Err(_) => Valuation::Finite(self.precision_valuation()),
        }
    }

    pub fn residue(&self) -> Result<Fq, PadicError> {
        if self.is_exact_zero() {
            return Ok(0);
        }
        if self.is_indistinguishable_from_zero() {
            return if self.prec > 0 {
                Ok(0)
            } else {
                Err(PadicError::InsufficientPrecision)
            };
        }
        match self.shift.cmp(&0) {
            core::cmp::Ordering::Less => Err(PadicError::NegativeValuation),
            core::cmp::Ordering::Greater => Ok(0),
            core::cmp::Ordering::Equal => Ok(self.tower.0.body_residue(&self.body)),
        }
    }

    /// Residue of the unit part `x·π^{-ord(x)}`.
    pub fn unit_residue(&self) -> Result<Fq, PadicError> {
        self.val()?;
        Ok(self.tower.0.body_residue(&self.body))
    }

    fn check_tower(&self, other: &Self) {
        assert!(self.tower == other.tower, "elements from different towers");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_tower(other);
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let td = &self.tower.0;
        let prec = self.prec.min(other.prec);
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => add_exact(a, b, td.e as i64, &td.bp),
            _ => None,
        };
        let s = self.shift.min(other.shift);
        let a = if self.shift > s { td.body_shl(&self.body, (self.shift - s) as u64) } else { self.body.clone() };
        let b = if other.shift > s { td.body_shl(&other.body, (other.shift - s) as u64) } else { other.body.clone() };
        Self::build(&self.tower, s.min(prec), if s > prec { td.zero_body() } else { td.body_add(&a, &b) }, prec, exact)
    }

    pub fn neg(&self) -> Self {
        let td = &self.tower.0;
        let exact = self.exact.as_ref().map(|ex| ExactTerm { q: -ex.q.clone(), k: ex.k });
        Self::build(&self.tower, self.shift, td.body_neg(&self.body), self.prec, exact)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_tower(other);
        let td = &self.tower.0;
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(ExactTerm { q: &a.q * &b.q, k: a.k + b.k }),
            _ => None,
        };
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.tower);
        }
        let prec = (self.prec + other.shift).min(other.prec + self.shift);
        let shift = self.shift + other.shift;
        Self::build(&self.tower, shift, td.body_mul(&self.body, &other.body), prec, exact)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Multiplies by `π^k` (any sign), exactly.
    pub fn mul_pi_power(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.shift += k;
        out.prec += k;
        if let Some(ex) = &mut out.exact {
            ex.k += k;
        }
        out
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.is_indistinguishable_from_zero() || self.is_exact_zero() {
            return Err(PadicError::DivisionByIndistinguishableZero);
        }
        let td = &self.tower.0;
        let exact = self.exact.as_ref().map(|ex| ExactTerm { q: ex.q.recip(), k: -ex.k });
        let rel = self.prec - self.shift;
        let body = td.body_inv(&self.body);
        Ok(Self::build(&self.tower, -self.shift, body, rel - self.shift, exact))
    }

    pub fn div(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self, PadicError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut base = self.clone();
        let mut acc = Self::one(&self.tower);
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        Ok(acc)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.mul(&Self::from_int(&self.tower, n))
    }

    /// Square root on the branch whose unit part has the least residue.
    pub fn sqrt(&self) -> Result<Self, PadicError> {
        let td = &self.tower.0;
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let v = self.ord()?;
        if v.rem_euclid(2) != 0 {
            return Err(PadicError::NeedsExtension { e: 2 * td.e, f: td.f });
        }
        if td.p == 2 {
            return Err(PadicError::Unsupported("square roots in residue characteristic 2"));
        }
        let unit = self.mul_pi_power(-v);
        let r = unit.residue()?;
        let root = td.field.sqrt(r).ok_or(PadicError::NeedsExtension { e: td.e, f: 2 * td.f })?;
        let y = Self::from_residue(&self.tower, root);
        let y = newton_root(&unit, y, 2)?;
        let exact = self.exact.as_ref().and_then(|ex| exact_sqrt(ex, td.e as i64, &td.bp));
        let mut out = y.mul_pi_power(v / 2);
        // branch of the exact root may differ from the least-residue branch
        if let Some(ex) = exact {
            let cand = Self::from_rational(&self.tower, &ex.q).mul_pi_power(ex.k);
            if cand == out {
                out.exact = Some(ex);
            } else if cand.neg() == out {
                out.exact = Some(ExactTerm { q: -ex.q, k: ex.k });
            }
        }
        Ok(out)
    }

    /// `n`-th root of a unit for `n` prime to `p`, Hensel-lifted from the
    /// least residue root.
    pub fn nth_unit_root_lift(&self, n: u32) -> Result<Self, PadicError> {
        let td = &self.tower.0;
        if n.is_multiple_of(td.p) || n == 0 {
            return Err(PadicError::Unsupported("root order divisible by p"));
        }
        if self.ord()? != 0 {
            return Err(PadicError::Unsupported("nth_unit_root_lift needs a unit"));
        }
        let r = self.residue()?;
        let root = td
            .field
            .elements()
            .find(|&a| td.field.pow(a, n as u64) == r)
            .ok_or(PadicError::NeedsExtension { e: td.e, f: td.f * n })?;
        newton_root(self, Self::from_residue(&self.tower, root), n)
    }

    /// Renders the unit part's leading digits as `π^k·(u)`; diagnostic only.
    pub fn approx_string(&self) -> alloc::string::String {
        use alloc::format;
        if self.is_indistinguishable_from_zero() {
            return format!("O(pi^{})", self.prec);
        }
        let td = &self.tower.0;
        let r = td.body_residue(&self.body);
        format!("pi^{}*[{}...] + O(pi^{})", self.shift, r, self.prec)
    }

    pub(crate) fn raw_shift(&self) -> i64 {
        self.shift
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(ex) = &self.exact {
            if ex.q.is_zero() {
                return write!(f, "0");
            }
            return write!(f, "{}*pi^{}", ex.q, ex.k);
        }
        write!(f, "{}", self.approx_string())
    }
}

/// Newton iteration for `y^n = x` from a residue-level approximation.
fn newton_root(x: &PadicElement, mut y: PadicElement, n: u32) -> Result<PadicElement, PadicError> {
    let nn = PadicElement::from_int(x.tower(), n as i64);
    for _ in 0..128 {
        let yn1 = y.pow(n as i64 - 1)?;
        let fy = yn1.mul(&y).sub(x);
        if fy.is_indistinguishable_from_zero() {
            break;
        }
        let next = y.sub(&fy.div(&nn.mul(&yn1))?);
        if next == y {
            break;
        }
        y = next;
    }
    // result precision is that of x
    let prec = x.abs_precision() - x.raw_shift();
    let mut out = y;
    if out.prec > prec {
        out = PadicElement::build(&out.tower, out.shift, out.body.clone(), prec + out.shift, None);
    }
    Ok(out)
}

fn add_exact(a: &ExactTerm, b: &ExactTerm, e: i64, p: &BigInt) -> Option<ExactTerm> {
    if a.q.is_zero() {
        return Some(b.clone());
    }
    if b.q.is_zero() {
        return Some(a.clone());
    }
    if (a.k - b.k).rem_euclid(e) != 0 {
        return None;
    }
    let (hi, lo) = if a.k >= b.k { (a, b) } else { (b, a) };
    let m = (hi.k - lo.k) / e;
    let scale = num_traits::pow(-p.clone(), m as usize);
    Some(ExactTerm {
        q: &hi.q * BigRational::from_integer(scale) + &lo.q,
        k: lo.k,
    })
}

/// Exact square root of `q·π^k` when `q` is a rational square and `k` even,
/// absorbing `π^e = -p` where that helps.
fn exact_sqrt(ex: &ExactTerm, e: i64, p: &BigInt) -> Option<ExactTerm> {
    let try_one = |q: &BigRational, k: i64| -> Option<ExactTerm> {
        if k.rem_euclid(2) != 0 || q.is_negative() {
            return None;
        }
        let n = isqrt(q.numer())?;
        let d = isqrt(q.denom())?;
        Some(ExactTerm { q: BigRational::new(n, d), k: k / 2 })
    };
    try_one(&ex.q, ex.k).or_else(|| {
        // q π^k = (-q/p) π^{k+e}
        let q2 = -&ex.q / BigRational::from_integer(p.clone());
        try_one(&q2, ex.k + e)
    })
}

fn isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// Numerical value of a rational valuation, for diagnostics.
pub fn q_to_f64(q: Q) -> f64 {
    q.numer().to_f64().unwrap_or(0.0) / q.denom().to_f64().unwrap_or(1.0)
}
