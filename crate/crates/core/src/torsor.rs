//! Special fibers of `z^p = f(x)` models: the split / Artin–Schreier /
//! inseparable trichotomy measured by `w = v(h^p - f)` against `v(τ)`, and
//! the blow-up charts `x_1 = b/(x_0 - d)` that feed it.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::padic::{FieldTower, PadicElement, PadicError, PadicPoly, Valuation, Q};
use crate::residue::{as_reduce, AsCurve, FqPoly, InsepCurve, ResidueRationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsorError {
    /// `f` is (indistinguishable from) an exact `p`-th power, or not integral.
    #[error("degenerate model: {0}")]
    DegenerateModel(&'static str),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Coefficients of `f(d + b·t)` in `t`, by synthetic Taylor shift. No
/// factorial is ever divided out.
pub fn taylor_shift(f: &PadicPoly, d: &PadicElement, b: &PadicElement) -> PadicPoly {
    let mut c: Vec<PadicElement> = f.coeffs().to_vec();
    let n = c.len();
    if n == 0 {
        return f.clone();
    }
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let t = d.mul(&c[j + 1]);
            c[j] = c[j].add(&t);
        }
    }
    let mut bp = PadicElement::one(f.tower());
    for ci in c.iter_mut() {
        *ci = ci.mul(&bp);
        bp = bp.mul(b);
    }
    PadicPoly::new(f.tower(), c)
}

/// `N = p·⌈n/p⌉`.
pub fn chart_degree(n: usize, p: u32) -> usize {
    let p = p as usize;
    n.div_ceil(p) * p
}

/// The chart `x_1 = b/(x_0 - d)` of `z^p = f(x_0)`:
/// `z_1^p = Σ_i b^i f^{(i)}(d)/(i!·f(d)) · x_1^{N-i}`.
#[derive(Clone, Debug)]
pub struct BlowupChart {
    pub center: PadicElement,
    pub radius: PadicElement,
    pub coordinate: String,
    pub poly: PadicPoly,
    pub degree: usize,
}

impl BlowupChart {
    pub fn new(
        f: &PadicPoly,
        d: &PadicElement,
        b: &PadicElement,
        degree: usize,
        coordinate: &str,
    ) -> Result<Self, PadicError> {
        let poly = chart_transform(f, d, b, degree)?;
        Ok(BlowupChart {
            center: d.clone(),
            radius: b.clone(),
            coordinate: String::from(coordinate),
            poly,
            degree,
        })
    }
}

/// `x^N·f(d + b/x)/f(d)`, monic of degree `N` when `N ≥ deg f`.
pub fn chart_transform(
    f: &PadicPoly,
    d: &PadicElement,
    b: &PadicElement,
    degree: usize,
) -> Result<PadicPoly, PadicError> {
    let ts = taylor_shift(f, d, b);
    let fd = ts.coeff(0);
    if fd.is_indistinguishable_from_zero() {
        return Err(PadicError::DivisionByIndistinguishableZero);
    }
    let inv = fd.inv()?;
    let t = f.tower();
    let mut cs = vec![PadicElement::zero(t); degree + 1];
    for (i, c) in ts.coeffs().iter().enumerate() {
        if i > degree {
            if !c.is_exact_zero() {
                return Err(PadicError::Unsupported("chart degree below polynomial degree"));
            }
            continue;
        }
        cs[degree - i] = if i == 0 { PadicElement::one(t) } else { c.mul(&inv) };
    }
    Ok(PadicPoly::new(t, cs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsorCase {
    /// `w > v(τ)`: `p` copies of the line.
    Split,
    /// `w = v(τ)`: an irreducible Artin–Schreier cover.
    ArtinSchreier,
    /// `w < v(τ)`: purely inseparable.
    Inseparable,
    /// The given `h` does not certify a case.
    Undecided,
}

impl TorsorCase {
    pub fn name(&self) -> &'static str {
        match self {
            TorsorCase::Split => "split",
            TorsorCase::ArtinSchreier => "artin-schreier",
            TorsorCase::Inseparable => "inseparable",
            TorsorCase::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
pub enum TorsorPayload {
    None,
    ArtinSchreier(AsCurve),
    Inseparable(InsepCurve),
}

#[derive(Clone, Debug)]
pub struct TorsorOutcome {
    pub case: TorsorCase,
    /// `v(h^p - f)`, or a lower bound when only that is known (`Split`).
    pub w: Valuation,
    pub h: PadicPoly,
    pub payload: TorsorPayload,
}

fn residue_of_scaled(g: &PadicPoly, k: i64) -> Result<FqPoly, PadicError> {
    let scaled = PadicPoly::new(
        g.tower(),
        g.coeffs().iter().map(|c| c.mul_pi_power(-k)).collect(),
    );
    scaled.residue()
}

/// Decides the special fiber of `z^p = f` using the given `h`. `f` need not
/// be monic, but its coefficients must be integral.
pub fn torsor_case(f: &PadicPoly, h: &PadicPoly) -> Result<TorsorOutcome, TorsorError> {
    let t = f.tower();
    let p = t.p();
    let vtau = t.tau_valuation();
    if let Ok(Valuation::Finite(v)) = f.gauss_valuation() {
        if v < Q::zero() {
            return Err(TorsorError::DegenerateModel("f is not integral"));
        }
    }
    let diff = h.pow(p).sub(f);
    let out = |case, w, payload| TorsorOutcome {
        case,
        w,
        h: h.clone(),
        payload,
    };
    let w = match diff.gauss_valuation() {
        Ok(Valuation::Infinity) => return Err(TorsorError::DegenerateModel("f is a p-th power")),
        Ok(Valuation::Finite(w)) => w,
        Err(_) => {
            return match diff.gauss_valuation_lower_bound() {
                Valuation::Finite(lb) if lb > vtau => Ok(out(TorsorCase::Split, Valuation::Finite(lb), TorsorPayload::None)),
                _ => Err(PadicError::InsufficientPrecision.into()),
            };
        }
    };
    let k = t.pi_exponent(w)?;
    let field = t.residue_field();
    if w > vtau {
        return Ok(out(TorsorCase::Split, Valuation::Finite(w), TorsorPayload::None));
    }
    let r = residue_of_scaled(&diff, k)?;
    if w == vtau {
        let hbar = h.residue()?;
        if hbar.is_zero() {
            return Ok(out(TorsorCase::Undecided, Valuation::Finite(w), TorsorPayload::None));
        }
        let u = ResidueRationalFunction::new(field, r, hbar.pow(field, p as u64));
        return Ok(match AsCurve::reduce(&u) {
            Ok(c) => out(TorsorCase::ArtinSchreier, Valuation::Finite(w), TorsorPayload::ArtinSchreier(c)),
            Err(_) => out(TorsorCase::Undecided, Valuation::Finite(w), TorsorPayload::None),
        });
    }
    Ok(match InsepCurve::new(field, r) {
        Ok(c) => out(TorsorCase::Inseparable, Valuation::Finite(w), TorsorPayload::Inseparable(c)),
        Err(_) => out(TorsorCase::Undecided, Valuation::Finite(w), TorsorPayload::None),
    })
}

/// Runs [`torsor_case`] and improves `h` while the outcome is undecided:
///
/// - if `w < v(τ)` and the residue is `S̄^p`, `h ↦ h - π^{k/p}·S`;
/// - if `w = v(τ)` and `u = ℘(W) + c` is reducible, `h ↦ h - π_0·(W + a)·h`
///   with `℘(a) = c`, which kills the `τ`-term since `p·π_0 = -τ`.
///
/// Reports `NeedsExtension` when `k/p` is not an integer or `a` is missing.
pub fn torsor_case_improving(f: &PadicPoly, h: &PadicPoly) -> Result<TorsorOutcome, TorsorError> {
    let t = f.tower();
    let p = t.p();
    let field = t.residue_field();
    let vtau = t.tau_valuation();
    let mut h = h.clone();
    for _ in 0..(4 * t.precision() as usize + 8) {
        let o = torsor_case(f, &h)?;
        if o.case != TorsorCase::Undecided {
            return Ok(o);
        }
        let w = match o.w {
            Valuation::Finite(w) if w <= vtau => w,
            _ => return Ok(o),
        };
        let k = t.pi_exponent(w)?;
        let diff = h.pow(p).sub(f);
        let r = residue_of_scaled(&diff, k)?;
        if w < vtau {
            if k % p as i64 != 0 {
                return Err(PadicError::NeedsExtension { e: t.e() * p, f: t.f() }.into());
            }
            let s = r
                .pth_root(field)
                .ok_or(PadicError::Unsupported("residue is not a p-th power"))?;
            let delta = PadicPoly::lift(t, &s).scale(&PadicElement::pi_power(t, k / p as i64));
            h = h.sub(&delta);
            continue;
        }
        let hbar = h.residue()?;
        if hbar.is_zero() {
            return Ok(o);
        }
        let red = as_reduce(&ResidueRationalFunction::new(field, r, hbar.pow(field, p as u64)));
        if !red.reduced.is_zero() {
            return Ok(o);
        }
        let a = field
            .elements()
            .find(|&a| field.sub(field.pow(a, p as u64), a) == red.constant)
            .ok_or(PadicError::NeedsExtension { e: t.e(), f: t.f() * p })?;
        let corr = red
            .witness
            .add(&ResidueRationalFunction::constant(field, a))
            .mul(&ResidueRationalFunction::from_poly(field, hbar));
        if !corr.den().is_constant() {
            return Ok(o);
        }
        let scale = field.inv(corr.den().coeff(0)).unwrap();
        let delta = PadicPoly::lift(t, &corr.num().scale(field, scale));
        let pi0 = PadicElement::pi_power(t, (t.e() / (p - 1)) as i64);
        h = h.sub(&delta.scale(&pi0));
    }
    Err(PadicError::InsufficientPrecision.into())
}

/// `v(x^N - f) = v(τ)` for `N = deg f`.
pub fn monomial_h_suffices(f: &PadicPoly) -> bool {
    let t = f.tower();
    let n = f.degree();
    let xn = PadicPoly::monomial(PadicElement::one(t), n);
    matches!(xn.sub(f).gauss_valuation(), Ok(Valuation::Finite(w)) if w == t.tau_valuation())
}

/// Searches `h` of degree `deg f / p` whose coefficients have at most
/// `digit_budget` `π`-digits, maximizing `w = v(h^p - f)`. Digits are fixed
/// level by level, keeping every maximizer up to a small beam.
pub fn maximize_h_bruteforce(f: &PadicPoly, digit_budget: usize) -> Result<(PadicPoly, Valuation), TorsorError> {
    const BEAM: usize = 6;
    const MAX_EVALS: usize = 400_000;
    let t = f.tower();
    let p = t.p() as usize;
    let n = f.degree();
    if !n.is_multiple_of(p) || n == 0 {
        return Err(TorsorError::DegenerateModel("degree is not a multiple of p"));
    }
    let s = n / p;
    let field = t.residue_field();
    let q = field.size() as usize;
    let per_level = q.checked_pow(s as u32 + 1).ok_or(TorsorError::BudgetExceeded)?;
    if per_level.saturating_mul(digit_budget).saturating_mul(BEAM) > MAX_EVALS {
        return Err(TorsorError::BudgetExceeded);
    }
    let score = |h: &PadicPoly| -> Valuation {
        let d = h.pow(p as u32).sub(f);
        match d.gauss_valuation() {
            Ok(v) => v,
            Err(_) => d.gauss_valuation_lower_bound(),
        }
    };
    let lifts: Vec<PadicElement> = field.elements().map(|a| PadicElement::from_residue(t, a)).collect();
    let mut beam: Vec<PadicPoly> = vec![PadicPoly::new(t, vec![PadicElement::zero(t); s + 1])];
    let mut best = (beam[0].clone(), score(&beam[0]));
    for level in 0..digit_budget {
        let pk = PadicElement::pi_power(t, level as i64);
        let mut cands: Vec<(Valuation, PadicPoly)> = Vec::new();
        for base in &beam {
            for idx in 0..per_level {
                let mut cs = base.coeffs().to_vec();
                let mut rest = idx;
                for c in cs.iter_mut() {
                    let digit = &lifts[rest % q];
                    rest /= q;
                    *c = c.add(&digit.mul(&pk));
                }
                let h = PadicPoly::new(t, cs);
                cands.push((score(&h), h));
            }
        }
        // stable sort keeps enumeration order among ties
        cands.sort_by_key(|c| core::cmp::Reverse(c.0));
        let top = cands[0].0;
        beam = cands
            .into_iter()
            .take_while(|c| c.0 == top)
            .take(BEAM)
            .map(|c| c.1)
            .collect();
        if top > best.1 {
            best = (beam[0].clone(), top);
        }
    }
    Ok(best)
}

/// `x^s` in the tower of `f`.
pub fn x_power(t: &FieldTower, s: usize) -> PadicPoly {
    PadicPoly::monomial(PadicElement::one(t), s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::{as_genus, ResidueField};

    fn t5() -> FieldTower {
        FieldTower::new(5, 4, 1, 120).unwrap()
    }

    #[test]
    fn taylor_shift_examples() {
        let t = t5();
        let f = PadicPoly::from_ints(&t, &[0, 0, 1]);
        let g = taylor_shift(&f, &PadicElement::from_int(&t, 1), &PadicElement::from_int(&t, 3));
        assert_eq!(g, PadicPoly::from_ints(&t, &[1, 6, 9]));
        let f = PadicPoly::from_ints(&t, &[3, 1, 4, 1, 5]);
        let g = taylor_shift(&f, &PadicElement::from_int(&t, 2), &PadicElement::zero(&t));
        assert_eq!(g.coeff(0), f.eval(&PadicElement::from_int(&t, 2)));
        for i in 1..5 {
            assert!(g.coeff(i).is_exact_zero());
        }
        let pi = PadicElement::pi_power(&t, 1);
        let f = PadicPoly::from_ints(&t, &[0, 0, 0, 0, 0, 1]);
        let g = taylor_shift(&f, &PadicElement::zero(&t), &pi);
        assert_eq!(g.coeff(5), pi.pow(5).unwrap());
        for i in 0..5 {
            assert!(g.coeff(i).is_indistinguishable_from_zero());
        }
    }

    #[test]
    fn taylor_shift_keeps_divided_derivatives_when_p_divides_factorial() {
        // f = x^7 at d = 1: the t^5 coefficient is C(7,5) = 21 even though 5 | 5!
        let t = t5();
        let f = PadicPoly::from_ints(&t, &[0, 0, 0, 0, 0, 0, 0, 1]);
        let g = taylor_shift(&f, &PadicElement::one(&t), &PadicElement::one(&t));
        assert_eq!(g.coeff(5), PadicElement::from_int(&t, 21));
    }

    #[test]
    fn trichotomy_examples() {
        let t = t5();
        let tau = PadicElement::tau(&t).unwrap();
        let x = x_power(&t, 1);
        let x5 = x_power(&t, 5);
        // x^5 + τx
        let f = x5.add(&PadicPoly::monomial(tau.clone(), 1));
        let o = torsor_case(&f, &x).unwrap();
        assert_eq!(o.case, TorsorCase::ArtinSchreier);
        let TorsorPayload::ArtinSchreier(c) = &o.payload else { panic!() };
        assert_eq!(as_genus(c).unwrap(), 6);
        assert_eq!(c.poles()[0].1, 4);
        // x^5 + 5x^2
        let f = x5.add(&PadicPoly::monomial(PadicElement::from_int(&t, 5), 2));
        let o = torsor_case(&f, &x).unwrap();
        assert_eq!(o.case, TorsorCase::Inseparable);
        let TorsorPayload::Inseparable(c) = &o.payload else { panic!() };
        let k = ResidueField::new(5, 1);
        assert_eq!(c.t(), &FqPoly::new(vec![0, 0, 1]));
        assert!(!c.t().is_pth_power(&k));
        // x^5 + τ²x
        let f = x5.add(&PadicPoly::monomial(tau.square(), 1));
        assert_eq!(torsor_case(&f, &x).unwrap().case, TorsorCase::Split);
    }

    #[test]
    fn exact_pth_power_is_degenerate() {
        let t = FieldTower::new(3, 2, 1, 40).unwrap();
        let h = PadicPoly::new(&t, vec![PadicElement::pi_power(&t, 1), PadicElement::one(&t)]);
        let f = h.pow(3);
        assert!(matches!(torsor_case(&f, &h), Err(TorsorError::DegenerateModel(_))));
    }

    #[test]
    fn bruteforce_oracle_examples() {
        let t = FieldTower::new(3, 2, 1, 40).unwrap();
        let tau = PadicElement::tau(&t).unwrap();
        let f = x_power(&t, 3).add(&PadicPoly::monomial(tau, 1));
        let (_, w) = maximize_h_bruteforce(&f, 3).unwrap();
        assert_eq!(w, Valuation::Finite(Q::new(3, 2)));
        let f = x_power(&t, 3).add(&PadicPoly::monomial(PadicElement::from_int(&t, 3), 1));
        let (h, w) = maximize_h_bruteforce(&f, 3).unwrap();
        assert_eq!(w, Valuation::Finite(Q::from_integer(1)));
        assert_eq!(torsor_case(&f, &h).unwrap().case, TorsorCase::Inseparable);
    }

    #[test]
    fn monomial_h_check() {
        let t = t5();
        let tau = PadicElement::tau(&t).unwrap();
        let x10 = x_power(&t, 10);
        assert!(monomial_h_suffices(&x10.add(&PadicPoly::monomial(tau, 1))));
        assert!(!monomial_h_suffices(&x10.add(&PadicPoly::monomial(PadicElement::from_int(&t, 5), 9))));
        assert!(!monomial_h_suffices(&x10));
    }

    #[test]
    fn improvement_reaches_artin_schreier() {
        // f = (x + 1)^5 + τx: h = x only reaches w = 0
        let t = t5();
        let tau = PadicElement::tau(&t).unwrap();
        let base = PadicPoly::from_ints(&t, &[1, 1]).pow(5);
        let f = base.add(&PadicPoly::monomial(tau, 1));
        assert_eq!(torsor_case(&f, &x_power(&t, 1)).unwrap().w, Valuation::Finite(Q::zero()));
        let o = torsor_case_improving(&f, &x_power(&t, 1)).unwrap();
        assert_eq!(o.case, TorsorCase::ArtinSchreier);
        assert_eq!(o.h.residue().unwrap(), FqPoly::new(vec![1, 1]));
    }

    #[test]
    fn improvement_past_a_reducible_artin_schreier_residue() {
        // f = (x + π)^3 + π^4·x in e = 2: h = x stalls at w = v(τ) with u = ℘(·)
        let t = FieldTower::new(3, 2, 1, 40).unwrap();
        let pi = PadicElement::pi_power(&t, 1);
        let h0 = PadicPoly::new(&t, vec![pi.clone(), PadicElement::one(&t)]);
        let f = h0.pow(3).add(&PadicPoly::monomial(PadicElement::pi_power(&t, 4), 1));
        assert_eq!(torsor_case(&f, &x_power(&t, 1)).unwrap().case, TorsorCase::Undecided);
        let o = torsor_case_improving(&f, &x_power(&t, 1)).unwrap();
        assert_eq!(o.case, TorsorCase::Split);
        let (_, w) = maximize_h_bruteforce(&f, 3).unwrap();
        assert_eq!(w, o.w);
    }
}
