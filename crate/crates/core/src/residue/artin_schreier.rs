//! Artin–Schreier and purely inseparable covers of the projective line over
//! the residue field.
//!
//! Constants are treated as lying in `℘(k̄)`: the residue field stands in for
//! its algebraic closure, so adding a constant never changes the cover.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use super::field::{Fq, ResidueField};
use super::poly::FqPoly;
use super::ratfun::{render_poly, ResidueRationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("right-hand side has a pole of order divisible by p")]
    NotReduced,
    #[error("Artin-Schreier equation is reducible over k(x)")]
    Reducible,
    #[error("right-hand side is a p-th power")]
    PthPower,
    #[error("a cover of the line needs at least one branch point")]
    NoBranchPoints,
}

/// A place of `k(x)`: a monic irreducible polynomial or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Place {
    Finite(FqPoly),
    Infinity,
}

impl Place {
    /// Number of geometric points over the place.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(f) => f.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }
}

/// Result of [`as_reduce`]: `u = reduced + witness^p - witness + constant`.
#[derive(Clone, Debug)]
pub struct AsReduction {
    pub reduced: ResidueRationalFunction,
    pub witness: ResidueRationalFunction,
    /// Constant removed as an element of `℘(k̄)`.
    pub constant: Fq,
    /// Pole orders of `reduced`, each prime to `p`.
    pub poles: Vec<(Place, usize)>,
}

/// Laurent-type expansion of a rational function: a polynomial part plus, for
/// each finite pole `P`, coefficients `a_k` (of degree `< deg P`) of `P^{-k}`.
struct Expansion {
    poly: Vec<Fq>,
    places: Vec<(FqPoly, Vec<FqPoly>)>,
}

fn expand(u: &ResidueRationalFunction) -> Expansion {
    let k = u.field();
    let (poly, rest) = u.num().div_rem(k, u.den());
    let mut places = Vec::new();
    if !u.den().is_constant() {
        let (_, factors) = u.den().factor(k);
        for (pl, m) in factors {
            let full = pl.pow(k, m as u64);
            let cof = u.den().div_rem(k, &full).0;
            let a = rest.mul_mod(k, &cof.inv_mod(k, &full).unwrap(), &full);
            // a = Σ_{j<m} c_j P^j ; order m - j
            let mut coeffs = vec![FqPoly::zero(); m + 1];
            let mut cur = a;
            for j in 0..m {
                let (q, r) = cur.div_rem(k, &pl);
                coeffs[m - j] = r;
                cur = q;
            }
            places.push((pl, coeffs));
        }
    }
    Expansion {
        poly: poly.coeffs().to_vec(),
        places,
    }
}

/// Artin–Schreier reduction: removes every pole order divisible by `p` and
/// the constant term.
pub fn as_reduce(u: &ResidueRationalFunction) -> AsReduction {
    let k = u.field().clone();
    let p = k.p() as usize;
    let mut ex = expand(u);
    let mut witness = ResidueRationalFunction::zero(&k);

    // polynomial part, top degree down
    let mut poly = core::mem::take(&mut ex.poly);
    poly.resize(poly.len().max(1), 0);
    for i in (1..poly.len()).rev() {
        if i % p == 0 && poly[i] != 0 {
            let c = k.pth_root(poly[i]);
            poly[i] = 0;
            poly[i / p] = k.add(poly[i / p], c);
            witness = witness.add(&ResidueRationalFunction::from_poly(
                &k,
                FqPoly::monomial(c, i / p),
            ));
        }
    }
    let constant = poly[0];
    poly[0] = 0;
    let poly = FqPoly::new(poly);

    // finite places, highest order first
    for (pl, coeffs) in ex.places.iter_mut() {
        let delta = pl.degree().unwrap();
        let field_size = (k.size() as u128).pow(delta as u32);
        for ord in (1..coeffs.len()).rev() {
            if ord % p != 0 || coeffs[ord].is_zero() {
                continue;
            }
            let root = coeffs[ord].pow_mod(&k, field_size / p as u128, pl);
            // root^p = Σ b_j P^j with b_0 = coeffs[ord]
            let mut cur = root.pow(&k, p as u64);
            let mut j = 0;
            while !cur.is_zero() && j < ord {
                let (q, r) = cur.div_rem(&k, pl);
                coeffs[ord - j] = coeffs[ord - j].sub(&k, &r);
                cur = q;
                j += 1;
            }
            debug_assert!(coeffs[ord].is_zero());
            let low = ord / p;
            coeffs[low] = coeffs[low].add(&k, &root);
            witness = witness.add(&ResidueRationalFunction::new(
                &k,
                root,
                pl.pow(&k, low as u64),
            ));
        }
    }

    let mut reduced = ResidueRationalFunction::from_poly(&k, poly.clone());
    let mut poles = Vec::new();
    for (pl, coeffs) in &ex.places {
        let mut top = 0;
        for (ord, c) in coeffs.iter().enumerate().skip(1) {
            if !c.is_zero() {
                top = ord;
                reduced = reduced.add(&ResidueRationalFunction::new(
                    &k,
                    c.clone(),
                    pl.pow(&k, ord as u64),
                ));
            }
        }
        if top > 0 {
            poles.push((Place::Finite(pl.clone()), top));
        }
    }
    if let Some(d) = poly.degree() {
        if d > 0 {
            poles.push((Place::Infinity, d));
        }
    }
    AsReduction {
        reduced,
        witness,
        constant,
        poles,
    }
}

/// True iff `T^p - T + u` (equivalently `T^p - T = u`) is irreducible over `k̄(x)`.
pub fn as_irreducible(u: &ResidueRationalFunction) -> bool {
    !as_reduce(u).reduced.is_zero()
}

/// Genus from pole orders of a reduced right-hand side:
/// `(p-1)/2 · (Σ_P deg P · (d_P + 1) - 2)`.
pub fn conductor_genus(p: u32, poles: &[(Place, usize)]) -> u64 {
    let s: usize = poles.iter().map(|(pl, d)| pl.degree() * (d + 1)).sum();
    ((p as u64 - 1) * (s as u64 - 2)) / 2
}

/// Genus of `y^p - y = f` for a polynomial of degree `m` prime to `p`.
pub fn polynomial_as_genus(p: u32, m: u64) -> u64 {
    (m - 1) * (p as u64 - 1) / 2
}

/// Deuring–Shafarevich `p`-rank of a `Z/p`-cover of the line with
/// `branch_count` wildly ramified geometric branch points.
pub fn p_rank_ds(p: u32, branch_count: usize) -> Result<u64, CurveError> {
    if branch_count == 0 {
        return Err(CurveError::NoBranchPoints);
    }
    Ok((p as u64 - 1) * (branch_count as u64 - 1))
}

/// `t ∈ k[x]^p`.
pub fn is_pth_power(k: &ResidueField, t: &FqPoly) -> bool {
    t.is_pth_power(k)
}

/// The Artin–Schreier curve `T^p - T + u = 0` with `u` in reduced form.
#[derive(Clone, Debug)]
pub struct AsCurve {
    u: ResidueRationalFunction,
    poles: Vec<(Place, usize)>,
}

impl AsCurve {
    /// Reduces `u` and builds the curve; fails when the equation splits.
    pub fn reduce(u: &ResidueRationalFunction) -> Result<Self, CurveError> {
        let red = as_reduce(u);
        if red.reduced.is_zero() {
            return Err(CurveError::Reducible);
        }
        Ok(AsCurve {
            u: red.reduced,
            poles: red.poles,
        })
    }

    /// Accepts `u` as is, checking that it is already reduced.
    pub fn from_reduced(u: ResidueRationalFunction) -> Result<Self, CurveError> {
        let red = as_reduce(&u);
        if red.reduced.is_zero() {
            return Err(CurveError::Reducible);
        }
        if red.reduced != u {
            return Err(CurveError::NotReduced);
        }
        Ok(AsCurve {
            u,
            poles: red.poles,
        })
    }

    pub fn p(&self) -> u32 {
        self.u.field().p()
    }

    pub fn rhs(&self) -> &ResidueRationalFunction {
        &self.u
    }

    pub fn poles(&self) -> &[(Place, usize)] {
        &self.poles
    }

    /// Geometric branch points of the cover `T ↦ x`.
    pub fn branch_count(&self) -> usize {
        self.poles.iter().map(|(pl, _)| pl.degree()).sum()
    }

    pub fn p_rank(&self) -> u64 {
        p_rank_ds(self.p(), self.branch_count()).unwrap()
    }

    pub fn render(&self, var: &str) -> String {
        alloc::format!("T^{} - T + {} = 0", self.p(), self.u.render(var))
    }
}

/// Genus of an Artin–Schreier curve, computed by the conductor formula and,
/// when the right-hand side is a polynomial, cross-checked against the
/// degree formula.
pub fn as_genus(c: &AsCurve) -> Result<u64, CurveError> {
    let p = c.p() as usize;
    if c.poles.iter().any(|(_, d)| d % p == 0) || c.poles.is_empty() {
        return Err(CurveError::NotReduced);
    }
    let g = conductor_genus(c.p(), &c.poles);
    if c.u.is_polynomial() {
        let m = c.u.num().degree().unwrap() as u64;
        assert_eq!(g, polynomial_as_genus(c.p(), m), "genus formulas disagree");
    }
    Ok(g)
}

/// The purely inseparable cover `T^p = t(x)` with `t ∉ k[x]^p`.
#[derive(Clone, Debug)]
pub struct InsepCurve {
    field: ResidueField,
    t: FqPoly,
}

impl InsepCurve {
    pub fn new(field: &ResidueField, t: FqPoly) -> Result<Self, CurveError> {
        if t.is_pth_power(field) {
            return Err(CurveError::PthPower);
        }
        Ok(InsepCurve {
            field: field.clone(),
            t,
        })
    }

    pub fn t(&self) -> &FqPoly {
        &self.t
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    /// A purely inseparable cover of the line is rational.
    pub fn genus(&self) -> u64 {
        0
    }

    pub fn render(&self, var: &str) -> String {
        alloc::format!("T^{} = {}", self.field.p(), render_poly(&self.field, &self.t, var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5() -> ResidueField {
        ResidueField::new(5, 1)
    }

    fn poly(cs: &[u32]) -> FqPoly {
        FqPoly::new(cs.to_vec())
    }

    #[test]
    fn reduces_polynomial_part() {
        let k = k5();
        // x^5 + x^3 -> x^3 + x with witness x
        let u = ResidueRationalFunction::from_poly(&k, poly(&[0, 0, 0, 1, 0, 1]));
        let r = as_reduce(&u);
        assert_eq!(r.reduced, ResidueRationalFunction::from_poly(&k, poly(&[0, 1, 0, 1])));
        assert_eq!(r.witness, ResidueRationalFunction::from_poly(&k, FqPoly::x()));
    }

    #[test]
    fn constants_vanish() {
        let k = k5();
        let u = ResidueRationalFunction::constant(&k, 2);
        assert!(as_reduce(&u).reduced.is_zero());
        assert!(!as_irreducible(&u));
    }

    #[test]
    fn order_prime_to_p_is_untouched() {
        let k = k5();
        // -x^{1-p} = -1/x^4
        let u = ResidueRationalFunction::new(&k, FqPoly::constant(4), FqPoly::monomial(1, 4));
        let r = as_reduce(&u);
        assert_eq!(r.reduced, u);
        assert!(as_irreducible(&u));
    }

    #[test]
    fn wp_is_reducible() {
        let k = k5();
        let x = ResidueRationalFunction::from_poly(&k, FqPoly::x());
        assert!(!as_irreducible(&x.wp()));
    }

    #[test]
    fn genus_examples() {
        let k = k5();
        let cube = AsCurve::reduce(&ResidueRationalFunction::from_poly(&k, FqPoly::monomial(1, 3))).unwrap();
        assert_eq!(as_genus(&cube).unwrap(), 4);
        // x + 1/x
        let u = ResidueRationalFunction::new(&k, poly(&[1, 0, 1]), FqPoly::x());
        assert_eq!(as_genus(&AsCurve::reduce(&u).unwrap()).unwrap(), 4);
        let lin = AsCurve::reduce(&ResidueRationalFunction::from_poly(&k, FqPoly::x())).unwrap();
        assert_eq!(as_genus(&lin).unwrap(), 0);
    }

    #[test]
    fn irreducible_quadratic_place_counts_twice() {
        let k = ResidueField::new(3, 1);
        // 1/(x^2+1): two geometric poles of order 1
        let u = ResidueRationalFunction::new(&k, FqPoly::one(), poly(&[1, 0, 1]));
        let c = AsCurve::reduce(&u).unwrap();
        assert_eq!(c.branch_count(), 2);
        assert_eq!(as_genus(&c).unwrap(), 2);
    }

    #[test]
    fn finite_pole_of_order_p_is_lowered() {
        let k = k5();
        // 2/x^5 + 1/x^2
        let u = ResidueRationalFunction::new(&k, poly(&[2, 0, 0, 1]), FqPoly::monomial(1, 5));
        let r = as_reduce(&u);
        assert_eq!(r.poles, vec![(Place::Finite(FqPoly::x()), 2)]);
        let back = r.reduced.add(&r.witness.wp());
        assert_eq!(back, u);
    }

    #[test]
    fn from_reduced_rejects_unreduced() {
        let k = k5();
        let u = ResidueRationalFunction::from_poly(&k, FqPoly::monomial(1, 5));
        assert_eq!(AsCurve::from_reduced(u).unwrap_err(), CurveError::NotReduced);
    }

    #[test]
    fn p_rank_formula() {
        assert_eq!(p_rank_ds(5, 1).unwrap(), 0);
        assert_eq!(p_rank_ds(5, 2).unwrap(), 4);
        assert_eq!(p_rank_ds(5, 3).unwrap(), 8);
        assert_eq!(p_rank_ds(5, 0), Err(CurveError::NoBranchPoints));
    }

    #[test]
    fn inseparable_rejects_pth_powers() {
        let k = k5();
        assert!(InsepCurve::new(&k, poly(&[1, 0, 0, 0, 0, 1])).is_err());
        let c = InsepCurve::new(&k, poly(&[0, 0, 4])).unwrap();
        assert_eq!(c.render("x"), "T^5 = 4*x^2");
    }

    #[test]
    fn t_of_the_symmetrized_model_is_not_a_pth_power() {
        // (x-1)^{p-1} x^{p-1} ((b+1)x - 1) with b + 1 != 0
        let k = k5();
        for beta in 1..4u32 {
            let t = poly(&[4, 1])
                .pow(&k, 4)
                .mul(&k, &FqPoly::x().pow(&k, 4))
                .mul(&k, &poly(&[4, beta + 1]));
            assert!(!is_pth_power(&k, &t));
        }
    }
}
