use alloc::vec;
use alloc::vec::Vec;

use super::element::PadicElement;
use super::tower::FieldTower;
use super::{PadicError, Valuation};
use crate::residue::FqPoly;

/// Polynomial over a [`FieldTower`] with ascending coefficients.
///
/// The nominal degree is `len - 1`; coefficients are never trimmed, since a
/// coefficient that looks like zero may only be small.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicPoly {
    tower: FieldTower,
    coeffs: Vec<PadicElement>,
}

impl PadicPoly {
    pub fn new(tower: &FieldTower, coeffs: Vec<PadicElement>) -> Self {
        PadicPoly {
            tower: tower.clone(),
            coeffs,
        }
    }

    pub fn from_ints(tower: &FieldTower, cs: &[i64]) -> Self {
        Self::new(tower, cs.iter().map(|&c| PadicElement::from_int(tower, c)).collect())
    }

    pub fn zero(tower: &FieldTower) -> Self {
        Self::new(tower, Vec::new())
    }

    pub fn constant(c: PadicElement) -> Self {
        Self::new(&c.tower().clone(), vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: PadicElement, k: usize) -> Self {
        let t = c.tower().clone();
        let mut cs = vec![PadicElement::zero(&t); k];
        cs.push(c);
        Self::new(&t, cs)
    }

    pub fn x(tower: &FieldTower) -> Self {
        Self::monomial(PadicElement::one(tower), 1)
    }

    /// `x - a`.
    pub fn linear(a: &PadicElement) -> Self {
        let t = a.tower().clone();
        Self::new(&t, vec![a.neg(), PadicElement::one(&t)])
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[PadicElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| PadicElement::zero(&self.tower))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nominal degree.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Drops exact-zero leading coefficients.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new(
            &self.tower,
            (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self::new(
            &self.tower,
            (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.tower, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, c: &PadicElement) -> Self {
        Self::new(&self.tower, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn div_scalar(&self, c: &PadicElement) -> Result<Self, PadicError> {
        let ci = c.inv()?;
        Ok(self.scale(&ci))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::zero(&self.tower);
        }
        let mut out = vec![PadicElement::zero(&self.tower); self.len() + other.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.tower, out)
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(PadicElement::one(&self.tower));
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &PadicElement) -> PadicElement {
        self.coeffs
            .iter()
            .rev()
            .fold(PadicElement::zero(&self.tower), |acc, c| acc.mul(x).add(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            &self.tower,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale_int(i as i64))
                .collect(),
        )
    }

    /// Reverses coefficients inside degree `n`: `x^n·f(1/x)`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut cs: Vec<PadicElement> = (0..=n).map(|i| self.coeff(i)).collect();
        cs.reverse();
        Self::new(&self.tower, cs)
    }

    /// `f(a·x)`.
    pub fn rescale(&self, a: &PadicElement) -> Self {
        let mut pw = PadicElement::one(&self.tower);
        let mut cs = Vec::with_capacity(self.len());
        for c in &self.coeffs {
            cs.push(c.mul(&pw));
            pw = pw.mul(a);
        }
        Self::new(&self.tower, cs)
    }

    /// Gauss valuation `min v(a_i)`.
    pub fn gauss_valuation(&self) -> Result<Valuation, PadicError> {
        let mut known: Option<Valuation> = None;
        let mut bound: Option<Valuation> = None;
        for c in &self.coeffs {
            match c.valuation() {
                Ok(v) => known = Some(known.map_or(v, |k| k.min(v))),
                Err(_) => {
                    let b = c.valuation_lower_bound();
                    bound = Some(bound.map_or(b, |k| k.min(b)));
                }
            }
        }
        match (known, bound) {
            (Some(k), None) => Ok(k),
            (Some(k), Some(b)) if k < b => Ok(k),
            (None, None) => Ok(Valuation::Infinity),
            _ => Err(PadicError::InsufficientPrecision),
        }
    }

    /// Lower bound on the Gauss valuation that is valid at any precision.
    pub fn gauss_valuation_lower_bound(&self) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| c.valuation_lower_bound())
            .min()
            .unwrap_or(Valuation::Infinity)
    }

    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_indistinguishable_from_zero())
    }

    /// Coefficient-wise reduction to the residue field.
    pub fn residue(&self) -> Result<FqPoly, PadicError> {
        let cs = self
            .coeffs
            .iter()
            .map(|c| c.residue())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FqPoly::new(cs))
    }

    /// Lifts a residue polynomial coefficient-wise.
    pub fn lift(tower: &FieldTower, f: &FqPoly) -> Self {
        Self::new(
            tower,
            f.coeffs()
                .iter()
                .map(|&c| PadicElement::from_residue(tower, c))
                .collect(),
        )
    }

    pub fn embed(&self, target: &FieldTower) -> Result<Self, PadicError> {
        Ok(Self::new(
            target,
            self.coeffs
                .iter()
                .map(|c| c.embed(target))
                .collect::<Result<Vec<_>, _>>()?,
        ))
    }

    /// Newton iteration from `start` towards a root; requires that
    /// `v(f(start)) > 2·v(f'(start))`.
    pub fn newton_root(&self, start: &PadicElement) -> Result<PadicElement, PadicError> {
        let df = self.derivative();
        let mut x = start.clone();
        for _ in 0..256 {
            let fx = self.eval(&x);
            if fx.is_indistinguishable_from_zero() {
                return Ok(x);
            }
            let dfx = df.eval(&x);
            let next = x.sub(&fx.div(&dfx)?);
            if next == x {
                return Ok(x);
            }
            x = next;
        }
        Ok(x)
    }

    /// Roots specializing to simple roots of the residue polynomial, one per
    /// residue root, sorted by residue encoding. Needs `v(f) = 0`.
    pub fn simple_roots(&self) -> Result<Vec<PadicElement>, PadicError> {
        let k = self.tower.residue_field().clone();
        let fbar = self.residue()?;
        let mut out = Vec::new();
        for r in fbar.roots(&k) {
            if fbar.root_multiplicity(&k, r) == 1 {
                out.push(self.newton_root(&PadicElement::from_residue(&self.tower, r))?);
            }
        }
        Ok(out)
    }
}
