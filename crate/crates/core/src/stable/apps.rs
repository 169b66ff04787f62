use num_traits::Zero;

use super::{classify, ReductionType, StableError};
use crate::cover::{normalize, CoverDatum, NormalizedCover};
use crate::padic::{PadicElement, Token, Valuation, Q};

#[derive(Clone, Debug)]
pub struct QwertyReport {
    pub normalized: NormalizedCover,
    pub reduction: ReductionType,
    /// The type is not `1a`, as it never should be for this family.
    pub not_good_1a: bool,
}

/// Classifies `z^p = (x-c_1)^{p-1}(x+c_1)(x-c_2)^{p-1}(x+c_2)`.
pub fn check_qwerty(p: u32, c1: &Token, c2: &Token, units: u32) -> Result<QwertyReport, StableError> {
    if p <= 3 {
        return Err(StableError::Invalid("this family needs p > 3".into()));
    }
    let d = CoverDatum::qwerty(p, c1.clone(), c2.clone())?;
    let t = d.tower(units)?;
    let n = normalize(&d, &t)?;
    let reduction = classify(&n)?;
    Ok(QwertyReport {
        normalized: n,
        reduction,
        not_good_1a: reduction != ReductionType::Good1a,
    })
}

/// `v(j(E))` for the Legendre curve `y^2 = x(x-1)(x-λ)` over a `p = 2`
/// tower: `8 + 3v(λ²-λ+1) - 2v(λ) - 2v(λ-1)`.
pub fn deuring_j_valuation(lambda: &PadicElement) -> Result<Valuation, StableError> {
    let t = lambda.tower();
    if t.p() != 2 {
        return Err(StableError::Invalid("the Legendre comparator lives over p = 2".into()));
    }
    let one = PadicElement::one(t);
    let lm1 = lambda.sub(&one);
    if lambda.is_indistinguishable_from_zero() || lm1.is_indistinguishable_from_zero() {
        return Err(StableError::Invalid("lambda must avoid 0 and 1".into()));
    }
    let num = lambda.square().sub(lambda).add(&one);
    let vn = match num.valuation()? {
        Valuation::Infinity => return Ok(Valuation::Infinity),
        Valuation::Finite(v) => v,
    };
    Ok(Valuation::Finite(
        Q::from_integer(8) + vn * 3 - lambda.val()? * 2 - lm1.val()? * 2,
    ))
}

/// Potentially good reduction iff `j(E)` is integral.
pub fn deuring_good_reduction(lambda: &PadicElement) -> Result<bool, StableError> {
    Ok(match deuring_j_valuation(lambda)? {
        Valuation::Infinity => true,
        Valuation::Finite(v) => v >= Q::zero(),
    })
}
