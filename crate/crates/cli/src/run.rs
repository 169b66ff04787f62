//! The pipeline behind each command, and how its failures map to exit codes.

use std::fmt;

use serde::Serialize;
use stable_cover::cover::{normalize, BranchPoint, CoverDatum, CoverError, NormalizedCover};
use stable_cover::padic::{parse_token, FieldTower, PadicError, Token};
use stable_cover::stable::{
    build_stable_model, build_stable_model_in, check_qwerty, classify, deuring_good_reduction, deuring_j_valuation,
    required_extension, ReductionType, StableError, StableModel,
};

use crate::report::{val_str, DeuringReport, Input, RunReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Precision,
    Invalid(String),
    NeedsExtension { e: u32, f: u32 },
    Mismatch(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Precision => 2,
            Failure::Invalid(_) | Failure::NeedsExtension { .. } => 3,
            Failure::Mismatch(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Precision => "insufficient-precision",
            Failure::Invalid(_) => "invalid-input",
            Failure::NeedsExtension { .. } => "needs-extension",
            Failure::Mismatch(_) => "construction-mismatch",
        }
    }

    pub fn to_json(&self) -> ErrorReport {
        ErrorReport {
            error: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Precision => write!(f, "insufficient precision, even after retrying at 4x"),
            Failure::Invalid(m) => write!(f, "{}", m),
            Failure::NeedsExtension { e, f: ff } => write!(
                f,
                "the model needs a larger extension (e = {}, f = {}); rerun with --allow-extension",
                e, ff
            ),
            Failure::Mismatch(m) => write!(f, "{}", m),
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct ErrorReport {
    pub error: &'static str,
    pub message: String,
    pub exit_code: u8,
}

impl From<PadicError> for Failure {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::InsufficientPrecision => Failure::Precision,
            PadicError::NeedsExtension { e, f } => Failure::NeedsExtension { e, f },
            e => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::Padic(p) => p.into(),
            CoverError::WitnessMismatch => Failure::Mismatch(e.to_string()),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<StableError> for Failure {
    fn from(e: StableError) -> Self {
        match e {
            StableError::InsufficientPrecision => Failure::Precision,
            StableError::ConstructionMismatch(m) => Failure::Mismatch(m),
            StableError::Padic(p) => p.into(),
            StableError::Cover(c) => c.into(),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

/// Runs `f` at `precision`, and once more at four times that if it ran out.
pub fn with_retry<T>(precision: u32, f: impl Fn(u32) -> Result<T, Failure>) -> Result<T, Failure> {
    match f(precision) {
        Err(Failure::Precision) => f(precision.saturating_mul(4)),
        r => r,
    }
}

fn token(s: &str) -> Result<Token, Failure> {
    parse_token(s).map_err(|e| Failure::Invalid(format!("{}: {}", s, e)))
}

fn check_p(p: u32) -> Result<(), Failure> {
    if p < 3 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
        return Err(Failure::Invalid(format!("p = {} must be an odd prime", p)));
    }
    Ok(())
}

/// Points that merge only at working precision are a precision failure;
/// points that are equal as tokens make the input invalid.
fn coalescing(d: &CoverDatum, e: CoverError) -> Failure {
    if let CoverError::CoalescingBranchPoints(i, j) = e {
        let p = d.p();
        let equal = match (&d.points()[i], &d.points()[j]) {
            (BranchPoint::Finite(a), BranchPoint::Finite(b)) => {
                a.to_string() == b.to_string() || (a.clone() - b.clone()).simplified(p).is_zero_rational(p)
            }
            _ => true,
        };
        if !equal {
            return Failure::Precision;
        }
    }
    e.into()
}

pub fn standard_cover(p: u32, beta: u32, gamma: u32, lambda: &str, precision: u32) -> Result<NormalizedCover, Failure> {
    check_p(p)?;
    let d = CoverDatum::standard(p, beta, gamma, token(lambda)?)?;
    let t = d.tower(precision)?;
    normalize(&d, &t).map_err(|e| coalescing(&d, e))
}

/// Builds the model. Without `allow_extension` the tower is exactly the one
/// predicted from the reduction type.
pub fn model_of(n: &NormalizedCover, t: ReductionType, allow_extension: bool) -> Result<StableModel, Failure> {
    if allow_extension {
        return Ok(build_stable_model(n, t)?);
    }
    let spec = required_extension(n, t)?;
    let units = (n.tower().precision() / n.tower().e()).max(1);
    let tower = FieldTower::new(n.p(), spec.e, spec.f, units * spec.e)?;
    Ok(build_stable_model_in(n, t, &tower, spec.adjoined)?)
}

pub fn run_standard(input: &Input, build: bool) -> Result<RunReport, Failure> {
    let (beta, gamma) = (input.beta.unwrap_or(0), input.gamma.unwrap_or(0));
    let lambda = input.lambda.as_deref().unwrap_or("");
    with_retry(input.precision, |prec| {
        let n = standard_cover(input.p, beta, gamma, lambda, prec)?;
        report(input, &n, build)
    })
}

pub fn run_qwerty(input: &Input) -> Result<RunReport, Failure> {
    check_p(input.p)?;
    if input.p == 3 {
        return Err(Failure::Invalid("the (c1, c2) family needs p > 3".into()));
    }
    let c1 = token(input.c1.as_deref().unwrap_or(""))?;
    let c2 = token(input.c2.as_deref().unwrap_or(""))?;
    let d = CoverDatum::qwerty(input.p, c1.clone(), c2.clone())?;
    with_retry(input.precision, |prec| {
        let q = check_qwerty(input.p, &c1, &c2, prec).map_err(|e| match e {
            StableError::Cover(c) => coalescing(&d, c),
            e => e.into(),
        })?;
        report(input, &q.normalized, true)
    })
}

fn report(input: &Input, n: &NormalizedCover, build: bool) -> Result<RunReport, Failure> {
    let t = classify(n)?;
    if !build {
        let ext = required_extension(n, t)?;
        return Ok(RunReport::classified(input.clone(), n, t, &ext));
    }
    let m = model_of(n, t, input.allow_extension)?;
    Ok(RunReport::modelled(input.clone(), n, &m))
}

pub fn run_deuring(lambda: &str, precision: u32) -> Result<DeuringReport, Failure> {
    let tok = token(lambda)?;
    with_retry(precision, |prec| {
        let e = tok.min_ramification(2);
        let t = FieldTower::new(2, e, 1, prec.max(1) * e)?;
        let l = tok.eval(&t)?;
        let v = deuring_j_valuation(&l)?;
        Ok(DeuringReport {
            lambda: tok.to_string(),
            j_valuation: val_str(v),
            good_reduction: deuring_good_reduction(&l)?,
        })
    })
}
