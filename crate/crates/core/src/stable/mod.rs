//! Reduction types of `z_0^p = x_0(x_0-1)^β(x_0-λ)^γ`, the extension over
//! which the stable model exists, and the model itself.

mod apps;
mod build;
mod verify;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::cover::{j_quadratic, j_shift, CoverError, NormalizedCover};
use crate::padic::{PadicError, Valuation, Q};
use crate::residue::{AsCurve, InsepCurve};
use crate::torsor::{TorsorCase, TorsorError};

pub use apps::{check_qwerty, deuring_good_reduction, deuring_j_valuation, QwertyReport};
pub use build::{build_stable_model, build_stable_model_in};
pub use verify::{betti_number, verify_model};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StableError {
    #[error("insufficient precision")]
    InsufficientPrecision,
    #[error("p = 2 is only handled by the Deuring comparator")]
    UnsupportedPrime,
    #[error("construction mismatch: {0}")]
    ConstructionMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Padic(PadicError),
    #[error(transparent)]
    Cover(CoverError),
}

impl From<PadicError> for StableError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::InsufficientPrecision => StableError::InsufficientPrecision,
            e => StableError::Padic(e),
        }
    }
}

impl From<CoverError> for StableError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::Padic(p) => p.into(),
            e => StableError::Cover(e),
        }
    }
}

impl From<TorsorError> for StableError {
    fn from(e: TorsorError) -> Self {
        match e {
            TorsorError::Padic(p) => p.into(),
            TorsorError::DegenerateModel(m) => StableError::ConstructionMismatch(m.into()),
            TorsorError::BudgetExceeded => StableError::ConstructionMismatch("search budget exceeded".into()),
        }
    }
}

/// How a two-component reduction arises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubRoute {
    /// `v(λ) = 0` and `v(j) < 0`; also every `v(λ) = 0` case for `p = 3`.
    Via1b,
    /// `v(λ) > 0` and `γ + 1 ≠ p`.
    Via2a,
    /// `γ + 1 = p`, `v(τ) > v(λ^{1/2})` and `v(λ^{1/2}) ≤ (p-2)/(p-1)`.
    Via2b3i,
    /// `γ + 1 = p`, `v(τ) > v(λ^{1/2}) > (p-2)/(p-1)`.
    Via2b3ii,
}

impl SubRoute {
    pub fn name(&self) -> &'static str {
        match self {
            SubRoute::Via1b => "via-1b",
            SubRoute::Via2a => "via-2a",
            SubRoute::Via2b3i => "via-2b3-i",
            SubRoute::Via2b3ii => "via-2b3-ii",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionType {
    /// Potentially good, p-rank 0.
    Good1a,
    /// Potentially good, p-rank `p - 1`.
    Good1b,
    /// Two rational components meeting in `p` points.
    Mumford2,
    /// Two components of genus `(p-1)/2` meeting once.
    TwoComp3(SubRoute),
}

impl ReductionType {
    pub fn name(&self) -> &'static str {
        match self {
            ReductionType::Good1a => "1a",
            ReductionType::Good1b => "1b",
            ReductionType::Mumford2 => "2",
            ReductionType::TwoComp3(_) => "3",
        }
    }

    pub fn subroute(&self) -> Option<SubRoute> {
        match self {
            ReductionType::TwoComp3(s) => Some(*s),
            _ => None,
        }
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.subroute() {
            Some(s) => write!(f, "{} ({})", self.name(), s.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

/// `R'`: ramification `e` over `Z_p`, residue degree `f`, and the symbols
/// that had to be adjoined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    pub e: u32,
    pub f: u32,
    pub adjoined: Vec<String>,
}

impl fmt::Display for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e = {}, f = {}", self.e, self.f)?;
        if !self.adjoined.is_empty() {
            write!(f, ", adjoined: {}", self.adjoined.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum ComponentEquation {
    ArtinSchreier(AsCurve),
    Inseparable(InsepCurve),
}

impl ComponentEquation {
    pub fn render(&self, var: &str) -> String {
        match self {
            ComponentEquation::ArtinSchreier(c) => c.render(var),
            ComponentEquation::Inseparable(c) => c.render(var),
        }
    }
}

/// The chart in which a torsor computation was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartRecord {
    /// How the chart coordinate relates to `x_0`.
    pub coordinate: String,
    /// Leading digits of the center; diagnostic.
    pub center: String,
    pub radius_valuation: Q,
    pub degree: usize,
    pub case: TorsorCase,
    pub w: Valuation,
}

#[derive(Clone, Debug)]
pub struct Component {
    pub equation: ComponentEquation,
    pub genus: u64,
    pub p_rank: u64,
    pub branch_count: usize,
    pub chart: ChartRecord,
}

/// `(i, j, multiplicity)`: components `i` and `j` meet in that many points.
pub type Edge = (usize, usize, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct StableModel {
    pub p: u32,
    pub reduction: ReductionType,
    pub components: Vec<Component>,
    pub edges: Vec<Edge>,
    pub extension: ExtensionSpec,
    /// Charts that certify something other than a component, such as the
    /// split annulus of a Mumford curve.
    pub auxiliary: Vec<ChartRecord>,
    pub checks: Vec<Check>,
}

impl StableModel {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn total_genus(&self) -> u64 {
        self.components.iter().map(|c| c.genus).sum::<u64>() + betti_number(self)
    }
}

/// Genus of the generic fiber: `p - 1` by Riemann–Hurwitz.
pub fn genus_generic(p: u32) -> u64 {
    p as u64 - 1
}

fn tau_valuation(p: u32) -> Q {
    Q::new(p as i64, p as i64 - 1)
}

/// `v(j(λ)) ≥ 0`, using a lower bound when the quadratic vanishes at the
/// working precision.
fn j_nonnegative(n: &NormalizedCover) -> Result<bool, StableError> {
    let q = j_quadratic(n.beta(), n.gamma(), n.lambda());
    let shift = j_shift(n.p());
    match q.valuation() {
        Ok(Valuation::Finite(v)) => Ok(v >= shift),
        Ok(Valuation::Infinity) => Ok(true),
        Err(_) => match q.valuation_lower_bound() {
            Valuation::Finite(lb) if lb >= shift => Ok(true),
            Valuation::Infinity => Ok(true),
            _ => Err(StableError::InsufficientPrecision),
        },
    }
}

/// The decision tree on `(p, β, γ, v(λ), v(j))`.
pub fn classify(n: &NormalizedCover) -> Result<ReductionType, StableError> {
    let p = n.p();
    if p == 2 {
        return Err(StableError::UnsupportedPrime);
    }
    let vl = n.lambda_valuation()?;
    if vl < Q::zero() {
        return Err(StableError::Invalid("v(lambda) < 0".into()));
    }
    if vl.is_zero() {
        if p > 3 && j_nonnegative(n)? {
            return Ok(ReductionType::Good1a);
        }
        return Ok(ReductionType::TwoComp3(SubRoute::Via1b));
    }
    if n.gamma() + 1 != p {
        return Ok(ReductionType::TwoComp3(SubRoute::Via2a));
    }
    let vt2 = tau_valuation(p) * 2;
    Ok(match vl.cmp(&vt2) {
        core::cmp::Ordering::Equal => ReductionType::Good1b,
        core::cmp::Ordering::Greater => ReductionType::Mumford2,
        core::cmp::Ordering::Less => {
            let vs = vl / 2;
            if vs <= Q::new(p as i64 - 2, p as i64 - 1) {
                ReductionType::TwoComp3(SubRoute::Via2b3i)
            } else {
                ReductionType::TwoComp3(SubRoute::Via2b3ii)
            }
        }
    })
}

fn lcm(a: u32, b: u32) -> u32 {
    num_integer::lcm(a, b)
}

fn denom(q: Q) -> u32 {
    *q.denom() as u32
}

/// The extension this construction works over, before any enlargement the
/// builder discovers on the way.
pub fn required_extension(n: &NormalizedCover, t: ReductionType) -> Result<ExtensionSpec, StableError> {
    let p = n.p();
    let vtau = tau_valuation(p);
    let k = n.tower().residue_field();
    let mut e = lcm(p - 1, n.lambda_ramification());
    let mut f = n.tower().f();
    let mut adjoined = Vec::new();
    let mut add = |s: &str| adjoined.push(String::from(s));
    let vl = n.lambda_valuation()?;
    match t {
        ReductionType::Good1a => {
            e = lcm(e, denom(vtau / 3));
            add("tau^(1/3)");
        }
        ReductionType::Good1b => {}
        ReductionType::TwoComp3(SubRoute::Via2a) => {
            e = lcm(e, denom(vtau / 2));
            add("tau^(1/2)");
        }
        ReductionType::TwoComp3(SubRoute::Via1b) => {
            let qd = j_quadratic(n.beta(), n.gamma(), n.lambda());
            let vq = qd.val()?;
            let unit = qd.mul_pi_power(-qd.ord()?).residue()?;
            if !k.is_square(unit) {
                f *= 2;
            }
            let vb = (vtau - vq / 2) / 2;
            e = lcm(lcm(e, denom(vq / 2)), denom(vb));
            add("sqrt(Q(lambda))");
            add(&alloc::format!("pi^({}) (radius)", vb));
        }
        ReductionType::Mumford2 | ReductionType::TwoComp3(_) => {
            let lam = n.lambda();
            let unit = lam.mul_pi_power(-lam.ord()?).residue()?;
            let mut need_f2 = !k.is_square(unit);
            let vs = vl / 2;
            e = lcm(e, denom(vs));
            add("lambda^(1/2)");
            if let ReductionType::TwoComp3(_) = t {
                let vb = (vtau - vs) / 2;
                e = lcm(e, denom(vb));
                let beta = n.beta() as i64;
                if (beta + 1) % p as i64 != 0 && !k.is_square(k.from_int(-beta)) {
                    need_f2 = true;
                }
                add(&alloc::format!("pi^({}) (radius)", vb));
            }
            if need_f2 {
                f *= 2;
            }
        }
    }
    let c = &n.witness().constant;
    if let Ok(Valuation::Finite(vc)) = c.valuation() {
        let root = vc / Q::from_integer(p as i64);
        if !(root * Q::from_integer(e as i64)).is_integer() {
            e = lcm(e, denom(root));
            add("c^(1/p)");
        }
    }
    Ok(ExtensionSpec { e, f, adjoined })
}
