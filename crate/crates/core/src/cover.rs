//! Four-point `p`-cyclic covers `z^p = c·Π (x - b_i)^{a_i}` and their
//! normalization to `z_0^p = x_0(x_0-1)^β(x_0-λ)^γ` with `v(λ) ≥ 0`, `λ̄ ≠ 1`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::padic::{parse_token, FieldTower, PadicElement, PadicError, Token, Valuation, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("branch points {0} and {1} coalesce at working precision")]
    CoalescingBranchPoints(usize, usize),
    #[error("exponent {0} is divisible by p")]
    NonCyclicExponent(u32),
    #[error("exponents must sum to 0 mod p")]
    ExponentSum,
    #[error("invalid cover: {0}")]
    Invalid(&'static str),
    #[error("normalization witness failed to verify")]
    WitnessMismatch,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// A point of the projective line given by a token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchPoint {
    Finite(Token),
    Infinity,
}

impl BranchPoint {
    /// Accepts a token or `inf`.
    pub fn parse(s: &str) -> Result<Self, PadicError> {
        match s.trim() {
            "inf" | "oo" | "infinity" => Ok(BranchPoint::Infinity),
            t => Ok(BranchPoint::Finite(parse_token(t)?)),
        }
    }

    pub fn int(n: i64) -> Self {
        BranchPoint::Finite(Token::int(n))
    }

    pub fn token(&self) -> Option<&Token> {
        match self {
            BranchPoint::Finite(t) => Some(t),
            BranchPoint::Infinity => None,
        }
    }
}

impl fmt::Display for BranchPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchPoint::Finite(t) => write!(f, "{}", t),
            BranchPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Four branch points with their exponents. Input order is read as the
/// roles `(0, 1, ∞, λ)` when the identity labeling is admissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverDatum {
    p: u32,
    points: [BranchPoint; 4],
    exponents: [u32; 4],
    constant: Option<Token>,
}

impl CoverDatum {
    pub fn new(
        p: u32,
        points: [BranchPoint; 4],
        exponents: [u32; 4],
        constant: Option<Token>,
    ) -> Result<Self, CoverError> {
        if p < 2 || !crate::residue::field::is_prime(p as u64) {
            return Err(CoverError::Invalid("p must be a prime"));
        }
        let mut exps = [0u32; 4];
        for (i, &a) in exponents.iter().enumerate() {
            if a % p == 0 {
                return Err(CoverError::NonCyclicExponent(a));
            }
            exps[i] = a % p;
        }
        if exps.iter().map(|&a| a as u64).sum::<u64>() % p as u64 != 0 {
            return Err(CoverError::ExponentSum);
        }
        let infs: Vec<usize> = (0..4)
            .filter(|&i| points[i] == BranchPoint::Infinity)
            .collect();
        if infs.len() > 1 {
            return Err(CoverError::CoalescingBranchPoints(infs[0], infs[1]));
        }
        if let Some(c) = &constant {
            if c.is_zero_rational(p) {
                return Err(CoverError::Invalid("leading constant is zero"));
            }
        }
        Ok(CoverDatum {
            p,
            points,
            exponents: exps,
            constant,
        })
    }

    /// `z^p = x(x-1)^β(x-λ)^γ`, points in the order `(0, 1, ∞, λ)`.
    pub fn standard(p: u32, beta: u32, gamma: u32, lambda: Token) -> Result<Self, CoverError> {
        if beta == 0 || gamma == 0 || beta >= p || gamma >= p {
            return Err(CoverError::Invalid("β and γ must lie in 1..p-1"));
        }
        let n = 1 + beta + gamma;
        if n.is_multiple_of(p) {
            return Err(CoverError::Invalid("1+β+γ must be prime to p"));
        }
        let a_inf = (p - n % p) % p;
        Self::new(
            p,
            [
                BranchPoint::int(0),
                BranchPoint::int(1),
                BranchPoint::Infinity,
                BranchPoint::Finite(lambda),
            ],
            [1, beta, a_inf, gamma],
            None,
        )
    }

    /// `z^p = (x-c_1)^{p-1}(x+c_1)(x-c_2)^{p-1}(x+c_2)`, ordered so that the
    /// identity labeling is `x_0 = ((c_1-c_2)/2c_1)·(x+c_1)/(x-c_2)`.
    pub fn qwerty(p: u32, c1: Token, c2: Token) -> Result<Self, CoverError> {
        Self::new(
            p,
            [
                BranchPoint::Finite(-c1.clone()),
                BranchPoint::Finite(c1),
                BranchPoint::Finite(c2.clone()),
                BranchPoint::Finite(-c2),
            ],
            [1, p - 1, p - 1, 1],
            None,
        )
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn points(&self) -> &[BranchPoint; 4] {
        &self.points
    }

    pub fn exponents(&self) -> [u32; 4] {
        self.exponents
    }

    pub fn constant(&self) -> Option<&Token> {
        self.constant.as_ref()
    }

    /// Least `e` (a multiple of `p-1`) in which every token is a value.
    pub fn natural_ramification(&self) -> u32 {
        let base = (self.p - 1).max(1) as i64;
        let mut e = base;
        for t in self.points.iter().filter_map(|b| b.token()).chain(self.constant.iter()) {
            e = num_integer::lcm(e, t.min_ramification(self.p) as i64);
        }
        e as u32
    }

    /// Tower at `units` digits of `p`-adic precision.
    pub fn tower(&self, units: u32) -> Result<FieldTower, PadicError> {
        let e = self.natural_ramification();
        FieldTower::new(self.p, e, 1, units.max(1) * e)
    }
}

/// Which input point plays each role.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub zero: usize,
    pub one: usize,
    pub inf: usize,
    pub lambda: usize,
}

impl Labeling {
    pub const IDENTITY: Labeling = Labeling {
        zero: 0,
        one: 1,
        inf: 2,
        lambda: 3,
    };

    /// All 24 labelings, in lexicographic order of `(zero, one, inf)`.
    pub fn all() -> Vec<Labeling> {
        let mut out = Vec::new();
        for zero in 0..4 {
            for one in 0..4 {
                for inf in 0..4 {
                    if zero == one || zero == inf || one == inf {
                        continue;
                    }
                    let lambda = 6 - zero - one - inf;
                    out.push(Labeling {
                        zero,
                        one,
                        inf,
                        lambda,
                    });
                }
            }
        }
        out
    }

    fn roles(&self) -> [usize; 4] {
        [self.zero, self.one, self.lambda, self.inf]
    }
}

/// Elementary moves applied by [`normalize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// `x ↦ x/λ`, used when `v(λ) < 0`.
    Inversion,
    /// `x ↦ 1 - x`, used when `λ̄ = 1`.
    OneMinus,
}

/// `x ↦ (a x + b)/(c x + d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moebius {
    pub a: Token,
    pub b: Token,
    pub c: Token,
    pub d: Token,
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({})*x + ({}))/(({})*x + ({}))", self.a, self.b, self.c, self.d)
    }
}

/// Certificate for `f_old(x) = c·r(x)^p·f_new(m(x))^u`, with
/// `r = Π (x - b_i)^{r_i}` over the finite input points.
#[derive(Clone, Debug)]
pub struct Witness {
    pub labeling: Labeling,
    pub moves: Vec<Move>,
    pub moebius: Moebius,
    pub u: u32,
    pub r_exponents: [i64; 4],
    pub constant: PadicElement,
    /// Number of sample points at which the identity was checked.
    pub samples: usize,
}

impl Witness {
    pub fn is_identity(&self) -> bool {
        self.labeling == Labeling::IDENTITY && self.moves.is_empty()
    }
}

/// `z_0^p = x_0(x_0-1)^β(x_0-λ)^γ` with `v(λ) ≥ 0` and `λ̄ ≠ 1`.
#[derive(Clone, Debug)]
pub struct NormalizedCover {
    p: u32,
    beta: u32,
    gamma: u32,
    lambda_token: Token,
    lambda: PadicElement,
    tower: FieldTower,
    witness: Witness,
}

impl NormalizedCover {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn lambda(&self) -> &PadicElement {
        &self.lambda
    }

    /// Symbolic `λ`, re-evaluable in any tower containing its tokens.
    pub fn lambda_token(&self) -> &Token {
        &self.lambda_token
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    /// `v(λ)`.
    pub fn lambda_valuation(&self) -> Result<Q, PadicError> {
        self.lambda.val()
    }

    /// `λ` evaluated in another tower.
    pub fn lambda_in(&self, t: &FieldTower) -> Result<PadicElement, PadicError> {
        if t == &self.tower {
            return Ok(self.lambda.clone());
        }
        self.lambda_token.eval(t)
    }

    /// Least ramification in which `λ` lives, a multiple of `p - 1`.
    pub fn lambda_ramification(&self) -> u32 {
        self.lambda_token.min_ramification(self.p)
    }

    /// The same cover with `λ` re-evaluated at `factor` times the precision.
    pub fn with_precision_factor(&self, factor: u32) -> Result<Self, PadicError> {
        let t = self.tower.with_precision_factor(factor)?;
        let mut out = self.clone();
        out.lambda = self.lambda_token.eval(&t)?;
        out.tower = t;
        Ok(out)
    }
}

fn check_distinct(values: &[Option<PadicElement>; 4]) -> Result<(), CoverError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if let (Some(a), Some(b)) = (&values[i], &values[j]) {
                if a.sub(b).is_indistinguishable_from_zero() {
                    return Err(CoverError::CoalescingBranchPoints(i, j));
                }
            }
        }
    }
    Ok(())
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| (a as u64 * x as u64) % p as u64 == 1).unwrap()
}

/// Normalizes with the move sequence: start from the identity labeling,
/// invert if `v(λ) < 0`, then apply `x ↦ 1 - x` if `λ̄ = 1`.
pub fn normalize(datum: &CoverDatum, tower: &FieldTower) -> Result<NormalizedCover, CoverError> {
    let mut lab = Labeling::IDENTITY;
    let mut moves = Vec::new();
    for _ in 0..3 {
        let lam = labeling_lambda(datum, tower, lab)?;
        if lam.val()? < Q::zero() {
            lab = Labeling {
                one: lab.lambda,
                lambda: lab.one,
                ..lab
            };
            moves.push(Move::Inversion);
        } else if lam.residue()? == 1 {
            lab = Labeling {
                zero: lab.one,
                one: lab.zero,
                ..lab
            };
            moves.push(Move::OneMinus);
        } else {
            return normalize_with(datum, tower, lab, moves);
        }
    }
    unreachable!("two moves always reach an admissible labeling")
}

/// Every admissible normalization, one per labeling that yields `v(λ) ≥ 0`
/// and `λ̄ ≠ 1`.
pub fn admissible_normalizations(
    datum: &CoverDatum,
    tower: &FieldTower,
) -> Result<Vec<NormalizedCover>, CoverError> {
    let mut out = Vec::new();
    for lab in Labeling::all() {
        let lam = labeling_lambda(datum, tower, lab)?;
        if lam.val()? >= Q::zero() && lam.residue()? != 1 {
            out.push(normalize_with(datum, tower, lab, Vec::new())?);
        }
    }
    Ok(out)
}

fn eval_points(datum: &CoverDatum, tower: &FieldTower) -> Result<[Option<PadicElement>; 4], CoverError> {
    let mut vals: [Option<PadicElement>; 4] = Default::default();
    for (i, b) in datum.points.iter().enumerate() {
        vals[i] = match b {
            BranchPoint::Finite(t) => Some(t.eval(tower)?),
            BranchPoint::Infinity => None,
        };
    }
    check_distinct(&vals)?;
    Ok(vals)
}

/// `m` with `m(P_0) = 0`, `m(P_1) = 1`, `m(P_∞) = ∞`.
fn labeling_moebius(datum: &CoverDatum, lab: Labeling) -> Moebius {
    let pt = |i: usize| datum.points[i].token().cloned();
    let one = || Token::int(1);
    let zero = || Token::int(0);
    let (b0, b1, binf) = (pt(lab.zero), pt(lab.one), pt(lab.inf));
    let m = match (b0, b1, binf) {
        (Some(b0), Some(b1), Some(bi)) => Moebius {
            a: b1.clone() - bi.clone(),
            b: -(b0.clone() * (b1.clone() - bi.clone())),
            c: b1.clone() - b0.clone(),
            d: -(bi * (b1 - b0)),
        },
        (Some(b0), Some(b1), None) => Moebius {
            a: one(),
            b: -b0.clone(),
            c: zero(),
            d: b1 - b0,
        },
        (None, Some(b1), Some(bi)) => Moebius {
            a: zero(),
            b: b1 - bi.clone(),
            c: one(),
            d: -bi,
        },
        (Some(b0), None, Some(bi)) => Moebius {
            a: one(),
            b: -b0,
            c: one(),
            d: -bi,
        },
        _ => unreachable!("at most one point at infinity"),
    };
    let p = datum.p;
    Moebius {
        a: m.a.simplified(p),
        b: m.b.simplified(p),
        c: m.c.simplified(p),
        d: m.d.simplified(p),
    }
}

fn lambda_token(datum: &CoverDatum, lab: Labeling, m: &Moebius) -> Token {
    let t = match datum.points[lab.lambda].token() {
        Some(b) => (m.a.clone() * b.clone() + m.b.clone()) / (m.c.clone() * b.clone() + m.d.clone()),
        None => m.a.clone() / m.c.clone(),
    };
    t.simplified(datum.p)
}

fn labeling_lambda(datum: &CoverDatum, tower: &FieldTower, lab: Labeling) -> Result<PadicElement, CoverError> {
    eval_points(datum, tower)?;
    let m = labeling_moebius(datum, lab);
    Ok(lambda_token(datum, lab, &m).eval(tower)?)
}

/// Normalizes along a fixed labeling and verifies the witness.
pub fn normalize_with(
    datum: &CoverDatum,
    tower: &FieldTower,
    lab: Labeling,
    moves: Vec<Move>,
) -> Result<NormalizedCover, CoverError> {
    let p = datum.p;
    let vals = eval_points(datum, tower)?;
    let m = labeling_moebius(datum, lab);
    let lt = lambda_token(datum, lab, &m);
    let lambda = lt.eval(tower)?;
    let a = datum.exponents;
    let u = a[lab.zero];
    let ui = inv_mod(u, p);
    let beta = (a[lab.one] * ui) % p;
    let gamma = (a[lab.lambda] * ui) % p;
    let n = 1 + beta + gamma;
    // integer exponents of (x - b_i) in f_new(m(x))^u
    let mut new_exp = [0i64; 4];
    for (role, &i) in lab.roles().iter().enumerate() {
        new_exp[i] = match role {
            0 => u as i64,
            1 => (u * beta) as i64,
            2 => (u * gamma) as i64,
            _ => -((u * n) as i64),
        };
    }
    let mut r_exponents = [0i64; 4];
    for i in 0..4 {
        if vals[i].is_some() {
            let diff = a[i] as i64 - new_exp[i];
            debug_assert_eq!(diff.rem_euclid(p as i64), 0);
            r_exponents[i] = diff / p as i64;
        }
    }
    let me = [m.a.eval(tower)?, m.b.eval(tower)?, m.c.eval(tower)?, m.d.eval(tower)?];
    let det = me[0].mul(&me[3]).sub(&me[1].mul(&me[2]));
    // K with f_new(m(x))^u = K·Π (x - b_i)^{new_exp_i}
    let role_exp = [1u32, beta, gamma];
    let mut k_base = PadicElement::one(tower);
    if me[2].is_exact_zero() {
        k_base = me[0].div(&me[3])?.pow(n as i64)?;
    } else {
        for (j, &i) in [lab.zero, lab.one, lab.lambda].iter().enumerate() {
            let kappa = match &vals[i] {
                Some(q) => det.div(&me[2].mul(q).add(&me[3]))?,
                None => det.neg().div(&me[2])?,
            };
            k_base = k_base.mul(&kappa.pow(role_exp[j] as i64)?);
        }
        k_base = k_base.mul(&me[2].pow(-(n as i64))?);
    }
    let k = k_base.pow(u as i64)?;
    let c_old = match &datum.constant {
        Some(c) => c.eval(tower)?,
        None => PadicElement::one(tower),
    };
    let constant = c_old.div(&k)?;
    let samples = verify_witness(
        datum, tower, &vals, &me, &lambda, beta, gamma, u, &r_exponents, &c_old, &constant,
    )?;
    Ok(NormalizedCover {
        p,
        beta,
        gamma,
        lambda_token: lt,
        lambda,
        tower: tower.clone(),
        witness: Witness {
            labeling: lab,
            moves,
            moebius: m,
            u,
            r_exponents,
            constant,
            samples,
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn verify_witness(
    datum: &CoverDatum,
    tower: &FieldTower,
    vals: &[Option<PadicElement>; 4],
    me: &[PadicElement; 4],
    lambda: &PadicElement,
    beta: u32,
    gamma: u32,
    u: u32,
    r_exp: &[i64; 4],
    c_old: &PadicElement,
    c_new: &PadicElement,
) -> Result<usize, CoverError> {
    const WANT: usize = 6;
    let one = PadicElement::one(tower);
    let mut done = 0;
    let mut s = 2i64;
    while done < WANT && s < 2 + 40 {
        let x = PadicElement::from_int(tower, s);
        s += 1;
        let diffs: Vec<Option<PadicElement>> = vals.iter().map(|v| v.as_ref().map(|b| x.sub(b))).collect();
        let den = me[2].mul(&x).add(&me[3]);
        if diffs.iter().flatten().any(|d| d.is_indistinguishable_from_zero()) || den.is_indistinguishable_from_zero() {
            continue;
        }
        let mut lhs = c_old.clone();
        let mut rp = PadicElement::one(tower);
        for i in 0..4 {
            if let Some(d) = &diffs[i] {
                lhs = lhs.mul(&d.pow(datum.exponents[i] as i64)?);
                rp = rp.mul(&d.pow(r_exp[i] * datum.p as i64)?);
            }
        }
        let y = me[0].mul(&x).add(&me[1]).div(&den)?;
        let fy = y
            .mul(&y.sub(&one).pow(beta as i64)?)
            .mul(&y.sub(lambda).pow(gamma as i64)?);
        let rhs = c_new.mul(&rp).mul(&fy.pow(u as i64)?);
        let diff = lhs.sub(&rhs);
        let ok = diff.is_indistinguishable_from_zero()
            || match (diff.valuation(), lhs.valuation()) {
                (Ok(Valuation::Finite(dv)), Ok(Valuation::Finite(lv))) => {
                    // relative agreement to half the working precision
                    dv - lv >= Q::new(tower.precision() as i64, 2 * tower.e() as i64)
                }
                _ => false,
            };
        if !ok {
            return Err(CoverError::WitnessMismatch);
        }
        done += 1;
    }
    if done == 0 {
        return Err(CoverError::WitnessMismatch);
    }
    Ok(done)
}

/// `λ²(β+1)² - 2λ(β+γ+1-βγ) + (γ+1)²`.
pub fn j_quadratic(beta: u32, gamma: u32, lambda: &PadicElement) -> PadicElement {
    let t = lambda.tower();
    let (b, g) = (beta as i64, gamma as i64);
    let l2 = lambda.square().scale_int((b + 1) * (b + 1));
    let l1 = lambda.scale_int(2 * (b + g + 1 - b * g));
    l2.sub(&l1).add(&PadicElement::from_int(t, (g + 1) * (g + 1)))
}

/// `2p/(3(p-1))`, the valuation of `p^{2p/(3(p-1))}`.
pub fn j_shift(p: u32) -> Q {
    Q::new(2 * p as i64, 3 * (p as i64 - 1))
}

/// Lower bound for `v(j(λ))` that is exact whenever the quadratic is
/// distinguishable from zero.
pub fn j_valuation_bound(n: &NormalizedCover) -> Valuation {
    let q = j_quadratic(n.beta, n.gamma, &n.lambda);
    match q.valuation_lower_bound() {
        Valuation::Finite(v) => Valuation::Finite(v - j_shift(n.p)),
        Valuation::Infinity => Valuation::Infinity,
    }
}

/// `j(λ) = τ^{-2/3}·(λ²(β+1)² - 2λ(β+γ+1-βγ) + (γ+1)²)` in the least tower
/// containing `τ^{1/3}`, with its valuation. `τ^{-2/3}` stands in for
/// `p^{-2p/(3(p-1))}`; the two differ by a root of unity.
pub fn j_invariant(n: &NormalizedCover) -> Result<(PadicElement, Valuation), CoverError> {
    let q = j_quadratic(n.beta, n.gamma, &n.lambda);
    let v = match q.valuation() {
        Ok(Valuation::Finite(v)) => Valuation::Finite(v - j_shift(n.p)),
        Ok(Valuation::Infinity) => Valuation::Infinity,
        Err(e) => return Err(e.into()),
    };
    let shift = j_shift(n.p);
    let e = num_integer::lcm(n.tower.e() as i64, *shift.denom()) as u32;
    let t = n.tower.enlarged(e / n.tower.e(), n.tower.f())?;
    let lam = n.lambda_in(&t)?;
    let k = t.pi_exponent(shift)?;
    let value = j_quadratic(n.beta, n.gamma, &lam).mul_pi_power(-k);
    Ok((value, v))
}

/// `{λ, 1/λ, 1-λ, 1/(1-λ), λ/(λ-1), (λ-1)/λ}` without repetitions.
pub fn cross_ratio_orbit(lambda: &PadicElement) -> Result<Vec<PadicElement>, PadicError> {
    let one = PadicElement::one(lambda.tower());
    let l = lambda.clone();
    let om = one.sub(&l);
    let cands = [
        l.clone(),
        one.div(&l)?,
        om.clone(),
        one.div(&om)?,
        l.div(&l.sub(&one))?,
        l.sub(&one).div(&l)?,
    ];
    let mut out: Vec<PadicElement> = Vec::new();
    for c in cands {
        if !out.iter().any(|o| o.sub(&c).is_indistinguishable_from_zero()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Renders the normalized equation.
pub fn render_standard(n: &NormalizedCover) -> String {
    alloc::format!(
        "z^{} = x*(x - 1)^{}*(x - lambda)^{}",
        n.p, n.beta, n.gamma
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::parse_token;

    fn tok(s: &str) -> Token {
        parse_token(s).unwrap()
    }

    #[test]
    fn admissible_input_gives_identity_witness() {
        let d = CoverDatum::standard(7, 1, 1, Token::int(3)).unwrap();
        let t = d.tower(30).unwrap();
        let n = normalize(&d, &t).unwrap();
        assert!(n.witness().is_identity());
        assert_eq!((n.beta(), n.gamma()), (1, 1));
        assert_eq!(n.lambda(), &PadicElement::from_int(&t, 3));
        assert!(n.witness().samples >= 4);
    }

    #[test]
    fn inversion_move() {
        let d = CoverDatum::new(
            5,
            [BranchPoint::int(0), BranchPoint::int(1), BranchPoint::Infinity, BranchPoint::Finite(tok("1/5"))],
            [1, 1, 2, 1],
            None,
        )
        .unwrap();
        let t = d.tower(30).unwrap();
        let n = normalize(&d, &t).unwrap();
        assert_eq!(n.witness().moves, alloc::vec![Move::Inversion]);
        assert_eq!(n.lambda(), &PadicElement::from_int(&t, 5));
        assert_eq!((n.beta(), n.gamma()), (1, 1));
    }

    #[test]
    fn qwerty_lambda() {
        let d = CoverDatum::qwerty(7, Token::int(3), Token::int(2)).unwrap();
        let t = d.tower(30).unwrap();
        let n = normalize_with(&d, &t, Labeling::IDENTITY, Vec::new()).unwrap();
        // -(c1-c2)^2/(4 c1 c2) = -1/24
        assert_eq!(n.lambda(), &PadicElement::from_ratio(&t, -1, 24));
        assert_eq!((n.beta(), n.gamma()), (6, 1));
    }

    #[test]
    fn one_minus_move() {
        // λ = 1 + 5: residue 1
        let d = CoverDatum::standard(5, 1, 1, Token::int(6)).unwrap();
        let t = d.tower(30).unwrap();
        let n = normalize(&d, &t).unwrap();
        assert_eq!(n.witness().moves, alloc::vec![Move::OneMinus]);
        assert_eq!(n.lambda(), &PadicElement::from_int(&t, -5));
    }

    #[test]
    fn rejects_bad_data() {
        let pts = || [BranchPoint::int(0), BranchPoint::int(1), BranchPoint::Infinity, BranchPoint::int(2)];
        assert_eq!(CoverDatum::new(5, pts(), [1, 5, 2, 2], None), Err(CoverError::NonCyclicExponent(5)));
        assert_eq!(CoverDatum::new(5, pts(), [1, 1, 1, 1], None), Err(CoverError::ExponentSum));
        let d = CoverDatum::new(
            5,
            [BranchPoint::int(0), BranchPoint::int(1), BranchPoint::Infinity, BranchPoint::int(1)],
            [1, 1, 2, 1],
            None,
        )
        .unwrap();
        let t = d.tower(20).unwrap();
        assert_eq!(normalize(&d, &t).unwrap_err(), CoverError::CoalescingBranchPoints(1, 3));
    }

    #[test]
    fn j_closed_form_for_beta_gamma_one() {
        let d = CoverDatum::standard(7, 1, 1, Token::int(3)).unwrap();
        let t = d.tower(30).unwrap();
        let n = normalize(&d, &t).unwrap();
        let (_, v) = j_invariant(&n).unwrap();
        assert_eq!(v, Valuation::Finite(Q::new(2, 9)));
        // 4(λ²-λ+1)
        let q = j_quadratic(1, 1, n.lambda());
        let l = n.lambda();
        let closed = l.square().sub(l).add(&PadicElement::one(&t)).scale_int(4);
        assert!(q.sub(&closed).is_indistinguishable_from_zero());
    }

    #[test]
    fn orbits() {
        let t = FieldTower::new(5, 4, 1, 80).unwrap();
        assert_eq!(cross_ratio_orbit(&PadicElement::from_int(&t, 2)).unwrap().len(), 3);
        assert_eq!(cross_ratio_orbit(&PadicElement::from_int(&t, -1)).unwrap().len(), 3);
        assert_eq!(cross_ratio_orbit(&PadicElement::from_int(&t, 7)).unwrap().len(), 6);
    }
}
