use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{
    required_extension, verify_model, Check, ChartRecord, Component, ComponentEquation, Edge, ExtensionSpec,
    ReductionType, StableError, StableModel, SubRoute,
};
use crate::cover::{j_quadratic, NormalizedCover};
use crate::padic::{FieldTower, PadicElement, PadicError, PadicPoly, Valuation, Q};
use crate::residue::as_genus;
use crate::torsor::{
    chart_degree, chart_transform, torsor_case, torsor_case_improving, x_power, TorsorCase, TorsorOutcome,
    TorsorPayload,
};

const MAX_ENLARGEMENTS: usize = 6;

/// Builds the stable model over the least tower the construction needs,
/// enlarging it whenever a root turns out to be missing.
pub fn build_stable_model(n: &NormalizedCover, t: ReductionType) -> Result<StableModel, StableError> {
    let spec = required_extension(n, t)?;
    let units = (n.tower().precision() / n.tower().e()).max(1);
    let (mut e, mut f) = (spec.e, spec.f);
    for _ in 0..MAX_ENLARGEMENTS {
        let tower = FieldTower::new(n.p(), e, f, units * e)?;
        match build_stable_model_in(n, t, &tower, spec.adjoined.clone()) {
            Err(StableError::Padic(PadicError::NeedsExtension { e: e2, f: f2 })) => {
                let (ne, nf) = (num_integer::lcm(e, e2), num_integer::lcm(f, f2));
                if (ne, nf) == (e, f) {
                    return Err(StableError::ConstructionMismatch("extension did not grow".into()));
                }
                e = ne;
                f = nf;
            }
            r => return r,
        }
    }
    Err(StableError::ConstructionMismatch("too many tower enlargements".into()))
}

/// Builds the model in a fixed tower.
pub fn build_stable_model_in(
    n: &NormalizedCover,
    t: ReductionType,
    tower: &FieldTower,
    adjoined: Vec<String>,
) -> Result<StableModel, StableError> {
    let b = Builder::new(n, tower)?;
    let (components, edges, auxiliary, checks) = match t {
        ReductionType::Good1a => b.good_1a()?,
        ReductionType::Good1b => b.good_1b()?,
        ReductionType::Mumford2 => b.mumford()?,
        ReductionType::TwoComp3(SubRoute::Via1b) => b.via_1b()?,
        ReductionType::TwoComp3(SubRoute::Via2a) => b.via_2a()?,
        ReductionType::TwoComp3(s) => b.via_2b3(s == SubRoute::Via2b3ii)?,
    };
    let mut m = StableModel {
        p: n.p(),
        reduction: t,
        components,
        edges,
        extension: ExtensionSpec {
            e: tower.e(),
            f: tower.f(),
            adjoined,
        },
        auxiliary,
        checks: Vec::new(),
    };
    let mut report = checks;
    report.extend(verify_model(&m));
    m.checks = report;
    Ok(m)
}

type Built = (Vec<Component>, Vec<Edge>, Vec<ChartRecord>, Vec<Check>);

struct Builder {
    t: FieldTower,
    p: u32,
    beta: u32,
    gamma: u32,
    lambda: PadicElement,
    vtau: Q,
}

fn mismatch(what: &str, o: &TorsorOutcome) -> StableError {
    StableError::ConstructionMismatch(format!("{}: expected a certified chart, got {}", what, o.case.name()))
}

impl Builder {
    fn new(n: &NormalizedCover, t: &FieldTower) -> Result<Self, StableError> {
        Ok(Builder {
            t: t.clone(),
            p: n.p(),
            beta: n.beta(),
            gamma: n.gamma(),
            lambda: n.lambda_in(t)?,
            vtau: t.tau_valuation(),
        })
    }

    fn int(&self, k: i64) -> PadicElement {
        PadicElement::from_int(&self.t, k)
    }

    fn ratio(&self, a: i64, b: i64) -> PadicElement {
        PadicElement::from_ratio(&self.t, a, b)
    }

    fn pi_val(&self, v: Q) -> Result<PadicElement, StableError> {
        Ok(PadicElement::pi_power(&self.t, self.t.pi_exponent(v)?))
    }

    /// `Π (x - r)^k` times `lead`.
    fn product(&self, lead: &PadicElement, factors: &[(PadicPoly, u32)]) -> PadicPoly {
        let mut out = PadicPoly::constant(lead.clone());
        for (g, k) in factors {
            out = out.mul(&g.pow(*k));
        }
        out
    }

    /// `x(x-1)^β(x-λ)^γ`.
    fn f(&self) -> PadicPoly {
        self.product(
            &PadicElement::one(&self.t),
            &[
                (PadicPoly::x(&self.t), 1),
                (PadicPoly::linear(&self.int(1)), self.beta),
                (PadicPoly::linear(&self.lambda), self.gamma),
            ],
        )
    }

    fn n(&self) -> i64 {
        1 + self.beta as i64 + self.gamma as i64
    }

    /// Blows up `(x - d, b)` and certifies an Artin–Schreier component.
    fn as_chart(
        &self,
        f: &PadicPoly,
        d: &PadicElement,
        b: &PadicElement,
        h: Option<PadicPoly>,
        coordinate: String,
    ) -> Result<Component, StableError> {
        let deg = chart_degree(f.degree(), self.p);
        let g = chart_transform(f, d, b, deg)?;
        let h = h.unwrap_or_else(|| x_power(&self.t, deg / self.p as usize));
        let mut o = torsor_case(&g, &h)?;
        if o.case != TorsorCase::ArtinSchreier {
            o = torsor_case_improving(&g, &h)?;
        }
        self.as_component(o, ChartRecord {
            coordinate,
            center: d.approx_string(),
            radius_valuation: b.val()?,
            degree: deg,
            case: TorsorCase::Undecided,
            w: Valuation::Infinity,
        })
    }

    fn as_component(&self, o: TorsorOutcome, mut chart: ChartRecord) -> Result<Component, StableError> {
        chart.case = o.case;
        chart.w = o.w;
        match o.payload {
            TorsorPayload::ArtinSchreier(c) if o.case == TorsorCase::ArtinSchreier => {
                let genus = as_genus(&c).map_err(|e| {
                    StableError::ConstructionMismatch(format!("{}: {}", chart.coordinate, e))
                })?;
                Ok(Component {
                    genus,
                    p_rank: c.p_rank(),
                    branch_count: c.branch_count(),
                    equation: ComponentEquation::ArtinSchreier(c),
                    chart,
                })
            }
            _ => Err(StableError::ConstructionMismatch(format!(
                "{}: expected an Artin-Schreier chart, got {}",
                chart.coordinate,
                o.case.name()
            ))),
        }
    }

    fn insep_component(&self, o: TorsorOutcome, mut chart: ChartRecord, branch_count: usize) -> Result<Component, StableError> {
        chart.case = o.case;
        chart.w = o.w;
        match o.payload {
            TorsorPayload::Inseparable(c) => Ok(Component {
                genus: c.genus(),
                p_rank: 0,
                branch_count,
                equation: ComponentEquation::Inseparable(c),
                chart,
            }),
            _ => Err(StableError::ConstructionMismatch(format!(
                "{}: expected an inseparable chart, got {}",
                chart.coordinate,
                o.case.name()
            ))),
        }
    }

    fn record(&self, coordinate: &str, center: &str, radius: Q, degree: usize) -> ChartRecord {
        ChartRecord {
            coordinate: coordinate.into(),
            center: center.into(),
            radius_valuation: radius,
            degree,
            case: TorsorCase::Undecided,
            w: Valuation::Infinity,
        }
    }

    fn good_1a(&self) -> Result<Built, StableError> {
        let (beta, gamma) = (self.beta as i64, self.gamma as i64);
        let n = self.n();
        let f = self.f();
        let s = self.lambda.scale_int(beta + 1).add(&self.int(gamma + 1));
        let d = s.div(&self.int(2 * n))?;
        let b = self.pi_val(self.vtau / 3)?;
        // g(x) = x^2 - x·S/n + λ/n, so v(g(d)) ≥ v(b²) iff v(j) ≥ 0
        let gd = d.square().sub(&d.mul(&s).div(&self.int(n))?).add(&self.lambda.div(&self.int(n))?);
        let vb2 = b.val()? * 2;
        let vgd = gd.valuation_lower_bound();
        let fd1 = f.derivative().eval(&d).valuation_lower_bound();
        let fd2 = f.derivative().derivative().eval(&d).valuation_lower_bound();
        let check = Check {
            name: "center-consistency".into(),
            passed: vgd >= Valuation::Finite(vb2),
            detail: format!(
                "v(g(d)) >= {}, v(b^2) = {}, v(f'(d)) >= {}, v(f''(d)) >= {}",
                show(vgd),
                vb2,
                show(fd1),
                show(fd2)
            ),
        };
        let c = self.as_chart(&f, &d, &b, None, "x1 = b/(x0 - d), b = tau^(1/3)".into())?;
        Ok((vec![c], vec![], vec![], vec![check]))
    }

    fn good_1b(&self) -> Result<Built, StableError> {
        let p = self.p;
        let tau = PadicElement::tau(&self.t)?;
        let mu = self.lambda.div(&tau)?;
        // f(τx) = τ^p · x(x - λ/τ)^{p-1}(τx - 1)^β
        let f1 = self.product(
            &PadicElement::one(&self.t),
            &[
                (PadicPoly::x(&self.t), 1),
                (PadicPoly::linear(&mu), p - 1),
                (PadicPoly::new(&self.t, vec![self.int(-1), tau.clone()]), self.beta),
            ],
        );
        let sign = if self.beta.is_multiple_of(2) { 1 } else { -1 };
        let h = PadicPoly::monomial(self.int(sign), 1);
        let o = torsor_case(&f1, &h)?;
        let c = self.as_component(o, self.record("x1 = x0/tau", "0", self.vtau, f1.degree()))?;
        Ok((vec![c], vec![], vec![], vec![]))
    }

    fn mumford(&self) -> Result<Built, StableError> {
        let p = self.p;
        let one = PadicElement::one(&self.t);
        // x0 = λ·x2: drops λ^p
        let fa = self.product(
            &one,
            &[
                (PadicPoly::x(&self.t), 1),
                (PadicPoly::linear(&one), p - 1),
                (PadicPoly::new(&self.t, vec![self.int(-1), self.lambda.clone()]), self.beta),
            ],
        );
        let zero = PadicPoly::zero(&self.t);
        let a = torsor_case(&fa, &zero)?;
        let ca = self.insep_component(a, self.record("x2 = x0/lambda", "0", self.lambda.val()?, fa.degree()), 2)?;
        let f = self.f();
        let bo = torsor_case(&f, &zero)?;
        let cb = self.insep_component(bo, self.record("x0", "0", Q::from_integer(0), f.degree()), 2)?;
        // the annulus x0 = λ^{1/2}·x1 splits into p lines
        let s = self.lambda.sqrt()?;
        let fm = self.product(
            &one,
            &[
                (PadicPoly::x(&self.t), 1),
                (PadicPoly::linear(&s), p - 1),
                (PadicPoly::new(&self.t, vec![self.int(-1), s.clone()]), self.beta),
            ],
        );
        let sign = if self.beta.is_multiple_of(2) { 1 } else { -1 };
        let split = torsor_case(&fm, &PadicPoly::monomial(self.int(sign), 1))?;
        if split.case != TorsorCase::Split {
            return Err(mismatch("x1 = x0/lambda^(1/2)", &split));
        }
        let mut aux = self.record("x1 = x0/lambda^(1/2)", "0", s.val()?, fm.degree());
        aux.case = split.case;
        aux.w = split.w;
        Ok((vec![ca, cb], vec![(0, 1, p)], vec![aux], vec![]))
    }

    fn via_2a(&self) -> Result<Built, StableError> {
        let (beta, gamma) = (self.beta as i64, self.gamma as i64);
        let n = self.n();
        let one = PadicElement::one(&self.t);
        let b = self.pi_val(self.vtau / 2)?;
        // exact critical point of f near (γ+1)/n
        let s = self.lambda.scale_int(beta + 1).add(&self.int(gamma + 1));
        let g = PadicPoly::new(
            &self.t,
            vec![self.lambda.div(&self.int(n))?, s.div(&self.int(n))?.neg(), one.clone()],
        );
        let d = g.newton_root(&self.ratio(gamma + 1, n))?;
        let f = self.f();
        let c1 = self.as_chart(&f, &d, &b, None, "x1 = b/(x0 - d), b = tau^(1/2)".into())?;
        // x0 = λy: f = λ^{1+γ}·y(y-1)^γ(λy-1)^β
        let f2 = self.product(
            &one,
            &[
                (PadicPoly::x(&self.t), 1),
                (PadicPoly::linear(&one), self.gamma),
                (PadicPoly::new(&self.t, vec![self.int(-1), self.lambda.clone()]), self.beta),
            ],
        );
        // critical points: nλy² - (1 + γ + λ(1+β))y + 1 = 0
        let q2 = PadicPoly::new(
            &self.t,
            vec![
                one.clone(),
                self.lambda.scale_int(1 + beta).add(&self.int(1 + gamma)).neg(),
                self.lambda.scale_int(n),
            ],
        );
        let d2 = q2.newton_root(&self.ratio(1, gamma + 1))?;
        let c2 = self.as_chart(&f2, &d2, &b, None, "x2 = b/(x0/lambda - d), b = tau^(1/2)".into())?;
        Ok((vec![c1, c2], vec![(0, 1, 1)], vec![], vec![]))
    }

    fn via_1b(&self) -> Result<Built, StableError> {
        let (beta, gamma) = (self.beta as i64, self.gamma as i64);
        let n = self.n();
        let qd = j_quadratic(self.beta, self.gamma, &self.lambda);
        let vq = qd.val()?;
        let root = qd.sqrt()?;
        let s = self.lambda.scale_int(beta + 1).add(&self.int(gamma + 1));
        let vb = (self.vtau - vq / 2) / 2;
        let b = self.pi_val(vb)?;
        let f = self.f();
        let mut comps = Vec::new();
        for (k, r) in [root.clone(), root.neg()].iter().enumerate() {
            let d = s.add(r).div(&self.int(2 * n))?;
            comps.push(self.as_chart(
                &f,
                &d,
                &b,
                None,
                format!("x{} = b/(x0 - d{}), v(b) = {}", k + 1, k + 1, vb),
            )?);
        }
        Ok((comps, vec![(0, 1, 1)], vec![], vec![]))
    }

    fn via_2b3(&self, tilde: bool) -> Result<Built, StableError> {
        let p = self.p;
        let beta = self.beta;
        let one = PadicElement::one(&self.t);
        let s = self.lambda.sqrt()?;
        let eps = s.div(&one.add(&s))?;
        let ome = one.sub(&eps);
        // x1 = x0/(x0 + λ^{1/2}) sends (0, λ, 1, ∞) to (0, ε, 1-ε, 1)
        let big_f = self.product(
            &one,
            &[
                (PadicPoly::x(&self.t), 1),
                (PadicPoly::linear(&eps), p - 1),
                (PadicPoly::linear(&one), p - beta),
                (PadicPoly::linear(&ome), beta),
            ],
        );
        let h = PadicPoly::new(&self.t, vec![PadicElement::zero(&self.t), one.neg(), one.clone()]);
        // critical points of F/h^p: (p-1)(x-1)(x-1+ε) - βx(x-ε) = 0
        let crit = PadicPoly::linear(&one)
            .mul(&PadicPoly::linear(&ome))
            .scale(&self.int(p as i64 - 1))
            .sub(&PadicPoly::x(&self.t).mul(&PadicPoly::linear(&eps)).scale(&self.int(beta as i64)))
            .trimmed();
        let vb = (self.vtau - s.val()?) / 2;
        let b = self.pi_val(vb)?;
        let k = self.t.residue_field();
        let cbar = crit.residue()?;
        let want = cbar.degree().unwrap_or(0);
        let roots = cbar.roots(k);
        if roots.len() < want {
            return Err(PadicError::NeedsExtension {
                e: self.t.e(),
                f: 2 * self.t.f(),
            }
            .into());
        }
        let deg = 2 * p as usize;
        let mut comps = Vec::new();
        let hh = |poly: &PadicPoly, d: &PadicElement| -> Result<Option<PadicPoly>, StableError> {
            Ok(if tilde {
                Some(chart_transform(poly, d, &b, 2)?)
            } else {
                None
            })
        };
        for (i, r) in roots.iter().enumerate() {
            let d = crit.newton_root(&PadicElement::from_residue(&self.t, *r))?;
            let name = format!("x2 = b/(x1 - d{}), x1 = x0/(x0 + lambda^(1/2)), v(b) = {}", i + 1, vb);
            comps.push(self.as_chart(&big_f, &d, &b, hh(&h, &d)?, name)?);
        }
        if want < 2 {
            // the second critical point sits at x1 = ∞
            let fs = big_f.reversed(deg);
            let hs = h.reversed(2);
            let d = PadicElement::zero(&self.t);
            let name = format!("x2 = b*x1, x1 = x0/(x0 + lambda^(1/2)), v(b) = {}", vb);
            comps.push(self.as_chart(&fs, &d, &b, hh(&hs, &d)?, name)?);
        }
        Ok((comps, vec![(0, 1, 1)], vec![], vec![]))
    }
}

fn show(v: Valuation) -> String {
    match v {
        Valuation::Finite(q) => format!("{}", q),
        Valuation::Infinity => "inf".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable::classify;
    use crate::stable::tests::cover;

    fn model(p: u32, beta: u32, gamma: u32, lambda: &str) -> StableModel {
        let n = cover(p, beta, gamma, lambda);
        let t = classify(&n).unwrap();
        build_stable_model(&n, t).unwrap()
    }

    #[test]
    fn good_1a_example() {
        let m = model(7, 1, 1, "3");
        assert_eq!(m.reduction, ReductionType::Good1a);
        assert_eq!(m.components.len(), 1);
        assert_eq!((m.components[0].genus, m.components[0].p_rank), (6, 0));
        assert_eq!(m.extension.e, 18);
        assert!(m.all_checks_pass(), "{:?}", m.checks);
    }

    #[test]
    fn good_1b_example() {
        let m = model(5, 1, 4, "tau^2");
        let c = &m.components[0];
        assert_eq!((c.genus, c.p_rank, c.branch_count), (4, 4, 2));
        assert!(m.all_checks_pass(), "{:?}", m.checks);
    }

    #[test]
    fn mumford_example() {
        let m = model(5, 1, 4, "5^3");
        assert_eq!(m.edges, vec![(0, 1, 5)]);
        assert!(m.components.iter().all(|c| c.genus == 0));
        assert!(m.all_checks_pass(), "{:?}", m.checks);
    }

    #[test]
    fn two_component_examples() {
        for (p, b, g, l) in [(5, 2, 1, "5"), (5, 1, 4, "5"), (5, 4, 4, "5"), (3, 1, 2, "2"), (5, 1, 4, "tau^2/pi"), (7, 1, 2, "2")] {
            let m = model(p, b, g, l);
            assert_eq!(m.components.len(), 2, "{} {} {} {}", p, b, g, l);
            for c in &m.components {
                assert_eq!(c.genus, (p as u64 - 1) / 2);
            }
            assert!(m.all_checks_pass(), "{:?}", m.checks);
        }
    }
}
