//! JSON and text renderings of a run.

use std::fmt::Write as _;

use serde::Serialize;
use stable_cover::cover::{j_invariant, render_standard, Move, NormalizedCover};
use stable_cover::padic::{Valuation, Q};
use stable_cover::stable::{ExtensionSpec, ReductionType, StableModel};

pub fn q_str(q: Q) -> String {
    q.to_string()
}

pub fn val_str(v: Valuation) -> String {
    match v {
        Valuation::Finite(q) => q_str(q),
        Valuation::Infinity => "inf".into(),
    }
}

#[derive(Serialize, Default, Clone, Debug)]
pub struct Input {
    pub command: String,
    pub p: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<String>,
    pub precision: u32,
    pub allow_extension: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct Normalization {
    pub equation: String,
    pub beta: u32,
    pub gamma: u32,
    pub lambda: String,
    pub lambda_valuation: String,
    pub j_valuation: Option<String>,
    /// Input indices sent to `0, 1, ∞, λ`.
    pub labeling: [usize; 4],
    pub moves: Vec<&'static str>,
    pub moebius: String,
    pub u: u32,
    pub identity: bool,
}

impl Normalization {
    pub fn of(n: &NormalizedCover) -> Self {
        let w = n.witness();
        let l = w.labeling;
        Normalization {
            equation: render_standard(n),
            beta: n.beta(),
            gamma: n.gamma(),
            lambda: n.lambda_token().to_string(),
            lambda_valuation: n.lambda_valuation().map(q_str).unwrap_or_else(|_| "?".into()),
            j_valuation: j_invariant(n).ok().map(|(_, v)| val_str(v)),
            labeling: [l.zero, l.one, l.inf, l.lambda],
            moves: w
                .moves
                .iter()
                .map(|m| match m {
                    Move::Inversion => "inversion",
                    Move::OneMinus => "one-minus",
                })
                .collect(),
            moebius: w.moebius.to_string(),
            u: w.u,
            identity: w.is_identity(),
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct Extension {
    pub e: u32,
    pub f: u32,
    pub adjoined: Vec<String>,
}

impl From<&ExtensionSpec> for Extension {
    fn from(s: &ExtensionSpec) -> Self {
        Extension {
            e: s.e,
            f: s.f,
            adjoined: s.adjoined.clone(),
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct Chart {
    pub coordinate: String,
    pub center: String,
    pub radius_valuation: String,
    pub degree: usize,
    pub case: &'static str,
    pub w: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct ComponentReport {
    pub equation: String,
    pub genus: u64,
    pub p_rank: u64,
    pub branch_count: usize,
    pub chart: Chart,
}

#[derive(Serialize, Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The fixed-schema report for `classify`, `model` and `qwerty`.
#[derive(Serialize, Clone, Debug)]
pub struct RunReport {
    pub input: Input,
    pub normalization: Normalization,
    #[serde(rename = "type")]
    pub reduction: &'static str,
    pub subroute: Option<&'static str>,
    pub extension: Extension,
    pub components: Vec<ComponentReport>,
    pub edges: Vec<[u32; 3]>,
    pub checks: Vec<CheckReport>,
    pub ms: Option<u64>,
}

impl RunReport {
    pub fn classified(input: Input, n: &NormalizedCover, t: ReductionType, ext: &ExtensionSpec) -> Self {
        RunReport {
            input,
            normalization: Normalization::of(n),
            reduction: t.name(),
            subroute: t.subroute().map(|s| s.name()),
            extension: ext.into(),
            components: Vec::new(),
            edges: Vec::new(),
            checks: Vec::new(),
            ms: None,
        }
    }

    pub fn modelled(input: Input, n: &NormalizedCover, m: &StableModel) -> Self {
        let mut r = Self::classified(input, n, m.reduction, &m.extension);
        r.components = m
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| ComponentReport {
                equation: c.equation.render(&format!("x{}", i)),
                genus: c.genus,
                p_rank: c.p_rank,
                branch_count: c.branch_count,
                chart: Chart {
                    coordinate: c.chart.coordinate.clone(),
                    center: c.chart.center.clone(),
                    radius_valuation: q_str(c.chart.radius_valuation),
                    degree: c.chart.degree,
                    case: c.chart.case.name(),
                    w: val_str(c.chart.w),
                },
            })
            .collect();
        r.edges = m.edges.iter().map(|&(a, b, k)| [a as u32, b as u32, k]).collect();
        r.checks = m
            .checks
            .iter()
            .map(|c| CheckReport {
                name: c.name.clone(),
                passed: c.passed,
                detail: c.detail.clone(),
            })
            .collect();
        r
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let i = &self.input;
        let _ = write!(s, "input       p = {}", i.p);
        if let (Some(b), Some(g), Some(l)) = (i.beta, i.gamma, &i.lambda) {
            let _ = write!(s, ", beta = {}, gamma = {}, lambda = {}", b, g, l);
        }
        if let (Some(a), Some(b)) = (&i.c1, &i.c2) {
            let _ = write!(s, ", c1 = {}, c2 = {}", a, b);
        }
        let _ = writeln!(s, "  (precision {})", i.precision);
        let n = &self.normalization;
        let _ = writeln!(s, "normalized  {}", n.equation);
        let _ = writeln!(s, "            lambda = {}, v(lambda) = {}", n.lambda, n.lambda_valuation);
        if !n.identity {
            let _ = writeln!(s, "            via x -> {}, z-exponent {}", n.moebius, n.u);
        }
        if let Some(j) = &n.j_valuation {
            let _ = writeln!(s, "            v(j) = {}", j);
        }
        let _ = write!(s, "type        {}", self.reduction);
        if let Some(r) = self.subroute {
            let _ = write!(s, " ({})", r);
        }
        let _ = writeln!(s);
        let e = &self.extension;
        let _ = write!(s, "extension   e = {}, f = {}", e.e, e.f);
        if !e.adjoined.is_empty() {
            let _ = write!(s, ", adjoin {}", e.adjoined.join(", "));
        }
        let _ = writeln!(s);
        for (k, c) in self.components.iter().enumerate() {
            let _ = writeln!(
                s,
                "component {} genus {}, p-rank {}, {} branch points",
                k, c.genus, c.p_rank, c.branch_count
            );
            let _ = writeln!(s, "            {}", c.equation);
            let _ = writeln!(
                s,
                "            chart {} at {}, v(radius) = {}, {} (w = {})",
                c.chart.coordinate, c.chart.center, c.chart.radius_valuation, c.chart.case, c.chart.w
            );
        }
        for [a, b, m] in &self.edges {
            let _ = writeln!(s, "edge        {} -- {}  x{}", a, b, m);
        }
        for c in &self.checks {
            let _ = writeln!(s, "check       {} {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        if let Some(ms) = self.ms {
            let _ = writeln!(s, "time        {} ms", ms);
        }
        s
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct DeuringReport {
    pub lambda: String,
    pub j_valuation: String,
    pub good_reduction: bool,
}

impl DeuringReport {
    pub fn text(&self) -> String {
        format!(
            "lambda      {}\nv(j)        {}\nreduction   {}\n",
            self.lambda,
            self.j_valuation,
            if self.good_reduction {
                "potentially good"
            } else {
                "potentially multiplicative"
            }
        )
    }
}
