use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{genus_generic, Check, ComponentEquation, ReductionType, StableModel};
use crate::residue::{as_genus, p_rank_ds};

/// First Betti number of the (connected) dual graph.
pub fn betti_number(m: &StableModel) -> u64 {
    let edges: u64 = m.edges.iter().map(|e| e.2 as u64).sum();
    (edges + 1).saturating_sub(m.components.len() as u64)
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

/// Re-derives every invariant of a model from its components.
pub fn verify_model(m: &StableModel) -> Vec<Check> {
    let p = m.p;
    let half = (p as u64 - 1) / 2;
    let mut out = Vec::new();
    let betti = betti_number(m);
    let genera: Vec<u64> = m.components.iter().map(|c| c.genus).collect();
    let sum: u64 = genera.iter().sum();
    out.push(check(
        "genus-conservation",
        sum + betti == genus_generic(p),
        format!("genera {:?} + betti {} = {}, expected {}", genera, betti, sum + betti, genus_generic(p)),
    ));
    for (i, c) in m.components.iter().enumerate() {
        match &c.equation {
            ComponentEquation::ArtinSchreier(curve) => {
                let g = as_genus(curve).ok();
                out.push(check(
                    &format!("component-{}-conductor-genus", i),
                    g == Some(c.genus),
                    format!("conductor formula {:?}, stored {}", g, c.genus),
                ));
                let r = p_rank_ds(p, c.branch_count).ok();
                out.push(check(
                    &format!("component-{}-p-rank", i),
                    r == Some(c.p_rank) && c.p_rank <= c.genus,
                    format!("Deuring-Shafarevich {:?}, stored {}", r, c.p_rank),
                ));
            }
            ComponentEquation::Inseparable(curve) => {
                out.push(check(
                    &format!("component-{}-rational", i),
                    curve.genus() == 0 && c.genus == 0,
                    format!("inseparable component, stored genus {}", c.genus),
                ));
            }
        }
    }
    for (i, c) in m.components.iter().enumerate() {
        if c.genus == 0 {
            let meets: u64 = m
                .edges
                .iter()
                .filter(|e| e.0 == i || e.1 == i)
                .map(|e| e.2 as u64)
                .sum();
            out.push(check(
                &format!("component-{}-stable", i),
                meets >= 3,
                format!("rational component meets the rest in {} points", meets),
            ));
        }
    }
    let n = m.components.len();
    let (name, ok, detail) = match m.reduction {
        ReductionType::Good1a => (
            "shape-1a",
            n == 1 && genera == [p as u64 - 1] && m.components[0].p_rank == 0,
            "one component of genus p-1 and p-rank 0",
        ),
        ReductionType::Good1b => (
            "shape-1b",
            n == 1 && genera == [p as u64 - 1] && m.components[0].p_rank == p as u64 - 1,
            "one component of genus p-1 and p-rank p-1",
        ),
        ReductionType::Mumford2 => (
            "shape-2",
            n == 2 && sum == 0 && m.edges == [(0, 1, p)] && betti == p as u64 - 1,
            "two rational components meeting in p points",
        ),
        ReductionType::TwoComp3(_) => (
            "shape-3",
            n == 2 && genera.iter().all(|&g| g == half && g % half == 0) && m.edges == [(0, 1, 1)],
            "two components of genus (p-1)/2 meeting once",
        ),
    };
    out.push(check(name, ok, detail.into()));
    out
}
