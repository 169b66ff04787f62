//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stable_cover::cover::{admissible_normalizations, j_invariant, normalize, BranchPoint, CoverDatum, NormalizedCover};
use stable_cover::padic::{
    parse_token, FieldTower, PadicElement, PadicPoly, Token, Valuation, DEFAULT_PRECISION_UNITS, Q,
};
use stable_cover::residue::{
    as_genus, conductor_genus, polynomial_as_genus, AsCurve, FqPoly, Place, ResidueField, ResidueRationalFunction,
};
use stable_cover::stable::{
    betti_number, build_stable_model, check_qwerty, classify, deuring_good_reduction, deuring_j_valuation,
    genus_generic, ComponentEquation, ReductionType, StableModel,
};
use stable_cover::torsor::{maximize_h_bruteforce, torsor_case, torsor_case_improving, x_power, TorsorCase};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn cover(p: u32, beta: u32, gamma: u32, lambda: &str, units: u32) -> Result<NormalizedCover, String> {
    let tok = parse_token(lambda).map_err(|e| e.to_string())?;
    let d = CoverDatum::standard(p, beta, gamma, tok).map_err(|e| e.to_string())?;
    let t = d.tower(units).map_err(|e| e.to_string())?;
    normalize(&d, &t).map_err(|e| e.to_string())
}

fn model(n: &NormalizedCover) -> Result<StableModel, String> {
    let t = classify(n).map_err(|e| e.to_string())?;
    build_stable_model(n, t).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn trichotomy() -> Outcome {
    let cases = [
        (5, 1, 4, "tau^2", "1b"),
        (5, 1, 4, "5^3", "2"),
        (5, 1, 4, "5", "3"),
        (5, 2, 1, "5", "3"),
    ];
    let mut slowest = 0u128;
    for (p, b, g, l, want) in cases {
        let start = Instant::now();
        let n = cover(p, b, g, l, DEFAULT_PRECISION_UNITS)?;
        let t = classify(&n).map_err(|e| e.to_string())?;
        let ms = start.elapsed().as_millis();
        slowest = slowest.max(ms);
        ensure(t.name() == want, || format!("p={} beta={} gamma={} lambda={}: got {}", p, b, g, l, t))?;
        ensure(ms < 1000, || format!("{} took {} ms", l, ms))?;
    }
    Ok(format!("4 cases exact, slowest {} ms", slowest))
}

fn good_reduction_witness() -> Outcome {
    let n = cover(7, 1, 1, "3", DEFAULT_PRECISION_UNITS)?;
    let (_, vj) = j_invariant(&n).map_err(|e| e.to_string())?;
    ensure(vj == Valuation::Finite(Q::new(2, 9)), || format!("v(j) = {:?}", vj))?;
    let m = model(&n)?;
    ensure(m.reduction == ReductionType::Good1a, || format!("type {}", m.reduction))?;
    ensure(m.components.len() == 1, || "component count".into())?;
    let c = &m.components[0];
    let ComponentEquation::ArtinSchreier(curve) = &c.equation else {
        return Err("component is not Artin-Schreier".into());
    };
    let oracle = conductor_genus(7, curve.poles());
    ensure(c.genus == 6 && oracle == 6 && c.p_rank == 0, || {
        format!("genus {} oracle {} p-rank {}", c.genus, oracle, c.p_rank)
    })?;
    Ok(format!("v(j) = 2/9, {}", curve.render("x")))
}

fn sweep_inputs() -> Vec<(u32, u32, u32, &'static str)> {
    let lambdas = ["2", "3", "-1", "p", "p^3", "tau^2", "tau^2/pi", "3+pi"];
    let mut out = Vec::new();
    for p in [3u32, 5, 7] {
        for beta in 1..p {
            for gamma in 1..p {
                if (1 + beta + gamma) % p == 0 {
                    continue;
                }
                for l in lambdas {
                    out.push((p, beta, gamma, l));
                }
            }
        }
    }
    out
}

fn genus_conservation(models: &[(String, StableModel)]) -> Outcome {
    let mut failures = Vec::new();
    for (name, m) in models {
        if m.total_genus() != genus_generic(m.p) || !m.all_checks_pass() {
            failures.push(name.clone());
        }
    }
    ensure(models.len() >= 200, || format!("only {} models", models.len()))?;
    ensure(failures.is_empty(), || format!("failures: {:?}", failures))?;
    Ok(format!("{} models, 0 failures", models.len()))
}

fn mumford(models: &[(String, StableModel)]) -> Outcome {
    let mut count = 0;
    for (name, m) in models.iter().filter(|(_, m)| m.reduction == ReductionType::Mumford2) {
        count += 1;
        let ok = m.components.len() == 2
            && m.components.iter().all(|c| c.genus == 0)
            && m.edges == [(0, 1, m.p)]
            && betti_number(m) == m.p as u64 - 1;
        ensure(ok, || format!("{}: {:?}", name, m.edges))?;
    }
    ensure(count > 0, || "no type 2 models in the sweep".into())?;
    Ok(format!("{} type-2 models, each 2 rational components and p edges", count))
}

fn random_poly(rng: &mut ChaCha8Rng, t: &FieldTower, deg: usize, levels: i64) -> PadicPoly {
    let cs = (0..=deg)
        .map(|_| {
            let mut c = PadicElement::zero(t);
            for l in 0..levels {
                c = c.add(&PadicElement::pi_power(t, l).scale_int(rng.gen_range(0..3)));
            }
            c
        })
        .collect();
    PadicPoly::new(t, cs)
}

fn oracle_equivalence() -> Outcome {
    let t = FieldTower::new(3, 2, 1, 40).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut decidable, mut agree, mut total) = (0, 0, 0);
    for trial in 0..120 {
        let s = if trial % 2 == 0 { 1 } else { 2 };
        // f = h_0^3 + π^k·r, so that w is interesting
        let mut h0 = random_poly(&mut rng, &t, s, 2);
        let lead = PadicElement::one(&t);
        let mut cs = h0.coeffs().to_vec();
        cs[s] = lead;
        h0 = PadicPoly::new(&t, cs);
        let k = rng.gen_range(0..5);
        let r = random_poly(&mut rng, &t, 3 * s - 1, 2).scale(&PadicElement::pi_power(&t, k));
        let f = h0.pow(3).add(&r);
        total += 1;
        let fast = torsor_case_improving(&f, &x_power(&t, s));
        let slow = maximize_h_bruteforce(&f, 3).and_then(|(h, _)| torsor_case(&f, &h));
        let (Ok(a), Ok(b)) = (fast, slow) else { continue };
        if a.case == TorsorCase::Undecided || b.case == TorsorCase::Undecided {
            continue;
        }
        decidable += 1;
        if a.case == b.case {
            agree += 1;
        }
    }
    ensure(decidable >= 50, || format!("only {} decidable of {}", decidable, total))?;
    ensure(agree == decidable, || format!("{} of {} agree", agree, decidable))?;
    Ok(format!("{}/{} decidable instances agree ({} drawn)", agree, decidable, total))
}

fn genus_formulas() -> Outcome {
    let mut n = 0;
    for p in [3u32, 5, 7] {
        let k = ResidueField::new(p, 1);
        for m in 2..=8u64 {
            if m % p as u64 == 0 {
                continue;
            }
            let shortcut = polynomial_as_genus(p, m);
            let oracle = conductor_genus(p, &[(Place::Infinity, m as usize)]);
            let u = ResidueRationalFunction::from_poly(&k, FqPoly::monomial(1, m as usize));
            let curve = AsCurve::reduce(&u).map_err(|e| e.to_string())?;
            let g = as_genus(&curve).map_err(|e| e.to_string())?;
            ensure(shortcut == oracle && oracle == g && g == (m - 1) * (p as u64 - 1) / 2, || {
                format!("p={} m={}: {} {} {}", p, m, shortcut, oracle, g)
            })?;
            n += 1;
        }
    }
    Ok(format!("{} (p, m) pairs agree", n))
}

fn random_token(rng: &mut ChaCha8Rng, p: u32) -> Token {
    let a = rng.gen_range(1..30i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let k = rng.gen_range(0..3i64);
    let base = Token::Mul(Box::new(Token::int(a)), Box::new(Token::Pow(Box::new(Token::P), k)));
    if rng.gen_bool(0.25) {
        Token::Mul(Box::new(base), Box::new(Token::Tau(Q::from_integer(1))))
    } else {
        base.simplified(p)
    }
}

fn qwerty() -> Outcome {
    for c2 in ["tau^2", "-tau-1"] {
        let r = check_qwerty(5, &Token::int(1), &parse_token(c2).unwrap(), 30).map_err(|e| e.to_string())?;
        ensure(r.reduction == ReductionType::Good1b, || format!("c2 = {}: {}", c2, r.reduction))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    let mut tries = 0;
    while done < 120 && tries < 2000 {
        tries += 1;
        let p = if rng.gen_bool(0.5) { 5 } else { 7 };
        let (c1, c2) = (random_token(&mut rng, p), random_token(&mut rng, p));
        let Ok(r) = check_qwerty(p, &c1, &c2, 30) else { continue };
        ensure(r.not_good_1a, || format!("p={} c1={} c2={} gave 1a", p, c1, c2))?;
        done += 1;
    }
    ensure(done >= 100, || format!("only {} admissible draws", done))?;
    Ok(format!("remark cases give 1b; {} random (c1, c2) never 1a", done))
}

fn deuring() -> Outcome {
    let t = FieldTower::new(2, 1, 1, 80).unwrap();
    let v = |n: i64| deuring_j_valuation(&PadicElement::from_int(&t, n)).map_err(|e| e.to_string());
    ensure(v(2)? == Valuation::Finite(Q::from_integer(6)), || "v(j) at 2".into())?;
    ensure(v(32)? == Valuation::Finite(Q::from_integer(-2)), || "v(j) at 32".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    while done < 50 {
        let num = rng.gen_range(-200..200i64) << rng.gen_range(0..6);
        let den = rng.gen_range(1..50i64) << rng.gen_range(0..4);
        let l = PadicElement::from_ratio(&t, num, den);
        if num == 0 || num == den {
            continue;
        }
        let verdict = deuring_good_reduction(&l).map_err(|e| e.to_string())?;
        for x in stable_cover::cover::cross_ratio_orbit(&l).map_err(|e| e.to_string())? {
            let vx = deuring_good_reduction(&x).map_err(|e| e.to_string())?;
            ensure(vx == verdict, || format!("orbit of {}/{} disagrees", num, den))?;
        }
        done += 1;
    }
    Ok("v(j) = 6 and -2 exactly; 50 orbits invariant".into())
}

fn random_datum(rng: &mut ChaCha8Rng) -> Option<CoverDatum> {
    let p = [3u32, 5, 7][rng.gen_range(0..3)];
    let mut a = [0u32; 4];
    for x in a.iter_mut().take(3) {
        *x = rng.gen_range(1..p);
    }
    a[3] = (3 * p - a[0] - a[1] - a[2]) % p;
    if a[3] == 0 {
        return None;
    }
    let inf = rng.gen_range(0..5);
    let points: Vec<BranchPoint> = (0..4)
        .map(|i| {
            if i == inf {
                BranchPoint::Infinity
            } else {
                BranchPoint::Finite(random_token(rng, p))
            }
        })
        .collect();
    CoverDatum::new(p, points.try_into().ok()?, a, None).ok()
}

fn normalization_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut done, mut reps) = (0, 0);
    let mut tries = 0;
    while done < 100 && tries < 5000 {
        tries += 1;
        let Some(d) = random_datum(&mut rng) else { continue };
        let Ok(t) = d.tower(30) else { continue };
        let Ok(all) = admissible_normalizations(&d, &t) else { continue };
        if all.is_empty() {
            return Err("no admissible normalization".into());
        }
        let types: Vec<ReductionType> = all
            .iter()
            .map(|n| classify(n).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        ensure(types.iter().all(|x| x.name() == types[0].name()), || {
            format!("{:?}: {:?}", d, types)
        })?;
        reps += all.len();
        done += 1;
    }
    ensure(done >= 100, || format!("only {} covers", done))?;
    Ok(format!("{} covers, {} representatives, type constant", done, reps))
}

fn boundary() -> Outcome {
    for (l, want) in [("tau^2*(1+pi)", "1b"), ("tau^2*pi", "2"), ("tau^2/pi", "3")] {
        let n = cover(5, 1, 4, l, DEFAULT_PRECISION_UNITS)?;
        let t = classify(&n).map_err(|e| e.to_string())?;
        ensure(t.name() == want, || format!("{}: {}", l, t))?;
    }
    Ok("1b, 2, 3 at the v(tau^2) boundary".into())
}

fn main() -> ExitCode {
    let models: Vec<(String, StableModel)> = sweep_inputs()
        .into_iter()
        .filter_map(|(p, b, g, l)| {
            let n = cover(p, b, g, l, 30).ok()?;
            Some((format!("p={} beta={} gamma={} lambda={}", p, b, g, l), model(&n).ok()?))
        })
        .collect();
    let criteria: Vec<Criterion> = vec![
        ("trichotomy reproduction", Box::new(trichotomy)),
        ("good-reduction witness", Box::new(good_reduction_witness)),
        ("genus conservation", Box::new(|| genus_conservation(&models))),
        ("Mumford combinatorics", Box::new(|| mumford(&models))),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("genus-formula agreement", Box::new(genus_formulas)),
        ("application to the (c1, c2) family", Box::new(qwerty)),
        ("Deuring comparator", Box::new(deuring)),
        ("normalization invariance", Box::new(normalization_invariance)),
        ("boundary exactness", Box::new(boundary)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let ms = start.elapsed().as_millis();
        match r {
            Ok(msg) => println!("criterion {:>2} {:<36} PASS  {} ({} ms)", i + 1, name, msg, ms),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {:<36} FAIL  {} ({} ms)", i + 1, name, msg, ms);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
