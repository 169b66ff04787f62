use proptest::prelude::*;
use stable_cover::cover::{normalize, CoverDatum};
use stable_cover::padic::{FieldTower, PadicElement, PadicPoly, Token, Valuation, Q};
use stable_cover::residue::{
    as_genus, as_irreducible, as_reduce, p_rank_ds, AsCurve, FqPoly, ResidueField, ResidueRationalFunction,
};
use stable_cover::stable::{build_stable_model, check_qwerty, classify, genus_generic};
use stable_cover::torsor::{taylor_shift, torsor_case, x_power, TorsorCase};

fn t5() -> FieldTower {
    FieldTower::new(5, 4, 1, 80).unwrap()
}

/// `Σ d_i π^{start+i}` from small integer digits.
fn element(t: &FieldTower, start: i64, digits: &[i64]) -> PadicElement {
    let mut acc = PadicElement::zero(t);
    for (i, &d) in digits.iter().enumerate() {
        acc = acc.add(&PadicElement::pi_power(t, start + i as i64).scale_int(d));
    }
    acc
}

fn digits() -> impl Strategy<Value = (i64, Vec<i64>)> {
    (-3i64..4, prop::collection::vec(1i64..5, 1..6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn valuation_is_additive_and_ultrametric((a, da) in digits(), (b, db) in digits()) {
        let t = t5();
        let x = element(&t, a, &da);
        let y = element(&t, b, &db);
        let (vx, vy) = (x.val().unwrap(), y.val().unwrap());
        prop_assert_eq!(x.mul(&y).val().unwrap(), vx + vy);
        let s = x.add(&y);
        if vx != vy {
            prop_assert_eq!(s.val().unwrap(), vx.min(vy));
        } else if !s.is_indistinguishable_from_zero() {
            prop_assert!(s.val().unwrap() >= vx);
        }
    }

    #[test]
    fn residue_is_a_ring_map(da in prop::collection::vec(0i64..5, 1..5), db in prop::collection::vec(0i64..5, 1..5)) {
        let t = t5();
        let k = t.residue_field().clone();
        let x = element(&t, 0, &da);
        let y = element(&t, 0, &db);
        let (rx, ry) = (x.residue().unwrap(), y.residue().unwrap());
        prop_assert_eq!(x.add(&y).residue().unwrap(), k.add(rx, ry));
        prop_assert_eq!(x.mul(&y).residue().unwrap(), k.mul(rx, ry));
    }

    #[test]
    fn rationals_reexpand_consistently(n in -400i64..400, d in 1i64..60) {
        prop_assume!(n != 0 && d % 5 != 0);
        let lo = t5();
        let hi = lo.with_precision_factor(2).unwrap();
        let a = PadicElement::from_ratio(&lo, n, d);
        let b = PadicElement::from_ratio(&hi, n, d);
        prop_assert!(a.sub(&b.embed(&lo).unwrap()).is_indistinguishable_from_zero());
    }

    #[test]
    fn sqrt_squares_back((a, da) in digits()) {
        let t = t5();
        let x = element(&t, 2 * a, &da).square();
        let r = x.sqrt().unwrap();
        let err = r.square().sub(&x);
        prop_assert!(err.is_indistinguishable_from_zero() || err.valuation_lower_bound() >= Valuation::Finite(x.precision_valuation()));
    }

    #[test]
    fn gauss_lemma(fa in prop::collection::vec(0i64..5, 2..5), fb in prop::collection::vec(0i64..5, 2..5)) {
        let t = t5();
        let mut fa = fa; let mut fb = fb;
        *fa.last_mut().unwrap() = 1;
        *fb.last_mut().unwrap() = 2;
        let f = PadicPoly::from_ints(&t, &fa);
        let g = PadicPoly::from_ints(&t, &fb);
        prop_assert_eq!(f.mul(&g).gauss_valuation().unwrap(), Valuation::Finite(Q::from_integer(0)));
    }

    #[test]
    fn as_reduce_is_idempotent_and_invariant(num in prop::collection::vec(0u32..5, 1..8), w in prop::collection::vec(0u32..5, 1..4)) {
        let k = ResidueField::new(5, 1);
        let u = ResidueRationalFunction::new(&k, FqPoly::new(num), FqPoly::new(vec![0, 0, 1]));
        let r = as_reduce(&u);
        let rr = as_reduce(&r.reduced);
        prop_assert_eq!(rr.reduced.num(), r.reduced.num());
        prop_assert_eq!(rr.reduced.den(), r.reduced.den());
        let wf = ResidueRationalFunction::from_poly(&k, FqPoly::new(w));
        let shifted = u.add(&wf.wp());
        prop_assert_eq!(as_irreducible(&u), as_irreducible(&shifted));
        if let Ok(c) = AsCurve::reduce(&u) {
            prop_assert!(p_rank_ds(5, c.branch_count()).unwrap() <= as_genus(&c).unwrap());
        }
    }

    #[test]
    fn taylor_shift_inverts(cs in prop::collection::vec(-9i64..10, 1..7), d in -6i64..7) {
        let t = t5();
        let f = PadicPoly::from_ints(&t, &cs);
        let one = PadicElement::one(&t);
        let de = PadicElement::from_int(&t, d);
        let g = taylor_shift(&f, &de, &one);
        let back = taylor_shift(&g, &de.neg(), &one);
        prop_assert!(back.sub(&f).is_indistinguishable_from_zero());
    }

    #[test]
    fn split_survives_small_noise(noise in prop::collection::vec(0i64..5, 6)) {
        let t = t5();
        let tau = PadicElement::tau(&t).unwrap();
        let f = x_power(&t, 5).add(&PadicPoly::monomial(tau.square(), 1));
        let h = x_power(&t, 1);
        let base = torsor_case(&f, &h).unwrap();
        prop_assert_eq!(base.case, TorsorCase::Split);
        let wh = base.w.finite().unwrap();
        let k = t.pi_exponent(wh).unwrap() + 1;
        let n = PadicPoly::new(&t, noise.iter().map(|&c| PadicElement::pi_power(&t, k).scale_int(c)).collect());
        prop_assert_eq!(torsor_case(&f.add(&n), &h).unwrap().case, TorsorCase::Split);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalized_covers_satisfy_invariants(
        p in prop::sample::select(vec![3u32, 5, 7]),
        beta in 1u32..7,
        gamma in 1u32..7,
        num in -40i64..40,
        den in 1i64..30,
    ) {
        let (beta, gamma) = (1 + (beta - 1) % (p - 1), 1 + (gamma - 1) % (p - 1));
        prop_assume!((1 + beta + gamma) % p != 0);
        let lam = Token::Div(Box::new(Token::int(num)), Box::new(Token::int(den)));
        let Ok(d) = CoverDatum::standard(p, beta, gamma, lam) else { return Ok(()) };
        let t = d.tower(20).unwrap();
        let Ok(n) = normalize(&d, &t) else { return Ok(()) };
        prop_assert!(n.lambda_valuation().unwrap() >= Q::from_integer(0));
        prop_assert!(n.lambda().residue().unwrap() != 1);
        prop_assert!((1 + n.beta() + n.gamma()) % p != 0);
        let ty = classify(&n).unwrap();
        let m = build_stable_model(&n, ty).unwrap();
        prop_assert_eq!(m.total_genus(), genus_generic(p));
        prop_assert!(m.all_checks_pass());
    }

    #[test]
    fn qwerty_is_never_1a(a in 1i64..40, b in 1i64..40, k in 0i64..3) {
        let c1 = Token::int(a);
        let c2 = Token::Mul(Box::new(Token::int(b)), Box::new(Token::Pow(Box::new(Token::P), k)));
        let Ok(r) = check_qwerty(5, &c1, &c2, 20) else { return Ok(()) };
        prop_assert!(r.not_good_1a);
    }
}
