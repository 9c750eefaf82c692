use borelmodp::arith::{Field, FieldConfig, FieldElem, PadicInt, DEFAULT_PREC_P};
use borelmodp::linalg::Echelon;
use borelmodp::series::{gamma_x, one_plus_x_pow, GammaElement, LaurentSeries};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2u32, 1usize), (3, 1), (5, 1), (2, 2), (3, 2)])
        .prop_map(|(p, d)| FieldConfig::with_degree(p, d).unwrap())
}

fn elem(rng: &mut ChaCha8Rng, f: &Field) -> FieldElem {
    f.from_code(rng.gen_range(0..f.size())).unwrap()
}

fn series(rng: &mut ChaCha8Rng, f: &Field, val: i64, prec: i64) -> LaurentSeries {
    let coeffs = (val..prec).map(|_| elem(rng, f)).collect();
    LaurentSeries::new(f, val, coeffs, prec)
}

fn one_unit(rng: &mut ChaCha8Rng, f: &Field, prec: i64) -> LaurentSeries {
    LaurentSeries::one(f, prec).add(&series(rng, f, 1, prec))
}

fn gamma(rng: &mut ChaCha8Rng, p: u32) -> GammaElement {
    GammaElement::from_i64(borelmodp::sample::unit(rng, p, 5), p).unwrap()
}

// Solve alpha = sum_{j<p} (1+X)^j phi(b_j) mod X^(pN) by elimination and
// return b_0, which is psi(alpha) mod X^N.
fn psi_by_decomposition(alpha: &LaurentSeries, big_n: i64) -> Vec<FieldElem> {
    let f = alpha.field();
    let p = f.p() as i64;
    let width = (p * big_n) as usize;
    let mut e = Echelon::new(f, width);
    for j in 0..p {
        let oj = LaurentSeries::one_plus_x(f, p * big_n).powi(j).unwrap();
        for k in 0..big_n {
            let col = oj.mul(&LaurentSeries::monomial(f, f.one(), p * k, p * big_n));
            let row: Vec<FieldElem> = (0..width as i64).map(|t| col.coeff(t).unwrap()).collect();
            assert!(e.insert(&row));
        }
    }
    let target: Vec<FieldElem> = (0..width as i64).map(|t| alpha.coeff(t).unwrap()).collect();
    let mut b0 = vec![FieldElem::ZERO; big_n as usize];
    for (idx, c) in e.express(&target).expect("the map is onto") {
        if idx < big_n as usize {
            b0[idx] = c;
        }
    }
    b0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_matches_the_decomposition(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let big_n = rng.gen_range(2..8);
        let prec = f.p() as i64 * big_n;
        let alpha = series(&mut rng, &f, 0, prec);
        let want = psi_by_decomposition(&alpha, big_n);
        let got = alpha.psi();
        prop_assert_eq!(got.prec(), big_n);
        for k in 0..big_n {
            prop_assert_eq!(got.coeff(k).unwrap(), want[k as usize], "k={}", k);
        }
    }

    #[test]
    fn psi_undoes_phi(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let val = rng.gen_range(-4..4);
        let a = series(&mut rng, &f, val, 20);
        let back = a.phi().psi();
        prop_assert_eq!(back.prec(), 20);
        prop_assert!(back.eq_mod_prec(&a));
    }

    #[test]
    fn psi_is_phi_semilinear(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = series(&mut rng, &f, -2, 15);
        let b = series(&mut rng, &f, 0, 40);
        let lhs = a.phi().mul(&b).psi();
        let rhs = a.mul(&b.psi());
        prop_assert!(lhs.eq_mod_prec(&rhs));
    }

    #[test]
    fn gamma_is_a_group_action(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = f.p();
        let (g, h) = (gamma(&mut rng, p), gamma(&mut rng, p));
        let a = series(&mut rng, &f, 0, 16);
        let one_step = a.gamma_act(&g.compose(&h)).unwrap();
        let two_steps = a.gamma_act(&h).unwrap().gamma_act(&g).unwrap();
        prop_assert!(one_step.eq_mod_prec(&two_steps));
        let undone = a.gamma_act(&g).unwrap().gamma_act(&g.inverse()).unwrap();
        prop_assert!(undone.eq_mod_prec(&a));
    }

    #[test]
    fn gamma_commutes_with_phi_and_psi(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gamma(&mut rng, f.p());
        let a = series(&mut rng, &f, 0, 30);
        prop_assert!(a.phi().gamma_act(&g).unwrap().eq_mod_prec(&a.gamma_act(&g).unwrap().phi()));
        prop_assert!(a.psi().gamma_act(&g).unwrap().eq_mod_prec(&a.gamma_act(&g).unwrap().psi()));
    }

    #[test]
    fn gamma_moves_x_to_its_image(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gamma(&mut rng, f.p());
        let x = LaurentSeries::x(&f, 20);
        prop_assert!(x.gamma_act(&g).unwrap().eq_mod_prec(&gamma_x(&f, &g, 20).unwrap()));
    }

    #[test]
    fn unit_powers(f in field(), seed in any::<u64>(), s in 0i64..2000, t in 0i64..2000, n in 0i64..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = f.p();
        let u = one_unit(&mut rng, &f, 25);
        let z = |x: i64| PadicInt::from_i64(x, p, DEFAULT_PREC_P);
        let sum = u.unit_pow(&z(s + t)).unwrap();
        prop_assert!(sum.eq_mod_prec(&u.unit_pow(&z(s)).unwrap().mul(&u.unit_pow(&z(t)).unwrap())));
        prop_assert!(u.unit_pow(&z(n)).unwrap().eq_mod_prec(&u.powi(n).unwrap()));
        let neg = u.unit_pow(&z(-n)).unwrap();
        prop_assert!(neg.eq_mod_prec(&u.powi(-n).unwrap()));
        let binom = one_plus_x_pow(&f, &z(s), 25).unwrap();
        prop_assert!(binom.eq_mod_prec(&LaurentSeries::one_plus_x(&f, 25).powi(s).unwrap()));
    }

    #[test]
    fn inverses_and_serialization(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let val = rng.gen_range(-3..3);
        let mut a = series(&mut rng, &f, val, 18);
        if a.coeff(val) == Some(FieldElem::ZERO) {
            a = a.add(&LaurentSeries::monomial(&f, f.one(), val, 18));
        }
        let prod = a.mul(&a.inv().unwrap());
        prop_assert!(prod.eq_mod_prec(&LaurentSeries::one(&f, prod.prec())));
        prop_assert_eq!(LaurentSeries::parse(&f, &a.dump()).unwrap(), a);
    }
}
