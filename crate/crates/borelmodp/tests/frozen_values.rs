//! Worked values, each recomputed here by a separate route before being
//! frozen.

use borelmodp::arith::{
    digit_profile, is_primitive, lucas_binom, neg_binom, padic_binom, FieldConfig, PadicInt, DEFAULT_PREC_P,
};
use borelmodp::borel::{
    canonicalize, existfix_average, s_generator, theorem_d_check, w_ln, BorelMat, InducedChar, InducedElement,
    SmoothChar, Vertex, Window,
};
use borelmodp::seqspace::{delta, mu_a, orth_complement_check, v_kn, Seq};
use borelmodp::series::{f_gamma, gamma_x, GammaElement, LaurentSeries};

fn binom_by_factorials(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i + 1) as u128)
}

#[test]
fn lucas_values() {
    assert_eq!(binom_by_factorials(10, 4) % 3, 0);
    assert_eq!(lucas_binom(10, 4, 3), 0);
    assert_eq!(binom_by_factorials(3, 1) % 2, 1);
    assert_eq!(lucas_binom(3, 1, 2), 1);
}

#[test]
fn negative_binomial_value() {
    let f = FieldConfig::prime(3).unwrap();
    let inv = LaurentSeries::one_plus_x(&f, 3).inv().unwrap();
    assert_eq!(inv.coeff(2), Some(f.one()));
    assert_eq!(neg_binom(-1, 2, 3), 1);
}

#[test]
fn half_binomial_over_z3() {
    let f = FieldConfig::prime(3).unwrap();
    let half = PadicInt::from_ratio(1, 2, 3, DEFAULT_PREC_P).unwrap();
    let root = LaurentSeries::one_plus_x(&f, 40).unit_pow(&half).unwrap();
    assert!(root.mul(&root).eq_mod_prec(&LaurentSeries::one_plus_x(&f, 40)));
    // binom(1/2, 2) = -1/8 = 1 mod 3
    assert_eq!(root.coeff(2), Some(f.one()));
    assert_eq!(padic_binom(&half, 2).unwrap(), 1);
}

#[test]
fn primitivity_and_profiles() {
    assert!(is_primitive(1, 2, 3).unwrap());
    assert!(!is_primitive(5, 4, 2).unwrap());
    let d = digit_profile(2, 2, 3).unwrap();
    assert_eq!((d.i.clone(), d.hk.clone()), (vec![1, 1], vec![0, 1, 4]));
    let d = digit_profile(1, 2, 2).unwrap();
    assert_eq!((d.i.clone(), d.hk.clone(), d.hn()), (vec![1, 0], vec![0, 0, 1], 1));
}

#[test]
fn sequence_values() {
    let f3 = FieldConfig::prime(3).unwrap();
    let v = v_kn(&f3, 1, 1).unwrap();
    assert_eq!(v, Seq::from_ints(&f3, 1, &[0, 1, 2]).unwrap());
    let two = PadicInt::from_i64(2, 3, DEFAULT_PREC_P);
    assert_eq!(mu_a(&v, &two).unwrap(), Seq::from_ints(&f3, 1, &[0, 2, 1]).unwrap());
    assert_eq!(mu_a(&v, &two).unwrap(), v.scale(f3.from_int(2)));
    for (p, n) in [(2, 3), (3, 2), (5, 1)] {
        let f = FieldConfig::prime(p).unwrap();
        let minus_v0 = v_kn(&f, 0, n).unwrap().scale(f.from_int(-1));
        assert_eq!(delta(&v_kn(&f, 1, n).unwrap()), minus_v0);
    }
    assert!(orth_complement_check(&FieldConfig::prime(2).unwrap(), 2, 2));
}

#[test]
fn psi_monomials() {
    let f3 = FieldConfig::prime(3).unwrap();
    let mono = |f: &borelmodp::arith::Field, e, prec| LaurentSeries::monomial(f, f.one(), e, prec);
    assert!(mono(&f3, 5, 30).psi().eq_mod_prec(&mono(&f3, 1, 10)));
    let minus_x = LaurentSeries::monomial(&f3, f3.from_int(-1), 1, 10);
    assert!(mono(&f3, 4, 30).psi().eq_mod_prec(&minus_x));
    // over F_2, X^-1 = phi(X^-1) + (1+X) phi(X^-1), so alpha_0 = X^-1
    let f2 = FieldConfig::prime(2).unwrap();
    let a0 = mono(&f2, -1, 10).phi();
    let split = a0.add(&LaurentSeries::one_plus_x(&f2, 20).mul(&a0));
    assert!(split.eq_mod_prec(&mono(&f2, -1, 20)));
    let got = mono(&f2, -1, 20).psi();
    assert!(got.eq_mod_prec(&mono(&f2, -1, 10)));
}

#[test]
fn f_gamma_linear_term() {
    let f3 = FieldConfig::prime(3).unwrap();
    let g = GammaElement::from_i64(2, 3).unwrap();
    let fg = f_gamma(&f3, &g, 20).unwrap();
    // 2X / (2X + X^2) = 1 / (1 + 2X) = 1 - 2X + ...
    assert_eq!(fg.coeff(1), Some(f3.one()));
    let lhs = fg.mul(&gamma_x(&f3, &g, 21).unwrap());
    let rhs = LaurentSeries::monomial(&f3, f3.from_int(2), 1, 21);
    assert!(lhs.eq_mod_prec(&rhs));
}

#[test]
fn canonical_coset_at_one_third() {
    let f = FieldConfig::prime(3).unwrap();
    let (l1, l2) = (f.from_int(2), f.from_int(1));
    let sigma = InducedChar::new(SmoothChar::new(&f, 1, l1).unwrap(), SmoothChar::new(&f, 0, l2).unwrap());
    let (v, c) = canonicalize(&BorelMat::from_ints(3, 1, 1, 3).unwrap(), &sigma).unwrap();
    assert_eq!(v, Vertex::new(vec![1], -1));
    assert_eq!(c, f.mul(l1, l2));
}

#[test]
fn w_blocks() {
    let f2 = FieldConfig::prime(2).unwrap();
    let w = w_ln(1, 2, &InducedChar::trivial(&f2)).unwrap();
    let blocks = w.blocks(2, 0);
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0].1, Seq::from_ints(&f2, 2, &[0, 1, 0, 1]).unwrap());
    let f3 = FieldConfig::prime(3).unwrap();
    let want: Vec<i64> = (0..9).map(|j| (binom_by_factorials(j, 4) % 3) as i64).collect();
    assert_eq!(want, vec![0, 0, 0, 0, 1, 2, 0, 2, 1]);
    let blocks = w_ln(4, 2, &InducedChar::trivial(&f3)).unwrap().blocks(2, 0);
    assert_eq!(blocks[0].1, Seq::from_ints(&f3, 2, &want).unwrap());
}

#[test]
fn generators_with_lambda_one() {
    for (p, want_block) in [(2u32, 1u64), (3, 2)] {
        let f = FieldConfig::prime(p).unwrap();
        let sigma = InducedChar::for_galois(&SmoothChar::trivial(&f), 1);
        let s = s_generator(1, 2, &sigma).unwrap();
        assert_eq!(s.get(&Vertex::at_height(2)), f.one());
        assert_eq!(s.levels(), vec![0, 2]);
        let blocks = s.at_level(0).blocks(2, 0);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].1, v_kn(&f, want_block, 2).unwrap());
    }
}

#[test]
fn averaging_a_fixed_vector() {
    let f = FieldConfig::prime(3).unwrap();
    let sigma = InducedChar::trivial(&f);
    for k in 1..=2u32 {
        let fixed = InducedElement::single(&sigma, Vertex::at_height(k as i64), f.one());
        let top = 3u64.pow(k) - 1;
        assert_eq!(existfix_average(&fixed, k, top).unwrap(), fixed);
        assert!(existfix_average(&fixed, k, 0).unwrap().is_zero());
    }
}

// the windows of the worked examples, N = n
#[test]
fn theorem_d_small_windows() {
    assert!(theorem_d_check(2, 2, Window::new(4, 3, 2)).unwrap());
    assert!(theorem_d_check(2, 3, Window::new(4, 3, 2)).unwrap());
    assert!(theorem_d_check(3, 2, Window::new(5, 4, 3)).unwrap());
}
