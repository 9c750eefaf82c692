use borelmodp::arith::{lucas_binom, Field, FieldConfig, PadicInt, DEFAULT_PREC_P};
use borelmodp::seqspace::{
    block_subsequence, cyclic_shift, delta, dim_vkn, in_vkn, in_vkn_by_rank, level_len, mu_a, pairing, v_kn, Seq,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shape() -> impl Strategy<Value = (Field, u32)> {
    prop::sample::select(vec![(2u32, 1usize, 3u32), (2, 1, 4), (3, 1, 2), (3, 1, 3), (5, 1, 2), (2, 2, 2), (3, 2, 2)])
        .prop_map(|(p, d, n)| (FieldConfig::with_degree(p, d).unwrap(), n))
}

fn random_seq(rng: &mut ChaCha8Rng, f: &Field, n: u32) -> Seq {
    borelmodp::sample::seq(rng, f, n)
}

// a random combination of v_0 .. v_{k-1}
fn random_in_vkn(rng: &mut ChaCha8Rng, f: &Field, n: u32, k: usize) -> Seq {
    let mut x = Seq::zero(f, n);
    for j in 0..k {
        let c = f.from_code(rng.gen_range(0..f.size())).unwrap();
        x = x.add(&v_kn(f, j as u64, n).unwrap().scale(c)).unwrap();
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_is_identity_plus_delta((f, n) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_seq(&mut rng, &f, n);
        prop_assert_eq!(cyclic_shift(&x), x.add(&delta(&x)).unwrap());
    }

    #[test]
    fn difference_and_rank_membership_agree((f, n) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = level_len(f.p(), n);
        let k = rng.gen_range(0..=len);
        let inside = random_in_vkn(&mut rng, &f, n, k);
        prop_assert!(in_vkn(&inside, k));
        prop_assert!(in_vkn_by_rank(&inside, k));
        let x = random_seq(&mut rng, &f, n);
        let j = rng.gen_range(0..=len);
        prop_assert_eq!(in_vkn(&x, j), in_vkn_by_rank(&x, j));
    }

    #[test]
    fn dimension_is_k((f, n) in shape(), seed in any::<u64>()) {
        let k = (seed as usize) % (level_len(f.p(), n) + 1);
        prop_assert_eq!(dim_vkn(&f, k, n), k);
    }

    #[test]
    fn mu_a_keeps_v_kn((f, n) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = f.p();
        let len = level_len(p, n);
        let k = rng.gen_range(0..len);
        let a = borelmodp::sample::unit(&mut rng, p, 6);
        let ak = f.pow(f.from_int(a), k as i64).unwrap();
        let v = v_kn(&f, k as u64, n).unwrap();
        let moved = mu_a(&v, &PadicInt::from_i64(a, p, DEFAULT_PREC_P)).unwrap();
        prop_assert!(in_vkn(&moved, k + 1));
        prop_assert!(in_vkn(&moved.sub(&v.scale(ak)).unwrap(), k));
    }

    // binom(pj + i, k) = binom(j, k div p) binom(i, k mod p)
    #[test]
    fn blocks_of_v_kn((f, n) in shape(), seed in any::<u64>()) {
        let p = f.p();
        let len = level_len(p, n) as u64;
        let k = seed % len;
        let i = ((seed / len) % p as u64) as u32;
        let block = block_subsequence(&v_kn(&f, k, n).unwrap(), i).unwrap();
        let c = f.from_int(lucas_binom(i as u64, k % p as u64, p) as i64);
        prop_assert_eq!(block, v_kn(&f, k / p as u64, n - 1).unwrap().scale(c));
    }

    #[test]
    fn low_v_vectors_are_orthogonal((f, n) in shape(), seed in any::<u64>()) {
        let len = level_len(f.p(), n) as u64;
        let k = seed % (len - 1);
        let l = (seed / len) % (len - 1 - k);
        // direct sum over j, independent of the library pairing
        let p = f.p();
        let direct = (0..len).fold(0u64, |s, j| (s + (lucas_binom(j, k, p) * lucas_binom(j, l, p)) as u64) % p as u64);
        prop_assert_eq!(direct, 0);
        prop_assert!(pairing(&v_kn(&f, k, n).unwrap(), &v_kn(&f, l, n).unwrap()).unwrap().is_zero());
    }
}
