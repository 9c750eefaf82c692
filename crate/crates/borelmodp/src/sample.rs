//! Random instances for the randomized checks.

use rand::Rng;

use crate::arith::{Field, PadicInt, Qp, DEFAULT_PREC_P};
use crate::borel::{BorelGen, BorelMat, BorelWord, InducedChar, SmoothChar};
use crate::seqspace::{level_len, Seq};

/// An integer in [1, p^depth) prime to p.
pub fn unit<R: Rng>(rng: &mut R, p: u32, depth: u32) -> i64 {
    let m = (p as i64).pow(depth);
    loop {
        let a = rng.gen_range(1..m);
        if a % p as i64 != 0 {
            return a;
        }
    }
}

pub fn padic_unit<R: Rng>(rng: &mut R, p: u32) -> PadicInt {
    PadicInt::from_i64(unit(rng, p, 6), p, DEFAULT_PREC_P)
}

/// t p^-e with t < p^3 and 0 <= e <= 2, possibly 0.
pub fn small_qp<R: Rng>(rng: &mut R, p: u32) -> Qp {
    let t = rng.gen_range(0..(p as i64).pow(3));
    Qp::from_i64(t, p).shift(-rng.gen_range(0..=2))
}

pub fn generator<R: Rng>(rng: &mut R, p: u32) -> BorelGen {
    match rng.gen_range(0..4) {
        0 => BorelGen::Unipotent(small_qp(rng, p)),
        1 => BorelGen::DiagUnits(padic_unit(rng, p), padic_unit(rng, p)),
        2 => BorelGen::PPower(rng.gen_range(-2..=2)),
        _ => BorelGen::Central(Qp::from_i64(unit(rng, p, 3), p).shift(rng.gen_range(-1..=1))),
    }
}

pub fn word<R: Rng>(rng: &mut R, p: u32, len: usize) -> BorelWord {
    BorelWord((0..len).map(|_| generator(rng, p)).collect())
}

/// (a, b; 0, d) with a, d units and b integral, times a central p^k.
pub fn kz<R: Rng>(rng: &mut R, p: u32) -> BorelMat {
    let m = (p as i64).pow(4);
    let k = BorelMat::from_ints(unit(rng, p, 4), rng.gen_range(0..m), unit(rng, p, 4), p).expect("units");
    k.mul(&BorelMat::central(Qp::p_power(rng.gen_range(-2..=2), p)).expect("nonzero"))
}

pub fn nonzero<R: Rng>(rng: &mut R, field: &Field) -> crate::arith::FieldElem {
    field.from_code(rng.gen_range(1..field.size())).expect("code in range")
}

/// omega^m mu_lambda with m mod p-1 and lambda nonzero.
pub fn smooth_char<R: Rng>(rng: &mut R, field: &Field) -> SmoothChar {
    let m = rng.gen_range(0..(field.p() as i64 - 1).max(1));
    SmoothChar::new(field, m, nonzero(rng, field)).expect("lambda nonzero")
}

pub fn induced_char<R: Rng>(rng: &mut R, field: &Field) -> InducedChar {
    InducedChar::new(smooth_char(rng, field), smooth_char(rng, field))
}

pub fn seq<R: Rng>(rng: &mut R, field: &Field, n: u32) -> Seq {
    let entries = (0..level_len(field.p(), n))
        .map(|_| field.from_code(rng.gen_range(0..field.size())).expect("code in range"))
        .collect();
    Seq::from_entries(field, n, entries).expect("right length")
}
