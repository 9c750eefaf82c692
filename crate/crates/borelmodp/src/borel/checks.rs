//! Instance-level checks tying the tree side to the Hecke operators and to
//! the (phi, Gamma)-module side.

use rand::Rng;

use crate::arith::{digit_profile, neg_binom, FieldConfig, FieldElem};
use crate::borel::chars::{InducedChar, SmoothChar};
use crate::borel::group::{BorelGen, BorelMat, BorelWord};
use crate::borel::induced::{hecke_t_minus, hecke_t_plus, s_generator, twist_by_det, InducedElement};
use crate::borel::oracle::{SpanOracle, Window};
use crate::borel::sym::{hecke_t_sym, scalar_char, SymInducedElement};
use crate::error::{Error, Result};
use crate::phigamma::{PGModule, TowerStub};
use crate::seqspace::in_vkn;
use crate::series::DEFAULT_SERIES_PREC;

/// binom(-i, p-h) binom(-j-1, h-1) = binom(-pj-i, h(p-1)) for 0 <= i, j < p.
pub fn ssg_binomial_identity(h: u64, p: u32) -> bool {
    let pp = p as u64;
    (0..p as i64).all(|i| {
        (0..p as i64).all(|j| {
            let lhs = neg_binom(-i, pp - h, p) as u64 * neg_binom(-j - 1, h - 1, p) as u64 % pp;
            lhs == neg_binom(-(p as i64) * j - i, h * (pp - 1), p) as u64
        })
    })
}

/// sum_i mu_i i^(h-1) [Id] + sum_{i,j} mu_i nu_j [(p^2, pj + i; 0, 1)] with
/// mu_i = binom(-i, p-h), nu_j = (h-1)! binom(-j-1, h-1), in ind(omega^(h-1) (x) 1).
pub fn ssg_element(h: u64, p: u32) -> Result<InducedElement> {
    let field = FieldConfig::prime(p)?;
    let sigma = scalar_char(&field, h as usize - 1);
    let f = &field;
    let fact = (1..h as i64).fold(f.one(), |acc, k| f.mul(acc, f.from_int(k)));
    let mu = |i: i64| f.from_int(neg_binom(-i, p as u64 - h, p) as i64);
    let nu = |j: i64| f.mul(fact, f.from_int(neg_binom(-j - 1, h - 1, p) as i64));
    let id = InducedElement::identity(&sigma);
    let mut c0 = f.zero();
    for i in 0..p as i64 {
        let ipow = if h == 1 { f.one() } else { f.pow(f.from_int(i), h as i64 - 1)? };
        c0 = f.add(c0, f.mul(mu(i), ipow));
    }
    let mut e = id.scale(c0);
    let pp = p as i64;
    for i in 0..pp {
        for j in 0..pp {
            let c = f.mul(mu(i), nu(j));
            if c.is_zero() {
                continue;
            }
            let m = BorelMat::from_ints(pp * pp, pp * j + i, 1, p)?;
            e = e.add(&id.act_matrix(&m)?.scale(c))?;
        }
    }
    Ok(e)
}

/// Both halves of the supersingular comparison for 1 <= h <= p-1: the
/// binomial identity, and diag(1, p^2) applied to the displayed element being
/// (h-1)! times the generator of S_2(h, omega^(h-1) (x) 1).
pub fn ssg_inclusion_check(h: u64, p: u32) -> Result<bool> {
    if h < 1 || h >= p as u64 {
        return Err(Error::Domain(format!("needs 1 <= h <= p-1, got h={h}, p={p}")));
    }
    if !ssg_binomial_identity(h, p) {
        return Ok(false);
    }
    let e = ssg_element(h, p)?;
    let f = e.field().clone();
    let fact = (1..h as i64).fold(f.one(), |acc, k| f.mul(acc, f.from_int(k)));
    let s = s_generator(h, 2, e.sigma())?;
    Ok(e.act(&BorelWord::single(BorelGen::PPower(2)))? == s.scale(fact))
}

/// (T_- + (-1)^n T_+^(n-1)) [Id] for sigma = 1 (x) 1.
pub fn theorem_d_element(n: u32, p: u32) -> Result<InducedElement> {
    let field = FieldConfig::prime(p)?;
    let sigma = InducedChar::trivial(&field);
    let id = InducedElement::identity(&sigma);
    let mut tp = id.clone();
    for _ in 0..n - 1 {
        tp = hecke_t_plus(&tp)?;
    }
    let sign = if n % 2 == 0 { field.one() } else { field.neg(field.one()) };
    hecke_t_minus(&id)?.add(&tp.scale(sign))
}

/// Within the window, the translates of s_generator(1, n, 1 (x) 1) and of
/// the Hecke element (moved up by n-1 levels) span the same space.
pub fn theorem_d_check(n: u32, p: u32, window: Window) -> Result<bool> {
    if n < 2 {
        return Err(Error::Domain("needs n >= 2".into()));
    }
    let t = theorem_d_element(n, p)?.act(&BorelWord::single(BorelGen::PPower(n as i64 - 1)))?;
    let s = s_generator(1, n, t.sigma())?;
    let os = SpanOracle::new(s.clone(), window)?;
    let ot = SpanOracle::new(t.clone(), window)?;
    if os.rank() != ot.rank() {
        return Ok(false);
    }
    for w in os.translates() {
        if !ot.contains(&s.act(w)?)? {
            return Ok(false);
        }
    }
    for w in ot.translates() {
        if !os.contains(&t.act(w)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// (sum alpha(v) g_v theta)(y), sigma being chi omega^(h-1) (x) chi.
pub fn theta_pairing(f: &InducedElement, pgm: &PGModule, y: &TowerStub) -> Result<FieldElem> {
    let expected = InducedChar::for_galois(pgm.chi(), pgm.h());
    if f.sigma() != &expected {
        return Err(Error::Domain(format!("pairing needs sigma = {expected:?}")));
    }
    let fld = pgm.field();
    let mut acc = fld.zero();
    for (v, &c) in f.coeffs() {
        let t = pgm.translate_theta(&BorelMat::vertex(v, pgm.p()), y)?;
        acc = fld.add(acc, fld.mul(c, t));
    }
    Ok(acc)
}

/// Stub depth needed to pair with f.
pub fn pairing_depth(f: &InducedElement) -> u32 {
    f.coeffs().keys().map(|v| v.delta.max(0) as u32 + v.den() as u32).max().unwrap_or(0)
}

/// theta pairs to zero with the generator and with random members of S
/// built from translates within levels 0..n; each member is also checked
/// against the default-window oracle first.
pub fn bridge_check<R: Rng>(pgm: &PGModule, members: usize, rng: &mut R) -> Result<bool> {
    let n = pgm.n();
    let sigma = InducedChar::for_galois(pgm.chi(), pgm.h());
    let s = s_generator(pgm.h(), n, &sigma)?;
    let small = SpanOracle::new(s.clone(), Window::new(n as i64, n as usize, n))?;
    let full = SpanOracle::for_s(pgm.h(), n, &sigma, Window::default_for(n))?;
    let mut elems = vec![s];
    for _ in 0..members {
        let e = small.random_member(rng, 3)?;
        if !full.contains(&e)? {
            return Err(Error::Window("random member not certified".into()));
        }
        elems.push(e);
    }
    for e in &elems {
        let y = pgm.random_stub(rng, pairing_depth(e).max(1), DEFAULT_SERIES_PREC);
        if !theta_pairing(e, pgm, &y)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every k-block in level 0 of random B+-combinations of the generator
/// lies in V_{h_k+1,k}.
pub fn block_containment_check<R: Rng>(oracle: &SpanOracle, h: u64, n: u32, trials: usize, rng: &mut R) -> Result<bool> {
    let p = oracle.generator().p();
    let prof = digit_profile(h, n, p)?;
    for _ in 0..trials {
        let g = oracle.random_member(rng, 4)?;
        for k in 1..=n {
            for (_, y) in g.blocks(k, 0) {
                if !in_vkn(&y, prof.hk[k as usize] as usize + 1) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Splitting random members of S by level mod n gives members of S.
pub fn level_split_check<R: Rng>(oracle: &SpanOracle, n: u32, trials: usize, rng: &mut R) -> Result<bool> {
    for _ in 0..trials {
        let g = oracle.random_member(rng, 4)?;
        for i in 0..n as i64 {
            if !oracle.contains(&g.filter(|v| v.delta.rem_euclid(n as i64) == i))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// twist(b f) = chi(det b)^-1 b twist(f)
pub fn twist_equivariance(f: &InducedElement, chi: &SmoothChar, b: &BorelWord) -> Result<bool> {
    let m = b.matrix(f.p());
    let lhs = twist_by_det(&f.act(b)?, chi)?;
    let c = f.field().inv(chi.eval(&m.det())?)?;
    let rhs = twist_by_det(f, chi)?.act(b)?.scale(c);
    Ok(lhs == rhs)
}

/// On Sym^0 the Hecke operator is T_+ + T_-.
pub fn hecke_sum_check(f: &InducedElement) -> Result<bool> {
    let lhs = hecke_t_sym(&SymInducedElement::from_scalar(f, 0)?)?;
    let rhs = SymInducedElement::from_scalar(&hecke_t_plus(f)?.add(&hecke_t_minus(f)?)?, 0)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn supersingular_small() {
        for (p, h) in [(2, 1), (3, 1), (3, 2), (5, 3)] {
            assert!(ssg_inclusion_check(h, p).unwrap(), "p={p} h={h}");
        }
        assert!(ssg_inclusion_check(3, 3).is_err());
    }

    #[test]
    fn theorem_d_p2() {
        assert!(theorem_d_check(2, 2, Window::new(4, 4, 2)).unwrap());
    }

    #[test]
    fn bridge_p2() {
        let f = FieldConfig::prime(2).unwrap();
        let pgm = PGModule::new(&f, 2, 1, SmoothChar::trivial(&f)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        assert!(bridge_check(&pgm, 3, &mut rng).unwrap());
        // theta itself does not vanish identically
        let id = InducedElement::identity(&InducedChar::for_galois(pgm.chi(), 1));
        let y0 = crate::phigamma::DElement::single(&f, 2, 0, crate::series::LaurentSeries::one(&f, 40));
        let y = pgm.lift(&y0, 1).unwrap();
        assert_eq!(theta_pairing(&id, &pgm, &y).unwrap(), f.one());
    }
}
