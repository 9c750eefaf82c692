//! Named verification suites over parameter grids, shared by the command
//! line and the acceptance harness.
//!
//! A suite expands its parameters into points; points run concurrently and
//! their records come back in point order.  Each point draws from its own
//! ChaCha8 stream, keyed by the seed and the point's label, so a point gives
//! the same verdict whether it runs alone or inside a larger grid.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{
    digit_profile, is_prime, lucas_binom, primitive_exponents, Field, FieldConfig, PadicInt,
    DEFAULT_PREC_P,
};
use crate::borel::checks::{
    block_containment_check, bridge_check, hecke_sum_check, level_split_check, ssg_inclusion_check, theorem_d_check,
    twist_equivariance,
};
use crate::borel::{
    canonicalize, enghecke_generators, formule_check, hecke_t, hecke_t_sym, validate, w_ln, InducedChar,
    InducedElement, ReduceConfig, Reducer, SmoothChar, SpanOracle, SymInducedElement, Window,
};
use crate::error::{Error, Result};
use crate::par;
use crate::phigamma::{DElement, PGModule};
use crate::sample;
use crate::seqspace::{
    block_subsequence, cyclic_shift, delta, dim_vkn, exact_sequence_check, in_vkn, in_vkn_by_rank, level_len,
    mu_a, orth_complement_check, pairing, v_kn,
};
use crate::series::{GammaElement, LaurentSeries, DEFAULT_SERIES_PREC};

pub const SUITES: &[&str] = &[
    "lucas", "prbin", "orthovkn", "del", "mua", "extrbl", "cosets", "series", "psiomeg", "ddiese", "acbormu",
    "nultheta", "freeblock", "oneshtb", "formule", "enghecke", "ssgisphl", "theoremD", "reduce", "shlisom",
];

pub const DEFAULT_SEED: u64 = 20240601;

/// Overrides for a run; `None` means the suite's own default grid.
#[derive(Clone, Debug)]
pub struct Params {
    pub p: Option<Vec<u32>>,
    pub n: Option<Vec<u32>>,
    pub h: Option<Vec<u64>>,
    /// X-precision of random series and stub layers
    pub prec: Option<i64>,
    pub window: Option<Window>,
    pub trials: Option<usize>,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params { p: None, n: None, h: None, prec: None, window: None, trials: None, seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct Record {
    pub suite: String,
    pub params: Vec<(String, String)>,
    pub verdict: Verdict,
    /// for a failure: what failed, and how to rerun just this point
    pub witness: Option<String>,
    pub elapsed: Duration,
}

enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

type Job = Box<dyn Fn(&mut ChaCha8Rng) -> Result<Outcome> + Send + Sync>;

struct Point {
    params: Vec<(String, String)>,
    job: Job,
}

fn point<F>(params: &[(&str, String)], job: F) -> Point
where
    F: Fn(&mut ChaCha8Rng) -> Result<Outcome> + Send + Sync + 'static,
{
    Point { params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(), job: Box::new(job) }
}

fn expect(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(what())
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Ok(Outcome::Fail(format!($($msg)*)));
        }
    };
}

// FNV-1a, only used to key the random stream of a point
fn stream_key(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

fn label(suite: &str, params: &[(String, String)]) -> String {
    let mut s = suite.to_string();
    for (k, v) in params {
        s.push_str(&format!(" {k}={v}"));
    }
    s
}

fn grid<T: Clone>(given: &Option<Vec<T>>, default: &[T]) -> Vec<T> {
    given.clone().unwrap_or_else(|| default.to_vec())
}

fn check_primes(ps: &[u32], allowed: &[u32], suite: &str) -> Result<()> {
    for &p in ps {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !allowed.contains(&p) {
            return Err(Error::Domain(format!("suite {suite} runs for p in {allowed:?}, got {p}")));
        }
    }
    Ok(())
}

fn check_ns(ns: &[u32], lo: u32, hi: u32, suite: &str) -> Result<()> {
    match ns.iter().find(|&&n| n < lo || n > hi) {
        Some(n) => Err(Error::Domain(format!("suite {suite} runs for {lo} <= n <= {hi}, got {n}"))),
        None => Ok(()),
    }
}

/// Primitive exponents for (n, p), or the explicit list split into
/// primitive ones and the rest.
fn exponents(params: &Params, n: u32, p: u32) -> Result<(Vec<u64>, Vec<u64>)> {
    let all = primitive_exponents(n, p);
    match &params.h {
        None => Ok((all, Vec::new())),
        Some(hs) => {
            let (ok, rest): (Vec<u64>, Vec<u64>) = hs.iter().partition(|h| all.contains(h));
            if ok.is_empty() {
                return Err(Error::Domain(format!("none of h={hs:?} is primitive for n={n}, p={p}")));
            }
            Ok((ok, rest))
        }
    }
}

fn skipped(out: &mut Vec<Point>, p: u32, n: u32, rest: &[u64]) {
    for &h in rest {
        let why = format!("h={h} is not primitive for n={n}, p={p}");
        out.push(point(&[("p", p.to_string()), ("n", n.to_string()), ("h", h.to_string())], move |_| {
            Ok(Outcome::Skip(why.clone()))
        }));
    }
}

/// The characters chi used with the (phi, Gamma)-modules: trivial, and
/// omega mu_lambda for one lambda != 1, over F_p or F_{p^2}.
pub fn tame_chars(p: u32) -> Result<Vec<(String, SmoothChar)>> {
    let fp = FieldConfig::prime(p)?;
    let mut out = vec![("trivial".to_string(), SmoothChar::trivial(&fp))];
    if p > 2 {
        out.push(("omega*mu_2".to_string(), SmoothChar::new(&fp, 1, fp.from_int(2))?));
    }
    if p <= 3 {
        let e = FieldConfig::with_degree(p, 2)?;
        out.push((format!("omega*mu_t/F{}", e.size()), SmoothChar::new(&e, 1, e.generator_t())?));
    }
    Ok(out)
}

fn trials(params: &Params, default: usize) -> usize {
    params.trials.unwrap_or(default)
}

fn points(suite: &str, params: &Params) -> Result<Vec<Point>> {
    let prec = params.prec.unwrap_or(DEFAULT_SERIES_PREC);
    if prec < 4 {
        return Err(Error::Domain(format!("series precision {prec} is too small")));
    }
    let mut out = Vec::new();
    match suite {
        "lucas" => {
            let ps = grid(&params.p, &[2, 3, 5]);
            check_primes(&ps, &[2, 3, 5, 7], suite)?;
            for p in ps {
                out.push(point(&[("p", p.to_string())], move |_| Ok(lucas_point(p))));
            }
        }
        "prbin" | "orthovkn" | "del" | "mua" | "extrbl" => {
            let pts: Vec<(u32, u32)> = match (&params.p, &params.n) {
                (None, None) => vec![(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)],
                _ => {
                    let ps = grid(&params.p, &[2, 3]);
                    let ns = grid(&params.n, &[1, 2]);
                    ps.iter().flat_map(|&p| ns.iter().map(move |&n| (p, n))).collect()
                }
            };
            let ps: Vec<u32> = pts.iter().map(|x| x.0).collect();
            check_primes(&ps, &[2, 3, 5], suite)?;
            for &(p, n) in &pts {
                if level_len(p, n) > 243 || n == 0 {
                    return Err(Error::Domain(format!("p^n must be between p and 243, got p={p}, n={n}")));
                }
            }
            let t = trials(params, 20);
            for (p, n) in pts {
                if suite == "extrbl" && n < 2 {
                    continue;
                }
                let s = suite.to_string();
                out.push(point(&[("p", p.to_string()), ("n", n.to_string())], move |rng| {
                    let f = FieldConfig::prime(p)?;
                    match s.as_str() {
                        "prbin" => prbin_point(&f, n),
                        "orthovkn" => Ok(orthovkn_point(&f, n)),
                        "del" => del_point(&f, n, t, rng),
                        "mua" => mua_point(&f, n),
                        _ => extrbl_point(&f, n, t, rng),
                    }
                }));
            }
        }
        "cosets" => {
            let ps = grid(&params.p, &[2, 3, 5]);
            check_primes(&ps, &[2, 3, 5, 7], suite)?;
            let t = trials(params, 20);
            for p in ps {
                out.push(point(&[("p", p.to_string())], move |rng| cosets_point(p, t, rng)));
            }
        }
        "series" => {
            let ps = grid(&params.p, &[2, 3]);
            check_primes(&ps, &[2, 3, 5], suite)?;
            let t = trials(params, 50);
            for p in ps {
                out.push(point(&[("p", p.to_string()), ("prec", prec.to_string())], move |rng| {
                    series_point(p, prec, t, rng)
                }));
            }
        }
        "psiomeg" | "ddiese" | "acbormu" | "nultheta" => {
            let ps = grid(&params.p, &[2, 3]);
            check_primes(&ps, &[2, 3, 5], suite)?;
            let ns = grid(&params.n, &[2, 3]);
            check_ns(&ns, 1, 3, suite)?;
            let t = trials(params, if suite == "acbormu" { 20 } else { 10 });
            for &p in &ps {
                for &n in &ns {
                    let (hs, rest) = exponents(params, n, p)?;
                    skipped(&mut out, p, n, &rest);
                    for h in hs {
                        for (name, chi) in tame_chars(p)? {
                            let s = suite.to_string();
                            let labels = [
                                ("p", p.to_string()),
                                ("n", n.to_string()),
                                ("h", h.to_string()),
                                ("chi", name.clone()),
                            ];
                            out.push(point(&labels, move |rng| {
                                let pgm = PGModule::new(chi.field(), n, h, chi.clone())?;
                                match s.as_str() {
                                    "psiomeg" => psiomeg_point(&pgm, prec, t, rng),
                                    "ddiese" => ddiese_point(&pgm, prec, t, rng),
                                    "acbormu" => acbormu_point(&pgm, t, rng),
                                    _ => nultheta_point(&pgm, t, rng),
                                }
                            }));
                        }
                    }
                }
            }
        }
        "freeblock" | "oneshtb" | "reduce" => {
            let ps = grid(&params.p, &[2, 3]);
            check_primes(&ps, &[2, 3, 5], suite)?;
            let ns = grid(&params.n, &[2]);
            check_ns(&ns, 2, 3, suite)?;
            let t = trials(params, match suite {
                "oneshtb" => 30,
                "reduce" => 25,
                _ => 0,
            });
            for &p in &ps {
                for &n in &ns {
                    let window = params.window.unwrap_or(Window::default_for(n));
                    let (hs, rest) = exponents(params, n, p)?;
                    skipped(&mut out, p, n, &rest);
                    for h in hs {
                        let s = suite.to_string();
                        let mut labels = vec![("p", p.to_string()), ("n", n.to_string()), ("h", h.to_string())];
                        labels.push(("window", format!("{},{},{}", window.levels, window.den, window.unit_depth)));
                        out.push(point(&labels, move |rng| {
                            let f = FieldConfig::prime(p)?;
                            let sigma = InducedChar::for_galois(&SmoothChar::trivial(&f), h);
                            match s.as_str() {
                                "freeblock" => freeblock_point(&sigma, h, n, window),
                                "oneshtb" => oneshtb_point(&sigma, h, n, window, t, rng),
                                _ => reduce_point(&sigma, h, n, window, t, rng),
                            }
                        }));
                    }
                }
            }
        }
        "formule" | "enghecke" => {
            let ps = grid(&params.p, &[2, 3, 5]);
            check_primes(&ps, &[2, 3, 5, 7], suite)?;
            let t = trials(params, 20);
            for p in ps {
                let s = suite.to_string();
                out.push(point(&[("p", p.to_string())], move |rng| {
                    let f = FieldConfig::prime(p)?;
                    if s == "formule" {
                        formule_point(&f, t, rng)
                    } else {
                        enghecke_point(&f)
                    }
                }));
            }
        }
        "ssgisphl" => {
            let ps = grid(&params.p, &[2, 3, 5, 7]);
            check_primes(&ps, &[2, 3, 5, 7, 11, 13], suite)?;
            for p in ps {
                let hs: Vec<u64> = match &params.h {
                    Some(hs) => hs.iter().copied().filter(|&h| h >= 1 && h < p as u64).collect(),
                    None => (1..p as u64).collect(),
                };
                for h in hs {
                    out.push(point(&[("p", p.to_string()), ("h", h.to_string())], move |_| {
                        Ok(expect(ssg_inclusion_check(h, p)?, || "binomial identity or element equality".into()))
                    }));
                }
            }
        }
        "theoremD" => {
            let pts: Vec<(u32, u32)> = match (&params.p, &params.n) {
                (None, None) => vec![(2, 2), (3, 2), (2, 3)],
                _ => {
                    let ps = grid(&params.p, &[2, 3]);
                    let ns = grid(&params.n, &[2]);
                    ps.iter().flat_map(|&p| ns.iter().map(move |&n| (p, n))).collect()
                }
            };
            check_primes(&pts.iter().map(|x| x.0).collect::<Vec<_>>(), &[2, 3, 5], suite)?;
            check_ns(&pts.iter().map(|x| x.1).collect::<Vec<_>>(), 2, 3, suite)?;
            for (p, n) in pts {
                let window = params.window.unwrap_or(Window::default_for(n));
                let labels = [
                    ("p", p.to_string()),
                    ("n", n.to_string()),
                    ("window", format!("{},{},{}", window.levels, window.den, window.unit_depth)),
                ];
                out.push(point(&labels, move |_| {
                    Ok(expect(theorem_d_check(n, p, window)?, || "spans differ inside the window".into()))
                }));
            }
        }
        "shlisom" => {
            let ps = grid(&params.p, &[2, 3]);
            check_primes(&ps, &[2, 3], suite)?;
            let ns = grid(&params.n, &[2]);
            check_ns(&ns, 2, 2, suite)?;
            let t = trials(params, 10);
            for &p in &ps {
                for &n in &ns {
                    let (hs, rest) = exponents(params, n, p)?;
                    skipped(&mut out, p, n, &rest);
                    for h in hs {
                        for (name, chi) in tame_chars(p)? {
                            let labels =
                                [("p", p.to_string()), ("n", n.to_string()), ("h", h.to_string()), ("chi", name)];
                            out.push(point(&labels, move |rng| {
                                let pgm = PGModule::new(chi.field(), n, h, chi.clone())?;
                                Ok(expect(bridge_check(&pgm, t, rng)?, || "theta pairs nontrivially with S".into()))
                            }));
                        }
                    }
                }
            }
        }
        other => return Err(Error::Domain(format!("unknown suite {other:?}"))),
    }
    Ok(out)
}

/// Run one suite, or every suite for "all".  Configuration problems are
/// reported before anything is computed.
pub fn run(suite: &str, params: &Params) -> Result<Vec<Record>> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut jobs = Vec::new();
    for name in names {
        for pt in points(name, params)? {
            jobs.push((name.to_string(), pt));
        }
    }
    Ok(par::map(&jobs, |(name, pt)| {
        let key = label(name, &pt.params);
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(stream_key(&key));
        let start = Instant::now();
        let outcome = (pt.job)(&mut rng);
        let elapsed = start.elapsed();
        let (verdict, witness) = match outcome {
            Ok(Outcome::Pass) => (Verdict::Pass, None),
            Ok(Outcome::Skip(why)) => (Verdict::Skipped(why), None),
            Ok(Outcome::Fail(why)) => (Verdict::Fail, Some(why)),
            Err(e) => (Verdict::Fail, Some(format!("error: {e}"))),
        };
        let witness = witness.map(|w| format!("{w}; rerun: {}", rerun_command(name, &pt.params, params)));
        Record { suite: name.clone(), params: pt.params.clone(), verdict, witness, elapsed }
    }))
}

fn rerun_command(suite: &str, point: &[(String, String)], params: &Params) -> String {
    let mut cmd = format!("borelmodp verify {suite}");
    for (k, v) in point {
        match k.as_str() {
            "p" | "n" | "h" | "prec" | "window" => cmd.push_str(&format!(" --{k} {v}")),
            _ => {}
        }
    }
    if let Some(t) = params.trials {
        cmd.push_str(&format!(" --trials {t}"));
    }
    cmd.push_str(&format!(" --seed {}", params.seed));
    cmd
}

fn lucas_point(p: u32) -> Outcome {
    let top = (p as usize).pow(4);
    let mut row = vec![1u32];
    for a in 0..top {
        for (b, &c) in row.iter().enumerate() {
            if lucas_binom(a as u64, b as u64, p) != c {
                return Outcome::Fail(format!("binom({a}, {b}) mod {p}"));
            }
        }
        let mut next = vec![1u32; a + 2];
        for b in 1..=a {
            next[b] = (row[b - 1] + row[b]) % p;
        }
        row = next;
    }
    Outcome::Pass
}

fn prbin_point(f: &Field, n: u32) -> Result<Outcome> {
    let q = level_len(f.p(), n) as u64;
    for k in 0..q {
        for l in 0..q - k {
            let got = pairing(&v_kn(f, k, n)?, &v_kn(f, l, n)?)?;
            let want = if k + l + 1 < q {
                f.zero()
            } else if k % 2 == 0 {
                f.one()
            } else {
                f.neg(f.one())
            };
            ensure!(got == want, "<v_{k}, v_{l}> = {}", f.format(got));
        }
    }
    Ok(Outcome::Pass)
}

fn orthovkn_point(f: &Field, n: u32) -> Outcome {
    let q = level_len(f.p(), n);
    for k in 0..=q {
        if dim_vkn(f, k, n) != k {
            return Outcome::Fail(format!("dim V_({k},{n})"));
        }
        if !orth_complement_check(f, k, n) {
            return Outcome::Fail(format!("orthogonal of V_({k},{n})"));
        }
    }
    Outcome::Pass
}

fn del_point(f: &Field, n: u32, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let q = level_len(f.p(), n);
    for k in 0..=q {
        for l in 0..=q - k {
            ensure!(exact_sequence_check(f, k, l, n), "Delta^{k} on V_({},{n})", l + k);
        }
    }
    for _ in 0..t {
        let x = sample::seq(rng, f, n);
        ensure!(cyclic_shift(&x) == x.add(&delta(&x))?, "shift vs Id + Delta on {x:?}");
        let k = rng.gen_range(0..=q);
        let mut y = crate::seqspace::Seq::zero(f, n);
        for l in 0..k {
            y = y.add(&v_kn(f, l as u64, n)?.scale(sample::nonzero(rng, f)))?;
        }
        ensure!(in_vkn(&y, k) && in_vkn_by_rank(&y, k), "random element of V_({k},{n})");
        ensure!(in_vkn(&x, k) == in_vkn_by_rank(&x, k), "membership criteria disagree on {x:?}");
    }
    Ok(Outcome::Pass)
}

fn mua_point(f: &Field, n: u32) -> Result<Outcome> {
    let p = f.p();
    let q = level_len(p, n);
    for a in 1..q as i64 {
        if a % p as i64 == 0 {
            continue;
        }
        let u = PadicInt::from_i64(a, p, DEFAULT_PREC_P);
        for k in 0..q {
            let v = v_kn(f, k as u64, n)?;
            let ak = f.pow(f.from_int(a), k as i64)?;
            let d = mu_a(&v, &u)?.sub(&v.scale(ak))?;
            ensure!(in_vkn(&d, k), "mu_{a}(v_{k}) - {a}^{k} v_{k} not in V_({k},{n})");
        }
    }
    Ok(Outcome::Pass)
}

fn extrbl_point(f: &Field, n: u32, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = f.p() as usize;
    let q = level_len(f.p(), n);
    for k in 0..q {
        for i in 0..p {
            let y = block_subsequence(&v_kn(f, k as u64, n)?, i as u32)?;
            let c = f.from_int(lucas_binom(i as u64, (k % p) as u64, f.p()) as i64);
            ensure!(y == v_kn(f, (k / p) as u64, n - 1)?.scale(c), "block {i} of v_{k}");
        }
    }
    for _ in 0..t {
        let k = rng.gen_range(1..=q);
        let mut x = crate::seqspace::Seq::zero(f, n);
        for l in 0..k {
            x = x.add(&v_kn(f, l as u64, n)?.scale(sample::nonzero(rng, f)))?;
        }
        for i in 0..p {
            let y = block_subsequence(&x, i as u32)?;
            ensure!(in_vkn(&y, (k - 1) / p + 1), "block {i} of {x:?}");
        }
    }
    Ok(Outcome::Pass)
}

fn cosets_point(p: u32, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let f = FieldConfig::prime(p)?;
    for _ in 0..t {
        let sigma = sample::induced_char(rng, &f);
        let g = sample::word(rng, p, 4).matrix(p);
        let k = sample::kz(rng, p);
        let (v, c) = canonicalize(&g, &sigma)?;
        let (vk, ck) = canonicalize(&g.mul(&k), &sigma)?;
        let (root, sk) = canonicalize(&k, &sigma)?;
        ensure!(root == crate::borel::Vertex::root(), "{k:?} is not in KZ");
        ensure!(vk == v && ck == f.mul(c, sk), "g k for g={g:?}, k={k:?}");

        let e = InducedElement::random(&sigma, rng, -1..=2, 2, 4);
        let w1 = sample::word(rng, p, 3);
        let w2 = sample::word(rng, p, 3);
        ensure!(e.act(&w1.compose(&w2))? == e.act(&w2)?.act(&w1)?, "action law for {w1:?}, {w2:?}");
        let chi = sample::smooth_char(rng, &f);
        ensure!(twist_equivariance(&e, &chi, &w1)?, "twist by {chi:?}");
    }
    Ok(Outcome::Pass)
}

fn random_series<R: Rng>(rng: &mut R, f: &Field, prec: i64, val: i64) -> LaurentSeries {
    let coeffs = (0..prec - val).map(|_| f.from_code(rng.gen_range(0..f.size())).expect("code")).collect();
    LaurentSeries::new(f, val, coeffs, prec)
}

fn random_gamma<R: Rng>(rng: &mut R, p: u32) -> Result<GammaElement> {
    GammaElement::new(sample::padic_unit(rng, p))
}

fn series_point(p: u32, prec: i64, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let f = FieldConfig::prime(p)?;
    let guaranteed = prec / p as i64;
    let x1 = LaurentSeries::one_plus_x(&f, prec);
    for _ in 0..t {
        let v = rng.gen_range(-3..=0);
        let a = random_series(rng, &f, prec, v);
        ensure!(a.phi().psi().eq_mod_prec(&a), "psi phi on {a:?}");
        // products with poles lose precision; keep the rest integral
        let a = random_series(rng, &f, prec, 0);
        let y = random_series(rng, &f, prec, 0);

        let lhs = a.phi().mul(&y).psi();
        let rhs = a.mul(&y.psi());
        ensure!(lhs.prec().min(rhs.prec()) >= guaranteed, "precision loss");
        ensure!(lhs.eq_mod_prec(&rhs), "projection formula on {a:?}, {y:?}");

        let mut acc = LaurentSeries::zero(&f, prec);
        for j in 0..p as i64 {
            let piece = x1.powi(-j)?.mul(&a).psi().phi();
            acc = acc.add(&x1.powi(j)?.mul(&piece));
        }
        ensure!(acc.prec() >= guaranteed && acc.eq_mod_prec(&a), "reconstruction of {a:?}");

        let b = random_series(rng, &f, prec, 0);
        let (g1, g2) = (random_gamma(rng, p)?, random_gamma(rng, p)?);
        let lhs = b.gamma_act(&g2)?.gamma_act(&g1)?;
        let rhs = b.gamma_act(&g1.compose(&g2))?;
        ensure!(lhs.eq_mod_prec(&rhs), "gamma group law on {b:?}");

        let lhs = b.psi().gamma_act(&g1)?;
        let rhs = b.gamma_act(&g1)?.psi();
        ensure!(lhs.prec().min(rhs.prec()) >= guaranteed, "precision loss");
        ensure!(lhs.eq_mod_prec(&rhs), "gamma and psi on {b:?}");

        let u = LaurentSeries::one(&f, prec).add(&random_series(rng, &f, prec, 1));
        let s1 = PadicInt::from_i64(rng.gen_range(-1000..1000), p, DEFAULT_PREC_P);
        let s2 = sample::padic_unit(rng, p);
        let lhs = u.unit_pow(&s1.add(&s2))?;
        let rhs = u.unit_pow(&s1)?.mul(&u.unit_pow(&s2)?);
        ensure!(lhs.eq_mod_prec(&rhs), "unit_pow exponent law on {u:?}");
    }
    Ok(Outcome::Pass)
}

fn psiomeg_point(pgm: &PGModule, prec: i64, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let f = pgm.field();
    let n = pgm.n() as usize;
    let prof = pgm.profile();
    for j in 0..n {
        let i = prof.i[(n - j) % n];
        if j >= 1 && i == 0 {
            let got = pgm.psi_d(&pgm.basis(j, prec))?;
            let lam = f.inv(pgm.chi().lambda())?;
            let want = DElement::single(f, pgm.n(), j - 1, LaurentSeries::one(f, prec).scale(lam));
            ensure!(got.eq_mod_prec(&want), "psi(f_{j})");
        }
    }
    for _ in 0..t {
        let d = pgm.random_delement(rng, prec);
        ensure!(pgm.psi_d(&d)?.is_integral(), "psi leaves D# on {d:?}");
        ensure!(pgm.psi_d(&pgm.phi_d(&d)?)?.eq_mod_prec(&d), "psi phi on {d:?}");
        let a = random_series(rng, f, prec, 0);
        let lhs = pgm.psi_d(&pgm.phi_d(&d)?.mul_series(&a.phi()))?;
        ensure!(lhs.eq_mod_prec(&d.mul_series(&a)), "projection formula on {d:?}");
        let g = random_gamma(rng, pgm.p())?;
        let lhs = pgm.gamma_d(&g, &pgm.phi_d(&d)?)?;
        let rhs = pgm.phi_d(&pgm.gamma_d(&g, &d)?)?;
        ensure!(lhs.eq_mod_prec(&rhs), "phi and gamma on {d:?}");
        let lhs = pgm.gamma_d(&g, &pgm.psi_d(&d)?)?;
        let rhs = pgm.psi_d(&pgm.gamma_d(&g, &d)?)?;
        ensure!(lhs.eq_mod_prec(&rhs), "psi and gamma on {d:?}");
    }
    Ok(Outcome::Pass)
}

fn ddiese_point(pgm: &PGModule, prec: i64, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let zero = DElement::zero(pgm.field(), pgm.n(), prec);
    ensure!(pgm.psi_preimage(&zero)?.is_zero(), "preimage of 0");
    for _ in 0..t {
        let d = pgm.random_delement(rng, prec);
        let y = pgm.psi_preimage(&d)?;
        ensure!(y.is_integral(), "preimage of {d:?} leaves D#");
        ensure!(pgm.psi_d(&y)?.eq_mod_prec(&d), "psi of the preimage of {d:?}");
        let g = random_gamma(rng, pgm.p())?;
        ensure!(pgm.gamma_d(&g, &d)?.is_integral(), "gamma leaves D# on {d:?}");
    }
    Ok(Outcome::Pass)
}

fn acbormu_point(pgm: &PGModule, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    for _ in 0..t {
        let k = sample::kz(rng, pgm.p());
        ensure!(pgm.acbormu_check(&k, 2, rng)?, "k = {k:?}");
    }
    Ok(Outcome::Pass)
}

fn nultheta_point(pgm: &PGModule, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    ensure!(pgm.key_congruence_check(t, rng)?, "key congruence");
    Ok(expect(pgm.nultheta_check(t, rng)?, || "theta not killed".into()))
}

fn freeblock_point(sigma: &InducedChar, h: u64, n: u32, window: Window) -> Result<Outcome> {
    let o = SpanOracle::for_s(h, n, sigma, window)?;
    let prof = digit_profile(h, n, sigma.p())?;
    for k in 1..=n {
        for l in 0..prof.hk[k as usize] {
            ensure!(o.contains(&w_ln(l, k, sigma)?)?, "w_({l},{k}) not certified");
        }
    }
    ensure!(!o.contains(&w_ln(prof.hn(), n, sigma)?)?, "w_({},{n}) certified", prof.hn());
    ensure!(!o.contains(&InducedElement::identity(sigma))?, "[Id] certified");
    Ok(Outcome::Pass)
}

fn oneshtb_point(sigma: &InducedChar, h: u64, n: u32, window: Window, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let o = SpanOracle::for_s(h, n, sigma, window)?;
    ensure!(block_containment_check(&o, h, n, t, rng)?, "a level-0 block escapes V_(h_k+1,k)");
    Ok(expect(level_split_check(&o, n, t.div_ceil(3), rng)?, || "a level class is not in S".into()))
}

fn reduce_point(sigma: &InducedChar, h: u64, n: u32, window: Window, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let config = ReduceConfig { window, ..ReduceConfig::default_for(n) };
    let red = Reducer::new(h, n, sigma, config)?;
    for _ in 0..t {
        let e = InducedElement::random(sigma, rng, 0..=n as i64, n as usize, 6);
        let r = red.reduce(&e).map_err(|err| Error::Stalled(format!("{err} on\n{}", e.dump())))?;
        ensure!(validate(&e, &r, red.generator())?, "audit trail rejected for\n{}", e.dump());
        ensure!(r.output.is_zero() == red.oracle().contains(&e)?, "disagrees with the oracle on\n{}", e.dump());
    }
    Ok(Outcome::Pass)
}

fn formule_point(f: &Field, t: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = f.p();
    for r in 0..p as usize {
        ensure!(formule_check(f, r)?, "table for r={r}");
    }
    for _ in 0..t {
        let sigma = sample::induced_char(rng, f);
        let e = InducedElement::random(&sigma, rng, -1..=2, 2, 4);
        ensure!(hecke_sum_check(&InducedElement::random(&InducedChar::trivial(f), rng, -1..=2, 2, 4))?, "T = T+ + T-");
        let w = sample::word(rng, p, 3);
        ensure!(hecke_t(&e.act(&w)?)? == hecke_t(&e)?.act(&w)?, "T and {w:?} on\n{}", e.dump());
        let r = rng.gen_range(0..p as usize);
        let i = rng.gen_range(0..=r);
        let x = SymInducedElement::monomial(f, r, &sample::word(rng, p, 2).matrix(p), i)?;
        ensure!(hecke_t_sym(&x.act(&w)?)? == hecke_t_sym(&x)?.act(&w)?, "T on Sym^{r} and {w:?}");
    }
    Ok(Outcome::Pass)
}

fn enghecke_point(f: &Field) -> Result<Outcome> {
    for r in 0..f.p() as usize {
        for (idx, g) in enghecke_generators(r, f)?.iter().enumerate() {
            ensure!(hecke_t_sym(&g.preimage)? == g.image, "generator {idx} for r={r}");
            ensure!(g.image.to_scalar().is_some(), "generator {idx} for r={r} has non-x^r values");
        }
    }
    Ok(Outcome::Pass)
}
