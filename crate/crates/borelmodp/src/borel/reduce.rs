//! Reducing an element of ind sigma to a single vertex modulo S_n(h, sigma).
//!
//! Every step is recorded as an elementary move (subtracting explicit
//! translates of the generator, translating, or replacing f by a linear
//! combination of its translates) together with the element it produced, so
//! a run can be replayed and checked independently of the code that chose
//! the moves.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::arith::{digit_profile, lucas_binom, DigitProfile, FieldElem};
use crate::borel::chars::InducedChar;
use crate::borel::group::{BorelGen, BorelWord, Vertex};
use crate::borel::induced::{existfix_average, s_top_coeff, tau_pow, w_ln, InducedElement};
use crate::borel::oracle::{expand, Certificate, SpanOracle, Window};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::seqspace::{v_kn, Seq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Certified,
    Flatten,
    Average,
    Narrow,
    SingleBlock,
    Clean,
    Um,
    Lower,
    CycleBreak,
}

#[derive(Clone, Debug)]
pub enum Move {
    /// f = sum c (w s); the reduction ends at 0
    Member(Certificate),
    /// f -> f - sum c (w s)
    Subtract(Certificate),
    /// f -> w f
    Translate(BorelWord),
    /// f -> sum c (w f)
    Average(Vec<(FieldElem, BorelWord)>),
}

#[derive(Clone, Debug)]
pub struct AuditStep {
    pub stage: Stage,
    pub mv: Move,
    pub after: InducedElement,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub output: InducedElement,
    pub trail: Vec<AuditStep>,
    pub cycle_breaks: usize,
}

impl Reduction {
    pub fn certified_member(&self) -> bool {
        matches!(self.trail.last(), Some(AuditStep { mv: Move::Member(_), .. })) || self.trail.is_empty()
    }
}

/// Re-run the recorded moves on f, checking every intermediate element.
pub fn replay(f: &InducedElement, trail: &[AuditStep], generator: &InducedElement) -> Result<InducedElement> {
    let mut cur = f.clone();
    for (i, step) in trail.iter().enumerate() {
        cur = match &step.mv {
            Move::Member(cert) => {
                if expand(generator, cert)? != cur {
                    return Err(Error::Stalled(format!("audit step {i}: membership certificate does not match")));
                }
                InducedElement::zero(f.sigma())
            }
            Move::Subtract(cert) => cur.sub(&expand(generator, cert)?)?,
            Move::Translate(w) => cur.act(w)?,
            Move::Average(terms) => {
                let mut acc = InducedElement::zero(f.sigma());
                for (c, w) in terms {
                    acc = acc.add(&cur.act(w)?.scale(*c))?;
                }
                acc
            }
        };
        if cur != step.after {
            return Err(Error::Stalled(format!("audit step {i} ({:?}) does not reproduce", step.stage)));
        }
    }
    Ok(cur)
}

/// Replay a reduction and check that it ends where it claims: at 0 through
/// a membership certificate, or at a single vertex.
pub fn validate(f: &InducedElement, r: &Reduction, generator: &InducedElement) -> Result<bool> {
    let out = replay(f, &r.trail, generator)?;
    if out != r.output {
        return Ok(false);
    }
    Ok(if out.is_zero() { r.certified_member() } else { out.support_len() == 1 })
}

#[derive(Clone, Copy, Debug)]
pub struct ReduceConfig {
    pub window: Window,
    pub cycle_limit: usize,
}

impl ReduceConfig {
    pub fn default_for(n: u32) -> ReduceConfig {
        ReduceConfig { window: Window::default_for(n), cycle_limit: 200 }
    }
}

pub struct Reducer {
    sigma: InducedChar,
    n: u32,
    p: u32,
    profile: DigitProfile,
    top: FieldElem,
    oracle: Arc<SpanOracle>,
    config: ReduceConfig,
    // certificates for w_{l,k}, l < h_k
    w_certs: Mutex<HashMap<(u32, u64), Certificate>>,
}

/// The least a in 1..p whose residue generates F_p^x.
fn primitive_root(p: u32) -> u32 {
    (1..p.max(2))
        .find(|&a| {
            let mut x = 1u64;
            (1..p - 1).all(|_| {
                x = x * a as u64 % p as u64;
                x != 1
            })
        })
        .unwrap_or(1)
}

impl Reducer {
    pub fn new(h: u64, n: u32, sigma: &InducedChar, config: ReduceConfig) -> Result<Reducer> {
        let p = sigma.p();
        let oracle = SpanOracle::for_s(h, n, sigma, config.window)?;
        Ok(Reducer {
            sigma: sigma.clone(),
            n,
            p,
            profile: digit_profile(h, n, p)?,
            top: s_top_coeff(n, sigma)?,
            oracle,
            config,
            w_certs: Mutex::new(HashMap::new()),
        })
    }

    pub fn generator(&self) -> &InducedElement {
        self.oracle.generator()
    }

    pub fn oracle(&self) -> &SpanOracle {
        &self.oracle
    }

    fn w_cert(&self, k: u32, l: u64) -> Result<Certificate> {
        if let Some(c) = self.w_certs.lock().expect("lock").get(&(k, l)) {
            return Ok(c.clone());
        }
        let w = w_ln(l, k, &self.sigma)?;
        let c = self
            .oracle
            .certificate(&w)?
            .ok_or_else(|| Error::Window(format!("w_({l},{k}) not certified in {:?}", self.config.window)))?;
        self.w_certs.lock().expect("lock").insert((k, l), c.clone());
        Ok(c)
    }

    /// The word moving level 0, initial blocks to level delta, blocks based at base.
    fn place(&self, base: &Vertex) -> BorelWord {
        let z = base.beta_qp(self.p).shift(-base.delta);
        BorelWord(vec![BorelGen::Unipotent(z), BorelGen::PPower(base.delta)])
    }

    /// Coordinates of a k-block in v_{0,k}, ..., v_{top,k}.
    fn decompose(&self, y: &Seq, top: u64) -> Option<Vec<FieldElem>> {
        let f = &self.sigma.field().clone();
        let k = y.n();
        let mut e = Echelon::new(f, y.len());
        for l in 0..=top {
            e.insert(v_kn(f, l, k).ok()?.entries());
        }
        let terms = e.express(y.entries())?;
        let mut c = vec![FieldElem::ZERO; top as usize + 1];
        for (i, x) in terms {
            c[i] = x;
        }
        Some(c)
    }

    /// Translates of the generator removing the part of the k-block y at
    /// base that lies in V_{h_k,k}, and for k = n also its v_{h_n,n} part.
    /// Returns the certificate and the coefficient of v_{h_k,k} left over.
    fn block_removal(&self, base: &Vertex, y: &Seq) -> Result<(Certificate, FieldElem)> {
        let k = y.n();
        let hk = self.profile.hk[k as usize];
        let c = self.decompose(y, hk).ok_or_else(|| {
            Error::Stalled(format!("{k}-block at {base:?} is not in V_(h_{k}+1,{k}): {y:?}"))
        })?;
        let f = self.sigma.field();
        let place = self.place(base);
        let mut cert = Vec::new();
        for (l, &cl) in c.iter().enumerate().take(hk as usize) {
            if cl.is_zero() {
                continue;
            }
            for (w, x) in self.w_cert(k, l as u64)? {
                cert.push((place.compose(&w), f.mul(cl, x)));
            }
        }
        let lead = c[hk as usize];
        if k == self.n && !lead.is_zero() {
            cert.push((place, lead));
            return Ok((cert, FieldElem::ZERO));
        }
        Ok((cert, lead))
    }

    fn push(&self, trail: &mut Vec<AuditStep>, cur: &mut InducedElement, stage: Stage, mv: Move) -> Result<()> {
        let next = match &mv {
            Move::Member(_) => InducedElement::zero(&self.sigma),
            Move::Subtract(cert) => cur.sub(&expand(self.generator(), cert)?)?,
            Move::Translate(w) => cur.act(w)?,
            Move::Average(terms) => {
                let mut acc = InducedElement::zero(&self.sigma);
                for (c, w) in terms {
                    acc = acc.add(&cur.act(w)?.scale(*c))?;
                }
                acc
            }
        };
        *cur = next.clone();
        trail.push(AuditStep { stage, mv, after: next });
        Ok(())
    }

    fn lower(&self, trail: &mut Vec<AuditStep>, cur: &mut InducedElement) -> Result<()> {
        self.push(trail, cur, Stage::Lower, Move::Translate(BorelWord::single(BorelGen::PPower(-1))))
    }

    /// Remove the level 0 n-blocks with generator translates, then lower.
    fn narrow(&self, trail: &mut Vec<AuditStep>, cur: &mut InducedElement, stage: Stage) -> Result<()> {
        let mut cert = Vec::new();
        for (base, y) in cur.blocks(self.n, 0) {
            cert.extend(self.block_removal(&base, &y)?.0);
        }
        self.push(trail, cur, stage, Move::Subtract(cert))?;
        if !cur.at_level(0).is_zero() {
            return Err(Error::Stalled("level 0 survived narrowing".into()));
        }
        self.lower(trail, cur)
    }

    fn binom_terms(&self, k: u32, l: u64, count: u64) -> Vec<(FieldElem, BorelWord)> {
        let f = self.sigma.field();
        (0..count)
            .filter_map(|j| {
                let c = lucas_binom(j, l, self.p);
                (c != 0).then(|| (f.from_int(c as i64), BorelWord::single(tau_pow(k, j, self.p))))
            })
            .collect()
    }

    pub fn reduce(&self, f: &InducedElement) -> Result<Reduction> {
        let n = self.n;
        let p = self.p;
        let fld = self.sigma.field().clone();
        let mut trail = Vec::new();
        let mut cur = f.clone();
        if cur.is_zero() {
            return Ok(Reduction { output: cur, trail, cycle_breaks: 0 });
        }
        if let Ok(Some(cert)) = self.oracle.certificate(&cur) {
            self.push(&mut trail, &mut cur, Stage::Certified, Move::Member(cert))?;
            return Ok(Reduction { output: cur, trail, cycle_breaks: 0 });
        }
        if cur.support_len() == 1 {
            return Ok(Reduction { output: cur, trail, cycle_breaks: 0 });
        }

        // (i) at most n consecutive levels, starting at 0
        loop {
            let levels = cur.levels();
            let (lo, hi) = (levels[0], *levels.last().expect("nonzero"));
            if hi - lo < n as i64 {
                if lo != 0 {
                    let w = BorelWord::single(BorelGen::PPower(-lo));
                    self.push(&mut trail, &mut cur, Stage::Flatten, Move::Translate(w))?;
                }
                break;
            }
            let inv = fld.inv(self.top)?;
            let cert: Certificate = cur
                .at_level(hi)
                .coeffs()
                .iter()
                .map(|(v, &c)| {
                    let z = v.beta_qp(p).shift(-hi);
                    (BorelWord(vec![BorelGen::Unipotent(z), BorelGen::PPower(hi - n as i64)]), fld.mul(c, inv))
                })
                .collect();
            self.push(&mut trail, &mut cur, Stage::Flatten, Move::Subtract(cert))?;
        }

        // (ii) + (iii) until level j lies in the initial (n-j)-block
        let mut steps = 0usize;
        let k_avg = n + 1;
        let count = (p as u64).pow(k_avg);
        loop {
            steps += 1;
            if steps > self.config.cycle_limit {
                return Err(Error::CycleLimit(self.config.cycle_limit));
            }
            let mut chosen = None;
            for l in 0..count {
                let v = existfix_average(&cur, k_avg, l)?;
                if v.is_zero() {
                    continue;
                }
                if !self.oracle.contains(&v)? {
                    chosen = Some(l);
                    break;
                }
                if l == count - 1 {
                    // v = tau^-1 f, so f itself is certified
                    let cert = self.oracle.certificate(&v)?.expect("contained");
                    let back = BorelWord::single(tau_pow(k_avg, 1, p));
                    let cert = cert.into_iter().map(|(w, c)| (back.compose(&w), c)).collect();
                    self.push(&mut trail, &mut cur, Stage::Certified, Move::Member(cert))?;
                    return Ok(Reduction { output: cur, trail, cycle_breaks: 0 });
                }
            }
            let l = chosen.ok_or_else(|| Error::Stalled("every average vanished".into()))?;
            self.push(&mut trail, &mut cur, Stage::Average, Move::Average(self.binom_terms(k_avg, l, count)))?;
            self.narrow(&mut trail, &mut cur, Stage::Narrow)?;
            if cur.is_zero() {
                return Err(Error::Stalled("narrowing reached 0".into()));
            }
            if (0..n as i64).all(|j| cur.width(j) <= (n as i64 - j) as usize) {
                break;
            }
        }

        // (iv) the single n-block in level 0
        self.narrow(&mut trail, &mut cur, Stage::SingleBlock)?;

        // (v) blocks x_k = c_k v_{h_k,k} at level n-1-k, moved up by U_m
        let a = primitive_root(p);
        let mut cycle_breaks = 0;
        loop {
            if cur.is_zero() {
                return Err(Error::Stalled("reduction reached 0".into()));
            }
            let mut cert = Vec::new();
            let mut lead = vec![FieldElem::ZERO; n as usize];
            for k in 0..n {
                let delta = (n - 1 - k) as i64;
                let bl = cur.blocks(k, delta);
                if cur.width(delta) > k as usize || bl.len() > 1 {
                    return Err(Error::Stalled(format!("level {delta} is wider than its {k}-block")));
                }
                if let Some((base, y)) = bl.first() {
                    let (c, l) = self.block_removal(base, y)?;
                    cert.extend(c);
                    lead[k as usize] = l;
                }
            }
            if cur.levels().iter().any(|&d| d < 0 || d >= n as i64) {
                return Err(Error::Stalled("support left levels 0..n-1".into()));
            }
            if !cert.is_empty() {
                self.push(&mut trail, &mut cur, Stage::Clean, Move::Subtract(cert))?;
            }
            if cur.support_len() == 1 {
                return Ok(Reduction { output: cur, trail, cycle_breaks });
            }
            steps += 1;
            if steps > self.config.cycle_limit {
                return Err(Error::CycleLimit(self.config.cycle_limit));
            }
            let ks: Vec<u32> = (0..n).filter(|&k| !lead[k as usize].is_zero()).collect();
            let digit = |k: u32, t: u32| self.profile.i[((2 * n - 1 - k - t % n) % n) as usize];
            let cycling = ks.len() >= 2 && (0..n).all(|t| ks.iter().all(|&k| digit(k, t) == digit(ks[0], t)));
            if cycling && ks[0] == 0 {
                let s2 = self.sigma.sigma2.on_residue(a);
                let terms = vec![
                    (fld.inv(s2)?, BorelWord::single(BorelGen::diag_right(a as i64, p)?)),
                    (fld.neg(fld.one()), BorelWord::identity()),
                ];
                self.push(&mut trail, &mut cur, Stage::CycleBreak, Move::Average(terms))?;
                cycle_breaks += 1;
                continue;
            }
            let m = ks.iter().map(|&k| digit(k, 0)).min().expect("nonempty") as u64;
            self.push(&mut trail, &mut cur, Stage::Um, Move::Average(self.binom_terms(n, m, p as u64)))?;
            let mut cert = Vec::new();
            for (base, y) in cur.blocks(n, 0) {
                cert.extend(self.block_removal(&base, &y)?.0);
            }
            if !cert.is_empty() {
                self.push(&mut trail, &mut cur, Stage::Clean, Move::Subtract(cert))?;
            }
            if !cur.at_level(0).is_zero() {
                return Err(Error::Stalled("level 0 survived U_m".into()));
            }
            self.lower(&mut trail, &mut cur)?;
        }
    }
}

/// reduce_mod_S with the default window and cycle limit.
pub fn reduce_mod_s(f: &InducedElement, h: u64, n: u32) -> Result<Reduction> {
    Reducer::new(h, n, f.sigma(), ReduceConfig::default_for(n))?.reduce(f)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldConfig;
    use rand::SeedableRng;

    fn setup(p: u32, h: u64, n: u32) -> Reducer {
        let f = FieldConfig::prime(p).unwrap();
        Reducer::new(h, n, &InducedChar::trivial(&f), ReduceConfig::default_for(n)).unwrap()
    }

    #[test]
    fn trivial_inputs() {
        let red = setup(3, 2, 2);
        let s = red.generator().clone();
        let r = red.reduce(&s).unwrap();
        assert!(r.output.is_zero() && r.certified_member());
        assert!(validate(&s, &r, &s).unwrap());
        let id = InducedElement::identity(s.sigma());
        let r = red.reduce(&id).unwrap();
        assert_eq!(r.output, id);
        assert!(validate(&id, &r, &s).unwrap());
    }

    #[test]
    fn top_binomial_vector() {
        for (p, h) in [(2, 1), (3, 1), (3, 2)] {
            let red = setup(p, h, 2);
            let s = red.generator().clone();
            let w = w_ln(h * (p as u64 - 1), 2, s.sigma()).unwrap();
            let f = s.field().clone();
            let top = InducedElement::identity(s.sigma()).act(&BorelWord::single(BorelGen::PPower(2))).unwrap();
            // w + c [g_{0,n}] is the generator, c = (-1/lambda)^n
            assert!(red.oracle().contains(&w.add(&top.scale(red.top)).unwrap()).unwrap());
            assert!(!red.oracle().contains(&w).unwrap());
            let r = red.reduce(&w).unwrap();
            assert_eq!(r.output.support_len(), 1, "p={p} h={h}");
            assert!(validate(&w, &r, &s).unwrap());
            // w is congruent to -c [g_{0,n}] modulo S
            let rep = top.scale(f.neg(red.top));
            assert_eq!(red.reduce(&rep).unwrap().output, rep);
        }
    }

    #[test]
    fn tampered_trail_is_rejected() {
        let red = setup(3, 1, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let e = InducedElement::random(red.generator().sigma(), &mut rng, 0..=2, 2, 6);
        let mut r = red.reduce(&e).unwrap();
        assert!(validate(&e, &r, red.generator()).unwrap());
        let f = e.field().clone();
        let last = r.trail.len() - 1;
        let bumped = r.trail[last].after.add(&InducedElement::identity(e.sigma()).scale(f.one())).unwrap();
        r.trail[last].after = bumped;
        assert!(replay(&e, &r.trail, red.generator()).is_err());
    }

    #[test]
    fn height_three() {
        for h in [1, 3] {
            let red = setup(2, h, 3);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(h);
            for _ in 0..5 {
                let e = InducedElement::random(red.generator().sigma(), &mut rng, 0..=3, 3, 5);
                let r = red.reduce(&e).unwrap();
                assert!(validate(&e, &r, red.generator()).unwrap());
                assert!(r.output.is_zero() || r.output.support_len() == 1);
            }
        }
    }
}
