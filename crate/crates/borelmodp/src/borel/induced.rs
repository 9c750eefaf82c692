//! Finitely supported elements of ind_{KZ}^B sigma, written in the basis
//! [g_{beta,delta}] of coset representatives.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::arith::{is_primitive, lucas_binom, Field, FieldElem, Qp};
use crate::borel::chars::{InducedChar, SmoothChar};
use crate::borel::group::{canonicalize, BorelGen, BorelMat, BorelWord, Vertex};
use crate::error::{Error, Result};
use crate::seqspace::{level_len, Seq};

#[derive(Clone, PartialEq, Eq)]
pub struct InducedElement {
    sigma: InducedChar,
    coeffs: BTreeMap<Vertex, FieldElem>,
}

impl fmt::Debug for InducedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fld = self.field();
        let parts: Vec<String> =
            self.coeffs.iter().map(|(v, &c)| format!("{}*{:?}", fld.format(c), v)).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl InducedElement {
    pub fn zero(sigma: &InducedChar) -> InducedElement {
        InducedElement { sigma: sigma.clone(), coeffs: BTreeMap::new() }
    }

    pub fn single(sigma: &InducedChar, v: Vertex, c: FieldElem) -> InducedElement {
        let mut e = InducedElement::zero(sigma);
        e.add_term(v, c);
        e
    }

    /// [Id]
    pub fn identity(sigma: &InducedChar) -> InducedElement {
        InducedElement::single(sigma, Vertex::root(), sigma.field().one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Vertex, FieldElem)>>(sigma: &InducedChar, terms: I) -> InducedElement {
        let mut e = InducedElement::zero(sigma);
        for (v, c) in terms {
            e.add_term(v, c);
        }
        e
    }

    pub fn sigma(&self) -> &InducedChar {
        &self.sigma
    }

    pub fn field(&self) -> &Field {
        self.sigma.field()
    }

    pub fn p(&self) -> u32 {
        self.sigma.p()
    }

    pub fn coeffs(&self) -> &BTreeMap<Vertex, FieldElem> {
        &self.coeffs
    }

    pub fn get(&self, v: &Vertex) -> FieldElem {
        self.coeffs.get(v).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add_term(&mut self, v: Vertex, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let f = self.sigma.field().clone();
        match self.coeffs.entry(v) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_same(&self, o: &InducedElement) -> Result<()> {
        if self.sigma != o.sigma {
            return Err(Error::Shape("elements of different inductions".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &InducedElement) -> Result<InducedElement> {
        self.check_same(o)?;
        let mut e = self.clone();
        for (v, &c) in &o.coeffs {
            e.add_term(v.clone(), c);
        }
        Ok(e)
    }

    pub fn sub(&self, o: &InducedElement) -> Result<InducedElement> {
        self.add(&o.scale(self.field().neg(self.field().one())))
    }

    pub fn scale(&self, c: FieldElem) -> InducedElement {
        if c.is_zero() {
            return InducedElement::zero(&self.sigma);
        }
        let f = self.field();
        InducedElement {
            sigma: self.sigma.clone(),
            coeffs: self.coeffs.iter().map(|(v, &x)| (v.clone(), f.mul(c, x))).collect(),
        }
    }

    /// Levels occurring in the support, ascending.
    pub fn levels(&self) -> Vec<i64> {
        let mut l: Vec<i64> = self.coeffs.keys().map(|v| v.delta).collect();
        l.dedup();
        l
    }

    pub fn at_level(&self, delta: i64) -> InducedElement {
        self.filter(|v| v.delta == delta)
    }

    pub fn filter<F: Fn(&Vertex) -> bool>(&self, keep: F) -> InducedElement {
        InducedElement {
            sigma: self.sigma.clone(),
            coeffs: self.coeffs.iter().filter(|(v, _)| keep(v)).map(|(v, &c)| (v.clone(), c)).collect(),
        }
    }

    /// Largest number of fractional digits of beta among vertices at this level.
    pub fn width(&self, delta: i64) -> usize {
        self.coeffs.keys().filter(|v| v.delta == delta).map(Vertex::den).max().unwrap_or(0)
    }

    /// M[g] = [M g] = sigma(k) [g_v] where M g = g_v k.
    pub fn act_matrix(&self, m: &BorelMat) -> Result<InducedElement> {
        let p = self.p();
        let f = self.field();
        let mut out = InducedElement::zero(&self.sigma);
        for (v, &c) in &self.coeffs {
            let (w, s) = canonicalize(&m.mul(&BorelMat::vertex(v, p)), &self.sigma)?;
            out.add_term(w, f.mul(c, s));
        }
        Ok(out)
    }

    pub fn act(&self, w: &BorelWord) -> Result<InducedElement> {
        self.act_matrix(&w.matrix(self.p()))
    }

    /// [g] -> [g N], used by the Hecke operators.
    pub fn right_mul(&self, n: &BorelMat) -> Result<InducedElement> {
        let p = self.p();
        let f = self.field();
        let mut out = InducedElement::zero(&self.sigma);
        for (v, &c) in &self.coeffs {
            let (w, s) = canonicalize(&BorelMat::vertex(v, p).mul(n), &self.sigma)?;
            out.add_term(w, f.mul(c, s));
        }
        Ok(out)
    }

    /// The k-blocks at level delta as (base vertex, sequence), entry j of a
    /// block based at beta being the coefficient of g_{beta - j p^-k, delta}.
    pub fn blocks(&self, k: u32, delta: i64) -> Vec<(Vertex, Seq)> {
        let f = self.field();
        let p = self.p();
        let mut out: BTreeMap<Vertex, Vec<FieldElem>> = BTreeMap::new();
        for (v, &c) in self.coeffs.range(Vertex::at_height(delta)..) {
            if v.delta != delta {
                break;
            }
            let (base, j) = block_position(v, k, p);
            let e = out.entry(base).or_insert_with(|| vec![FieldElem::ZERO; level_len(p, k)]);
            e[j] = c;
        }
        out.into_iter()
            .map(|(b, e)| (b, Seq::from_entries(f, k, e).expect("block length")))
            .collect()
    }

    /// Add the block y based at base (a vertex whose first k digits vanish).
    pub fn add_block(&mut self, base: &Vertex, y: &Seq) {
        let p = self.p();
        for (j, &c) in y.entries().iter().enumerate() {
            self.add_term(block_vertex(base, y.n(), j, p), c);
        }
    }

    pub fn random<R: Rng>(
        sigma: &InducedChar,
        rng: &mut R,
        levels: std::ops::RangeInclusive<i64>,
        max_den: usize,
        terms: usize,
    ) -> InducedElement {
        let f = sigma.field();
        let p = sigma.p();
        let lv: Vec<i64> = levels.collect();
        let mut e = InducedElement::zero(sigma);
        for _ in 0..terms {
            let delta = lv[rng.gen_range(0..lv.len())];
            let den = rng.gen_range(0..=max_den);
            let beta: Vec<u8> = (0..den).map(|_| rng.gen_range(0..p) as u8).collect();
            let code = rng.gen_range(1..f.size());
            e.add_term(Vertex::new(beta, delta), f.from_code(code).expect("code in range"));
        }
        e
    }

    /// One line `delta beta_digits coeff` per vertex, in vertex order.
    pub fn dump(&self) -> String {
        let f = self.field();
        let mut s = String::new();
        for (v, &c) in &self.coeffs {
            s.push_str(&format!("{} {} {}\n", v.delta, v.beta_string(), f.format(c)));
        }
        s
    }

    pub fn parse(sigma: &InducedChar, text: &str) -> Result<InducedElement> {
        let f = sigma.field();
        let mut e = InducedElement::zero(sigma);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let mut it = line.split_whitespace();
            let (Some(d), Some(b), Some(c), None) = (it.next(), it.next(), it.next(), it.next()) else {
                return Err(Error::Domain(format!("bad line {line:?}")));
            };
            let delta: i64 = d.parse().map_err(|_| Error::Domain(format!("bad level {d:?}")))?;
            let beta = Vertex::parse_beta(b, sigma.p())?;
            if beta.last() == Some(&0) {
                return Err(Error::Domain(format!("trailing zero digit in {b:?}")));
            }
            e.add_term(Vertex::new(beta, delta), f.parse(c)?);
        }
        Ok(e)
    }
}

/// Position of v inside its k-block: (base, j) with v = g_{base - j p^-k}.
pub fn block_position(v: &Vertex, k: u32, p: u32) -> (Vertex, usize) {
    let k = k as usize;
    let mut base = v.beta.clone();
    let mut nn: u64 = 0;
    for t in 0..k {
        let a = base.get(t).copied().unwrap_or(0) as u64;
        nn = nn * p as u64 + a;
        if t < base.len() {
            base[t] = 0;
        }
    }
    let len = (p as u64).pow(k as u32);
    let j = (len - nn % len) % len;
    (Vertex::new(base, v.delta), j as usize)
}

/// The vertex g_{base - j p^-k} for a base with vanishing first k digits.
pub fn block_vertex(base: &Vertex, k: u32, j: usize, p: u32) -> Vertex {
    let k = k as usize;
    let len = (p as u64).pow(k as u32);
    let mut nn = (len - j as u64 % len) % len;
    let mut beta = base.beta.clone();
    if beta.len() < k {
        beta.resize(k, 0);
    }
    for t in (0..k).rev() {
        beta[t] = (nn % p as u64) as u8;
        nn /= p as u64;
    }
    Vertex::new(beta, base.delta)
}

/// tau_k = (1, -p^-k; 0, 1)
pub fn tau(k: u32, p: u32) -> BorelGen {
    BorelGen::Unipotent(Qp::p_power(-(k as i64), p).neg())
}

pub fn tau_pow(k: u32, j: u64, p: u32) -> BorelGen {
    BorelGen::Unipotent(Qp::p_power(-(k as i64), p).mul(&Qp::from_i64(-(j as i64), p)))
}

/// sum_j binom(j, l) [(1, -j p^-n; 0, 1)]
pub fn w_ln(l: u64, n: u32, sigma: &InducedChar) -> Result<InducedElement> {
    let p = sigma.p();
    let len = level_len(p, n) as u64;
    if l >= len {
        return Err(Error::Domain(format!("w_(l,n) needs l <= p^n-1, got l={l}")));
    }
    let f = sigma.field();
    let mut e = InducedElement::zero(sigma);
    for j in 0..len {
        let c = lucas_binom(j, l, p);
        if c != 0 {
            e.add_term(block_vertex(&Vertex::root(), n, j as usize, p), f.from_int(c as i64));
        }
    }
    Ok(e)
}

/// Coefficient (-1/lambda)^n of the top vertex of the generator of S_n.
pub fn s_top_coeff(n: u32, sigma: &InducedChar) -> Result<FieldElem> {
    let f = sigma.field();
    let lam = sigma.lambda()?;
    f.pow(f.neg(f.inv(lam)?), n as i64)
}

/// (-1/lambda)^n [diag(1, p^n)] + w_{h(p-1), n}
pub fn s_generator(h: u64, n: u32, sigma: &InducedChar) -> Result<InducedElement> {
    let p = sigma.p();
    if n < 2 {
        return Err(Error::Domain("S_n needs n >= 2".into()));
    }
    let bound = (p as u64).pow(n - 1);
    if h < 1 || h >= bound {
        return Err(Error::Domain(format!("S_n needs 1 <= h <= p^(n-1)-1, got h={h}")));
    }
    if !is_primitive(h, n, p)? {
        return Err(Error::Domain(format!("h={h} is not primitive for n={n}, p={p}")));
    }
    let mut e = w_ln(h * (p as u64 - 1), n, sigma)?;
    e.add_term(Vertex::at_height(n as i64), s_top_coeff(n, sigma)?);
    Ok(e)
}

/// sum_{j < p^k} binom(j, l) tau_k^j f
pub fn existfix_average(f: &InducedElement, k: u32, l: u64) -> Result<InducedElement> {
    let p = f.p();
    let len = level_len(p, k) as u64;
    if l >= len {
        return Err(Error::Domain(format!("averaging index {l} >= p^{k}")));
    }
    let fld = f.field();
    let mut out = InducedElement::zero(f.sigma());
    for j in 0..len {
        let c = lucas_binom(j, l, p);
        if c != 0 {
            out = out.add(&f.act(&BorelWord::single(tau_pow(k, j, p)))?.scale(fld.from_int(c as i64)))?;
        }
    }
    Ok(out)
}

/// T_+([g]) = sum_j [g (p, j; 0, 1)]
pub fn hecke_t_plus(f: &InducedElement) -> Result<InducedElement> {
    let p = f.p();
    let mut out = InducedElement::zero(f.sigma());
    for j in 0..p as i64 {
        out = out.add(&f.right_mul(&BorelMat::from_ints(p as i64, j, 1, p)?)?)?;
    }
    Ok(out)
}

/// T_-([g]) = [g (1, 0; 0, p)]
pub fn hecke_t_minus(f: &InducedElement) -> Result<InducedElement> {
    f.right_mul(&BorelMat::p_power(1, f.p()))
}

pub fn hecke_t(f: &InducedElement) -> Result<InducedElement> {
    hecke_t_plus(f)?.add(&hecke_t_minus(f)?)
}

/// [g] -> chi(det g)^-1 [g], landing in the induction of sigma chi.
pub fn twist_by_det(f: &InducedElement, chi: &SmoothChar) -> Result<InducedElement> {
    let fld = f.field();
    let p = f.p();
    let target = f.sigma().twist(chi);
    let mut out = InducedElement::zero(&target);
    for (v, &c) in f.coeffs() {
        let det = Qp::p_power(v.delta, p);
        out.add_term(v.clone(), fld.mul(c, fld.inv(chi.eval(&det)?)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldConfig;
    use crate::seqspace::{cyclic_shift, v_kn};
    use rand::SeedableRng;

    fn triv(p: u32) -> InducedChar {
        InducedChar::trivial(&FieldConfig::prime(p).unwrap())
    }

    #[test]
    fn block_coordinates_round_trip() {
        let p = 3;
        for beta in [vec![], vec![1], vec![2, 1], vec![0, 2, 1]] {
            let v = Vertex::new(beta, 2);
            for k in 0..4 {
                let (b, j) = block_position(&v, k, p);
                assert_eq!(block_vertex(&b, k, j, p), v);
            }
        }
    }

    #[test]
    fn w_blocks_are_binomial_vectors() {
        let s = triv(2);
        let w = w_ln(1, 2, &s).unwrap();
        let b = w.blocks(2, 0);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].1, Seq::from_ints(s.field(), 2, &[0, 1, 0, 1]).unwrap());
        let s3 = triv(3);
        let w = w_ln(4, 2, &s3).unwrap();
        assert_eq!(w.blocks(2, 0)[0].1, v_kn(s3.field(), 4, 2).unwrap());
    }

    #[test]
    fn unipotent_shifts_blocks() {
        let s = triv(3);
        let w = w_ln(2, 2, &s).unwrap().act(&BorelWord::single(BorelGen::PPower(1))).unwrap();
        // level 1, 2-blocks: u(p^(-2-1)) shifts by one
        let u = BorelGen::Unipotent(Qp::p_power(-3, 3));
        let moved = w.act(&BorelWord::single(u)).unwrap();
        let before = &w.blocks(2, 1)[0].1;
        let after = &moved.blocks(2, 1)[0].1;
        let back: Vec<_> = (0..9).map(|j| after.at(j - 1)).collect();
        assert_eq!(&back, before.entries());
        // tau_k - 1 is Delta on level 0 blocks
        let w0 = w_ln(2, 2, &s).unwrap();
        let t = w0.act(&BorelWord::single(tau(2, 3))).unwrap();
        assert_eq!(t.blocks(2, 0)[0].1, cyclic_shift(&w0.blocks(2, 0)[0].1));
    }

    #[test]
    fn generator_shapes() {
        let s = triv(2);
        let g = s_generator(1, 2, &s).unwrap();
        let mut expect = w_ln(1, 2, &s).unwrap();
        expect.add_term(Vertex::at_height(2), s.field().one());
        assert_eq!(g, expect);
        let s3 = triv(3);
        let g = s_generator(1, 2, &s3).unwrap();
        assert_eq!(g.get(&Vertex::at_height(2)), s3.field().one());
        assert_eq!(g.blocks(2, 0)[0].1, v_kn(s3.field(), 2, 2).unwrap());
        assert!(s_generator(5, 4, &s).is_err());
    }

    #[test]
    fn hecke_examples() {
        let s = triv(3);
        let id = InducedElement::identity(&s);
        assert_eq!(hecke_t_minus(&id).unwrap(), InducedElement::single(&s, Vertex::at_height(1), s.field().one()));
        let tp = hecke_t_plus(&id).unwrap();
        assert_eq!(tp.support_len(), 3);
        assert!(tp.coeffs().keys().all(|v| v.delta == -1 && v.den() <= 1));
    }

    #[test]
    fn averaging_extremes() {
        let s = triv(3);
        // fixed by tau_2: supported at level 2
        let f = InducedElement::single(&s, Vertex::new(vec![1], 2), s.field().one());
        assert_eq!(existfix_average(&f, 2, 8).unwrap(), f);
        assert!(existfix_average(&f, 2, 0).unwrap().is_zero());
    }

    #[test]
    fn serialization_round_trip() {
        let f9 = FieldConfig::with_degree(3, 2).unwrap();
        let lam = f9.generator_t();
        let c = SmoothChar::new(&f9, 1, lam).unwrap();
        let sigma = InducedChar::new(c.clone(), c);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let e = InducedElement::random(&sigma, &mut rng, -1..=3, 3, 12);
        let text = e.dump();
        let back = InducedElement::parse(&sigma, &text).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.dump(), text);
    }
}
