//! Finite certification of membership in the B-span of one element.
//!
//! Within a window (levels 0..=L, at most m fractional digits, units mod
//! p^N) we list the translates u(z) diag(a, 1) diag(1, p^j) g of the
//! generator g that stay inside the window, and row-reduce them.  A positive
//! answer comes with an explicit combination of translates; a negative one
//! only says the element is outside the span of this finite family.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::arith::{FieldElem, PadicInt, Qp, DEFAULT_PREC_P};
use crate::borel::chars::InducedChar;
use crate::borel::group::{BorelGen, BorelWord, Vertex};
use crate::borel::induced::{s_generator, InducedElement};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    /// highest level of the window, the lowest being 0
    pub levels: i64,
    /// largest number of fractional digits of beta
    pub den: usize,
    /// units a are taken mod p^N
    pub unit_depth: u32,
}

impl Window {
    pub fn new(levels: i64, den: usize, unit_depth: u32) -> Window {
        Window { levels, den, unit_depth }
    }

    /// L = n + 2, m = n + 2, N = n
    pub fn default_for(n: u32) -> Window {
        Window { levels: n as i64 + 2, den: n as usize + 2, unit_depth: n }
    }
}

/// A linear combination of translates w g of a fixed generator g.
pub type Certificate = Vec<(BorelWord, FieldElem)>;

/// sum c * (w g)
pub fn expand(generator: &InducedElement, cert: &Certificate) -> Result<InducedElement> {
    let mut out = InducedElement::zero(generator.sigma());
    for (w, c) in cert {
        out = out.add(&generator.act(w)?.scale(*c))?;
    }
    Ok(out)
}

pub struct SpanOracle {
    generator: InducedElement,
    height: i64,
    window: Window,
    translates: Vec<BorelWord>,
    columns: HashMap<Vertex, usize>,
    echelon: Echelon,
}

fn units_mod(p: u32, depth: u32) -> Vec<i64> {
    let m = (p as i64).pow(depth);
    (1..m).filter(|a| a % p as i64 != 0).collect()
}

impl SpanOracle {
    /// The oracle for the span of the translates of a generator supported
    /// in levels 0..=height.
    pub fn new(generator: InducedElement, window: Window) -> Result<SpanOracle> {
        let p = generator.p();
        let levels = generator.levels();
        let (Some(&lo), Some(&hi)) = (levels.first(), levels.last()) else {
            return Err(Error::Domain("the zero element generates nothing".into()));
        };
        if lo != 0 {
            return Err(Error::Domain("generator must have its lowest level at 0".into()));
        }
        let height = hi;
        if height > window.levels || (0..=height).any(|d| generator.width(d) > window.den) {
            return Err(Error::Window(format!("generator does not fit in {window:?}")));
        }
        let beta_count = (p as i64).pow(window.den as u32);
        let mut translates = Vec::new();
        for j in 0..=(window.levels - height) {
            for a in units_mod(p, window.unit_depth) {
                for t in 0..beta_count {
                    let z = Qp::from_i64(t, p).shift(-(window.den as i64 + j));
                    translates.push(BorelWord(vec![
                        BorelGen::Unipotent(z),
                        BorelGen::DiagUnits(
                            PadicInt::from_i64(a, p, DEFAULT_PREC_P),
                            PadicInt::from_i64(1, p, DEFAULT_PREC_P),
                        ),
                        BorelGen::PPower(j),
                    ]));
                }
            }
        }
        let rows = par::map(&translates, |w| generator.act(w)).into_iter().collect::<Result<Vec<_>>>()?;
        let mut columns: HashMap<Vertex, usize> = HashMap::new();
        for e in &rows {
            for v in e.coeffs().keys() {
                let next = columns.len();
                columns.entry(v.clone()).or_insert(next);
            }
        }
        let field = generator.field().clone();
        let mut echelon = Echelon::new(&field, columns.len());
        for e in &rows {
            let mut v = vec![FieldElem::ZERO; columns.len()];
            for (w, &c) in e.coeffs() {
                v[columns[w]] = c;
            }
            echelon.insert(&v);
        }
        Ok(SpanOracle { generator, height, window, translates, columns, echelon })
    }

    /// The oracle for S_n(h, sigma), shared between callers with the same
    /// parameters.
    pub fn for_s(h: u64, n: u32, sigma: &InducedChar, window: Window) -> Result<Arc<SpanOracle>> {
        type Slot = Arc<OnceLock<std::result::Result<Arc<SpanOracle>, Error>>>;
        static CACHE: OnceLock<Mutex<HashMap<String, Slot>>> = OnceLock::new();
        let key = format!("{h}|{n}|{sigma:?}|{:?}|{window:?}", sigma.field());
        let slot = {
            let mut map = CACHE.get_or_init(|| Mutex::new(HashMap::new())).lock().expect("cache lock");
            map.entry(key).or_default().clone()
        };
        slot.get_or_init(|| SpanOracle::new(s_generator(h, n, sigma)?, window).map(Arc::new)).clone()
    }

    pub fn generator(&self) -> &InducedElement {
        &self.generator
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn translates(&self) -> &[BorelWord] {
        &self.translates
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    // f moved so that its lowest level is 0, with the level it came from
    fn normalise(&self, f: &InducedElement) -> Result<Option<(i64, Vec<FieldElem>)>> {
        let levels = f.levels();
        let lo = levels[0];
        let hi = *levels.last().expect("nonempty");
        if hi - lo > self.window.levels {
            return Err(Error::Window(format!("levels {lo}..{hi} exceed {:?}", self.window)));
        }
        if levels.iter().any(|&d| f.width(d) > self.window.den) {
            return Err(Error::Window(format!("denominators exceed {:?}", self.window)));
        }
        let moved = f.act(&BorelWord::single(BorelGen::PPower(-lo)))?;
        let mut v = vec![FieldElem::ZERO; self.columns.len()];
        for (w, &c) in moved.coeffs() {
            match self.columns.get(w) {
                Some(&i) => v[i] = c,
                None => return Ok(None),
            }
        }
        Ok(Some((lo, v)))
    }

    pub fn contains(&self, f: &InducedElement) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        Ok(match self.normalise(f)? {
            Some((_, v)) => self.echelon.contains(&v),
            None => false,
        })
    }

    /// An explicit combination of generator translates equal to f.
    pub fn certificate(&self, f: &InducedElement) -> Result<Option<Certificate>> {
        if f.is_zero() {
            return Ok(Some(Vec::new()));
        }
        let Some((lo, v)) = self.normalise(f)? else {
            return Ok(None);
        };
        Ok(self.echelon.express(&v).map(|terms| {
            terms
                .into_iter()
                .map(|(i, c)| {
                    let w = BorelWord::single(BorelGen::PPower(lo)).compose(&self.translates[i]);
                    (w, c)
                })
                .collect()
        }))
    }

    /// A random combination of `terms` translates, all inside the window.
    pub fn random_member<R: Rng>(&self, rng: &mut R, terms: usize) -> Result<InducedElement> {
        let f = self.generator.field();
        let mut cert = Vec::new();
        for _ in 0..terms {
            let w = self.translates[rng.gen_range(0..self.translates.len())].clone();
            let c = f.from_code(rng.gen_range(1..f.size()))?;
            cert.push((w, c));
        }
        expand(&self.generator, &cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldConfig;
    use crate::borel::induced::w_ln;

    #[test]
    fn small_membership() {
        let f = FieldConfig::prime(2).unwrap();
        let sigma = InducedChar::trivial(&f);
        let o = SpanOracle::for_s(1, 2, &sigma, Window::new(4, 4, 2)).unwrap();
        let s = o.generator().clone();
        assert!(o.contains(&s).unwrap());
        let cert = o.certificate(&s.act(&BorelWord::single(BorelGen::PPower(-3))).unwrap()).unwrap().unwrap();
        assert_eq!(expand(&s, &cert).unwrap(), s.act(&BorelWord::single(BorelGen::PPower(-3))).unwrap());
        assert!(o.contains(&w_ln(0, 2, &sigma).unwrap()).unwrap());
        assert!(!o.contains(&w_ln(1, 2, &sigma).unwrap()).unwrap());
        assert!(!o.contains(&InducedElement::identity(&sigma)).unwrap());
    }
}
