//! Upper-triangular matrices over Q_p, words in the standard generators,
//! tree vertices g_{beta,delta} = (1, beta; 0, p^delta) and the coset
//! decomposition B = disjoint union of g_{beta,delta} KZ.

use std::fmt;

use crate::arith::{FieldElem, PadicInt, Qp, DEFAULT_PREC_P};
use crate::borel::chars::InducedChar;
use crate::error::{Error, Result};

/// (a, b; 0, d) with a, d nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct BorelMat {
    pub a: Qp,
    pub b: Qp,
    pub d: Qp,
}

impl fmt::Debug for BorelMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}; 0, {:?})", self.a, self.b, self.d)
    }
}

impl BorelMat {
    pub fn new(a: Qp, b: Qp, d: Qp) -> Result<BorelMat> {
        if a.is_zero() || d.is_zero() {
            return Err(Error::Domain("Borel matrix with a zero diagonal entry".into()));
        }
        Ok(BorelMat { a, b, d })
    }

    pub fn identity(p: u32) -> BorelMat {
        BorelMat { a: Qp::one(p), b: Qp::zero(p), d: Qp::one(p) }
    }

    pub fn from_ints(a: i64, b: i64, d: i64, p: u32) -> Result<BorelMat> {
        BorelMat::new(Qp::from_i64(a, p), Qp::from_i64(b, p), Qp::from_i64(d, p))
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    pub fn unipotent(z: Qp) -> BorelMat {
        let p = z.p();
        BorelMat { a: Qp::one(p), b: z, d: Qp::one(p) }
    }

    pub fn diag(a: Qp, d: Qp) -> Result<BorelMat> {
        let p = a.p();
        BorelMat::new(a, Qp::zero(p), d)
    }

    /// diag(1, p^j)
    pub fn p_power(j: i64, p: u32) -> BorelMat {
        BorelMat { a: Qp::one(p), b: Qp::zero(p), d: Qp::p_power(j, p) }
    }

    pub fn central(x: Qp) -> Result<BorelMat> {
        BorelMat::diag(x.clone(), x)
    }

    pub fn vertex(v: &Vertex, p: u32) -> BorelMat {
        BorelMat { a: Qp::one(p), b: v.beta_qp(p), d: Qp::p_power(v.delta, p) }
    }

    pub fn mul(&self, o: &BorelMat) -> BorelMat {
        BorelMat { a: self.a.mul(&o.a), b: self.a.mul(&o.b).add(&self.b.mul(&o.d)), d: self.d.mul(&o.d) }
    }

    pub fn inv(&self) -> BorelMat {
        let ai = self.a.inv().expect("nonzero");
        let di = self.d.inv().expect("nonzero");
        BorelMat { b: self.b.mul(&ai).mul(&di).neg(), a: ai, d: di }
    }

    pub fn det(&self) -> Qp {
        self.a.mul(&self.d)
    }

    /// In KZ: both diagonal entries have the same valuation and b/d is integral.
    pub fn in_kz(&self) -> bool {
        self.a.val() == self.d.val() && (self.b.is_zero() || self.b.val() >= self.d.val())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub enum BorelGen {
    /// (1, z; 0, 1)
    Unipotent(Qp),
    /// (a, 0; 0, d) with p-adic units a, d
    DiagUnits(PadicInt, PadicInt),
    /// (1, 0; 0, p^j)
    PPower(i64),
    /// (x, 0; 0, x)
    Central(Qp),
}

impl fmt::Debug for BorelGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BorelGen::Unipotent(z) => write!(f, "u({z:?})"),
            BorelGen::DiagUnits(a, d) => write!(f, "diag({:?}, {:?})", a.to_i64(), d.to_i64()),
            BorelGen::PPower(j) => write!(f, "p^{j}"),
            BorelGen::Central(x) => write!(f, "z({x:?})"),
        }
    }
}

impl BorelGen {
    pub fn matrix(&self, p: u32) -> BorelMat {
        match self {
            BorelGen::Unipotent(z) => BorelMat::unipotent(z.clone()),
            BorelGen::DiagUnits(a, d) => {
                BorelMat::diag(Qp::from_padic(a, 0), Qp::from_padic(d, 0)).expect("units")
            }
            BorelGen::PPower(j) => BorelMat::p_power(*j, p),
            BorelGen::Central(x) => BorelMat::central(x.clone()).expect("nonzero"),
        }
    }

    pub fn inverse(&self) -> BorelGen {
        match self {
            BorelGen::Unipotent(z) => BorelGen::Unipotent(z.neg()),
            BorelGen::DiagUnits(a, d) => BorelGen::DiagUnits(a.inv().expect("unit"), d.inv().expect("unit")),
            BorelGen::PPower(j) => BorelGen::PPower(-j),
            BorelGen::Central(x) => BorelGen::Central(x.inv().expect("nonzero")),
        }
    }

    pub fn unipotent_ratio(a: i64, b: i64, p: u32) -> BorelGen {
        BorelGen::Unipotent(Qp::from_ratio(a, b, p).expect("nonzero denominator"))
    }

    /// diag(1, a) for an integer unit a.
    pub fn diag_right(a: i64, p: u32) -> Result<BorelGen> {
        let u = PadicInt::from_i64(a, p, DEFAULT_PREC_P);
        if !u.is_unit() {
            return Err(Error::Domain(format!("{a} is not a unit mod {p}")));
        }
        Ok(BorelGen::DiagUnits(PadicInt::from_i64(1, p, DEFAULT_PREC_P), u))
    }

    /// diag(a, 1) for an integer unit a.
    pub fn diag_left(a: i64, p: u32) -> Result<BorelGen> {
        let u = PadicInt::from_i64(a, p, DEFAULT_PREC_P);
        if !u.is_unit() {
            return Err(Error::Domain(format!("{a} is not a unit mod {p}")));
        }
        Ok(BorelGen::DiagUnits(u, PadicInt::from_i64(1, p, DEFAULT_PREC_P)))
    }
}

/// g_1 g_2 ... g_k; acting by a word applies g_k first.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BorelWord(pub Vec<BorelGen>);

impl BorelWord {
    pub fn identity() -> BorelWord {
        BorelWord(Vec::new())
    }

    pub fn single(g: BorelGen) -> BorelWord {
        BorelWord(vec![g])
    }

    pub fn then(mut self, g: BorelGen) -> BorelWord {
        self.0.push(g);
        self
    }

    /// The word for self * other.
    pub fn compose(&self, other: &BorelWord) -> BorelWord {
        BorelWord(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn inverse(&self) -> BorelWord {
        BorelWord(self.0.iter().rev().map(BorelGen::inverse).collect())
    }

    pub fn matrix(&self, p: u32) -> BorelMat {
        self.0.iter().fold(BorelMat::identity(p), |m, g| m.mul(&g.matrix(p)))
    }
}

/// The vertex g_{beta,delta}; beta = sum alpha_t p^(-t) with digits
/// (alpha_1, ..., alpha_m), trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub delta: i64,
    pub beta: Vec<u8>,
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g({}, {})", self.beta_string(), self.delta)
    }
}

impl Vertex {
    pub fn new(mut beta: Vec<u8>, delta: i64) -> Vertex {
        while beta.last() == Some(&0) {
            beta.pop();
        }
        Vertex { delta, beta }
    }

    pub fn root() -> Vertex {
        Vertex { delta: 0, beta: Vec::new() }
    }

    pub fn at_height(delta: i64) -> Vertex {
        Vertex { delta, beta: Vec::new() }
    }

    /// The vertex g_{x mod Z_p, delta}.
    pub fn from_qp(x: &Qp, delta: i64) -> Vertex {
        Vertex { delta, beta: x.frac_digits() }
    }

    pub fn beta_qp(&self, p: u32) -> Qp {
        Qp::from_frac_digits(&self.beta, p)
    }

    /// Number of fractional digits, i.e. beta has denominator p^den.
    pub fn den(&self) -> usize {
        self.beta.len()
    }

    /// Digits joined by commas, `-` for beta = 0.
    pub fn beta_string(&self) -> String {
        if self.beta.is_empty() {
            "-".to_string()
        } else {
            self.beta.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse_beta(s: &str, p: u32) -> Result<Vec<u8>> {
        if s == "-" {
            return Ok(Vec::new());
        }
        s.split(',')
            .map(|d| match d.parse::<u8>() {
                Ok(x) if (x as u32) < p => Ok(x),
                _ => Err(Error::Domain(format!("bad beta digit {d:?}"))),
            })
            .collect()
    }
}

/// M = g_{beta,delta} k with k in KZ; returns the vertex and sigma(k).
pub fn canonicalize(m: &BorelMat, sigma: &InducedChar) -> Result<(Vertex, FieldElem)> {
    let f = sigma.field();
    let alpha = m.a.val();
    let (a0, d0) = (m.a.unit(), m.d.unit());
    if a0.prec() == 0 || d0.prec() == 0 {
        return Err(Error::Precision("matrix entries carry no unit digits".into()));
    }
    let d0q = Qp::from_padic(d0, 0);
    let x = m.b.shift(-alpha).mul(&d0q.inv()?);
    let v = Vertex::from_qp(&x, m.d.val() - alpha);
    let s1 = sigma.sigma1.on_residue(a0.digit(0));
    let s2 = sigma.sigma2.on_residue(d0.digit(0));
    let lam = f.mul(sigma.sigma1.lambda(), sigma.sigma2.lambda());
    let scalar = f.mul(f.mul(s1, s2), f.pow(lam, alpha)?);
    Ok((v, scalar))
}
