//! Tame characters of Q_p^x and characters sigma1 (x) sigma2 of KZ.

use crate::arith::{Field, FieldElem, Qp};
use crate::error::{Error, Result};

/// x = p^v u  ->  lambda^v * omega(u)^m, omega the reduction mod p.
#[derive(Clone, PartialEq, Eq)]
pub struct SmoothChar {
    field: Field,
    m: u32,
    lambda: FieldElem,
}

impl std::fmt::Debug for SmoothChar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "omega^{}*mu_{}", self.m, self.field.format(self.lambda))
    }
}

impl SmoothChar {
    pub fn new(field: &Field, m: i64, lambda: FieldElem) -> Result<SmoothChar> {
        if lambda.is_zero() {
            return Err(Error::Domain("lambda must be nonzero".into()));
        }
        let order = field.p() as i64 - 1;
        Ok(SmoothChar { field: field.clone(), m: m.rem_euclid(order) as u32, lambda })
    }

    pub fn trivial(field: &Field) -> SmoothChar {
        SmoothChar { field: field.clone(), m: 0, lambda: field.one() }
    }

    /// omega^m, trivial at p.
    pub fn omega_pow(field: &Field, m: i64) -> SmoothChar {
        SmoothChar::new(field, m, field.one()).expect("lambda = 1")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambda(&self) -> FieldElem {
        self.lambda
    }

    /// omega(u)^m for a residue u mod p (nonzero).
    pub fn on_residue(&self, u: u32) -> FieldElem {
        let f = &self.field;
        f.pow(f.from_int(u as i64), self.m as i64).expect("u is prime to p")
    }

    pub fn eval(&self, x: &Qp) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::Domain("character evaluated at 0".into()));
        }
        let f = &self.field;
        Ok(f.mul(f.pow(self.lambda, x.val())?, self.on_residue(x.unit_residue())))
    }

    pub fn mul(&self, other: &SmoothChar) -> SmoothChar {
        let f = &self.field;
        SmoothChar::new(f, (self.m + other.m) as i64, f.mul(self.lambda, other.lambda)).expect("nonzero")
    }

    pub fn inv(&self) -> SmoothChar {
        let f = &self.field;
        SmoothChar::new(f, -(self.m as i64), f.inv(self.lambda).expect("nonzero")).expect("nonzero")
    }

    pub fn pow(&self, k: i64) -> SmoothChar {
        let f = &self.field;
        SmoothChar::new(f, self.m as i64 * k, f.pow(self.lambda, k).expect("nonzero")).expect("nonzero")
    }
}

/// sigma((a, b; 0, d)) = sigma1(a) sigma2(d) on KZ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedChar {
    pub sigma1: SmoothChar,
    pub sigma2: SmoothChar,
}

impl InducedChar {
    pub fn new(sigma1: SmoothChar, sigma2: SmoothChar) -> InducedChar {
        InducedChar { sigma1, sigma2 }
    }

    pub fn trivial(field: &Field) -> InducedChar {
        InducedChar::new(SmoothChar::trivial(field), SmoothChar::trivial(field))
    }

    /// chi omega^(h-1) (x) chi, the character matched with ind(omega_n^h) (x) chi.
    pub fn for_galois(chi: &SmoothChar, h: u64) -> InducedChar {
        let w = SmoothChar::omega_pow(chi.field(), h as i64 - 1);
        InducedChar::new(chi.mul(&w), chi.clone())
    }

    pub fn field(&self) -> &Field {
        self.sigma1.field()
    }

    pub fn p(&self) -> u32 {
        self.field().p()
    }

    /// sigma1(p) = sigma2(p), needed to define S_n.
    pub fn lambda(&self) -> Result<FieldElem> {
        if self.sigma1.lambda() != self.sigma2.lambda() {
            return Err(Error::Domain("S_n needs sigma1(p) = sigma2(p)".into()));
        }
        Ok(self.sigma1.lambda())
    }

    pub fn twist(&self, chi: &SmoothChar) -> InducedChar {
        InducedChar::new(self.sigma1.mul(chi), self.sigma2.mul(chi))
    }
}
