//! Truncated Laurent series over E with pessimistic precision tracking,
//! and the operators phi, psi, the Gamma-action and f_gamma.
//!
//! A series is known modulo X^prec.  Coefficients are stored from the
//! valuation upwards; the zero series has no coefficients and val = prec.

use std::fmt;

use crate::arith::{padic_binom, Field, FieldElem, PadicInt};
use crate::error::{Error, Result};

pub const DEFAULT_SERIES_PREC: i64 = 40;

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    val: i64,
    coeffs: Vec<FieldElem>,
    prec: i64,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

/// gamma_a for a p-adic unit a
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaElement {
    a: PadicInt,
}

impl GammaElement {
    pub fn new(a: PadicInt) -> Result<Self> {
        if !a.is_unit() {
            return Err(Error::Domain(format!("gamma_a needs a unit, got {a:?}")));
        }
        Ok(GammaElement { a })
    }

    pub fn from_i64(a: i64, p: u32) -> Result<Self> {
        GammaElement::new(PadicInt::from_i64(a, p, crate::arith::DEFAULT_PREC_P))
    }

    pub fn a(&self) -> &PadicInt {
        &self.a
    }

    pub fn compose(&self, other: &GammaElement) -> GammaElement {
        GammaElement { a: self.a.mul(&other.a) }
    }

    pub fn inverse(&self) -> GammaElement {
        GammaElement { a: self.a.inv().expect("units are invertible") }
    }

    /// omega(a): the first digit of a, in F_p.
    pub fn omega(&self) -> u32 {
        self.a.digit(0)
    }
}

impl LaurentSeries {
    pub fn zero(field: &Field, prec: i64) -> Self {
        LaurentSeries { field: field.clone(), val: prec, coeffs: Vec::new(), prec }
    }

    /// sum_k coeffs[k] X^(val+k) mod X^prec
    pub fn new(field: &Field, val: i64, coeffs: Vec<FieldElem>, prec: i64) -> Self {
        let mut s = LaurentSeries { field: field.clone(), val, coeffs, prec };
        s.normalise();
        s
    }

    pub fn monomial(field: &Field, c: FieldElem, e: i64, prec: i64) -> Self {
        LaurentSeries::new(field, e, vec![c], prec)
    }

    pub fn one(field: &Field, prec: i64) -> Self {
        LaurentSeries::monomial(field, FieldElem::ONE, 0, prec)
    }

    pub fn x(field: &Field, prec: i64) -> Self {
        LaurentSeries::monomial(field, FieldElem::ONE, 1, prec)
    }

    /// 1 + X
    pub fn one_plus_x(field: &Field, prec: i64) -> Self {
        LaurentSeries::new(field, 0, vec![FieldElem::ONE, FieldElem::ONE], prec)
    }

    fn normalise(&mut self) {
        let keep = (self.prec - self.val).max(0) as usize;
        if self.coeffs.len() > keep {
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.val = self.prec;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of X^e, or None if it lies beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<FieldElem> {
        if e >= self.prec {
            return None;
        }
        if e < self.val {
            return Some(FieldElem::ZERO);
        }
        Some(self.coeffs.get((e - self.val) as usize).copied().unwrap_or(FieldElem::ZERO))
    }

    pub fn constant_term(&self) -> Result<FieldElem> {
        self.coeff(0)
            .ok_or_else(|| Error::Precision(format!("constant term of a series known mod X^{}", self.prec)))
    }

    /// Lower the precision.
    pub fn truncate(&self, prec: i64) -> Self {
        LaurentSeries::new(&self.field, self.val.min(prec), self.padded(self.val.min(prec), prec), prec.min(self.prec))
    }

    // coefficients for exponents lo..hi (clipped to what is known)
    fn padded(&self, lo: i64, hi: i64) -> Vec<FieldElem> {
        let hi = hi.min(self.prec);
        (lo..hi).map(|e| self.coeff(e).unwrap_or(FieldElem::ZERO)).collect()
    }

    /// Agreement of all coefficients below `upto` (both must know them).
    pub fn agrees_with(&self, other: &Self, upto: i64) -> bool {
        if upto > self.prec || upto > other.prec {
            return false;
        }
        let lo = self.val.min(other.val);
        (lo..upto).all(|e| self.coeff(e) == other.coeff(e))
    }

    /// Equal modulo X^min(prec).
    pub fn eq_mod_prec(&self, other: &Self) -> bool {
        self.agrees_with(other, self.prec.min(other.prec))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let prec = self.prec.min(other.prec);
        let lo = self.val.min(other.val).min(prec);
        let coeffs = (lo..prec)
            .map(|e| f.add(self.coeff(e).unwrap(), other.coeff(e).unwrap()))
            .collect();
        LaurentSeries::new(f, lo, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        LaurentSeries {
            field: f.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        let f = &self.field;
        LaurentSeries::new(f, self.val, self.coeffs.iter().map(|&a| f.mul(a, c)).collect(), self.prec)
    }

    /// Multiply by X^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { field: self.field.clone(), val: self.val + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let prec = (self.val + other.prec).min(other.val + self.prec);
        let val = self.val + other.val;
        let len = (prec - val).max(0) as usize;
        let mut out = vec![FieldElem::ZERO; len];
        // sparse factors (e.g. (1+X)^(p^k)) are common, so walk nonzeros only
        let nz = |c: &[FieldElem]| -> Vec<(usize, FieldElem)> {
            c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, &x)| (i, x)).collect()
        };
        let (a_nz, b_nz) = (nz(&self.coeffs), nz(&other.coeffs));
        for &(i, a) in &a_nz {
            if i >= len {
                break;
            }
            for &(j, b) in &b_nz {
                if i + j >= len {
                    break;
                }
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        LaurentSeries::new(f, val, out, prec)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Precision("inverse of a series not known to be nonzero".into()));
        }
        let f = &self.field;
        let n = (self.prec - self.val) as usize;
        let u0i = f.inv(self.coeffs[0])?;
        let mut b = vec![FieldElem::ZERO; n];
        b[0] = u0i;
        for k in 1..n {
            let mut s = FieldElem::ZERO;
            for i in 1..=k.min(self.coeffs.len() - 1) {
                s = f.add(s, f.mul(self.coeffs[i], b[k - i]));
            }
            b[k] = f.neg(f.mul(u0i, s));
        }
        Ok(LaurentSeries::new(f, -self.val, b, -self.val + n as i64))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer powers (negative ones through the inverse).
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(LaurentSeries::one(&self.field, self.prec - self.val));
        }
        let mut sq = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc: Option<LaurentSeries> = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc.expect("e != 0"))
    }

    /// X -> X^p; valuation and precision scale by p.
    pub fn phi(&self) -> Self {
        let p = self.field.p() as i64;
        self.substitute_power(p)
    }

    fn substitute_power(&self, m: i64) -> Self {
        let mut coeffs = vec![FieldElem::ZERO; ((self.coeffs.len() as i64 - 1).max(0) * m + 1) as usize];
        if self.coeffs.is_empty() {
            coeffs.clear();
        }
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * m as usize] = c;
        }
        LaurentSeries::new(&self.field, self.val * m, coeffs, self.prec * m)
    }

    /// X^(pm+r) -> (-1)^r X^m.  Known modulo X^floor(prec/p).
    pub fn psi(&self) -> Self {
        let f = &self.field;
        let p = f.p() as i64;
        let prec = self.prec.div_euclid(p);
        let lo = self.val.div_euclid(p).min(prec);
        let mut out = vec![FieldElem::ZERO; (prec - lo).max(0) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.val + i as i64;
            let m = e.div_euclid(p);
            let r = e.rem_euclid(p);
            if m >= prec {
                break;
            }
            let term = if r % 2 == 1 { f.neg(c) } else { c };
            let k = (m - lo) as usize;
            out[k] = f.add(out[k], term);
        }
        LaurentSeries::new(f, lo, out, prec)
    }

    pub fn psi_pow(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |s, _| s.psi())
    }

    /// Apply the p-power Frobenius to every coefficient and X -> X^p, so the
    /// result is self^p.
    fn frobenius_power(&self) -> Self {
        let f = &self.field;
        let p = f.p() as i64;
        let lifted: Vec<FieldElem> = self.coeffs.iter().map(|&c| f.pow(c, p).unwrap()).collect();
        LaurentSeries { field: f.clone(), val: self.val, coeffs: lifted, prec: self.prec }.substitute_power(p)
    }

    pub fn is_one_unit(&self) -> bool {
        self.coeff(0) == Some(FieldElem::ONE) && self.val >= 0 && self.prec >= 1
    }

    /// f^s for a 1-unit f and s in Z_p, as prod_k (f^(p^k))^(s_k).
    pub fn unit_pow(&self, s: &PadicInt) -> Result<Self> {
        if !self.is_one_unit() {
            return Err(Error::Domain("unit_pow needs f in 1 + X E[[X]]".into()));
        }
        let prec = self.prec;
        let p = self.field.p() as i64;
        let mut acc = LaurentSeries::one(&self.field, prec);
        let mut fk = self.clone();
        let mut k = 0usize;
        let mut pk = 1i64;
        while pk < prec {
            if k >= s.prec() {
                return Err(Error::Precision(format!(
                    "exponent has {} digits, X-precision {prec} needs more",
                    s.prec()
                )));
            }
            let d = s.digit(k);
            for _ in 0..d {
                acc = acc.mul(&fk);
            }
            k += 1;
            pk = pk.saturating_mul(p);
            if pk < prec {
                fk = fk.frobenius_power().truncate(prec);
            }
        }
        Ok(acc.truncate(prec))
    }

    /// Substitute X -> gamma_a(X) = (1+X)^a - 1.
    pub fn gamma_act(&self, g: &GammaElement) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let f = &self.field;
        let rel = self.prec - self.val;
        // u = gamma(X)/X, needed mod X^rel
        let u = gamma_unit(f, g, rel)?;
        let mut acc = LaurentSeries::zero(f, rel);
        let gx = u.shift(1);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&gx).add(&LaurentSeries::monomial(f, c, 0, rel));
        }
        let lead = u.powi(self.val)?.truncate(rel);
        Ok(lead.mul(&acc).shift(self.val))
    }

    /// Text dump `val:prec:[c_0,c_1,...]`.
    pub fn dump(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| self.field.format(c)).collect();
        format!("{}:{}:[{}]", self.val, self.prec, parts.join(","))
    }

    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("cannot parse series {s:?}"));
        let mut it = s.trim().splitn(3, ':');
        let val: i64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let prec: i64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let body = it.next().ok_or_else(bad)?;
        let inner = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
        let coeffs = if inner.is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(|c| field.parse(c)).collect::<Result<Vec<_>>>()?
        };
        Ok(LaurentSeries::new(field, val, coeffs, prec))
    }
}

/// ((1+X)^a - 1)/X mod X^prec
pub fn gamma_unit(field: &Field, g: &GammaElement, prec: i64) -> Result<LaurentSeries> {
    let pow = one_plus_x_pow(field, g.a(), prec + 1)?;
    Ok(pow.sub(&LaurentSeries::one(field, prec + 1)).shift(-1))
}

/// gamma_a(X) = (1+X)^a - 1 mod X^prec
pub fn gamma_x(field: &Field, g: &GammaElement, prec: i64) -> Result<LaurentSeries> {
    Ok(gamma_unit(field, g, prec - 1)?.shift(1))
}

/// (1+X)^s for s in Z_p, coefficientwise as binom(s, k).
pub fn one_plus_x_pow(field: &Field, s: &PadicInt, prec: i64) -> Result<LaurentSeries> {
    let coeffs = (0..prec.max(0) as u64)
        .map(|k| Ok(field.from_int(padic_binom(s, k)? as i64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentSeries::new(field, 0, coeffs, prec))
}

/// f_gamma = omega(a) X / gamma_a(X), a 1-unit.
pub fn f_gamma(field: &Field, g: &GammaElement, prec: i64) -> Result<LaurentSeries> {
    let u = gamma_unit(field, g, prec)?;
    Ok(u.inv()?.scale(field.from_int(g.omega() as i64)))
}

/// Free functions mirroring the methods.
pub fn phi(f: &LaurentSeries) -> LaurentSeries {
    f.phi()
}

pub fn psi(f: &LaurentSeries) -> LaurentSeries {
    f.psi()
}

pub fn unit_pow(f: &LaurentSeries, s: &PadicInt) -> Result<LaurentSeries> {
    f.unit_pow(s)
}

pub fn gamma_act(g: &GammaElement, f: &LaurentSeries) -> Result<LaurentSeries> {
    f.gamma_act(g)
}
