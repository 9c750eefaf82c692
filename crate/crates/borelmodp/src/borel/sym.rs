//! ind_{KZ}^B Sym^r E^2 for 0 <= r <= p-1 and the Hecke operator T.
//!
//! A vector of Sym^r is its coefficient list in x^r, x^(r-1) y, ..., y^r.
//! KZ acts through (a, b; 0, d) P(x, y) = P(a x, b x + d y) mod p, with p
//! in the center acting trivially.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{lucas_binom, Field, FieldElem, Qp};
use crate::borel::chars::{InducedChar, SmoothChar};
use crate::borel::group::{BorelMat, BorelWord, Vertex};
use crate::borel::induced::InducedElement;
use crate::error::{Error, Result};
use crate::seqspace::v_kn;

pub type SymVec = Vec<FieldElem>;

#[derive(Clone, PartialEq, Eq)]
pub struct SymInducedElement {
    field: Field,
    r: usize,
    coeffs: BTreeMap<Vertex, SymVec>,
}

impl fmt::Debug for SymInducedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(v, c)| {
                let cs: Vec<String> = c.iter().map(|&x| self.field.format(x)).collect();
                format!("[{:?}, ({})]", v, cs.join(","))
            })
            .collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}

/// Residues (a, b, d) mod p of k in KZ after removing its central p-power.
fn kz_residues(k: &BorelMat) -> Result<(u32, u32, u32)> {
    if !k.in_kz() {
        return Err(Error::Domain(format!("{k:?} is not in KZ")));
    }
    let v = k.a.val();
    let b = k.b.shift(-v);
    let bb = if b.is_zero() || b.val() > 0 { 0 } else { b.unit_residue() };
    Ok((k.a.unit_residue(), bb, k.d.unit_residue()))
}

/// P(x, y) -> P(a x, b x + d y)
pub fn sym_act(field: &Field, a: u32, b: u32, d: u32, v: &[FieldElem]) -> SymVec {
    let r = v.len() - 1;
    let p = field.p();
    let (fa, fb, fd) = (field.from_int(a as i64), field.from_int(b as i64), field.from_int(d as i64));
    let mut out = vec![FieldElem::ZERO; r + 1];
    for (i, &c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // c (a x)^(r-i) (b x + d y)^i
        let ca = field.mul(c, field.pow(fa, (r - i) as i64).expect("power"));
        for t in 0..=i {
            let bin = lucas_binom(i as u64, t as u64, p);
            if bin == 0 {
                continue;
            }
            let term = field.mul(
                field.mul(ca, field.from_int(bin as i64)),
                field.mul(pow0(field, fb, i - t), pow0(field, fd, t)),
            );
            out[t] = field.add(out[t], term);
        }
    }
    out
}

// x^e with 0^0 = 1
fn pow0(field: &Field, x: FieldElem, e: usize) -> FieldElem {
    if e == 0 {
        field.one()
    } else {
        field.pow(x, e as i64).expect("nonnegative power")
    }
}

impl SymInducedElement {
    pub fn zero(field: &Field, r: usize) -> Result<SymInducedElement> {
        if r + 1 > field.p() as usize {
            return Err(Error::Domain(format!("Sym^r needs r <= p-1, got r={r}")));
        }
        Ok(SymInducedElement { field: field.clone(), r, coeffs: BTreeMap::new() })
    }

    /// [g, x^(r-i) y^i]
    pub fn monomial(field: &Field, r: usize, g: &BorelMat, i: usize) -> Result<SymInducedElement> {
        let mut v = vec![FieldElem::ZERO; r + 1];
        v[i] = field.one();
        let mut e = SymInducedElement::zero(field, r)?;
        e.add_term(g, &v)?;
        Ok(e)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &BTreeMap<Vertex, SymVec> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_at(&mut self, v: Vertex, x: &[FieldElem]) {
        let f = self.field.clone();
        let e = self.coeffs.entry(v.clone()).or_insert_with(|| vec![FieldElem::ZERO; x.len()]);
        for (a, &b) in e.iter_mut().zip(x) {
            *a = f.add(*a, b);
        }
        if e.iter().all(|c| c.is_zero()) {
            self.coeffs.remove(&v);
        }
    }

    /// Add [g, x] for any g in B, moving g to its coset representative.
    pub fn add_term(&mut self, g: &BorelMat, x: &[FieldElem]) -> Result<()> {
        if x.len() != self.r + 1 {
            return Err(Error::Shape(format!("Sym^{} vector of length {}", self.r, x.len())));
        }
        let p = self.field.p();
        let v = Vertex::from_qp(&canonical_beta(g)?, g.d.val() - g.a.val());
        let k = BorelMat::vertex(&v, p).inv().mul(g);
        let (a, b, d) = kz_residues(&k)?;
        let moved = sym_act(&self.field, a, b, d, x);
        self.add_at(v, &moved);
        Ok(())
    }

    pub fn add(&self, o: &SymInducedElement) -> Result<SymInducedElement> {
        if self.r != o.r {
            return Err(Error::Shape("different weights".into()));
        }
        let mut e = self.clone();
        for (v, x) in &o.coeffs {
            e.add_at(v.clone(), x);
        }
        Ok(e)
    }

    pub fn scale(&self, c: FieldElem) -> SymInducedElement {
        let f = &self.field;
        let mut e = SymInducedElement { field: f.clone(), r: self.r, coeffs: BTreeMap::new() };
        for (v, x) in &self.coeffs {
            let y: SymVec = x.iter().map(|&t| f.mul(c, t)).collect();
            e.add_at(v.clone(), &y);
        }
        e
    }

    pub fn act_matrix(&self, m: &BorelMat) -> Result<SymInducedElement> {
        let p = self.field.p();
        let mut out = SymInducedElement::zero(&self.field, self.r)?;
        for (v, x) in &self.coeffs {
            out.add_term(&m.mul(&BorelMat::vertex(v, p)), x)?;
        }
        Ok(out)
    }

    pub fn act(&self, w: &BorelWord) -> Result<SymInducedElement> {
        self.act_matrix(&w.matrix(self.field.p()))
    }

    /// [g] -> [g, x^r], the inclusion of ind(omega^r (x) 1).
    pub fn from_scalar(f: &InducedElement, r: usize) -> Result<SymInducedElement> {
        let fld = f.field();
        let mut e = SymInducedElement::zero(fld, r)?;
        for (v, &c) in f.coeffs() {
            let mut x = vec![FieldElem::ZERO; r + 1];
            x[0] = c;
            e.add_at(v.clone(), &x);
        }
        Ok(e)
    }

    /// The element of ind(omega^r (x) 1) when every value is a multiple of x^r.
    pub fn to_scalar(&self) -> Option<InducedElement> {
        let sigma = scalar_char(&self.field, self.r);
        let mut e = InducedElement::zero(&sigma);
        for (v, x) in &self.coeffs {
            if x[1..].iter().any(|c| !c.is_zero()) {
                return None;
            }
            e.add_term(v.clone(), x[0]);
        }
        Some(e)
    }
}

/// The fractional part of b p^-val(a) / unit(d) for g = (a, b; 0, d).
fn canonical_beta(g: &BorelMat) -> Result<Qp> {
    let d0 = Qp::from_padic(g.d.unit(), 0);
    Ok(g.b.shift(-g.a.val()).mul(&d0.inv()?))
}

/// omega^r (x) 1, the character of KZ on x^r.
pub fn scalar_char(field: &Field, r: usize) -> InducedChar {
    InducedChar::new(SmoothChar::omega_pow(field, r as i64), SmoothChar::trivial(field))
}

/// T([g, v]) = sum_j [g (p, j; 0, 1), v(1, -j) x^r] + [g (1, 0; 0, p), v(0, 1) y^r]
pub fn hecke_t_sym(f: &SymInducedElement) -> Result<SymInducedElement> {
    let fld = f.field.clone();
    let p = fld.p();
    let r = f.r;
    let mut out = SymInducedElement::zero(&fld, r)?;
    for (v, x) in &f.coeffs {
        let g = BorelMat::vertex(v, p);
        for j in 0..p as i64 {
            let mj = fld.from_int(-j);
            let val = fld.sum(x.iter().enumerate().map(|(i, &c)| fld.mul(c, pow0(&fld, mj, i))));
            let mut y = vec![FieldElem::ZERO; r + 1];
            y[0] = val;
            out.add_term(&g.mul(&BorelMat::from_ints(p as i64, j, 1, p)?), &y)?;
        }
        let mut y = vec![FieldElem::ZERO; r + 1];
        y[r] = x[r];
        out.add_term(&g.mul(&BorelMat::p_power(1, p)), &y)?;
    }
    Ok(out)
}

/// The right-hand side of the table for T([1, x^(r-i) y^i]).
pub fn formule_rhs(field: &Field, r: usize, i: usize) -> Result<SymInducedElement> {
    let p = field.p();
    let mut e = SymInducedElement::zero(field, r)?;
    for j in 0..p as i64 {
        let mut y = vec![FieldElem::ZERO; r + 1];
        y[0] = pow0(field, field.from_int(-j), i);
        e.add_term(&BorelMat::from_ints(p as i64, j, 1, p)?, &y)?;
    }
    if i == r {
        let mut y = vec![FieldElem::ZERO; r + 1];
        y[r] = field.one();
        e.add_term(&BorelMat::p_power(1, p), &y)?;
    }
    Ok(e)
}

/// hecke_t_sym reproduces the table on every monomial for this r.
pub fn formule_check(field: &Field, r: usize) -> Result<bool> {
    let id = BorelMat::identity(field.p());
    for i in 0..=r {
        if hecke_t_sym(&SymInducedElement::monomial(field, r, &id, i)?)? != formule_rhs(field, r, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct HeckeGenerator {
    /// an element whose image under T is `image`
    pub preimage: SymInducedElement,
    pub image: SymInducedElement,
}

/// Generators of T(ind Sym^r) meeting ind(omega^r (x) 1): for r = 0 the
/// single T([1, 1]); for r >= 1 the images of [1, x^(r-i) y^i], i < r,
/// whose coefficient vectors ((-j)^i)_j span V_{r,1}, and for mu running
/// over the basis v_{l,1}, l < p-r, of V_{r,1}^perp the elements displayed
/// with the inner sum over (-j)^r.
pub fn enghecke_generators(r: usize, field: &Field) -> Result<Vec<HeckeGenerator>> {
    let p = field.p();
    let id = BorelMat::identity(p);
    let mut out = Vec::new();
    if r == 0 {
        let pre = SymInducedElement::monomial(field, 0, &id, 0)?;
        let mut image = SymInducedElement::zero(field, 0)?;
        image.add_term(&BorelMat::p_power(1, p), &[field.one()])?;
        for j in 0..p as i64 {
            image.add_term(&BorelMat::from_ints(p as i64, j, 1, p)?, &[field.one()])?;
        }
        out.push(HeckeGenerator { preimage: pre, image });
        return Ok(out);
    }
    let xr = |c: FieldElem| {
        let mut y = vec![FieldElem::ZERO; r + 1];
        y[0] = c;
        y
    };
    for i in 0..r {
        let pre = SymInducedElement::monomial(field, r, &id, i)?;
        let mut image = SymInducedElement::zero(field, r)?;
        for j in 0..p as i64 {
            image.add_term(&BorelMat::from_ints(p as i64, j, 1, p)?, &xr(pow0(field, field.from_int(-j), i)))?;
        }
        out.push(HeckeGenerator { preimage: pre, image });
    }
    for l in 0..(p as usize - r) {
        let mu = v_kn(field, l as u64, 1)?;
        let mut pre = SymInducedElement::zero(field, r)?;
        let mut image = SymInducedElement::zero(field, r)?;
        let mut yr = vec![FieldElem::ZERO; r + 1];
        for (i, &m) in mu.entries().iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            yr[r] = m;
            let gi = BorelMat::from_ints(p as i64, i as i64, 1, p)?;
            pre.add_term(&gi, &yr)?;
            let ir = pow0(field, field.from_int(i as i64), r);
            image.add_term(&id, &xr(field.mul(m, ir)))?;
            for j in 0..p as i64 {
                let c = field.mul(m, pow0(field, field.from_int(-j), r));
                image.add_term(&gi.mul(&BorelMat::from_ints(p as i64, j, 1, p)?), &xr(c))?;
            }
        }
        out.push(HeckeGenerator { preimage: pre, image });
    }
    Ok(out)
}
