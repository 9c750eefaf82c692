//! Gaussian elimination over E.
//!
//! `Echelon` grows a row-echelon basis one vector at a time and remembers,
//! for every pivot row, how it was obtained from the inserted vectors, so a
//! membership query can be answered with an explicit linear combination.

use crate::arith::{Field, FieldElem};

#[derive(Clone)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    rows: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
    // which inserted vector produced pivot row k, its leading coefficient
    // before normalisation, and the multipliers of the earlier rows
    origin: Vec<usize>,
    lead: Vec<FieldElem>,
    history: Vec<Vec<FieldElem>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: &Field, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            origin: Vec::new(),
            lead: Vec::new(),
            history: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduce v against the basis; returns the residual and the multiplier
    /// of each pivot row.
    pub fn reduce(&self, v: &[FieldElem]) -> (Vec<FieldElem>, Vec<FieldElem>) {
        assert_eq!(v.len(), self.ncols);
        let f = &self.field;
        let mut v = v.to_vec();
        let mut mult = vec![FieldElem::ZERO; self.rows.len()];
        for (k, row) in self.rows.iter().enumerate() {
            let c = v[self.pivots[k]];
            if c.is_zero() {
                continue;
            }
            mult[k] = c;
            for (x, &r) in v.iter_mut().zip(row).skip(self.pivots[k]) {
                if !r.is_zero() {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        (v, mult)
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        self.reduce(v).0.iter().all(|x| x.is_zero())
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &[FieldElem]) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (res, mult) = self.reduce(v);
        let Some(piv) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let f = &self.field;
        let c = res[piv];
        let ci = f.inv(c).expect("nonzero");
        let row: Vec<FieldElem> = res.iter().map(|&x| f.mul(x, ci)).collect();
        self.rows.push(row);
        self.pivots.push(piv);
        self.origin.push(idx);
        self.lead.push(c);
        self.history.push(mult);
        true
    }

    /// If v lies in the span, coefficients (inserted index, coefficient)
    /// with v = sum coeff * inserted[index].
    pub fn express(&self, v: &[FieldElem]) -> Option<Vec<(usize, FieldElem)>> {
        let (res, mut e) = self.reduce(v);
        if res.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let f = &self.field;
        let mut out = Vec::new();
        for k in (0..self.rows.len()).rev() {
            if e[k].is_zero() {
                continue;
            }
            let t = f.div(e[k], self.lead[k]).expect("leads are nonzero");
            out.push((self.origin[k], t));
            for (l, &d) in self.history[k].iter().enumerate() {
                if !d.is_zero() {
                    e[l] = f.sub(e[l], f.mul(t, d));
                }
            }
        }
        out.reverse();
        Some(out)
    }
}

pub fn rank(field: &Field, rows: &[Vec<FieldElem>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn in_span(field: &Field, basis: &[Vec<FieldElem>], v: &[FieldElem]) -> bool {
    let mut e = Echelon::new(field, v.len());
    for r in basis {
        e.insert(r);
    }
    e.contains(v)
}
