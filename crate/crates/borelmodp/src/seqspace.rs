//! Sequences of length p^n over E, the binomial vectors v_{k,n} and the
//! operators Delta, mu_a, cyclic shift and block extraction.

use crate::arith::{lucas_binom, Field, FieldElem, PadicInt};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};

#[derive(Clone, PartialEq, Eq)]
pub struct Seq {
    field: Field,
    n: u32,
    entries: Vec<FieldElem>,
}

impl std::fmt::Debug for Seq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|&e| self.field.format(e)).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn level_len(p: u32, n: u32) -> usize {
    (p as usize).pow(n)
}

impl Seq {
    pub fn zero(field: &Field, n: u32) -> Seq {
        Seq { field: field.clone(), n, entries: vec![FieldElem::ZERO; level_len(field.p(), n)] }
    }

    pub fn from_entries(field: &Field, n: u32, entries: Vec<FieldElem>) -> Result<Seq> {
        if entries.len() != level_len(field.p(), n) {
            return Err(Error::Shape(format!("{} entries for level {n}", entries.len())));
        }
        Ok(Seq { field: field.clone(), n, entries })
    }

    pub fn from_ints(field: &Field, n: u32, entries: &[i64]) -> Result<Seq> {
        Seq::from_entries(field, n, entries.iter().map(|&x| field.from_int(x)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    /// Entry at an index read mod p^n.
    pub fn at(&self, j: i64) -> FieldElem {
        self.entries[j.rem_euclid(self.len() as i64) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn same_shape(&self, other: &Seq) -> Result<()> {
        if self.n != other.n || self.field.p() != other.field.p() {
            return Err(Error::Shape(format!("levels {} and {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Seq) -> Result<Seq> {
        self.same_shape(other)?;
        let f = &self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Seq { field: f.clone(), n: self.n, entries })
    }

    pub fn sub(&self, other: &Seq) -> Result<Seq> {
        self.add(&other.scale(self.field.from_int(-1)))
    }

    pub fn scale(&self, c: FieldElem) -> Seq {
        let f = &self.field;
        Seq { field: f.clone(), n: self.n, entries: self.entries.iter().map(|&a| f.mul(c, a)).collect() }
    }
}

/// sum_j x_j y_j
pub fn pairing(x: &Seq, y: &Seq) -> Result<FieldElem> {
    x.same_shape(y)?;
    let f = &x.field;
    Ok(f.sum(x.entries.iter().zip(&y.entries).map(|(&a, &b)| f.mul(a, b))))
}

/// v_{k,n} with entry j equal to binom(j, k) mod p.
pub fn v_kn(field: &Field, k: u64, n: u32) -> Result<Seq> {
    let p = field.p();
    let len = level_len(p, n);
    if k as usize >= len {
        return Err(Error::Domain(format!("v_(k,n) needs k <= p^n-1, got k={k}")));
    }
    let entries = (0..len as u64).map(|j| field.from_int(lucas_binom(j, k, p) as i64)).collect();
    Ok(Seq { field: field.clone(), n, entries })
}

/// (Delta x)_j = x_{j-1} - x_j, indices cyclic.
pub fn delta(x: &Seq) -> Seq {
    let f = &x.field;
    let entries = (0..x.len() as i64).map(|j| f.sub(x.at(j - 1), x.at(j))).collect();
    Seq { field: f.clone(), n: x.n, entries }
}

pub fn delta_pow(x: &Seq, k: usize) -> Seq {
    let mut y = x.clone();
    for _ in 0..k {
        if y.is_zero() {
            break;
        }
        y = delta(&y);
    }
    y
}

/// (x_j) -> (x_{j-1})
pub fn cyclic_shift(x: &Seq) -> Seq {
    let entries = (0..x.len() as i64).map(|j| x.at(j - 1)).collect();
    Seq { field: x.field.clone(), n: x.n, entries }
}

/// x in V_{k,n} iff Delta^k x = 0.
pub fn in_vkn(x: &Seq, k: usize) -> bool {
    k >= x.len() || delta_pow(x, k).is_zero()
}

/// Membership in span{v_0, ..., v_{k-1}} by elimination.
pub fn in_vkn_by_rank(x: &Seq, k: usize) -> bool {
    let basis: Vec<Vec<FieldElem>> = (0..k.min(x.len()))
        .map(|j| v_kn(&x.field, j as u64, x.n).unwrap().entries)
        .collect();
    linalg::in_span(&x.field, &basis, &x.entries)
}

/// (mu_a x)_j = x_{aj mod p^n}
pub fn mu_a(x: &Seq, a: &PadicInt) -> Result<Seq> {
    if !a.is_unit() {
        return Err(Error::Domain(format!("mu_a needs a unit, got {a:?}")));
    }
    let len = x.len() as u64;
    let am = a.residue(x.n as usize) % len.max(1);
    let entries = (0..len).map(|j| x.entries[((am * j) % len) as usize]).collect();
    Ok(Seq { field: x.field.clone(), n: x.n, entries })
}

/// y_j = x_{pj+i}, a sequence of level n-1.
pub fn block_subsequence(x: &Seq, i: u32) -> Result<Seq> {
    let p = x.field.p();
    if x.n == 0 {
        return Err(Error::Domain("block extraction needs n >= 1".into()));
    }
    if i >= p {
        return Err(Error::Domain(format!("residue {i} not in [0, p-1]")));
    }
    let m = level_len(p, x.n - 1);
    let entries = (0..m).map(|j| x.entries[p as usize * j + i as usize]).collect();
    Ok(Seq { field: x.field.clone(), n: x.n - 1, entries })
}

fn vbasis(field: &Field, k: usize, n: u32) -> Vec<Seq> {
    (0..k).map(|j| v_kn(field, j as u64, n).unwrap()).collect()
}

/// The v-basis of V_{k,n} pairs to zero against that of V_{p^n-k,n}, and
/// the two ranks add up to p^n.
pub fn orth_complement_check(field: &Field, k: usize, n: u32) -> bool {
    let len = level_len(field.p(), n);
    if k > len {
        return false;
    }
    let a = vbasis(field, k, n);
    let b = vbasis(field, len - k, n);
    let orthogonal = a.iter().all(|x| b.iter().all(|y| pairing(x, y).unwrap().is_zero()));
    let rows = |s: &[Seq]| s.iter().map(|x| x.entries.clone()).collect::<Vec<_>>();
    let ra = if a.is_empty() { 0 } else { linalg::rank(field, &rows(&a)) };
    let rb = if b.is_empty() { 0 } else { linalg::rank(field, &rows(&b)) };
    orthogonal && ra == k && rb == len - k
}

/// dim V_{k,n} computed as the rank of its spanning v-vectors.
pub fn dim_vkn(field: &Field, k: usize, n: u32) -> usize {
    let mut e = Echelon::new(field, level_len(field.p(), n));
    for v in vbasis(field, k, n) {
        e.insert(&v.entries);
    }
    e.rank()
}

/// Delta^k maps V_{l+k,n} onto V_{l,n} with kernel V_{k,n}.
pub fn exact_sequence_check(field: &Field, k: usize, l: usize, n: u32) -> bool {
    let len = level_len(field.p(), n);
    if k + l > len {
        return false;
    }
    let images: Vec<Seq> = vbasis(field, l + k, n).iter().map(|v| delta_pow(v, k)).collect();
    if !images.iter().all(|y| in_vkn_by_rank(y, l)) {
        return false;
    }
    let mut e = Echelon::new(field, len);
    for y in &images {
        e.insert(&y.entries);
    }
    let kernel_ok = images[..k].iter().all(|y| y.is_zero());
    e.rank() == l && kernel_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldConfig;

    fn f(p: u32) -> Field {
        FieldConfig::prime(p).unwrap()
    }

    #[test]
    fn v_examples() {
        let f3 = f(3);
        assert_eq!(v_kn(&f3, 1, 1).unwrap(), Seq::from_ints(&f3, 1, &[0, 1, 2]).unwrap());
        assert!(v_kn(&f3, 0, 2).unwrap().entries().iter().all(|&e| e == f3.one()));
        let v = v_kn(&f3, 5, 2).unwrap();
        assert!(v.entries()[..5].iter().all(|e| e.is_zero()));
        assert_eq!(v.entries()[5], f3.one());
        assert!(v_kn(&f3, 9, 2).is_err());
    }

    #[test]
    fn pairing_examples() {
        for (p, n) in [(2, 2), (3, 1), (3, 2)] {
            let fp = f(p);
            let top = level_len(p, n) as u64 - 1;
            let v0 = v_kn(&fp, 0, n).unwrap();
            assert_eq!(pairing(&v0, &v_kn(&fp, top, n).unwrap()).unwrap(), fp.one());
            if top >= 3 {
                let v1 = v_kn(&fp, 1, n).unwrap();
                assert!(pairing(&v1, &v1).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn delta_examples() {
        let f3 = f(3);
        let v0 = v_kn(&f3, 0, 2).unwrap();
        assert!(delta(&v0).is_zero());
        let v1 = v_kn(&f3, 1, 2).unwrap();
        assert_eq!(delta(&v1), v0.scale(f3.from_int(-1)));
        let x = Seq::from_ints(&f3, 2, &[1, 0, 2, 2, 1, 0, 0, 1, 1]).unwrap();
        assert!(delta_pow(&x, 9).is_zero());
    }

    #[test]
    fn mu_example() {
        let f3 = f(3);
        let v1 = v_kn(&f3, 1, 1).unwrap();
        let two = PadicInt::from_i64(2, 3, 16);
        let y = mu_a(&v1, &two).unwrap();
        assert_eq!(y, Seq::from_ints(&f3, 1, &[0, 2, 1]).unwrap());
        assert_eq!(y, v1.scale(f3.from_int(2)));
        assert!(mu_a(&v1, &PadicInt::from_i64(3, 3, 16)).is_err());
    }

    #[test]
    fn block_examples() {
        let f3 = f(3);
        // k = 7 = 3*2 + 1: block i is binom(i,1) v_{2,1}
        let v = v_kn(&f3, 7, 2).unwrap();
        for i in 0..3 {
            let y = block_subsequence(&v, i).unwrap();
            assert_eq!(y, v_kn(&f3, 2, 1).unwrap().scale(f3.from_int(i as i64)));
        }
        assert!(block_subsequence(&v, 3).is_err());
    }

    #[test]
    fn orth_examples() {
        assert!(orth_complement_check(&f(2), 0, 2));
        assert!(orth_complement_check(&f(2), 2, 2));
        assert!(orth_complement_check(&f(3), 1, 1));
    }

    #[test]
    fn delta_membership_matches_rank_oracle() {
        let f2 = f(2);
        for code in 0u32..256 {
            let entries: Vec<i64> = (0..8).map(|b| ((code >> b) & 1) as i64).collect();
            let x = Seq::from_ints(&f2, 3, &entries).unwrap();
            for k in 0..=8 {
                assert_eq!(in_vkn(&x, k), in_vkn_by_rank(&x, k));
            }
        }
    }

    #[test]
    fn shift_is_identity_plus_delta() {
        let f5 = f(5);
        let x = Seq::from_ints(&f5, 1, &[3, 1, 4, 1, 5]).unwrap();
        assert_eq!(cyclic_shift(&x), x.add(&delta(&x)).unwrap());
    }
}
