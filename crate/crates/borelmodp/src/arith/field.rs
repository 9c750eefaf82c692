//! The coefficient field E = F_p[t]/(f).
//!
//! Elements are stored as a base-p code `sum c_i p^i` of the residue
//! `sum c_i t^i`, so the prime subfield is exactly the codes `0..p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared handle on a field configuration.
pub type Field = Arc<FieldConfig>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct FieldConfig {
    p: u32,
    degree: usize,
    q: u32,
    modulus: Vec<u32>,
    // exp[i] = g^i for i in 0..q-1, log[code] for nonzero codes
    exp: Vec<u32>,
    log: Vec<u32>,
    add_tab: Option<Vec<u32>>,
}

impl PartialEq for FieldConfig {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldConfig {}

impl fmt::Debug for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[t]/({})", self.p, poly_to_string(&self.modulus))
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Remainder of a modulo a monic b, coefficients low to high.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                let idx = i + shift;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn monic_of_degree(code: u64, deg: usize, p: u32) -> Vec<u32> {
    let mut c = code;
    let mut v = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        v.push((c % p as u64) as u32);
        c /= p as u64;
    }
    v.push(1);
    v
}

/// Exhaustive check: no monic factor of degree 1..=deg/2.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let g = monic_of_degree(code, d, p);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of the given degree, ordered by the code of
/// its lower coefficients.
pub fn smallest_irreducible(p: u32, degree: usize) -> Vec<u32> {
    let count = (p as u64).pow(degree as u32);
    (0..count)
        .map(|c| monic_of_degree(c, degree, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn poly_to_string(c: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let t = match i {
            0 => format!("{a}"),
            1 if a == 1 => "t".to_string(),
            1 => format!("{a}t"),
            _ if a == 1 => format!("t^{i}"),
            _ => format!("{a}t^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

impl FieldConfig {
    /// E = F_p[t]/(modulus), modulus monic with coefficients low to high.
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p) || p > 251 {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Reducible(format!("{modulus:?}")));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::Reducible(poly_to_string(&modulus)));
        }
        let degree = modulus.len() - 1;
        let q64 = (p as u64).pow(degree as u32);
        if q64 > 1 << 16 {
            return Err(Error::Domain(format!("field of size {q64} is too large")));
        }
        let q = q64 as u32;
        let mut cfg = FieldConfig {
            p,
            degree,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_tab: None,
        };
        cfg.build_tables();
        Ok(Arc::new(cfg))
    }

    /// The prime field F_p, presented as F_p[t]/(t).
    pub fn prime(p: u32) -> Result<Field> {
        FieldConfig::new(p, vec![0, 1])
    }

    /// F_{p^d} with the smallest irreducible modulus.
    pub fn with_degree(p: u32, degree: usize) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if degree == 0 {
            return Err(Error::Domain("degree must be at least 1".into()));
        }
        if degree == 1 {
            return FieldConfig::prime(p);
        }
        FieldConfig::new(p, smallest_irreducible(p, degree))
    }

    fn decode(&self, code: u32) -> Vec<u32> {
        let mut c = code;
        (0..self.degree)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let x = self.decode(a);
        let y = self.decode(b);
        let mut prod = vec![0u32; 2 * self.degree - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % self.p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        let mut r = r;
        r.resize(self.degree, 0);
        self.encode(&r)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let x = self.decode(a);
        let y = self.decode(b);
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&s)
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        // find a generator of the multiplicative group
        let mut gen = None;
        'search: for g in 1..self.q {
            let mut x = 1u32;
            for k in 1..=order {
                x = self.slow_mul(x, g);
                if x == 1 {
                    if k == order {
                        gen = Some(g);
                        break 'search;
                    }
                    break;
                }
            }
        }
        let g = gen.expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, g);
        }
        self.exp = exp;
        self.log = log;
        if self.degree > 1 && self.q <= 1024 {
            let q = self.q;
            let mut tab = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    tab[(a * q + b) as usize] = self.slow_add(a, b);
                }
            }
            self.add_tab = Some(tab);
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_code(&self, code: u32) -> Result<FieldElem> {
        if code < self.q {
            Ok(FieldElem(code))
        } else {
            Err(Error::Domain(format!("code {code} outside field of size {}", self.q)))
        }
    }

    /// Residue of `sum c_i t^i`; coefficients are reduced mod p and mod f.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElem {
        let c: Vec<u32> = coeffs.iter().map(|&x| x.rem_euclid(self.p as i64) as u32).collect();
        let mut r = if c.len() > self.degree { poly_rem(&c, &self.modulus, self.p) } else { c };
        r.resize(self.degree, 0);
        FieldElem(self.encode(&r))
    }

    /// The class of t.
    pub fn generator_t(&self) -> FieldElem {
        self.from_coeffs(&[0, 1])
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        self.decode(a.0)
    }

    /// Elements of the prime subfield have a single coefficient.
    pub fn to_prime(&self, a: FieldElem) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.degree == 1 {
            let s = a.0 + b.0;
            FieldElem(if s >= self.p { s - self.p } else { s })
        } else if let Some(t) = &self.add_tab {
            FieldElem(t[(a.0 * self.q + b.0) as usize])
        } else {
            FieldElem(self.slow_add(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return a;
        }
        if self.degree == 1 {
            return FieldElem(self.p - a.0);
        }
        let d: Vec<u32> = self.decode(a.0).iter().map(|&c| (self.p - c) % self.p).collect();
        FieldElem(self.encode(&d))
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        if self.degree == 1 {
            return FieldElem(a.0 * b.0 % self.p);
        }
        let order = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElem(self.exp[(if s >= order { s - order } else { s }) as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElem(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e for any integer e (a must be nonzero when e < 0).
    pub fn pow(&self, a: FieldElem, e: i64) -> Result<FieldElem> {
        if a.is_zero() {
            return match e.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(FieldElem::ZERO),
                std::cmp::Ordering::Equal => Ok(FieldElem::ONE),
                std::cmp::Ordering::Less => Err(Error::Domain("negative power of zero".into())),
            };
        }
        let order = (self.q - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        Ok(FieldElem(self.exp[(l * e.rem_euclid(order)).rem_euclid(order) as usize]))
    }

    /// Elements as polynomials in t, e.g. `2t+1`.
    pub fn format(&self, a: FieldElem) -> String {
        poly_to_string(&self.decode(a.0))
    }

    pub fn parse(&self, s: &str) -> Result<FieldElem> {
        let bad = || Error::Domain(format!("cannot parse field element {s:?}"));
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let mut coeffs: Vec<i64> = Vec::new();
        for term in s.split('+') {
            let (c, e) = match term.find('t') {
                None => (term.parse::<i64>().map_err(|_| bad())?, 0usize),
                Some(pos) => {
                    let c = if pos == 0 { 1 } else { term[..pos].parse::<i64>().map_err(|_| bad())? };
                    let rest = &term[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                    };
                    (c, e)
                }
            };
            if coeffs.len() <= e {
                coeffs.resize(e + 1, 0);
            }
            coeffs[e] += c;
        }
        Ok(self.from_coeffs(&coeffs))
    }

    /// Sum of a list of elements.
    pub fn sum<I: IntoIterator<Item = FieldElem>>(&self, it: I) -> FieldElem {
        it.into_iter().fold(FieldElem::ZERO, |a, b| self.add(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_nonzero_element_has_an_inverse() {
        for (p, d) in [(2, 1), (2, 3), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let f = FieldConfig::with_degree(p, d).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn table_arithmetic_matches_polynomial_arithmetic() {
        let f = FieldConfig::with_degree(3, 2).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(f.mul(FieldElem(a), FieldElem(b)).0, f.slow_mul(a, b));
                assert_eq!(f.add(FieldElem(a), FieldElem(b)).0, f.slow_add(a, b));
            }
        }
    }

    #[test]
    fn modulus_selection() {
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert!(FieldConfig::new(3, vec![2, 0, 1]).is_err()); // t^2 - 1
        assert!(FieldConfig::new(4, vec![0, 1]).is_err());
    }

    #[test]
    fn t_squared_is_minus_one_in_f9() {
        let f = FieldConfig::with_degree(3, 2).unwrap();
        let t = f.generator_t();
        assert_eq!(f.mul(t, t), f.from_int(-1));
    }

    #[test]
    fn format_parse_round_trip() {
        let f = FieldConfig::with_degree(5, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
        assert_eq!(f.format(f.from_coeffs(&[1, 2])), "2t+1");
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let f = FieldConfig::prime(7).unwrap();
        let three = f.from_int(3);
        assert_eq!(f.pow(three, -1).unwrap(), f.inv(three).unwrap());
        assert_eq!(f.pow(three, 6).unwrap(), f.one());
    }
}
