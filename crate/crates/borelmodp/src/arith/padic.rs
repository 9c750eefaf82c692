//! Truncated p-adic integers as base-p digit vectors.

use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_PREC_P: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u32,
    digits: Vec<u8>,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Zp{}[", self.p)?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

impl PadicInt {
    pub fn zero(p: u32, prec: usize) -> Self {
        PadicInt { p, digits: vec![0; prec] }
    }

    pub fn from_digits(p: u32, digits: Vec<u8>) -> Result<Self> {
        if digits.iter().any(|&d| d as u32 >= p) {
            return Err(Error::Domain(format!("digit out of range for p={p}")));
        }
        Ok(PadicInt { p, digits })
    }

    /// Image of an integer; negative integers get their p-adic expansion.
    pub fn from_i64(n: i64, p: u32, prec: usize) -> Self {
        let mut v = PadicInt::from_u64(n.unsigned_abs(), p, prec);
        if n < 0 {
            v = v.neg();
        }
        v
    }

    pub fn from_u64(mut n: u64, p: u32, prec: usize) -> Self {
        let mut digits = vec![0u8; prec];
        for d in digits.iter_mut() {
            *d = (n % p as u64) as u8;
            n /= p as u64;
        }
        PadicInt { p, digits }
    }

    /// a / b for integers with b prime to p.
    pub fn from_ratio(a: i64, b: i64, p: u32, prec: usize) -> Result<Self> {
        let den = PadicInt::from_i64(b, p, prec);
        Ok(PadicInt::from_i64(a, p, prec).mul(&den.inv()?))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn prec(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn digit(&self, k: usize) -> u32 {
        self.digits.get(k).copied().unwrap_or(0) as u32
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.digit(0) != 0
    }

    /// Number of leading zero digits (prec for zero).
    pub fn valuation(&self) -> usize {
        self.digits.iter().position(|&d| d != 0).unwrap_or(self.digits.len())
    }

    /// Value mod p^k as an integer, for k small enough to fit.
    pub fn residue(&self, k: usize) -> u64 {
        let k = k.min(self.prec());
        self.digits[..k].iter().rev().fold(0u64, |acc, &d| acc * self.p as u64 + d as u64)
    }

    /// The integer represented, if the expansion terminates inside the
    /// stored digits with room to spare.
    pub fn to_u64(&self) -> Option<u64> {
        let top = self.digits.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1);
        if top == self.prec() || top > 40 {
            return None;
        }
        let mut acc: u64 = 0;
        for &d in self.digits[..top].iter().rev() {
            acc = acc.checked_mul(self.p as u64)?.checked_add(d as u64)?;
        }
        Some(acc)
    }

    /// Signed integer: recognises expansions that terminate in zeros or in
    /// a run of (p-1) digits (negative integers).
    pub fn to_i64(&self) -> Option<i64> {
        if let Some(v) = self.to_u64() {
            return i64::try_from(v).ok();
        }
        let n = self.neg().to_u64()?;
        i64::try_from(n).ok().map(|v| -v)
    }

    fn check(&self, other: &PadicInt) {
        assert_eq!(self.p, other.p, "mixing p-adic integers for different primes");
    }

    fn normalise(p: u32, acc: Vec<u64>, prec: usize) -> PadicInt {
        let mut digits = vec![0u8; prec];
        let mut carry = 0u64;
        for k in 0..prec {
            let v = acc.get(k).copied().unwrap_or(0) + carry;
            digits[k] = (v % p as u64) as u8;
            carry = v / p as u64;
        }
        PadicInt { p, digits }
    }

    pub fn add(&self, other: &PadicInt) -> PadicInt {
        self.check(other);
        let prec = self.prec().min(other.prec());
        let acc: Vec<u64> = (0..prec).map(|k| self.digit(k) as u64 + other.digit(k) as u64).collect();
        PadicInt::normalise(self.p, acc, prec)
    }

    pub fn neg(&self) -> PadicInt {
        if self.is_zero() {
            return self.clone();
        }
        // -x = (p^N - 1 - x) + 1: complement digits then add one
        let comp: Vec<u64> = self.digits.iter().map(|&d| (self.p - 1 - d as u32) as u64).collect();
        let mut acc = comp;
        acc[0] += 1;
        PadicInt::normalise(self.p, acc, self.prec())
    }

    pub fn sub(&self, other: &PadicInt) -> PadicInt {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicInt) -> PadicInt {
        self.check(other);
        let prec = self.prec().min(other.prec());
        let mut acc = vec![0u64; prec];
        for i in 0..prec {
            let a = self.digits[i] as u64;
            if a == 0 {
                continue;
            }
            for j in 0..prec - i {
                acc[i + j] += a * other.digits[j] as u64;
            }
            // keep accumulators small for large p
            if i % 64 == 63 {
                let n = PadicInt::normalise(self.p, acc, prec);
                acc = n.digits.iter().map(|&d| d as u64).collect();
            }
        }
        PadicInt::normalise(self.p, acc, prec)
    }

    pub fn mul_u64(&self, k: u64) -> PadicInt {
        self.mul(&PadicInt::from_u64(k, self.p, self.prec()))
    }

    /// Multiplicative inverse of a unit, by Newton iteration.
    pub fn inv(&self) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::Domain(format!("{self:?} is not a p-adic unit")));
        }
        let p = self.p;
        let d0 = self.digit(0);
        let inv0 = (1..p).find(|&x| x * d0 % p == 1).unwrap();
        let prec = self.prec();
        let mut x = PadicInt::from_u64(inv0 as u64, p, prec);
        let two = PadicInt::from_u64(2, p, prec);
        let mut correct = 1;
        while correct < prec {
            x = x.mul(&two.sub(&self.mul(&x)));
            correct *= 2;
        }
        Ok(x)
    }

    /// Multiply by p^k (shifting digits, dropping those beyond precision).
    pub fn shift_up(&self, k: usize) -> PadicInt {
        let prec = self.prec();
        let mut digits = vec![0u8; prec];
        for i in 0..prec.saturating_sub(k) {
            digits[i + k] = self.digits[i];
        }
        PadicInt { p: self.p, digits }
    }

    /// Divide by p^k, requiring the low k digits to vanish.  The top k
    /// digits become unknown and are filled with zeros.
    pub fn shift_down(&self, k: usize) -> Result<PadicInt> {
        if self.digits.iter().take(k).any(|&d| d != 0) {
            return Err(Error::Domain("not divisible by the requested power of p".into()));
        }
        let prec = self.prec();
        let mut digits = vec![0u8; prec];
        for i in k..prec {
            digits[i - k] = self.digits[i];
        }
        Ok(PadicInt { p: self.p, digits })
    }

    /// Truncate or zero-extend to a new precision.
    pub fn with_prec(&self, prec: usize) -> PadicInt {
        let mut digits = self.digits.clone();
        digits.resize(prec, 0);
        PadicInt { p: self.p, digits }
    }
}
