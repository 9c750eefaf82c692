//! Elements of Q_p as p^val * unit, the unit a truncated p-adic integer.
//! Cancellation in a sum loses high unit digits, which are refilled with
//! zeros; only residues mod small powers of p are relied upon.

use std::fmt;

use crate::arith::padic::{PadicInt, DEFAULT_PREC_P};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Qp {
    p: u32,
    // zero is stored with val = 0 and an all-zero unit
    val: i64,
    unit: PadicInt,
}

impl fmt::Debug for Qp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}^{}*{:?}", self.p, self.val, self.unit)
        }
    }
}

impl Qp {
    pub fn zero(p: u32) -> Qp {
        Qp { p, val: 0, unit: PadicInt::zero(p, DEFAULT_PREC_P) }
    }

    pub fn one(p: u32) -> Qp {
        Qp::from_i64(1, p)
    }

    /// p^val * x for any p-adic integer x.
    pub fn from_padic(x: &PadicInt, val: i64) -> Qp {
        let p = x.p();
        if x.is_zero() {
            return Qp { p, val: 0, unit: PadicInt::zero(p, x.prec()) };
        }
        let k = x.valuation();
        let unit = x.shift_down(k).expect("low digits vanish");
        Qp { p, val: val + k as i64, unit }
    }

    pub fn from_i64(n: i64, p: u32) -> Qp {
        Qp::from_ratio(n, 1, p).expect("nonzero denominator")
    }

    pub fn p_power(k: i64, p: u32) -> Qp {
        Qp { p, val: k, unit: PadicInt::from_u64(1, p, DEFAULT_PREC_P) }
    }

    /// a / b for nonzero b; powers of p in b become a negative valuation.
    pub fn from_ratio(a: i64, b: i64, p: u32) -> Result<Qp> {
        if b == 0 {
            return Err(Error::Domain("division by zero".into()));
        }
        if a == 0 {
            return Ok(Qp::zero(p));
        }
        // strip p from both sides first so the unit keeps all its digits
        let (mut a, mut b) = (a, b);
        let mut v = 0i64;
        while a % p as i64 == 0 {
            a /= p as i64;
            v += 1;
        }
        while b % p as i64 == 0 {
            b /= p as i64;
            v -= 1;
        }
        let unit = PadicInt::from_ratio(a, b, p, DEFAULT_PREC_P)?;
        Ok(Qp { p, val: v, unit })
    }

    /// sum_t alpha[t-1] p^(-t)
    pub fn from_frac_digits(alpha: &[u8], p: u32) -> Qp {
        let m = alpha.len();
        let mut digits = vec![0u8; DEFAULT_PREC_P.max(m + 1)];
        for (t, &a) in alpha.iter().enumerate() {
            // p^(-(t+1)) = p^(m-t-1) * p^(-m)
            digits[m - t - 1] = a;
        }
        Qp::from_padic(&PadicInt::from_digits(p, digits).expect("digits < p"), -(m as i64))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation (i64::MAX for zero).
    pub fn val(&self) -> i64 {
        if self.is_zero() {
            i64::MAX
        } else {
            self.val
        }
    }

    pub fn unit(&self) -> &PadicInt {
        &self.unit
    }

    pub fn is_integral(&self) -> bool {
        self.val() >= 0
    }

    /// The unit part mod p (0 for zero).
    pub fn unit_residue(&self) -> u32 {
        self.unit.digit(0)
    }

    pub fn neg(&self) -> Qp {
        Qp { p: self.p, val: self.val, unit: self.unit.neg() }
    }

    pub fn add(&self, other: &Qp) -> Qp {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.val <= other.val { (self, other) } else { (other, self) };
        let gap = (hi.val - lo.val) as usize;
        let sum = lo.unit.add(&hi.unit.shift_up(gap));
        Qp::from_padic(&sum, lo.val)
    }

    pub fn sub(&self, other: &Qp) -> Qp {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Qp) -> Qp {
        if self.is_zero() || other.is_zero() {
            return Qp::zero(self.p);
        }
        Qp { p: self.p, val: self.val + other.val, unit: self.unit.mul(&other.unit) }
    }

    pub fn inv(&self) -> Result<Qp> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of 0 in Q_p".into()));
        }
        Ok(Qp { p: self.p, val: -self.val, unit: self.unit.inv()? })
    }

    /// Multiply by p^k.
    pub fn shift(&self, k: i64) -> Qp {
        if self.is_zero() {
            return self.clone();
        }
        Qp { p: self.p, val: self.val + k, unit: self.unit.clone() }
    }

    /// Digits (alpha_1, ..., alpha_m) of the representative of x mod Z_p in
    /// A, where alpha_t multiplies p^(-t); trailing zeros trimmed.
    pub fn frac_digits(&self) -> Vec<u8> {
        if self.is_zero() || self.val >= 0 {
            return Vec::new();
        }
        let m = (-self.val) as usize;
        let mut alpha: Vec<u8> = (1..=m).map(|t| self.unit.digit(m - t) as u8).collect();
        while alpha.last() == Some(&0) {
            alpha.pop();
        }
        alpha
    }

    /// x minus its fractional part, as a p-adic integer.
    pub fn integer_part(&self) -> PadicInt {
        if self.is_zero() {
            return PadicInt::zero(self.p, self.unit.prec());
        }
        if self.val >= 0 {
            return self.unit.shift_up(self.val as usize);
        }
        let m = (-self.val) as usize;
        let mut digits = self.unit.digits().to_vec();
        digits.drain(..m.min(digits.len()));
        digits.resize(self.unit.prec(), 0);
        PadicInt::from_digits(self.p, digits).expect("digits < p")
    }

    /// The p-adic integer value of an integral element.
    pub fn to_padic(&self) -> Result<PadicInt> {
        if !self.is_integral() {
            return Err(Error::Domain(format!("{self:?} is not integral")));
        }
        Ok(self.integer_part())
    }

    /// The integer n with x = n exactly, when x is a small integer.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_zero() {
            return Some(0);
        }
        if self.val < 0 {
            return None;
        }
        self.unit.to_i64()?.checked_mul((self.p as i64).checked_pow(self.val as u32)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractional_digits() {
        let x = Qp::from_ratio(1, 3, 3).unwrap();
        assert_eq!(x.frac_digits(), vec![1]);
        let y = Qp::from_ratio(5, 9, 3).unwrap();
        // 5/9 = 1/3 + 2/9
        assert_eq!(y.frac_digits(), vec![1, 2]);
        assert_eq!(Qp::from_frac_digits(&[1, 2], 3), y);
        assert_eq!(Qp::from_ratio(-1, 2, 2).unwrap().frac_digits(), vec![1]);
        assert!(Qp::from_i64(7, 3).frac_digits().is_empty());
    }

    #[test]
    fn field_operations() {
        let p = 5;
        let a = Qp::from_ratio(7, 25, p).unwrap();
        let b = Qp::from_ratio(-3, 10, p).unwrap();
        let s = a.add(&b);
        assert_eq!(s, Qp::from_ratio(14 - 15, 50, p).unwrap());
        assert_eq!(a.mul(&a.inv().unwrap()), Qp::one(p));
        assert!(a.sub(&a).is_zero());
        assert_eq!(Qp::from_i64(50, p).val(), 2);
        assert_eq!(Qp::from_i64(-12, 3).to_i64(), Some(-12));
    }

    #[test]
    fn integer_part_plus_fraction() {
        let p = 3;
        let x = Qp::from_ratio(-31, 27, p).unwrap();
        let back = Qp::from_padic(&x.integer_part(), 0).add(&Qp::from_frac_digits(&x.frac_digits(), p));
        assert_eq!(back, x);
    }
}
