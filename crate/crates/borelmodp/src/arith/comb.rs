//! Base-p digit combinatorics: binomials mod p, primitivity, digit profiles.

use crate::arith::padic::PadicInt;
use crate::error::{Error, Result};

/// binom(a, b) mod p for digits a, b < p.
fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    // product formula, all factors invertible mod p since a < p
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * inv_mod(den, p) % p
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    r
}

/// Base-p digits of n, least significant first.
pub fn digits(mut n: u64, p: u32) -> Vec<u32> {
    let mut d = Vec::new();
    while n > 0 {
        d.push((n % p as u64) as u32);
        n /= p as u64;
    }
    d
}

/// binom(a, b) mod p as the product of digitwise binomials.
pub fn lucas_binom(a: u64, b: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let (mut a, mut b) = (a, b);
    let mut r = 1u64;
    while b > 0 {
        let (ad, bd) = (a % p64, b % p64);
        r = r * small_binom(ad, bd, p64) % p64;
        if r == 0 {
            return 0;
        }
        a /= p64;
        b /= p64;
    }
    r as u32
}

/// binom(a, k) mod p for any integer a, using
/// binom(-m, k) = (-1)^k binom(m+k-1, k).
pub fn neg_binom(a: i64, k: u64, p: u32) -> u32 {
    if a >= 0 {
        return lucas_binom(a as u64, k, p);
    }
    if k == 0 {
        return 1;
    }
    let m = a.unsigned_abs();
    let v = lucas_binom(m + k - 1, k, p);
    if k % 2 == 1 && v != 0 {
        p - v
    } else {
        v
    }
}

/// binom(s, k) mod p for a p-adic integer s, digitwise.
pub fn padic_binom(s: &PadicInt, k: u64) -> Result<u32> {
    let p = s.p();
    let kd = digits(k, p);
    if kd.len() > s.prec() {
        return Err(Error::Precision(format!(
            "binom(s, {k}) needs {} digits, only {} stored",
            kd.len(),
            s.prec()
        )));
    }
    let mut r = 1u64;
    for (j, &kj) in kd.iter().enumerate() {
        r = r * small_binom(s.digit(j) as u64, kj as u64, p as u64) % p as u64;
    }
    Ok(r as u32)
}

fn checked_pow(p: u32, n: u32) -> Result<u64> {
    (p as u64)
        .checked_pow(n)
        .ok_or_else(|| Error::Domain(format!("{p}^{n} overflows")))
}

fn proper_divisors(n: u32) -> impl Iterator<Item = u32> {
    (1..n).filter(move |d| n % d == 0)
}

/// No proper divisor d of n has (p^n-1)/(p^d-1) dividing h.
pub fn is_primitive(h: u64, n: u32, p: u32) -> Result<bool> {
    let q = checked_pow(p, n)?;
    if n == 0 || h < 1 || h + 2 > q {
        return Err(Error::Domain(format!("primitivity needs 1 <= h <= p^n-2, got h={h}, p={p}, n={n}")));
    }
    for d in proper_divisors(n) {
        let step = (q - 1) / (checked_pow(p, d)? - 1);
        if h % step == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The digit word of h, read cyclically on Z/n, has no period smaller than n.
pub fn has_full_digit_period(h: u64, n: u32, p: u32) -> bool {
    let mut e = digits(h, p);
    e.resize(n as usize, 0);
    let n = n as usize;
    !proper_divisors(n as u32).any(|d| (0..n).all(|i| e[i] == e[(i + d as usize) % n]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitProfile {
    pub p: u32,
    pub n: u32,
    pub h: u64,
    /// digits i_0, ..., i_{n-1} of h(p-1)
    pub i: Vec<u32>,
    /// h_0, ..., h_n
    pub hk: Vec<u64>,
}

impl DigitProfile {
    pub fn hn(&self) -> u64 {
        self.hk[self.n as usize]
    }
}

pub fn digit_profile(h: u64, n: u32, p: u32) -> Result<DigitProfile> {
    if n == 0 {
        return Err(Error::Domain("digit profile needs n >= 1".into()));
    }
    let bound = checked_pow(p, n - 1)?;
    if h < 1 || h + 1 > bound {
        return Err(Error::Domain(format!("digit profile needs 1 <= h <= p^(n-1)-1, got h={h}")));
    }
    let target = h * (p as u64 - 1);
    let mut i = digits(target, p);
    i.resize(n as usize, 0);
    let mut hk = vec![0u64];
    for k in 1..=n as usize {
        hk.push(p as u64 * hk[k - 1] + i[n as usize - k] as u64);
    }
    debug_assert_eq!(hk[n as usize], target);
    debug_assert!(i[n as usize - 1] + 2 <= p);
    Ok(DigitProfile { p, n, h, i, hk })
}

/// All primitive h with 1 <= h <= p^(n-1)-1.
pub fn primitive_exponents(n: u32, p: u32) -> Vec<u64> {
    let Ok(bound) = checked_pow(p, n.saturating_sub(1)) else {
        return Vec::new();
    };
    (1..bound).filter(|&h| is_primitive(h, n, p).unwrap_or(false)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Pascal's triangle mod p, built independently of the digit formula.
    fn pascal(rows: usize, p: u32) -> Vec<Vec<u32>> {
        let mut t = vec![vec![1u32]];
        for a in 1..rows {
            let prev = &t[a - 1];
            let mut row = vec![1u32; a + 1];
            for b in 1..a {
                row[b] = (prev[b - 1] + prev[b]) % p;
            }
            t.push(row);
        }
        t
    }

    #[test]
    fn lucas_matches_pascal() {
        for p in [2u32, 3, 5, 7] {
            let n = (p as usize).pow(3);
            let t = pascal(n, p);
            for a in 0..n {
                for b in 0..=a {
                    assert_eq!(lucas_binom(a as u64, b as u64, p), t[a][b], "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binom(10, 4, 3), 0);
        assert_eq!(lucas_binom(3, 1, 2), 1);
        assert_eq!(lucas_binom(17, 17, 5), 1);
        assert_eq!(lucas_binom(3, 5, 5), 0);
    }

    #[test]
    fn negative_binomials() {
        assert_eq!(neg_binom(-1, 2, 3), 1);
        assert_eq!(neg_binom(-2, 0, 3), 1);
        assert_eq!(neg_binom(-1, 1, 3), 2);
        assert_eq!(neg_binom(7, 3, 5), lucas_binom(7, 3, 5));
    }

    #[test]
    fn negative_binomials_agree_with_padic_expansion() {
        for p in [2u32, 3, 5] {
            for a in -60i64..0 {
                let s = PadicInt::from_i64(a, p, 16);
                for k in 0..30u64 {
                    assert_eq!(neg_binom(a, k, p), padic_binom(&s, k).unwrap(), "p={p} a={a} k={k}");
                }
            }
        }
    }

    #[test]
    fn padic_binom_precision_error() {
        let s = PadicInt::from_i64(1, 2, 4);
        assert!(padic_binom(&s, 16).is_err());
        assert_eq!(padic_binom(&s, 15).unwrap(), 0);
        assert_eq!(padic_binom(&s, 0).unwrap(), 1);
    }

    #[test]
    fn primitivity_examples() {
        assert!(!is_primitive(4, 2, 3).unwrap());
        assert!(is_primitive(1, 2, 3).unwrap());
        assert!(!is_primitive(5, 4, 2).unwrap());
        assert!(is_primitive(0, 2, 3).is_err());
        assert!(is_primitive(8, 2, 3).is_err());
    }

    #[test]
    fn primitivity_definitions_agree() {
        for p in [2u32, 3, 5] {
            for n in 2..=4u32 {
                let q = (p as u64).pow(n);
                for h in 1..=q - 2 {
                    assert_eq!(is_primitive(h, n, p).unwrap(), has_full_digit_period(h, n, p), "p={p} n={n} h={h}");
                }
            }
        }
    }

    #[test]
    fn profile_examples() {
        let d = digit_profile(2, 2, 3).unwrap();
        assert_eq!(d.i, vec![1, 1]);
        assert_eq!(d.hk, vec![0, 1, 4]);
        let d = digit_profile(1, 2, 2).unwrap();
        assert_eq!(d.i, vec![1, 0]);
        assert_eq!(d.hk, vec![0, 0, 1]);
        assert!(digit_profile(3, 2, 3).is_err());
    }

    #[test]
    fn profile_recurrence() {
        for p in [2u32, 3, 5] {
            for n in 1..=4u32 {
                for h in 1..(p as u64).pow(n - 1) {
                    let d = digit_profile(h, n, p).unwrap();
                    assert_eq!(d.hk[0], 0);
                    for k in 1..=n as usize {
                        assert_eq!(d.hk[k], p as u64 * d.hk[k - 1] + d.i[n as usize - k] as u64);
                    }
                    assert_eq!(d.hn(), h * (p as u64 - 1));
                    assert!(d.i[n as usize - 1] <= p - 2);
                }
            }
        }
    }
}
