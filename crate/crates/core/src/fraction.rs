//! Exact rational thresholds in `[0, 1]`.
//!
//! Density conditions such as "at least `αi` of the first `i` edges" are
//! evaluated with integer arithmetic so that ties at exactly `αi` are
//! accepted. Floating-point inputs are snapped to the nearest fraction with
//! denominator at most [`Fraction::MAX_DENOMINATOR`].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FractionError {
    #[error("fraction {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse fraction from {0:?}")]
    Parse(String),
}

/// A reduced fraction `num / den` with `0 <= num <= den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Fraction {
    pub const MAX_DENOMINATOR: u64 = 1_000_000;
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const HALF: Fraction = Fraction { num: 1, den: 2 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self, FractionError> {
        if den == 0 {
            return Err(FractionError::ZeroDenominator);
        }
        if num > den {
            return Err(FractionError::OutOfRange(format!("{num}/{den}")));
        }
        let g = gcd(num, den).max(1);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    /// Best rational approximation with denominator at most
    /// [`Self::MAX_DENOMINATOR`], found by walking the continued fraction.
    pub fn from_f64(x: f64) -> Result<Self, FractionError> {
        if !(0.0..=1.0).contains(&x) || x.is_nan() {
            return Err(FractionError::OutOfRange(x.to_string()));
        }
        let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
        let mut r = x;
        loop {
            let a = r.floor();
            let a_int = a as u64;
            let p2 = a_int.saturating_mul(p1).saturating_add(p0);
            let q2 = a_int.saturating_mul(q1).saturating_add(q0);
            if q2 > Self::MAX_DENOMINATOR {
                // semiconvergent: largest k with k*q1 + q0 within bound
                let k = (Self::MAX_DENOMINATOR - q0) / q1;
                let (ps, qs) = (k * p1 + p0, k * q1 + q0);
                let err_s = (x - ps as f64 / qs as f64).abs();
                let err_1 = (x - p1 as f64 / q1 as f64).abs();
                return if err_s < err_1 {
                    Self::new(ps, qs)
                } else {
                    Self::new(p1, q1)
                };
            }
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            let frac = r - a;
            if frac.abs() < 1e-15 || (x - p1 as f64 / q1 as f64).abs() < 1e-15 {
                return Self::new(p1, q1);
            }
            r = 1.0 / frac;
        }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `count >= self * len`, exactly.
    pub fn at_least(&self, count: u64, len: u64) -> bool {
        count as u128 * self.den as u128 >= self.num as u128 * len as u128
    }

    /// Smallest integer `c` with `c >= self * len`.
    pub fn ceil_mul(&self, len: u64) -> u64 {
        let prod = self.num as u128 * len as u128;
        prod.div_ceil(self.den as u128) as u64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Fraction {
    type Err = FractionError;

    /// Accepts `a/b` or a decimal literal. Decimals are read exactly
    /// (`0.25` is `1/4`), so no rounding happens for short inputs.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || FractionError::Parse(s.to_string());
        if let Some((a, b)) = s.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            return Fraction::new(a, b);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.len() <= 12 && frac.chars().all(|c| c.is_ascii_digit()) {
                let int: u64 = if int.is_empty() {
                    0
                } else {
                    int.parse().map_err(|_| bad())?
                };
                let den = 10u64.pow(frac.len() as u32);
                let frac_val: u64 = if frac.is_empty() {
                    0
                } else {
                    frac.parse().map_err(|_| bad())?
                };
                let num = int
                    .checked_mul(den)
                    .and_then(|v| v.checked_add(frac_val))
                    .ok_or_else(bad)?;
                return Fraction::new(num, den);
            }
        }
        if let Ok(v) = s.parse::<u64>() {
            return Fraction::new(v, 1);
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        Fraction::from_f64(x)
    }
}
