//! Signed values carried as (sign, ln|v|).
//!
//! Landau-type sums contain factors like exp(−(Ω/q)²/2v²) with exponents of
//! several thousand, so the f64 values underflow to zero while their ratios
//! stay perfectly well defined.

use std::ops::{Div, Mul, Neg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    /// −1, 0 or +1.
    pub sign: f64,
    /// ln|v|; −∞ when the value is zero.
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: Self = Self {
        sign: 0.0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn new(sign: f64, ln_abs: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self::new(v.signum(), v.abs().ln())
        }
    }

    /// Back to f64; underflows to ±0 and overflows to ±∞.
    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0.0
    }

    /// Σ of signed terms, without leaving log space.
    pub fn sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        let terms: Vec<Self> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        let pos = log_sum_exp(terms.iter().filter(|t| t.sign > 0.0).map(|t| t.ln_abs));
        let neg = log_sum_exp(terms.iter().filter(|t| t.sign < 0.0).map(|t| t.ln_abs));
        match pos.partial_cmp(&neg) {
            Some(std::cmp::Ordering::Greater) => Self::new(1.0, pos + (-(neg - pos).exp()).ln_1p()),
            Some(std::cmp::Ordering::Less) => Self::new(-1.0, neg + (-(pos - neg).exp()).ln_1p()),
            _ => Self::ZERO,
        }
    }

    /// |self/other − 1|, evaluated from the log magnitudes. Opposite signs
    /// give at least 1; two zeros give 0.
    pub fn relative_difference(self, other: Self) -> f64 {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => 0.0,
            (true, false) | (false, true) => 1.0,
            _ if self.sign != other.sign => 1.0 + (self.ln_abs - other.ln_abs).exp(),
            _ => (self.ln_abs - other.ln_abs).exp_m1().abs(),
        }
    }
}

fn log_sum_exp(lns: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = lns.clone().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    max + lns.map(|l| (l - max).exp()).sum::<f64>().ln()
}

impl Mul for SignedLog {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl Div for SignedLog {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        if rhs.is_zero() {
            return Self::new(self.sign, f64::INFINITY);
        }
        Self::new(self.sign * rhs.sign, self.ln_abs - rhs.ln_abs)
    }
}

impl Neg for SignedLog {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.sign, self.ln_abs)
    }
}
