//! The scalar layer every distance and contractive inequality is evaluated in.
//!
//! [`Surd`] is exact and covers the l_1, l_2 and shortest-path metrics.
//! `f64` and `f32` cover general l_p metrics; they compare with an absolute
//! tolerance (`1e-9` for `f64`).

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::surd::{Coeff, Surd};

/// Exact rational parameters (contraction constants, exponents).
pub type Rational = Ratio<i64>;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    /// Whether comparisons are exact.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n))
    }

    fn sqrt_of_integer(n: u64) -> Self;

    /// Embeds a floating-point value; `None` for exact scalars.
    fn from_approx(v: f64) -> Option<Self>;

    /// Total order; tolerance-aware for floating-point scalars.
    fn compare(&self, other: &Self) -> Ordering;

    fn to_f64(&self) -> f64;

    fn scale(&self, q: &Rational) -> Self {
        Self::from_rational(q) * self.clone()
    }

    /// Renders `num / den` (with `den` positive).
    fn ratio_text(num: &Self, den: &Self) -> String {
        if den.compare(&Self::from_integer(1)) == Ordering::Equal {
            num.to_string()
        } else {
            format!("({num}) / ({den})")
        }
    }

    fn le(&self, other: &Self) -> bool {
        self.compare(other) != Ordering::Greater
    }

    fn is_positive(&self) -> bool {
        self.compare(&Self::zero()) == Ordering::Greater
    }

    fn is_zero_value(&self) -> bool {
        self.compare(&Self::zero()) == Ordering::Equal
    }

    fn max_of(self, other: Self) -> Self {
        if other.compare(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other.compare(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

impl Scalar for Surd {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        Surd::from_coeff(Coeff::new(*q.numer() as i128, *q.denom() as i128))
    }

    fn sqrt_of_integer(n: u64) -> Self {
        Surd::sqrt_of(n)
    }

    fn from_approx(_: f64) -> Option<Self> {
        None
    }

    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn to_f64(&self) -> f64 {
        Surd::to_f64(self)
    }

    fn scale(&self, q: &Rational) -> Self {
        Surd::scale(self, &Coeff::new(*q.numer() as i128, *q.denom() as i128))
    }

    fn ratio_text(num: &Self, den: &Self) -> String {
        match den.as_rational() {
            Some(d) if !d.is_zero() => num.scale(&d.recip()).to_string(),
            _ => format!("({num}) / ({den})"),
        }
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(q: &Rational) -> Self {
                (*q.numer() as $t) / (*q.denom() as $t)
            }

            fn sqrt_of_integer(n: u64) -> Self {
                (n as $t).sqrt()
            }

            fn from_approx(v: f64) -> Option<Self> {
                Some(v as $t)
            }

            fn compare(&self, other: &Self) -> Ordering {
                if (self - other).abs() <= $tol {
                    Ordering::Equal
                } else {
                    self.partial_cmp(other).unwrap_or(Ordering::Equal)
                }
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn ratio_text(num: &Self, den: &Self) -> String {
                format!("{}", num / den)
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

/// Parses `"n"` or `"n/d"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n = i64::from_str(n.trim()).ok()?;
            let d = i64::from_str(d.trim()).ok()?;
            if d == 0 {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => i64::from_str(text).ok().map(Rational::from_integer),
    }
}

/// Formats a rational as `"n"` or `"n/d"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}
