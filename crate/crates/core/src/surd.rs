//! Exact quadratic surds: finite sums `q_1 sqrt(s_1) + ... + q_k sqrt(s_k)`
//! with rational coefficients and distinct squarefree radicands.
//!
//! Every l_1, l_2 and shortest-path distance between lattice points is a
//! single term of this form, and every contractive inequality is a rational
//! combination of such distances, so the whole comparison pipeline stays
//! exact. Square roots of distinct squarefree integers are linearly
//! independent over the rationals, which makes the normal form canonical
//! and guarantees that the sign of a nonzero surd can always be resolved by
//! refining interval bounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficient type for surd terms.
pub type Coeff = Ratio<i128>;

/// A canonical quadratic surd. Terms are sorted by radicand, radicands are
/// squarefree, and no coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: Vec<(u64, Coeff)>,
}

/// Splits `n` into `(k, s)` with `n = k^2 * s` and `s` squarefree.
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut outside = 1u64;
    let mut inside = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut count = 0u32;
        while n.is_multiple_of(p) {
            n /= p;
            count += 1;
        }
        outside *= p.pow(count / 2);
        if count % 2 == 1 {
            inside *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    inside *= n;
    (outside, inside)
}

impl Surd {
    pub fn zero() -> Self {
        Surd { terms: Vec::new() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_coeff(Coeff::from_integer(n as i128))
    }

    pub fn from_coeff(q: Coeff) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            Surd { terms: vec![(1, q)] }
        }
    }

    /// The exact square root of a nonnegative integer.
    pub fn sqrt_of(n: u64) -> Self {
        let (k, s) = squarefree_split(n);
        if k == 0 {
            return Self::zero();
        }
        Surd {
            terms: vec![(s, Coeff::from_integer(k as i128))],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(radicand, coefficient)` pairs in increasing radicand order.
    pub fn terms(&self) -> &[(u64, Coeff)] {
        &self.terms
    }

    /// `Some(q)` when the surd is rational.
    pub fn as_rational(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [(1, q)] => Some(*q),
            _ => None,
        }
    }

    pub fn scale(&self, q: &Coeff) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(s, c)| (*s, c * q)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(s, c)| ratio_to_f64(c) * (*s as f64).sqrt())
            .sum()
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        match self.terms.as_slice() {
            [] => Ordering::Equal,
            [(_, c)] => c.cmp(&Coeff::zero()),
            _ => self.multi_term_sign(),
        }
    }

    fn multi_term_sign(&self) -> Ordering {
        let mut value = 0.0f64;
        let mut magnitude = 0.0f64;
        for (s, c) in &self.terms {
            let t = ratio_to_f64(c) * (*s as f64).sqrt();
            value += t;
            magnitude += t.abs();
        }
        if value.abs() > magnitude * 1e-12 {
            return value.partial_cmp(&0.0).unwrap_or(Ordering::Equal);
        }
        self.refined_sign()
    }

    fn refined_sign(&self) -> Ordering {
        // The value is nonzero by linear independence; refine until the
        // enclosing interval excludes zero.
        let mut bits = 64u32;
        loop {
            let scale = BigInt::one() << bits;
            let mut lo = BigRational::zero();
            let mut hi = BigRational::zero();
            for (s, c) in &self.terms {
                let root_floor = (BigInt::from(*s) << (2 * bits)).sqrt();
                let below = BigRational::new(root_floor.clone(), scale.clone());
                let above = BigRational::new(root_floor + 1, scale.clone());
                let c = BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()));
                if c.is_positive() {
                    lo += &c * below;
                    hi += &c * above;
                } else {
                    lo += &c * above;
                    hi += &c * below;
                }
            }
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
            assert!(bits <= 1 << 20, "surd sign refinement did not converge");
        }
    }

    fn merge(a: &[(u64, Coeff)], b: &[(u64, Coeff)], negate_b: bool) -> Self {
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    terms.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    let (s, c) = b[j];
                    terms.push((s, if negate_b { -c } else { c }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b { a[i].1 - b[j].1 } else { a[i].1 + b[j].1 };
                    if !c.is_zero() {
                        terms.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Surd { terms }
    }
}

fn ratio_to_f64(c: &Coeff) -> f64 {
    c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        Surd::merge(&self.terms, &rhs.terms, false)
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        Surd::merge(&self.terms, &rhs.terms, false)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        Surd::merge(&self.terms, &rhs.terms, true)
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        Surd::merge(&self.terms, &rhs.terms, true)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            terms: self.terms.into_iter().map(|(s, c)| (s, -c)).collect(),
        }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut acc = Surd::zero();
        for (s1, c1) in &self.terms {
            for (s2, c2) in &rhs.terms {
                // sqrt(g a) sqrt(g b) = g sqrt(a b), and a b is squarefree
                // because a, b are coprime squarefree factors.
                let g = s1.gcd(s2);
                let radicand = (s1 / g) * (s2 / g);
                let coeff = c1 * c2 * Coeff::from_integer(g as i128);
                acc = acc + Surd { terms: vec![(radicand, coeff)] };
            }
        }
        acc
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::from_integer(1)
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

fn fmt_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (s, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (*s, magnitude.is_one()) {
                (1, _) => write!(f, "{}", fmt_coeff(&magnitude))?,
                (s, true) => write!(f, "sqrt({s})")?,
                (s, false) => write!(f, "{}*sqrt({s})", fmt_coeff(&magnitude))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_split(0), (0, 1));
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(8), (2, 2));
        assert_eq!(squarefree_split(25), (5, 1));
        assert_eq!(squarefree_split(72), (6, 2));
        assert_eq!(squarefree_split(30), (1, 30));
    }

    #[test]
    fn perfect_squares_are_rational() {
        assert_eq!(Surd::sqrt_of(25).as_rational(), Some(Coeff::from_integer(5)));
        assert_eq!(Surd::sqrt_of(8).to_string(), "2*sqrt(2)");
    }

    #[test]
    fn products_normalize() {
        let r6 = &Surd::sqrt_of(2) * &Surd::sqrt_of(3);
        assert_eq!(r6, Surd::sqrt_of(6));
        let two = &Surd::sqrt_of(2) * &Surd::sqrt_of(2);
        assert_eq!(two, Surd::from_integer(2));
        let six = &Surd::sqrt_of(6) * &Surd::sqrt_of(10);
        assert_eq!(six, Surd::sqrt_of(60));
    }

    #[test]
    fn sign_of_close_sums() {
        // sqrt(2) + sqrt(3) vs sqrt(10): 3.1462... > 3.1622...? no: less.
        let lhs = Surd::sqrt_of(2) + Surd::sqrt_of(3);
        assert_eq!(lhs.cmp(&Surd::sqrt_of(10)), Ordering::Less);
        // 7 sqrt(2) - 3 sqrt(11) = 9.89949 - 9.94987 < 0
        let d = Surd::sqrt_of(2).scale(&Coeff::from_integer(7))
            - Surd::sqrt_of(11).scale(&Coeff::from_integer(3));
        assert_eq!(d.signum(), Ordering::Less);
        assert_eq!(d.refined_sign(), Ordering::Less);
    }

    #[test]
    fn exact_path_agrees_with_float_on_separated_values() {
        let cases = [(2u64, 3i128, 5u64, -2i128), (3, 1, 7, -1), (5, 4, 6, -3)];
        for (s1, c1, s2, c2) in cases {
            let v = Surd::sqrt_of(s1).scale(&Coeff::from_integer(c1))
                + Surd::sqrt_of(s2).scale(&Coeff::from_integer(c2));
            let f = v.to_f64();
            assert_eq!(v.refined_sign(), f.partial_cmp(&0.0).unwrap());
        }
    }

    #[test]
    fn display_forms() {
        let v = Surd::from_integer(1) - Surd::sqrt_of(2).scale(&Coeff::new(1, 2));
        assert_eq!(v.to_string(), "1 - 1/2*sqrt(2)");
        assert_eq!(Surd::zero().to_string(), "0");
        assert_eq!(Surd::from_coeff(Coeff::new(-3, 4)).to_string(), "-3/4");
    }
}
