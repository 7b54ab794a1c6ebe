//! Closed intervals with exact rational endpoints.
//!
//! All arithmetic is exact, so enclosures are sound without any outward
//! rounding. Widths grow only through the usual dependency effect of naive
//! interval extension.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::rational::{fmt_rational, frac, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

/// Axis-aligned box.
pub type IBox = Vec<Interval>;

impl Interval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval with lo > hi");
        Interval { lo, hi }
    }

    pub fn try_new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Interval::point(Rational::zero())
    }

    /// `[c - r, c + r]`
    pub fn centered(c: &Rational, r: &Rational) -> Self {
        Interval::new(c - r, c + r)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) * frac(1, 2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `Some(Greater)` if strictly positive, `Some(Less)` if strictly negative,
    /// `Some(Equal)` only for the degenerate interval `[0, 0]`.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Strict containment in the interior of `other`.
    pub fn is_interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        Interval::try_new(lo, hi)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn shift(&self, c: &Rational) -> Interval {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    /// Range of `x^2`; tighter than `self * self` when the interval straddles 0.
    pub fn sqr(&self) -> Interval {
        self.powi(2)
    }

    /// Exact range of `x^e` over the interval.
    pub fn powi(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(Rational::from_integer(1.into()));
        }
        let p = |x: &Rational| num_traits::pow(x.clone(), e as usize);
        if e % 2 == 1 || !self.lo.is_negative() {
            return Interval {
                lo: p(&self.lo),
                hi: p(&self.hi),
            };
        }
        if !self.hi.is_positive() {
            return Interval {
                lo: p(&self.hi),
                hi: p(&self.lo),
            };
        }
        let m = (-&self.lo).max(self.hi.clone());
        Interval {
            lo: Rational::zero(),
            hi: p(&m),
        }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval::new(self.lo.clone(), m.clone()),
            Interval::new(m, self.hi.clone()),
        )
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            super::rational::to_f64(&self.lo),
            super::rational::to_f64(&self.hi),
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rational(&self.lo), fmt_rational(&self.hi))
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        if self.is_point() {
            return rhs.scale(&self.lo);
        }
        if rhs.is_point() {
            return self.scale(&rhs.lo);
        }
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Box helpers.
pub fn box_contains(b: &[Interval], p: &[Rational]) -> bool {
    b.len() == p.len() && b.iter().zip(p).all(|(i, x)| i.contains(x))
}

pub fn box_subset(inner: &[Interval], outer: &[Interval]) -> bool {
    inner.len() == outer.len() && inner.iter().zip(outer).all(|(a, b)| a.is_subset_of(b))
}

pub fn box_intersects(a: &[Interval], b: &[Interval]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.intersect(y).is_some())
}

pub fn box_hull(a: &[Interval], b: &[Interval]) -> IBox {
    a.iter().zip(b).map(|(x, y)| x.hull(y)).collect()
}

pub fn box_mid(b: &[Interval]) -> Vec<Rational> {
    b.iter().map(Interval::mid).collect()
}

pub fn box_max_width(b: &[Interval]) -> Rational {
    b.iter().map(Interval::width).max().unwrap_or_else(Rational::zero)
}

/// `[-r, r]^dim`
pub fn cube(dim: usize, r: &Rational) -> IBox {
    vec![Interval::new(-r, r.clone()); dim]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::new(int(a), int(b))
    }

    #[test]
    fn even_power_of_straddling_interval() {
        assert_eq!(iv(-1, 2).powi(2), iv(0, 4));
        assert_eq!(iv(-3, -1).powi(2), iv(1, 9));
        assert_eq!(iv(-2, 1).powi(3), iv(-8, 1));
    }

    #[test]
    fn products_and_signs() {
        assert_eq!(&iv(-1, 2) * &iv(3, 4), iv(-4, 8));
        assert_eq!(iv(1, 2).sign(), Some(Ordering::Greater));
        assert_eq!(iv(-1, 2).sign(), None);
        assert_eq!(Interval::zero().sign(), Some(Ordering::Equal));
        assert!(iv(1, 2).is_interior_of(&iv(0, 3)));
        assert!(!iv(0, 2).is_interior_of(&iv(0, 3)));
        assert_eq!(iv(0, 1).intersect(&iv(2, 3)), None);
    }
}
