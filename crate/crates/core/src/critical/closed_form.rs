//! Critical points read off from the defining equations of each family.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{hessian_signature_at, nonzero, CriticalError, CriticalPoint, PointSource};
use crate::morsify::{CaseTag, MorsificationFamily};
use crate::poly::rational::{exact_root, fmt_rational, int, root_lower_bound};
use crate::poly::{Interval, Rational};

/// Bits of the dyadic enclosure of an irrational root.
const ROOT_BITS: u32 = 64;

/// One coordinate of a closed-form point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinate {
    Exact(Rational),
    /// `±radicand^(1/degree)` with `radicand > 0` not a perfect power.
    Radical {
        negative: bool,
        radicand: Rational,
        degree: u32,
    },
}

impl Coordinate {
    /// The real `degree`-th root of `value`; `value < 0` needs odd `degree`.
    pub fn real_root(value: &Rational, degree: u32) -> Coordinate {
        debug_assert!(!value.is_negative() || degree % 2 == 1);
        if let Some(r) = exact_root(value, degree) {
            return Coordinate::Exact(r);
        }
        Coordinate::Radical {
            negative: value.is_negative(),
            radicand: value.abs(),
            degree,
        }
    }

    pub fn negate(&self) -> Coordinate {
        match self {
            Coordinate::Exact(r) => Coordinate::Exact(-r),
            Coordinate::Radical {
                negative,
                radicand,
                degree,
            } => Coordinate::Radical {
                negative: !negative,
                radicand: radicand.clone(),
                degree: *degree,
            },
        }
    }

    /// Certified enclosure; a point interval when exact.
    pub fn enclosure(&self) -> Interval {
        match self {
            Coordinate::Exact(r) => Interval::point(r.clone()),
            Coordinate::Radical {
                negative,
                radicand,
                degree,
            } => {
                let lo = root_lower_bound(radicand, *degree, ROOT_BITS);
                let ulp = Rational::new(BigInt::one(), BigInt::one() << ROOT_BITS as usize);
                let hi = &lo + ulp;
                if *negative {
                    Interval::new(-hi, -lo)
                } else {
                    Interval::new(lo, hi)
                }
            }
        }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::Exact(r) => write!(f, "{}", fmt_rational(r)),
            Coordinate::Radical {
                negative,
                radicand,
                degree,
            } => write!(
                f,
                "{}({})^(1/{})",
                if *negative { "-" } else { "" },
                fmt_rational(radicand),
                degree
            ),
        }
    }
}

/// Planar `(x, y)` critical points of the curve part at `t0`.
fn planar_points(case: CaseTag, k: u32, t0: &Rational) -> Vec<[Coordinate; 2]> {
    let zero = || Coordinate::Exact(Rational::zero());
    match case {
        CaseTag::APlusOdd => vec![[Coordinate::real_root(t0, k), zero()]],
        CaseTag::AMinusOdd => {
            vec![[Coordinate::real_root(&(-t0 / int(k as i64 + 1)), k), zero()]]
        }
        CaseTag::DPlusOdd => {
            vec![[zero(), Coordinate::real_root(&(t0 / int(k as i64 - 1)), k - 2)]]
        }
        CaseTag::DMinusOdd => vec![[zero(), Coordinate::real_root(t0, k - 2)]],
        CaseTag::DMinusEven => {
            let y = Coordinate::real_root(t0, k - 2);
            vec![[zero(), y.negate()], [zero(), y]]
        }
        CaseTag::E7 => {
            let r = (t0 * t0 + t0) * int(3);
            vec![[
                Coordinate::Exact(-t0),
                Coordinate::real_root(&r, 3).negate(),
            ]]
        }
        CaseTag::APlusEven
        | CaseTag::AMinusEven
        | CaseTag::DPlusEven
        | CaseTag::E6
        | CaseTag::E8 => Vec::new(),
    }
}

/// Closed-form critical points of `f_{t0}` with certified signatures.
///
/// Tail coordinates of suspended germs are exactly 0.
pub fn closed_form_points(
    fam: &MorsificationFamily,
    t0: &Rational,
) -> Result<Vec<CriticalPoint>, CriticalError> {
    nonzero(t0)?;
    let f = fam.family_at(t0)?;
    let tail = fam.germ.dim() - 2;
    let k = fam.germ.kind.k().unwrap_or(0);
    planar_points(fam.case, k, t0)
        .into_iter()
        .map(|[x, y]| {
            let mut coords = vec![x, y];
            coords.extend((0..tail).map(|_| Coordinate::Exact(Rational::zero())));
            let location: Vec<Interval> = coords.iter().map(Coordinate::enclosure).collect();
            let signature = hessian_signature_at(&f, &location)?;
            Ok(CriticalPoint {
                location,
                exact: Some(coords),
                morse_index: signature.n_neg,
                certified: signature.n_zero == 0,
                signature,
                source: PointSource::ClosedForm,
            })
        })
        .collect()
}
