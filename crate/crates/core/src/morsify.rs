//! One-parameter morsifications `F(x, y, t)` of the catalog germs.
//!
//! Each curve germ gets a fixed deformation, linear in `t`, chosen by family
//! and the parity of `k`; suspended germs carry the quadratic tail unchanged.
//! The admissible parameter interval always has `0` as a closed endpoint.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::germ::{GermDescriptor, GermError, GermKind, Sign};
use crate::poly::rational::{fmt_rational, frac, int, pow, root_lower_bound};
use crate::poly::{MultiPoly, PolyError, Rational};

/// Name of the deformation parameter in every family polynomial.
pub const PARAM: &str = "t";

/// Lower end of a parameter interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Rational(Rational),
    /// `-(base^(1/degree))` with `base > 0`; compared by exact powers.
    NegRoot { base: Rational, degree: u32 },
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Rational(r) => write!(f, "{}", fmt_rational(r)),
            Endpoint::NegRoot { base, degree } => {
                write!(f, "-({})^(1/{})", fmt_rational(base), degree)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamInterval {
    pub lo: Endpoint,
    pub hi: Rational,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl ParamInterval {
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        ParamInterval {
            lo: Endpoint::Rational(lo),
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    /// Exact membership test.
    pub fn contains(&self, t: &Rational) -> bool {
        let above_lo = match &self.lo {
            Endpoint::Rational(l) if self.lo_open => t > l,
            Endpoint::Rational(l) => t >= l,
            Endpoint::NegRoot { base, degree } => {
                if !t.is_negative() {
                    true
                } else if self.lo_open {
                    pow(&-t, *degree) < *base
                } else {
                    pow(&-t, *degree) <= *base
                }
            }
        };
        let below_hi = if self.hi_open { *t < self.hi } else { *t <= self.hi };
        above_lo && below_hi
    }

    /// `true` when the interval lies on the positive side of 0.
    pub fn is_positive_side(&self) -> bool {
        self.hi.is_positive()
    }

    /// A rational lower bound on the interval's width.
    pub fn width_lower_bound(&self) -> Rational {
        match &self.lo {
            Endpoint::Rational(l) => &self.hi - l,
            Endpoint::NegRoot { base, degree } => &self.hi + root_lower_bound(base, *degree, 16),
        }
    }
}

impl fmt::Display for ParamInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            fmt_rational(&self.hi),
            if self.hi_open { ')' } else { ']' }
        )
    }
}

/// Which deformation branch produced a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    APlusEven,
    APlusOdd,
    AMinusEven,
    AMinusOdd,
    DPlusEven,
    DPlusOdd,
    DMinusOdd,
    DMinusEven,
    E6,
    E7,
    E8,
}

impl CaseTag {
    pub fn describe(&self) -> &'static str {
        match self {
            CaseTag::APlusEven => "A_k^+, k even: x^{k+1} + t x + y^2, t in [0,1]",
            CaseTag::APlusOdd => "A_k^+, k odd: x^{k+1} - (k+1) t x + y^2, t in [0,1]",
            CaseTag::AMinusEven => "A_k^-, k even: x^{k+1} + t x - y^2, t in [0,1]",
            CaseTag::AMinusOdd => "A_k^-, k odd: x^{k+1} + t x - y^2, t in [-1,0]",
            CaseTag::DPlusEven => "D_k^+, k even: x^2 y + 2t x^2 + y^{k-1} - t y, t in [-1,0]",
            CaseTag::DPlusOdd => "D_k^+, k odd: x^2 y + 2t x^2 + y^{k-1} - t y, t in I",
            CaseTag::DMinusOdd => "D_k^-, k odd: x^2 y - y^{k-1} + (k-1) t y, t in [0,1]",
            CaseTag::DMinusEven => "D_k^-, k even: x^2 y - y^{k-1} + (k-1) t y, t in [0,1]",
            CaseTag::E6 => "E_6^±: x^3 + 3t x ± y^4, t in [0,1]",
            CaseTag::E7 => "E_7: x^3 + 3t x + x y^3 + t y^3, t in [0,1]",
            CaseTag::E8 => "E_8: x^3 + 3t x + y^5, t in [0,1]",
        }
    }

    pub fn for_kind(kind: GermKind) -> CaseTag {
        let even = |k: u32| k % 2 == 0;
        match kind {
            GermKind::A { k, sign: Sign::Plus } if even(k) => CaseTag::APlusEven,
            GermKind::A { sign: Sign::Plus, .. } => CaseTag::APlusOdd,
            GermKind::A { k, sign: Sign::Minus } if even(k) => CaseTag::AMinusEven,
            GermKind::A { sign: Sign::Minus, .. } => CaseTag::AMinusOdd,
            GermKind::D { k, sign: Sign::Plus } if even(k) => CaseTag::DPlusEven,
            GermKind::D { sign: Sign::Plus, .. } => CaseTag::DPlusOdd,
            GermKind::D { k, sign: Sign::Minus } if even(k) => CaseTag::DMinusEven,
            GermKind::D { sign: Sign::Minus, .. } => CaseTag::DMinusOdd,
            GermKind::E6 { .. } => CaseTag::E6,
            GermKind::E7 => CaseTag::E7,
            GermKind::E8 => CaseTag::E8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorsifyError {
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("t = {t} lies outside the admissible interval {interval}")]
    OutsideInterval { t: String, interval: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorsificationFamily {
    pub germ: GermDescriptor,
    /// `F` over the spatial variables followed by `t`.
    pub deformed: MultiPoly,
    pub interval: ParamInterval,
    pub case: CaseTag,
}

fn curve_deformation(kind: GermKind) -> (String, ParamInterval) {
    let unit = ParamInterval::closed(int(0), int(1));
    let neg_unit = ParamInterval::closed(int(-1), int(0));
    match kind {
        GermKind::A { k, sign } => {
            let sq = if sign == Sign::Plus { "+ y^2" } else { "- y^2" };
            match (sign, k % 2 == 0) {
                (Sign::Plus, false) => (format!("x^{} - {}*t*x {sq}", k + 1, k + 1), unit),
                (Sign::Minus, false) => (format!("x^{} + t*x {sq}", k + 1), neg_unit),
                (_, true) => (format!("x^{} + t*x {sq}", k + 1), unit),
            }
        }
        GermKind::D { k, sign: Sign::Plus } => {
            let poly = format!("x^2*y + 2*t*x^2 + y^{} - t*y", k - 1);
            if k % 2 == 0 {
                (poly, neg_unit)
            } else {
                let interval = ParamInterval {
                    lo: Endpoint::NegRoot {
                        base: frac(1, (k as i64 - 1) << (k - 2)),
                        degree: k - 3,
                    },
                    hi: int(0),
                    lo_open: true,
                    hi_open: false,
                };
                (poly, interval)
            }
        }
        GermKind::D { k, sign: Sign::Minus } => {
            (format!("x^2*y - y^{} + {}*t*y", k - 1, k - 1), unit)
        }
        GermKind::E6 { sign } => {
            let q = if sign == Sign::Plus { "+ y^4" } else { "- y^4" };
            (format!("x^3 + 3*t*x {q}"), unit)
        }
        GermKind::E7 => ("x^3 + 3*t*x + x*y^3 + t*y^3".into(), unit),
        GermKind::E8 => ("x^3 + 3*t*x + y^5".into(), unit),
    }
}

/// The morsification of `d`: the curve family plus the unchanged quadratic tail.
pub fn build_family(d: &GermDescriptor) -> Result<MorsificationFamily, MorsifyError> {
    d.validate()?;
    let mut vars = d.variables();
    vars.push(PARAM.to_string());
    let (text, interval) = curve_deformation(d.kind);
    let curve = MultiPoly::parse(&text, &vars)?;
    Ok(MorsificationFamily {
        germ: *d,
        deformed: &curve + &d.quadratic_tail(&vars),
        interval,
        case: CaseTag::for_kind(d.kind),
    })
}

impl MorsificationFamily {
    pub fn spatial_variables(&self) -> Vec<String> {
        self.germ.variables()
    }

    /// `f_{t0}` over the spatial variables.
    pub fn family_at(&self, t0: &Rational) -> Result<MultiPoly, MorsifyError> {
        if !self.interval.contains(t0) {
            return Err(MorsifyError::OutsideInterval {
                t: fmt_rational(t0),
                interval: self.interval.to_string(),
            });
        }
        Ok(self.deformed.substitute(PARAM, t0)?)
    }

    /// Canonical nonzero parameter strictly inside the interval.
    pub fn representative_t(&self) -> Rational {
        if self.case == CaseTag::E7 {
            return frac(1, 10);
        }
        match &self.interval.lo {
            Endpoint::NegRoot { base, degree } => -root_lower_bound(base, *degree, 16) * frac(1, 2),
            Endpoint::Rational(lo) => (lo + &self.interval.hi) * frac(1, 2),
        }
    }

    /// The tail part `F - F(.., t=0)`, i.e. the pure deformation terms.
    pub fn deformation_terms(&self) -> Result<MultiPoly, MorsifyError> {
        let at_zero = self.deformed.substitute(PARAM, &Rational::zero())?;
        let lifted = at_zero.with_variables(self.deformed.variables())?;
        Ok(&self.deformed - &lifted)
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            schema_version: crate::SCHEMA_VERSION,
            germ: self.germ.code(),
            case: self.case,
            case_description: self.case.describe().to_string(),
            variables: self.deformed.variables().to_vec(),
            polynomial: self.deformed.to_string(),
            germ_polynomial: self.germ.build_germ().map(|g| g.to_string()).unwrap_or_default(),
            interval: IntervalJson {
                lo: self.interval.lo.to_string(),
                hi: fmt_rational(&self.interval.hi),
                lo_open: self.interval.lo_open,
                hi_open: self.interval.hi_open,
                display: self.interval.to_string(),
            },
            representative_t: fmt_rational(&self.representative_t()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
    pub lo_open: bool,
    pub hi_open: bool,
    pub display: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyJson {
    pub schema_version: u32,
    pub germ: String,
    pub case: CaseTag,
    pub case_description: String,
    pub variables: Vec<String>,
    pub polynomial: String,
    pub germ_polynomial: String,
    pub interval: IntervalJson,
    pub representative_t: String,
}
