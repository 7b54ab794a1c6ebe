//! Critical points of morsified germs: closed-form locations, an independent
//! interval solver, certified Hessian signatures and Morse indices.

mod closed_form;
mod report;
mod signature;
mod solver;

use serde::Serialize;

use crate::germ::GermError;
use crate::morsify::MorsifyError;
use crate::poly::rational::fmt_rational;
use crate::poly::{IBox, PolyError, Rational};

pub use closed_form::{closed_form_points, Coordinate};
pub use report::{
    morse_report, morse_report_with, MorseReport, ReportOptions, SolverMode, DEFAULT_BOX_RADIUS,
};
pub use signature::{hessian_signature_at, interval_matrix_signature};
pub use solver::{
    certify_points, certify_points_with, Certificate, CertificateKind, Certification, ProofMethod,
    SolverOptions, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CriticalError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Morsify(#[from] MorsifyError),
    #[error("t0 = 0 gives the germ itself, whose critical point is degenerate")]
    DegenerateParameter,
    #[error("cannot certify the Hessian signature: {0}")]
    CannotCertify(String),
    #[error("empty search box")]
    EmptyBox,
}

/// Counts of positive, negative and zero Hessian eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.n_pos + self.n_neg + self.n_zero
    }

    /// Block-diagonal sum.
    pub fn plus(self, o: Signature) -> Signature {
        Signature {
            n_pos: self.n_pos + o.n_pos,
            n_neg: self.n_neg + o.n_neg,
            n_zero: self.n_zero + o.n_zero,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSource {
    ClosedForm,
    IntervalSolver,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPoint {
    /// Box certified to contain the point; a degenerate box when exact.
    pub location: IBox,
    /// Radical form of each coordinate, when known.
    pub exact: Option<Vec<Coordinate>>,
    /// `morse_index == signature.n_neg`.
    pub morse_index: usize,
    pub signature: Signature,
    /// Set only when `signature.n_zero == 0` was proven.
    pub certified: bool,
    pub source: PointSource,
}

impl CriticalPoint {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "location": self.location.iter()
                .map(|iv| [fmt_rational(iv.lo()), fmt_rational(iv.hi())])
                .collect::<Vec<_>>(),
            "exact": self.exact.as_ref()
                .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>()),
            "morse_index": self.morse_index,
            "signature": [self.signature.n_pos, self.signature.n_neg, self.signature.n_zero],
            "certified": self.certified,
            "source": self.source,
        })
    }

    /// Approximate coordinates (interval midpoints).
    pub fn approx(&self) -> Vec<f64> {
        self.location
            .iter()
            .map(|iv| crate::poly::rational::to_f64(&iv.mid()))
            .collect()
    }
}

/// Morse index of a suspended point: each negative square adds one.
pub fn suspend_index(curve_index: usize, s: usize) -> usize {
    curve_index + s
}

pub(crate) fn nonzero(t0: &Rational) -> Result<(), CriticalError> {
    use num_traits::Zero;
    if t0.is_zero() {
        Err(CriticalError::DegenerateParameter)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suspend_index_examples() {
        assert_eq!(suspend_index(0, 0), 0);
        assert_eq!(suspend_index(1, 3), 4);
        for s in 0..5 {
            assert_eq!(suspend_index(0, s), s);
        }
    }
}
