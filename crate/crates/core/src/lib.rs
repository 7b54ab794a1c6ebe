//! Real Milnor fibres of ADE singularities: germs and their morsifications,
//! certified critical points, predicted Betti numbers, and an independent
//! mesh-and-homology check of those predictions.

pub mod critical;
pub mod germ;
pub mod morsify;
pub mod poly;
pub mod predict;
pub mod verify;

pub use critical::{morse_report, CriticalError, MorseReport};
pub use germ::{enumerate_catalog, GermDescriptor, GermError, GermKind, Sign};
pub use morsify::{build_family, MorsificationFamily, MorsifyError};
pub use poly::{MultiPoly, PolyError, Rational};
pub use predict::{predict_table, PoincarePolynomial, PredictError, Prediction};
pub use verify::{compare, verify_germ, BettiReport, Side, VerificationVerdict, VerifyError};

/// Version tag carried by every machine-readable output.
pub const SCHEMA_VERSION: u32 = 1;

/// Any failure of the library, for callers that do not care which stage.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Morsify(#[from] MorsifyError),
    #[error(transparent)]
    Critical(#[from] CriticalError),
    #[error(transparent)]
    Predict(#[from] PredictError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}
