//! Independent check of predicted Betti numbers: mesh the fibre
//! `f^{-1}(±η) ∩ B̄_ε` on a grid with exact vertex signs and compute its
//! integer homology.
//!
//! Level choice: `η = ε^deg / 16` with `deg` the germ's total degree. The
//! germs are (semi-)quasi-homogeneous, so the level set of `f = η` reaches
//! distance about `η^{1/deg}` from the origin; keeping that a fixed fraction
//! of `ε` keeps the fibre well inside the ball at every scale. A fixed
//! `η = ε/16` would push the high-degree fibres out of the ball entirely.

pub mod complex;
pub mod homology;
pub mod mesh;
mod signs;
pub mod svg;

use std::fmt;
use std::str::FromStr;

use log::{debug, warn};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::germ::{GermDescriptor, GermError};
use crate::poly::rational::{fmt_rational, frac, int, pow};
use crate::poly::{MultiPoly, Rational};
use crate::predict::{predict_table, PoincarePolynomial, Prediction, Status};
use crate::SCHEMA_VERSION;

pub use complex::{CellComplex, ComplexError, SimplicialBuilder};
pub use homology::{homology, Homology};
pub use mesh::FibreMesh;
pub use svg::render_svg;

pub const DEFAULT_RESOLUTION_2D: usize = 512;
pub const DEFAULT_RESOLUTION_3D: usize = 96;
/// Refinement stops here.
pub const MAX_RESOLUTION_2D: usize = 4096;
pub const MAX_RESOLUTION_3D: usize = 256;
pub const MIN_RESOLUTION: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Plus, Side::Minus];

    pub fn factor(self) -> i64 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

impl FromStr for Side {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" | "positive" => Ok(Side::Plus),
            "minus" | "-" | "negative" => Ok(Side::Minus),
            _ => Err(VerifyError::InvalidSpec(format!("unknown side '{s}'"))),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("invalid fibre parameters: {0}")]
    InvalidSpec(String),
    #[error("meshing needs 2 or 3 variables, got {0}")]
    UnsupportedDimension(usize),
    #[error("resolution {resolution} insufficient: {flagged} cells cannot exclude a tangency")]
    ResolutionInsufficient { resolution: usize, flagged: usize },
    #[error("{code} ({side}): Betti numbers {first:?} and {second:?} disagree under refinement")]
    Unstable {
        code: String,
        side: Side,
        first: Vec<u64>,
        second: Vec<u64>,
    },
}

/// The fibre `{f = ±η} ∩ B̄_ε` sampled with `resolution` cells per axis.
#[derive(Clone, Debug)]
pub struct FibreSpec {
    pub polynomial: MultiPoly,
    pub side: Side,
    pub epsilon: Rational,
    pub eta: Rational,
    pub resolution: usize,
}

impl FibreSpec {
    /// `0 < η ≤ ε/8`, `resolution ≥ 16`, two or three variables.
    pub fn validate(&self) -> Result<(), VerifyError> {
        let dim = self.polynomial.nvars();
        if !(2..=3).contains(&dim) {
            return Err(VerifyError::UnsupportedDimension(dim));
        }
        if !self.epsilon.is_positive() {
            return Err(VerifyError::InvalidSpec(format!("epsilon {} must be positive", self.epsilon)));
        }
        if !self.eta.is_positive() || self.eta > &self.epsilon / int(8) {
            return Err(VerifyError::InvalidSpec(format!(
                "eta {} must lie in (0, epsilon/8]",
                self.eta
            )));
        }
        if self.resolution < MIN_RESOLUTION || self.resolution > signs::MAX_RESOLUTION {
            return Err(VerifyError::InvalidSpec(format!(
                "resolution {} outside [{MIN_RESOLUTION}, {}]",
                self.resolution,
                signs::MAX_RESOLUTION
            )));
        }
        Ok(())
    }

    /// `+η` or `-η`.
    pub fn level(&self) -> Rational {
        &self.eta * int(self.side.factor())
    }

    pub fn dim(&self) -> usize {
        self.polynomial.nvars()
    }

    pub fn params(&self) -> MeshParams {
        MeshParams {
            side: self.side,
            epsilon: fmt_rational(&self.epsilon),
            eta: fmt_rational(&self.eta),
            resolution: self.resolution,
            dim: self.dim(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshParams {
    pub side: Side,
    pub epsilon: String,
    pub eta: String,
    pub resolution: usize,
    pub dim: usize,
}

/// One mesh and its homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reading {
    pub params: MeshParams,
    pub betti: Vec<u64>,
    pub euler: i64,
    pub cell_counts: Vec<usize>,
    /// Invariant factors `> 1` per degree.
    pub torsion: Vec<Vec<String>>,
    pub flagged_cells: usize,
    /// Planar meshes only: interior vertices all have degree 2.
    pub manifold: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    pub schema_version: u32,
    /// `b_0, .., b_top`.
    pub betti: Vec<u64>,
    pub euler: i64,
    /// Invariant factors `> 1` per degree.
    pub torsion: Vec<Vec<String>>,
    /// Parameters of the primary reading, absent for bare complexes.
    pub params: Option<MeshParams>,
    pub stable: bool,
    /// Every mesh computed, primary first.
    pub readings: Vec<Reading>,
}

impl BettiReport {
    /// `Σ b_i u^i`; `EMPTY` when all Betti numbers vanish.
    pub fn poincare(&self) -> PoincarePolynomial {
        PoincarePolynomial::from_betti(&self.betti)
    }

    pub fn euler_from_betti(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Meshes the fibre; fails when some cell cannot exclude a tangency.
pub fn mesh_fibre(spec: &FibreSpec) -> Result<FibreMesh, VerifyError> {
    let m = mesh_fibre_unchecked(spec)?;
    if m.flagged_cells > 0 {
        return Err(VerifyError::ResolutionInsufficient {
            resolution: spec.resolution,
            flagged: m.flagged_cells,
        });
    }
    Ok(m)
}

/// Meshes the fibre and reports flagged cells instead of failing.
pub fn mesh_fibre_unchecked(spec: &FibreSpec) -> Result<FibreMesh, VerifyError> {
    spec.validate()?;
    let grid = signs::LevelGrid::new(&spec.polynomial, &spec.level(), &spec.epsilon, spec.resolution);
    let m = mesh::extract(&grid)?;
    debug!(
        "meshed {} side {} at N = {}: {:?} cells, {} mixed, {} exact signs, {} flagged",
        spec.polynomial,
        spec.side,
        spec.resolution,
        m.complex.counts(),
        m.mixed_cells,
        m.exact_evaluations,
        m.flagged_cells
    );
    Ok(m)
}

/// Homology of a bare complex; `stable` is false since nothing was refined.
pub fn betti_numbers(c: &CellComplex) -> BettiReport {
    let h = homology(c);
    debug_assert_eq!(h.euler, h.euler_from_betti());
    BettiReport {
        schema_version: SCHEMA_VERSION,
        betti: h.betti,
        euler: h.euler,
        torsion: h.torsion,
        params: None,
        stable: false,
        readings: Vec::new(),
    }
}

fn pad(mut v: Vec<u64>, len: usize) -> Vec<u64> {
    v.resize(len.max(v.len()), 0);
    v
}

fn read(spec: &FibreSpec) -> Result<Reading, VerifyError> {
    let m = mesh_fibre_unchecked(spec)?;
    let h = homology(&m.complex);
    // fibre dimension is one less than the ambient one
    let betti = pad(h.betti, spec.dim());
    Ok(Reading {
        params: spec.params(),
        betti,
        euler: h.euler,
        cell_counts: m.complex.counts(),
        torsion: h.torsion,
        flagged_cells: m.flagged_cells,
        manifold: (m.dim == 2).then(|| m.is_planar_manifold()),
    })
}

/// Knobs for [`verify_germ_with`]; defaults reproduce [`verify_germ`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub epsilon: Rational,
    /// `None`: `ε^deg / 16`.
    pub eta: Option<Rational>,
    /// `None`: 512 in the plane, 96 in space.
    pub resolution: Option<usize>,
    /// Compare against `(ε/2, η/2^deg, 2N)`.
    pub sweep: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            epsilon: frac(1, 2),
            eta: None,
            resolution: None,
            sweep: true,
        }
    }
}

/// `ε^deg / 16`.
pub fn default_eta(epsilon: &Rational, degree: u32) -> Rational {
    pow(epsilon, degree) / int(16)
}

pub fn default_resolution(dim: usize) -> usize {
    if dim == 2 {
        DEFAULT_RESOLUTION_2D
    } else {
        DEFAULT_RESOLUTION_3D
    }
}

pub fn max_resolution(dim: usize) -> usize {
    if dim == 2 {
        MAX_RESOLUTION_2D
    } else {
        MAX_RESOLUTION_3D
    }
}

/// Reading at `spec`, refining once if cells are flagged.
fn read_refining(spec: &FibreSpec) -> Result<Reading, VerifyError> {
    let r = read(spec)?;
    let cap = max_resolution(spec.dim()).max(spec.resolution);
    if r.flagged_cells == 0 || 2 * spec.resolution > cap {
        return Ok(r);
    }
    debug!("{} flagged cells at N = {}, refining", r.flagged_cells, spec.resolution);
    read(&FibreSpec {
        resolution: 2 * spec.resolution,
        ..spec.clone()
    })
}

pub fn verify_germ(d: &GermDescriptor, side: Side) -> Result<BettiReport, VerifyError> {
    verify_germ_with(d, side, &VerifyOptions::default())
}

/// Meshes the fibre of `d` at two scales. `stable` holds when both agree,
/// after at most one retry at doubled resolution.
pub fn verify_germ_with(d: &GermDescriptor, side: Side, opts: &VerifyOptions) -> Result<BettiReport, VerifyError> {
    let dim = d.dim();
    if !(2..=3).contains(&dim) {
        return Err(VerifyError::UnsupportedDimension(dim));
    }
    let f = d.build_germ()?;
    let deg = d.degree();
    let eta = opts.eta.clone().unwrap_or_else(|| default_eta(&opts.epsilon, deg));
    let base = FibreSpec {
        polynomial: f,
        side,
        epsilon: opts.epsilon.clone(),
        eta,
        resolution: opts.resolution.unwrap_or_else(|| default_resolution(dim)),
    };
    base.validate()?;
    if !opts.sweep {
        let r = read_refining(&base)?;
        return Ok(report_from(vec![r], false));
    }
    let cap = max_resolution(dim).max(2 * base.resolution);
    let halved = |s: &FibreSpec| FibreSpec {
        epsilon: &s.epsilon / int(2),
        eta: &s.eta / pow(&int(2), deg),
        resolution: 2 * s.resolution,
        ..s.clone()
    };
    let pair = |s: &FibreSpec| -> Result<(Reading, Reading), VerifyError> {
        let (a, b) = rayon::join(|| read_refining(s), || read_refining(&halved(s)));
        Ok((a?, b?))
    };
    let (a, b) = pair(&base)?;
    if a.betti == b.betti {
        return Ok(report_from(vec![a, b], true));
    }
    let finer = FibreSpec {
        resolution: (2 * base.resolution).min(cap / 2),
        ..base.clone()
    };
    if finer.resolution <= base.resolution {
        warn!("{d} {side}: readings {:?} and {:?} disagree at maximal resolution", a.betti, b.betti);
        return Ok(report_from(vec![a, b], false));
    }
    debug!("{d} {side}: {:?} vs {:?}, retrying at N = {}", a.betti, b.betti, finer.resolution);
    let (c, e) = pair(&finer)?;
    let stable = c.betti == e.betti;
    if !stable {
        warn!("{d} {side}: readings {:?} and {:?} disagree after refinement", c.betti, e.betti);
    }
    Ok(report_from(vec![c, e, a, b], stable))
}

fn report_from(readings: Vec<Reading>, stable: bool) -> BettiReport {
    let first = &readings[0];
    BettiReport {
        schema_version: SCHEMA_VERSION,
        betti: first.betti.clone(),
        euler: first.euler,
        torsion: first.torsion.clone(),
        params: Some(first.params.clone()),
        stable,
        readings,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Match,
    Mismatch,
    UnresolvedExplored,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Match => "match",
            Outcome::Mismatch => "mismatch",
            Outcome::UnresolvedExplored => "unresolved_explored",
        })
    }
}

/// Predicted against observed Betti data for one or both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationVerdict {
    pub schema_version: u32,
    pub germ_code: String,
    pub n: u32,
    pub s: u32,
    pub outcome: Outcome,
    pub predicted: Prediction,
    pub observed_plus: Option<PoincarePolynomial>,
    pub observed_minus: Option<PoincarePolynomial>,
    pub plus: Option<BettiReport>,
    pub minus: Option<BettiReport>,
}

impl VerificationVerdict {
    pub fn is_match(&self) -> bool {
        self.outcome == Outcome::Match
    }
}

/// Both sides at default parameters.
pub fn compare(d: &GermDescriptor) -> Result<VerificationVerdict, VerifyError> {
    compare_with(d, &Side::BOTH, &VerifyOptions::default())
}

/// Verdict over `sides`. Resolved descriptors need stable readings when a
/// sweep ran (a single unswept reading is taken as is); unresolved ones are
/// reported as explored whatever the readings.
pub fn compare_with(d: &GermDescriptor, sides: &[Side], opts: &VerifyOptions) -> Result<VerificationVerdict, VerifyError> {
    let predicted = predict_table(d);
    let want = |s: Side| sides.contains(&s);
    let run = |s: Side| want(s).then(|| verify_germ_with(d, s, opts)).transpose();
    let (plus, minus) = rayon::join(|| run(Side::Plus), || run(Side::Minus));
    let (plus, minus) = (plus?, minus?);
    let resolved = predicted.status == Status::Resolved;
    let mut outcome = if resolved { Outcome::Match } else { Outcome::UnresolvedExplored };
    for (side, report, expected) in [
        (Side::Plus, &plus, &predicted.beta_plus),
        (Side::Minus, &minus, &predicted.beta_minus),
    ] {
        let (Some(r), true) = (report, resolved) else { continue };
        if !r.stable && r.readings.len() > 1 {
            let first = r.readings.first().map(|x| x.betti.clone()).unwrap_or_default();
            let second = r.readings.get(1).map(|x| x.betti.clone()).unwrap_or_default();
            return Err(VerifyError::Unstable {
                code: d.code(),
                side,
                first,
                second,
            });
        }
        if Some(r.poincare()) != *expected {
            outcome = Outcome::Mismatch;
        }
    }
    Ok(VerificationVerdict {
        schema_version: SCHEMA_VERSION,
        germ_code: d.code(),
        n: d.n,
        s: d.s,
        outcome,
        observed_plus: plus.as_ref().map(BettiReport::poincare),
        observed_minus: minus.as_ref().map(BettiReport::poincare),
        predicted,
        plus,
        minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(expr: &str, side: Side) -> FibreSpec {
        FibreSpec {
            polynomial: MultiPoly::parse(expr, &["x", "y"]).unwrap(),
            side,
            epsilon: frac(1, 2),
            eta: frac(1, 1024),
            resolution: 64,
        }
    }

    #[test]
    fn spec_invariants_are_enforced() {
        let ok = spec("x^4 + y^2", Side::Plus);
        ok.validate().unwrap();
        let big_eta = FibreSpec { eta: frac(1, 10), ..ok.clone() };
        assert!(matches!(big_eta.validate(), Err(VerifyError::InvalidSpec(_))));
        let coarse = FibreSpec { resolution: 8, ..ok.clone() };
        assert!(coarse.validate().is_err());
        let line = FibreSpec {
            polynomial: MultiPoly::parse("x^2", &["x"]).unwrap(),
            ..ok
        };
        assert!(matches!(line.validate(), Err(VerifyError::UnsupportedDimension(1))));
    }

    #[test]
    fn nonnegative_germ_has_empty_minus_fibre() {
        let m = mesh_fibre(&spec("x^4 + y^2", Side::Minus)).unwrap();
        assert!(m.complex.is_empty());
        let r = betti_numbers(&m.complex);
        assert!(r.betti.iter().all(|&b| b == 0));
        assert_eq!(r.poincare(), PoincarePolynomial::Empty);
    }

    #[test]
    fn quartic_plus_fibre_is_one_loop() {
        let m = mesh_fibre(&spec("x^4 + y^2", Side::Plus)).unwrap();
        assert!(m.is_planar_manifold());
        assert!(m.on_sphere.iter().all(|&s| !s));
        assert_eq!(betti_numbers(&m.complex).betti, vec![1, 1]);
    }

    #[test]
    fn cusp_plus_fibre_is_an_arc_ending_on_the_circle() {
        let m = mesh_fibre(&spec("x^3 + y^2", Side::Plus)).unwrap();
        assert!(m.is_planar_manifold());
        assert_eq!(m.on_sphere.iter().filter(|&&s| s).count(), 2);
        assert_eq!(betti_numbers(&m.complex).betti, vec![1, 0]);
        let svg = render_svg(&m, 0.5, "x^3 + y^2 = +eta").unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<line"));
    }

    #[test]
    fn tiny_sphere_in_space() {
        let s = FibreSpec {
            polynomial: MultiPoly::parse("x^2 + y^2 + z^2", &["x", "y", "z"]).unwrap(),
            side: Side::Plus,
            epsilon: frac(1, 2),
            eta: frac(1, 64),
            resolution: 16,
        };
        let m = mesh_fibre(&s).unwrap();
        let r = betti_numbers(&m.complex);
        assert_eq!(r.betti, vec![1, 0, 1]);
        assert_eq!(r.euler, 2);
        assert!(render_svg(&m, 0.5, "").is_none());
    }

    #[test]
    fn flat_level_sets_are_flagged() {
        // f = x^2 y^2 has critical points along both axes, where f = 0
        let s = FibreSpec {
            eta: frac(1, 1 << 30),
            ..spec("x^2*y^2", Side::Plus)
        };
        assert!(matches!(mesh_fibre(&s), Err(VerifyError::ResolutionInsufficient { .. })));
        assert!(mesh_fibre_unchecked(&s).unwrap().flagged_cells > 0);
    }

    #[test]
    fn side_round_trips() {
        for s in Side::BOTH {
            assert_eq!(s.to_string().parse::<Side>().unwrap(), s);
        }
        assert!("sideways".parse::<Side>().is_err());
    }
}
