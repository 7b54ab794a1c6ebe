//! Per-germ aggregation: closed-form points checked against the interval
//! solver, with indices lifted through the quadratic tail.

use super::solver::{certify_points_with, Certification, SolverOptions};
use super::{
    closed_form_points, hessian_signature_at, nonzero, suspend_index, Coordinate, CriticalError,
    CriticalPoint,
};
use crate::germ::GermDescriptor;
use crate::morsify::{build_family, MorsificationFamily};
use crate::poly::interval::{box_subset, cube};
use crate::poly::rational::{fmt_rational, int};
use crate::poly::{Interval, Rational};

/// Half-width of the default search cube.
pub const DEFAULT_BOX_RADIUS: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverMode {
    /// Solve for the curve part and lift through the tail.
    Planar,
    /// Solve in all `n + 1` coordinates.
    Full,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub mode: SolverMode,
    pub solver: SolverOptions,
    /// Half-width of the initial search cube; doubled once if a closed-form
    /// point is not strictly inside.
    pub radius: Rational,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            mode: SolverMode::Planar,
            solver: SolverOptions::default(),
            radius: int(DEFAULT_BOX_RADIUS),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MorseReport {
    pub germ: GermDescriptor,
    pub t0: Rational,
    /// Points of `f_{t0}` in all spatial coordinates.
    pub points: Vec<CriticalPoint>,
    pub mode: SolverMode,
    pub search_radius: Rational,
    pub oracle_unique: usize,
    pub oracle_no_zero: usize,
    pub oracle_undecided: usize,
    pub boxes_processed: usize,
    pub closed_form_matches_oracle: bool,
    pub warnings: Vec<String>,
}

impl MorseReport {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.morse_index).collect()
    }

    /// Every point nondegenerate, the oracle complete and in agreement.
    pub fn certified(&self) -> bool {
        self.closed_form_matches_oracle
            && self.oracle_undecided == 0
            && self.points.iter().all(|p| p.certified)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": crate::SCHEMA_VERSION,
            "germ": self.germ.code(),
            "t0": fmt_rational(&self.t0),
            "count": self.count(),
            "indices": self.indices(),
            "points": self.points.iter().map(CriticalPoint::to_json).collect::<Vec<_>>(),
            "method": {
                "closed_form": "defining equations with dyadic root enclosures",
                "oracle": "krawczyk subdivision",
                "solver_mode": match self.mode { SolverMode::Planar => "planar_lift", SolverMode::Full => "full" },
                "search_box_radius": fmt_rational(&self.search_radius),
                "unique_zero_certificates": self.oracle_unique,
                "no_zero_certificates": self.oracle_no_zero,
                "undecided_regions": self.oracle_undecided,
                "boxes_processed": self.boxes_processed,
            },
            "closed_form_matches_oracle": self.closed_form_matches_oracle,
            "certified": self.certified(),
            "warnings": self.warnings,
        })
    }
}

/// Each closed-form enclosure sits in exactly one unique-zero certificate,
/// and no two points share one.
fn matches(points: &[CriticalPoint], cert: &Certification) -> bool {
    if !cert.is_complete() || cert.unique_count() != points.len() {
        return false;
    }
    let mut used = vec![false; points.len()];
    for p in points {
        let hits: Vec<usize> = cert
            .unique_zeros()
            .enumerate()
            .filter(|(_, c)| box_subset(&p.location, &c.bx))
            .map(|(i, _)| i)
            .collect();
        match hits.as_slice() {
            [i] if !used[*i] => used[*i] = true,
            _ => return false,
        }
    }
    true
}

fn strictly_inside_cube(points: &[CriticalPoint], r: &Rational) -> bool {
    let open = Interval::new(-r, r.clone());
    points
        .iter()
        .all(|p| p.location.iter().all(|iv| iv.is_interior_of(&open)))
}

pub fn morse_report(d: &GermDescriptor, t0: Option<Rational>) -> Result<MorseReport, CriticalError> {
    morse_report_with(d, t0, &ReportOptions::default())
}

pub fn morse_report_with(
    d: &GermDescriptor,
    t0: Option<Rational>,
    opts: &ReportOptions,
) -> Result<MorseReport, CriticalError> {
    let fam = build_family(d)?;
    let t0 = t0.unwrap_or_else(|| fam.representative_t());
    nonzero(&t0)?;
    let f = fam.family_at(&t0)?;
    let solved: MorsificationFamily = match opts.mode {
        SolverMode::Planar => build_family(&d.curve_part())?,
        SolverMode::Full => fam.clone(),
    };
    let solved_f = solved.family_at(&t0)?;
    let solved_points = closed_form_points(&solved, &t0)?;

    let mut warnings = Vec::new();
    let mut radius = opts.radius.clone();
    if !strictly_inside_cube(&solved_points, &radius) {
        let grown = &radius * int(2);
        let msg = format!(
            "closed-form point outside the open cube of radius {}; search box grown to radius {}",
            fmt_rational(&radius),
            fmt_rational(&grown)
        );
        log::warn!("{}: {msg}", d.code());
        warnings.push(msg);
        radius = grown;
    }
    let cert = certify_points_with(&solved_f, &cube(solved.germ.dim(), &radius), &opts.solver)?;
    let agree = matches(&solved_points, &cert);
    if !cert.is_complete() {
        warnings.push(format!(
            "{} undecided region(s) after {} boxes",
            cert.undecided.len(),
            cert.boxes_processed
        ));
    }

    let tail = d.dim() - solved.germ.dim();
    let mut points = Vec::with_capacity(solved_points.len());
    for p in solved_points {
        let mut location = p.location.clone();
        location.extend((0..tail).map(|_| Interval::zero()));
        let exact = p.exact.clone().map(|mut c| {
            c.extend((0..tail).map(|_| Coordinate::Exact(int(0))));
            c
        });
        let signature = hessian_signature_at(&f, &location)?;
        let lifted = suspend_index(p.morse_index, if tail > 0 { d.s as usize } else { 0 });
        if lifted != signature.n_neg {
            warnings.push(format!(
                "lifted index {lifted} disagrees with the full Hessian index {}",
                signature.n_neg
            ));
        }
        points.push(CriticalPoint {
            location,
            exact,
            morse_index: signature.n_neg,
            certified: signature.n_zero == 0 && lifted == signature.n_neg,
            signature,
            source: p.source,
        });
    }

    Ok(MorseReport {
        germ: *d,
        t0,
        points,
        mode: opts.mode,
        search_radius: radius,
        oracle_unique: cert.unique_count(),
        oracle_no_zero: cert.no_zero_count(),
        oracle_undecided: cert.undecided.len(),
        boxes_processed: cert.boxes_processed,
        closed_form_matches_oracle: agree,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(code: &str) -> MorseReport {
        morse_report(&code.parse().unwrap(), None).unwrap()
    }

    #[test]
    fn report_examples() {
        let r = report("D5+s0n1");
        assert_eq!((r.count(), r.indices()), (1, vec![1]));
        assert!(r.closed_form_matches_oracle && r.certified());
        assert_eq!(report("D4+s0n1").count(), 0);
        assert_eq!(report("A2-s0n1").count(), 0);
        assert_eq!(report("E8s0n1").count(), 0);
        assert!(report("E8s0n1").certified());
    }

    #[test]
    fn suspended_index_shift() {
        let r = report("A3+s2n3");
        assert_eq!(r.indices(), vec![2]);
        assert_eq!(r.points[0].location.len(), 4);
        assert!(r.certified());
    }

    #[test]
    fn full_and_planar_modes_agree() {
        let d: GermDescriptor = "D6-s1n2".parse().unwrap();
        let full = ReportOptions { mode: SolverMode::Full, ..ReportOptions::default() };
        let a = morse_report(&d, None).unwrap();
        let b = morse_report_with(&d, None, &full).unwrap();
        assert_eq!(a.indices(), b.indices());
        assert!(a.certified() && b.certified());
    }

    #[test]
    fn json_fields() {
        let j = report("A3-s0n1").to_json();
        assert_eq!(j["t0"], "-1/2");
        assert_eq!(j["indices"], serde_json::json!([1]));
        assert_eq!(j["closed_form_matches_oracle"], true);
    }
}
