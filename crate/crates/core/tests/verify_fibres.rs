use milnor_core::germ::{enumerate_catalog, GermDescriptor};
use milnor_core::verify::{compare_with, verify_germ, Outcome, Side, VerifyOptions};

fn code(s: &str) -> GermDescriptor {
    s.parse().unwrap()
}

/// Coarser than the defaults to keep the suite quick; the sweep still runs.
fn quick() -> VerifyOptions {
    VerifyOptions {
        resolution: Some(128),
        ..VerifyOptions::default()
    }
}

#[test]
fn planar_readings_are_manifold_and_torsion_free() {
    for d in enumerate_catalog(5, 1) {
        let v = compare_with(&d, &Side::BOTH, &quick()).unwrap();
        assert_eq!(v.outcome, Outcome::Match, "{d}");
        for r in [v.plus.unwrap(), v.minus.unwrap()] {
            assert!(r.stable, "{d}");
            assert_eq!(r.euler, r.euler_from_betti(), "{d}");
            for reading in &r.readings {
                assert_eq!(reading.manifold, Some(true), "{d}");
                assert!(reading.torsion.iter().all(Vec::is_empty), "{d}");
                assert_eq!(reading.flagged_cells, 0, "{d}");
            }
        }
    }
}

#[test]
fn documented_examples() {
    assert_eq!(verify_germ(&code("A3-s0n1"), Side::Plus).unwrap().betti, vec![2, 0]);
    let d4 = verify_germ(&code("D4-s0n1"), Side::Plus).unwrap();
    assert_eq!(d4.betti.iter().sum::<u64>(), 3);
    let a3 = verify_germ(&code("A3+s0n2"), Side::Plus).unwrap();
    assert_eq!(a3.betti, vec![1, 0, 1]);
    assert!(a3.stable);
}

#[test]
fn unresolved_descriptors_are_explored_not_judged() {
    let v = compare_with(&code("D4-s1n2"), &[Side::Minus], &quick()).unwrap();
    assert_eq!(v.outcome, Outcome::UnresolvedExplored);
    assert!(v.plus.is_none() && v.observed_minus.is_some());
}

#[test]
fn four_variables_are_rejected() {
    assert!(verify_germ(&code("A3+s0n3"), Side::Plus).is_err());
}
