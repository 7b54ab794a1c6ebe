use milnor_core::critical::morse_report;
use milnor_core::germ::enumerate_catalog;
use milnor_core::predict::{betti_from_morse, predict_table, PoincarePolynomial, Status};

fn nonconstant_degree(p: &PoincarePolynomial) -> Option<u32> {
    match p {
        PoincarePolynomial::Empty => None,
        PoincarePolynomial::Poly(m) => m.keys().copied().find(|&e| e > 0).or(Some(0)),
    }
}

#[test]
fn morse_rule_reproduces_the_table() {
    let catalog = enumerate_catalog(20, 5);
    assert!(catalog.len() > 1000);
    for d in &catalog {
        let table = predict_table(d);
        let report = morse_report(d, None).unwrap();
        let rule = betti_from_morse(&report, d.n, d.s).unwrap();
        assert!(rule.same_values(&table), "{d}: rule {} vs table {}", rule.summary(), table.summary());
    }
}

#[test]
fn one_point_exponents_are_complementary() {
    for d in enumerate_catalog(12, 5) {
        let report = morse_report(&d, None).unwrap();
        let [lambda] = report.indices()[..] else { continue };
        let p = predict_table(&d);
        if p.status == Status::Unresolved {
            continue;
        }
        let plus = nonconstant_degree(p.beta_plus.as_ref().unwrap()).unwrap();
        let n = d.n as i64;
        // (n - λ) + (λ - 1) = n - 1, the minus side read as λ - 1 even when empty
        assert_eq!(plus as i64, n - lambda as i64, "{d}");
        match nonconstant_degree(p.beta_minus.as_ref().unwrap()) {
            Some(minus) => assert_eq!(plus as i64 + minus as i64, n - 1, "{d}"),
            None => assert_eq!(lambda, 0, "{d}"),
        }
    }
}

#[test]
fn unresolved_exactly_for_even_d_minus_suspensions() {
    for d in enumerate_catalog(20, 5) {
        let unresolved = predict_table(&d).status == Status::Unresolved;
        let expected = d.code().starts_with('D') && d.kind.sign().map(|s| s.symbol()) == Some('-')
            && d.kind.k().unwrap() % 2 == 0
            && d.n >= 2;
        assert_eq!(unresolved, expected, "{d}");
    }
}
