//! Every checker must be able to fail: run each one against a copy of the
//! digit matrices with a single corrupted entry in `A(1)`.

use sternpoly::verify::{corrupted_transitions, ReversalMode, Verifier};
use sternpoly::{BiPoly, Transitions};

fn broken() -> Verifier {
    Verifier::new().with_transitions(corrupted_transitions())
}

#[test]
fn corruption_is_a_single_entry_of_a1() {
    let good = Transitions::standard();
    let bad = corrupted_transitions();
    assert_eq!(good.get(0).unwrap(), bad.get(0).unwrap());
    let (g, b) = (good.get(1).unwrap(), bad.get(1).unwrap());
    let differing = (0..2)
        .flat_map(|r| (0..2).map(move |c| (r, c)))
        .filter(|&(r, c)| g.entry(r, c) != b.entry(r, c))
        .count();
    assert_eq!(differing, 1);
}

#[test]
fn reversal_polynomial_detects_corruption() {
    let r = broken()
        .check_reversal_range(1, 256, ReversalMode::Polynomial)
        .unwrap();
    assert!(r.failure_count >= 1, "{}", r.render_text());
}

#[test]
fn reversal_integer_detects_corruption() {
    let r = broken()
        .check_reversal_range(1, 256, ReversalMode::Integer)
        .unwrap();
    assert!(r.failure_count >= 1, "{}", r.render_text());
}

#[test]
fn lemma_detects_corruption() {
    assert!(broken().check_lemma_identities().failure_count >= 1);
    // the variant where the bottom-right 1 of A(1) becomes 2
    let bumped = Transitions::standard()
        .with_entry(1, 1, 1, BiPoly::constant(2))
        .unwrap();
    let r = Verifier::new()
        .with_transitions(bumped)
        .check_lemma_identities();
    assert!(r.failure_count >= 1);
}

#[test]
fn reflection_detects_corruption() {
    let r = broken().check_reflection_words(6).unwrap();
    assert!(r.failure_count >= 1, "{}", r.render_text());
}

#[test]
fn matrix_route_detects_corruption() {
    let r = broken().check_matrix_range(1, 255).unwrap();
    assert!(r.failure_count >= 1);
}

#[test]
fn oracle_detects_corruption() {
    let r = broken().check_oracle_equivalence(1, 64).unwrap();
    assert!(r.failure_count >= 1);
}

#[test]
fn continuant_detects_corruption() {
    let r = broken().check_continuant_range(1, 255).unwrap();
    assert!(r.failure_count >= 1);
}

#[test]
fn powers_clause_detects_corruption() {
    let r = broken().check_power_of_two_clause(64).unwrap();
    assert!(r.failure_count >= 1);
}
