mod common;

use common::golden::{cases, check_all, expected_file_count, render, BLESS_ENV};

#[test]
fn outputs_match_expected_files() {
    let bless = std::env::var_os(BLESS_ENV).is_some();
    let bad = check_all(bless);
    assert!(bad.is_empty(), "golden mismatch in {bad:?}; rerun with {BLESS_ENV}=1 to regenerate");
    assert!(expected_file_count() >= 20);
}

#[test]
fn repeated_runs_are_identical() {
    for case in cases() {
        assert_eq!(render(&case), render(&case), "{}", case.name);
    }
}
