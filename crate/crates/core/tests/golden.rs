mod common;

#[test]
fn golden_fixture_matches_oracle() {
    let problems = common::golden_mismatches();
    assert!(problems.is_empty(), "{}", problems.join("\n"));
}
