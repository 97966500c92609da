use abelcover::suites::{run_suite, w1_box_count, SuiteConfig, SUITES};
use abelcover::Error;

fn cfg(genus: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        genus,
        seed,
        box_bound: None,
        count: Some(20),
    }
}

#[test]
fn reports_are_byte_identical_for_equal_configs() {
    for name in [
        "pairing-oracle",
        "commutator-identities",
        "part2-prop1",
        "y-relation",
        "part2-prop3",
    ] {
        let a = run_suite(name, &cfg(4, 9)).unwrap();
        let b = run_suite(name, &cfg(4, 9)).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{name}");
        assert_eq!(a.to_markdown(), b.to_markdown(), "{name}");
        assert!(a.passed, "{name}: {}", a.to_markdown());
    }
}

#[test]
fn other_seeds_pass() {
    let a = run_suite("pairing-oracle", &cfg(4, 1)).unwrap();
    let b = run_suite("pairing-oracle", &cfg(4, 2)).unwrap();
    assert_eq!(a.checks.len(), b.checks.len());
    assert!(a.passed && b.passed);
}

#[test]
fn small_genus_is_a_configuration_error() {
    for name in SUITES {
        assert!(
            matches!(run_suite(name, &cfg(3, 0)), Err(Error::Config(_))),
            "{name}"
        );
    }
}

#[test]
fn unknown_suite_and_bad_counts_are_rejected() {
    assert!(matches!(
        run_suite("nope", &cfg(4, 0)),
        Err(Error::Config(_))
    ));
    let zero = SuiteConfig {
        count: Some(0),
        ..cfg(4, 0)
    };
    assert!(run_suite("pairing-oracle", &zero).is_err());
    let tiny = SuiteConfig {
        box_bound: Some(1),
        ..cfg(4, 0)
    };
    assert!(run_suite("pairing-oracle", &tiny).is_err());
}

#[test]
fn oversized_box_is_refused() {
    assert_eq!(w1_box_count(4, 3), 5_764_608);
    let big = SuiteConfig {
        box_bound: Some(3),
        ..cfg(5, 0)
    };
    assert!(matches!(
        run_suite("injectivity-box", &big),
        Err(Error::Config(_))
    ));
}

#[test]
fn zw_report_at_genus_four() {
    let r = run_suite("zw-relations", &cfg(4, 0)).unwrap();
    assert!(r.passed);
    let rank = r.checks.iter().find(|c| c.id == "w3-rank").unwrap();
    assert_eq!(rank.summary, "rank 4 (genus 4)");
}

#[test]
fn report_json_round_trips() {
    let r = run_suite("zw-relations", &cfg(5, 0)).unwrap();
    let back: abelcover::suites::Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
}
