use bidisk::xp::{run_named, run_suite, ConfigOverlay, SuiteConfig};

fn config(suite: &str, trials: usize) -> SuiteConfig {
    let mut cfg = SuiteConfig::defaults(suite).unwrap();
    cfg.trials = trials;
    cfg
}

#[test]
fn more_trials_never_lower_the_maximum() {
    for suite in ["bernstein", "commutator"] {
        let small = run_suite(&config(suite, 12)).unwrap();
        let large = run_suite(&config(suite, 36)).unwrap();
        assert_eq!(large.records[..small.records.len()], small.records[..]);
        for c in &small.checks {
            assert!(large.check(&c.check).unwrap().max_ratio >= c.max_ratio);
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let a = run_suite(&config("identity", 20)).unwrap();
    let b = run_suite(&config("identity", 20)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.records, b.records);
    let mut other = config("identity", 20);
    other.seed += 1;
    assert_ne!(run_suite(&other).unwrap().records, a.records);
}

#[test]
fn zero_perturbation_is_degenerate_with_zero_ratio() {
    let overlay = ConfigOverlay::from_json(r#"{"epsilons": [0.0], "trials": 9}"#).unwrap();
    for suite in ["holder", "lipschitz", "schatten"] {
        let report = run_named(suite, &overlay, None, None).unwrap();
        let s = &report.suites[0];
        assert!(s.records.iter().all(|r| r.degenerate && r.ratio == 0.0), "{suite}");
        assert!(s.checks.iter().all(|c| c.degenerate == c.count));
    }
}

#[test]
fn per_scheme_maxima_are_reported() {
    let report = run_suite(&config("bernstein", 30)).unwrap();
    let c = report.check("bernstein").unwrap();
    assert_eq!(c.max_by_scheme.len(), 3);
    let top = c.max_by_scheme.values().copied().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(top, c.max_ratio);
}

#[test]
fn overlay_applies_to_every_suite_in_all() {
    let overlay = ConfigOverlay::from_json(r#"{"trials": 2, "dims": [2], "degrees": [2]}"#).unwrap();
    let report = run_named("all", &overlay, Some(3), None).unwrap();
    assert_eq!(report.suites.len(), bidisk::xp::suite_names().len());
    assert!(report.suites.iter().all(|s| s.config.trials == 2 && s.config.seed == 3));
}
