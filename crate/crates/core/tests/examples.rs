use bellcheck::bell::CIRELSON_BOUND;

mod bell_operators {
    include!("../examples/bell_operators.rs");
}
mod negativity_and_fidelity {
    include!("../examples/negativity_and_fidelity.rs");
}
mod optimize_settings {
    include!("../examples/optimize_settings.rs");
}
mod sample_states {
    include!("../examples/sample_states.rs");
}
mod violation_statistics {
    include!("../examples/violation_statistics.rs");
}
mod verify_state {
    include!("../examples/verify_state.rs");
}

#[test]
fn bell_operators_example() {
    let v = bell_operators::run_example();
    assert_eq!(v.iter().filter(|x| (x.abs() - CIRELSON_BOUND).abs() < 1e-12).count(), 1);
}

#[test]
fn negativity_and_fidelity_example() {
    for (p, n, f) in negativity_and_fidelity::run_example() {
        assert!(f <= (1.0 + n) / 2.0 + 1e-12);
        assert!((f - (1.0 + 3.0 * p) / 4.0).abs() < 1e-9);
    }
}

#[test]
fn optimize_settings_example() {
    let (value, h) = optimize_settings::run_example();
    // the correlation-matrix value allows non-orthogonal settings for B
    assert!(value > 0.0 && value <= h + 1e-6);
}

#[test]
fn sample_states_example() {
    let r = sample_states::run_example();
    assert!((0.33..0.41).contains(&r[0].1));
    assert_eq!(r[1].1, 1.0);
    assert_eq!(r[2].1, 0.0);
}

#[test]
fn violation_statistics_example() {
    let t = violation_statistics::run_example();
    assert_eq!(t.len(), 6);
    assert!(t.iter().all(|t| t.trials == 20_000));
}

#[test]
fn verify_state_example() {
    for (code, text) in verify_state::run_example() {
        assert_eq!(code, 0);
        assert!(text.contains("\"negativity\""));
    }
}
