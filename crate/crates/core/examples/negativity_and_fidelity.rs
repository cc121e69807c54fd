// Negativity and fully entangled fraction along the Werner family, next to
// the bound `F ≤ (1 + N)/2`.

use bellcheck::qstate::{fidelity_negativity_slack, fully_entangled_fraction, negativity, DensityMatrix};

/// Returns `(p, N, F)` for a few mixing weights.
pub fn run_example() -> Vec<(f64, f64, f64)> {
    let mut rows = Vec::new();
    println!("{:>5} {:>10} {:>10} {:>10}", "p", "N", "F", "slack");
    for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let rho = DensityMatrix::werner(p).expect("p in [0, 1]");
        let n = negativity(&rho).value();
        let f = fully_entangled_fraction(&rho).value();
        println!("{p:>5.3} {n:>10.6} {f:>10.6} {:>10.2e}", fidelity_negativity_slack(&rho));
        rows.push((p, n, f));
    }
    rows
}

#[allow(dead_code)]
fn main() {
    run_example();
}
