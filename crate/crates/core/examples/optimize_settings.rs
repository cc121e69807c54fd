// Maximizes the Bell value over orthogonal settings for a random mixed state
// and compares it with the fidelity, negativity and correlation-matrix bounds.

use bellcheck::bell::{horodecki_max, max_over_orthogonal_settings, negativity_bound, OptimizerBudget, CIRELSON_BOUND};
use bellcheck::qstate::{fully_entangled_fraction, negativity};
use bellcheck::sampling::{random_mixed, SeededRng};

/// Returns `(optimized value, correlation-matrix maximum)`.
pub fn run_example() -> (f64, f64) {
    let rho = random_mixed(&mut SeededRng::new(2024));
    let opt = max_over_orthogonal_settings(&rho, OptimizerBudget::default(), 1);
    let n = negativity(&rho).value();
    let f = fully_entangled_fraction(&rho).value();
    let h = horodecki_max(&rho);
    println!("optimized <B>   {:.9}", opt.value);
    println!("correlation max {h:.9}");
    println!("2√2 F           {:.9}", CIRELSON_BOUND * f);
    println!("√2 (1 + N)      {:.9}", negativity_bound(n));
    println!("settings a = {:?}", opt.settings.a);
    println!("settings b = {:?}", opt.settings.b);
    (opt.value, h)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
