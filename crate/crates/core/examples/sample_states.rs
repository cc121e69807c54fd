// Draws from each ensemble and summarizes purity and negativity.

use bellcheck::montecarlo::Ensemble;
use bellcheck::qstate::negativity;
use bellcheck::sampling::SeededRng;

/// Returns the entangled fraction per ensemble over 2000 draws each.
pub fn run_example() -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for (name, ensemble) in [
        ("mixed", Ensemble::Mixed),
        ("pure-haar", Ensemble::PureHaar),
        ("separable", Ensemble::Separable(8)),
    ] {
        // one independent stream per draw, as the harness does
        let draws = 2000;
        let (mut entangled, mut purity) = (0, 0.0);
        for j in 0..draws {
            let rho = ensemble.draw(&mut SeededRng::split(5, j));
            purity += rho.purity();
            if negativity(&rho).value() > 1e-10 {
                entangled += 1;
            }
        }
        let frac = entangled as f64 / draws as f64;
        println!("{name:>10}: mean purity {:.4}, entangled {:.4}", purity / draws as f64, frac);
        out.push((name.to_string(), frac));
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
