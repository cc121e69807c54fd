// Monte Carlo estimate of how often random states violate the CHSH and
// separable-orthogonal bounds, sharded over the thread pool.

use bellcheck::montecarlo::{run, Ensemble, ExperimentConfig, TallyResult};

pub fn run_example() -> Vec<TallyResult> {
    let config = ExperimentConfig::new(Ensemble::Mixed, 20_000, 42).with_shards(4);
    let tallies = run(&config).expect("valid config");
    for t in &tallies {
        println!(
            "{:<28} {:>6} / {} = {:.5}  [{:.5}, {:.5}]",
            t.statistic.to_string(),
            t.hits,
            t.trials,
            t.fraction,
            t.ci95.0,
            t.ci95.1
        );
    }
    tallies
}

#[allow(dead_code)]
fn main() {
    run_example();
}
