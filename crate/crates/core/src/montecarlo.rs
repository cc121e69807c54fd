//! Seeded, shardable estimation of entanglement and violation fractions.
//!
//! Sample `j` of a run draws its state from `SeededRng::split(seed, j)`.
//! Shards are contiguous ranges of sample indices whose sizes differ by at
//! most one, and shard tallies are folded in shard order, so a run's output
//! depends only on `(ensemble, samples, seed, settings)`: any shard count and
//! any worker count give identical tallies.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::{
    bell_family36, bell_family4, expectation, negativity_bound, BellOperator, SettingsPair, Triad, CHSH_BOUND,
    RUS_BOUND,
};
use crate::qstate::{negativity, DensityMatrix, ENTANGLEMENT_TOL};
use crate::sampling::{haar_pure, random_mixed, random_separable, SeededRng};
use crate::{Error, Result};

/// Two-sided 95% normal quantile used for reported intervals.
pub const Z95: f64 = 1.96;
/// Slack below which a negativity-bound margin counts as a violation.
pub const SLACK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ensemble {
    /// Haar unitary times uniform-simplex spectrum.
    Mixed,
    PureHaar,
    /// Mixtures of this many random product states.
    Separable(usize),
}

impl Ensemble {
    pub fn draw(&self, rng: &mut SeededRng) -> DensityMatrix {
        match *self {
            Ensemble::Mixed => random_mixed(rng),
            Ensemble::PureHaar => DensityMatrix::from_pure(&haar_pure(rng)),
            Ensemble::Separable(k) => random_separable(rng, k).expect("validated mixture size"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistic {
    #[serde(rename = "entangled")]
    Entangled,
    #[serde(rename = "chsh-any-of-4")]
    ChshAnyOf4,
    #[serde(rename = "rus-any-of-4")]
    RusAnyOf4,
    #[serde(rename = "chsh-any-of-36")]
    ChshAnyOf36,
    #[serde(rename = "rus-any-of-36")]
    RusAnyOf36,
    /// Hits count states with `√2(1 + N) − max|<B>| < −1e-9`; the tally
    /// also records the minimum margin.
    #[serde(rename = "negativity-bound-slack-min")]
    NegativityBoundSlackMin,
}

impl Statistic {
    pub const ALL: [Statistic; 6] = [
        Statistic::Entangled,
        Statistic::ChshAnyOf4,
        Statistic::RusAnyOf4,
        Statistic::ChshAnyOf36,
        Statistic::RusAnyOf36,
        Statistic::NegativityBoundSlackMin,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Statistic::Entangled => "entangled",
            Statistic::ChshAnyOf4 => "chsh-any-of-4",
            Statistic::RusAnyOf4 => "rus-any-of-4",
            Statistic::ChshAnyOf36 => "chsh-any-of-36",
            Statistic::RusAnyOf36 => "rus-any-of-36",
            Statistic::NegativityBoundSlackMin => "negativity-bound-slack-min",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.label() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown statistic '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub ensemble: Ensemble,
    pub statistics: Vec<Statistic>,
    pub samples: u64,
    pub seed: u64,
    pub shards: u64,
    /// Settings of the 4-operator family.
    pub pair: SettingsPair,
    /// Triads of the 36-operator family, party A first.
    pub triads: (Triad, Triad),
}

impl ExperimentConfig {
    /// Coordinate-axis settings, one shard, every statistic.
    pub fn new(ensemble: Ensemble, samples: u64, seed: u64) -> Self {
        Self {
            ensemble,
            statistics: Statistic::ALL.to_vec(),
            samples,
            seed,
            shards: 1,
            pair: SettingsPair::axes(),
            triads: (Triad::axes(), Triad::axes()),
        }
    }

    pub fn with_statistics(mut self, statistics: &[Statistic]) -> Self {
        self.statistics = statistics.to_vec();
        self
    }

    pub fn with_shards(mut self, shards: u64) -> Self {
        self.shards = shards;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::ConfigInvalid("samples must be ≥ 1".into()));
        }
        if self.shards < 1 {
            return Err(Error::ConfigInvalid("shards must be ≥ 1".into()));
        }
        if self.shards > self.samples {
            return Err(Error::ConfigInvalid("shards must not exceed samples".into()));
        }
        if let Ensemble::Separable(0) = self.ensemble {
            return Err(Error::ConfigInvalid("separable mixtures need at least 1 term".into()));
        }
        Ok(())
    }

    /// Sample index range `[start, end)` of shard `index`.
    pub fn shard_range(&self, index: u64) -> (u64, u64) {
        let base = self.samples / self.shards;
        let extra = self.samples % self.shards;
        let start = index * base + index.min(extra);
        let len = base + u64::from(index < extra);
        (start, start + len)
    }
}

/// Count, fraction and Wilson 95% interval for one statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallyResult {
    pub hits: u64,
    pub trials: u64,
    pub fraction: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    pub statistic: Statistic,
    pub seed: u64,
    /// Smallest margin seen, for [`Statistic::NegativityBoundSlackMin`] only.
    pub minimum: Option<f64>,
}

impl TallyResult {
    pub fn empty(statistic: Statistic, seed: u64) -> Self {
        Self::from_counts(statistic, seed, 0, 0, None)
    }

    pub fn from_counts(statistic: Statistic, seed: u64, hits: u64, trials: u64, minimum: Option<f64>) -> Self {
        let (fraction, stderr, ci95) = if trials == 0 {
            (0.0, 0.0, (0.0, 1.0))
        } else {
            let p = hits as f64 / trials as f64;
            let ci = wilson_ci(hits, trials, Z95).expect("hits ≤ trials");
            (p, (p * (1.0 - p) / trials as f64).sqrt(), ci)
        };
        Self { hits, trials, fraction, stderr, ci95, statistic, seed, minimum }
    }
}

/// Wilson score interval for `hits` successes in `trials`.
pub fn wilson_ci(hits: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    if trials == 0 || hits > trials {
        return Err(Error::ConfigInvalid(format!(
            "invalid counts for an interval: {hits} of {trials}"
        )));
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if hits == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let hi = if hits == trials { 1.0 } else { (center + half).clamp(p, 1.0) };
    Ok((lo, hi))
}

/// Adds the counts of two tallies of the same statistic.
pub fn merge(a: &TallyResult, b: &TallyResult) -> Result<TallyResult> {
    if a.statistic != b.statistic {
        return Err(Error::LabelMismatch(a.statistic.to_string(), b.statistic.to_string()));
    }
    let minimum = match (a.minimum, b.minimum) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    Ok(TallyResult::from_counts(
        a.statistic,
        a.seed.min(b.seed),
        a.hits + b.hits,
        a.trials + b.trials,
        minimum,
    ))
}

/// Operators evaluated on every sampled state.
#[derive(Debug, Clone)]
pub struct OperatorSets {
    pub four: [BellOperator; 4],
    pub thirty_six: Vec<BellOperator>,
}

impl OperatorSets {
    pub fn new(pair: &SettingsPair, triads: &(Triad, Triad)) -> Self {
        Self {
            four: bell_family4(pair),
            thirty_six: bell_family36(&triads.0, &triads.1),
        }
    }
}

/// Everything tallied for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateOutcome {
    pub negativity: f64,
    pub entangled: bool,
    pub max_abs4: f64,
    pub max_abs36: f64,
    /// `√2(1 + N)` minus the largest `|<B>|` over both families.
    pub negativity_bound_slack: f64,
}

impl StateOutcome {
    pub fn chsh4(&self) -> bool {
        self.max_abs4 > CHSH_BOUND
    }

    pub fn rus4(&self) -> bool {
        self.max_abs4 > RUS_BOUND
    }

    pub fn chsh36(&self) -> bool {
        self.max_abs36 > CHSH_BOUND
    }

    pub fn rus36(&self) -> bool {
        self.max_abs36 > RUS_BOUND
    }

    pub fn hit(&self, statistic: Statistic) -> bool {
        match statistic {
            Statistic::Entangled => self.entangled,
            Statistic::ChshAnyOf4 => self.chsh4(),
            Statistic::RusAnyOf4 => self.rus4(),
            Statistic::ChshAnyOf36 => self.chsh36(),
            Statistic::RusAnyOf36 => self.rus36(),
            Statistic::NegativityBoundSlackMin => self.negativity_bound_slack < -SLACK_TOL,
        }
    }
}

pub fn evaluate_state(rho: &DensityMatrix, ops: &OperatorSets) -> StateOutcome {
    let n = negativity(rho).value();
    let max_abs = |set: &[BellOperator]| set.iter().map(|op| expectation(op, rho).abs()).fold(0.0, f64::max);
    let max_abs4 = max_abs(&ops.four);
    let max_abs36 = max_abs(&ops.thirty_six);
    StateOutcome {
        negativity: n,
        entangled: n > ENTANGLEMENT_TOL,
        max_abs4,
        max_abs36,
        negativity_bound_slack: negativity_bound(n) - max_abs4.max(max_abs36),
    }
}

#[derive(Debug, Clone, Copy)]
struct Counts {
    hits: [u64; 6],
    trials: u64,
    min_slack: f64,
}

impl Counts {
    fn new() -> Self {
        Self { hits: [0; 6], trials: 0, min_slack: f64::INFINITY }
    }

    fn add(&mut self, outcome: &StateOutcome) {
        for (k, st) in Statistic::ALL.iter().enumerate() {
            self.hits[k] += u64::from(outcome.hit(*st));
        }
        self.trials += 1;
        self.min_slack = self.min_slack.min(outcome.negativity_bound_slack);
    }

    fn combine(mut self, other: &Counts) -> Self {
        for k in 0..6 {
            self.hits[k] += other.hits[k];
        }
        self.trials += other.trials;
        self.min_slack = self.min_slack.min(other.min_slack);
        self
    }

    fn into_results(self, config: &ExperimentConfig) -> Vec<TallyResult> {
        config
            .statistics
            .iter()
            .map(|st| {
                let k = Statistic::ALL.iter().position(|s| s == st).expect("known statistic");
                let minimum = (*st == Statistic::NegativityBoundSlackMin && self.trials > 0).then_some(self.min_slack);
                TallyResult::from_counts(*st, config.seed, self.hits[k], self.trials, minimum)
            })
            .collect()
    }
}

fn count_range(config: &ExperimentConfig, ops: &OperatorSets, (start, end): (u64, u64)) -> Counts {
    let mut counts = Counts::new();
    for j in start..end {
        let mut rng = SeededRng::split(config.seed, j);
        let rho = config.ensemble.draw(&mut rng);
        counts.add(&evaluate_state(&rho, ops));
    }
    counts
}

/// Tallies of a single shard, as [`run`] would compute them for that shard.
pub fn run_shard(config: &ExperimentConfig, shard: u64) -> Result<Vec<TallyResult>> {
    config.validate()?;
    if shard >= config.shards {
        return Err(Error::ConfigInvalid(format!("shard {shard} out of range")));
    }
    let ops = OperatorSets::new(&config.pair, &config.triads);
    Ok(count_range(config, &ops, config.shard_range(shard)).into_results(config))
}

/// Draws `samples` states and tallies every requested statistic in one pass.
pub fn run(config: &ExperimentConfig) -> Result<Vec<TallyResult>> {
    config.validate()?;
    let ops = OperatorSets::new(&config.pair, &config.triads);
    let per_shard: Vec<Counts> = (0..config.shards)
        .into_par_iter()
        .map(|i| count_range(config, &ops, config.shard_range(i)))
        .collect();
    let total = per_shard.iter().fold(Counts::new(), |acc, c| acc.combine(c));
    Ok(total.into_results(config))
}
