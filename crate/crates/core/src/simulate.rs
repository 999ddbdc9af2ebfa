//! Binomial random subsets of `{1..n}` and the law of the number `X` of
//! essentially different non-trivial solutions they contain.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(master_seed)` switched to
//! stream `i`, so every trial is reproducible on its own and the aggregate
//! does not depend on how trials are scheduled.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::Serialize;

use crate::census::{CensusEngine, CensusError, IntSet};
use crate::ehrhart::{volume, EhrhartError, FitOptions};
use crate::lattice::{Budget, BudgetExceeded};
use crate::linalg::{to_f64, Rational};
use crate::par::{map_range, Execution};
use crate::structure::{
    balance_check, c_exponent, BalanceVerdict, StructureError, PERMUTATION_CAP,
};
use crate::system::LinearSystem;

pub const DEFAULT_CAP_T: usize = 64;

/// Node visits allowed for the census of a single trial.
pub const DEFAULT_TRIAL_BUDGET: u64 = 50_000_000;

/// Minimum expected count of a chi-square cell; smaller cells are pooled.
const CHI_SQUARE_MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, thiserror::Error)]
pub enum SimulationError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Ehrhart(#[from] EhrhartError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
}

/// How `p` is chosen.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilitySpec {
    /// `p = C n^{-1/c(M)}`.
    Constant(#[serde(serialize_with = "crate::linalg::serialize_rational")] Rational),
    /// `p = n^e`.
    Exponent(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    #[serde(skip)]
    pub system: LinearSystem,
    pub n: u64,
    pub probability: ProbabilitySpec,
    pub trials: u64,
    pub master_seed: u64,
    pub cap_t: usize,
    pub trial_budget: u64,
    #[serde(skip)]
    pub exec: Execution,
}

impl ExperimentConfig {
    pub fn new(
        system: LinearSystem,
        n: u64,
        probability: ProbabilitySpec,
        trials: u64,
        master_seed: u64,
    ) -> Self {
        Self {
            system,
            n,
            probability,
            trials,
            master_seed,
            cap_t: DEFAULT_CAP_T,
            trial_budget: DEFAULT_TRIAL_BUDGET,
            exec: Execution::default(),
        }
    }

    /// Evaluates `p`, which must land in `(0, 1]`.
    pub fn probability(&self) -> Result<f64, SimulationError> {
        let p = match &self.probability {
            ProbabilitySpec::Constant(c) => {
                let exponent = c_exponent(&self.system)?.threshold_exponent;
                to_f64(c) * (self.n as f64).powf(to_f64(&exponent))
            }
            ProbabilitySpec::Exponent(e) => (self.n as f64).powf(*e),
        };
        if p > 0.0 && p <= 1.0 {
            Ok(p)
        } else {
            Err(SimulationError::InvalidConfig(format!(
                "p = {p} is outside (0, 1]"
            )))
        }
    }

    fn validate(&self) -> Result<(), SimulationError> {
        if self.trials == 0 {
            return Err(SimulationError::InvalidConfig(
                "trials must be at least 1".into(),
            ));
        }
        if self.n == 0 {
            return Err(SimulationError::InvalidConfig(
                "n must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// The RNG of trial `stream` under `master_seed`.
pub fn trial_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Each of `1..=n` independently with probability `p`, increasing. Gaps
/// between chosen elements are drawn as geometric variables.
pub fn sample_set<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> Vec<i64> {
    if p <= 0.0 || n == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (1..=n as i64).collect();
    }
    let gaps = Geometric::new(p).expect("0 < p < 1");
    let mut out = Vec::with_capacity((n as f64 * p * 1.2) as usize + 8);
    let mut position = 0u64;
    loop {
        // Failures before the next success, so the next element is skip + 1 ahead.
        let skip = gaps.sample(rng);
        position = match position.checked_add(skip).and_then(|v| v.checked_add(1)) {
            Some(v) if v <= n => v,
            _ => return out,
        };
        out.push(position as i64);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mu {
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub mu: Rational,
    /// `Vol(P_M) / σ(M)`; `mu = coefficient C^m`.
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub coefficient: Rational,
    /// False when the system is not strictly balanced, where the Poisson law
    /// is not expected.
    pub theorem_backed: bool,
}

/// `μ = Vol(P_M) / σ(M) C^m`, warning when the system is not strictly balanced.
pub fn mu_of(system: &LinearSystem, c: &Rational) -> Result<Mu, SimulationError> {
    let result = volume(system, &FitOptions::default())?;
    let coefficient = result
        .mu_coefficient
        .ok_or(StructureError::NoSymmetryConstant {
            m: system.m(),
            cap: PERMUTATION_CAP,
        })?;
    let name = system.name().unwrap_or("system");
    let theorem_backed = match balance_check(system) {
        Ok(report) => report.verdict == BalanceVerdict::StrictlyBalanced,
        Err(err) => {
            log::warn!("balance of {name} could not be decided: {err}");
            false
        }
    };
    if !theorem_backed {
        log::warn!("{name} is not strictly balanced; a Poisson limit is not expected");
    }
    let mu = &coefficient * Pow::pow(c, system.m() as u32);
    Ok(Mu {
        mu,
        coefficient,
        theorem_backed,
    })
}

/// Law of `X` over the completed trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalDistribution {
    /// `counts[t]` for `t = 0..=cap_t`.
    pub counts: Vec<u64>,
    /// Trials with `X > cap_t`.
    pub overflow: u64,
    pub trials: u64,
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub mean: Rational,
    /// Population variance `E[X^2] - E[X]^2`.
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub variance: Rational,
}

impl EmpiricalDistribution {
    /// Aggregates per-trial values; the order of `values` does not matter.
    pub fn from_values(values: &[u64], cap_t: usize) -> Self {
        let mut counts = vec![0u64; cap_t + 1];
        let mut overflow = 0;
        let (mut sum, mut squares) = (0u128, 0u128);
        for &x in values {
            match counts.get_mut(x as usize) {
                Some(slot) => *slot += 1,
                None => overflow += 1,
            }
            sum += u128::from(x);
            squares += u128::from(x) * u128::from(x);
        }
        let trials = values.len() as u64;
        let (mean, variance) = if trials == 0 {
            (Rational::zero(), Rational::zero())
        } else {
            let t = BigInt::from(trials);
            let mean = Rational::new(BigInt::from(sum), t.clone());
            let second = Rational::new(BigInt::from(squares), t);
            let variance = second - &mean * &mean;
            (mean, variance)
        };
        Self {
            counts,
            overflow,
            trials,
            mean,
            variance,
        }
    }

    pub fn frequency(&self, t: usize) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.counts.get(t).copied().unwrap_or(0) as f64 / self.trials as f64
    }
}

/// One row of the empirical-versus-Poisson table; `t = None` is the tail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellRow {
    pub t: Option<usize>,
    pub empirical: f64,
    pub poisson: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonComparison {
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub mu: Rational,
    pub tv_distance: f64,
    pub chi_square: f64,
    pub chi_square_cells: usize,
    pub mean_ratio: f64,
    pub variance_ratio: f64,
    pub p_zero_empirical: f64,
    pub p_zero_predicted: f64,
    pub theorem_backed: bool,
    pub rows: Vec<CellRow>,
}

/// Poisson probabilities for `0..=cap_t` and the remaining tail mass.
fn poisson_cells(mu: f64, cap_t: usize) -> (Vec<f64>, f64) {
    let mut pmf = Vec::with_capacity(cap_t + 1);
    let mut term = (-mu).exp();
    for t in 0..=cap_t {
        if t > 0 {
            term *= mu / t as f64;
        }
        pmf.push(term);
    }
    let tail = (1.0 - pmf.iter().sum::<f64>()).max(0.0);
    (pmf, tail)
}

pub fn compare_poisson(
    dist: &EmpiricalDistribution,
    mu: &Rational,
    theorem_backed: bool,
) -> PoissonComparison {
    let mu_f = to_f64(mu);
    let cap_t = dist.counts.len() - 1;
    let (pmf, tail) = poisson_cells(mu_f, cap_t);
    let trials = dist.trials.max(1) as f64;
    let mut rows: Vec<CellRow> = (0..=cap_t)
        .map(|t| CellRow {
            t: Some(t),
            empirical: dist.counts[t] as f64 / trials,
            poisson: pmf[t],
        })
        .collect();
    rows.push(CellRow {
        t: None,
        empirical: dist.overflow as f64 / trials,
        poisson: tail,
    });
    let tv_distance = (0.5
        * rows
            .iter()
            .map(|r| (r.empirical - r.poisson).abs())
            .sum::<f64>())
    .min(1.0);

    // Leading cells with enough expected mass stand alone; the rest is pooled.
    let (mut chi_square, mut cells) = (0.0, 0);
    let mut pooled = (0.0, 0.0);
    let mut pooling = false;
    for row in &rows {
        let (observed, expected) = (row.empirical * trials, row.poisson * trials);
        if !pooling && expected >= CHI_SQUARE_MIN_EXPECTED && row.t.is_some() {
            chi_square += (observed - expected).powi(2) / expected;
            cells += 1;
        } else {
            pooling = true;
            pooled.0 += observed;
            pooled.1 += expected;
        }
    }
    if pooled.1 > 0.0 {
        chi_square += (pooled.0 - pooled.1).powi(2) / pooled.1;
        cells += 1;
    }

    let ratio = |x: &Rational| {
        if mu_f > 0.0 {
            to_f64(x) / mu_f
        } else {
            f64::NAN
        }
    };
    PoissonComparison {
        mu: mu.clone(),
        tv_distance,
        chi_square,
        chi_square_cells: cells,
        mean_ratio: ratio(&dist.mean),
        variance_ratio: ratio(&dist.variance),
        p_zero_empirical: dist.frequency(0),
        p_zero_predicted: (-mu_f).exp(),
        theorem_backed,
        rows,
    }
}

/// A trial whose census ran out of budget; it is excluded from the law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbortedTrial {
    pub trial: u64,
    pub set_size: usize,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonExperiment {
    pub p: f64,
    pub mu: Mu,
    pub distribution: EmpiricalDistribution,
    pub comparison: PoissonComparison,
    pub aborted: Vec<AbortedTrial>,
    pub mean_set_size: f64,
}

enum TrialOutcome {
    Done { x: u64, size: usize },
    Aborted(AbortedTrial),
}

pub fn run_poisson_experiment(
    cfg: &ExperimentConfig,
) -> Result<PoissonExperiment, SimulationError> {
    cfg.validate()?;
    let ProbabilitySpec::Constant(c) = &cfg.probability else {
        return Err(SimulationError::InvalidConfig(
            "a Poisson experiment needs p = C n^(-1/c(M))".into(),
        ));
    };
    let mu = mu_of(&cfg.system, c)?;
    let p = cfg.probability()?;
    let engine = CensusEngine::new(&cfg.system)?;
    let outcomes = map_range(cfg.exec, cfg.trials as usize, |trial| {
        let trial = trial as u64;
        let mut rng = trial_rng(cfg.master_seed, trial);
        let set = IntSet::new(sample_set(cfg.n, p, &mut rng));
        let budget = Budget::new(cfg.trial_budget);
        match engine.census(&set, Execution::Sequential, &budget) {
            Ok(census) => Ok(TrialOutcome::Done {
                x: census.nontrivial_orbits,
                size: set.len(),
            }),
            Err(CensusError::Budget(BudgetExceeded { budget })) => {
                Ok(TrialOutcome::Aborted(AbortedTrial {
                    trial,
                    set_size: set.len(),
                    budget,
                }))
            }
            Err(err) => Err(err),
        }
    });
    let mut values = Vec::with_capacity(outcomes.len());
    let mut aborted = Vec::new();
    let mut total_size = 0u64;
    for outcome in outcomes {
        match outcome? {
            TrialOutcome::Done { x, size } => {
                values.push(x);
                total_size += size as u64;
            }
            TrialOutcome::Aborted(a) => {
                log::warn!(
                    "trial {} aborted: census budget {} exceeded",
                    a.trial,
                    a.budget
                );
                total_size += a.set_size as u64;
                aborted.push(a);
            }
        }
    }
    let distribution = EmpiricalDistribution::from_values(&values, cfg.cap_t);
    let comparison = compare_poisson(&distribution, &mu.mu, mu.theorem_backed);
    Ok(PoissonExperiment {
        p,
        mu,
        distribution,
        comparison,
        aborted,
        mean_set_size: total_size as f64 / cfg.trials as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub exponent: f64,
    pub p: f64,
    pub trials: u64,
    pub hits: u64,
    pub hit_fraction: f64,
    pub aborted: Vec<AbortedTrial>,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub system: LinearSystem,
    pub n: u64,
    pub exponents: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub trial_budget: u64,
    pub exec: Execution,
}

/// Stream of trial `trial` at exponent index `index`; indices and trials get
/// disjoint bit ranges.
fn sweep_stream(index: usize, trial: u64) -> u64 {
    ((index as u64) << 40) | trial
}

/// Fraction of trials at `p = n^e` containing a non-trivial solution, for
/// each exponent in the given order. Hit fractions are over completed trials.
pub fn run_threshold_sweep(cfg: &SweepConfig) -> Result<Vec<SweepPoint>, SimulationError> {
    if cfg.trials == 0 || cfg.trials >= 1 << 40 {
        return Err(SimulationError::InvalidConfig(
            "trials must be in 1..2^40".into(),
        ));
    }
    // Written negated so NaN is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if let Some(e) = cfg.exponents.iter().find(|&&e| !(e < 0.0)) {
        return Err(SimulationError::InvalidConfig(format!(
            "exponent {e} is not negative"
        )));
    }
    let engine = CensusEngine::new(&cfg.system)?;
    cfg.exponents
        .iter()
        .enumerate()
        .map(|(index, &exponent)| {
            let p = (cfg.n as f64).powf(exponent);
            let outcomes = map_range(cfg.exec, cfg.trials as usize, |trial| {
                let trial = trial as u64;
                let mut rng = trial_rng(cfg.master_seed, sweep_stream(index, trial));
                let set = IntSet::new(sample_set(cfg.n, p, &mut rng));
                let budget = Budget::new(cfg.trial_budget);
                match engine.contains_nontrivial(&set, &budget) {
                    Ok(hit) => Ok(Ok(hit)),
                    Err(CensusError::Budget(BudgetExceeded { budget })) => Ok(Err(AbortedTrial {
                        trial,
                        set_size: set.len(),
                        budget,
                    })),
                    Err(err) => Err(err),
                }
            });
            let (mut hits, mut done) = (0u64, 0u64);
            let mut aborted = Vec::new();
            for outcome in outcomes {
                match outcome? {
                    Ok(hit) => {
                        done += 1;
                        hits += u64::from(hit);
                    }
                    Err(a) => aborted.push(a),
                }
            }
            Ok(SweepPoint {
                exponent,
                p,
                trials: done,
                hits,
                hit_fraction: if done == 0 {
                    f64::NAN
                } else {
                    hits as f64 / done as f64
                },
                aborted,
            })
        })
        .collect()
}

/// `μ` as a function of `C`: the coefficient and the power of `C`.
pub fn mu_polynomial(coefficient: &Rational, m: usize) -> String {
    if coefficient.is_one() {
        format!("C^{m}")
    } else if coefficient.numer().is_one() {
        format!("C^{m} / {}", coefficient.denom())
    } else if coefficient.denom().is_one() {
        format!("{} C^{m}", coefficient.numer())
    } else {
        format!("{} C^{m} / {}", coefficient.numer(), coefficient.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, ratio};
    use crate::system::Family;

    fn named(family: Family) -> LinearSystem {
        LinearSystem::named(family).unwrap()
    }

    #[test]
    fn sample_set_edges() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..20 {
            assert!(sample_set(50, 0.0, &mut rng).is_empty());
            assert_eq!(sample_set(50, 1.0, &mut rng), (1..=50).collect::<Vec<_>>());
        }
        assert!(sample_set(0, 0.5, &mut rng).is_empty());
    }

    #[test]
    fn sample_set_concentration() {
        let (n, p) = (100_000u64, 0.01);
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        for trial in 0..100 {
            let set = sample_set(n, p, &mut trial_rng(3, trial));
            assert!(
                (set.len() as f64 - 1000.0).abs() <= 5.0 * sd,
                "size {}",
                set.len()
            );
            assert!(set.windows(2).all(|w| w[0] < w[1]));
            assert!(set.iter().all(|&v| (1..=n as i64).contains(&v)));
        }
    }

    #[test]
    fn sample_set_is_uniform_over_positions() {
        // Every position should be hit about trials * p times.
        let (n, p, trials) = (20u64, 0.3, 20_000u64);
        let mut hits = vec![0u64; n as usize + 1];
        for trial in 0..trials {
            for v in sample_set(n, p, &mut trial_rng(9, trial)) {
                hits[v as usize] += 1;
            }
        }
        let expected = trials as f64 * p;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        for &h in &hits[1..] {
            assert!((h as f64 - expected).abs() < 5.0 * sd, "{h} vs {expected}");
        }
    }

    #[test]
    fn mu_examples() {
        let sidon = mu_of(&named(Family::Sidon), &int(1)).unwrap();
        assert_eq!(sidon.mu, ratio(1, 12));
        assert!(sidon.theorem_backed);
        let ap = mu_of(&named(Family::KAp { k: 3 }), &int(1)).unwrap();
        assert_eq!(ap.mu, ratio(1, 4));
        let scaled = mu_of(&named(Family::Sidon), &ratio(3, 2)).unwrap();
        assert_eq!(scaled.mu, ratio(27, 64));
        assert_eq!(mu_polynomial(&sidon.coefficient, 4), "C^4 / 12");
        // Balanced but not strictly: the comparison is flagged.
        assert!(
            !mu_of(&named(Family::Bhg { h: 2, g: 2 }), &int(1))
                .unwrap()
                .theorem_backed
        );
    }

    #[test]
    fn distribution_statistics() {
        let dist = EmpiricalDistribution::from_values(&[0, 0, 1, 3, 100], 4);
        assert_eq!(dist.counts, vec![2, 1, 0, 1, 0]);
        assert_eq!(dist.overflow, 1);
        assert_eq!(dist.trials, 5);
        assert_eq!(dist.mean, ratio(104, 5));
        // E[X^2] = 10010 / 5, minus (104/5)^2.
        assert_eq!(
            dist.variance,
            ratio(10010, 5) - ratio(104, 5) * ratio(104, 5)
        );
        let total: u64 = dist.counts.iter().sum::<u64>() + dist.overflow;
        assert_eq!(total, dist.trials);
    }

    #[test]
    fn exact_poisson_sample_has_small_distance() {
        // Frequencies proportional to a rounded Poisson(1) law.
        let mut values = Vec::new();
        let (pmf, _) = poisson_cells(1.0, 10);
        for (t, q) in pmf.iter().enumerate() {
            values.extend(std::iter::repeat_n(
                t as u64,
                (q * 100_000.0).round() as usize,
            ));
        }
        let dist = EmpiricalDistribution::from_values(&values, 10);
        let cmp = compare_poisson(&dist, &int(1), true);
        assert!(cmp.tv_distance < 1e-3, "{}", cmp.tv_distance);
        assert!((cmp.mean_ratio - 1.0).abs() < 1e-3);
        assert!((0.0..=1.0).contains(&cmp.tv_distance));
        assert!(cmp.chi_square < 1.0);

        let degenerate = EmpiricalDistribution::from_values(&[5; 100], 10);
        let far = compare_poisson(&degenerate, &ratio(1, 100), true);
        assert!(far.tv_distance > 0.95 && far.tv_distance <= 1.0);
    }

    #[test]
    fn tiny_c_gives_no_solutions() {
        let mut cfg = ExperimentConfig::new(
            named(Family::Sidon),
            10_000,
            ProbabilitySpec::Constant(ratio(1, 100)),
            200,
            5,
        );
        cfg.cap_t = 8;
        let out = run_poisson_experiment(&cfg).unwrap();
        assert!(out.comparison.p_zero_empirical >= 0.99);
        assert!(out.aborted.is_empty());
    }

    #[test]
    fn aborted_trials_are_reported() {
        let mut cfg = ExperimentConfig::new(
            named(Family::Sidon),
            10_000,
            ProbabilitySpec::Constant(int(3)),
            20,
            5,
        );
        cfg.trial_budget = 10;
        let out = run_poisson_experiment(&cfg).unwrap();
        assert!(!out.aborted.is_empty());
        assert_eq!(out.distribution.trials + out.aborted.len() as u64, 20);
    }

    #[test]
    fn configuration_errors() {
        let cfg = ExperimentConfig::new(
            named(Family::Sidon),
            100,
            ProbabilitySpec::Exponent(-0.5),
            10,
            1,
        );
        assert!(matches!(
            run_poisson_experiment(&cfg),
            Err(SimulationError::InvalidConfig(_))
        ));
        let zero = ExperimentConfig::new(
            named(Family::Sidon),
            100,
            ProbabilitySpec::Constant(int(1)),
            0,
            1,
        );
        assert!(matches!(
            run_poisson_experiment(&zero),
            Err(SimulationError::InvalidConfig(_))
        ));
        let huge = ExperimentConfig::new(
            named(Family::Sidon),
            100,
            ProbabilitySpec::Constant(int(1000)),
            1,
            1,
        );
        assert!(huge.probability().is_err());
        let sweep = SweepConfig {
            system: named(Family::Sidon),
            n: 100,
            exponents: vec![-0.5, 0.1],
            trials: 10,
            master_seed: 1,
            trial_budget: DEFAULT_TRIAL_BUDGET,
            exec: Execution::Sequential,
        };
        assert!(run_threshold_sweep(&sweep).is_err());
    }

    #[test]
    fn deterministic_across_schedules() {
        let mut cfg = ExperimentConfig::new(
            named(Family::KAp { k: 3 }),
            2_000,
            ProbabilitySpec::Constant(int(1)),
            300,
            42,
        );
        cfg.exec = Execution::Sequential;
        let seq = run_poisson_experiment(&cfg).unwrap();
        cfg.exec = Execution::Parallel;
        let par = run_poisson_experiment(&cfg).unwrap();
        assert_eq!(seq, par);
        cfg.master_seed = 43;
        assert_ne!(
            run_poisson_experiment(&cfg).unwrap().distribution,
            seq.distribution
        );
    }

    #[test]
    fn sweep_is_monotone_for_sidon() {
        let cfg = SweepConfig {
            system: named(Family::Sidon),
            n: 100_000,
            exponents: vec![-0.95, -0.75, -0.55],
            trials: 200,
            master_seed: 7,
            trial_budget: DEFAULT_TRIAL_BUDGET,
            exec: Execution::default(),
        };
        let points = run_threshold_sweep(&cfg).unwrap();
        assert!(points[0].hit_fraction <= 0.02);
        assert!(points[2].hit_fraction >= 0.98);
        assert!(points[0].hit_fraction <= points[1].hit_fraction);
        assert!(points[1].hit_fraction <= points[2].hit_fraction);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(crate::testing::config(200))]

        #[test]
        fn aggregation_is_order_free(
            values in proptest::collection::vec(0u64..20, 1..200),
            cap_t in 0usize..12,
            mu in 1u32..400,
            seed in any::<u64>(),
        ) {
            let dist = EmpiricalDistribution::from_values(&values, cap_t);
            prop_assert_eq!(dist.counts.iter().sum::<u64>() + dist.overflow, dist.trials);
            let mut shuffled = values.clone();
            let mut rng = trial_rng(seed, 0);
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, rand::Rng::random_range(&mut rng, 0..=i));
            }
            prop_assert_eq!(&EmpiricalDistribution::from_values(&shuffled, cap_t), &dist);
            prop_assert!(dist.variance >= Rational::zero());
            let cmp = compare_poisson(&dist, &Rational::new(BigInt::from(mu), BigInt::from(100)), true);
            prop_assert!((0.0..=1.0).contains(&cmp.tv_distance));
            prop_assert!(cmp.chi_square >= 0.0);
        }

        #[test]
        fn samples_are_increasing_and_in_range(n in 1u64..5_000, p in 0.0f64..=1.0, seed in any::<u64>()) {
            let set = sample_set(n, p, &mut trial_rng(seed, 3));
            prop_assert!(set.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(set.iter().all(|&v| v >= 1 && v as u64 <= n));
            prop_assert_eq!(sample_set(n, p, &mut trial_rng(seed, 3)), set);
        }
    }
}
