use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use linthresh::census::{CensusEngine, IntSet, SolutionCensus};
use linthresh::ehrhart::{volume, BoxRange, CountOptions, FitOptions, VolumeResult};
use linthresh::lattice::Budget;
use linthresh::linalg::{parse_rational, to_f64, Exact, Rational};
use linthresh::simulate::{
    mu_of, mu_polynomial, run_poisson_experiment, run_threshold_sweep, ExperimentConfig,
    PoissonExperiment, ProbabilitySpec, SweepConfig, SweepPoint,
};
use linthresh::structure::{
    balance_check, c_exponent, nontrivial_partitions, symmetry_constant, BalanceReport,
    BalanceVerdict, ExponentReport, SymmetryConstant,
};
use linthresh::{Execution, Family, LinearSystem};
use serde::Serialize;

use crate::args::{
    AnalyzeArgs, CountArgs, FitArgs, GlobalArgs, PoissonArgs, RangeArg, SweepArgs, SystemArgs,
    TrialArgs, VolumeArgs,
};
use crate::output::{CliError, Document, Field, SystemInfo};

/// What a command hands back for printing: the text summary and the JSON
/// document.
pub struct Rendered {
    pub text: String,
    pub json: String,
    pub persisted: Option<std::path::PathBuf>,
}

pub fn load_system(args: &SystemArgs) -> Result<LinearSystem, CliError> {
    if let Some(path) = &args.matrix {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
        return Ok(LinearSystem::parse(&text)?);
    }
    let keyword = args
        .family
        .as_deref()
        .expect("clap requires a family or --matrix");
    let family = Family::from_keyword(keyword, args.k, args.h, args.g)?;
    Ok(LinearSystem::named(family)?)
}

fn require_admissible(system: &LinearSystem) -> Result<(), CliError> {
    if system.is_admissible() {
        Ok(())
    } else {
        Err(CliError::not_admissible(system))
    }
}

/// A set given inline (`{1,2,4}`, `[1,2,4]`, `1 2 4`) or as a file of integers.
pub fn parse_set(spec: &str) -> Result<IntSet, CliError> {
    let path = Path::new(spec);
    let text = if path.is_file() {
        std::fs::read_to_string(path)?
    } else {
        spec.to_string()
    };
    let values = text
        .split(|c: char| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '[' | ']'))
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| CliError::parse(format!("set entry {t:?} is not an integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntSet::new(values))
}

fn fit_options(args: &FitArgs) -> FitOptions {
    FitOptions {
        period_max: args.period_max,
        verify_samples: args.verify_samples,
        count: CountOptions {
            budget: args.budget,
            exec: Execution::default(),
        },
    }
}

fn finish<C: Serialize, R: Serialize>(
    global: &GlobalArgs,
    doc: Document<'_, C, R>,
    text: String,
) -> Result<Rendered, CliError> {
    let persisted = match &global.out {
        Some(dir) => Some(doc.persist(dir)?),
        None => None,
    };
    Ok(Rendered {
        text,
        json: doc.to_json(),
        persisted,
    })
}

fn wall_time(global: &GlobalArgs, start: Instant) -> Option<f64> {
    (!global.no_wall_time).then(|| start.elapsed().as_secs_f64())
}

fn decimal(value: &Rational) -> String {
    format!("{} ≈ {:.6}", value, to_f64(value))
}

fn verdict_text(verdict: BalanceVerdict) -> &'static str {
    match verdict {
        BalanceVerdict::StrictlyBalanced => "strictly balanced",
        BalanceVerdict::BalancedNotStrictly => "balanced, not strictly",
        BalanceVerdict::Unbalanced => "unbalanced",
    }
}

#[derive(Serialize)]
struct MuReport {
    #[serde(serialize_with = "linthresh::linalg::serialize_rational")]
    coefficient: Rational,
    expression: String,
    theorem_backed: bool,
}

#[derive(Serialize)]
struct AnalysisReport {
    exponent: Field<ExponentReport>,
    symmetry: Field<SymmetryConstant>,
    nontrivial_partitions: Field<usize>,
    balance: Field<BalanceReport>,
    volume: Field<VolumeResult>,
    mu: Field<MuReport>,
}

#[derive(Serialize)]
struct AnalyzeConfig<'a> {
    input: &'a SystemArgs,
    fit: &'a FitArgs,
    skip_volume: bool,
}

pub fn analyze(args: &AnalyzeArgs, global: &GlobalArgs) -> Result<Rendered, CliError> {
    let start = Instant::now();
    let system = load_system(&args.system)?;
    if let Some(path) = &args.dump_matrix {
        std::fs::write(path, system.to_text())?;
    }
    require_admissible(&system)?;

    let exponent = Field::from_result(c_exponent(&system));
    let symmetry = Field::from_result(symmetry_constant(&system));
    let partitions = Field::from_result(nontrivial_partitions(&system).map(|p| p.len()));
    let balance = Field::from_result(balance_check(&system));
    let volume = if args.skip_volume {
        Field::Skipped {
            skipped: "--skip-volume".into(),
        }
    } else {
        Field::from_result(volume(&system, &fit_options(&args.fit)))
    };
    let mu = match volume.value().and_then(|v| v.mu_coefficient.clone()) {
        Some(coefficient) => Field::Value(MuReport {
            expression: mu_polynomial(&coefficient, system.m()),
            coefficient,
            theorem_backed: balance
                .value()
                .is_some_and(|b| b.verdict == BalanceVerdict::StrictlyBalanced),
        }),
        None => Field::Skipped {
            skipped: "needs Vol(P_M) and sigma(M)".into(),
        },
    };
    let report = AnalysisReport {
        exponent,
        symmetry,
        nontrivial_partitions: partitions,
        balance,
        volume,
        mu,
    };

    let mut text = String::new();
    let name = system.name().unwrap_or("matrix");
    let _ = writeln!(
        text,
        "system        {name} (r = {}, m = {})",
        system.r(),
        system.m()
    );
    for row in system.integer_rows() {
        let items: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "              {}", items.join(" "));
    }
    let _ = writeln!(text, "admissible    yes");
    match &report.exponent {
        Field::Value(e) => {
            let _ = writeln!(
                text,
                "c(M)          {} (argmax Q = {}); threshold p = n^({})",
                e.c_value, e.argmax, e.threshold_exponent
            );
        }
        Field::Skipped { skipped } => {
            let _ = writeln!(text, "c(M)          skipped: {skipped}");
        }
    }
    match &report.symmetry {
        Field::Value(s) => {
            let _ = writeln!(text, "sigma(M)      {} ({:?})", s.sigma, s.provenance);
        }
        Field::Skipped { skipped } => {
            let _ = writeln!(text, "sigma(M)      skipped: {skipped}");
        }
    }
    match &report.nontrivial_partitions {
        Field::Value(count) => {
            let _ = writeln!(text, "|P(M)|        {count}");
        }
        Field::Skipped { skipped } => {
            let _ = writeln!(text, "|P(M)|        skipped: {skipped}");
        }
    }
    match &report.balance {
        Field::Value(b) => {
            let _ = write!(text, "balance       {}", verdict_text(b.verdict));
            if let Some(w) = &b.witness {
                let _ = write!(
                    text,
                    " (witness p = {}, Q = {}, ratio {})",
                    w.partition, w.q, w.ratio
                );
            }
            let _ = writeln!(text);
        }
        Field::Skipped { skipped } => {
            let _ = writeln!(text, "balance       skipped: {skipped}");
        }
    }
    match &report.volume {
        Field::Value(v) => {
            let _ = write!(text, "Vol(P_M)      {} [{}", decimal(&v.volume), v.source);
            if let Some(fit) = &v.fit {
                let _ = write!(text, ", degree {}, period {}", fit.degree, fit.period);
            }
            let _ = writeln!(text, "]");
        }
        Field::Skipped { skipped } => {
            let _ = writeln!(text, "Vol(P_M)      skipped: {skipped}");
        }
    }
    match &report.mu {
        Field::Value(mu) => {
            let _ = writeln!(text, "mu(C)         {}", mu.expression);
            if !mu.theorem_backed {
                let _ = writeln!(
                    text,
                    "              (not strictly balanced: no Poisson limit expected)"
                );
            }
        }
        Field::Skipped { skipped } => {
            let _ = writeln!(text, "mu(C)         skipped: {skipped}");
        }
    }

    let config = AnalyzeConfig {
        input: &args.system,
        fit: &args.fit,
        skip_volume: args.skip_volume,
    };
    let doc = Document {
        command: "analyze",
        config,
        system: SystemInfo::of(&system),
        results: report,
        seed: None,
        version: env!("CARGO_PKG_VERSION"),
        wall_time: wall_time(global, start),
    };
    finish(global, doc, text)
}

#[derive(Serialize)]
struct VolumeConfig<'a> {
    input: &'a SystemArgs,
    fit: &'a FitArgs,
}

pub fn volume_cmd(args: &VolumeArgs, global: &GlobalArgs) -> Result<Rendered, CliError> {
    let start = Instant::now();
    let system = load_system(&args.system)?;
    require_admissible(&system)?;
    let result = volume(&system, &fit_options(&args.fit))?;

    let mut text = format!("Vol(P_M) = {}\n", decimal(&result.volume));
    let _ = write!(text, "source    {}", result.source);
    if let Some(fit) = &result.fit {
        let _ = write!(text, " (degree {}, period {})", fit.degree, fit.period);
    }
    let _ = writeln!(text);
    for check in &result.cross_checks {
        let _ = writeln!(text, "agrees    {} = {}", check.source, check.volume);
    }
    if let (Some(sigma), Some(coefficient)) = (&result.sigma, &result.mu_coefficient) {
        let _ = writeln!(text, "sigma(M)  {} ({:?})", sigma.sigma, sigma.provenance);
        let _ = writeln!(text, "mu(C)     {}", mu_polynomial(coefficient, system.m()));
    }
    let doc = Document {
        command: "volume",
        config: VolumeConfig {
            input: &args.system,
            fit: &args.fit,
        },
        system: SystemInfo::of(&system),
        results: &result,
        seed: None,
        version: env!("CARGO_PKG_VERSION"),
        wall_time: wall_time(global, start),
    };
    finish(global, doc, text)
}

#[derive(Serialize)]
struct CountConfig<'a> {
    input: &'a SystemArgs,
    set: Option<&'a str>,
    n: Option<u64>,
    range: RangeArg,
    budget: u64,
}

#[derive(Serialize)]
struct CountResults<'a> {
    set_size: usize,
    census: &'a SolutionCensus,
}

pub fn count(args: &CountArgs, global: &GlobalArgs) -> Result<Rendered, CliError> {
    let start = Instant::now();
    let system = load_system(&args.system)?;
    require_admissible(&system)?;
    let set = match (&args.set, args.n) {
        (Some(spec), _) => parse_set(spec)?,
        (None, Some(n)) => {
            let range = match args.range {
                RangeArg::ZeroToN => BoxRange::ZeroToN,
                RangeArg::OneToN => BoxRange::OneToN,
            };
            IntSet::new(range.values(n))
        }
        (None, None) => return Err(CliError::parse("either --set or --n is required")),
    };
    let engine = CensusEngine::new(&system)?;
    let census = engine.census(&set, Execution::default(), &Budget::new(args.budget))?;

    let mut text = format!("|A| = {}\n", set.len());
    let _ = writeln!(text, "raw solution vectors      {}", census.raw_vectors);
    let _ = writeln!(text, "trivial vectors           {}", census.trivial_vectors);
    let _ = writeln!(text, "proper vectors            {}", census.proper_vectors);
    let _ = writeln!(text, "proper orbits             {}", census.proper_orbits);
    let _ = writeln!(
        text,
        "X (non-trivial orbits)    {}",
        census.nontrivial_orbits
    );
    for (partition, orbits) in &census.per_partition {
        let _ = writeln!(text, "  {partition}  {orbits}");
    }
    let doc = Document {
        command: "count",
        config: CountConfig {
            input: &args.system,
            set: args.set.as_deref(),
            n: args.n,
            range: args.range,
            budget: args.budget,
        },
        system: SystemInfo::of(&system),
        results: CountResults {
            set_size: set.len(),
            census: &census,
        },
        seed: None,
        version: env!("CARGO_PKG_VERSION"),
        wall_time: wall_time(global, start),
    };
    finish(global, doc, text)
}

fn resolve_seed(trials: &TrialArgs) -> u64 {
    trials.seed.unwrap_or_else(rand::random)
}

#[derive(Serialize)]
struct PoissonConfig<'a> {
    input: &'a SystemArgs,
    n: u64,
    trials: u64,
    #[serde(rename = "C")]
    c: Exact<'a>,
    cap_t: usize,
    trial_budget: u64,
}

pub fn poisson(args: &PoissonArgs, global: &GlobalArgs) -> Result<Rendered, CliError> {
    let start = Instant::now();
    let system = load_system(&args.system)?;
    require_admissible(&system)?;
    let c = parse_rational(&args.c)
        .filter(|c| *c > Rational::from_integer(0.into()))
        .ok_or_else(|| CliError::parse(format!("--C {:?} is not a positive number", args.c)))?;
    let seed = resolve_seed(&args.trials);
    let mut cfg = ExperimentConfig::new(
        system.clone(),
        args.trials.n,
        ProbabilitySpec::Constant(c.clone()),
        args.trials.trials,
        seed,
    );
    cfg.cap_t = args.cap_t;
    cfg.trial_budget = args.trials.trial_budget;
    let run: PoissonExperiment = run_poisson_experiment(&cfg)?;

    if let Some(path) = &args.csv {
        let mut csv = String::from("t,empirical,poisson\n");
        for row in &run.comparison.rows {
            let t = row
                .t
                .map_or_else(|| format!(">{}", args.cap_t), |t| t.to_string());
            let _ = writeln!(csv, "{t},{},{}", row.empirical, row.poisson);
        }
        std::fs::write(path, csv)?;
    }

    let cmp = &run.comparison;
    let mut text = format!("p = {:.6e}, mean |A| = {:.2}\n", run.p, run.mean_set_size);
    let _ = writeln!(text, "mu               {}", decimal(&cmp.mu));
    if !cmp.theorem_backed {
        let _ = writeln!(
            text,
            "                 (not strictly balanced: no Poisson limit expected)"
        );
    }
    let _ = writeln!(
        text,
        "trials           {} completed, {} aborted",
        run.distribution.trials,
        run.aborted.len()
    );
    let _ = writeln!(
        text,
        "mean / variance  {:.4} / {:.4} (ratios to mu {:.3} / {:.3})",
        to_f64(&run.distribution.mean),
        to_f64(&run.distribution.variance),
        cmp.mean_ratio,
        cmp.variance_ratio
    );
    let _ = writeln!(text, "TV distance      {:.4}", cmp.tv_distance);
    let _ = writeln!(
        text,
        "chi-square       {:.3} over {} cells",
        cmp.chi_square, cmp.chi_square_cells
    );
    let _ = writeln!(
        text,
        "P(X = 0)         {:.4} (Poisson {:.4})",
        cmp.p_zero_empirical, cmp.p_zero_predicted
    );
    let _ = writeln!(text, "seed             {seed}");

    let doc = Document {
        command: "simulate-poisson",
        config: PoissonConfig {
            input: &args.system,
            n: args.trials.n,
            trials: args.trials.trials,
            c: Exact(&c),
            cap_t: args.cap_t,
            trial_budget: args.trials.trial_budget,
        },
        system: SystemInfo::of(&system),
        results: &run,
        seed: Some(seed),
        version: env!("CARGO_PKG_VERSION"),
        wall_time: wall_time(global, start),
    };
    finish(global, doc, text)
}

#[derive(Serialize)]
struct SweepConfigDoc<'a> {
    input: &'a SystemArgs,
    n: u64,
    trials: u64,
    exponents: &'a [f64],
    trial_budget: u64,
}

#[derive(Serialize)]
struct SweepResults<'a> {
    /// `-1/c(M)`, where the hit fraction should cross over.
    threshold_exponent: Option<f64>,
    expected_at_threshold: Option<f64>,
    points: &'a [SweepPoint],
}

pub fn sweep(args: &SweepArgs, global: &GlobalArgs) -> Result<Rendered, CliError> {
    let start = Instant::now();
    let system = load_system(&args.system)?;
    require_admissible(&system)?;
    let seed = resolve_seed(&args.trials);
    let cfg = SweepConfig {
        system: system.clone(),
        n: args.trials.n,
        exponents: args.exponents.clone(),
        trials: args.trials.trials,
        master_seed: seed,
        trial_budget: args.trials.trial_budget,
        exec: Execution::default(),
    };
    let points = run_threshold_sweep(&cfg)?;
    let threshold = c_exponent(&system)
        .ok()
        .map(|e| to_f64(&e.threshold_exponent));
    // 1 - e^{-mu} at C = 1, when mu is available.
    let expected = mu_of(&system, &Rational::from_integer(1.into()))
        .ok()
        .map(|mu| 1.0 - (-to_f64(&mu.mu)).exp());

    let mut text = String::new();
    if let Some(t) = threshold {
        let _ = writeln!(text, "threshold exponent -1/c(M) = {t:.4}");
    }
    let _ = writeln!(
        text,
        "{:>10} {:>14} {:>12} {:>10}",
        "exponent", "p", "hits", "fraction"
    );
    for point in &points {
        let _ = writeln!(
            text,
            "{:>10.4} {:>14.6e} {:>12} {:>10.4}",
            point.exponent,
            point.p,
            format!("{}/{}", point.hits, point.trials),
            point.hit_fraction
        );
    }
    let _ = writeln!(text, "seed {seed}");

    let doc = Document {
        command: "simulate-sweep",
        config: SweepConfigDoc {
            input: &args.system,
            n: args.trials.n,
            trials: args.trials.trials,
            exponents: &args.exponents,
            trial_budget: args.trials.trial_budget,
        },
        system: SystemInfo::of(&system),
        results: SweepResults {
            threshold_exponent: threshold,
            expected_at_threshold: expected,
            points: &points,
        },
        seed: Some(seed),
        version: env!("CARGO_PKG_VERSION"),
        wall_time: wall_time(global, start),
    };
    finish(global, doc, text)
}
