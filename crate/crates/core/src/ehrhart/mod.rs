//! Lattice-point counts in boxes, Ehrhart pseudopolynomial fitting and the
//! volume `Vol(P_M)`.

mod closed_form;

pub use closed_form::{
    bh1_volume_closed_form, bhg_f, bhg_representation_count, kap_closed_form, kap_volume,
    kcube_volume,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::lattice::{Budget, BudgetExceeded, Parametrization, DEFAULT_BUDGET};
use crate::linalg::{evaluate_polynomial, interpolate, Rational};
use crate::par::{map_range, Execution};
use crate::structure::{symmetry_constant, SymmetryConstant};
use crate::system::{Family, LinearSystem};

pub const DEFAULT_PERIOD_MAX: u64 = 24;
pub const DEFAULT_VERIFY_SAMPLES: usize = 3;

#[derive(Debug, thiserror::Error)]
pub enum EhrhartError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("no period up to {period_max} reproduces the verification samples; best residuals {residuals}")]
    FitFailed { period_max: u64, residuals: String },
    #[error("system is not admissible: {0}")]
    NotAdmissible(String),
    #[error("{origin} gives volume {closed}, interpolation gives {fitted}")]
    Disagreement {
        origin: VolumeSource,
        closed: Box<Rational>,
        fitted: Box<Rational>,
    },
    #[error("count {0} does not fit in 128 bits")]
    Overflow(String),
}

/// Coordinate box: `{0..n}` for volume fitting, `{1..n}` for simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoxRange {
    #[serde(rename = "0n")]
    ZeroToN,
    #[serde(rename = "1n")]
    OneToN,
}

impl BoxRange {
    /// Sorted coordinate values; empty for `{1..0}`.
    pub fn values(self, n: u64) -> Vec<i64> {
        let n = i64::try_from(n).expect("n fits i64");
        match self {
            BoxRange::ZeroToN => (0..=n).collect(),
            BoxRange::OneToN => (1..=n).collect(),
        }
    }
}

impl fmt::Display for BoxRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoxRange::ZeroToN => "0n",
            BoxRange::OneToN => "1n",
        })
    }
}

impl FromStr for BoxRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0n" | "0" => Ok(BoxRange::ZeroToN),
            "1n" | "1" => Ok(BoxRange::OneToN),
            other => Err(format!("range must be 0n or 1n, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    pub budget: u64,
    pub exec: Execution,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            exec: Execution::default(),
        }
    }
}

/// `(h, g)` when the system is a `B_h[g]` family (Sidon is `B_2[1]`).
fn bhg_parameters(system: &LinearSystem) -> Option<(usize, usize)> {
    match system.family()? {
        Family::Bhg { h, g } => Some((h, g)),
        Family::Sidon => Some((2, 1)),
        _ => None,
    }
}

/// Number of integer `x` in the box with `M x = 0`. Named `B_h[g]` systems use
/// the representation-count convolution; everything else backtracks.
pub fn lattice_count(system: &LinearSystem, n: u64, range: BoxRange) -> Result<u128, EhrhartError> {
    lattice_count_with(system, n, range, &CountOptions::default())
}

pub fn lattice_count_with(
    system: &LinearSystem,
    n: u64,
    range: BoxRange,
    options: &CountOptions,
) -> Result<u128, EhrhartError> {
    match bhg_parameters(system) {
        Some((h, g)) => bhg_lattice_count(h, g, n, range),
        None => lattice_count_backtracking(system, n, range, options),
    }
}

/// `Σ_k a(k)^{g+1}` over block sums `k`. On `{1..n}` every block sum shifts
/// by `h`, so the count equals the `{0..n-1}` one.
pub fn bhg_lattice_count(
    h: usize,
    g: usize,
    n: u64,
    range: BoxRange,
) -> Result<u128, EhrhartError> {
    let top = match range {
        BoxRange::ZeroToN => n,
        BoxRange::OneToN if n == 0 => return Ok(0),
        BoxRange::OneToN => n - 1,
    };
    let mut total = 0u128;
    for k in 0..=h as u64 * top {
        let a = if top == 0 {
            1
        } else {
            bhg_representation_count(h, top, k).expect("k <= h n")
        };
        let term = a
            .checked_pow(g as u32 + 1)
            .and_then(|t| total.checked_add(t))
            .ok_or_else(|| EhrhartError::Overflow(format!("B_{h}[{g}] at n = {n}")))?;
        total = term;
    }
    Ok(total)
}

/// Backtracking over the free columns with interval pruning, split over the
/// value of the first free coordinate.
pub fn lattice_count_backtracking(
    system: &LinearSystem,
    n: u64,
    range: BoxRange,
    options: &CountOptions,
) -> Result<u128, EhrhartError> {
    let values = range.values(n);
    let (lo, hi) = match (values.first(), values.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Ok(0),
    };
    let param = Parametrization::new(system);
    let budget = Budget::new(options.budget);
    let accept = move |v: i64| v >= lo && v <= hi;
    let branches = map_range(options.exec, param.branch_count(&values), |first| {
        let mut count = 0u128;
        param
            .enumerate_branch(&values, &accept, first, &budget, &mut |_| {
                count += 1;
                ControlFlow::Continue(())
            })
            .map(|_| count)
    });
    let mut total = 0u128;
    for branch in branches {
        total += branch?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub period_max: u64,
    pub verify_samples: usize,
    pub count: CountOptions,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            period_max: DEFAULT_PERIOD_MAX,
            verify_samples: DEFAULT_VERIFY_SAMPLES,
            count: CountOptions::default(),
        }
    }
}

/// The residue-zero polynomial of an Ehrhart pseudopolynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EhrhartFit {
    pub degree: usize,
    pub period: u64,
    /// Constant term first; valid for `n ≡ 0 (mod period)`.
    #[serde(serialize_with = "crate::linalg::serialize_rationals")]
    pub coefficients: Vec<Rational>,
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub leading: Rational,
    /// `(n, count)` at the interpolation nodes.
    pub samples: Vec<(u64, u128)>,
    /// `n` values where the fit was checked beyond the nodes.
    pub verified_at: Vec<u64>,
}

impl EhrhartFit {
    pub fn evaluate(&self, n: u64) -> Rational {
        evaluate_polynomial(&self.coefficients, &Rational::from_integer(BigInt::from(n)))
    }
}

/// Fits a degree-`degree` polynomial to `count` on multiples of a period
/// `T = 1, 2, ..`: nodes `0, T, .., degree T`, then checks `verify_samples`
/// further multiples. Returns the first period that verifies.
pub fn fit_sequence(
    degree: usize,
    period_max: u64,
    verify_samples: usize,
    mut count: impl FnMut(u64) -> Result<u128, EhrhartError>,
) -> Result<EhrhartFit, EhrhartError> {
    let mut cache: BTreeMap<u64, u128> = BTreeMap::new();
    let mut value = |n: u64, cache: &mut BTreeMap<u64, u128>| -> Result<u128, EhrhartError> {
        if let Some(&v) = cache.get(&n) {
            return Ok(v);
        }
        let v = count(n)?;
        cache.insert(n, v);
        Ok(v)
    };
    let to_rational = |v: u128| Rational::from_integer(BigInt::from(v));
    let mut best: Option<(Rational, u64)> = None;
    for period in 1..=period_max {
        let nodes: Vec<u64> = (0..=degree as u64).map(|i| i * period).collect();
        let mut samples = Vec::with_capacity(nodes.len());
        for &n in &nodes {
            samples.push((n, value(n, &mut cache)?));
        }
        let xs: Vec<Rational> = nodes.iter().map(|&n| to_rational(u128::from(n))).collect();
        let ys: Vec<Rational> = samples.iter().map(|&(_, v)| to_rational(v)).collect();
        let coefficients = interpolate(&xs, &ys).expect("nodes are distinct");
        let verified_at: Vec<u64> = (1..=verify_samples as u64)
            .map(|i| (degree as u64 + i) * period)
            .collect();
        let mut worst = Rational::from_integer(BigInt::from(0));
        for &n in &verified_at {
            let predicted = evaluate_polynomial(&coefficients, &to_rational(u128::from(n)));
            let residual =
                num_traits::Signed::abs(&(predicted - to_rational(value(n, &mut cache)?)));
            if residual > worst {
                worst = residual;
            }
        }
        if num_traits::Zero::is_zero(&worst) {
            let leading = coefficients[degree].clone();
            return Ok(EhrhartFit {
                degree,
                period,
                coefficients,
                leading,
                samples,
                verified_at,
            });
        }
        if best.as_ref().is_none_or(|(w, _)| worst < *w) {
            best = Some((worst, period));
        }
    }
    let residuals = best.map_or_else(
        || "none".to_string(),
        |(w, period)| format!("max |residual| {w} at period {period}"),
    );
    Err(EhrhartError::FitFailed {
        period_max,
        residuals,
    })
}

/// Fits `lattice_count(S, n, {0..n})`; the leading coefficient is `Vol(P_M)`.
pub fn fit_pseudopolynomial(
    system: &LinearSystem,
    options: &FitOptions,
) -> Result<EhrhartFit, EhrhartError> {
    if !system.is_admissible() {
        return Err(EhrhartError::NotAdmissible(
            system.admissibility().violation().unwrap_or_default(),
        ));
    }
    let degree = system.m() - system.r();
    fit_sequence(degree, options.period_max, options.verify_samples, |n| {
        lattice_count_with(system, n, BoxRange::ZeroToN, &options.count)
    })
}

/// Fits `f_{h,g}`; its leading coefficient is `Vol(P_{B_h[g]})`.
pub fn fit_bhg_f(h: usize, g: usize, options: &FitOptions) -> Result<EhrhartFit, EhrhartError> {
    let degree = (h - 1) * (g + 1) + 1;
    fit_sequence(degree, options.period_max, options.verify_samples, |n| {
        Ok(bhg_f(h, g, n))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeSource {
    Interpolation,
    ClosedFormKap,
    ClosedFormBhg,
    ClosedFormBh1,
    LibraryConstant,
}

impl fmt::Display for VolumeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VolumeSource::Interpolation => "interpolation",
            VolumeSource::ClosedFormKap => "closed_form_kap",
            VolumeSource::ClosedFormBhg => "closed_form_bhg",
            VolumeSource::ClosedFormBh1 => "closed_form_bh1",
            VolumeSource::LibraryConstant => "library_constant",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub source: VolumeSource,
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub volume: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VolumeResult {
    #[serde(serialize_with = "crate::linalg::serialize_rational")]
    pub volume: Rational,
    /// `Vol(P_M) / σ(M)`, when `σ(M)` is available.
    #[serde(serialize_with = "crate::linalg::serialize_optional_rational")]
    pub mu_coefficient: Option<Rational>,
    pub sigma: Option<SymmetryConstant>,
    pub source: VolumeSource,
    pub fit: Option<EhrhartFit>,
    /// Closed forms evaluated alongside the primary source; all agree with it.
    pub cross_checks: Vec<CrossCheck>,
}

/// Closed-form volumes that apply to the system's family.
pub fn closed_form_volumes(
    system: &LinearSystem,
    options: &FitOptions,
) -> Result<Vec<CrossCheck>, EhrhartError> {
    let mut out = Vec::new();
    match system.family() {
        Some(Family::KAp { k }) => out.push(CrossCheck {
            source: VolumeSource::ClosedFormKap,
            volume: kap_volume(k),
        }),
        Some(Family::KCube { k }) => out.push(CrossCheck {
            source: VolumeSource::LibraryConstant,
            volume: kcube_volume(k),
        }),
        _ => {}
    }
    if let Some((h, g)) = bhg_parameters(system) {
        out.push(CrossCheck {
            source: VolumeSource::ClosedFormBhg,
            volume: fit_bhg_f(h, g, options)?.leading,
        });
        if g == 1 {
            out.push(CrossCheck {
                source: VolumeSource::ClosedFormBh1,
                volume: bh1_volume_closed_form(h),
            });
        }
    }
    Ok(out)
}

/// Rough node count of a full fit at period 1.
fn fit_work_estimate(system: &LinearSystem, verify_samples: usize) -> f64 {
    let d = system.m() - system.r();
    let n_max = (d + verify_samples) as f64;
    (n_max + 1.0).powi(d as i32)
}

/// `Vol(P_M)` by interpolation, cross-checked against every applicable closed
/// form. Falls back to a closed form when interpolation would exceed the
/// budget and one exists.
pub fn volume(system: &LinearSystem, options: &FitOptions) -> Result<VolumeResult, EhrhartError> {
    if !system.is_admissible() {
        return Err(EhrhartError::NotAdmissible(
            system.admissibility().violation().unwrap_or_default(),
        ));
    }
    let closed = closed_form_volumes(system, options)?;
    let too_big = bhg_parameters(system).is_none()
        && fit_work_estimate(system, options.verify_samples) > options.count.budget as f64;
    let (volume, source, fit, cross_checks) = match closed.split_first() {
        Some((first, rest)) if too_big => {
            for check in rest {
                if check.volume != first.volume {
                    return Err(EhrhartError::Disagreement {
                        origin: check.source,
                        closed: Box::new(check.volume.clone()),
                        fitted: Box::new(first.volume.clone()),
                    });
                }
            }
            (first.volume.clone(), first.source, None, rest.to_vec())
        }
        _ => {
            let fit = fit_pseudopolynomial(system, options)?;
            for check in &closed {
                if check.volume != fit.leading {
                    return Err(EhrhartError::Disagreement {
                        origin: check.source,
                        closed: Box::new(check.volume.clone()),
                        fitted: Box::new(fit.leading.clone()),
                    });
                }
            }
            (
                fit.leading.clone(),
                VolumeSource::Interpolation,
                Some(fit),
                closed,
            )
        }
    };
    let sigma = symmetry_constant(system).ok();
    let mu_coefficient = sigma
        .as_ref()
        .map(|s| &volume / Rational::from_integer(BigInt::from(s.sigma)));
    Ok(VolumeResult {
        volume,
        mu_coefficient,
        sigma,
        source,
        fit,
        cross_checks,
    })
}
