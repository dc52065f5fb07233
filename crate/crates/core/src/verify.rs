//! Exhaustive and sampled checks of the genericity-propagation bound: for a
//! δ-generic representation every surviving weight is `(δ - 2n)`-generic,
//! and `(δ - (n + 1))`-generic when `f = 1`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{GenericityMargin, Params};
use crate::elimination::{rep_compatible, WeightCatalog};
use crate::error::{Error, Result};
use crate::galois::{check_delta, enumerate_semisimple, rep_margin, SemisimpleInertialData};
use crate::io::{RepRecord, WeightRecord, SCHEMA_VERSION};
use crate::weights::{canonicalize, weight_margin, WeightClassKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Bound `δ - 2n`, needs `δ >= 2n + 1`.
    General,
    /// Bound `δ - (n + 1)`, needs `f = 1` and `δ >= n + 2`.
    #[serde(rename = "f_equals_1")]
    FEquals1,
}

impl Mode {
    pub fn bound(self, params: Params, delta: u32) -> u32 {
        let n = params.n as u32;
        match self {
            Mode::General => delta.saturating_sub(2 * n),
            Mode::FEquals1 => delta.saturating_sub(n + 1),
        }
    }

    pub fn check(self, params: Params, delta: u32) -> Result<()> {
        let n = params.n as u32;
        let max = params.max_delta();
        if delta > max {
            return Err(Error::InvalidInput(format!(
                "delta = {delta} exceeds (p-1)/2 = {max} for p = {}",
                params.p
            )));
        }
        match self {
            Mode::General if delta < 2 * n + 1 => Err(Error::InvalidInput(format!(
                "general mode needs delta >= 2n+1 = {}",
                2 * n + 1
            ))),
            Mode::FEquals1 if params.f != 1 => {
                Err(Error::InvalidInput(format!("f_equals_1 mode needs f = 1, got f = {}", params.f)))
            }
            Mode::FEquals1 if delta < n + 2 => Err(Error::InvalidInput(format!(
                "f_equals_1 mode needs delta >= n+2 = {}",
                n + 2
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum Sampling {
    Exhaustive,
    /// Uniform without replacement over the δ-generic stratum.
    Uniform { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    #[serde(flatten)]
    pub params: Params,
    pub delta: u32,
    pub mode: Mode,
    pub sampling: Sampling,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Counterexample,
    InvalidInput,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub rep: RepRecord,
    pub weight: WeightRecord,
    pub rep_margin: u32,
    pub weight_margin: u32,
    pub bound: u32,
}

impl Counterexample {
    /// Re-checks through the library: the rep is δ-generic, the weight
    /// survives, and its margin is below the bound.
    pub fn reverify(&self, delta: u32) -> Result<bool> {
        let rho = self.rep.to_rep()?;
        let w = self.weight.to_weight()?;
        let covering = crate::weights::covering_type(&w);
        Ok(rep_margin(&rho).value() >= delta
            && rep_compatible(&rho, &covering)?
            && weight_margin(&w).value() < self.bound
            && weight_margin(&w).value() == self.weight_margin)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyStats {
    pub weight_classes: usize,
    pub reps_in_stratum: usize,
    pub reps_scanned: usize,
    pub exhaustive: bool,
    pub survivors: u64,
    pub counterexamples: u64,
    pub min_survivor_margin: Option<u32>,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema_version: String,
    pub config: VerifyConfig,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    pub counterexample: Option<Counterexample>,
    pub stats: VerifyStats,
}

impl VerdictReport {
    /// `0` pass, `1` counterexample, `2` invalid input.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Counterexample => 1,
            Verdict::InvalidInput => 2,
        }
    }
}

/// The δ-generic representations, sampled per `sampling`. Returns the stratum
/// size alongside the selection.
pub fn generic_stratum(
    params: Params,
    delta: u32,
    sampling: Sampling,
) -> Result<(usize, Vec<SemisimpleInertialData>)> {
    check_delta(params, delta)?;
    let stratum: Vec<SemisimpleInertialData> = enumerate_semisimple(params)
        .filter(|rho| rep_margin(rho).at_least(delta))
        .collect();
    let total = stratum.len();
    let chosen = match sampling {
        Sampling::Uniform { count, seed } if count < total => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = rand::seq::index::sample(&mut rng, total, count).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| stratum[i].clone()).collect()
        }
        _ => stratum,
    };
    Ok((total, chosen))
}

#[derive(Clone, Debug, Default)]
struct Fold {
    survivors: u64,
    counterexamples: u64,
    min_margin: Option<GenericityMargin>,
    histogram: BTreeMap<u32, u64>,
    first: Option<(SemisimpleInertialData, WeightClassKey, usize)>,
}

impl Fold {
    fn merge(mut self, other: Fold) -> Fold {
        self.survivors += other.survivors;
        self.counterexamples += other.counterexamples;
        self.min_margin = match (self.min_margin, other.min_margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.first = match (self.first, other.first) {
            (Some(a), Some(b)) => Some(if (&b.0, &b.1) < (&a.0, &a.1) { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

fn scan(
    catalog: &WeightCatalog,
    reps: &[SemisimpleInertialData],
    bound: Option<u32>,
) -> Result<Fold> {
    reps.par_iter()
        .map(|rho| -> Result<Fold> {
            let mut fold = Fold::default();
            for idx in catalog.survivors(rho)? {
                let entry = &catalog.entries()[idx];
                let margin = entry.margin;
                fold.survivors += 1;
                *fold.histogram.entry(margin.value()).or_default() += 1;
                fold.min_margin = Some(fold.min_margin.map_or(margin, |m| m.min(margin)));
                if bound.is_some_and(|b| margin.value() < b) {
                    fold.counterexamples += 1;
                    let better = match &fold.first {
                        Some((_, key, _)) => entry.key < *key,
                        None => true,
                    };
                    if better {
                        fold.first = Some((rho.clone(), entry.key.clone(), idx));
                    }
                }
            }
            Ok(fold)
        })
        .try_reduce(Fold::default, |a, b| Ok(a.merge(b)))
}

fn with_workers<R: Send>(workers: Option<usize>, job: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        Some(count) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(count.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Checks every survivor of every selected δ-generic representation against
/// the bound of `mode`.
pub fn verify_theorem(config: &VerifyConfig) -> VerdictReport {
    let started = Instant::now();
    let mut report = VerdictReport {
        schema_version: SCHEMA_VERSION.to_string(),
        config: config.clone(),
        verdict: Verdict::InvalidInput,
        reason: None,
        bound: None,
        counterexample: None,
        stats: VerifyStats::default(),
    };
    if let Err(err) = config.mode.check(config.params, config.delta) {
        report.reason = Some(err.to_string());
        return report;
    }
    let bound = config.mode.bound(config.params, config.delta);
    report.bound = Some(bound);
    let outcome = with_workers(config.workers, || -> Result<_> {
        let catalog = WeightCatalog::new(config.params);
        let (total, reps) = generic_stratum(config.params, config.delta, config.sampling)?;
        let fold = scan(&catalog, &reps, Some(bound))?;
        Ok((catalog, total, reps.len(), fold))
    });
    let (catalog, total, scanned, fold) = match outcome.and_then(|r| r) {
        Ok(v) => v,
        Err(err) => {
            report.reason = Some(err.to_string());
            return report;
        }
    };
    report.stats = VerifyStats {
        weight_classes: catalog.len(),
        reps_in_stratum: total,
        reps_scanned: scanned,
        exhaustive: scanned == total,
        survivors: fold.survivors,
        counterexamples: fold.counterexamples,
        min_survivor_margin: fold.min_margin.map(GenericityMargin::value),
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    match fold.first {
        Some((rho, _, idx)) => {
            let entry = &catalog.entries()[idx];
            report.verdict = Verdict::Counterexample;
            report.counterexample = Some(Counterexample {
                rep: RepRecord::from(&rho),
                weight: WeightRecord::from(&canonicalize(&entry.weight)),
                rep_margin: rep_margin(&rho).value(),
                weight_margin: entry.margin.value(),
                bound,
            });
        }
        None => report.verdict = Verdict::Pass,
    }
    report
}

/// The bound the theorem guarantees at `delta`, if any: the `f = 1` clause
/// when it applies, otherwise the general clause.
pub fn theorem_bound(params: Params, delta: u32) -> Option<u32> {
    if Mode::FEquals1.check(params, delta).is_ok() {
        Some(Mode::FEquals1.bound(params, delta))
    } else if Mode::General.check(params, delta).is_ok() {
        Some(Mode::General.bound(params, delta))
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub margin: u32,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub delta: u32,
    pub reps_in_stratum: usize,
    pub reps_scanned: usize,
    pub survivors: u64,
    pub histogram: Vec<HistogramBin>,
    pub min_survivor_margin: Option<u32>,
    pub theorem_bound: Option<u32>,
    pub bound_holds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyConfig {
    #[serde(flatten)]
    pub params: Params,
    pub delta_min: u32,
    pub delta_max: u32,
    pub sampling: Sampling,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub schema_version: String,
    pub config: SurveyConfig,
    pub strata: Vec<Stratum>,
    pub wall_time_ms: u64,
}

impl SurveyReport {
    pub fn all_bounds_hold(&self) -> bool {
        self.strata.iter().all(|s| s.bound_holds != Some(false))
    }
}

pub const EMPTY_STRATUM_NOTE: &str = "no representations at this genericity";

/// Histogram of survivor margins over δ-generic representations, for each
/// `delta` in the configured range.
pub fn survey(config: &SurveyConfig) -> Result<SurveyReport> {
    let started = Instant::now();
    let deltas: RangeInclusive<u32> = config.delta_min..=config.delta_max;
    if deltas.is_empty() {
        return Err(Error::InvalidInput(format!(
            "empty delta range {}..{}",
            config.delta_min, config.delta_max
        )));
    }
    for delta in deltas.clone() {
        check_delta(config.params, delta)?;
    }
    let strata = with_workers(config.workers, || -> Result<Vec<Stratum>> {
        let catalog = WeightCatalog::new(config.params);
        deltas
            .map(|delta| {
                let (total, reps) = generic_stratum(config.params, delta, config.sampling)?;
                let bound = theorem_bound(config.params, delta);
                let fold = scan(&catalog, &reps, None)?;
                let min = fold.min_margin.map(GenericityMargin::value);
                Ok(Stratum {
                    delta,
                    reps_in_stratum: total,
                    reps_scanned: reps.len(),
                    survivors: fold.survivors,
                    histogram: fold
                        .histogram
                        .into_iter()
                        .map(|(margin, count)| HistogramBin { margin, count })
                        .collect(),
                    min_survivor_margin: min,
                    theorem_bound: bound,
                    bound_holds: bound.map(|b| min.is_none_or(|m| m >= b)),
                    note: (total == 0).then(|| EMPTY_STRATUM_NOTE.to_string()),
                })
            })
            .collect()
    })??;
    Ok(SurveyReport {
        schema_version: SCHEMA_VERSION.to_string(),
        config: config.clone(),
        strata,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}
