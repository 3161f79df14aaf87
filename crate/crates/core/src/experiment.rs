//! Clean/noisy experiment runs and the sweep presets.
//!
//! One trial draws a clean and a noisy plane dataset from the same seed,
//! trains one model on each with identical structure and compares them
//! with [`difference_surface`]. A sweep runs every preset cell over
//! `trials` seeds (`base ^ trial`) and reports medians.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::datagen::{
    make_plane_dataset, trial_seed, DataSpec, Dataset, Distribution, DEFAULT_INPUT_RANGE,
    DEFAULT_OUTPUT_RANGE,
};
use crate::error::{Error, Result};
use crate::evaluation::{difference_surface, DiffReport, DEFAULT_RESOLUTION};
use crate::inference::FuzzyModel;
use crate::learning::{learn, Algorithm, Init, NeuroFuzzyConfig};
use crate::membership::{MfKind, Partition, DEFAULT_WIDTH_FACTOR};

/// Input set counts of the partition sweep.
pub const PARTITION_SWEEP_SETS: [usize; 4] = [3, 5, 7, 9];
pub const NOISE_LEVELS: [f64; 2] = [0.10, 0.30];
pub const DATA_SIZES: [usize; 2] = [100, 400];
pub const ALPHA_SWEEP: [f64; 3] = [0.1, 0.8, 0.95];
pub const DEFAULT_OUTPUT_SETS: usize = 13;
pub const DEFAULT_TRIALS: usize = 10;

/// Everything needed to reproduce one clean/noisy comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub input_sets: usize,
    pub output_sets: usize,
    pub noise_level: f64,
    pub n_examples: usize,
    pub distribution: Distribution,
    pub seed: u64,
    pub alpha: f64,
    pub epochs: usize,
    pub init: Init,
    pub resolution: usize,
    pub width_factor: f64,
    pub input_range: (f64, f64),
    pub output_range: (f64, f64),
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let nf = NeuroFuzzyConfig::default();
        Self {
            algorithm: Algorithm::Simplified,
            input_sets: 9,
            output_sets: DEFAULT_OUTPUT_SETS,
            noise_level: 0.10,
            n_examples: 100,
            distribution: Distribution::Clustered,
            seed: 0,
            alpha: nf.alpha,
            epochs: nf.epochs,
            init: nf.init,
            resolution: DEFAULT_RESOLUTION,
            width_factor: DEFAULT_WIDTH_FACTOR,
            input_range: DEFAULT_INPUT_RANGE,
            output_range: DEFAULT_OUTPUT_RANGE,
        }
    }
}

impl ExperimentConfig {
    pub fn neurofuzzy(&self) -> NeuroFuzzyConfig {
        NeuroFuzzyConfig {
            alpha: self.alpha,
            epochs: self.epochs,
            init: self.init,
        }
    }

    pub fn input_partitions(&self) -> Result<Vec<Partition>> {
        let (lo, hi) = self.input_range;
        let p = Partition::uniform(
            lo,
            hi,
            self.input_sets,
            self.algorithm.input_kind(),
            self.width_factor,
        )?;
        Ok(vec![p.clone(), p])
    }

    pub fn output_partition(&self) -> Result<Partition> {
        let (lo, hi) = self.output_range;
        Partition::uniform(
            lo,
            hi,
            self.output_sets,
            MfKind::Triangular,
            DEFAULT_WIDTH_FACTOR,
        )
    }

    pub fn data_spec(&self, noise_level: f64, seed: u64) -> DataSpec {
        DataSpec {
            n: self.n_examples,
            domain: vec![self.input_range; 2],
            distribution: self.distribution,
            noise_level,
            seed,
        }
    }

    pub fn train(&self, data: &Dataset) -> Result<FuzzyModel> {
        learn(
            self.algorithm,
            &data.examples,
            &self.input_partitions()?,
            &self.output_partition()?,
            &self.neurofuzzy(),
        )
    }

    /// Provenance pairs written into model and report files.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut meta = vec![
            ("algorithm", self.algorithm.to_string()),
            (
                "partitions",
                format!(
                    "{}x{}x{}",
                    self.input_sets, self.input_sets, self.output_sets
                ),
            ),
            ("noise", self.noise_level.to_string()),
            ("n", self.n_examples.to_string()),
            ("seed", self.seed.to_string()),
            ("distribution", self.distribution.to_string()),
        ];
        if self.algorithm == Algorithm::NeuroFuzzy {
            meta.push(("alpha", self.alpha.to_string()));
            meta.push(("epochs", self.epochs.to_string()));
            meta.push(("init", self.init.to_string()));
        }
        meta.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

/// Outcome of one clean/noisy comparison.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub clean: FuzzyModel,
    pub noisy: FuzzyModel,
    pub report: DiffReport,
}

/// Trains the clean/noisy pair for `cfg` (using `cfg.seed`) and diffs them.
pub fn run_trial(cfg: &ExperimentConfig) -> Result<TrialOutcome> {
    let clean_data = make_plane_dataset(&cfg.data_spec(0.0, cfg.seed))?;
    let noisy_data = make_plane_dataset(&cfg.data_spec(cfg.noise_level, cfg.seed))?;
    let clean = cfg.train(&clean_data)?;
    let noisy = cfg.train(&noisy_data)?;
    let report = difference_surface(&clean, &noisy, cfg.resolution)?;
    Ok(TrialOutcome {
        clean,
        noisy,
        report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    PartitionSweep,
    NoiseLevels,
    DataSize,
    AlphaSweep,
    AlgorithmLadder,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::PartitionSweep,
        Preset::NoiseLevels,
        Preset::DataSize,
        Preset::AlphaSweep,
        Preset::AlgorithmLadder,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::PartitionSweep => "partition-sweep",
            Preset::NoiseLevels => "noise-levels",
            Preset::DataSize => "datasize",
            Preset::AlphaSweep => "alpha-sweep",
            Preset::AlgorithmLadder => "algorithm-ladder",
        }
    }

    /// The experiment cells of this preset, in output order.
    ///
    /// `base` supplies everything the preset does not pin (sample count,
    /// distribution, resolution, ...). `only` keeps the cells of a single
    /// algorithm.
    pub fn cells(
        self,
        base: &ExperimentConfig,
        only: Option<Algorithm>,
    ) -> Result<Vec<ExperimentConfig>> {
        let with = |algorithm: Algorithm, sets: usize| ExperimentConfig {
            algorithm,
            input_sets: sets,
            noise_level: 0.10,
            ..base.clone()
        };
        let cells: Vec<ExperimentConfig> = match self {
            Preset::PartitionSweep => Algorithm::ALL
                .iter()
                .flat_map(|&a| PARTITION_SWEEP_SETS.iter().map(move |&s| (a, s)))
                .map(|(a, s)| with(a, s))
                .collect(),
            Preset::NoiseLevels => NOISE_LEVELS
                .iter()
                .map(|&noise_level| ExperimentConfig {
                    noise_level,
                    ..with(Algorithm::ClusterTri, 9)
                })
                .collect(),
            Preset::DataSize => DATA_SIZES
                .iter()
                .map(|&n_examples| ExperimentConfig {
                    n_examples,
                    ..with(Algorithm::Simplified, 9)
                })
                .collect(),
            Preset::AlphaSweep => ALPHA_SWEEP
                .iter()
                .map(|&alpha| ExperimentConfig {
                    alpha,
                    epochs: 50,
                    init: Init::ClusterBased,
                    ..with(Algorithm::NeuroFuzzy, 9)
                })
                .collect(),
            Preset::AlgorithmLadder => Algorithm::ALL.iter().map(|&a| with(a, 9)).collect(),
        };
        let cells: Vec<_> = cells
            .into_iter()
            .filter(|c| only.is_none_or(|a| c.algorithm == a))
            .collect();
        if cells.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "preset {} has no cells for the requested algorithm",
                self.as_str()
            )));
        }
        Ok(cells)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Preset::ALL.iter().map(|p| p.as_str()).collect();
                Error::InvalidConfig(format!(
                    "unknown preset '{s}'; valid presets: {}",
                    names.join(", ")
                ))
            })
    }
}

/// Median of the finite values, `None` when there are none.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

/// Per-trial scalars kept for the summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialMetrics {
    pub seed: u64,
    pub rmse: Option<f64>,
    pub max_abs: Option<f64>,
    pub rule_changes: usize,
    pub gap_fraction: f64,
}

/// Median summary of one preset cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub preset: Preset,
    pub config: ExperimentConfig,
    pub trials: usize,
    pub median_rmse: Option<f64>,
    pub median_max_abs: Option<f64>,
    pub median_rule_changes: f64,
    pub median_gap_fraction: f64,
    pub per_trial: Vec<TrialMetrics>,
}

pub const SUMMARY_HEADER: &str = "preset,algorithm,input_sets,output_sets,noise,n,alpha,epochs,init,distribution,trials,median_rmse,median_max_abs,median_rule_changes,median_gap_fraction";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".to_string(), |v| v.to_string())
}

impl SummaryRow {
    pub fn to_csv_row(&self) -> String {
        let c = &self.config;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.preset,
            c.algorithm,
            c.input_sets,
            c.output_sets,
            c.noise_level,
            c.n_examples,
            c.alpha,
            c.epochs,
            c.init,
            c.distribution,
            self.trials,
            opt(self.median_rmse),
            opt(self.median_max_abs),
            self.median_rule_changes,
            self.median_gap_fraction
        )
    }
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

/// Runs every cell of `preset` over `trials` seeds.
///
/// Trials run in parallel; results are gathered in preset order, so the
/// output does not depend on scheduling.
pub fn run_sweep(
    preset: Preset,
    base: &ExperimentConfig,
    only: Option<Algorithm>,
    trials: usize,
) -> Result<Vec<SummaryRow>> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let cells = preset.cells(base, only)?;
    let jobs: Vec<(usize, ExperimentConfig)> = cells
        .iter()
        .enumerate()
        .flat_map(|(ci, cell)| {
            (0..trials).map(move |t| {
                (
                    ci,
                    ExperimentConfig {
                        seed: trial_seed(base.seed, t as u64),
                        ..cell.clone()
                    },
                )
            })
        })
        .collect();
    let metrics: Vec<(usize, TrialMetrics)> = jobs
        .par_iter()
        .map(|(ci, cfg)| {
            let r = run_trial(cfg)?.report;
            Ok((
                *ci,
                TrialMetrics {
                    seed: cfg.seed,
                    rmse: r.rmse,
                    max_abs: r.max_abs,
                    rule_changes: r.rule_changes.changes(),
                    gap_fraction: r.gap_fraction,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(cells
        .into_iter()
        .enumerate()
        .map(|(ci, config)| {
            let per_trial: Vec<TrialMetrics> = metrics
                .iter()
                .filter(|(c, _)| *c == ci)
                .map(|(_, m)| *m)
                .collect();
            let col = |f: &dyn Fn(&TrialMetrics) -> f64| {
                median(&per_trial.iter().map(f).collect::<Vec<_>>())
            };
            SummaryRow {
                preset,
                trials,
                median_rmse: col(&|m| m.rmse.unwrap_or(f64::NAN)),
                median_max_abs: col(&|m| m.max_abs.unwrap_or(f64::NAN)),
                median_rule_changes: col(&|m| m.rule_changes as f64).unwrap_or(0.0),
                median_gap_fraction: col(&|m| m.gap_fraction).unwrap_or(0.0),
                per_trial,
                config: ExperimentConfig {
                    seed: base.seed,
                    ..config
                },
            }
        })
        .collect())
}
