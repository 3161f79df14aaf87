//! Rule extraction from examples.
//!
//! Three learners fill a [`FuzzyModel`] grid:
//!
//! * [`wm_learn`]: each example votes for the cell of its best-matching
//!   input sets; per cell the example with the highest implication degree
//!   wins and its best output set's center becomes the conclusion.
//! * [`cluster_learn`]: each cell averages every example's output weighted
//!   by the example's product-t-norm activation of that cell.
//! * [`neurofuzzy_learn`]: starts from a populated grid and tunes the
//!   conclusions by per-example gradient steps on the squared error.
//!
//! Input coordinates are clamped to their partition range everywhere, so
//! noisy values past the domain edge land in the edge sets.

use std::fmt;
use std::str::FromStr;

use crate::datagen::Example;
use crate::error::{Error, Result};
use crate::inference::{FuzzyModel, Rule};
use crate::membership::{MfKind, Partition};

/// Cells whose total weight does not exceed this stay empty.
pub const EMPTY_WEIGHT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Init {
    /// Every cell starts at the midpoint of the output range.
    Zero,
    /// Conclusions start from [`cluster_learn`].
    ClusterBased,
}

impl Init {
    pub fn as_str(self) -> &'static str {
        match self {
            Init::Zero => "zero",
            Init::ClusterBased => "cluster",
        }
    }
}

impl fmt::Display for Init {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Init {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zero" | "midpoint" => Ok(Init::Zero),
            "cluster" | "cluster-based" | "clusterbased" => Ok(Init::ClusterBased),
            other => Err(Error::InvalidConfig(format!(
                "unknown init '{other}' (expected zero or cluster)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuroFuzzyConfig {
    /// Learning rate.
    pub alpha: f64,
    /// Passes over the dataset.
    pub epochs: usize,
    pub init: Init,
}

impl Default for NeuroFuzzyConfig {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            epochs: 50,
            init: Init::ClusterBased,
        }
    }
}

impl NeuroFuzzyConfig {
    pub fn validate(&self) -> Result<()> {
        // alpha = 0 is accepted: it leaves the initialization untouched.
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be a non-negative finite number, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// The learner variants the harness compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Simplified,
    ClusterTri,
    ClusterGauss,
    NeuroFuzzy,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Simplified,
        Algorithm::ClusterTri,
        Algorithm::ClusterGauss,
        Algorithm::NeuroFuzzy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Simplified => "simplified",
            Algorithm::ClusterTri => "cluster-tri",
            Algorithm::ClusterGauss => "cluster-gauss",
            Algorithm::NeuroFuzzy => "neurofuzzy",
        }
    }

    /// Membership kind the algorithm uses for its input partitions.
    pub fn input_kind(self) -> MfKind {
        match self {
            Algorithm::Simplified | Algorithm::ClusterTri => MfKind::Triangular,
            Algorithm::ClusterGauss | Algorithm::NeuroFuzzy => MfKind::Gaussian,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "simplified" | "wm" | "wang-mendel" => Ok(Algorithm::Simplified),
            "cluster-tri" | "cluster-triangular" => Ok(Algorithm::ClusterTri),
            "cluster-gauss" | "cluster-gaussian" => Ok(Algorithm::ClusterGauss),
            "neurofuzzy" | "neuro-fuzzy" => Ok(Algorithm::NeuroFuzzy),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm '{other}' (expected simplified, cluster-tri, cluster-gauss or neurofuzzy)"
            ))),
        }
    }
}

fn check_data(data: &[Example], inputs: &[Partition]) -> Result<()> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(bad) = data.iter().find(|e| e.x.len() != inputs.len()) {
        return Err(Error::DimensionMismatch {
            expected: inputs.len(),
            got: bad.x.len(),
        });
    }
    if data
        .iter()
        .any(|e| !e.z.is_finite() || e.x.iter().any(|v| !v.is_finite()))
    {
        return Err(Error::InvalidConfig("examples must be finite".into()));
    }
    Ok(())
}

/// Simplified (Wang–Mendel) rule extraction over triangular partitions.
///
/// The implication degree of an example is the product of its degrees in
/// the best input sets times its degree in the best output set. Ties keep
/// the earliest example. Conclusions are output-set centers.
pub fn wm_learn(data: &[Example], inputs: &[Partition], output: &Partition) -> Result<FuzzyModel> {
    if inputs
        .iter()
        .chain(std::iter::once(output))
        .any(|p| p.kind() != MfKind::Triangular)
    {
        return Err(Error::WrongPartitionKind {
            algorithm: "simplified",
            required: "triangular",
        });
    }
    check_data(data, inputs)?;

    let mut model = FuzzyModel::empty(inputs.to_vec(), output.clone())?;
    for ex in data {
        let antecedent: Vec<usize> = inputs
            .iter()
            .zip(&ex.x)
            .map(|(p, &v)| p.best_set(v))
            .collect();
        let out_set = output.best_set(ex.z);
        let degree = antecedent
            .iter()
            .zip(inputs)
            .zip(&ex.x)
            .fold(1.0, |acc, ((&i, p), &v)| acc * p.degree(i, v))
            * output.degree(out_set, ex.z);

        let flat = model.index_of(&antecedent);
        let replace = model.cell(flat).is_none_or(|r| degree > r.degree);
        if replace {
            model.set_rule(Rule {
                antecedent,
                conclusion: output.center(out_set),
                degree,
            })?;
        }
    }
    Ok(model)
}

/// Cluster-based weighted averaging.
///
/// For every cell the conclusion is `sum(w z) / sum(w)` over all examples,
/// with `w` the product of the example's degrees in the cell's input sets.
/// Sums run in dataset order. Cells with total weight at or below
/// [`EMPTY_WEIGHT_THRESHOLD`] stay empty.
pub fn cluster_learn(
    data: &[Example],
    inputs: &[Partition],
    output: &Partition,
) -> Result<FuzzyModel> {
    let kind = inputs
        .first()
        .map(Partition::kind)
        .ok_or_else(|| Error::InvalidConfig("a model needs at least one input".into()))?;
    if inputs.iter().any(|p| p.kind() != kind) {
        return Err(Error::InvalidConfig(
            "cluster learning needs all input partitions of one kind".into(),
        ));
    }
    check_data(data, inputs)?;

    let mut model = FuzzyModel::empty(inputs.to_vec(), output.clone())?;
    let size = model.cells().len();
    let mut num = vec![0.0; size];
    let mut den = vec![0.0; size];
    for ex in data {
        for (flat, w) in model.activation(&ex.x)? {
            num[flat] += w * ex.z;
            den[flat] += w;
        }
    }
    for flat in 0..size {
        if den[flat] > EMPTY_WEIGHT_THRESHOLD {
            let antecedent = model.antecedent_of(flat);
            model.set_rule(Rule {
                antecedent,
                conclusion: num[flat] / den[flat],
                degree: 1.0,
            })?;
        }
    }
    Ok(model)
}

/// Partial derivatives of `E = (f(x) - z)^2 / 2` with respect to each
/// populated active cell's conclusion.
pub fn conclusion_gradient(model: &FuzzyModel, ex: &Example) -> Result<Vec<(usize, f64)>> {
    let residual = model.infer(&ex.x)? - ex.z;
    Ok(model
        .normalized_firing(&ex.x)?
        .into_iter()
        .map(|(flat, nw)| (flat, residual * nw))
        .collect())
}

/// Gradient-descent tuning of conclusions over gaussian partitions.
pub fn neurofuzzy_learn(
    data: &[Example],
    inputs: &[Partition],
    output: &Partition,
    cfg: &NeuroFuzzyConfig,
) -> Result<FuzzyModel> {
    neurofuzzy_learn_traced(data, inputs, output, cfg, |_, _| {})
}

/// [`neurofuzzy_learn`] that reports the model after every epoch.
///
/// `on_epoch(k, model)` runs once after initialization with `k = 0` and
/// after each completed epoch `k = 1..=epochs`.
pub fn neurofuzzy_learn_traced(
    data: &[Example],
    inputs: &[Partition],
    output: &Partition,
    cfg: &NeuroFuzzyConfig,
    mut on_epoch: impl FnMut(usize, &FuzzyModel),
) -> Result<FuzzyModel> {
    if inputs.iter().any(|p| p.kind() != MfKind::Gaussian) {
        return Err(Error::WrongPartitionKind {
            algorithm: "neurofuzzy",
            required: "gaussian",
        });
    }
    cfg.validate()?;
    check_data(data, inputs)?;

    let midpoint = 0.5 * (output.lo() + output.hi());
    let mut model = match cfg.init {
        Init::Zero => FuzzyModel::from_fn(inputs.to_vec(), output.clone(), |_| midpoint)?,
        Init::ClusterBased => {
            let mut m = cluster_learn(data, inputs, output)?;
            // Far-away cells can underflow to empty with very few examples.
            for flat in 0..m.cells().len() {
                if m.cell(flat).is_none() {
                    let antecedent = m.antecedent_of(flat);
                    m.set_rule(Rule {
                        antecedent,
                        conclusion: midpoint,
                        degree: 1.0,
                    })?;
                }
            }
            m
        }
    };
    on_epoch(0, &model);

    for epoch in 1..=cfg.epochs {
        for ex in data {
            let grad = match conclusion_gradient(&model, ex) {
                Ok(g) => g,
                // Every weight underflowed: nothing to learn from this example.
                Err(Error::NoActiveRule) => continue,
                Err(e) => return Err(e),
            };
            for (flat, g) in grad {
                let c = model.cell(flat).map_or(0.0, |r| r.conclusion);
                model.set_conclusion(flat, c - cfg.alpha * g);
            }
        }
        on_epoch(epoch, &model);
    }
    Ok(model)
}

/// Builds the partitions for `algorithm` and runs the matching learner.
pub fn learn(
    algorithm: Algorithm,
    data: &[Example],
    inputs: &[Partition],
    output: &Partition,
    cfg: &NeuroFuzzyConfig,
) -> Result<FuzzyModel> {
    if inputs.iter().any(|p| p.kind() != algorithm.input_kind()) {
        return Err(Error::WrongPartitionKind {
            algorithm: algorithm.as_str(),
            required: algorithm.input_kind().as_str(),
        });
    }
    match algorithm {
        Algorithm::Simplified => wm_learn(data, inputs, output),
        Algorithm::ClusterTri | Algorithm::ClusterGauss => cluster_learn(data, inputs, output),
        Algorithm::NeuroFuzzy => neurofuzzy_learn(data, inputs, output, cfg),
    }
}
