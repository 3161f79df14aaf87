//! Clean-vs-noisy difference surfaces and fit metrics.
//!
//! Models are evaluated on a regular grid spanning the input domain with
//! both endpoints included. Grid points where a model has no active rule
//! are gaps: they count toward `gap_fraction` and are left out of the RMS
//! and max-abs figures. Reductions run in grid index order, so repeated
//! evaluations are bit-identical.

use crate::datagen::Example;
use crate::error::{Error, Result};
use crate::fmt_real;
use crate::inference::{rule_diff, FuzzyModel, RuleDiff};

pub const DEFAULT_RESOLUTION: usize = 50;

/// Ten-step ramp for heatmaps, lowest magnitude first.
pub const HEATMAP_RAMP: [char; 10] = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
/// Heatmap character for gap points.
pub const HEATMAP_GAP: char = '?';

/// RMS, max-abs and gap share of a set of grid values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    /// `None` when every grid point is a gap.
    pub rmse: Option<f64>,
    pub max_abs: Option<f64>,
    pub gap_fraction: f64,
}

impl ErrorSummary {
    fn from_values(values: &[Option<f64>]) -> Self {
        let mut sum_sq = 0.0;
        let mut max_abs: f64 = 0.0;
        let mut count = 0usize;
        for v in values.iter().flatten() {
            sum_sq += v * v;
            max_abs = max_abs.max(v.abs());
            count += 1;
        }
        let gaps = values.len() - count;
        Self {
            rmse: (count > 0).then(|| (sum_sq / count as f64).sqrt()),
            max_abs: (count > 0).then_some(max_abs),
            gap_fraction: gaps as f64 / values.len() as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffReport {
    pub resolution: usize,
    /// Grid coordinates, row-major with the first input most significant.
    pub points: Vec<Vec<f64>>,
    /// `infer(noisy) - infer(clean)` per point; `None` at gaps.
    pub diff: Vec<Option<f64>>,
    pub rmse: Option<f64>,
    pub max_abs: Option<f64>,
    pub gap_fraction: f64,
    pub rule_changes: RuleDiff,
}

/// Regular grid over the model's input domain.
pub fn grid_points(model: &FuzzyModel, resolution: usize) -> Result<Vec<Vec<f64>>> {
    if resolution < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let axes: Vec<Vec<f64>> = model
        .inputs()
        .iter()
        .map(|p| {
            let steps = (resolution - 1) as f64;
            (0..resolution)
                .map(|k| {
                    if k == resolution - 1 {
                        p.hi()
                    } else {
                        p.lo() + (p.hi() - p.lo()) * k as f64 / steps
                    }
                })
                .collect()
        })
        .collect();
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    Ok(points)
}

fn value_or_gap(model: &FuzzyModel, x: &[f64]) -> Result<Option<f64>> {
    match model.infer(x) {
        Ok(v) => Ok(Some(v)),
        Err(Error::NoActiveRule) => Ok(None),
        Err(e) => Err(e),
    }
}

fn same_domain(a: &FuzzyModel, b: &FuzzyModel) -> bool {
    a.dims() == b.dims()
        && a.inputs()
            .iter()
            .zip(b.inputs())
            .all(|(p, q)| p.same_domain(q))
}

/// Pointwise `noisy - clean` over the grid plus aggregate metrics.
pub fn difference_surface(
    clean: &FuzzyModel,
    noisy: &FuzzyModel,
    resolution: usize,
) -> Result<DiffReport> {
    if !same_domain(clean, noisy) {
        return Err(Error::DomainMismatch);
    }
    let rule_changes = rule_diff(clean, noisy)?;
    let points = grid_points(clean, resolution)?;
    let diff = points
        .iter()
        .map(|x| {
            Ok(match (value_or_gap(clean, x)?, value_or_gap(noisy, x)?) {
                (Some(c), Some(n)) => Some(n - c),
                _ => None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = ErrorSummary::from_values(&diff);
    Ok(DiffReport {
        resolution,
        points,
        diff,
        rmse: summary.rmse,
        max_abs: summary.max_abs,
        gap_fraction: summary.gap_fraction,
        rule_changes,
    })
}

/// Fit of `model` against an analytic target on the grid.
pub fn model_error(
    model: &FuzzyModel,
    truth: impl Fn(&[f64]) -> f64,
    resolution: usize,
) -> Result<ErrorSummary> {
    let points = grid_points(model, resolution)?;
    let errors = points
        .iter()
        .map(|x| Ok(value_or_gap(model, x)?.map(|v| v - truth(x))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorSummary::from_values(&errors))
}

/// The plane target `z = x + y` (sum of inputs in general).
pub fn plane(x: &[f64]) -> f64 {
    x.iter().sum()
}

/// RMS residual over the training examples, skipping coverage gaps.
pub fn training_rmse(model: &FuzzyModel, data: &[Example]) -> Result<Option<f64>> {
    let residuals = data
        .iter()
        .map(|e| Ok(value_or_gap(model, &e.x)?.map(|v| v - e.z)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorSummary::from_values(&residuals).rmse)
}

impl DiffReport {
    /// Metadata comment lines, a header and one row per grid point with
    /// `NaN` at gaps.
    pub fn to_csv(&self, meta: &[(String, String)]) -> String {
        let mut out = String::new();
        for (k, v) in meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let d = self.points.first().map_or(2, Vec::len);
        let names: Vec<String> = match d {
            2 => vec!["x".into(), "y".into()],
            _ => (0..d).map(|i| format!("x{i}")).collect(),
        };
        out.push_str(&names.join(","));
        out.push_str(",diff\n");
        for (p, v) in self.points.iter().zip(&self.diff) {
            for c in p {
                out.push_str(&fmt_real(*c));
                out.push(',');
            }
            match v {
                Some(v) => out.push_str(&fmt_real(*v)),
                None => out.push_str("NaN"),
            }
            out.push('\n');
        }
        out
    }

    /// ASCII heatmap of `|diff|` for 2-input reports.
    ///
    /// Magnitudes map to [`HEATMAP_RAMP`] by decile of the non-gap values;
    /// the top line is the highest `y`, columns run along `x`.
    pub fn heatmap(&self) -> Option<String> {
        if self.points.first().map(Vec::len) != Some(2) {
            return None;
        }
        let res = self.resolution;
        let mut mags: Vec<f64> = self.diff.iter().flatten().map(|v| v.abs()).collect();
        mags.sort_by(f64::total_cmp);
        let thresholds: Vec<f64> = if mags.is_empty() {
            Vec::new()
        } else {
            (1..HEATMAP_RAMP.len())
                .map(|k| mags[k * (mags.len() - 1) / HEATMAP_RAMP.len()])
                .collect()
        };
        let mut out = String::with_capacity(res * (res + 1));
        for j in (0..res).rev() {
            for i in 0..res {
                let ch = match self.diff[i * res + j] {
                    None => HEATMAP_GAP,
                    Some(v) => {
                        let level = thresholds.iter().filter(|&&t| v.abs() > t).count();
                        HEATMAP_RAMP[level]
                    }
                };
                out.push(ch);
            }
            out.push('\n');
        }
        Some(out)
    }
}
