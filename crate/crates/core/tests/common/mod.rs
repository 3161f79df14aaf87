//! Brute-force reference implementations shared by the integration suites.
//!
//! Nothing here calls the learners or the partition helpers: membership
//! degrees, set selection and weighted averages are recomputed from the
//! raw partition parameters.

#![allow(dead_code)]

use fuzzy_noise::datagen::{Example, SplitMix64};
use fuzzy_noise::inference::FuzzyModel;
use fuzzy_noise::membership::{MfKind, Partition};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Centers of a uniform partition, computed from its raw parameters.
pub fn centers(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

pub fn tri_degree(center: f64, width: f64, x: f64) -> f64 {
    let d = ((x - center) / width).abs();
    if d >= 1.0 {
        0.0
    } else {
        1.0 - d
    }
}

pub fn gauss_degree(center: f64, sigma: f64, x: f64) -> f64 {
    let d = (x - center) / sigma;
    (-(d * d)).exp()
}

/// Degrees of every set of `p` at `clamp(x)`.
pub fn all_degrees(p: &Partition, x: f64) -> Vec<f64> {
    let (lo, hi, n) = (p.lo(), p.hi(), p.len());
    let x = x.max(lo).min(hi);
    let s = (hi - lo) / (n - 1) as f64;
    centers(lo, hi, n)
        .into_iter()
        .map(|c| match p.kind() {
            MfKind::Triangular => tri_degree(c, s, x),
            MfKind::Gaussian => gauss_degree(c, p.width_factor() * s, x),
        })
        .collect()
}

pub fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// One cell of a reference rule grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCell {
    pub conclusion: f64,
    pub degree: f64,
}

/// Simplified rule extraction by exhaustive enumeration: for each cell scan
/// every example, keep the first example with the strictly highest degree.
pub fn wm_oracle(
    data: &[Example],
    px: &Partition,
    py: &Partition,
    out: &Partition,
) -> Vec<Option<OracleCell>> {
    let out_centers = centers(out.lo(), out.hi(), out.len());
    let mut cells = Vec::new();
    for i in 0..px.len() {
        for j in 0..py.len() {
            let mut best: Option<OracleCell> = None;
            for e in data {
                let dx = all_degrees(px, e.x[0]);
                let dy = all_degrees(py, e.x[1]);
                let dz = all_degrees(out, e.z);
                if argmax_lowest(&dx) != i || argmax_lowest(&dy) != j {
                    continue;
                }
                let k = argmax_lowest(&dz);
                let degree = 1.0 * dx[i] * dy[j] * dz[k];
                if best.as_ref().is_none_or(|b| degree > b.degree) {
                    best = Some(OracleCell {
                        conclusion: out_centers[k],
                        degree,
                    });
                }
            }
            cells.push(best);
        }
    }
    cells
}

/// Weighted averages with naive cell-by-example loops.
pub fn cluster_oracle(data: &[Example], px: &Partition, py: &Partition) -> Vec<Option<f64>> {
    let mut cells = Vec::new();
    for i in 0..px.len() {
        for j in 0..py.len() {
            let mut num = 0.0;
            let mut den = 0.0;
            for e in data {
                let w = 1.0 * all_degrees(px, e.x[0])[i] * all_degrees(py, e.x[1])[j];
                num += w * e.z;
                den += w;
            }
            cells.push((den > 1e-12).then(|| num / den));
        }
    }
    cells
}

/// `dE/dc_r` for every cell by central differences with step `h`,
/// evaluated in exact rational arithmetic so the quotient carries no
/// rounding error. Empty cells and cells with zero weight get 0.
pub fn gradient_fd_exact(model: &FuzzyModel, ex: &Example, h: f64) -> Vec<f64> {
    let px = &model.inputs()[0];
    let py = &model.inputs()[1];
    let dx = all_degrees(px, ex.x[0]);
    let dy = all_degrees(py, ex.x[1]);
    let rat = |v: f64| BigRational::from_float(v).expect("finite");

    let n = dx.len() * dy.len();
    let mut weights = Vec::with_capacity(n);
    let mut conclusions = Vec::with_capacity(n);
    for (i, wx) in dx.iter().enumerate() {
        for (j, wy) in dy.iter().enumerate() {
            let flat = i * py.len() + j;
            match model.cell(flat) {
                Some(rule) => {
                    weights.push(rat(1.0 * wx * wy));
                    conclusions.push(rat(rule.conclusion));
                }
                None => {
                    weights.push(BigRational::zero());
                    conclusions.push(BigRational::zero());
                }
            }
        }
    }
    let sum_w: BigRational = weights.iter().cloned().sum();
    let sum_wc: BigRational = weights.iter().zip(&conclusions).map(|(w, c)| w * c).sum();
    let z = rat(ex.z);
    let step = rat(h);
    let half = BigRational::new(1.into(), 2.into());
    // E as a function of the numerator sum with the denominator fixed;
    // moving c_r by t moves the numerator by w_r * t.
    let energy = |numerator: &BigRational| {
        let r = numerator / &sum_w - &z;
        &half * &r * &r
    };
    weights
        .iter()
        .map(|w| {
            if w.is_zero() {
                return 0.0;
            }
            let plus = energy(&(&sum_wc + w * &step));
            let minus = energy(&(&sum_wc - w * &step));
            ((plus - minus) / (&step + &step)).to_f64().unwrap()
        })
        .collect()
}

/// Random examples inside `[lo, hi]^2` with outputs in `[zlo, zhi]`.
pub fn random_examples(seed: u64, n: usize, lo: f64, hi: f64, zlo: f64, zhi: f64) -> Vec<Example> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| {
            let x = lo + rng.next_f64() * (hi - lo);
            let y = lo + rng.next_f64() * (hi - lo);
            let z = zlo + rng.next_f64() * (zhi - zlo);
            Example::new(vec![x, y], z)
        })
        .collect()
}

/// Independent reference SplitMix64 (standard published constants).
pub fn splitmix_reference(seed: u64) -> u64 {
    let z = seed.wrapping_add(0x9e3779b97f4a7c15);
    let z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
