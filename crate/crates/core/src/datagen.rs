//! Deterministic plane datasets with proportional noise.
//!
//! All randomness comes from [`SplitMix64`]. For a given [`DataSpec`] the
//! stream is consumed in a fixed order:
//!
//! 1. Inputs for every example, example-major then coordinate-major.
//!    `Uniform` takes one draw per coordinate. `Clustered` takes a selector
//!    draw `u`; when `u < 0.5` the example is uniform (one draw per
//!    coordinate), otherwise a blob draw picks blob A (30% of each range,
//!    draw < 0.5) or blob B (70%), then each coordinate takes two draws
//!    `u1, u2` and offsets the blob center by
//!    `0.08 * range * sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`, clamped to the
//!    domain.
//! 2. Noise, only when `noise_level > 0`: three draws per example in order
//!    x, y, z, each scaling the stored value by `1 + p * (2u - 1)`.
//!
//! Because inputs are drawn before any noise, a clean and a noisy dataset
//! with the same seed share the same underlying clean inputs.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fmt_real;

/// SplitMix64 generator, the only random source in the crate.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut t = self.state;
        t = (t ^ (t >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        t = (t ^ (t >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        t ^ (t >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Seed for trial `index` of an experiment with base seed `base`.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    base ^ index
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distribution {
    Uniform,
    Clustered,
}

impl Distribution {
    pub fn as_str(self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::Clustered => "clustered",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(Distribution::Uniform),
            "clustered" => Ok(Distribution::Clustered),
            other => Err(Error::InvalidConfig(format!(
                "unknown distribution '{other}' (expected uniform or clustered)"
            ))),
        }
    }
}

/// Default per-axis input range; strictly positive so proportional noise
/// never vanishes.
pub const DEFAULT_INPUT_RANGE: (f64, f64) = (1.0, 11.0);
/// Output range matching the default inputs under `z = x + y`.
pub const DEFAULT_OUTPUT_RANGE: (f64, f64) = (2.0, 22.0);

const BLOB_A: f64 = 0.3;
const BLOB_B: f64 = 0.7;
const BLOB_SPREAD: f64 = 0.08;

#[derive(Debug, Clone, PartialEq)]
pub struct DataSpec {
    pub n: usize,
    pub domain: Vec<(f64, f64)>,
    pub distribution: Distribution,
    pub noise_level: f64,
    pub seed: u64,
}

impl DataSpec {
    /// Two-input plane spec over the default range.
    pub fn plane(n: usize, distribution: Distribution, noise_level: f64, seed: u64) -> Self {
        Self {
            n,
            domain: vec![DEFAULT_INPUT_RANGE; 2],
            distribution,
            noise_level,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig(
                "example count must be at least 1".into(),
            ));
        }
        if !(self.noise_level >= 0.0 && self.noise_level.is_finite()) {
            return Err(Error::InvalidConfig(
                "noise level must be non-negative".into(),
            ));
        }
        if self.domain.is_empty() {
            return Err(Error::InvalidConfig(
                "domain needs at least one input".into(),
            ));
        }
        for &(lo, hi) in &self.domain {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::InvalidRange { lo, hi });
            }
        }
        Ok(())
    }
}

/// One training example: inputs and the measured output.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub x: Vec<f64>,
    pub z: f64,
}

impl Example {
    pub fn new(x: Vec<f64>, z: f64) -> Self {
        Self { x, z }
    }
}

/// Examples plus the spec that generated them (when known).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub examples: Vec<Example>,
    pub spec: Option<DataSpec>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// CSV with a header row, one example per row, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let d = self.examples.first().map_or(2, |e| e.x.len());
        let mut out = csv_header(d);
        out.push('\n');
        for e in &self.examples {
            for v in &e.x {
                out.push_str(&fmt_real(*v));
                out.push(',');
            }
            out.push_str(&fmt_real(e.z));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let columns: Vec<&str> = header.split(',').map(str::trim).collect();
        if columns.len() < 2 || columns.last() != Some(&"z") {
            return Err(Error::parse(1, "header must end with a 'z' column"));
        }
        let d = columns.len() - 1;
        let mut examples = Vec::new();
        for (idx, line) in lines {
            let values = line
                .split(',')
                .map(|t| {
                    let t = t.trim();
                    t.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(idx + 1, format!("bad value '{t}'")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != d + 1 {
                return Err(Error::parse(
                    idx + 1,
                    format!("expected {} columns, got {}", d + 1, values.len()),
                ));
            }
            examples.push(Example::new(values[..d].to_vec(), values[d]));
        }
        Ok(Self {
            examples,
            spec: None,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(&text)
    }
}

fn csv_header(d: usize) -> String {
    let names: Vec<String> = match d {
        2 => vec!["x".into(), "y".into()],
        _ => (0..d).map(|i| format!("x{i}")).collect(),
    };
    format!("{},z", names.join(","))
}

fn sample_with(rng: &mut SplitMix64, spec: &DataSpec) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let uniform = |rng: &mut SplitMix64| -> Vec<f64> {
            spec.domain
                .iter()
                .map(|&(lo, hi)| lo + rng.next_f64() * (hi - lo))
                .collect()
        };
        let point = match spec.distribution {
            Distribution::Uniform => uniform(rng),
            Distribution::Clustered => {
                if rng.next_f64() < 0.5 {
                    uniform(rng)
                } else {
                    let frac = if rng.next_f64() < 0.5 { BLOB_A } else { BLOB_B };
                    spec.domain
                        .iter()
                        .map(|&(lo, hi)| {
                            let range = hi - lo;
                            let u1 = rng.next_f64();
                            let u2 = rng.next_f64();
                            let g = (-2.0 * (1.0 - u1).ln()).sqrt()
                                * (2.0 * std::f64::consts::PI * u2).cos();
                            (lo + frac * range + BLOB_SPREAD * range * g).clamp(lo, hi)
                        })
                        .collect()
                }
            }
        };
        out.push(point);
    }
    out
}

/// Input vectors for `spec`, before any noise.
pub fn sample_inputs(spec: &DataSpec) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    Ok(sample_with(&mut rng, spec))
}

/// Samples `z = x + y` and applies proportional noise to x, y and z.
pub fn make_plane_dataset(spec: &DataSpec) -> Result<Dataset> {
    spec.validate()?;
    if spec.domain.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: spec.domain.len(),
        });
    }
    let mut rng = SplitMix64::new(spec.seed);
    let inputs = sample_with(&mut rng, spec);
    let p = spec.noise_level;
    let examples = inputs
        .into_iter()
        .map(|x| {
            let z = x[0] + x[1];
            if p > 0.0 {
                let mut perturb = |v: f64| v * (1.0 + p * (2.0 * rng.next_f64() - 1.0));
                let nx = perturb(x[0]);
                let ny = perturb(x[1]);
                let nz = perturb(z);
                Example::new(vec![nx, ny], nz)
            } else {
                Example::new(x, z)
            }
        })
        .collect();
    Ok(Dataset {
        examples,
        spec: Some(spec.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference implementation kept apart from the production generator.
    fn reference_splitmix(seed: u64, count: usize) -> Vec<u64> {
        let mut s = seed;
        (0..count)
            .map(|_| {
                s = s.wrapping_add(0x9e3779b97f4a7c15);
                let mut z = s;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
                z ^ (z >> 31)
            })
            .collect()
    }

    #[test]
    fn splitmix_known_first_output() {
        assert_eq!(SplitMix64::new(0).next_u64(), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn splitmix_matches_reference() {
        for seed in [0u64, 1, 42, u64::MAX] {
            let mut rng = SplitMix64::new(seed);
            let got: Vec<u64> = (0..16).map(|_| rng.next_u64()).collect();
            assert_eq!(got, reference_splitmix(seed, 16));
        }
    }

    #[test]
    fn unit_interval_draws() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..10_000 {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn single_uniform_point_from_seed_42() {
        let spec = DataSpec {
            n: 1,
            domain: vec![(0.0, 10.0); 2],
            distribution: Distribution::Uniform,
            noise_level: 0.0,
            seed: 42,
        };
        let raw = reference_splitmix(42, 2);
        let expected: Vec<f64> = raw
            .iter()
            .map(|&r| (r >> 11) as f64 / 9_007_199_254_740_992.0 * 10.0)
            .collect();
        assert_eq!(sample_inputs(&spec).unwrap(), vec![expected]);
    }

    #[test]
    fn uniform_points_stay_in_range() {
        let spec = DataSpec {
            n: 100,
            domain: vec![(0.0, 10.0); 2],
            distribution: Distribution::Uniform,
            noise_level: 0.0,
            seed: 9,
        };
        for p in sample_inputs(&spec).unwrap() {
            assert!(p.iter().all(|v| (0.0..=10.0).contains(v)));
        }
    }

    #[test]
    fn clustered_band() {
        let spec = DataSpec {
            n: 1000,
            domain: vec![(0.0, 10.0); 2],
            distribution: Distribution::Clustered,
            noise_level: 0.0,
            seed: 7,
        };
        let pts = sample_inputs(&spec).unwrap();
        assert!(pts.iter().flatten().all(|v| (0.0..=10.0).contains(v)));
        let near = pts
            .iter()
            .filter(|p| {
                [3.0, 7.0]
                    .iter()
                    .any(|&c| ((p[0] - c).powi(2) + (p[1] - c).powi(2)).sqrt() <= 1.6)
            })
            .count();
        let frac = near as f64 / pts.len() as f64;
        assert!((0.35..=0.65).contains(&frac), "fraction near blobs: {frac}");
    }

    #[test]
    fn clean_plane_is_exact() {
        let spec = DataSpec::plane(200, Distribution::Clustered, 0.0, 5);
        let data = make_plane_dataset(&spec).unwrap();
        assert_eq!(data.len(), 200);
        assert!(data.examples.iter().all(|e| e.z == e.x[0] + e.x[1]));
    }

    #[test]
    fn noise_bands() {
        for p in [0.10, 0.30] {
            let clean =
                make_plane_dataset(&DataSpec::plane(300, Distribution::Uniform, 0.0, 11)).unwrap();
            let noisy =
                make_plane_dataset(&DataSpec::plane(300, Distribution::Uniform, p, 11)).unwrap();
            for (c, n) in clean.examples.iter().zip(&noisy.examples) {
                for (cv, nv) in c.x.iter().zip(&n.x) {
                    assert!((nv - cv).abs() <= p * cv.abs() * (1.0 + 1e-12));
                }
                assert!((n.z - c.z).abs() <= p * c.z.abs() * (1.0 + 1e-12));
                assert!(n.z >= (1.0 - p) * c.z - 1e-12 && n.z <= (1.0 + p) * c.z + 1e-12);
            }
        }
    }

    #[test]
    fn identical_specs_give_identical_csv() {
        let spec = DataSpec::plane(100, Distribution::Clustered, 0.1, 42);
        let a = make_plane_dataset(&spec).unwrap().to_csv();
        let b = make_plane_dataset(&spec).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("x,y,z\n"));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let data = make_plane_dataset(&DataSpec::plane(50, Distribution::Uniform, 0.3, 1)).unwrap();
        let back = Dataset::from_csv(&data.to_csv()).unwrap();
        assert_eq!(back.examples, data.examples);
    }

    #[test]
    fn spec_validation() {
        let mut spec = DataSpec::plane(10, Distribution::Uniform, -0.1, 0);
        let err = make_plane_dataset(&spec).unwrap_err().to_string();
        assert!(err.contains("noise level must be non-negative"));
        spec.noise_level = 0.0;
        spec.n = 0;
        assert!(make_plane_dataset(&spec).is_err());
        spec.n = 3;
        spec.domain = vec![(0.0, 1.0); 3];
        assert!(matches!(
            make_plane_dataset(&spec),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 3
            })
        ));
        spec.domain = vec![(1.0, 0.0); 2];
        assert!(matches!(
            make_plane_dataset(&spec),
            Err(Error::InvalidRange { .. })
        ));
    }

    #[test]
    fn csv_parse_errors() {
        assert!(Dataset::from_csv("").is_err());
        assert!(Dataset::from_csv("x,y,q\n1,2,3\n").is_err());
        assert!(Dataset::from_csv("x,y,z\n1,2\n").is_err());
        assert!(Dataset::from_csv("x,y,z\n1,a,3\n").is_err());
    }
}
