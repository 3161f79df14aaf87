//! Membership functions and uniform partitions of a variable's range.
//!
//! A [`Partition`] holds `n` equally spaced functions whose first center sits
//! on `lo` and whose last sits on `hi`. Triangular partitions always use the
//! spacing as half-width, which makes them a partition of unity on
//! `[lo, hi]`. Gaussian partitions use `sigma = width_factor * spacing`.
//!
//! Evaluating a single [`MembershipFunction`] never clamps: an edge triangle
//! falls to zero one spacing beyond the domain. Partition-level queries
//! ([`Partition::best_set`], [`Partition::active`]) clamp their argument to
//! `[lo, hi]` first, so at the model level edge sets behave as if shouldered.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default gaussian sigma as a fraction of the center spacing.
pub const DEFAULT_WIDTH_FACTOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MfKind {
    Triangular,
    Gaussian,
}

impl MfKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MfKind::Triangular => "triangular",
            MfKind::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for MfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "triangular" | "tri" => Ok(MfKind::Triangular),
            "gaussian" | "gauss" => Ok(MfKind::Gaussian),
            other => Err(Error::InvalidConfig(format!(
                "unknown membership kind '{other}' (expected triangular or gaussian)"
            ))),
        }
    }
}

/// Unit-height membership curve.
///
/// `width` is the support half-width for triangles and sigma for gaussians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipFunction {
    kind: MfKind,
    center: f64,
    width: f64,
}

impl MembershipFunction {
    pub fn new(kind: MfKind, center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidFactor(width));
        }
        Ok(Self {
            kind,
            center,
            width,
        })
    }

    pub fn kind(&self) -> MfKind {
        self.kind
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Degree of membership of `x`, always in `[0, 1]`.
    #[inline]
    pub fn degree(&self, x: f64) -> f64 {
        let d = (x - self.center) / self.width;
        match self.kind {
            MfKind::Triangular => (1.0 - d.abs()).max(0.0),
            MfKind::Gaussian => (-(d * d)).exp(),
        }
    }
}

/// Free-function form of [`MembershipFunction::degree`].
#[inline]
pub fn membership(mf: &MembershipFunction, x: f64) -> f64 {
    mf.degree(x)
}

/// Ordered, uniformly spaced family of membership functions over `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    lo: f64,
    hi: f64,
    kind: MfKind,
    width_factor: f64,
    spacing: f64,
    functions: Vec<MembershipFunction>,
}

impl Partition {
    /// Builds `n` equally spaced sets over `[lo, hi]`.
    ///
    /// `width_factor` only shapes gaussian sets; triangles always take the
    /// spacing as half-width. It is still validated and kept so the
    /// partition serializes with the value it was built from.
    pub fn uniform(lo: f64, hi: f64, n: usize, kind: MfKind, width_factor: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        if n < 2 {
            return Err(Error::InvalidCount(n));
        }
        if !(width_factor > 0.0 && width_factor.is_finite()) {
            return Err(Error::InvalidFactor(width_factor));
        }
        let steps = (n - 1) as f64;
        let spacing = (hi - lo) / steps;
        let width = match kind {
            MfKind::Triangular => spacing,
            MfKind::Gaussian => width_factor * spacing,
        };
        let functions = (0..n)
            .map(|i| {
                let center = if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64) / steps
                };
                MembershipFunction {
                    kind,
                    center,
                    width,
                }
            })
            .collect();
        Ok(Self {
            lo,
            hi,
            kind,
            width_factor,
            spacing,
            functions,
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn kind(&self) -> MfKind {
        self.kind
    }

    pub fn width_factor(&self) -> f64 {
        self.width_factor
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[MembershipFunction] {
        &self.functions
    }

    pub fn center(&self, i: usize) -> f64 {
        self.functions[i].center
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// True when both partitions cover the same range with the same sets.
    pub fn same_domain(&self, other: &Partition) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }

    /// Index of the set with the highest degree at `clamp(x)`; ties go to
    /// the lower index.
    pub fn best_set(&self, x: f64) -> usize {
        let x = self.clamp(x);
        let mut best = 0;
        let mut best_degree = f64::NEG_INFINITY;
        for (i, f) in self.functions.iter().enumerate() {
            let d = f.degree(x);
            if d > best_degree {
                best = i;
                best_degree = d;
            }
        }
        best
    }

    /// Degree of set `i` at `clamp(x)`.
    pub fn degree(&self, i: usize, x: f64) -> f64 {
        self.functions[i].degree(self.clamp(x))
    }

    /// Sets with nonzero degree at `clamp(x)`, in index order.
    ///
    /// Triangular partitions only inspect the few sets around `x`; the
    /// degrees are evaluated by the same functions as a full scan, so the
    /// result is identical to filtering all sets.
    pub fn active(&self, x: f64) -> Vec<(usize, f64)> {
        let x = self.clamp(x);
        let range = match self.kind {
            MfKind::Gaussian => 0..self.len(),
            MfKind::Triangular => {
                let n = self.len();
                let k = ((x - self.lo) / self.spacing).floor() as isize;
                let start = (k - 1).clamp(0, n as isize - 1) as usize;
                let end = ((k + 3).max(0) as usize).min(n);
                start..end
            }
        };
        range
            .filter_map(|i| {
                let d = self.functions[i].degree(x);
                (d > 0.0).then_some((i, d))
            })
            .collect()
    }
}

/// Convenience wrapper matching the partition constructor's argument order.
pub fn make_uniform_partition(
    lo: f64,
    hi: f64,
    n: usize,
    kind: MfKind,
    width_factor: f64,
) -> Result<Partition> {
    Partition::uniform(lo, hi, n, kind, width_factor)
}
