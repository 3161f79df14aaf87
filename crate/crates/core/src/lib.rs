//! Fuzzy rule-grid function approximation and a noise-sensitivity harness.
//!
//! The library learns rule-grid fuzzy models of a function from examples
//! with three learners (simplified Wang–Mendel, cluster-based weighted
//! averaging, neuro-fuzzy gradient descent on conclusions) and measures how
//! much noise in the training data deforms the learned rule base and
//! surface.
//!
//! ```
//! use fuzzy_noise::datagen::{make_plane_dataset, DataSpec, Distribution};
//! use fuzzy_noise::learning::cluster_learn;
//! use fuzzy_noise::membership::{MfKind, Partition};
//!
//! let data = make_plane_dataset(&DataSpec::plane(200, Distribution::Uniform, 0.0, 7)).unwrap();
//! let input = Partition::uniform(1.0, 11.0, 5, MfKind::Triangular, 0.5).unwrap();
//! let output = Partition::uniform(2.0, 22.0, 13, MfKind::Triangular, 0.5).unwrap();
//! let model = cluster_learn(&data.examples, &[input.clone(), input], &output).unwrap();
//! let z = model.infer(&[4.0, 5.0]).unwrap();
//! assert!((z - 9.0).abs() < 1.0);
//! ```

pub mod datagen;
pub mod error;
pub mod evaluation;
pub mod experiment;
pub mod inference;
pub mod learning;
pub mod membership;

pub use error::{Error, Result};

/// Formats a real with 17 significant digits (exact `f64` round trip).
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}
