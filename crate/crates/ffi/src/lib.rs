//! C ABI for the fuzzy-noise library.
//!
//! Datasets and models cross the boundary as opaque handles created by
//! `fzn_*_generate` / `fzn_*_load` / `fzn_model_train` and released with
//! the matching `*_free`. Every fallible call returns an [`FznStatus`];
//! on failure a description is available from [`fzn_last_error`] on the
//! same thread until the next failing call.
//!
//! Panics never unwind into C: they are caught and reported as
//! [`FznStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use fuzzy_noise::datagen::{make_plane_dataset, DataSpec, Dataset, Distribution, SplitMix64};
use fuzzy_noise::evaluation::{difference_surface, model_error, plane};
use fuzzy_noise::experiment::ExperimentConfig;
use fuzzy_noise::inference::{read_model, save_model, FuzzyModel};
use fuzzy_noise::learning::{Algorithm, Init};
use fuzzy_noise::Error;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FznStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The query point lies in a coverage gap.
    NoActiveRule = 3,
    EmptyDataset = 4,
    DomainMismatch = 5,
    ShapeMismatch = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FznAlgorithm {
    Simplified = 0,
    ClusterTriangular = 1,
    ClusterGaussian = 2,
    NeuroFuzzy = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FznDistribution {
    Uniform = 0,
    Clustered = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FznInit {
    /// Start every conclusion at the output-range midpoint.
    Zero = 0,
    ClusterBased = 1,
}

/// Model structure and learner parameters for [`fzn_model_train`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FznTrainConfig {
    pub algorithm: FznAlgorithm,
    pub input_sets: usize,
    pub output_sets: usize,
    pub width_factor: f64,
    pub alpha: f64,
    pub epochs: usize,
    pub init: FznInit,
    pub input_lo: f64,
    pub input_hi: f64,
    pub output_lo: f64,
    pub output_hi: f64,
}

/// Clean-vs-noisy comparison. Metrics are NaN when every grid point is a gap.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FznDiffSummary {
    pub rmse: f64,
    pub max_abs: f64,
    pub gap_fraction: f64,
    pub rules_unchanged: usize,
    pub rules_changed: usize,
    pub rules_only_clean: usize,
    pub rules_only_noisy: usize,
}

/// Fit against the plane `z = x + y`. Metrics are NaN when every grid
/// point is a gap.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FznErrorSummary {
    pub rmse: f64,
    pub max_abs: f64,
    pub gap_fraction: f64,
}

/// Opaque dataset handle.
pub struct FznDataset {
    inner: Dataset,
}

/// Opaque model handle.
pub struct FznModel {
    inner: FuzzyModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> FznStatus {
    match err {
        Error::NoActiveRule => FznStatus::NoActiveRule,
        Error::EmptyDataset => FznStatus::EmptyDataset,
        Error::DomainMismatch => FznStatus::DomainMismatch,
        Error::ShapeMismatch { .. } => FznStatus::ShapeMismatch,
        Error::Parse { .. } => FznStatus::Parse,
        Error::Io { .. } => FznStatus::Io,
        _ => FznStatus::InvalidArgument,
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (FznStatus, String)>) -> FznStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FznStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            FznStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (FznStatus, String)>;
}

impl<T> IntoFfi<T> for fuzzy_noise::Result<T> {
    fn ffi(self) -> Result<T, (FznStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (FznStatus, String) {
    (FznStatus::NullPointer, format!("{what} is null"))
}

unsafe fn path_arg(path: *const c_char) -> Result<PathBuf, (FznStatus, String)> {
    if path.is_null() {
        return Err(null("path"));
    }
    // SAFETY: caller passes a NUL-terminated string.
    let s = unsafe { CStr::from_ptr(path) }
        .to_str()
        .map_err(|_| (FznStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
    Ok(PathBuf::from(s))
}

/// Message of the last failing call on this thread, or NULL.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fzn_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Fills `out[0..count]` with SplitMix64 outputs starting from `seed`.
///
/// # Safety
/// `out` must point to `count` writable `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn fzn_splitmix64(seed: u64, out: *mut u64, count: usize) -> FznStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut rng = SplitMix64::new(seed);
        for i in 0..count {
            // SAFETY: caller guarantees `count` slots.
            unsafe { *out.add(i) = rng.next_u64() };
        }
        Ok(())
    })
}

/// Generates a `z = x + y` dataset over `[lo, hi]^2`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn fzn_dataset_generate(
    n: usize,
    distribution: FznDistribution,
    noise_level: f64,
    seed: u64,
    lo: f64,
    hi: f64,
    out: *mut *mut FznDataset,
) -> FznStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = DataSpec {
            n,
            domain: vec![(lo, hi); 2],
            distribution: match distribution {
                FznDistribution::Uniform => Distribution::Uniform,
                FznDistribution::Clustered => Distribution::Clustered,
            },
            noise_level,
            seed,
        };
        let inner = make_plane_dataset(&spec).ffi()?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(FznDataset { inner })) };
        Ok(())
    })
}

/// Reads a dataset CSV (`x,y,z` header).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn fzn_dataset_load(
    path: *const c_char,
    out: *mut *mut FznDataset,
) -> FznStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = unsafe { path_arg(path) }?;
        let inner = Dataset::load(&path).ffi()?;
        unsafe { *out = Box::into_raw(Box::new(FznDataset { inner })) };
        Ok(())
    })
}

/// Writes the dataset as CSV.
///
/// # Safety
/// `dataset` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fzn_dataset_save(
    dataset: *const FznDataset,
    path: *const c_char,
) -> FznStatus {
    guard(|| {
        let ds = unsafe { dataset.as_ref() }.ok_or_else(|| null("dataset"))?;
        let path = unsafe { path_arg(path) }?;
        ds.inner.save(&path).ffi()
    })
}

/// Number of examples, 0 for a null handle.
///
/// # Safety
/// `dataset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fzn_dataset_len(dataset: *const FznDataset) -> usize {
    unsafe { dataset.as_ref() }.map_or(0, |d| d.inner.len())
}

/// Copies example `index` into `x`, `y`, `z`.
///
/// # Safety
/// `dataset` must be a live handle; `x`, `y`, `z` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fzn_dataset_example(
    dataset: *const FznDataset,
    index: usize,
    x: *mut f64,
    y: *mut f64,
    z: *mut f64,
) -> FznStatus {
    guard(|| {
        let ds = unsafe { dataset.as_ref() }.ok_or_else(|| null("dataset"))?;
        if x.is_null() || y.is_null() || z.is_null() {
            return Err(null("output pointer"));
        }
        let e = ds.inner.examples.get(index).ok_or_else(|| {
            (
                FznStatus::InvalidArgument,
                format!("index {index} out of range"),
            )
        })?;
        if e.x.len() != 2 {
            return Err((FznStatus::InvalidArgument, "dataset is not 2-D".into()));
        }
        unsafe {
            *x = e.x[0];
            *y = e.x[1];
            *z = e.z;
        }
        Ok(())
    })
}

/// Releases a dataset handle. Null is ignored.
///
/// # Safety
/// `dataset` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fzn_dataset_free(dataset: *mut FznDataset) {
    if !dataset.is_null() {
        drop(unsafe { Box::from_raw(dataset) });
    }
}

/// Defaults: simplified learner, 9 input sets, 13 output sets, inputs over
/// `[1, 11]`, output over `[2, 22]`, alpha 0.1, 50 epochs, cluster init.
#[no_mangle]
pub extern "C" fn fzn_train_config_default() -> FznTrainConfig {
    let d = ExperimentConfig::default();
    FznTrainConfig {
        algorithm: FznAlgorithm::Simplified,
        input_sets: d.input_sets,
        output_sets: d.output_sets,
        width_factor: d.width_factor,
        alpha: d.alpha,
        epochs: d.epochs,
        init: FznInit::ClusterBased,
        input_lo: d.input_range.0,
        input_hi: d.input_range.1,
        output_lo: d.output_range.0,
        output_hi: d.output_range.1,
    }
}

fn experiment_config(cfg: &FznTrainConfig) -> ExperimentConfig {
    ExperimentConfig {
        algorithm: match cfg.algorithm {
            FznAlgorithm::Simplified => Algorithm::Simplified,
            FznAlgorithm::ClusterTriangular => Algorithm::ClusterTri,
            FznAlgorithm::ClusterGaussian => Algorithm::ClusterGauss,
            FznAlgorithm::NeuroFuzzy => Algorithm::NeuroFuzzy,
        },
        input_sets: cfg.input_sets,
        output_sets: cfg.output_sets,
        width_factor: cfg.width_factor,
        alpha: cfg.alpha,
        epochs: cfg.epochs,
        init: match cfg.init {
            FznInit::Zero => Init::Zero,
            FznInit::ClusterBased => Init::ClusterBased,
        },
        input_range: (cfg.input_lo, cfg.input_hi),
        output_range: (cfg.output_lo, cfg.output_hi),
        ..Default::default()
    }
}

/// Learns a model from `dataset`.
///
/// # Safety
/// `dataset` must be a live handle, `config` readable, `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn fzn_model_train(
    dataset: *const FznDataset,
    config: *const FznTrainConfig,
    out: *mut *mut FznModel,
) -> FznStatus {
    guard(|| {
        let ds = unsafe { dataset.as_ref() }.ok_or_else(|| null("dataset"))?;
        let cfg = unsafe { config.as_ref() }.ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = experiment_config(cfg).train(&ds.inner).ffi()?;
        unsafe { *out = Box::into_raw(Box::new(FznModel { inner })) };
        Ok(())
    })
}

/// Reads a model file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn fzn_model_load(path: *const c_char, out: *mut *mut FznModel) -> FznStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = unsafe { path_arg(path) }?;
        let (inner, _) = read_model(&path).ffi()?;
        unsafe { *out = Box::into_raw(Box::new(FznModel { inner })) };
        Ok(())
    })
}

/// Writes a model file.
///
/// # Safety
/// `model` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fzn_model_save(model: *const FznModel, path: *const c_char) -> FznStatus {
    guard(|| {
        let m = unsafe { model.as_ref() }.ok_or_else(|| null("model"))?;
        let path = unsafe { path_arg(path) }?;
        save_model(&path, &m.inner, &[]).ffi()
    })
}

/// Model output at `(x, y)`; [`FznStatus::NoActiveRule`] in a coverage gap.
///
/// # Safety
/// `model` must be a live handle and `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn fzn_model_infer(
    model: *const FznModel,
    x: f64,
    y: f64,
    out: *mut f64,
) -> FznStatus {
    guard(|| {
        let m = unsafe { model.as_ref() }.ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = m.inner.infer(&[x, y]).ffi()?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Number of populated cells, 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fzn_model_rule_count(model: *const FznModel) -> usize {
    unsafe { model.as_ref() }.map_or(0, |m| m.inner.rule_count())
}

/// Number of empty cells, 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fzn_model_empty_count(model: *const FznModel) -> usize {
    unsafe { model.as_ref() }.map_or(0, |m| m.inner.empty_count())
}

/// Releases a model handle. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fzn_model_free(model: *mut FznModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Difference surface `noisy - clean` on a `resolution x resolution` grid.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fzn_diff(
    clean: *const FznModel,
    noisy: *const FznModel,
    resolution: usize,
    out: *mut FznDiffSummary,
) -> FznStatus {
    guard(|| {
        let c = unsafe { clean.as_ref() }.ok_or_else(|| null("clean"))?;
        let n = unsafe { noisy.as_ref() }.ok_or_else(|| null("noisy"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = difference_surface(&c.inner, &n.inner, resolution).ffi()?;
        unsafe {
            *out = FznDiffSummary {
                rmse: r.rmse.unwrap_or(f64::NAN),
                max_abs: r.max_abs.unwrap_or(f64::NAN),
                gap_fraction: r.gap_fraction,
                rules_unchanged: r.rule_changes.unchanged,
                rules_changed: r.rule_changes.changed,
                rules_only_clean: r.rule_changes.only_a,
                rules_only_noisy: r.rule_changes.only_b,
            }
        };
        Ok(())
    })
}

/// Error of `model` against the plane on a `resolution x resolution` grid.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fzn_model_error(
    model: *const FznModel,
    resolution: usize,
    out: *mut FznErrorSummary,
) -> FznStatus {
    guard(|| {
        let m = unsafe { model.as_ref() }.ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = model_error(&m.inner, plane, resolution).ffi()?;
        unsafe {
            *out = FznErrorSummary {
                rmse: e.rmse.unwrap_or(f64::NAN),
                max_abs: e.max_abs.unwrap_or(f64::NAN),
                gap_fraction: e.gap_fraction,
            }
        };
        Ok(())
    })
}
