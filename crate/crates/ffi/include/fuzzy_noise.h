#ifndef FUZZY_NOISE_H
#define FUZZY_NOISE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result codes of every fallible call.
typedef enum FznStatus {
  FZN_STATUS_OK = 0,
  FZN_STATUS_NULL_POINTER = 1,
  FZN_STATUS_INVALID_ARGUMENT = 2,
  // The query point lies in a coverage gap.
  FZN_STATUS_NO_ACTIVE_RULE = 3,
  FZN_STATUS_EMPTY_DATASET = 4,
  FZN_STATUS_DOMAIN_MISMATCH = 5,
  FZN_STATUS_SHAPE_MISMATCH = 6,
  FZN_STATUS_PARSE = 7,
  FZN_STATUS_IO = 8,
  FZN_STATUS_PANIC = 9,
} FznStatus;

typedef enum FznDistribution {
  FZN_DISTRIBUTION_UNIFORM = 0,
  FZN_DISTRIBUTION_CLUSTERED = 1,
} FznDistribution;

typedef enum FznAlgorithm {
  FZN_ALGORITHM_SIMPLIFIED = 0,
  FZN_ALGORITHM_CLUSTER_TRIANGULAR = 1,
  FZN_ALGORITHM_CLUSTER_GAUSSIAN = 2,
  FZN_ALGORITHM_NEURO_FUZZY = 3,
} FznAlgorithm;

typedef enum FznInit {
  // Start every conclusion at the output-range midpoint.
  FZN_INIT_ZERO = 0,
  FZN_INIT_CLUSTER_BASED = 1,
} FznInit;

// Opaque dataset handle.
typedef struct FznDataset FznDataset;

// Opaque model handle.
typedef struct FznModel FznModel;

// Model structure and learner parameters for [`fzn_model_train`].
typedef struct FznTrainConfig {
  enum FznAlgorithm algorithm;
  size_t input_sets;
  size_t output_sets;
  double width_factor;
  double alpha;
  size_t epochs;
  enum FznInit init;
  double input_lo;
  double input_hi;
  double output_lo;
  double output_hi;
} FznTrainConfig;

// Clean-vs-noisy comparison. Metrics are NaN when every grid point is a gap.
typedef struct FznDiffSummary {
  double rmse;
  double max_abs;
  double gap_fraction;
  size_t rules_unchanged;
  size_t rules_changed;
  size_t rules_only_clean;
  size_t rules_only_noisy;
} FznDiffSummary;

// Fit against the plane `z = x + y`. Metrics are NaN when every grid
// point is a gap.
typedef struct FznErrorSummary {
  double rmse;
  double max_abs;
  double gap_fraction;
} FznErrorSummary;

// Message of the last failing call on this thread, or NULL.
//
// The pointer stays valid until the next failing call on the same thread.
const char *fzn_last_error(void);

// Fills `out[0..count]` with SplitMix64 outputs starting from `seed`.
//
// # Safety
// `out` must point to `count` writable `uint64_t`.
enum FznStatus fzn_splitmix64(uint64_t seed, uint64_t *out, size_t count);

// Generates a `z = x + y` dataset over `[lo, hi]^2`.
//
// # Safety
// `out` must be a valid pointer to a handle slot.
enum FznStatus fzn_dataset_generate(size_t n,
                                    enum FznDistribution distribution,
                                    double noise_level,
                                    uint64_t seed,
                                    double lo,
                                    double hi,
                                    struct FznDataset **out);

// Reads a dataset CSV (`x,y,z` header).
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid handle slot.
enum FznStatus fzn_dataset_load(const char *path, struct FznDataset **out);

// Writes the dataset as CSV.
//
// # Safety
// `dataset` must be a live handle and `path` a NUL-terminated string.
enum FznStatus fzn_dataset_save(const struct FznDataset *dataset, const char *path);

// Number of examples, 0 for a null handle.
//
// # Safety
// `dataset` must be null or a live handle.
size_t fzn_dataset_len(const struct FznDataset *dataset);

// Copies example `index` into `x`, `y`, `z`.
//
// # Safety
// `dataset` must be a live handle; `x`, `y`, `z` writable doubles.
enum FznStatus fzn_dataset_example(const struct FznDataset *dataset,
                                   size_t index,
                                   double *x,
                                   double *y,
                                   double *z);

// Releases a dataset handle. Null is ignored.
//
// # Safety
// `dataset` must be null or a handle not yet freed.
void fzn_dataset_free(struct FznDataset *dataset);

// Defaults: simplified learner, 9 input sets, 13 output sets, inputs over
// `[1, 11]`, output over `[2, 22]`, alpha 0.1, 50 epochs, cluster init.
struct FznTrainConfig fzn_train_config_default(void);

// Learns a model from `dataset`.
//
// # Safety
// `dataset` must be a live handle, `config` readable, `out` a valid slot.
enum FznStatus fzn_model_train(const struct FznDataset *dataset,
                               const struct FznTrainConfig *config,
                               struct FznModel **out);

// Reads a model file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid handle slot.
enum FznStatus fzn_model_load(const char *path, struct FznModel **out);

// Writes a model file.
//
// # Safety
// `model` must be a live handle and `path` a NUL-terminated string.
enum FznStatus fzn_model_save(const struct FznModel *model, const char *path);

// Model output at `(x, y)`; [`FznStatus::NoActiveRule`] in a coverage gap.
//
// # Safety
// `model` must be a live handle and `out` a writable double.
enum FznStatus fzn_model_infer(const struct FznModel *model, double x, double y, double *out);

// Number of populated cells, 0 for a null handle.
//
// # Safety
// `model` must be null or a live handle.
size_t fzn_model_rule_count(const struct FznModel *model);

// Number of empty cells, 0 for a null handle.
//
// # Safety
// `model` must be null or a live handle.
size_t fzn_model_empty_count(const struct FznModel *model);

// Releases a model handle. Null is ignored.
//
// # Safety
// `model` must be null or a handle not yet freed.
void fzn_model_free(struct FznModel *model);

// Difference surface `noisy - clean` on a `resolution x resolution` grid.
//
// # Safety
// Both handles must be live and `out` writable.
enum FznStatus fzn_diff(const struct FznModel *clean,
                        const struct FznModel *noisy,
                        size_t resolution,
                        struct FznDiffSummary *out);

// Error of `model` against the plane on a `resolution x resolution` grid.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum FznStatus fzn_model_error(const struct FznModel *model,
                               size_t resolution,
                               struct FznErrorSummary *out);

#endif  /* FUZZY_NOISE_H */
