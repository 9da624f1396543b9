#pragma once

#include "lbm/config.hpp"

namespace lbm {

/// Trains per config; writes checkpoint, loss CSV, and the resolved-config
/// echo into cfg.out_dir.
void run_train(const RunConfig& cfg);

/// Translates a fresh test batch with a trained checkpoint; writes output
/// tensors (plus CSV/PGM views where the shape allows) and metrics.csv
/// with the NFE count.
void run_sample(const RunConfig& cfg);

/// Sweeps one parameter (sigma | lambda | steps | timesteps), training and
/// evaluating per value with paired seeds; appends ablation.csv rows.
void run_ablation(const RunConfig& cfg);

/// Closed-form vs Monte-Carlo drift table over t in {0, 0.25, 0.5, 0.75};
/// adds the trained model's drift column when a checkpoint is supplied.
void run_oracle_check(const RunConfig& cfg);

}  // namespace lbm
