#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbm/bridge.hpp"
#include "lbm/codec.hpp"
#include "lbm/data.hpp"
#include "lbm/model.hpp"
#include "lbm/schedule.hpp"

namespace lbm {

enum class PixelLossKind { None, L1, L2 };
enum class OptimizerKind { Sgd, AdamW };

struct CropPolicy {
    int threshold{8};
    int size{8};
};

struct TrainConfig {
    SigmaParam sigma{};
    double lambda{0.0};
    PixelLossKind pixel_loss{PixelLossKind::None};
    CropPolicy crop{};
    TimestepDistribution timesteps = TimestepDistribution::discrete_uniform(4);
    OptimizerKind optimizer{OptimizerKind::AdamW};
    double lr{1e-3};
    double beta1{0.9};
    double beta2{0.999};
    double weight_decay{0.01};
    int iterations{5000};
    int batch_size{64};
    std::uint64_t seed{0};
};

struct LossValue {
    double value{0.0};
    std::vector<float> grad;
};

/// Mean squared error between the predicted and target drifts, averaged
/// over every element of the batch, with its exact parameter gradient.
LossValue lbm_loss(const DriftModel& m, const BridgeBatch& batch);

/// Decode the predicted endpoint latent and compare to the pixel-space
/// target under L1/L2. Images larger than crop.threshold are compared on
/// one uniformly placed crop.size square, shared across the batch.
LossValue pixel_loss(const DriftModel& m, const Codec& codec,
                     const BridgeBatch& batch, PixelLossKind kind,
                     const CropPolicy& crop, RngStream& stream);

/// Crop rectangle used by pixel_loss; nullopt when the image is small
/// enough to compare whole. Exposed so tests can replay the draw.
struct CropRect {
    int y0{0};
    int x0{0};
    int size{0};
};
std::optional<CropRect> draw_crop(std::int64_t h, std::int64_t w,
                                  const CropPolicy& crop, RngStream& stream);

struct TotalLoss {
    double bridge{0.0};
    double pixel{0.0};
    double total{0.0};
    std::vector<float> grad;
};

/// bridge + lambda * pixel; skips the pixel term entirely when lambda == 0
/// or the kind is None.
TotalLoss total_loss(const DriftModel& m, const Codec& codec,
                     const BridgeBatch& batch, const TrainConfig& cfg,
                     RngStream& crop_stream);

/// SGD or AdamW (decoupled weight decay) over a flat parameter vector.
struct Optimizer {
    OptimizerKind kind{OptimizerKind::AdamW};
    double lr{1e-3};
    double beta1{0.9};
    double beta2{0.999};
    double eps{1e-8};
    double weight_decay{0.0};

    std::vector<float> m;
    std::vector<float> v;
    std::int64_t step_count{0};

    static Optimizer from_config(const TrainConfig& cfg);
    void step(std::vector<float>& params, std::span<const float> grad);
};

struct TrainReport {
    std::vector<double> bridge_series;
    std::vector<double> pixel_series;
    std::vector<double> total_series;
    double wall_seconds{0.0};
    std::vector<float> final_params;
};

struct DivergenceError : std::runtime_error {
    int iteration;
    double loss;
    DivergenceError(int iter, double value);
};

/// The training loop: sample pairs, encode, draw t and eps, build the
/// bridge state and targets, take one optimizer step per iteration.
/// Aborts with DivergenceError when the total loss exceeds 1e6.
TrainReport train_run(const TrainConfig& cfg, const PairedTask& task,
                      const Codec& codec, DriftModel& model);

/// CSV: iteration,bridge_loss,pixel_loss,total_loss.
void write_loss_csv(const std::filesystem::path& path, const TrainReport& report);

}  // namespace lbm
