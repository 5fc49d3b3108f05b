#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "proofsynth/dataset.hpp"
#include "proofsynth/model.hpp"

namespace proofsynth {

struct AdamHyper {
    double alpha = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double lambda = 0.0001;  // coupled weight decay; weights only, never biases
};

// mean cross-entropy of the batch under the current parameters; when grads is
// non-null the mean gradient is accumulated into it
double batch_loss(const NeuralEstimator& est, std::span<const Quadruple> batch,
                  Gradients* grads);

// one Adam step from an already-averaged gradient; decay is added to the
// gradient of each weight tensor before the moment updates
void adam_apply(ParameterStore& store, const Gradients& grads, const AdamHyper& h);

// forward, backward and Adam on one mini-batch; returns the mean loss
double train_step(NeuralEstimator& est, std::span<const Quadruple> batch,
                  const AdamHyper& h);

struct TrainOptions {
    int epochs = 20;
    int batch_size = 1000;
    uint64_t shuffle_seed = 0;
    AdamHyper adam;
};

struct EpochStats {
    int epoch;  // 1-based
    double mean_loss;
    double val_accuracy;
};

// Mini-batch training with a seeded shuffle per epoch; the last partial batch
// is kept. One stats record (and, when log is given, one log line) per epoch.
std::vector<EpochStats> train(NeuralEstimator& est, const std::vector<Quadruple>& train_set,
                              const std::vector<Quadruple>& val_set, const TrainOptions& opts,
                              std::ostream* log = nullptr);

// fraction of quadruples whose predicted rule (argmax, ties by Rule order)
// equals the label
double rule_accuracy(const RuleEstimator& est, const std::vector<Quadruple>& quads);

// Validates the analytic gradients against central finite differences (step
// 1e-5) over every parameter, on a 3-quadruple batch drawn by seed from the
// small-proof corpus. Returns the max relative error. Intended for tiny
// configs (widths around 6) at double precision.
double grad_check(const ModelConfig& cfg, uint64_t seed);

}  // namespace proofsynth
