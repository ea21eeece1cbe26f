#ifndef SCANSION_CRF_TRAIN_HPP
#define SCANSION_CRF_TRAIN_HPP

#include <cstdint>
#include <vector>

#include "scansion/crf.hpp"

namespace scansion {

struct TrainConfig {
    int epochs = 50;
    double learning_rate = 0.5; // base step of the per-coordinate adaptive schedule
    double l2 = 1e-4;
    std::uint64_t seed = 42;
    int patience = 10;         // early stop on stagnant dev accuracy; <=0 disables
    double dev_fraction = 0.1; // 0 disables the dev split
    int batch_size = 8;        // 0 = full batch
    bool adaptive = true;      // false: plain constant-step descent
};

struct EpochDiagnostics {
    double train_nll = 0.0;
    double dev_accuracy = 0.0;
};

struct TrainResult {
    CrfModel model; // weights of the best dev epoch (last epoch without dev split)
    std::vector<EpochDiagnostics> history;
    int best_epoch = -1;
};

// Deterministic given config.seed and the input order; identical weight
// vectors on every rerun, independent of the OpenMP thread count.
TrainResult train(const std::vector<LabeledSequence>& data,
                  const std::vector<FeatureTemplate>& templates,
                  const std::vector<std::string>& labels, const TrainConfig& config);

// --- Batch objective kernels ------------------------------------------------
//
// Feature-id/label-id form of a sequence, precomputed once per training run.
struct PreparedSequence {
    std::vector<std::vector<int>> features; // per position
    std::vector<int> gold;                  // empty when unlabeled
};

PreparedSequence prepare_sequence(const CrfModel& model, const LabeledSequence& seq);

// Straightforward sequential loop; the reference the kernel is tested against.
std::pair<double, std::vector<double>> batch_nll_grad_serial(
    const CrfModel& model, const std::vector<PreparedSequence>& batch, double l2);

// OpenMP kernel: per-sequence terms computed in parallel, then reduced in
// sequence-index order, so results do not depend on the thread count.
std::pair<double, std::vector<double>> batch_nll_grad(const CrfModel& model,
                                                      const std::vector<PreparedSequence>& batch,
                                                      double l2);

} // namespace scansion

#endif
