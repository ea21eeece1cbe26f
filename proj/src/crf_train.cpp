#include "scansion/crf_train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "scansion/error.hpp"

namespace scansion {

namespace detail {
Posteriors posteriors_prepared(const CrfModel& model, const std::vector<std::vector<int>>& feats);
std::vector<int> viterbi_prepared(const CrfModel& model,
                                  const std::vector<std::vector<int>>& feats);
double gold_score(const CrfModel& model, const std::vector<std::vector<int>>& feats,
                  const std::vector<int>& gold);
} // namespace detail

PreparedSequence prepare_sequence(const CrfModel& model, const LabeledSequence& seq) {
    if (seq.size() == 0) throw Error("EmptySequence", "sequence has no positions");
    PreparedSequence prep;
    prep.features = sequence_features(model, seq);
    if (seq.labeled()) {
        if (seq.labels.size() != seq.size())
            throw Error("LabelMismatch", "label count does not match sequence length");
        prep.gold.reserve(seq.size());
        for (const std::string& l : seq.labels) {
            int id = model.label_id(l);
            if (id < 0) throw Error("LabelOutsideSet", "label '" + l + "' outside the model's set");
            prep.gold.push_back(id);
        }
    }
    return prep;
}

namespace {

// Emits the gradient of one sequence's negative log-likelihood as a stream of
// (weight index, delta) pairs in a fixed order; both batch paths replay the
// same stream, so their sums agree bit for bit.
template <typename Sink>
double sequence_nll_grad(const CrfModel& model, const PreparedSequence& prep, Sink&& sink) {
    if (prep.gold.empty()) throw Error("UnlabeledSequence", "training sequence has no labels");
    const int L = model.num_labels();
    const std::size_t n = prep.features.size();
    Posteriors post = detail::posteriors_prepared(model, prep.features);

    for (std::size_t t = 0; t < n; ++t)
        for (int f : prep.features[t]) {
            for (int y = 0; y < L; ++y)
                sink(model.emission_index(f, y), post.unary[t][y]);
            sink(model.emission_index(f, prep.gold[t]), -1.0);
        }
    for (int y = 0; y < L; ++y) sink(model.transition_index(model.bos(), y), post.unary[0][y]);
    sink(model.transition_index(model.bos(), prep.gold[0]), -1.0);
    for (std::size_t t = 1; t < n; ++t) {
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j)
                sink(model.transition_index(i, j), post.pairwise[t - 1][i * L + j]);
        sink(model.transition_index(prep.gold[t - 1], prep.gold[t]), -1.0);
    }
    for (int y = 0; y < L; ++y)
        sink(model.transition_index(y, model.eos()), post.unary[n - 1][y]);
    sink(model.transition_index(prep.gold.back(), model.eos()), -1.0);

    return post.log_z - detail::gold_score(model, prep.features, prep.gold);
}

void add_l2(const CrfModel& model, double l2, double& nll, std::vector<double>& grad) {
    if (l2 == 0.0) return;
    double sq = 0.0;
    for (std::size_t k = 0; k < grad.size(); ++k) {
        sq += model.weights[k] * model.weights[k];
        grad[k] += l2 * model.weights[k];
    }
    nll += 0.5 * l2 * sq;
}

} // namespace

std::pair<double, std::vector<double>> batch_nll_grad_serial(
    const CrfModel& model, const std::vector<PreparedSequence>& batch, double l2) {
    std::vector<double> grad(model.weight_count(), 0.0);
    double nll = 0.0;
    for (const PreparedSequence& prep : batch)
        nll += sequence_nll_grad(model, prep, [&](std::size_t k, double d) { grad[k] += d; });
    add_l2(model, l2, nll, grad);
    return {nll, std::move(grad)};
}

std::pair<double, std::vector<double>> batch_nll_grad(const CrfModel& model,
                                                      const std::vector<PreparedSequence>& batch,
                                                      double l2) {
    // Sequences are split into contiguous chunks of ~8; each chunk accumulates
    // a dense partial in sequence order and the partials are merged in chunk
    // order. The chunk layout depends only on the batch size, so the result
    // does not depend on the thread count.
    const std::size_t n = batch.size();
    const std::size_t n_chunks = std::min<std::size_t>(32, n == 0 ? 1 : (n + 7) / 8);
    std::vector<std::vector<double>> partials(n_chunks);
    std::vector<double> chunk_nll(n_chunks, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
        std::vector<double>& partial = partials[c];
        partial.assign(model.weight_count(), 0.0);
        std::size_t lo = c * n / n_chunks, hi = (c + 1) * n / n_chunks;
        for (std::size_t i = lo; i < hi; ++i)
            chunk_nll[c] += sequence_nll_grad(
                model, batch[i], [&partial](std::size_t k, double d) { partial[k] += d; });
    }
    std::vector<double> grad(model.weight_count(), 0.0);
    double nll = 0.0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        nll += chunk_nll[c];
        for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += partials[c][k];
    }
    add_l2(model, l2, nll, grad);
    return {nll, std::move(grad)};
}

std::pair<double, std::vector<double>> nll_and_gradient(const CrfModel& model,
                                                        const std::vector<LabeledSequence>& batch) {
    model.check();
    std::vector<PreparedSequence> prepared;
    prepared.reserve(batch.size());
    for (const LabeledSequence& seq : batch) {
        if (!seq.labeled()) throw Error("UnlabeledSequence", "batch sequence has no labels");
        prepared.push_back(prepare_sequence(model, seq));
    }
    return batch_nll_grad(model, prepared, model.l2);
}

TrainResult train(const std::vector<LabeledSequence>& data,
                  const std::vector<FeatureTemplate>& templates,
                  const std::vector<std::string>& labels, const TrainConfig& config) {
    if (data.empty()) throw Error("EmptyData", "no training sequences");
    if (labels.empty()) throw Error("EmptyData", "empty label set");
    if (config.epochs < 1) throw Error("EmptyData", "epochs must be >= 1");
    if (config.l2 < 0) throw Error("EmptyData", "l2 must be >= 0");

    CrfModel model;
    model.labels = labels;
    model.templates = templates;
    model.l2 = config.l2;
    model.seed = config.seed;
    for (const LabeledSequence& seq : data) {
        if (seq.size() == 0) throw Error("EmptySequence", "training sequence has no positions");
        if (!seq.labeled() || seq.labels.size() != seq.size())
            throw Error("UnlabeledSequence", "training sequence is unlabeled or misaligned");
        for (const std::string& l : seq.labels)
            if (model.label_id(l) < 0)
                throw Error("LabelOutsideSet", "label '" + l + "' outside the given set");
    }

    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t n_dev = static_cast<std::size_t>(std::lround(config.dev_fraction * data.size()));
    if (n_dev >= data.size()) n_dev = data.size() - 1;
    std::vector<std::size_t> train_idx(order.begin(), order.end() - n_dev);
    std::vector<std::size_t> dev_idx(order.end() - n_dev, order.end());

    // The feature index is built from the training split only; dev-only
    // features stay unknown, as they would at tag time.
    for (std::size_t i : train_idx) {
        const LabeledSequence& seq = data[i];
        for (std::size_t t = 0; t < seq.size(); ++t)
            for (const std::string& f : extract_features(seq, t, templates))
                if (model.feature_index.emplace(f, static_cast<int>(model.feature_names.size()))
                        .second)
                    model.feature_names.push_back(f);
    }
    model.weights.assign(model.weight_count(), 0.0);
    model.check();

    std::vector<PreparedSequence> train_prep;
    train_prep.reserve(train_idx.size());
    for (std::size_t i : train_idx) train_prep.push_back(prepare_sequence(model, data[i]));
    std::vector<PreparedSequence> dev_prep;
    dev_prep.reserve(dev_idx.size());
    for (std::size_t i : dev_idx) dev_prep.push_back(prepare_sequence(model, data[i]));

    const std::size_t batch_size =
        config.batch_size <= 0 ? train_prep.size()
                               : std::min<std::size_t>(config.batch_size, train_prep.size());
    std::vector<double> adagrad(model.weight_count(), 0.0);
    std::vector<std::size_t> epoch_order(train_prep.size());
    std::iota(epoch_order.begin(), epoch_order.end(), 0);

    TrainResult result;
    std::vector<double> best_weights = model.weights;
    double best_dev = -1.0;
    double best_nll = std::numeric_limits<double>::infinity();
    int since_best = 0;

    auto dev_accuracy = [&]() {
        if (dev_prep.empty()) return 0.0;
        long long correct = 0, total = 0;
        std::vector<std::vector<int>> outputs(dev_prep.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(dev_prep.size()); ++i)
            outputs[i] = detail::viterbi_prepared(model, dev_prep[i].features);
        for (std::size_t i = 0; i < dev_prep.size(); ++i)
            for (std::size_t t = 0; t < outputs[i].size(); ++t) {
                correct += outputs[i][t] == dev_prep[i].gold[t];
                ++total;
            }
        return static_cast<double>(correct) / static_cast<double>(total);
    };

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(epoch_order.begin(), epoch_order.end(), rng);
        double epoch_nll = 0.0;
        for (std::size_t start = 0; start < epoch_order.size(); start += batch_size) {
            std::size_t end = std::min(epoch_order.size(), start + batch_size);
            std::vector<PreparedSequence> batch;
            batch.reserve(end - start);
            for (std::size_t k = start; k < end; ++k) batch.push_back(train_prep[epoch_order[k]]);
            double l2_scale = config.l2 * static_cast<double>(batch.size()) /
                              static_cast<double>(train_prep.size());
            auto [nll, grad] = batch_nll_grad(model, batch, l2_scale);
            epoch_nll += nll;
            if (config.adaptive) {
                for (std::size_t k = 0; k < grad.size(); ++k) {
                    adagrad[k] += grad[k] * grad[k];
                    model.weights[k] -=
                        config.learning_rate * grad[k] / (std::sqrt(adagrad[k]) + 1e-8);
                }
            } else {
                for (std::size_t k = 0; k < grad.size(); ++k)
                    model.weights[k] -= config.learning_rate * grad[k];
            }
        }
        EpochDiagnostics diag;
        diag.train_nll = epoch_nll;
        diag.dev_accuracy = dev_accuracy();
        result.history.push_back(diag);
        if (!dev_prep.empty()) {
            // Dev accuracy decides which weights to keep; a saturated dev set
            // falls back to the training objective so later, better-fit
            // epochs still win. Patience counts epochs without a strict dev
            // improvement.
            bool dev_improved = diag.dev_accuracy > best_dev;
            if (dev_improved ||
                (diag.dev_accuracy == best_dev && diag.train_nll < best_nll)) {
                best_weights = model.weights;
                best_nll = diag.train_nll;
                result.best_epoch = epoch;
            }
            if (dev_improved) {
                best_dev = diag.dev_accuracy;
                since_best = 0;
            } else if (config.patience > 0 && ++since_best >= config.patience) {
                break;
            }
        }
    }
    if (dev_prep.empty()) {
        best_weights = model.weights;
        result.best_epoch = static_cast<int>(result.history.size()) - 1;
    }
    model.weights = std::move(best_weights);
    result.model = std::move(model);
    return result;
}

} // namespace scansion
