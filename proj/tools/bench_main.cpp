// Times the OpenMP batch-gradient and bulk-tagging kernels against their
// serial reference implementations on a synthetic corpus and checks that the
// two paths agree.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scansion/crf.hpp"
#include "scansion/crf_train.hpp"

using namespace scansion;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::vector<LabeledSequence> synthetic_corpus(std::size_t n_lines, std::uint64_t seed,
                                              bool joint) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len_dist(6, 14);
    std::uniform_int_distribution<int> vocab(0, 79);
    std::bernoulli_distribution reliable(0.95);
    std::bernoulli_distribution phase(0.5);
    std::vector<LabeledSequence> data(n_lines);
    for (auto& seq : data) {
        int len = len_dist(rng);
        bool stressed = phase(rng);
        for (int t = 0; t < len; ++t) {
            bool cue = reliable(rng) ? stressed : !stressed;
            Observation obs;
            obs.set("form", (cue ? "S" : "u") + std::to_string(vocab(rng)));
            obs.set("pos_in_word", "0");
            obs.set("dist_start", std::to_string(t));
            obs.set("dist_end", std::to_string(len - 1 - t));
            seq.observations.push_back(std::move(obs));
            std::string met = stressed ? "+" : "-";
            seq.labels.push_back(joint ? join_label(met, stressed ? ":" : ".") : met);
            stressed = !stressed;
        }
    }
    return data;
}

void run_benchmark(const char* what, std::size_t n_lines, int reps, bool joint) {
    std::vector<LabeledSequence> data = synthetic_corpus(n_lines, 7, joint);

    CrfModel model;
    model.labels = joint ? join_label_sets({"+", "-"}, {".", ":"})
                         : std::vector<std::string>{"+", "-"};
    model.templates = meter_preset();
    for (const LabeledSequence& seq : data)
        for (std::size_t t = 0; t < seq.size(); ++t)
            for (const std::string& f : extract_features(seq, t, model.templates))
                if (model.feature_index.emplace(f, (int)model.feature_names.size()).second)
                    model.feature_names.push_back(f);
    model.weights.assign(model.weight_count(), 0.0);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> noise(0.0, 0.1);
    for (double& w : model.weights) w = noise(rng);

    std::vector<PreparedSequence> prepared;
    prepared.reserve(data.size());
    for (const LabeledSequence& seq : data) prepared.push_back(prepare_sequence(model, seq));

    std::printf("%s: %zu lines, %zu features, %d labels\n", what, data.size(),
                model.feature_names.size(), model.num_labels());

    double serial_ms = 0.0, parallel_ms = 0.0;
    std::pair<double, std::vector<double>> ref, par;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_ms();
        ref = batch_nll_grad_serial(model, prepared, model.l2);
        double t1 = now_ms();
        par = batch_nll_grad(model, prepared, model.l2);
        double t2 = now_ms();
        serial_ms += t1 - t0;
        parallel_ms += t2 - t1;
    }
    double max_diff = std::abs(ref.first - par.first);
    for (std::size_t k = 0; k < ref.second.size(); ++k)
        max_diff = std::max(max_diff, std::abs(ref.second[k] - par.second[k]));
    std::printf(
        "  batch nll+gradient: serial %.1f ms, parallel %.1f ms, speedup %.2fx, max |diff| %.3g\n",
        serial_ms / reps, parallel_ms / reps, serial_ms / parallel_ms, max_diff);

    double tag_serial = now_ms();
    std::size_t checksum = 0;
    for (const LabeledSequence& seq : data) checksum += viterbi(model, seq).size();
    tag_serial = now_ms() - tag_serial;
    double tag_parallel = now_ms();
    auto outputs = tag_all(model, data);
    tag_parallel = now_ms() - tag_parallel;
    std::size_t checksum2 = 0;
    for (const auto& o : outputs) checksum2 += o.size();
    std::printf("  viterbi tagging:    serial %.1f ms, parallel %.1f ms, speedup %.2fx%s\n",
                tag_serial, tag_parallel, tag_serial / tag_parallel,
                checksum == checksum2 ? "" : " (MISMATCH)");
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n_lines = argc > 1 ? std::stoul(argv[1]) : 2000;
    int reps = argc > 2 ? std::stoi(argv[2]) : 3;

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled\n");
#endif
    run_benchmark("binary stress tagging", n_lines, reps, false);
    run_benchmark("joint met|ft tagging", n_lines, reps, true);
    return 0;
}
