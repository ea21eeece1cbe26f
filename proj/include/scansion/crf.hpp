#ifndef SCANSION_CRF_HPP
#define SCANSION_CRF_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scansion/metrics.hpp"

namespace scansion {

// One tagging position: named string fields ("form", "pos", "pos_in_word",
// plus whatever the data pipeline attaches).
struct Observation {
    std::vector<std::pair<std::string, std::string>> fields;

    const std::string* find(std::string_view key) const;
    void set(std::string key, std::string value);
};

struct LabeledSequence {
    std::vector<Observation> observations;
    std::vector<std::string> labels; // empty = unlabeled

    std::size_t size() const { return observations.size(); }
    bool labeled() const { return !labels.empty(); }
};

enum class Transform { Identity, Lowercase, IsCapitalized, Prefix, Suffix };

struct FeatureTemplate {
    std::string name;     // feature-string prefix, e.g. "form", "suf2"
    std::string selector; // observation field
    std::vector<int> offsets;
    Transform transform = Transform::Identity;
    int affix_len = 0; // 1..4 for Prefix/Suffix
};

// Presets. "pos" is the word-form/POS window recipe with capitalization and
// affixes 1..4; "meter" applies the same selectors to syllable text plus
// pos_in_word and distance-from-line-edge fields; "hyphen" is a character
// window of the given radius plus adjacent character bigrams.
std::vector<FeatureTemplate> pos_preset();
std::vector<FeatureTemplate> meter_preset();
std::vector<FeatureTemplate> hyphen_preset(int radius = 3);

// Deterministic feature strings for one position; out-of-range offsets yield
// "<BOS>"/"<EOS>" sentinel values, absent selector fields yield nothing.
std::vector<std::string> extract_features(const LabeledSequence& seq, std::size_t t,
                                          const std::vector<FeatureTemplate>& templates);

class CrfModel {
public:
    std::string task; // layer the model tags, e.g. "met", "met|ft", "hyphen"
    std::vector<std::string> labels;
    std::vector<FeatureTemplate> templates;
    std::unordered_map<std::string, int> feature_index;
    std::vector<std::string> feature_names; // id -> feature string
    std::vector<double> weights;            // emissions, then transitions
    double l2 = 1e-4;
    std::uint64_t seed = 42;

    int num_labels() const { return static_cast<int>(labels.size()); }
    int label_id(std::string_view label) const; // -1 when unknown
    // Emission weight for (feature id, label id).
    std::size_t emission_index(int feature, int label) const;
    // Transition weight; from == num_labels() means BOS, to == num_labels()
    // means EOS.
    std::size_t transition_index(int from, int to) const;
    int bos() const { return num_labels(); }
    int eos() const { return num_labels(); }
    std::size_t weight_count() const;
    void check() const; // throws Error("InvalidModel") on shape violations
};

// Model-resolved feature ids per position; unknown features are dropped.
std::vector<std::vector<int>> sequence_features(const CrfModel& model,
                                                const LabeledSequence& seq);

double log_partition(const CrfModel& model, const LabeledSequence& seq);
// Per-position label distributions.
std::vector<std::vector<double>> marginals(const CrfModel& model, const LabeledSequence& seq);

// Full posterior bundle; pairwise[t-1][i*L+j] = P(y_{t-1}=i, y_t=j).
struct Posteriors {
    double log_z = 0.0;
    std::vector<std::vector<double>> unary;
    std::vector<std::vector<double>> pairwise;
};
Posteriors posteriors(const CrfModel& model, const LabeledSequence& seq);

// Argmax label sequence; score ties resolve toward the lower label index.
std::vector<std::string> viterbi(const CrfModel& model, const LabeledSequence& seq);
std::vector<int> viterbi_ids(const CrfModel& model, const LabeledSequence& seq);

inline std::vector<std::string> tag(const CrfModel& model, const LabeledSequence& seq) {
    return viterbi(model, seq);
}

// Viterbi over many sequences (the parallel bulk path; output order is input
// order regardless of scheduling).
std::vector<std::vector<std::string>> tag_all(const CrfModel& model,
                                              const std::vector<LabeledSequence>& seqs);

// L2-regularized negative log-likelihood of a labeled batch and its exact
// gradient (expected - empirical feature counts + l2 * weights).
std::pair<double, std::vector<double>> nll_and_gradient(const CrfModel& model,
                                                        const std::vector<LabeledSequence>& batch);

EvalReport evaluate(const CrfModel& model, const std::vector<LabeledSequence>& gold);

// --- Joint-label (cross-product) task coupling ---------------------------

std::string join_label(const std::string& primary, const std::string& aux);
std::pair<std::string, std::string> split_label(const std::string& joint);
std::vector<std::string> join_label_sets(const std::vector<std::string>& primary,
                                         const std::vector<std::string>& aux);
std::vector<std::string> join_sequences(const std::vector<std::string>& primary,
                                        const std::vector<std::string>& aux);
// task 0 = primary, task 1 = aux.
std::vector<std::string> project(const std::vector<std::string>& joint, int task);

// --- Serialization --------------------------------------------------------

std::string save_model(const CrfModel& model);
CrfModel load_model(const std::string& text);

// --- Verse-line adapters ----------------------------------------------------

// Observations with form / pos / pos_in_word / dist_start / dist_end fields.
// include_pos=false leaves the pos field out (required when pos is the
// prediction target rather than an input).
LabeledSequence sequence_from_line(const VerseLine& line, bool include_pos = true);
void attach_labels(LabeledSequence& seq, const VerseLine& line, Layer task);
void attach_joint_labels(LabeledSequence& seq, const VerseLine& line, Layer primary, Layer aux);

} // namespace scansion

#endif
