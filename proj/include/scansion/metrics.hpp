#ifndef SCANSION_METRICS_HPP
#define SCANSION_METRICS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scansion/corpus.hpp"

namespace scansion {

// --- Tagging evaluation -----------------------------------------------------

struct LabelScore {
    long long tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct EvalReport {
    double syllable_accuracy = 0.0;
    double line_accuracy = 0.0;
    std::map<std::string, LabelScore> per_label;
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
    std::size_t n_items = 0;
    std::size_t n_lines = 0;
};

EvalReport evaluate_sequences(const std::vector<std::vector<std::string>>& gold,
                              const std::vector<std::vector<std::string>>& predicted);

EvalReport eval_report(const std::vector<VerseLine>& gold,
                       const std::vector<VerseLine>& predicted, Layer layer);

// Line-level measure labels: every line is a single item, so micro F1 equals
// line accuracy. `fine` selects fmsr over smsr.
EvalReport eval_report_measures(const std::vector<VerseLine>& gold,
                                const std::vector<VerseLine>& predicted, bool fine);

std::string render_eval_report(const EvalReport& report);
std::string eval_report_json(const EvalReport& report);

// --- Inter-annotator agreement -----------------------------------------------

// Cohen's kappa; when expected agreement is 1 (both annotators constant on the
// same label) the convention is 1.0 for identical sequences, else 0.0.
double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct AgreementOptions {
    // The end-of-line junction is a boundary by convention and excluded from
    // the boundary granularity unless requested.
    bool include_final_junction = false;
    // Line granularity: exact-string categories by default; true compares
    // binary match/mismatch instead.
    bool line_binary = false;
};

struct AgreementReport {
    double kappa_syllable = 0.0;
    std::optional<double> kappa_boundary; // junction layers (ft, csr) only
    double kappa_line = 0.0;
    std::vector<std::string> labels; // confusion axis, syllable granularity
    std::vector<std::vector<long long>> confusion;
    std::size_t n_syllable = 0, n_boundary = 0, n_line = 0;
};

AgreementReport kappa_granularities(const std::vector<VerseLine>& annot_a,
                                    const std::vector<VerseLine>& annot_b, Layer layer,
                                    const AgreementOptions& options = {});

std::string render_agreement_report(const AgreementReport& report);
std::string agreement_report_json(const AgreementReport& report);
std::string confusion_csv(const AgreementReport& report);

// counts[i][j] = occurrences of (a = labels[i], b = labels[j]).
std::vector<std::vector<long long>> confusion_matrix(const std::vector<std::string>& a,
                                                     const std::vector<std::string>& b,
                                                     const std::vector<std::string>& label_set);

// --- Corpus statistics ---------------------------------------------------------

struct AccentRatioTable {
    struct Row {
        long long stressed = 0;
        long long n = 0;
        double ratio = 0.0;
    };
    std::map<std::string, Row> rows; // coarse POS tag -> ratio
};

// Stress ratio of monosyllabic words (pos_in_word == 0) per coarse POS tag;
// needs the met and pos layers.
AccentRatioTable accent_ratio(const std::vector<VerseLine>& lines);

// First two characters, except ADJ/ADV/ITJ which stay three to keep the
// adjective/adverb split visible.
std::string coarse_pos(const std::string& tag);

std::string render_accent_ratio(const AccentRatioTable& table);

} // namespace scansion

#endif
