#include "scansion/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "scansion/error.hpp"

namespace scansion {

// --- Evaluation -----------------------------------------------------------

EvalReport evaluate_sequences(const std::vector<std::vector<std::string>>& gold,
                              const std::vector<std::vector<std::string>>& predicted) {
    if (gold.size() != predicted.size())
        throw Error("Misaligned", "gold and predicted corpora have different line counts");
    EvalReport report;
    long long correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i].size() != predicted[i].size())
            throw Error("Misaligned", "line " + std::to_string(i) + " lengths differ");
        bool whole = true;
        for (std::size_t t = 0; t < gold[i].size(); ++t) {
            const std::string& g = gold[i][t];
            const std::string& p = predicted[i][t];
            if (g == p) {
                ++correct;
                ++report.per_label[g].tp;
            } else {
                whole = false;
                ++report.per_label[p].fp;
                ++report.per_label[g].fn;
            }
            ++report.n_items;
        }
        report.n_lines += 1;
        report.line_accuracy += whole ? 1.0 : 0.0;
    }
    report.syllable_accuracy =
        report.n_items ? static_cast<double>(correct) / static_cast<double>(report.n_items) : 1.0;
    report.line_accuracy = report.n_lines ? report.line_accuracy / static_cast<double>(report.n_lines) : 1.0;

    long long tp = 0, fp = 0, fn = 0;
    double f1_sum = 0.0;
    for (auto& [label, score] : report.per_label) {
        score.precision = score.tp + score.fp ? static_cast<double>(score.tp) / (score.tp + score.fp) : 0.0;
        score.recall = score.tp + score.fn ? static_cast<double>(score.tp) / (score.tp + score.fn) : 0.0;
        score.f1 = score.precision + score.recall > 0
                       ? 2 * score.precision * score.recall / (score.precision + score.recall)
                       : 0.0;
        f1_sum += score.f1;
        tp += score.tp;
        fp += score.fp;
        fn += score.fn;
    }
    report.macro_f1 = report.per_label.empty() ? 0.0 : f1_sum / report.per_label.size();
    report.micro_f1 = 2 * tp + fp + fn ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
    return report;
}

EvalReport eval_report(const std::vector<VerseLine>& gold, const std::vector<VerseLine>& predicted,
                       Layer layer) {
    if (gold.size() != predicted.size())
        throw Error("Misaligned", "corpora have different line counts");
    std::vector<std::vector<std::string>> g(gold.size()), p(predicted.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
        g[i] = layer_strings(gold[i], layer);
        p[i] = layer_strings(predicted[i], layer);
    }
    return evaluate_sequences(g, p);
}

EvalReport eval_report_measures(const std::vector<VerseLine>& gold,
                                const std::vector<VerseLine>& predicted, bool fine) {
    if (gold.size() != predicted.size())
        throw Error("Misaligned", "corpora have different line counts");
    std::vector<std::vector<std::string>> g(gold.size()), p(predicted.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const auto& gm = fine ? gold[i].fmsr : gold[i].smsr;
        const auto& pm = fine ? predicted[i].fmsr : predicted[i].smsr;
        if (!gm || !pm) throw Error("MissingLayer", "measure label missing on line " +
                                                        std::to_string(i));
        g[i] = {*gm};
        p[i] = {*pm};
    }
    return evaluate_sequences(g, p);
}

// --- Cohen's kappa -----------------------------------------------------------

double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty()) throw Error("Empty", "kappa of empty sequences");
    if (a.size() != b.size())
        throw Error("LengthMismatch", "sequences have lengths " + std::to_string(a.size()) +
                                          " and " + std::to_string(b.size()));
    const double n = static_cast<double>(a.size());
    std::map<std::string, long long> ca, cb;
    long long agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        agree += a[i] == b[i];
    }
    double p_o = agree / n;
    double p_e = 0.0;
    for (const auto& [label, count] : ca) {
        auto it = cb.find(label);
        if (it != cb.end()) p_e += (count / n) * (it->second / n);
    }
    if (p_e >= 1.0 - 1e-15) return agree == static_cast<long long>(a.size()) ? 1.0 : 0.0;
    return (p_o - p_e) / (1.0 - p_e);
}

// --- Agreement at three granularities -------------------------------------------

namespace {

std::vector<std::string> layer_label_space(Layer layer, const std::vector<std::string>& pooled_a,
                                           const std::vector<std::string>& pooled_b) {
    switch (layer) {
        case Layer::Met: return {"+", "-"};
        case Layer::Foot:
        case Layer::Caesura: return {".", ":"};
        case Layer::Main: return {"0", "1", "2"};
        case Layer::Pos: {
            std::set<std::string> tags(pooled_a.begin(), pooled_a.end());
            tags.insert(pooled_b.begin(), pooled_b.end());
            return {tags.begin(), tags.end()};
        }
    }
    return {};
}

} // namespace

AgreementReport kappa_granularities(const std::vector<VerseLine>& annot_a,
                                    const std::vector<VerseLine>& annot_b, Layer layer,
                                    const AgreementOptions& options) {
    if (annot_a.size() != annot_b.size())
        throw Error("Misaligned", "annotations have different line counts");
    std::vector<std::string> pooled_a, pooled_b;
    std::vector<std::string> junctions_a, junctions_b;
    std::vector<std::string> lines_a, lines_b;
    const bool junction_layer = layer == Layer::Foot || layer == Layer::Caesura;
    for (std::size_t i = 0; i < annot_a.size(); ++i) {
        std::vector<std::string> la = layer_strings(annot_a[i], layer);
        std::vector<std::string> lb = layer_strings(annot_b[i], layer);
        if (la.size() != lb.size())
            throw Error("Misaligned", "line " + std::to_string(i) + " lengths differ");
        pooled_a.insert(pooled_a.end(), la.begin(), la.end());
        pooled_b.insert(pooled_b.end(), lb.begin(), lb.end());
        if (junction_layer && !la.empty()) {
            std::size_t count = options.include_final_junction ? la.size() : la.size() - 1;
            for (std::size_t t = 0; t < count; ++t) {
                junctions_a.push_back(la[t]);
                junctions_b.push_back(lb[t]);
            }
        }
        std::string sa, sb;
        for (const auto& s : la) sa += s;
        for (const auto& s : lb) sb += s;
        lines_a.push_back(std::move(sa));
        lines_b.push_back(std::move(sb));
    }
    if (pooled_a.empty()) throw Error("Empty", "no syllables to compare");

    AgreementReport report;
    report.kappa_syllable = cohen_kappa(pooled_a, pooled_b);
    report.n_syllable = pooled_a.size();
    if (junction_layer && !junctions_a.empty()) {
        report.kappa_boundary = cohen_kappa(junctions_a, junctions_b);
        report.n_boundary = junctions_a.size();
    }
    if (options.line_binary) {
        // Chance-corrected binary agreement with uniform two-class chance
        // (Bennett's S): 2 * P(agree) - 1.
        long long agree = 0;
        for (std::size_t i = 0; i < lines_a.size(); ++i) agree += lines_a[i] == lines_b[i];
        report.kappa_line = 2.0 * agree / static_cast<double>(lines_a.size()) - 1.0;
    } else {
        report.kappa_line = cohen_kappa(lines_a, lines_b);
    }
    report.n_line = lines_a.size();
    report.labels = layer_label_space(layer, pooled_a, pooled_b);
    report.confusion = confusion_matrix(pooled_a, pooled_b, report.labels);
    return report;
}

std::vector<std::vector<long long>> confusion_matrix(const std::vector<std::string>& a,
                                                     const std::vector<std::string>& b,
                                                     const std::vector<std::string>& label_set) {
    if (a.size() != b.size()) throw Error("Misaligned", "sequences have different lengths");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < label_set.size(); ++i) index[label_set[i]] = i;
    std::vector<std::vector<long long>> counts(label_set.size(),
                                               std::vector<long long>(label_set.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto ia = index.find(a[i]);
        auto ib = index.find(b[i]);
        if (ia == index.end())
            throw Error("UnknownLabel", "label '" + a[i] + "' outside the label set");
        if (ib == index.end())
            throw Error("UnknownLabel", "label '" + b[i] + "' outside the label set");
        ++counts[ia->second][ib->second];
    }
    return counts;
}

// --- Accent ratio -----------------------------------------------------------------

std::string coarse_pos(const std::string& tag) {
    for (const char* keep : {"ADJ", "ADV", "ITJ"})
        if (tag.rfind(keep, 0) == 0) return keep;
    return tag.size() <= 2 ? tag : tag.substr(0, 2);
}

AccentRatioTable accent_ratio(const std::vector<VerseLine>& lines) {
    AccentRatioTable table;
    for (const VerseLine& line : lines) {
        if (!line.met || !line.pos)
            throw Error("MissingLayer", "accent ratio needs the met and pos layers");
        for (std::size_t t = 0; t < line.size(); ++t) {
            if (line.syllables[t].pos_in_word != 0) continue;
            auto& row = table.rows[coarse_pos((*line.pos)[t])];
            ++row.n;
            row.stressed += (*line.met)[t] == StressMark::Stressed;
        }
    }
    for (auto& [tag, row] : table.rows)
        row.ratio = row.n ? static_cast<double>(row.stressed) / static_cast<double>(row.n) : 0.0;
    return table;
}

// --- Rendering --------------------------------------------------------------------

namespace {

std::string fixed3(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << v;
    return out.str();
}

} // namespace

std::string render_eval_report(const EvalReport& report) {
    std::ostringstream out;
    out << "items      " << report.n_items << "\n";
    out << "lines      " << report.n_lines << "\n";
    out << "syll acc   " << fixed3(report.syllable_accuracy) << "\n";
    out << "line acc   " << fixed3(report.line_accuracy) << "\n";
    out << "macro F1   " << fixed3(report.macro_f1) << "\n";
    out << "micro F1   " << fixed3(report.micro_f1) << "\n";
    out << "label      prec   rec    F1     tp     fp     fn\n";
    for (const auto& [label, s] : report.per_label) {
        out << std::left << std::setw(11) << label << std::setw(7) << fixed3(s.precision)
            << std::setw(7) << fixed3(s.recall) << std::setw(7) << fixed3(s.f1) << std::setw(7)
            << s.tp << std::setw(7) << s.fp << std::setw(7) << s.fn << "\n";
    }
    return out.str();
}

std::string eval_report_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["n_items"] = report.n_items;
    j["n_lines"] = report.n_lines;
    j["syllable_accuracy"] = report.syllable_accuracy;
    j["line_accuracy"] = report.line_accuracy;
    j["macro_f1"] = report.macro_f1;
    j["micro_f1"] = report.micro_f1;
    nlohmann::ordered_json labels = nlohmann::ordered_json::object();
    for (const auto& [label, s] : report.per_label)
        labels[label] = {{"precision", s.precision}, {"recall", s.recall},   {"f1", s.f1},
                         {"tp", s.tp},               {"fp", s.fp},           {"fn", s.fn}};
    j["per_label"] = std::move(labels);
    return j.dump(2) + "\n";
}

std::string render_agreement_report(const AgreementReport& report) {
    std::ostringstream out;
    out << "kappa syllable  " << fixed3(report.kappa_syllable) << "  (n=" << report.n_syllable
        << ")\n";
    if (report.kappa_boundary)
        out << "kappa boundary  " << fixed3(*report.kappa_boundary) << "  (n=" << report.n_boundary
            << ")\n";
    out << "kappa line      " << fixed3(report.kappa_line) << "  (n=" << report.n_line << ")\n";
    out << "confusion (rows = annotator A, cols = annotator B)\n";
    out << std::left << std::setw(8) << "";
    for (const auto& label : report.labels) out << std::setw(8) << label;
    out << "\n";
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        out << std::setw(8) << report.labels[i];
        for (std::size_t jcol = 0; jcol < report.labels.size(); ++jcol)
            out << std::setw(8) << report.confusion[i][jcol];
        out << "\n";
    }
    return out.str();
}

std::string agreement_report_json(const AgreementReport& report) {
    nlohmann::ordered_json j;
    j["kappa_syllable"] = report.kappa_syllable;
    if (report.kappa_boundary) j["kappa_boundary"] = *report.kappa_boundary;
    j["kappa_line"] = report.kappa_line;
    j["n_syllable"] = report.n_syllable;
    j["n_boundary"] = report.n_boundary;
    j["n_line"] = report.n_line;
    j["labels"] = report.labels;
    j["confusion"] = report.confusion;
    return j.dump(2) + "\n";
}

std::string confusion_csv(const AgreementReport& report) {
    std::string out = "label";
    for (const auto& label : report.labels) out += "," + label;
    out += "\n";
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        out += report.labels[i];
        for (std::size_t j = 0; j < report.labels.size(); ++j)
            out += "," + std::to_string(report.confusion[i][j]);
        out += "\n";
    }
    return out;
}

std::string render_accent_ratio(const AccentRatioTable& table) {
    // Descending by ratio, the way the accent hierarchy reads.
    std::vector<std::pair<std::string, AccentRatioTable::Row>> rows(table.rows.begin(),
                                                                    table.rows.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.second.ratio != b.second.ratio ? a.second.ratio > b.second.ratio
                                                : a.first < b.first;
    });
    std::ostringstream out;
    out << "pos     ratio   stressed  n\n";
    for (const auto& [tag, row] : rows)
        out << std::left << std::setw(8) << tag << std::setw(8) << fixed3(row.ratio)
            << std::setw(10) << row.stressed << row.n << "\n";
    return out.str();
}

} // namespace scansion
