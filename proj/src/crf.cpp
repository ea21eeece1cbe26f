#include "scansion/crf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <unicode/uchar.h>

#include "scansion/error.hpp"
#include "scansion/textnorm.hpp"

namespace scansion {

const std::string* Observation::find(std::string_view key) const {
    for (const auto& [name, value] : fields)
        if (name == key) return &value;
    return nullptr;
}

void Observation::set(std::string key, std::string value) {
    for (auto& [name, v] : fields)
        if (name == key) {
            v = std::move(value);
            return;
        }
    fields.emplace_back(std::move(key), std::move(value));
}

// --- Templates ---------------------------------------------------------------

namespace {

FeatureTemplate make_template(std::string name, std::string selector, std::vector<int> offsets,
                              Transform transform = Transform::Identity, int affix_len = 0) {
    FeatureTemplate t;
    t.name = std::move(name);
    t.selector = std::move(selector);
    t.offsets = std::move(offsets);
    t.transform = transform;
    t.affix_len = affix_len;
    return t;
}

std::vector<int> window(int radius) {
    std::vector<int> offsets;
    for (int o = -radius; o <= radius; ++o) offsets.push_back(o);
    return offsets;
}

void add_affixes(std::vector<FeatureTemplate>& out, const std::string& selector) {
    for (int k = 1; k <= 4; ++k) {
        out.push_back(make_template("pre" + std::to_string(k), selector, {0}, Transform::Prefix, k));
        out.push_back(make_template("suf" + std::to_string(k), selector, {0}, Transform::Suffix, k));
    }
}

} // namespace

std::vector<FeatureTemplate> pos_preset() {
    std::vector<FeatureTemplate> t;
    t.push_back(make_template("form", "form", window(2)));
    t.push_back(make_template("low", "form", {0}, Transform::Lowercase));
    t.push_back(make_template("pos", "pos", window(2)));
    t.push_back(make_template("cap", "form", {0}, Transform::IsCapitalized));
    add_affixes(t, "form");
    return t;
}

std::vector<FeatureTemplate> meter_preset() {
    std::vector<FeatureTemplate> t;
    t.push_back(make_template("form", "form", window(2)));
    t.push_back(make_template("low", "form", {0}, Transform::Lowercase));
    t.push_back(make_template("pos", "pos", window(2)));
    t.push_back(make_template("cap", "form", {0}, Transform::IsCapitalized));
    add_affixes(t, "form");
    t.push_back(make_template("posw", "pos_in_word", {-1, 0, 1}));
    t.push_back(make_template("dist", "dist_start", {0}));
    t.push_back(make_template("rdist", "dist_end", {0}));
    return t;
}

std::vector<FeatureTemplate> hyphen_preset(int radius) {
    std::vector<FeatureTemplate> t;
    t.push_back(make_template("ch", "form", window(radius)));
    t.push_back(make_template("bi", "bi", {-2, -1, 0, 1}));
    return t;
}

// --- Feature extraction --------------------------------------------------------

namespace {

std::string lowercase_utf8(const std::string& s) {
    auto cps = utf8_decode(s);
    for (char32_t& cp : cps) cp = static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
    return utf8_encode(cps);
}

std::string apply_transform(const std::string& value, const FeatureTemplate& t) {
    switch (t.transform) {
        case Transform::Identity: return value;
        case Transform::Lowercase: return lowercase_utf8(value);
        case Transform::IsCapitalized: {
            auto cps = utf8_decode(value);
            bool cap = !cps.empty() && u_isupper(static_cast<UChar32>(cps[0]));
            return cap ? "true" : "false";
        }
        case Transform::Prefix: return utf8_prefix(value, static_cast<std::size_t>(t.affix_len));
        case Transform::Suffix: return utf8_suffix(value, static_cast<std::size_t>(t.affix_len));
    }
    return value;
}

} // namespace

std::vector<std::string> extract_features(const LabeledSequence& seq, std::size_t t,
                                          const std::vector<FeatureTemplate>& templates) {
    if (t >= seq.size()) throw Error("EmptySequence", "position out of range");
    std::vector<std::string> out;
    const int n = static_cast<int>(seq.size());
    for (const FeatureTemplate& tmpl : templates) {
        // A selector absent from the whole sequence contributes nothing, not
        // even boundary sentinels.
        bool selector_present = false;
        for (const Observation& obs : seq.observations)
            if (obs.find(tmpl.selector)) {
                selector_present = true;
                break;
            }
        if (!selector_present) continue;
        for (int offset : tmpl.offsets) {
            const int p = static_cast<int>(t) + offset;
            std::string value;
            if (p < 0) {
                value = "<BOS>";
            } else if (p >= n) {
                value = "<EOS>";
            } else {
                const std::string* v = seq.observations[p].find(tmpl.selector);
                if (!v) continue;
                value = apply_transform(*v, tmpl);
            }
            out.push_back(tmpl.name + "[" + std::to_string(offset) + "]=" + value);
        }
    }
    return out;
}

// --- Model ----------------------------------------------------------------------

int CrfModel::label_id(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    return -1;
}

std::size_t CrfModel::emission_index(int feature, int label) const {
    return static_cast<std::size_t>(feature) * labels.size() + static_cast<std::size_t>(label);
}

std::size_t CrfModel::transition_index(int from, int to) const {
    const std::size_t L = labels.size();
    return feature_names.size() * L + static_cast<std::size_t>(from) * (L + 1) +
           static_cast<std::size_t>(to);
}

std::size_t CrfModel::weight_count() const {
    const std::size_t L = labels.size();
    return feature_names.size() * L + (L + 1) * (L + 1);
}

void CrfModel::check() const {
    if (labels.empty()) throw Error("InvalidModel", "label set is empty");
    if (weights.size() != weight_count())
        throw Error("InvalidModel", "weight vector has " + std::to_string(weights.size()) +
                                        " entries, expected " + std::to_string(weight_count()));
    if (feature_index.size() != feature_names.size())
        throw Error("InvalidModel", "feature index and name table disagree");
    if (l2 < 0) throw Error("InvalidModel", "negative l2");
}

std::vector<std::vector<int>> sequence_features(const CrfModel& model,
                                                const LabeledSequence& seq) {
    std::vector<std::vector<int>> feats(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        for (const std::string& f : extract_features(seq, t, model.templates)) {
            auto it = model.feature_index.find(f);
            if (it != model.feature_index.end()) feats[t].push_back(it->second);
        }
    }
    return feats;
}

// --- Inference -------------------------------------------------------------------

namespace {

double logsumexp(const double* xs, int n) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) m = std::max(m, xs[i]);
    if (!std::isfinite(m)) return m;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::exp(xs[i] - m);
    return m + std::log(sum);
}

} // namespace

namespace detail {

// Dense per-position emission scores for prepared features.
std::vector<double> emission_scores(const CrfModel& model,
                                    const std::vector<std::vector<int>>& feats) {
    const int L = model.num_labels();
    std::vector<double> emit(feats.size() * L, 0.0);
    for (std::size_t t = 0; t < feats.size(); ++t)
        for (int f : feats[t])
            for (int y = 0; y < L; ++y)
                emit[t * L + y] += model.weights[model.emission_index(f, y)];
    return emit;
}

struct ForwardBackward {
    std::vector<double> alpha, beta; // n x L, log-space
    double log_z = 0.0;
};

ForwardBackward forward_backward(const CrfModel& model, const std::vector<double>& emit,
                                 std::size_t n) {
    const int L = model.num_labels();
    ForwardBackward fb;
    fb.alpha.assign(n * L, 0.0);
    fb.beta.assign(n * L, 0.0);
    std::vector<double> scratch(L);
    auto trans = [&](int i, int j) { return model.weights[model.transition_index(i, j)]; };

    for (int y = 0; y < L; ++y) fb.alpha[y] = trans(model.bos(), y) + emit[y];
    for (std::size_t t = 1; t < n; ++t)
        for (int y = 0; y < L; ++y) {
            for (int i = 0; i < L; ++i) scratch[i] = fb.alpha[(t - 1) * L + i] + trans(i, y);
            fb.alpha[t * L + y] = logsumexp(scratch.data(), L) + emit[t * L + y];
        }
    for (int y = 0; y < L; ++y) scratch[y] = fb.alpha[(n - 1) * L + y] + trans(y, model.eos());
    fb.log_z = logsumexp(scratch.data(), L);

    for (int y = 0; y < L; ++y) fb.beta[(n - 1) * L + y] = trans(y, model.eos());
    for (std::size_t t = n - 1; t-- > 0;)
        for (int i = 0; i < L; ++i) {
            for (int j = 0; j < L; ++j)
                scratch[j] = trans(i, j) + emit[(t + 1) * L + j] + fb.beta[(t + 1) * L + j];
            fb.beta[t * L + i] = logsumexp(scratch.data(), L);
        }
    return fb;
}

Posteriors posteriors_prepared(const CrfModel& model, const std::vector<std::vector<int>>& feats) {
    const std::size_t n = feats.size();
    const int L = model.num_labels();
    std::vector<double> emit = emission_scores(model, feats);
    ForwardBackward fb = forward_backward(model, emit, n);
    auto trans = [&](int i, int j) { return model.weights[model.transition_index(i, j)]; };

    Posteriors post;
    post.log_z = fb.log_z;
    post.unary.assign(n, std::vector<double>(L, 0.0));
    for (std::size_t t = 0; t < n; ++t)
        for (int y = 0; y < L; ++y)
            post.unary[t][y] = std::exp(fb.alpha[t * L + y] + fb.beta[t * L + y] - fb.log_z);
    if (n > 1) post.pairwise.assign(n - 1, std::vector<double>(L * L, 0.0));
    for (std::size_t t = 1; t < n; ++t)
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < L; ++j)
                post.pairwise[t - 1][i * L + j] =
                    std::exp(fb.alpha[(t - 1) * L + i] + trans(i, j) + emit[t * L + j] +
                             fb.beta[t * L + j] - fb.log_z);
    return post;
}

std::vector<int> viterbi_prepared(const CrfModel& model,
                                  const std::vector<std::vector<int>>& feats) {
    const std::size_t n = feats.size();
    const int L = model.num_labels();
    std::vector<double> emit = emission_scores(model, feats);
    auto trans = [&](int i, int j) { return model.weights[model.transition_index(i, j)]; };

    std::vector<double> delta(n * L);
    std::vector<int> back(n * L, -1);
    for (int y = 0; y < L; ++y) delta[y] = trans(model.bos(), y) + emit[y];
    for (std::size_t t = 1; t < n; ++t)
        for (int y = 0; y < L; ++y) {
            double best = -std::numeric_limits<double>::infinity();
            int best_i = 0;
            for (int i = 0; i < L; ++i) {
                double s = delta[(t - 1) * L + i] + trans(i, y);
                if (s > best) { // ties keep the lower label index
                    best = s;
                    best_i = i;
                }
            }
            delta[t * L + y] = best + emit[t * L + y];
            back[t * L + y] = best_i;
        }
    double best = -std::numeric_limits<double>::infinity();
    int best_y = 0;
    for (int y = 0; y < L; ++y) {
        double s = delta[(n - 1) * L + y] + trans(y, model.eos());
        if (s > best) {
            best = s;
            best_y = y;
        }
    }
    std::vector<int> path(n);
    path[n - 1] = best_y;
    for (std::size_t t = n - 1; t > 0; --t) path[t - 1] = back[t * L + path[t]];
    return path;
}

double gold_score(const CrfModel& model, const std::vector<std::vector<int>>& feats,
                  const std::vector<int>& gold) {
    auto trans = [&](int i, int j) { return model.weights[model.transition_index(i, j)]; };
    double score = trans(model.bos(), gold[0]);
    for (std::size_t t = 0; t < feats.size(); ++t) {
        for (int f : feats[t]) score += model.weights[model.emission_index(f, gold[t])];
        if (t > 0) score += trans(gold[t - 1], gold[t]);
    }
    score += trans(gold.back(), model.eos());
    return score;
}

} // namespace detail

namespace {

void require_nonempty(const LabeledSequence& seq) {
    if (seq.size() == 0) throw Error("EmptySequence", "sequence has no positions");
}

} // namespace

double log_partition(const CrfModel& model, const LabeledSequence& seq) {
    require_nonempty(seq);
    model.check();
    auto feats = sequence_features(model, seq);
    auto emit = detail::emission_scores(model, feats);
    return detail::forward_backward(model, emit, feats.size()).log_z;
}

Posteriors posteriors(const CrfModel& model, const LabeledSequence& seq) {
    require_nonempty(seq);
    model.check();
    return detail::posteriors_prepared(model, sequence_features(model, seq));
}

std::vector<std::vector<double>> marginals(const CrfModel& model, const LabeledSequence& seq) {
    return posteriors(model, seq).unary;
}

std::vector<int> viterbi_ids(const CrfModel& model, const LabeledSequence& seq) {
    require_nonempty(seq);
    model.check();
    return detail::viterbi_prepared(model, sequence_features(model, seq));
}

std::vector<std::string> viterbi(const CrfModel& model, const LabeledSequence& seq) {
    std::vector<int> ids = viterbi_ids(model, seq);
    std::vector<std::string> out(ids.size());
    for (std::size_t t = 0; t < ids.size(); ++t) out[t] = model.labels[ids[t]];
    return out;
}

std::vector<std::vector<std::string>> tag_all(const CrfModel& model,
                                              const std::vector<LabeledSequence>& seqs) {
    model.check();
    std::vector<std::vector<std::string>> out(seqs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(seqs.size()); ++i)
        out[i] = viterbi(model, seqs[i]);
    return out;
}

EvalReport evaluate(const CrfModel& model, const std::vector<LabeledSequence>& gold) {
    for (const LabeledSequence& seq : gold) {
        if (!seq.labeled() || seq.labels.size() != seq.size())
            throw Error("LabelMismatch", "gold sequence is unlabeled or misaligned");
        for (const std::string& l : seq.labels)
            if (model.label_id(l) < 0)
                throw Error("LabelMismatch", "gold label '" + l + "' outside the model's set");
    }
    std::vector<std::vector<std::string>> gold_labels(gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i) gold_labels[i] = gold[i].labels;
    return evaluate_sequences(gold_labels, tag_all(model, gold));
}

// --- Joint labels -----------------------------------------------------------------

namespace {
constexpr char kJoinSep = '|';
}

std::string join_label(const std::string& primary, const std::string& aux) {
    if (primary.find(kJoinSep) != std::string::npos || aux.find(kJoinSep) != std::string::npos)
        throw Error("Misaligned", "label contains the join separator '|'");
    return primary + kJoinSep + aux;
}

std::pair<std::string, std::string> split_label(const std::string& joint) {
    std::size_t sep = joint.find(kJoinSep);
    if (sep == std::string::npos)
        throw Error("Misaligned", "'" + joint + "' is not a joint label");
    return {joint.substr(0, sep), joint.substr(sep + 1)};
}

std::vector<std::string> join_label_sets(const std::vector<std::string>& primary,
                                         const std::vector<std::string>& aux) {
    std::vector<std::string> joint;
    joint.reserve(primary.size() * aux.size());
    for (const std::string& a : primary)
        for (const std::string& b : aux) joint.push_back(join_label(a, b));
    return joint;
}

std::vector<std::string> join_sequences(const std::vector<std::string>& primary,
                                        const std::vector<std::string>& aux) {
    if (primary.size() != aux.size())
        throw Error("Misaligned", "layers have different lengths");
    std::vector<std::string> joint(primary.size());
    for (std::size_t t = 0; t < primary.size(); ++t) joint[t] = join_label(primary[t], aux[t]);
    return joint;
}

std::vector<std::string> project(const std::vector<std::string>& joint, int task) {
    if (task != 0 && task != 1) throw Error("Misaligned", "task must be 0 (primary) or 1 (aux)");
    std::vector<std::string> out(joint.size());
    for (std::size_t t = 0; t < joint.size(); ++t) {
        auto [a, b] = split_label(joint[t]);
        out[t] = task == 0 ? a : b;
    }
    return out;
}

// --- Serialization ------------------------------------------------------------------

namespace {

constexpr const char* kMagic = "scansion-crf";
constexpr int kVersion = 1;

const char* transform_name(Transform t) {
    switch (t) {
        case Transform::Identity: return "identity";
        case Transform::Lowercase: return "lowercase";
        case Transform::IsCapitalized: return "is_capitalized";
        case Transform::Prefix: return "prefix";
        case Transform::Suffix: return "suffix";
    }
    return "identity";
}

Transform transform_from_name(const std::string& name) {
    if (name == "identity") return Transform::Identity;
    if (name == "lowercase") return Transform::Lowercase;
    if (name == "is_capitalized") return Transform::IsCapitalized;
    if (name == "prefix") return Transform::Prefix;
    if (name == "suffix") return Transform::Suffix;
    throw Error("InvalidModel", "unknown transform '" + name + "'");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Feature strings and labels may carry arbitrary corpus text; tabs and
// newlines are escaped so the flat file stays line- and cell-structured.
std::string escape_cell(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '\\') out += "\\\\";
        else if (c == '\t') out += "\\t";
        else if (c == '\n') out += "\\n";
        else out += c;
    }
    return out;
}

std::string unescape_cell(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 == s.size()) {
            out += s[i];
            continue;
        }
        char next = s[++i];
        out += next == 't' ? '\t' : next == 'n' ? '\n' : next;
    }
    return out;
}

std::vector<std::string> split_tabs_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return cells;
}

} // namespace

std::string save_model(const CrfModel& model) {
    model.check();
    std::string out;
    out += std::string(kMagic) + "\t" + std::to_string(kVersion) + "\n";
    out += "task\t" + model.task + "\n";
    out += "l2\t" + format_double(model.l2) + "\n";
    out += "seed\t" + std::to_string(model.seed) + "\n";
    out += "labels";
    for (const std::string& l : model.labels) out += "\t" + escape_cell(l);
    out += "\n";
    out += "templates\t" + std::to_string(model.templates.size()) + "\n";
    for (const FeatureTemplate& t : model.templates) {
        out += "T\t" + t.name + "\t" + t.selector + "\t";
        for (std::size_t i = 0; i < t.offsets.size(); ++i)
            out += (i ? "," : "") + std::to_string(t.offsets[i]);
        out += std::string("\t") + transform_name(t.transform) + "\t" +
               std::to_string(t.affix_len) + "\n";
    }
    out += "features\t" + std::to_string(model.feature_names.size()) + "\n";
    for (const std::string& f : model.feature_names) out += "F\t" + escape_cell(f) + "\n";
    // One "feature<TAB>weight" line per parameter. Emissions are keyed
    // "e:<label id>:<feature string>", transitions "t:<from>:<to>" with B/E
    // for the virtual boundary states.
    const int L = model.num_labels();
    for (std::size_t f = 0; f < model.feature_names.size(); ++f)
        for (int y = 0; y < L; ++y)
            out += "e:" + std::to_string(y) + ":" + escape_cell(model.feature_names[f]) + "\t" +
                   format_double(model.weights[model.emission_index(static_cast<int>(f), y)]) +
                   "\n";
    for (int i = 0; i <= L; ++i)
        for (int j = 0; j <= L; ++j) {
            std::string from = i == L ? "B" : std::to_string(i);
            std::string to = j == L ? "E" : std::to_string(j);
            out += "t:" + from + ":" + to + "\t" +
                   format_double(model.weights[model.transition_index(i, j)]) + "\n";
        }
    return out;
}

CrfModel load_model(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw Error("InvalidModel", std::string("truncated: ") + what);
        return split_tabs_line(line);
    };
    auto to_int = [](const std::string& cell) {
        try {
            return std::stoi(cell);
        } catch (const std::exception&) {
            throw Error("InvalidModel", "bad integer '" + cell + "'");
        }
    };
    auto to_double = [](const std::string& cell) {
        try {
            return std::stod(cell);
        } catch (const std::exception&) {
            throw Error("InvalidModel", "bad number '" + cell + "'");
        }
    };
    auto to_u64 = [](const std::string& cell) {
        try {
            return std::stoull(cell);
        } catch (const std::exception&) {
            throw Error("InvalidModel", "bad integer '" + cell + "'");
        }
    };
    CrfModel model;
    {
        auto cells = next_line("magic");
        if (cells.size() != 2 || cells[0] != kMagic)
            throw Error("InvalidModel", "not a model file");
        if (to_int(cells[1]) != kVersion)
            throw Error("InvalidModel", "unsupported version " + cells[1]);
    }
    {
        auto cells = next_line("task");
        if (cells.size() != 2 || cells[0] != "task") throw Error("InvalidModel", "missing task");
        model.task = cells[1];
    }
    {
        auto cells = next_line("l2");
        if (cells.size() != 2 || cells[0] != "l2") throw Error("InvalidModel", "missing l2");
        model.l2 = to_double(cells[1]);
    }
    {
        auto cells = next_line("seed");
        if (cells.size() != 2 || cells[0] != "seed") throw Error("InvalidModel", "missing seed");
        model.seed = to_u64(cells[1]);
    }
    {
        auto cells = next_line("labels");
        if (cells.empty() || cells[0] != "labels" || cells.size() < 2)
            throw Error("InvalidModel", "missing labels");
        for (auto it = cells.begin() + 1; it != cells.end(); ++it)
            model.labels.push_back(unescape_cell(*it));
    }
    std::size_t n_templates = 0;
    {
        auto cells = next_line("templates");
        if (cells.size() != 2 || cells[0] != "templates")
            throw Error("InvalidModel", "missing templates");
        n_templates = to_u64(cells[1]);
    }
    for (std::size_t i = 0; i < n_templates; ++i) {
        auto cells = next_line("template");
        if (cells.size() != 6 || cells[0] != "T") throw Error("InvalidModel", "bad template line");
        FeatureTemplate t;
        t.name = cells[1];
        t.selector = cells[2];
        std::istringstream offs(cells[3]);
        std::string off;
        while (std::getline(offs, off, ',')) t.offsets.push_back(to_int(off));
        t.transform = transform_from_name(cells[4]);
        t.affix_len = to_int(cells[5]);
        model.templates.push_back(std::move(t));
    }
    std::size_t n_features = 0;
    {
        auto cells = next_line("features");
        if (cells.size() != 2 || cells[0] != "features")
            throw Error("InvalidModel", "missing features");
        n_features = to_u64(cells[1]);
    }
    model.feature_names.reserve(n_features);
    for (std::size_t i = 0; i < n_features; ++i) {
        auto cells = next_line("feature");
        if (cells.size() != 2 || cells[0] != "F") throw Error("InvalidModel", "bad feature line");
        std::string feature = unescape_cell(cells[1]);
        model.feature_index.emplace(feature, static_cast<int>(i));
        model.feature_names.push_back(std::move(feature));
    }
    const int L = model.num_labels();
    model.weights.assign(model.weight_count(), 0.0);
    std::size_t expected = model.feature_names.size() * L +
                           static_cast<std::size_t>(L + 1) * (L + 1);
    for (std::size_t k = 0; k < expected; ++k) {
        auto cells = next_line("weight");
        if (cells.size() != 2) throw Error("InvalidModel", "bad weight line");
        const std::string& key = cells[0];
        double value = to_double(cells[1]);
        if (key.rfind("e:", 0) == 0) {
            std::size_t second = key.find(':', 2);
            if (second == std::string::npos) throw Error("InvalidModel", "bad emission key");
            int y = to_int(key.substr(2, second - 2));
            const std::string feature = unescape_cell(key.substr(second + 1));
            auto it = model.feature_index.find(feature);
            if (it == model.feature_index.end() || y < 0 || y >= L)
                throw Error("InvalidModel", "emission key references unknown feature or label");
            model.weights[model.emission_index(it->second, y)] = value;
        } else if (key.rfind("t:", 0) == 0) {
            std::size_t second = key.find(':', 2);
            if (second == std::string::npos) throw Error("InvalidModel", "bad transition key");
            std::string from = key.substr(2, second - 2), to = key.substr(second + 1);
            int i = from == "B" ? L : to_int(from);
            int j = to == "E" ? L : to_int(to);
            if (i < 0 || i > L || j < 0 || j > L)
                throw Error("InvalidModel", "transition key out of range");
            model.weights[model.transition_index(i, j)] = value;
        } else {
            throw Error("InvalidModel", "unknown weight key '" + key + "'");
        }
    }
    model.check();
    return model;
}

// --- Verse-line adapters ---------------------------------------------------------

LabeledSequence sequence_from_line(const VerseLine& line, bool include_pos) {
    LabeledSequence seq;
    const std::size_t n = line.size();
    seq.observations.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        Observation& obs = seq.observations[t];
        obs.set("form", line.syllables[t].text);
        obs.set("pos_in_word", std::to_string(line.syllables[t].pos_in_word));
        if (include_pos && line.pos) obs.set("pos", (*line.pos)[t]);
        obs.set("dist_start", std::to_string(t));
        obs.set("dist_end", std::to_string(n - 1 - t));
    }
    return seq;
}

void attach_labels(LabeledSequence& seq, const VerseLine& line, Layer task) {
    seq.labels = layer_strings(line, task);
}

void attach_joint_labels(LabeledSequence& seq, const VerseLine& line, Layer primary, Layer aux) {
    seq.labels = join_sequences(layer_strings(line, primary), layer_strings(line, aux));
}

} // namespace scansion
