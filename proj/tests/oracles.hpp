// Independent brute-force oracles used by the unit and acceptance suites.
// These stay deliberately naive: exhaustive enumeration and direct recursion,
// no shared code with the implementations they check.

#ifndef SCANSION_TESTS_ORACLES_HPP
#define SCANSION_TESTS_ORACLES_HPP

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "scansion/crf.hpp"
#include "scansion/measures.hpp"

namespace oracles {

// --- Exhaustive CRF scoring -------------------------------------------------

inline double path_score(const scansion::CrfModel& model,
                         const std::vector<std::vector<int>>& feats,
                         const std::vector<int>& path) {
    const int L = model.num_labels();
    double score = model.weights[model.transition_index(L, path[0])];
    for (std::size_t t = 0; t < path.size(); ++t) {
        for (int f : feats[t]) score += model.weights[model.emission_index(f, path[t])];
        if (t > 0) score += model.weights[model.transition_index(path[t - 1], path[t])];
    }
    score += model.weights[model.transition_index(path.back(), L)];
    return score;
}

template <typename Visit>
inline void enumerate_paths(int length, int n_labels, Visit&& visit) {
    std::vector<int> path(length, 0);
    while (true) {
        visit(path);
        int t = length - 1;
        while (t >= 0 && path[t] == n_labels - 1) path[t--] = 0;
        if (t < 0) break;
        ++path[t];
    }
}

inline double brute_log_partition(const scansion::CrfModel& model,
                                  const std::vector<std::vector<int>>& feats) {
    double max_score = -std::numeric_limits<double>::infinity();
    std::vector<double> scores;
    enumerate_paths(static_cast<int>(feats.size()), model.num_labels(),
                    [&](const std::vector<int>& path) {
                        scores.push_back(path_score(model, feats, path));
                        max_score = std::max(max_score, scores.back());
                    });
    double sum = 0.0;
    for (double s : scores) sum += std::exp(s - max_score);
    return max_score + std::log(sum);
}

inline std::vector<int> brute_best_path(const scansion::CrfModel& model,
                                        const std::vector<std::vector<int>>& feats) {
    std::vector<int> best;
    double best_score = -std::numeric_limits<double>::infinity();
    enumerate_paths(static_cast<int>(feats.size()), model.num_labels(),
                    [&](const std::vector<int>& path) {
                        double s = path_score(model, feats, path);
                        if (s > best_score) {
                            best_score = s;
                            best = path;
                        }
                    });
    return best;
}

inline std::vector<std::vector<double>> brute_marginals(const scansion::CrfModel& model,
                                                        const std::vector<std::vector<int>>& feats) {
    const int L = model.num_labels();
    const int n = static_cast<int>(feats.size());
    double log_z = brute_log_partition(model, feats);
    std::vector<std::vector<double>> marg(n, std::vector<double>(L, 0.0));
    enumerate_paths(n, L, [&](const std::vector<int>& path) {
        double p = std::exp(path_score(model, feats, path) - log_z);
        for (int t = 0; t < n; ++t) marg[t][path[t]] += p;
    });
    return marg;
}

// pair[t-1][i*L+j] = P(y_{t-1} = i, y_t = j), matching Posteriors::pairwise.
inline std::vector<std::vector<double>> brute_pairwise(const scansion::CrfModel& model,
                                                       const std::vector<std::vector<int>>& feats) {
    const int L = model.num_labels();
    const int n = static_cast<int>(feats.size());
    double log_z = brute_log_partition(model, feats);
    std::vector<std::vector<double>> pair(n > 1 ? n - 1 : 0, std::vector<double>(L * L, 0.0));
    enumerate_paths(n, L, [&](const std::vector<int>& path) {
        double p = std::exp(path_score(model, feats, path) - log_z);
        for (int t = 1; t < n; ++t) pair[t - 1][path[t - 1] * L + path[t]] += p;
    });
    return pair;
}

// --- Random CRF instances -----------------------------------------------------

struct RandomInstance {
    scansion::CrfModel model;
    scansion::LabeledSequence seq;
    std::vector<std::vector<int>> feats;
};

inline RandomInstance random_instance(std::mt19937_64& rng, int max_len = 7, int max_labels = 4) {
    std::uniform_int_distribution<int> len_dist(1, max_len);
    std::uniform_int_distribution<int> lab_dist(2, max_labels);
    std::uniform_int_distribution<int> vocab(0, 5);
    std::normal_distribution<double> weight(0.0, 2.0);

    RandomInstance inst;
    const int L = lab_dist(rng);
    for (int y = 0; y < L; ++y) inst.model.labels.push_back(std::string(1, char('a' + y)));
    inst.model.templates.push_back([] {
        scansion::FeatureTemplate t;
        t.name = "form";
        t.selector = "form";
        t.offsets = {-1, 0, 1};
        return t;
    }());
    inst.model.l2 = 0.0;

    const int n = len_dist(rng);
    for (int t = 0; t < n; ++t) {
        scansion::Observation obs;
        obs.set("form", "w" + std::to_string(vocab(rng)));
        inst.seq.observations.push_back(std::move(obs));
        inst.seq.labels.push_back(inst.model.labels[std::uniform_int_distribution<int>(
            0, L - 1)(rng)]);
    }
    for (int t = 0; t < n; ++t)
        for (const std::string& f :
             scansion::extract_features(inst.seq, t, inst.model.templates))
            if (inst.model.feature_index.emplace(f, (int)inst.model.feature_names.size()).second)
                inst.model.feature_names.push_back(f);
    inst.model.weights.resize(inst.model.weight_count());
    for (double& w : inst.model.weights) w = weight(rng);
    inst.feats = scansion::sequence_features(inst.model, inst.seq);
    return inst;
}

// --- Pattern language expansion ----------------------------------------------
//
// Quantifiers are bounded, so every pattern generates a finite language; the
// oracle simply enumerates it. "Matches" means set membership.

inline std::set<std::string> expand_terms(const std::vector<scansion::PatternTerm>& terms);

inline std::set<std::string> expand_once(const scansion::PatternTerm& term) {
    if (term.is_group) return expand_terms(term.group);
    return {std::string(1, term.literal)};
}

inline std::set<std::string> expand_terms(const std::vector<scansion::PatternTerm>& terms) {
    std::set<std::string> language = {""};
    for (const scansion::PatternTerm& term : terms) {
        int lo = term.quant == scansion::Quant::One        ? 1
                 : term.quant == scansion::Quant::Optional ? 0
                                                           : term.min;
        int hi = term.quant == scansion::Quant::One        ? 1
                 : term.quant == scansion::Quant::Optional ? 1
                                                           : term.max;
        std::set<std::string> once = expand_once(term);
        // reps[k] = all strings from exactly k copies.
        std::set<std::string> current = {""};
        std::set<std::string> chosen;
        for (int k = 0; k <= hi; ++k) {
            if (k >= lo) chosen.insert(current.begin(), current.end());
            if (k == hi) break;
            std::set<std::string> next;
            for (const std::string& prefix : current)
                for (const std::string& unit : once) next.insert(prefix + unit);
            current = std::move(next);
        }
        std::set<std::string> combined;
        for (const std::string& prefix : language)
            for (const std::string& tail : chosen) {
                combined.insert(prefix + tail);
                if (combined.size() > 2000000)
                    throw std::runtime_error("oracle expansion too large");
            }
        language = std::move(combined);
    }
    return language;
}

inline std::set<std::string> expand_language(const scansion::PatternAst& ast) {
    return expand_terms(ast.terms);
}

inline bool ast_matches(const scansion::PatternAst& ast, std::string_view s) {
    std::set<std::string> language = expand_language(ast);
    if (!ast.one_insertion) return language.count(std::string(s)) != 0;
    if (s.size() < 3) return false;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] != '-') continue;
        std::string without(s.substr(0, i));
        without += s.substr(i + 1);
        if (language.count(without)) return true;
    }
    return false;
}

} // namespace oracles

#endif
