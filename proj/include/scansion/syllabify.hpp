#ifndef SCANSION_SYLLABIFY_HPP
#define SCANSION_SYLLABIFY_HPP

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scansion/corpus.hpp"
#include "scansion/crf_train.hpp"

namespace scansion {

// --- Sonority baseline ------------------------------------------------------

// Classes in descending sonority: vowel 7, glide 6, liquid 5, nasal 4,
// fricative 3, affricate 2, plosive 1. Unclassified characters fall to rank 0.
struct SonorityHierarchy {
    std::map<std::string, int> rank;
    std::map<char32_t, std::string> char_class;

    static SonorityHierarchy english();
    static SonorityHierarchy german();
    static SonorityHierarchy for_language(std::string_view lang); // "en" / "de"

    int sonority(char32_t c) const;
    bool is_vowel(char32_t c) const;
};

// Boundaries at sonority minima between vowel nuclei; among equal minima the
// one nearest the following nucleus wins, which maximizes the onset. A word
// without any vowel comes back whole.
std::vector<std::string> sonority_syllabify(const std::string& word,
                                            const SonorityHierarchy& hierarchy);

// --- Trainable character-boundary tagger -----------------------------------

struct HyphenationModel {
    CrfModel crf; // labels {BOUNDARY-AFTER, CONTINUE} over character windows
    int window_radius = 3;
};

extern const char* const kBoundaryLabel;
extern const char* const kContinueLabel;

using HyphenGold = std::vector<std::pair<std::string, std::vector<std::string>>>;

// Gold list format: one word per line, syllables separated by "·".
HyphenGold parse_hyphen_gold(const std::string& text);

HyphenationModel train_hyphenator(const HyphenGold& gold, const TrainConfig& config);

std::vector<std::string> syllabify_word(const std::string& word, const HyphenationModel& model);

// --- Line segmentation and evaluation ----------------------------------------

std::vector<Syllable> syllabify_line(const std::vector<std::string>& tokens,
                                     const SonorityHierarchy& hierarchy);
std::vector<Syllable> syllabify_line(const std::vector<std::string>& tokens,
                                     const HyphenationModel& model);

struct SyllabifierReport {
    double word_accuracy = 0.0;
    double syllable_count_accuracy = 0.0;
    std::size_t n_words = 0;
};

SyllabifierReport evaluate_syllabifier(const std::vector<std::vector<std::string>>& gold,
                                       const std::vector<std::vector<std::string>>& predictions);

} // namespace scansion

#endif
