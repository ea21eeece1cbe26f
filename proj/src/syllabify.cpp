#include "scansion/syllabify.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <unicode/uchar.h>

#include "scansion/error.hpp"
#include "scansion/textnorm.hpp"

namespace scansion {

const char* const kBoundaryLabel = "BOUNDARY-AFTER";
const char* const kContinueLabel = "CONTINUE";

// --- Sonority hierarchy --------------------------------------------------------

namespace {

void classify(std::map<char32_t, std::string>& table, std::u32string_view letters,
              const char* cls) {
    for (char32_t c : letters) table[c] = cls;
}

SonorityHierarchy base_hierarchy() {
    SonorityHierarchy h;
    h.rank = {{"vowel", 7},     {"glide", 6},     {"liquid", 5}, {"nasal", 4},
              {"fricative", 3}, {"affricate", 2}, {"plosive", 1}};
    classify(h.char_class, U"aeiouyäöüàáâãåæ"
                           U"èéêëìíîïòó"
                           U"ôõøùúûœýÿ",
             "vowel");
    classify(h.char_class, U"jwh", "glide");
    classify(h.char_class, U"lr", "liquid");
    classify(h.char_class, U"mnñ", "nasal");
    classify(h.char_class, U"fvszßçx", "fricative");
    classify(h.char_class, U"bcdgkpqt", "plosive");
    return h;
}

} // namespace

SonorityHierarchy SonorityHierarchy::english() { return base_hierarchy(); }

SonorityHierarchy SonorityHierarchy::german() {
    SonorityHierarchy h = base_hierarchy();
    h.char_class[U'z'] = "affricate"; // z is /ts/
    return h;
}

SonorityHierarchy SonorityHierarchy::for_language(std::string_view lang) {
    if (lang == "de") return german();
    if (lang == "en") return english();
    throw Error("UnknownLanguage", "no sonority table for '" + std::string(lang) + "'");
}

int SonorityHierarchy::sonority(char32_t c) const {
    char32_t lower = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
    auto cls = char_class.find(lower);
    if (cls == char_class.end()) return 0;
    auto r = rank.find(cls->second);
    return r == rank.end() ? 0 : r->second;
}

bool SonorityHierarchy::is_vowel(char32_t c) const {
    char32_t lower = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
    auto cls = char_class.find(lower);
    return cls != char_class.end() && cls->second == "vowel";
}

std::vector<std::string> sonority_syllabify(const std::string& word,
                                            const SonorityHierarchy& hierarchy) {
    if (word.empty()) throw Error("EmptyWord", "cannot syllabify an empty word");
    std::vector<char32_t> cps = utf8_decode(word);
    const std::size_t n = cps.size();

    // Nuclei are maximal vowel runs.
    std::vector<std::pair<std::size_t, std::size_t>> nuclei; // [start, end)
    for (std::size_t i = 0; i < n;) {
        if (hierarchy.is_vowel(cps[i])) {
            std::size_t j = i;
            while (j < n && hierarchy.is_vowel(cps[j])) ++j;
            nuclei.emplace_back(i, j);
            i = j;
        } else {
            ++i;
        }
    }
    if (nuclei.size() <= 1) return {word};

    std::vector<std::size_t> cuts;
    for (std::size_t k = 0; k + 1 < nuclei.size(); ++k) {
        std::size_t lo = nuclei[k].second;    // first consonant after nucleus k
        std::size_t hi = nuclei[k + 1].first; // start of nucleus k+1
        // Split before the lowest-sonority consonant; ties go to the later
        // position, handing the onset to the following syllable.
        std::size_t best = lo;
        int best_rank = hierarchy.sonority(cps[lo]);
        for (std::size_t p = lo; p < hi; ++p) {
            int r = hierarchy.sonority(cps[p]);
            if (r <= best_rank) {
                best_rank = r;
                best = p;
            }
        }
        cuts.push_back(best);
    }

    std::vector<std::string> syllables;
    std::size_t start = 0;
    for (std::size_t cut : cuts) {
        syllables.push_back(utf8_encode({cps.begin() + start, cps.begin() + cut}));
        start = cut;
    }
    syllables.push_back(utf8_encode({cps.begin() + start, cps.end()}));
    return syllables;
}

// --- Trainable hyphenator -------------------------------------------------------

namespace {

// One observation per character: the character itself and the bigram it opens.
LabeledSequence word_to_sequence(const std::vector<char32_t>& cps) {
    LabeledSequence seq;
    seq.observations.resize(cps.size());
    for (std::size_t i = 0; i < cps.size(); ++i) {
        seq.observations[i].set("form", utf8_encode({cps[i]}));
        std::string bi = utf8_encode({cps[i]});
        bi += i + 1 < cps.size() ? utf8_encode({cps[i + 1]}) : std::string("<E>");
        seq.observations[i].set("bi", bi);
    }
    return seq;
}

} // namespace

HyphenGold parse_hyphen_gold(const std::string& text) {
    HyphenGold gold;
    std::istringstream in(text);
    std::string line;
    const std::string sep = "·";
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> syllables;
        std::size_t start = 0;
        while (true) {
            std::size_t dot = line.find(sep, start);
            if (dot == std::string::npos) {
                syllables.push_back(line.substr(start));
                break;
            }
            syllables.push_back(line.substr(start, dot - start));
            start = dot + sep.size();
        }
        std::string word;
        for (const std::string& s : syllables) word += s;
        gold.emplace_back(std::move(word), std::move(syllables));
    }
    return gold;
}

HyphenationModel train_hyphenator(const HyphenGold& gold, const TrainConfig& config) {
    if (gold.empty()) throw Error("EmptyGold", "no gold hyphenations");
    std::vector<LabeledSequence> data;
    data.reserve(gold.size());
    for (const auto& [word, syllables] : gold) {
        std::string joined;
        for (const std::string& s : syllables) joined += s;
        if (joined != word || word.empty())
            throw Error("InconsistentGold",
                        "syllables do not concatenate to '" + word + "'");
        std::vector<char32_t> cps = utf8_decode(word);
        LabeledSequence seq = word_to_sequence(cps);
        seq.labels.assign(cps.size(), kContinueLabel);
        std::size_t at = 0;
        for (std::size_t s = 0; s + 1 < syllables.size(); ++s) {
            at += utf8_length(syllables[s]);
            if (at == 0 || at > cps.size())
                throw Error("InconsistentGold", "empty syllable in '" + word + "'");
            seq.labels[at - 1] = kBoundaryLabel;
        }
        data.push_back(std::move(seq));
    }
    HyphenationModel model;
    TrainResult result = train(data, hyphen_preset(model.window_radius),
                               {kBoundaryLabel, kContinueLabel}, config);
    model.crf = std::move(result.model);
    model.crf.task = "hyphen";
    return model;
}

std::vector<std::string> syllabify_word(const std::string& word, const HyphenationModel& model) {
    if (word.empty()) throw Error("EmptyWord", "cannot syllabify an empty word");
    std::vector<char32_t> cps = utf8_decode(word);
    if (cps.size() == 1) return {word};
    std::vector<std::string> labels = viterbi(model.crf, word_to_sequence(cps));
    std::vector<std::string> syllables;
    std::size_t start = 0;
    for (std::size_t i = 0; i + 1 < cps.size(); ++i)
        if (labels[i] == kBoundaryLabel) {
            syllables.push_back(utf8_encode({cps.begin() + start, cps.begin() + i + 1}));
            start = i + 1;
        }
    syllables.push_back(utf8_encode({cps.begin() + start, cps.end()}));
    return syllables;
}

// --- Lines ------------------------------------------------------------------------

namespace {

std::vector<Syllable> build_line(const std::vector<std::string>& tokens,
                                 const std::function<std::vector<std::string>(const std::string&)>&
                                     split) {
    std::vector<Syllable> out;
    for (std::size_t ti = 0; ti < tokens.size(); ++ti) {
        std::vector<std::string> parts = split(tokens[ti]);
        for (std::size_t k = 0; k < parts.size(); ++k) {
            Syllable s;
            s.text = parts[k];
            s.pos_in_word = parts.size() == 1 ? 0 : static_cast<int>(k) + 1;
            s.token_index = static_cast<int>(ti);
            out.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace

std::vector<Syllable> syllabify_line(const std::vector<std::string>& tokens,
                                     const SonorityHierarchy& hierarchy) {
    return build_line(tokens,
                      [&](const std::string& w) { return sonority_syllabify(w, hierarchy); });
}

std::vector<Syllable> syllabify_line(const std::vector<std::string>& tokens,
                                     const HyphenationModel& model) {
    return build_line(tokens, [&](const std::string& w) { return syllabify_word(w, model); });
}

SyllabifierReport evaluate_syllabifier(const std::vector<std::vector<std::string>>& gold,
                                       const std::vector<std::vector<std::string>>& predictions) {
    if (gold.size() != predictions.size())
        throw Error("LengthMismatch", "gold and predictions have different word counts");
    SyllabifierReport report;
    report.n_words = gold.size();
    if (gold.empty()) {
        report.word_accuracy = report.syllable_count_accuracy = 1.0;
        return report;
    }
    long long exact = 0, count_match = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        std::string gw, pw;
        for (const auto& s : gold[i]) gw += s;
        for (const auto& s : predictions[i]) pw += s;
        if (gw != pw)
            throw Error("LengthMismatch", "word " + std::to_string(i) + " differs: '" + gw +
                                              "' vs '" + pw + "'");
        exact += gold[i] == predictions[i];
        count_match += gold[i].size() == predictions[i].size();
    }
    report.word_accuracy = static_cast<double>(exact) / static_cast<double>(gold.size());
    report.syllable_count_accuracy =
        static_cast<double>(count_match) / static_cast<double>(gold.size());
    return report;
}

} // namespace scansion
