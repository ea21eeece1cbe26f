#ifndef SCANSION_MEASURES_HPP
#define SCANSION_MEASURES_HPP

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scansion/corpus.hpp"
#include "scansion/error.hpp"

namespace scansion {

// --- Pattern DSL ----------------------------------------------------------
//
// pattern := term* ; term := atom quant? ; atom := '+' | '-' | '(' pattern ')'
// quant := '?' | '{' n '}' | '{' n ',' m '}'      (n >= 1, m >= n, depth <= 4)
// Matching is full-string anchored over the {+,-} alphabet.

enum class Quant { One, Optional, Exactly, Range };

struct PatternTerm {
    bool is_group = false;
    char literal = '+';             // when !is_group
    std::vector<PatternTerm> group; // when is_group
    Quant quant = Quant::One;
    int min = 1, max = 1; // for Exactly (min==max) and Range
};

enum class Modifier { Invert, Relaxed, Chol };

std::string modifier_suffix(Modifier m); // "invert" / "relaxed" / "chol"

struct PatternAst {
    std::vector<PatternTerm> terms;
    // Relaxed admits exactly one extra '-' at a single interior position; the
    // grammar has no alternation, so the allowance lives beside the terms.
    bool one_insertion = false;
    std::optional<Modifier> applied;
};

class PatternParseError : public Error {
public:
    PatternParseError(std::size_t offset, std::vector<std::string> expected,
                      const std::string& detail);
    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

PatternAst compile_pattern(const std::string& dsl);
std::string pattern_to_dsl(const PatternAst& ast); // canonical form

// Deterministic full-string matcher (subset-construction DFA over {+,-}).
class StressMatcher {
public:
    StressMatcher() = default;
    static StressMatcher compile(const PatternAst& ast);
    bool matches(std::string_view stress) const; // honors one_insertion

private:
    bool run(std::string_view stress, std::size_t skip) const;
    std::vector<std::array<int, 2>> next_;
    std::vector<char> accept_;
    bool one_insertion_ = false;
};

PatternAst apply_modifier(const PatternAst& ast, Modifier m); // UnsupportedModifier

// --- Measure catalog -------------------------------------------------------

struct MeasurePattern {
    std::string name;
    int priority = 0; // lower = tried first
    PatternAst ast;
    std::set<Modifier> allow_modifiers;
    StressMatcher matcher;
    // Pre-compiled matchers for each allowed modifier, in Modifier order.
    std::vector<std::pair<Modifier, StressMatcher>> modified;

    void compile();
};

struct MeasureCatalog {
    std::vector<MeasurePattern> patterns; // sorted by priority
    static constexpr const char* fallback = "other";
};

MeasureCatalog builtin_catalog();

// Catalog file: "# comment" lines; entries "name<TAB>priority<TAB>dsl" with an
// optional fourth column listing allowed modifiers (comma-separated, or "-").
MeasureCatalog load_catalog(const std::string& text);

// First strict match by priority wins; otherwise modifiers are consulted
// (invert, then chol, then relaxed — choliamb strings are also one insertion
// away from a strict iamb, so chol has to come first); no match -> "other".
std::pair<std::string, std::string> classify_line(std::string_view met,
                                                  const MeasureCatalog& catalog);

std::string smsr_of(const std::string& fmsr);

// Descending (count, then name) table of short measures for a corpus with the
// fmsr layer present.
std::vector<std::pair<std::string, int>> measure_frequencies(const std::vector<VerseLine>& lines);

} // namespace scansion

#endif
