#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "scansion/measures.hpp"
#include "oracles.hpp"

using namespace scansion;

namespace {

const MeasureCatalog& catalog() {
    static MeasureCatalog c = builtin_catalog();
    return c;
}

std::string fmsr(const std::string& met) { return classify_line(met, catalog()).first; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("compile_pattern basics") {
    PatternAst penta = compile_pattern("(-+){5}");
    StressMatcher m = StressMatcher::compile(penta);
    CHECK(m.matches("-+-+-+-+-+"));
    CHECK_FALSE(m.matches("-+-+-+-+"));
    CHECK_FALSE(m.matches("-+-+-+-+-+-"));

    PatternAst hexa = compile_pattern("+--?+--?+--?+--?+--+-");
    StressMatcher hm = StressMatcher::compile(hexa);
    CHECK(hm.matches("+--+--+--+--+--+-"));
    CHECK(hm.matches("+-+-+-+-+--+-"));
    CHECK_FALSE(hm.matches("+--+--+--+--+--+"));
}

TEST_CASE("compile_pattern errors carry byte offsets") {
    try {
        compile_pattern("(-+");
        FAIL("expected ParseError");
    } catch (const PatternParseError& e) {
        CHECK(e.kind() == "ParseError");
        CHECK(e.offset() == 3);
        CHECK(!e.expected().empty());
    }
    CHECK_THROWS_AS(compile_pattern("a"), PatternParseError);
    CHECK_THROWS_AS(compile_pattern("+{0}"), PatternParseError);
    CHECK_THROWS_AS(compile_pattern("+{3,2}"), PatternParseError);
    CHECK_THROWS_AS(compile_pattern("+??"), PatternParseError);
    CHECK_THROWS_AS(compile_pattern("(((((+)))))"), PatternParseError); // depth > 4
    CHECK_THROWS_AS(compile_pattern("+{"), PatternParseError);
}

TEST_CASE("pattern canonicalization") {
    CHECK(pattern_to_dsl(compile_pattern("(-+){5}")) == "(-+){5}");
    CHECK(pattern_to_dsl(compile_pattern("(+){2}")) == "+{2}");
    CHECK(pattern_to_dsl(compile_pattern("(-+){1}")) == "-+");
    CHECK(pattern_to_dsl(compile_pattern("+{2,2}")) == "+{2}");
    CHECK(pattern_to_dsl(compile_pattern("(++)+")) == "+++");
    CHECK(pattern_to_dsl(compile_pattern("")) == "");
}

TEST_CASE("classical measure examples classify exactly") {
    CHECK(fmsr("-+-+-+-+-+") == "iambic.pentameter");
    CHECK(fmsr("+-+-+-+") == "trochaic.tetrameter");
    CHECK(fmsr("+--+-+-+-+") == "iambic.pentameter.invert");
    CHECK(fmsr("-+-+--+-+") == "iambic.tetrameter.relaxed");
    CHECK(fmsr("-+-+-+--+") == "iambic.tetrameter.chol");
    CHECK(fmsr("+-+-+-") == "trochaic.trimeter");
    CHECK(fmsr("-+-+-+-+") == "iambic.tetrameter");
    CHECK(fmsr("-+-+-+-+-+-+") == "alexandrine");
    CHECK(fmsr("-+-+-+-+-+-+-") == "alexandrine");
    CHECK(fmsr("+--+--+--+--+--+-") == "hexameter");
    CHECK(fmsr("+-+--++--+-+") == "asklepiade");
    CHECK(fmsr("+--+-+-+") == "iambic.tetrameter.invert");
    CHECK(fmsr("++-++-") == "other");
}

TEST_CASE("classify_line errors") {
    CHECK_THROWS_AS(classify_line("", catalog()), Error);
    try {
        classify_line("+x-", catalog());
        FAIL("expected BadSymbol");
    } catch (const Error& e) {
        CHECK(e.kind() == "BadSymbol");
    }
}

TEST_CASE("builtin catalog shape") {
    const MeasureCatalog& c = catalog();
    CHECK(c.patterns.size() >= 35);
    // sorted by unique priorities
    for (std::size_t i = 1; i < c.patterns.size(); ++i)
        CHECK(c.patterns[i - 1].priority < c.patterns[i].priority);
    // alexandrine precedes iambic.hexameter
    std::size_t alex = 0, hexa6 = 0;
    for (std::size_t i = 0; i < c.patterns.size(); ++i) {
        if (c.patterns[i].name == "alexandrine") alex = i;
        if (c.patterns[i].name == "iambic.hexameter") hexa6 = i;
    }
    CHECK(alex < hexa6);
}

TEST_CASE("apply_modifier") {
    const PatternAst tetra = compile_pattern("(-+){4}-?");

    PatternAst inverted = apply_modifier(tetra, Modifier::Invert);
    CHECK(StressMatcher::compile(inverted).matches("+--+-+-+"));
    CHECK(StressMatcher::compile(inverted).matches("+--+-+-+-")); // cadence kept
    CHECK_FALSE(StressMatcher::compile(inverted).matches("-+-+-+-+"));

    PatternAst relaxed = apply_modifier(tetra, Modifier::Relaxed);
    CHECK(StressMatcher::compile(relaxed).matches("-+-+--+-+"));
    CHECK_FALSE(StressMatcher::compile(relaxed).matches("-+-+-+-+")); // needs the insertion

    PatternAst chol = apply_modifier(tetra, Modifier::Chol);
    CHECK(StressMatcher::compile(chol).matches("-+-+-+--+"));
    CHECK_FALSE(StressMatcher::compile(chol).matches("-+-+-+-+"));

    SUBCASE("second application is rejected") {
        CHECK_THROWS_AS(apply_modifier(inverted, Modifier::Invert), Error);
        CHECK_THROWS_AS(apply_modifier(relaxed, Modifier::Chol), Error);
    }
    SUBCASE("chol needs a final iambic foot") {
        try {
            apply_modifier(compile_pattern("(+-){4}+-?"), Modifier::Chol);
            FAIL("expected UnsupportedModifier");
        } catch (const Error& e) {
            CHECK(e.kind() == "UnsupportedModifier");
        }
    }
    SUBCASE("inversion needs two distinct leading literals") {
        CHECK_THROWS_AS(apply_modifier(compile_pattern("-?(--+){3}"), Modifier::Invert), Error);
    }
}

TEST_CASE("smsr_of") {
    CHECK(smsr_of("iambic.pentameter.invert") == "iambic");
    CHECK(smsr_of("alexandrine") == "alexandrine");
    CHECK(smsr_of("other") == "other");
    CHECK(smsr_of("hexameter") == "hexameter");
    CHECK(smsr_of("daktylic.tetrameter") == "daktylic");
}

TEST_CASE("measure_frequencies") {
    auto mk = [](const std::string& fmsr) {
        VerseLine l;
        l.syllables = {{"x", 0, 0}};
        l.fmsr = fmsr;
        return l;
    };
    std::vector<VerseLine> corpus = {mk("iambic.pentameter"), mk("iambic.tetrameter"),
                                     mk("iambic.trimeter.relaxed"), mk("trochaic.tetrameter")};
    auto table = measure_frequencies(corpus);
    REQUIRE(table.size() == 2);
    CHECK(table[0] == std::pair<std::string, int>{"iambic", 3});
    CHECK(table[1] == std::pair<std::string, int>{"trochaic", 1});
    CHECK(measure_frequencies({}).empty());
    VerseLine missing;
    missing.syllables = {{"x", 0, 0}};
    CHECK_THROWS_AS(measure_frequencies({missing}), Error);
}

TEST_CASE("catalog file round trip and loading") {
    MeasureCatalog from_file = load_catalog(read_file(std::string(SCANSION_CATALOG_FILE)));
    CHECK(from_file.patterns.size() == catalog().patterns.size());
    for (const char* met : {"-+-+-+-+-+", "+--+-+-+-+", "-+-+-+--+", "+-+--++--+-+", "++-++-"})
        CHECK(classify_line(met, from_file) == classify_line(met, catalog()));

    CHECK_THROWS_AS(load_catalog("name only one column\n"), Error);
    CHECK_THROWS_AS(load_catalog("a\t1\t-+\nb\t1\t+-\n"), Error); // duplicate priority
    CHECK_THROWS_AS(load_catalog("a\t1\t-+\na\t2\t+-\n"), Error); // duplicate name
    MeasureCatalog inferred = load_catalog("my.iambic\t5\t(-+){2}\n");
    REQUIRE(inferred.patterns.size() == 1);
    CHECK(inferred.patterns[0].allow_modifiers.count(Modifier::Relaxed));
    CHECK(inferred.patterns[0].allow_modifiers.count(Modifier::Invert));
    CHECK(inferred.patterns[0].allow_modifiers.count(Modifier::Chol));
}

TEST_CASE("matcher agrees with expansion oracle on short strings") {
    // Every builtin pattern against every stress string up to length 10 here;
    // the acceptance suite pushes this to length 12.
    for (const MeasurePattern& p : catalog().patterns) {
        auto language = oracles::expand_language(p.ast);
        for (int len = 0; len <= 10; ++len) {
            for (unsigned bits = 0; bits < (1u << len); ++bits) {
                std::string s(len, '-');
                for (int b = 0; b < len; ++b)
                    if (bits & (1u << b)) s[b] = '+';
                CHECK(p.matcher.matches(s) == (language.count(s) != 0));
            }
        }
    }
}

namespace {

// Random patterns exercising nesting and every quantifier form.
std::string random_dsl(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> n_terms(depth == 0 ? 1 : 0, 3);
    std::string out;
    int terms = n_terms(rng);
    for (int t = 0; t < terms; ++t) {
        int kind = std::uniform_int_distribution<int>(0, depth < 3 ? 3 : 2)(rng);
        if (kind <= 1) {
            out += kind == 0 ? '+' : '-';
        } else if (kind == 2) {
            out += std::uniform_int_distribution<int>(0, 1)(rng) ? '+' : '-';
        } else {
            out += "(" + random_dsl(rng, depth + 1) + ")";
        }
        switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
            case 0: out += '?'; break;
            case 1: out += "{" + std::to_string(std::uniform_int_distribution<int>(1, 3)(rng)) + "}"; break;
            case 2: {
                int lo = std::uniform_int_distribution<int>(1, 2)(rng);
                int hi = lo + std::uniform_int_distribution<int>(0, 2)(rng);
                out += "{" + std::to_string(lo) + "," + std::to_string(hi) + "}";
                break;
            }
            default: break;
        }
    }
    return out;
}

} // namespace

TEST_CASE("random patterns agree with the expansion oracle") {
    std::mt19937 rng(4096);
    for (int trial = 0; trial < 120; ++trial) {
        std::string dsl = random_dsl(rng, 0);
        PatternAst ast;
        try {
            ast = compile_pattern(dsl);
        } catch (const Error&) {
            continue; // e.g. an empty group at depth limits
        }
        std::set<std::string> language;
        try {
            language = oracles::expand_language(ast);
        } catch (const std::exception&) {
            continue; // expansion too large for the oracle
        }
        StressMatcher matcher = StressMatcher::compile(ast);
        for (int len = 0; len <= 8; ++len)
            for (unsigned bits = 0; bits < (1u << len); ++bits) {
                std::string s(len, '-');
                for (int b = 0; b < len; ++b)
                    if (bits & (1u << b)) s[b] = '+';
                bool got = matcher.matches(s);
                bool want = language.count(s) != 0;
                if (got != want)
                    FAIL("pattern '" << dsl << "' disagrees on '" << s << "': matcher "
                                     << got << " oracle " << want);
            }
        // the canonical form describes the same language
        StressMatcher reparsed = StressMatcher::compile(compile_pattern(pattern_to_dsl(ast)));
        for (const std::string& s : language) CHECK(reparsed.matches(s));
    }
}

TEST_CASE("strict family patterns stress-count consistency") {
    // A pattern named <family>.<length> with k beats matches only strings
    // with exactly k '+' symbols.
    auto beats = [](const std::string& name) -> int {
        static const std::pair<const char*, int> lengths[] = {
            {"single", 1},     {"dimeter", 2},   {"trimeter", 3},  {"tetrameter", 4},
            {"pentameter", 5}, {"hexameter", 6}, {"septameter", 7}};
        for (const auto& [suffix, k] : lengths)
            if (name.find(std::string(".") + suffix) != std::string::npos) return k;
        return -1;
    };
    for (const MeasurePattern& p : catalog().patterns) {
        int k = beats(p.name);
        if (k < 0) continue;
        for (const std::string& s : oracles::expand_language(p.ast)) {
            int plus = 0;
            for (char c : s) plus += c == '+';
            CHECK(plus == k);
        }
    }
}

TEST_CASE("sample corpus measures are derivable from met") {
    std::vector<VerseLine> lines = parse_tabular(read_file(SCANSION_FIXTURES "/sample_annotated.tsv"));
    CHECK(lines.size() >= 14);
    for (const VerseLine& line : lines) {
        auto [f, s] = classify_line(line.met_string(), catalog());
        CHECK(f == *line.fmsr);
        CHECK(s == *line.smsr);
    }
}
