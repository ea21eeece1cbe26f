#include "scansion/measures.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace scansion {

std::string modifier_suffix(Modifier m) {
    switch (m) {
        case Modifier::Invert: return "invert";
        case Modifier::Relaxed: return "relaxed";
        case Modifier::Chol: return "chol";
    }
    return "";
}

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

} // namespace

PatternParseError::PatternParseError(std::size_t offset, std::vector<std::string> expected,
                                     const std::string& detail)
    : Error("ParseError",
            "at offset " + std::to_string(offset) + ": " + detail +
                (expected.empty() ? "" : " (expected " + join(expected, ", ") + ")")),
      offset_(offset), expected_(std::move(expected)) {}

// --- Parser -----------------------------------------------------------------

namespace {

constexpr int kMaxDepth = 4;

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    std::vector<PatternTerm> parse_pattern(int depth) {
        std::vector<PatternTerm> terms;
        while (pos_ < text_.size() && text_[pos_] != ')') terms.push_back(parse_term(depth));
        return terms;
    }

    std::size_t pos() const { return pos_; }

    void expect_end() const {
        if (pos_ < text_.size())
            throw PatternParseError(pos_, {"'+'", "'-'", "'('", "end of pattern"},
                                    std::string("unexpected '") + text_[pos_] + "'");
    }

private:
    PatternTerm parse_term(int depth) {
        PatternTerm term;
        char c = text_[pos_];
        if (c == '+' || c == '-') {
            term.literal = c;
            ++pos_;
        } else if (c == '(') {
            if (depth + 1 > kMaxDepth)
                throw PatternParseError(pos_, {}, "group nesting exceeds depth 4");
            std::size_t open = pos_++;
            term.is_group = true;
            term.group = parse_pattern(depth + 1);
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw PatternParseError(pos_, {"'+'", "'-'", "'('", "')'"},
                                        "unbalanced group opened at offset " +
                                            std::to_string(open));
            ++pos_;
        } else {
            throw PatternParseError(pos_, {"'+'", "'-'", "'('"},
                                    std::string("unexpected '") + c + "'");
        }
        parse_quant(term);
        return term;
    }

    void parse_quant(PatternTerm& term) {
        if (pos_ >= text_.size()) return;
        char c = text_[pos_];
        if (c == '?') {
            term.quant = Quant::Optional;
            ++pos_;
        } else if (c == '{') {
            ++pos_;
            term.min = parse_number();
            if (term.min < 1)
                throw PatternParseError(pos_, {}, "repetition count must be >= 1");
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                term.max = parse_number();
                if (term.max < term.min)
                    throw PatternParseError(pos_, {}, "range upper bound below lower bound");
                term.quant = Quant::Range;
            } else {
                term.max = term.min;
                term.quant = Quant::Exactly;
            }
            if (pos_ >= text_.size() || text_[pos_] != '}')
                throw PatternParseError(pos_, {"'}'", "','"}, "unterminated quantifier");
            ++pos_;
        }
    }

    int parse_number() {
        if (pos_ >= text_.size() || !isdigit(static_cast<unsigned char>(text_[pos_])))
            throw PatternParseError(pos_, {"digit"}, "expected repetition count");
        int value = 0;
        while (pos_ < text_.size() && isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 999) throw PatternParseError(pos_, {}, "repetition count too large");
            ++pos_;
        }
        return value;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

// Canonicalization: {1} -> plain, {n,n} -> {n}, and groups that add nothing
// (quantifier-one groups, single-plain-term groups) are spliced away.
void normalize_terms(std::vector<PatternTerm>& terms) {
    std::vector<PatternTerm> out;
    for (PatternTerm& term : terms) {
        if (term.is_group) normalize_terms(term.group);
        if (term.quant == Quant::Exactly && term.min == 1) term.quant = Quant::One;
        if (term.quant == Quant::Range && term.min == term.max) term.quant = Quant::Exactly;
        if (term.is_group && term.quant == Quant::One) {
            for (PatternTerm& sub : term.group) out.push_back(std::move(sub));
            continue;
        }
        if (term.is_group && term.group.size() == 1 && term.group[0].quant == Quant::One) {
            PatternTerm inner = std::move(term.group[0]);
            inner.quant = term.quant;
            inner.min = term.min;
            inner.max = term.max;
            out.push_back(std::move(inner));
            continue;
        }
        out.push_back(std::move(term));
    }
    terms = std::move(out);
}

void print_terms(const std::vector<PatternTerm>& terms, std::string& out) {
    for (const PatternTerm& term : terms) {
        if (term.is_group) {
            out += '(';
            print_terms(term.group, out);
            out += ')';
        } else {
            out += term.literal;
        }
        switch (term.quant) {
            case Quant::One: break;
            case Quant::Optional: out += '?'; break;
            case Quant::Exactly: out += '{' + std::to_string(term.min) + '}'; break;
            case Quant::Range:
                out += '{' + std::to_string(term.min) + ',' + std::to_string(term.max) + '}';
                break;
        }
    }
}

} // namespace

PatternAst compile_pattern(const std::string& dsl) {
    for (std::size_t i = 0; i < dsl.size(); ++i) {
        char c = dsl[i];
        if (std::string_view("+-(){}?,0123456789").find(c) == std::string_view::npos)
            throw PatternParseError(i, {}, std::string("character '") + c +
                                               "' outside the pattern alphabet");
    }
    Parser parser(dsl);
    PatternAst ast;
    ast.terms = parser.parse_pattern(0);
    parser.expect_end();
    normalize_terms(ast.terms);
    return ast;
}

std::string pattern_to_dsl(const PatternAst& ast) {
    std::string out;
    print_terms(ast.terms, out);
    return out;
}

// --- NFA / DFA compilation ---------------------------------------------------

namespace {

struct Nfa {
    // A state holds up to two epsilon edges and at most one symbol edge.
    struct State {
        int eps[2] = {-1, -1};
        int sym = -1; // 0 = '+', 1 = '-'
        int to = -1;
    };
    std::vector<State> states;

    int add() {
        if (states.size() > 20000) throw Error("PatternTooLarge", "pattern expands too far");
        states.emplace_back();
        return static_cast<int>(states.size()) - 1;
    }
    void eps_edge(int from, int to) {
        for (int& e : states[from].eps)
            if (e < 0) {
                e = to;
                return;
            }
        // Fan out through a fresh state when both slots are taken.
        int mid = add();
        states[mid].eps[0] = states[from].eps[1];
        states[mid].eps[1] = to;
        states[from].eps[1] = mid;
    }
};

struct Fragment {
    int start, end;
};

Fragment build_terms(Nfa& nfa, const std::vector<PatternTerm>& terms);

Fragment build_once(Nfa& nfa, const PatternTerm& term) {
    if (term.is_group) return build_terms(nfa, term.group);
    int s = nfa.add(), t = nfa.add();
    nfa.states[s].sym = term.literal == '+' ? 0 : 1;
    nfa.states[s].to = t;
    return {s, t};
}

Fragment build_terms(Nfa& nfa, const std::vector<PatternTerm>& terms) {
    int start = nfa.add();
    int cur = start;
    for (const PatternTerm& term : terms) {
        int required = term.quant == Quant::One || term.quant == Quant::Optional
                           ? (term.quant == Quant::One ? 1 : 0)
                           : term.min;
        int total = term.quant == Quant::Optional ? 1
                    : term.quant == Quant::One    ? 1
                                                  : term.max;
        std::vector<int> skip_from;
        for (int i = 0; i < total; ++i) {
            if (i >= required) skip_from.push_back(cur);
            Fragment f = build_once(nfa, term);
            nfa.eps_edge(cur, f.start);
            cur = f.end;
        }
        for (int s : skip_from) nfa.eps_edge(s, cur);
    }
    return {start, cur};
}

} // namespace

StressMatcher StressMatcher::compile(const PatternAst& ast) {
    Nfa nfa;
    Fragment all = build_terms(nfa, ast.terms);

    auto closure = [&](std::vector<char>& in) {
        std::vector<int> stack;
        for (std::size_t s = 0; s < in.size(); ++s)
            if (in[s]) stack.push_back(static_cast<int>(s));
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            for (int e : nfa.states[s].eps)
                if (e >= 0 && !in[e]) {
                    in[e] = 1;
                    stack.push_back(e);
                }
        }
    };

    StressMatcher m;
    m.one_insertion_ = ast.one_insertion;
    std::map<std::vector<char>, int> ids;
    std::vector<std::vector<char>> sets;
    std::vector<char> start(nfa.states.size(), 0);
    start[all.start] = 1;
    closure(start);
    ids[start] = 0;
    sets.push_back(start);
    m.next_.push_back({-1, -1});
    m.accept_.push_back(start[all.end]);
    for (std::size_t d = 0; d < sets.size(); ++d) {
        for (int sym = 0; sym < 2; ++sym) {
            std::vector<char> to(nfa.states.size(), 0);
            bool any = false;
            for (std::size_t s = 0; s < nfa.states.size(); ++s)
                if (sets[d][s] && nfa.states[s].sym == sym) {
                    to[nfa.states[s].to] = 1;
                    any = true;
                }
            if (!any) continue;
            closure(to);
            auto [it, fresh] = ids.emplace(to, static_cast<int>(sets.size()));
            if (fresh) {
                sets.push_back(to);
                m.next_.push_back({-1, -1});
                m.accept_.push_back(to[all.end]);
            }
            m.next_[d][sym] = it->second;
        }
    }
    return m;
}

bool StressMatcher::run(std::string_view stress, std::size_t skip) const {
    int state = 0;
    for (std::size_t i = 0; i < stress.size(); ++i) {
        if (i == skip) continue;
        int sym = stress[i] == '+' ? 0 : 1;
        state = next_[state][sym];
        if (state < 0) return false;
    }
    return accept_[state] != 0;
}

bool StressMatcher::matches(std::string_view stress) const {
    if (next_.empty()) return false;
    if (!one_insertion_) return run(stress, stress.npos);
    // Exactly one extra '-' at an interior position of the line.
    if (stress.size() < 3) return false;
    for (std::size_t i = 1; i + 1 < stress.size(); ++i)
        if (stress[i] == '-' && run(stress, i)) return true;
    return false;
}

// --- Modifiers ---------------------------------------------------------------

namespace {

struct UnrolledAtom {
    char literal;
    bool optional;
};

void unroll_into(const std::vector<PatternTerm>& terms, std::vector<UnrolledAtom>& out);

void unroll_term_once(const PatternTerm& term, bool optional, std::vector<UnrolledAtom>& out) {
    if (!term.is_group) {
        out.push_back({term.literal, optional});
        return;
    }
    if (optional) {
        // An optional multi-atom group has no per-atom expansion.
        if (term.group.size() == 1 && !term.group[0].is_group &&
            term.group[0].quant == Quant::One) {
            out.push_back({term.group[0].literal, true});
            return;
        }
        throw Error("UnsupportedModifier", "pattern has an optional group and cannot be unrolled");
    }
    unroll_into(term.group, out);
}

void unroll_into(const std::vector<PatternTerm>& terms, std::vector<UnrolledAtom>& out) {
    for (const PatternTerm& term : terms) {
        int required = term.quant == Quant::One ? 1 : term.quant == Quant::Optional ? 0 : term.min;
        int total = term.quant == Quant::One || term.quant == Quant::Optional ? 1 : term.max;
        for (int i = 0; i < total; ++i) unroll_term_once(term, i >= required, out);
    }
}

std::vector<UnrolledAtom> unroll(const PatternAst& ast) {
    std::vector<UnrolledAtom> atoms;
    unroll_into(ast.terms, atoms);
    return atoms;
}

PatternAst from_atoms(const std::vector<UnrolledAtom>& atoms) {
    PatternAst ast;
    for (const UnrolledAtom& a : atoms) {
        PatternTerm t;
        t.literal = a.literal;
        t.quant = a.optional ? Quant::Optional : Quant::One;
        ast.terms.push_back(t);
    }
    return ast;
}

} // namespace

PatternAst apply_modifier(const PatternAst& ast, Modifier m) {
    if (ast.applied)
        throw Error("UnsupportedModifier",
                    "modifier '" + modifier_suffix(*ast.applied) + "' already applied");
    if (m == Modifier::Relaxed) {
        PatternAst out = ast;
        out.one_insertion = true;
        out.applied = m;
        return out;
    }
    std::vector<UnrolledAtom> atoms = unroll(ast);
    if (m == Modifier::Invert) {
        if (atoms.size() < 2 || atoms[0].optional || atoms[1].optional)
            throw Error("UnsupportedModifier", "pattern has no invertible first foot");
        if (atoms[0].literal == atoms[1].literal)
            throw Error("UnsupportedModifier", "inversion would not change the pattern");
        std::swap(atoms[0].literal, atoms[1].literal);
        PatternAst out = from_atoms(atoms);
        out.applied = m;
        return out;
    }
    // Chol: the final iambic foot "-+" limps into "--+"; any cadence after the
    // final beat is dropped. Only rising (iambic-shaped) patterns qualify, so
    // trochaic and dactylic families are rejected.
    while (!atoms.empty() && atoms.back().optional) atoms.pop_back();
    if (atoms.size() < 2 || atoms[0].optional || atoms[0].literal != '-' ||
        atoms[1].optional || atoms[1].literal != '+')
        throw Error("UnsupportedModifier", "choliamb applies to iambic patterns only");
    if (atoms.back().literal != '+' || atoms[atoms.size() - 2].literal != '-' ||
        atoms[atoms.size() - 2].optional)
        throw Error("UnsupportedModifier", "choliamb requires a final iambic foot");
    atoms.insert(atoms.end() - 1, {'-', false});
    PatternAst out = from_atoms(atoms);
    out.applied = m;
    return out;
}

// --- Catalog ------------------------------------------------------------------

void MeasurePattern::compile() {
    matcher = StressMatcher::compile(ast);
    modified.clear();
    for (Modifier m : {Modifier::Invert, Modifier::Chol, Modifier::Relaxed})
        if (allow_modifiers.count(m))
            modified.emplace_back(m, StressMatcher::compile(apply_modifier(ast, m)));
}

namespace {

const std::set<Modifier> kNoModifiers;
const std::set<Modifier> kIambicMods = {Modifier::Invert, Modifier::Relaxed, Modifier::Chol};
const std::set<Modifier> kSwapMods = {Modifier::Invert, Modifier::Relaxed};
const std::set<Modifier> kRelaxOnly = {Modifier::Relaxed};

struct FamilySpec {
    const char* name;
    const char* foot;
    const std::set<Modifier>* mods;
};

std::string family_pattern(const std::string& family, const std::string& foot, int beats) {
    auto rep = [](const std::string& unit, int n) {
        if (n == 0) return std::string();
        if (n == 1) return unit;
        return "(" + unit + "){" + std::to_string(n) + "}";
    };
    if (family == "iambic") return rep(foot, beats) + "-?";
    if (family == "trochaic") return rep(foot, beats - 1) + "+-?";
    if (family == "daktylic") return rep(foot, beats - 1) + "+-?-?";
    if (family == "anapaest") return "-?" + rep(foot, beats);
    return rep(foot, beats - 1) + "-+-?"; // amphibrach
}

void add_pattern(MeasureCatalog& catalog, std::string name, int priority, const std::string& dsl,
                 const std::set<Modifier>& mods) {
    MeasurePattern p;
    p.name = std::move(name);
    p.priority = priority;
    p.ast = compile_pattern(dsl);
    for (Modifier m : mods) {
        // Families keep only the deviations their shape admits (a single-beat
        // pattern has no invertible first foot).
        try {
            apply_modifier(p.ast, m);
            p.allow_modifiers.insert(m);
        } catch (const Error&) {
        }
    }
    p.compile();
    catalog.patterns.push_back(std::move(p));
}

} // namespace

MeasureCatalog builtin_catalog() {
    MeasureCatalog catalog;
    add_pattern(catalog, "asklepiade", 10, "+-+--++--+-+", kNoModifiers);
    add_pattern(catalog, "alexandrine", 20, "(-+){6}-?", kNoModifiers);
    add_pattern(catalog, "hexameter", 30, "+--?+--?+--?+--?+--+-", kNoModifiers);
    add_pattern(catalog, "spondeus", 40, "(++)+", kNoModifiers);

    static const FamilySpec families[] = {
        {"iambic", "-+", &kIambicMods},    {"trochaic", "+-", &kSwapMods},
        {"daktylic", "+--", &kSwapMods},   {"anapaest", "--+", &kRelaxOnly},
        {"amphibrach", "-+-", &kSwapMods},
    };
    static const char* lengths[] = {"single",     "dimeter",  "trimeter", "tetrameter",
                                    "pentameter", "hexameter", "septameter"};
    int family_base = 100;
    for (const FamilySpec& family : families) {
        for (int beats = 7; beats >= 1; --beats) {
            std::string name = std::string(family.name) + "." + lengths[beats - 1];
            int priority = family_base + (7 - beats) * 10;
            add_pattern(catalog, name, priority,
                        family_pattern(family.name, family.foot, beats), *family.mods);
        }
        family_base += 100;
    }
    std::sort(catalog.patterns.begin(), catalog.patterns.end(),
              [](const MeasurePattern& a, const MeasurePattern& b) {
                  return a.priority < b.priority;
              });
    return catalog;
}

MeasureCatalog load_catalog(const std::string& text) {
    MeasureCatalog catalog;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::set<int> priorities;
    std::set<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
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
        if (cells.size() != 3 && cells.size() != 4)
            throw Error("MalformedCatalog",
                        "line " + std::to_string(line_no) + ": expected 3 or 4 tab-separated columns");
        MeasurePattern p;
        p.name = cells[0];
        if (p.name.empty())
            throw Error("MalformedCatalog", "line " + std::to_string(line_no) + ": empty name");
        if (!names.insert(p.name).second)
            throw Error("MalformedCatalog", "duplicate measure name '" + p.name + "'");
        try {
            p.priority = std::stoi(cells[1]);
        } catch (const std::exception&) {
            throw Error("MalformedCatalog",
                        "line " + std::to_string(line_no) + ": bad priority '" + cells[1] + "'");
        }
        if (!priorities.insert(p.priority).second)
            throw Error("MalformedCatalog",
                        "duplicate priority " + std::to_string(p.priority));
        p.ast = compile_pattern(cells[2]);
        if (cells.size() == 4) {
            std::istringstream mods(cells[3]);
            std::string mod;
            while (std::getline(mods, mod, ',')) {
                if (mod.empty() || mod == "-" || mod == "none") continue;
                if (mod == "invert") p.allow_modifiers.insert(Modifier::Invert);
                else if (mod == "relaxed") p.allow_modifiers.insert(Modifier::Relaxed);
                else if (mod == "chol") p.allow_modifiers.insert(Modifier::Chol);
                else
                    throw Error("MalformedCatalog", "unknown modifier '" + mod + "'");
            }
        } else {
            // Infer: invert when the first foot is swappable, chol when the
            // pattern ends in a plain iambic foot, relaxed always.
            p.allow_modifiers.insert(Modifier::Relaxed);
            for (Modifier m : {Modifier::Invert, Modifier::Chol}) {
                try {
                    apply_modifier(p.ast, m);
                    p.allow_modifiers.insert(m);
                } catch (const Error&) {
                }
            }
        }
        p.compile();
        catalog.patterns.push_back(std::move(p));
    }
    std::sort(catalog.patterns.begin(), catalog.patterns.end(),
              [](const MeasurePattern& a, const MeasurePattern& b) {
                  return a.priority < b.priority;
              });
    return catalog;
}

std::pair<std::string, std::string> classify_line(std::string_view met,
                                                  const MeasureCatalog& catalog) {
    if (met.empty()) throw Error("EmptyMeter", "cannot classify an empty stress string");
    for (char c : met)
        if (c != '+' && c != '-')
            throw Error("BadSymbol", std::string("stress symbol '") + c + "' not in {+,-}");
    for (const MeasurePattern& p : catalog.patterns)
        if (p.matcher.matches(met)) return {p.name, smsr_of(p.name)};
    for (Modifier m : {Modifier::Invert, Modifier::Chol, Modifier::Relaxed})
        for (const MeasurePattern& p : catalog.patterns)
            for (const auto& [mod, matcher] : p.modified)
                if (mod == m && matcher.matches(met))
                    return {p.name + "." + modifier_suffix(m), smsr_of(p.name)};
    return {MeasureCatalog::fallback, MeasureCatalog::fallback};
}

std::string smsr_of(const std::string& fmsr) {
    if (fmsr.empty()) return fmsr;
    std::size_t dot = fmsr.find('.');
    return dot == std::string::npos ? fmsr : fmsr.substr(0, dot);
}

std::vector<std::pair<std::string, int>> measure_frequencies(const std::vector<VerseLine>& lines) {
    std::map<std::string, int> counts;
    for (const VerseLine& line : lines) {
        if (!line.fmsr) throw Error("MissingLayer", "fmsr layer required for measure frequencies");
        ++counts[smsr_of(*line.fmsr)];
    }
    std::vector<std::pair<std::string, int>> table(counts.begin(), counts.end());
    std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    return table;
}

} // namespace scansion
