#include "scansion/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

#include "scansion/error.hpp"
#include "scansion/measures.hpp"

namespace scansion {

char to_char(StressMark m) { return static_cast<char>(m); }

StressMark stress_from_char(char c) {
    if (c == '+') return StressMark::Stressed;
    if (c == '-') return StressMark::Unstressed;
    throw Error("UnknownSymbol", std::string("met symbol '") + c + "' not in {+,-}");
}

std::string VerseLine::met_string() const {
    std::string s;
    if (!met) return s;
    s.reserve(met->size());
    for (StressMark m : *met) s.push_back(to_char(m));
    return s;
}

namespace {

template <typename T>
void check_len(const std::optional<std::vector<T>>& layer, std::size_t n, const char* name) {
    if (layer && layer->size() != n)
        throw Error("InvalidLine", std::string(name) + " layer has " +
                                       std::to_string(layer->size()) + " entries for " +
                                       std::to_string(n) + " syllables");
}

} // namespace

void VerseLine::validate() const {
    const std::size_t n = syllables.size();
    check_len(met, n, "met");
    check_len(foot_end, n, "ft");
    check_len(caesura_after, n, "csr");
    check_len(main_accent, n, "main");
    check_len(pos, n, "pos");
    for (const Syllable& s : syllables) {
        if (s.text.empty()) throw Error("InvalidLine", "empty syllable text");
        if (s.pos_in_word < 0) throw Error("InvalidLine", "negative pos_in_word");
    }
    // pos_in_word is 0 for a monosyllabic token, else a contiguous 1..k run
    // over one token_index.
    for (std::size_t i = 0; i < n; ++i) {
        const Syllable& s = syllables[i];
        bool same_token = i > 0 && syllables[i - 1].token_index == s.token_index;
        if (i > 0 && s.token_index < syllables[i - 1].token_index)
            throw Error("InvalidLine", "token_index decreases at syllable " + std::to_string(i));
        if (same_token) {
            if (s.pos_in_word != syllables[i - 1].pos_in_word + 1 || s.pos_in_word < 2)
                throw Error("InvalidLine",
                            "pos_in_word run broken at syllable " + std::to_string(i));
        } else if (s.pos_in_word > 1) {
            throw Error("InvalidLine",
                        "token starts with pos_in_word " + std::to_string(s.pos_in_word));
        }
    }
    if (main_accent)
        for (int v : *main_accent)
            if (v < 0 || v > 2)
                throw Error("UnknownSymbol", "main accent " + std::to_string(v) + " not in {0,1,2}");
    if (met && met_line && met_string() != *met_line)
        throw Error("InvalidLine", "met_line '" + *met_line + "' does not match met '" +
                                       met_string() + "'");
    if (fmsr && smsr && *smsr != smsr_of(*fmsr))
        throw Error("InvalidLine",
                    "smsr '" + *smsr + "' is not the head of fmsr '" + *fmsr + "'");
}

std::vector<std::string> VerseLine::validation_warnings() const {
    std::vector<std::string> warnings;
    if (foot_end && !foot_end->empty() && !foot_end->back())
        warnings.push_back("final syllable carries no foot boundary");
    return warnings;
}

void Poem::validate() const {
    for (const VerseLine& l : lines) l.validate();
    for (std::size_t b : stanza_breaks)
        if (b >= lines.size())
            throw Error("InvalidLine", "stanza break " + std::to_string(b) + " out of range");
}

std::vector<VerseLine> all_lines(const std::vector<Poem>& poems) {
    std::vector<VerseLine> lines;
    for (const Poem& p : poems)
        lines.insert(lines.end(), p.lines.begin(), p.lines.end());
    return lines;
}

Layer layer_from_name(std::string_view name) {
    if (name == "met") return Layer::Met;
    if (name == "ft") return Layer::Foot;
    if (name == "csr") return Layer::Caesura;
    if (name == "main") return Layer::Main;
    if (name == "pos") return Layer::Pos;
    throw Error("MissingLayer", "unknown layer '" + std::string(name) + "'");
}

std::string layer_name(Layer layer) {
    switch (layer) {
        case Layer::Met: return "met";
        case Layer::Foot: return "ft";
        case Layer::Caesura: return "csr";
        case Layer::Main: return "main";
        case Layer::Pos: return "pos";
    }
    return "";
}

bool has_layer(const VerseLine& line, Layer layer) {
    switch (layer) {
        case Layer::Met: return line.met.has_value();
        case Layer::Foot: return line.foot_end.has_value();
        case Layer::Caesura: return line.caesura_after.has_value();
        case Layer::Main: return line.main_accent.has_value();
        case Layer::Pos: return line.pos.has_value();
    }
    return false;
}

std::vector<std::string> layer_strings(const VerseLine& line, Layer layer) {
    if (!has_layer(line, layer))
        throw Error("MissingLayer", "line has no '" + layer_name(layer) + "' layer");
    std::vector<std::string> out;
    out.reserve(line.size());
    switch (layer) {
        case Layer::Met:
            for (StressMark m : *line.met) out.emplace_back(1, to_char(m));
            break;
        case Layer::Foot:
            for (bool b : *line.foot_end) out.emplace_back(b ? ":" : ".");
            break;
        case Layer::Caesura:
            for (bool b : *line.caesura_after) out.emplace_back(b ? ":" : ".");
            break;
        case Layer::Main:
            for (int v : *line.main_accent) out.push_back(std::to_string(v));
            break;
        case Layer::Pos:
            out = *line.pos;
            break;
    }
    return out;
}

std::string layer_line_string(const VerseLine& line, Layer layer) {
    std::string out;
    for (const std::string& s : layer_strings(line, layer)) out += s;
    return out;
}

void set_layer(VerseLine& line, Layer layer, const std::vector<std::string>& labels) {
    if (labels.size() != line.size())
        throw Error("InvalidLine", "label count does not match syllable count");
    auto junction = [&](const std::string& l) {
        if (l == ":") return true;
        if (l == ".") return false;
        throw Error("UnknownSymbol", layer_name(layer) + " label '" + l + "' not in {., :}");
    };
    switch (layer) {
        case Layer::Met: {
            std::vector<StressMark> met;
            for (const std::string& l : labels) {
                if (l.size() != 1)
                    throw Error("UnknownSymbol", "met label '" + l + "' not in {+,-}");
                met.push_back(stress_from_char(l[0]));
            }
            line.met = std::move(met);
            break;
        }
        case Layer::Foot: {
            std::vector<bool> v;
            for (const std::string& l : labels) v.push_back(junction(l));
            line.foot_end = std::move(v);
            break;
        }
        case Layer::Caesura: {
            std::vector<bool> v;
            for (const std::string& l : labels) v.push_back(junction(l));
            line.caesura_after = std::move(v);
            break;
        }
        case Layer::Main: {
            std::vector<int> v;
            for (const std::string& l : labels) {
                if (l != "0" && l != "1" && l != "2")
                    throw Error("UnknownSymbol", "main label '" + l + "' not in {0,1,2}");
                v.push_back(l[0] - '0');
            }
            line.main_accent = std::move(v);
            break;
        }
        case Layer::Pos:
            line.pos = labels;
            break;
    }
}

// --- Tabular format -------------------------------------------------------

namespace {

constexpr std::array<const char*, 10> kColumns = {
    "tok", "met", "ft", "pos", "syll", "csr", "main", "smsr", "measure", "met_line"};
constexpr std::size_t kTok = 0, kMet = 1, kFt = 2, kPos = 3, kSyll = 4, kCsr = 5, kMain = 6,
                      kSmsr = 7, kMeasure = 8, kMetLine = 9;
constexpr const char* kAbsent = "_";

std::vector<std::string> split_tabs(const std::string& line) {
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

int parse_int(const std::string& cell, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw Error("MalformedRow", std::string("bad ") + what + " value '" + cell + "'");
    return value;
}

bool parse_junction(const std::string& cell, const char* col) {
    if (cell == ".") return false;
    if (cell == ":") return true;
    throw Error("UnknownSymbol", std::string(col) + " symbol '" + cell + "' not in {., :}");
}

// One raw record block: per row the cells indexed by canonical column.
struct RawBlock {
    std::vector<std::vector<std::string>> rows;
};

VerseLine build_line(const RawBlock& block, const std::array<bool, 10>& present) {
    VerseLine line;
    const std::size_t n = block.rows.size();
    line.syllables.resize(n);
    if (present[kMet]) line.met.emplace();
    if (present[kFt]) line.foot_end.emplace();
    if (present[kPos]) line.pos.emplace();
    if (present[kCsr]) line.caesura_after.emplace();
    if (present[kMain]) line.main_accent.emplace();

    int token_index = -1;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = block.rows[i];
        Syllable& syl = line.syllables[i];
        syl.text = row[kTok];
        if (syl.text.empty()) throw Error("MalformedRow", "empty tok cell");
        if (present[kSyll]) {
            syl.pos_in_word = parse_int(row[kSyll], "syll");
            if (syl.pos_in_word <= 1) ++token_index;
            syl.token_index = token_index;
        } else {
            syl.pos_in_word = 0;
            syl.token_index = static_cast<int>(i);
        }
        if (present[kMet]) {
            if (row[kMet].size() != 1)
                throw Error("UnknownSymbol", "met symbol '" + row[kMet] + "' not in {+,-}");
            line.met->push_back(stress_from_char(row[kMet][0]));
        }
        if (present[kFt]) line.foot_end->push_back(parse_junction(row[kFt], "ft"));
        if (present[kPos]) line.pos->push_back(row[kPos]);
        if (present[kCsr]) line.caesura_after->push_back(parse_junction(row[kCsr], "csr"));
        if (present[kMain]) {
            int v = parse_int(row[kMain], "main");
            if (v < 0 || v > 2)
                throw Error("UnknownSymbol", "main symbol '" + row[kMain] + "' not in {0,1,2}");
            line.main_accent->push_back(v);
        }
    }
    auto line_level = [&](std::size_t col, const char* name) -> std::string {
        const std::string& first = block.rows[0][col];
        for (const auto& row : block.rows)
            if (row[col] != first)
                throw Error("MalformedRow", std::string(name) + " differs within one verse line");
        return first;
    };
    if (present[kSmsr]) line.smsr = line_level(kSmsr, "smsr");
    if (present[kMeasure]) line.fmsr = line_level(kMeasure, "measure");
    if (present[kMetLine]) line.met_line = line_level(kMetLine, "met_line");
    line.validate();
    return line;
}

} // namespace

std::vector<VerseLine> parse_tabular(const std::string& text) {
    std::vector<std::string> file_lines;
    {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t nl = text.find('\n', start);
            if (nl == std::string::npos) {
                if (start < text.size()) file_lines.push_back(text.substr(start));
                break;
            }
            std::string l = text.substr(start, nl - start);
            if (!l.empty() && l.back() == '\r') l.pop_back();
            file_lines.push_back(std::move(l));
            start = nl + 1;
        }
    }
    std::size_t idx = 0;
    while (idx < file_lines.size() && file_lines[idx].empty()) ++idx;
    if (idx >= file_lines.size()) return {};

    // Header: "# tok" then a prefix of the optional columns.
    std::vector<std::string> header = split_tabs(file_lines[idx]);
    if (header.empty() || header[0].empty() || header[0][0] != '#')
        throw Error("MalformedRow", "missing '#' header line");
    std::string first = header[0].substr(1);
    first.erase(0, first.find_first_not_of(" \t"));
    header[0] = first;
    if (header.size() > kColumns.size())
        throw Error("MalformedRow", "header has too many columns");
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] != kColumns[c])
            throw Error("MalformedRow", "header column " + std::to_string(c) + " is '" +
                                            header[c] + "', expected '" + kColumns[c] + "'");
    const std::size_t ncols = header.size();
    ++idx;

    std::vector<RawBlock> blocks;
    RawBlock current;
    int row_no = 0;
    auto flush = [&]() {
        if (!current.rows.empty()) {
            blocks.push_back(std::move(current));
            current = RawBlock{};
        }
        row_no = 0;
    };
    for (; idx < file_lines.size(); ++idx) {
        const std::string& raw = file_lines[idx];
        if (raw.empty()) {
            flush();
            continue;
        }
        std::vector<std::string> cells = split_tabs(raw);
        if (cells.size() != ncols + 1)
            throw Error("MalformedRow", "row has " + std::to_string(cells.size()) +
                                            " cells, expected " + std::to_string(ncols + 1));
        ++row_no;
        if (parse_int(cells[0], "index") != row_no)
            throw Error("IndexGap", "row index '" + cells[0] + "' at position " +
                                        std::to_string(row_no));
        std::vector<std::string> row(kColumns.size());
        for (std::size_t c = 0; c + 1 < cells.size(); ++c) row[c] = cells[c + 1];
        current.rows.push_back(std::move(row));
    }
    flush();

    // A column whose every cell is "_" is an absent layer; mixing "_" with
    // values is rejected.
    std::array<bool, 10> present{};
    present[kTok] = true;
    for (std::size_t c = 1; c < ncols; ++c) {
        bool any_value = false, any_absent = false;
        for (const auto& block : blocks)
            for (const auto& row : block.rows)
                (row[c] == kAbsent ? any_absent : any_value) = true;
        if (any_value && any_absent)
            throw Error("MalformedRow",
                        std::string("column '") + kColumns[c] + "' mixes '_' and values");
        present[c] = any_value;
    }

    std::vector<VerseLine> lines;
    lines.reserve(blocks.size());
    for (const auto& block : blocks) lines.push_back(build_line(block, present));
    return lines;
}

std::string write_tabular(const std::vector<VerseLine>& lines) {
    std::array<bool, 10> present{};
    present[kTok] = true;
    present[kSyll] = true;
    if (!lines.empty()) {
        const VerseLine& l0 = lines[0];
        present[kMet] = l0.met.has_value();
        present[kFt] = l0.foot_end.has_value();
        present[kPos] = l0.pos.has_value();
        present[kCsr] = l0.caesura_after.has_value();
        present[kMain] = l0.main_accent.has_value();
        present[kSmsr] = l0.smsr.has_value();
        present[kMeasure] = l0.fmsr.has_value();
        present[kMetLine] = l0.met_line.has_value();
        for (const VerseLine& l : lines) {
            bool same = l.met.has_value() == present[kMet] &&
                        l.foot_end.has_value() == present[kFt] &&
                        l.pos.has_value() == present[kPos] &&
                        l.caesura_after.has_value() == present[kCsr] &&
                        l.main_accent.has_value() == present[kMain] &&
                        l.smsr.has_value() == present[kSmsr] &&
                        l.fmsr.has_value() == present[kMeasure] &&
                        l.met_line.has_value() == present[kMetLine];
            if (!same) throw Error("InconsistentLayers", "lines carry different layer sets");
            l.validate();
        }
    }
    std::size_t last = kSyll;
    for (std::size_t c = 0; c < kColumns.size(); ++c)
        if (present[c]) last = std::max(last, c);

    std::string out = "#";
    for (std::size_t c = 0; c <= last; ++c) {
        out += c == 0 ? " " : "\t";
        out += kColumns[c];
    }
    out += '\n';
    for (const VerseLine& line : lines) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            const Syllable& syl = line.syllables[i];
            out += std::to_string(i + 1);
            for (std::size_t c = 0; c <= last; ++c) {
                out += '\t';
                if (!present[c]) {
                    out += kAbsent;
                    continue;
                }
                switch (c) {
                    case kTok: out += syl.text; break;
                    case kMet: out += to_char((*line.met)[i]); break;
                    case kFt: out += (*line.foot_end)[i] ? ':' : '.'; break;
                    case kPos: out += (*line.pos)[i]; break;
                    case kSyll: out += std::to_string(syl.pos_in_word); break;
                    case kCsr: out += (*line.caesura_after)[i] ? ':' : '.'; break;
                    case kMain: out += std::to_string((*line.main_accent)[i]); break;
                    case kSmsr: out += *line.smsr; break;
                    case kMeasure: out += *line.fmsr; break;
                    case kMetLine: out += *line.met_line; break;
                }
            }
            out += '\n';
        }
        out += '\n';
    }
    return out;
}

} // namespace scansion
