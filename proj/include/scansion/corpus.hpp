#ifndef SCANSION_CORPUS_HPP
#define SCANSION_CORPUS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace scansion {

enum class StressMark : char { Stressed = '+', Unstressed = '-' };

char to_char(StressMark m);
StressMark stress_from_char(char c); // throws UnknownSymbol

struct Syllable {
    std::string text;
    int pos_in_word = 0; // 0 for monosyllabic words, else 1-based index
    int token_index = 0; // index of the owning token within the line
};

// One line of verse: syllables plus optional parallel annotation layers.
// Every present layer has exactly one entry per syllable; line-level labels
// (fmsr/smsr/met_line) are single strings.
struct VerseLine {
    std::vector<Syllable> syllables;
    std::optional<std::vector<StressMark>> met;
    std::optional<std::vector<bool>> foot_end;      // true = foot boundary after syllable
    std::optional<std::vector<bool>> caesura_after; // true = caesura after syllable
    std::optional<std::vector<int>> main_accent;    // 0 / 1 / 2
    std::optional<std::vector<std::string>> pos;    // POS of owning token, per syllable
    std::optional<std::string> fmsr;
    std::optional<std::string> smsr;
    std::optional<std::string> met_line;

    std::size_t size() const { return syllables.size(); }
    std::string met_string() const; // concatenation of met marks; requires met

    // Checks layer lengths, met/met_line agreement, smsr/fmsr agreement and
    // pos_in_word runs. Throws Error("InvalidLine", ...) on violation.
    void validate() const;

    // Non-fatal oddities, e.g. a foot layer whose final syllable carries no
    // boundary (catalectic lines legitimately end mid-foot).
    std::vector<std::string> validation_warnings() const;
};

struct Poem {
    std::vector<VerseLine> lines;
    std::set<std::size_t> stanza_breaks; // line indices that open a new stanza
    std::map<std::string, std::string> meta; // author, title, year, period, language, source_id

    void validate() const;
};

// --- Tabular line format ------------------------------------------------
//
// Header "# tok<TAB>met<TAB>ft<TAB>pos<TAB>syll<TAB>csr<TAB>main<TAB>smsr
// <TAB>measure<TAB>met_line" with any suffix of optional columns omitted
// uniformly; data rows "idx<TAB>tok<TAB>...", one blank line between verse
// lines; UTF-8, LF. Cells of an absent interior column are written "_", and
// a column consisting solely of "_" parses as an absent layer.

std::vector<VerseLine> parse_tabular(const std::string& text);
std::string write_tabular(const std::vector<VerseLine>& lines);

// --- JSON poem collection -----------------------------------------------
//
// {"poems": [{"meta": {...}, "stanzas": [[line, ...], ...]}]} where a line is
// {"syllables": [{"text", "pos_in_word", "token_index"}, ...], "met": "+-..",
//  "ft": "0100..", "csr": "0010..", "main": "0120..", "pos": [...],
//  "fmsr": "...", "smsr": "...", "met_line": "..."} with absent layers omitted.

std::vector<Poem> read_poems_json(const std::string& text);
std::string write_poems_json(const std::vector<Poem>& poems);

// Flattens poems to their lines, in order.
std::vector<VerseLine> all_lines(const std::vector<Poem>& poems);

// --- Layer access ---------------------------------------------------------

enum class Layer { Met, Foot, Caesura, Main, Pos };

Layer layer_from_name(std::string_view name); // "met", "ft", "csr", "main", "pos"
std::string layer_name(Layer layer);

bool has_layer(const VerseLine& line, Layer layer);
// Per-syllable labels of a layer using the tabular symbols
// (met "+"/"-", ft and csr "."/":", main "0".."2", pos tags).
std::vector<std::string> layer_strings(const VerseLine& line, Layer layer);
// The whole layer as one line-level category string.
std::string layer_line_string(const VerseLine& line, Layer layer);
// Writes per-syllable labels back into a line (inverse of layer_strings).
void set_layer(VerseLine& line, Layer layer, const std::vector<std::string>& labels);

} // namespace scansion

#endif
