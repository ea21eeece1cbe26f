// Regenerates the canonical fixtures that must stay byte-identical with the
// writers: tests/data/sample.json and the shipped data/measures.tsv.
// Usage: scansion-make-fixtures <repo root>

#include <fstream>
#include <iostream>

#include "scansion/corpus.hpp"
#include "scansion/measures.hpp"

using namespace scansion;

namespace {

VerseLine line_from(const std::vector<std::pair<std::string, int>>& sylls,
                    const std::string& met) {
    VerseLine line;
    int tok = -1;
    for (const auto& [text, pos_in_word] : sylls) {
        Syllable s;
        s.text = text;
        s.pos_in_word = pos_in_word;
        if (pos_in_word <= 1) ++tok;
        s.token_index = tok;
        line.syllables.push_back(std::move(s));
    }
    std::vector<StressMark> marks;
    for (char c : met) marks.push_back(stress_from_char(c));
    line.met = std::move(marks);
    line.met_line = met;
    line.validate();
    return line;
}

std::string catalog_file() {
    std::string out =
        "# Verse-measure catalog: name<TAB>priority<TAB>pattern<TAB>modifiers\n"
        "# Patterns are anchored stress strings over {+,-} with ?, {n} and {n,m}\n"
        "# quantifiers. Lower priority is tried first. The modifier column lists\n"
        "# the deviations a measure admits (invert, relaxed, chol) or '-'.\n";
    for (const MeasurePattern& p : builtin_catalog().patterns) {
        std::string mods;
        for (Modifier m : {Modifier::Invert, Modifier::Relaxed, Modifier::Chol})
            if (p.allow_modifiers.count(m)) mods += (mods.empty() ? "" : ",") + modifier_suffix(m);
        if (mods.empty()) mods = "-";
        out += p.name + "\t" + std::to_string(p.priority) + "\t" + pattern_to_dsl(p.ast) + "\t" +
               mods + "\n";
    }
    out +=
        "# Forms without an attested stress pattern; uncomment and supply one\n"
        "# to enable them.\n"
        "#glykoneus\t50\t...\t-\n"
        "#pherekrateus\t51\t...\t-\n"
        "#prosodiakos\t52\t...\t-\n"
        "#zehnsilber\t53\t...\t-\n";
    return out;
}

std::string sample_json() {
    Poem schiller;
    schiller.meta = {{"author", "Schiller"},
                     {"language", "de"},
                     {"period", "Klassik"},
                     {"title", "Die Bürgschaft"},
                     {"year", "1798"}};
    schiller.lines.push_back(line_from(
        {{"Ich", 0}, {"las", 1}, {"se", 2}, {"den", 0}, {"Freund", 0}, {"dir", 0}, {"als", 0},
         {"Bür", 1}, {"gen", 2}},
        "-+--+--+-"));
    schiller.lines.push_back(line_from(
        {{"Ihn", 0}, {"magst", 0}, {"du", 0}, {"ent", 1}, {"rinn'", 2}, {"ich", 0},
         {"er", 1}, {"wür", 2}, {"gen", 3}},
        "-+--+--+-"));
    schiller.lines.push_back(line_from(
        {{"Und", 0}, {"es", 0}, {"rauscht", 0}, {"und", 0}, {"es", 0}, {"singt", 0}, {"in", 0},
         {"der", 0}, {"Nacht", 0}},
        "--+--+--+"));
    schiller.lines.push_back(line_from(
        {{"Der", 0}, {"Mor", 1}, {"gen", 2}, {"kommt", 0}, {"und", 0}, {"ruft", 0}},
        "-+-+-+"));
    schiller.stanza_breaks = {2};

    Poem spenser;
    spenser.meta = {{"author", "Spenser"}, {"language", "en"}, {"source_id", "amoretti-30"}};
    VerseLine fire = line_from({{"My", 0}, {"love", 0}, {"is", 0}, {"like", 0}, {"to", 0},
                                {"ice", 0}, {"and", 0}, {"I", 0}, {"to", 0}, {"fire", 0}},
                               "-+-+-+-+-+");
    fire.foot_end = std::vector<bool>{false, true, false, true, false, true, false, true, false, true};
    fire.caesura_after =
        std::vector<bool>{false, false, false, false, false, true, false, false, false, true};
    fire.main_accent = std::vector<int>{0, 1, 0, 0, 0, 2, 0, 1, 0, 2};
    fire.pos = std::vector<std::string>{"PRP$", "NN", "VBZ", "IN", "TO", "NN", "CC", "PRP", "TO", "NN"};
    fire.fmsr = "iambic.pentameter";
    fire.smsr = "iambic";
    fire.validate();
    spenser.lines.push_back(std::move(fire));

    return write_poems_json({schiller, spenser});
}

} // namespace

int main(int argc, char** argv) {
    std::string root = argc > 1 ? argv[1] : ".";
    {
        std::ofstream out(root + "/tests/data/sample.json", std::ios::binary);
        out << sample_json();
    }
    {
        std::ofstream out(root + "/data/measures.tsv", std::ios::binary);
        out << catalog_file();
    }
    std::cout << "fixtures written under " << root << "\n";
    return 0;
}
