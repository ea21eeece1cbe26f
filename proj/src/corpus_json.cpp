#include <json.hpp>

#include "scansion/corpus.hpp"
#include "scansion/error.hpp"

namespace scansion {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& path, const std::string& detail) {
    throw Error("SchemaViolation", path + ": " + detail);
}

const ordered_json& require(const ordered_json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) schema_error(path + "." + key, "missing");
    return obj.at(key);
}

std::string require_string(const ordered_json& v, const std::string& path) {
    if (!v.is_string()) schema_error(path, "expected string");
    return v.get<std::string>();
}

int require_int(const ordered_json& v, const std::string& path) {
    if (!v.is_number_integer()) schema_error(path, "expected integer");
    return v.get<int>();
}

VerseLine parse_line(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) schema_error(path, "expected object");
    VerseLine line;
    const ordered_json& sylls = require(j, "syllables", path);
    if (!sylls.is_array()) schema_error(path + ".syllables", "expected array");
    std::size_t si = 0;
    for (const auto& js : sylls) {
        std::string spath = path + ".syllables[" + std::to_string(si++) + "]";
        Syllable s;
        s.text = require_string(require(js, "text", spath), spath + ".text");
        s.pos_in_word = require_int(require(js, "pos_in_word", spath), spath + ".pos_in_word");
        s.token_index = require_int(require(js, "token_index", spath), spath + ".token_index");
        line.syllables.push_back(std::move(s));
    }
    const std::size_t n = line.syllables.size();
    auto layer_string = [&](const char* key, const char* alphabet) -> std::optional<std::string> {
        if (!j.contains(key)) return std::nullopt;
        std::string v = require_string(j.at(key), path + "." + key);
        if (v.size() != n)
            schema_error(path + "." + key, "length " + std::to_string(v.size()) +
                                               " does not match " + std::to_string(n) +
                                               " syllables");
        for (char c : v)
            if (std::string_view(alphabet).find(c) == std::string_view::npos)
                schema_error(path + "." + key, std::string("symbol '") + c + "' not in \"" +
                                                   alphabet + "\"");
        return v;
    };
    if (auto met = layer_string("met", "+-")) {
        line.met.emplace();
        for (char c : *met) line.met->push_back(stress_from_char(c));
    }
    if (auto ft = layer_string("ft", "01")) {
        line.foot_end.emplace();
        for (char c : *ft) line.foot_end->push_back(c == '1');
    }
    if (auto csr = layer_string("csr", "01")) {
        line.caesura_after.emplace();
        for (char c : *csr) line.caesura_after->push_back(c == '1');
    }
    if (auto main = layer_string("main", "012")) {
        line.main_accent.emplace();
        for (char c : *main) line.main_accent->push_back(c - '0');
    }
    if (j.contains("pos")) {
        const ordered_json& jp = j.at("pos");
        if (!jp.is_array()) schema_error(path + ".pos", "expected array");
        if (jp.size() != n) schema_error(path + ".pos", "length does not match syllables");
        line.pos.emplace();
        std::size_t pi = 0;
        for (const auto& v : jp)
            line.pos->push_back(require_string(v, path + ".pos[" + std::to_string(pi++) + "]"));
    }
    if (j.contains("fmsr")) line.fmsr = require_string(j.at("fmsr"), path + ".fmsr");
    if (j.contains("smsr")) line.smsr = require_string(j.at("smsr"), path + ".smsr");
    if (j.contains("met_line")) line.met_line = require_string(j.at("met_line"), path + ".met_line");
    try {
        line.validate();
    } catch (const Error& e) {
        schema_error(path, e.what());
    }
    return line;
}

Poem parse_poem(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) schema_error(path, "expected object");
    Poem poem;
    if (j.contains("meta")) {
        const ordered_json& meta = j.at("meta");
        if (!meta.is_object()) schema_error(path + ".meta", "expected object");
        for (const auto& [key, value] : meta.items())
            poem.meta[key] = require_string(value, path + ".meta." + key);
    }
    const ordered_json& stanzas = require(j, "stanzas", path);
    if (!stanzas.is_array()) schema_error(path + ".stanzas", "expected array");
    std::size_t stanza_i = 0;
    for (const auto& stanza : stanzas) {
        std::string spath = path + ".stanzas[" + std::to_string(stanza_i) + "]";
        if (!stanza.is_array()) schema_error(spath, "expected array");
        if (stanza_i > 0) poem.stanza_breaks.insert(poem.lines.size());
        std::size_t line_i = 0;
        for (const auto& jl : stanza)
            poem.lines.push_back(parse_line(jl, spath + "[" + std::to_string(line_i++) + "]"));
        ++stanza_i;
    }
    return poem;
}

ordered_json line_to_json(const VerseLine& line) {
    ordered_json j;
    ordered_json sylls = ordered_json::array();
    for (const Syllable& s : line.syllables)
        sylls.push_back({{"text", s.text}, {"pos_in_word", s.pos_in_word},
                         {"token_index", s.token_index}});
    j["syllables"] = std::move(sylls);
    if (line.met) j["met"] = line.met_string();
    auto flags = [](const std::vector<bool>& v) {
        std::string s;
        for (bool b : v) s.push_back(b ? '1' : '0');
        return s;
    };
    if (line.foot_end) j["ft"] = flags(*line.foot_end);
    if (line.caesura_after) j["csr"] = flags(*line.caesura_after);
    if (line.main_accent) {
        std::string s;
        for (int v : *line.main_accent) s.push_back(static_cast<char>('0' + v));
        j["main"] = s;
    }
    if (line.pos) j["pos"] = *line.pos;
    if (line.fmsr) j["fmsr"] = *line.fmsr;
    if (line.smsr) j["smsr"] = *line.smsr;
    if (line.met_line) j["met_line"] = *line.met_line;
    return j;
}

} // namespace

std::vector<Poem> read_poems_json(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("SchemaViolation", std::string("invalid JSON: ") + e.what());
    }
    const ordered_json* poems = nullptr;
    if (root.is_array()) {
        poems = &root;
    } else if (root.is_object()) {
        if (!root.contains("poems")) schema_error("$.poems", "missing");
        poems = &root.at("poems");
        if (!poems->is_array()) schema_error("$.poems", "expected array");
    } else {
        schema_error("$", "expected object or array");
    }
    std::vector<Poem> out;
    std::size_t i = 0;
    for (const auto& jp : *poems)
        out.push_back(parse_poem(jp, "$.poems[" + std::to_string(i++) + "]"));
    return out;
}

std::string write_poems_json(const std::vector<Poem>& poems) {
    ordered_json jpoems = ordered_json::array();
    for (const Poem& poem : poems) {
        poem.validate();
        ordered_json jp;
        ordered_json meta = ordered_json::object();
        for (const auto& [key, value] : poem.meta) meta[key] = value;
        jp["meta"] = std::move(meta);
        ordered_json stanzas = ordered_json::array();
        ordered_json stanza = ordered_json::array();
        for (std::size_t i = 0; i < poem.lines.size(); ++i) {
            if (poem.stanza_breaks.count(i)) {
                stanzas.push_back(std::move(stanza));
                stanza = ordered_json::array();
            }
            stanza.push_back(line_to_json(poem.lines[i]));
        }
        stanzas.push_back(std::move(stanza));
        jp["stanzas"] = std::move(stanzas);
        jpoems.push_back(std::move(jp));
    }
    ordered_json root;
    root["poems"] = std::move(jpoems);
    return root.dump(2) + "\n";
}

} // namespace scansion
