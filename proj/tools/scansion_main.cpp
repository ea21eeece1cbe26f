// Command-line front end: normalize / tokenize / syllabify / train-syll /
// train-tagger / tag / measure / eval / agree / stats / pipeline.
//
// Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to
// stderr; data goes to --output (default stdout).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "scansion/corpus.hpp"
#include "scansion/crf.hpp"
#include "scansion/crf_train.hpp"
#include "scansion/error.hpp"
#include "scansion/measures.hpp"
#include "scansion/metrics.hpp"
#include "scansion/syllabify.hpp"
#include "scansion/textnorm.hpp"

namespace {

using namespace scansion;

struct CliConfig {
    std::string input = "-";
    std::string output = "-";
    std::string model_path;
    std::string syll_model_path;
    std::string catalog_path;
    std::string gold_path;
    std::string second_path;
    std::string sonority_path;
    std::string confusion_csv_path;
    std::string lang = "en";
    std::string format = "tabular";
    std::string report = "text";
    std::string layer = "met";
    std::string aux;
    std::uint64_t seed = 42;
    int epochs = 50;
    double l2 = 1e-4;
    double learning_rate = 0.5;
    double dev_fraction = 0.1;
    int batch_size = 8;
    int patience = 10;
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IoError", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot write '" + path + "'");
    out << data;
}

void require_file(const std::string& path, const char* what) {
    if (path.empty()) throw Error("IoError", std::string(what) + " path missing");
    if (path == "-") return;
    std::ifstream in(path);
    if (!in) throw Error("IoError", std::string(what) + " '" + path + "' not readable");
}

TrainConfig train_config(const CliConfig& cfg) {
    TrainConfig tc;
    tc.epochs = cfg.epochs;
    tc.l2 = cfg.l2;
    tc.seed = cfg.seed;
    tc.learning_rate = cfg.learning_rate;
    tc.dev_fraction = cfg.dev_fraction;
    tc.batch_size = cfg.batch_size;
    tc.patience = cfg.patience;
    return tc;
}

MeasureCatalog open_catalog(const CliConfig& cfg) {
    if (!cfg.catalog_path.empty()) return load_catalog(read_input(cfg.catalog_path));
    return builtin_catalog();
}

SonorityHierarchy open_hierarchy(const CliConfig& cfg) {
    SonorityHierarchy h = SonorityHierarchy::for_language(cfg.lang);
    if (cfg.sonority_path.empty()) return h;
    // Override file: one "class letters" pair per line.
    std::istringstream in(read_input(cfg.sonority_path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cls, letters;
        row >> cls >> letters;
        if (cls.empty() || letters.empty() || !h.rank.count(cls))
            throw Error("MalformedRow", "bad sonority override '" + line + "'");
        for (char32_t c : utf8_decode(letters)) h.char_class[c] = cls;
    }
    return h;
}

CrfModel open_model(const std::string& path) { return load_model(read_input(path)); }

std::optional<HyphenationModel> open_syllabifier(const CliConfig& cfg) {
    if (cfg.syll_model_path.empty()) return std::nullopt;
    HyphenationModel model;
    model.crf = open_model(cfg.syll_model_path);
    if (model.crf.task != "hyphen")
        throw Error("InvalidModel", "'" + cfg.syll_model_path + "' is not a hyphenation model");
    return model;
}

void report_warnings(const std::vector<VerseLine>& lines, const std::string& what) {
    std::size_t count = 0;
    std::string first;
    for (const VerseLine& line : lines)
        for (const std::string& w : line.validation_warnings()) {
            if (first.empty()) first = w;
            ++count;
        }
    if (count)
        std::cerr << what << ": " << count << " validation warning(s), e.g. " << first << "\n";
}

// Applies a transform to a corpus while preserving its container format.
void transform_corpus(const CliConfig& cfg,
                      const std::function<void(std::vector<VerseLine>&)>& apply) {
    std::string text = read_input(cfg.input);
    if (cfg.format == "json") {
        std::vector<Poem> poems = read_poems_json(text);
        for (Poem& poem : poems) apply(poem.lines);
        write_output(cfg.output, write_poems_json(poems));
    } else {
        std::vector<VerseLine> lines = parse_tabular(text);
        report_warnings(lines, cfg.input);
        apply(lines);
        write_output(cfg.output, write_tabular(lines));
    }
}

std::vector<VerseLine> load_corpus(const CliConfig& cfg, const std::string& path) {
    std::string text = read_input(path);
    if (cfg.format == "json") return all_lines(read_poems_json(text));
    std::vector<VerseLine> lines = parse_tabular(text);
    report_warnings(lines, path);
    return lines;
}

// --- Subcommands --------------------------------------------------------------

int cmd_normalize(const CliConfig& cfg) {
    write_output(cfg.output, normalize_text(read_input(cfg.input)));
    return 0;
}

int cmd_tokenize(const CliConfig& cfg) {
    std::istringstream in(normalize_text(read_input(cfg.input)));
    std::string line, out;
    while (std::getline(in, line)) {
        std::vector<std::string> tokens = tokenize_line(line);
        for (std::size_t i = 0; i < tokens.size(); ++i) out += (i ? " " : "") + tokens[i];
        out += '\n';
    }
    write_output(cfg.output, out);
    return 0;
}

std::vector<VerseLine> syllabify_text(const CliConfig& cfg, const std::string& text,
                                      std::vector<std::size_t>* stanza_starts) {
    auto hyphenator = open_syllabifier(cfg);
    SonorityHierarchy hierarchy = open_hierarchy(cfg);
    std::vector<VerseLine> lines;
    std::istringstream in(normalize_text(text));
    std::string raw;
    bool blank_run = true;
    while (std::getline(in, raw)) {
        std::vector<std::string> tokens = strip_punctuation(tokenize_line(raw));
        if (tokens.empty()) {
            blank_run = true;
            continue;
        }
        if (blank_run && stanza_starts && !lines.empty()) stanza_starts->push_back(lines.size());
        blank_run = false;
        VerseLine line;
        line.syllables = hyphenator ? syllabify_line(tokens, *hyphenator)
                                    : syllabify_line(tokens, hierarchy);
        lines.push_back(std::move(line));
    }
    return lines;
}

int cmd_syllabify(const CliConfig& cfg) {
    std::vector<VerseLine> lines = syllabify_text(cfg, read_input(cfg.input), nullptr);
    write_output(cfg.output, write_tabular(lines));
    return 0;
}

int cmd_train_syll(const CliConfig& cfg) {
    HyphenGold gold = parse_hyphen_gold(read_input(cfg.input));
    HyphenationModel model = train_hyphenator(gold, train_config(cfg));
    std::vector<std::vector<std::string>> gold_sylls, predicted;
    for (const auto& [word, syllables] : gold) {
        gold_sylls.push_back(syllables);
        predicted.push_back(syllabify_word(word, model));
    }
    SyllabifierReport report = evaluate_syllabifier(gold_sylls, predicted);
    std::cerr << "train word accuracy " << report.word_accuracy << ", syllable count accuracy "
              << report.syllable_count_accuracy << " over " << report.n_words << " words\n";
    write_output(cfg.output, save_model(model.crf));
    return 0;
}

std::vector<std::string> canonical_labels(const std::vector<VerseLine>& lines, Layer layer) {
    switch (layer) {
        case Layer::Met: return {"+", "-"};
        case Layer::Foot:
        case Layer::Caesura: return {".", ":"};
        case Layer::Main: return {"0", "1", "2"};
        case Layer::Pos: {
            std::set<std::string> tags;
            for (const VerseLine& line : lines)
                for (const std::string& t : layer_strings(line, layer)) tags.insert(t);
            return {tags.begin(), tags.end()};
        }
    }
    return {};
}

int cmd_train_tagger(const CliConfig& cfg) {
    std::vector<VerseLine> lines = load_corpus(cfg, cfg.input);
    if (lines.empty()) throw Error("EmptyData", "no training lines");
    Layer primary = layer_from_name(cfg.layer);
    std::optional<Layer> aux;
    if (!cfg.aux.empty()) aux = layer_from_name(cfg.aux);

    const bool predicts_pos = primary == Layer::Pos || (aux && *aux == Layer::Pos);
    std::vector<LabeledSequence> data;
    data.reserve(lines.size());
    for (const VerseLine& line : lines) {
        if (line.size() == 0) continue;
        LabeledSequence seq = sequence_from_line(line, !predicts_pos);
        if (aux) attach_joint_labels(seq, line, primary, *aux);
        else attach_labels(seq, line, primary);
        data.push_back(std::move(seq));
    }
    std::vector<std::string> labels = canonical_labels(lines, primary);
    if (aux) labels = join_label_sets(labels, canonical_labels(lines, *aux));

    TrainResult result = train(data, primary == Layer::Pos ? pos_preset() : meter_preset(),
                               labels, train_config(cfg));
    result.model.task = aux ? cfg.layer + "|" + cfg.aux : cfg.layer;
    for (std::size_t e = 0; e < result.history.size(); ++e)
        std::cerr << "epoch " << e + 1 << " nll " << result.history[e].train_nll << " dev acc "
                  << result.history[e].dev_accuracy << "\n";
    std::cerr << "best epoch " << result.best_epoch + 1 << "\n";
    write_output(cfg.output, save_model(result.model));
    return 0;
}

void tag_lines(std::vector<VerseLine>& lines, const CrfModel& model) {
    std::size_t sep = model.task.find('|');
    std::optional<Layer> aux;
    Layer primary = layer_from_name(sep == std::string::npos ? model.task
                                                             : model.task.substr(0, sep));
    if (sep != std::string::npos) aux = layer_from_name(model.task.substr(sep + 1));
    const bool predicts_pos = primary == Layer::Pos || (aux && *aux == Layer::Pos);

    std::vector<LabeledSequence> seqs;
    std::vector<std::size_t> which;
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (lines[i].size() > 0) {
            seqs.push_back(sequence_from_line(lines[i], !predicts_pos));
            which.push_back(i);
        }
    std::vector<std::vector<std::string>> outputs = tag_all(model, seqs);
    for (std::size_t k = 0; k < which.size(); ++k) {
        VerseLine& line = lines[which[k]];
        if (aux) {
            set_layer(line, primary, project(outputs[k], 0));
            set_layer(line, *aux, project(outputs[k], 1));
        } else {
            set_layer(line, primary, outputs[k]);
        }
    }
}

int cmd_tag(const CliConfig& cfg) {
    require_file(cfg.model_path, "--model");
    CrfModel model = open_model(cfg.model_path);
    transform_corpus(cfg, [&](std::vector<VerseLine>& lines) { tag_lines(lines, model); });
    return 0;
}

void measure_lines(std::vector<VerseLine>& lines, const MeasureCatalog& catalog) {
    for (VerseLine& line : lines) {
        if (!line.met) throw Error("MissingLayer", "measure needs the met layer");
        if (line.size() == 0) continue;
        auto [fmsr, smsr] = classify_line(line.met_string(), catalog);
        line.fmsr = fmsr;
        line.smsr = smsr;
    }
}

int cmd_measure(const CliConfig& cfg) {
    MeasureCatalog catalog = open_catalog(cfg);
    transform_corpus(cfg, [&](std::vector<VerseLine>& lines) { measure_lines(lines, catalog); });
    return 0;
}

int cmd_eval(const CliConfig& cfg) {
    require_file(cfg.gold_path, "--gold");
    std::vector<VerseLine> gold = load_corpus(cfg, cfg.gold_path);
    std::vector<VerseLine> predicted = load_corpus(cfg, cfg.input);
    EvalReport report = cfg.layer == "fmsr" || cfg.layer == "smsr"
                            ? eval_report_measures(gold, predicted, cfg.layer == "fmsr")
                            : eval_report(gold, predicted, layer_from_name(cfg.layer));
    write_output(cfg.output,
                 cfg.report == "json" ? eval_report_json(report) : render_eval_report(report));
    return 0;
}

int cmd_agree(const CliConfig& cfg) {
    require_file(cfg.second_path, "--second");
    std::vector<VerseLine> a = load_corpus(cfg, cfg.input);
    std::vector<VerseLine> b = load_corpus(cfg, cfg.second_path);
    AgreementReport report = kappa_granularities(a, b, layer_from_name(cfg.layer));
    if (!cfg.confusion_csv_path.empty())
        write_output(cfg.confusion_csv_path, confusion_csv(report));
    write_output(cfg.output, cfg.report == "json" ? agreement_report_json(report)
                                                  : render_agreement_report(report));
    return 0;
}

int cmd_stats(const CliConfig& cfg) {
    std::vector<VerseLine> lines = load_corpus(cfg, cfg.input);
    bool have_accent = !lines.empty();
    for (const VerseLine& line : lines)
        if (!line.met || !line.pos) have_accent = false;
    bool have_measures = !lines.empty();
    for (const VerseLine& line : lines)
        if (!line.fmsr) have_measures = false;
    if (!have_accent && !have_measures)
        throw Error("MissingLayer", "stats needs met+pos (accent ratio) or fmsr (measures)");
    std::string out;
    if (have_accent) out += render_accent_ratio(accent_ratio(lines));
    if (have_measures) {
        if (!out.empty()) out += "\n";
        out += "measure  count\n";
        for (const auto& [smsr, count] : measure_frequencies(lines))
            out += smsr + std::string(smsr.size() < 9 ? 9 - smsr.size() : 1, ' ') +
                   std::to_string(count) + "\n";
    }
    write_output(cfg.output, out);
    return 0;
}

int cmd_pipeline(const CliConfig& cfg) {
    require_file(cfg.model_path, "--model");
    CrfModel model = open_model(cfg.model_path);
    MeasureCatalog catalog = open_catalog(cfg);

    std::vector<std::size_t> stanza_starts;
    std::vector<VerseLine> lines = syllabify_text(cfg, read_input(cfg.input), &stanza_starts);
    tag_lines(lines, model);
    measure_lines(lines, catalog);
    for (VerseLine& line : lines) line.met_line = line.met_string();

    if (cfg.format == "json") {
        Poem poem;
        poem.lines = std::move(lines);
        poem.stanza_breaks.insert(stanza_starts.begin(), stanza_starts.end());
        write_output(cfg.output, write_poems_json({poem}));
    } else {
        write_output(cfg.output, write_tabular(lines));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scansion: syllabify poetic text, tag prosodic labels, classify verse measures"};
    app.require_subcommand(1);
    app.set_config("--config");

    CliConfig cfg;
    app.add_option("--input,-i", cfg.input, "input path ('-' = stdin)")->capture_default_str();
    app.add_option("--output,-o", cfg.output, "output path ('-' = stdout)")
        ->capture_default_str();
    app.add_option("--model,-m", cfg.model_path, "tagger model path");
    app.add_option("--syll-model", cfg.syll_model_path, "trained hyphenation model path");
    app.add_option("--catalog", cfg.catalog_path, "measure catalog file")
        ->envname("SCANSION_CATALOG");
    app.add_option("--gold", cfg.gold_path, "gold corpus (eval)");
    app.add_option("--second", cfg.second_path, "second annotator corpus (agree)");
    app.add_option("--sonority", cfg.sonority_path, "sonority class override file");
    app.add_option("--confusion-csv", cfg.confusion_csv_path,
                   "also write the agreement confusion matrix as CSV");
    app.add_option("--lang", cfg.lang, "language (en, de)")
        ->check(CLI::IsMember({"en", "de"}))
        ->capture_default_str();
    app.add_option("--format", cfg.format, "corpus format")
        ->check(CLI::IsMember({"tabular", "json"}))
        ->capture_default_str();
    app.add_option("--report", cfg.report, "report format for eval/agree")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--layer", cfg.layer,
                   "annotation layer (met, ft, csr, main, pos; eval also fmsr, smsr)")
        ->capture_default_str();
    app.add_option("--aux", cfg.aux, "auxiliary layer for joint-label training");
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
    app.add_option("--l2", cfg.l2, "L2 regularization")->capture_default_str();
    app.add_option("--learning-rate", cfg.learning_rate, "base learning rate")
        ->capture_default_str();
    app.add_option("--dev-fraction", cfg.dev_fraction, "held-out fraction during training")
        ->capture_default_str();
    app.add_option("--batch-size", cfg.batch_size, "mini-batch size (0 = full batch)")
        ->capture_default_str();
    app.add_option("--patience", cfg.patience, "early-stop patience")->capture_default_str();

    std::map<std::string, std::function<int(const CliConfig&)>> commands = {
        {"normalize", cmd_normalize},   {"tokenize", cmd_tokenize},
        {"syllabify", cmd_syllabify},   {"train-syll", cmd_train_syll},
        {"train-tagger", cmd_train_tagger}, {"tag", cmd_tag},
        {"measure", cmd_measure},       {"eval", cmd_eval},
        {"agree", cmd_agree},           {"stats", cmd_stats},
        {"pipeline", cmd_pipeline},
    };
    static const std::map<std::string, std::string> descriptions = {
        {"normalize", "normalize historical orthography and compose diacritics"},
        {"tokenize", "split verse lines into tokens"},
        {"syllabify", "raw text to syllable rows"},
        {"train-syll", "train the character-boundary hyphenator"},
        {"train-tagger", "train a CRF tagger for an annotation layer"},
        {"tag", "fill a layer with a trained tagger"},
        {"measure", "derive fmsr/smsr from the met layer"},
        {"eval", "score predictions against a gold corpus"},
        {"agree", "inter-annotator agreement between two corpora"},
        {"stats", "accent-ratio and measure-frequency tables"},
        {"pipeline", "raw text to tagged tabular output"},
    };
    for (auto& [name, fn] : commands)
        app.add_subcommand(name, descriptions.at(name))->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        for (auto& [name, fn] : commands)
            if (app.got_subcommand(name)) return fn(cfg);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
