#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scansion/corpus.hpp"

using namespace scansion;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SCANSION_CLI_BIN;
const std::string kFixtures = SCANSION_FIXTURES;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "scansion-cli-tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    RunResult result;
    fs::path out_path = temp_dir() / "cmd.out";
    std::string command = kCli + " " + args + " >" + out_path.string() + " 2>&1";
    int status = std::system(command.c_str());
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    return result;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

} // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run("").exit_code == 1);
    CHECK(run("frobnicate").exit_code == 1);
    CHECK(run("tag --no-such-flag").exit_code == 1);
    CHECK(run("--help").exit_code == 0);
}

TEST_CASE("data errors exit 2") {
    fs::path bad = temp_dir() / "bad.tsv";
    write_file(bad, "# tok\tmet\n1\ta\tx\n");
    RunResult r = run("measure --input " + bad.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("UnknownSymbol") != std::string::npos);
    CHECK(run("tag --model /nonexistent --input " + bad.string()).exit_code == 2);
}

TEST_CASE("normalize and tokenize") {
    fs::path in = temp_dir() / "raw.txt";
    write_file(in, "Waſſer, und despair'!\n");
    fs::path out = temp_dir() / "norm.txt";
    CHECK(run("normalize --input " + in.string() + " --output " + out.string()).exit_code == 0);
    CHECK(read_file(out) == "Wasser, und despair'!\n");
    fs::path toks = temp_dir() / "toks.txt";
    CHECK(run("tokenize --input " + in.string() + " --output " + toks.string()).exit_code == 0);
    CHECK(read_file(toks) == "Wasser , und despair' !\n");
}

TEST_CASE("measure fills fmsr and smsr") {
    // The Shelley block with the measure and smsr columns blanked out.
    std::string original = read_file(kFixtures + "/ozymandias.tsv");
    std::vector<VerseLine> lines = parse_tabular(original);
    lines[0].fmsr.reset();
    lines[0].smsr.reset();
    fs::path blank = temp_dir() / "oz_blank.tsv";
    write_file(blank, write_tabular(lines));
    fs::path filled = temp_dir() / "oz_filled.tsv";
    CHECK(run("measure --input " + blank.string() + " --output " + filled.string()).exit_code == 0);
    // byte-identical with the original fixture once re-filled
    CHECK(read_file(filled) == original);
    std::vector<VerseLine> parsed = parse_tabular(read_file(filled));
    CHECK(*parsed[0].fmsr == "iambic.pentameter.invert");
    CHECK(*parsed[0].smsr == "iambic");
}

TEST_CASE("measure is idempotent on its output") {
    std::string sample = kFixtures + "/sample_annotated.tsv";
    fs::path once = temp_dir() / "measured_once.tsv";
    fs::path twice = temp_dir() / "measured_twice.tsv";
    CHECK(run("measure --input " + sample + " --output " + once.string()).exit_code == 0);
    CHECK(run("measure --input " + once.string() + " --output " + twice.string()).exit_code == 0);
    CHECK(read_file(once) == read_file(twice));
    // the sample is already classified, so the first pass reproduces it too
    CHECK(read_file(once) == read_file(sample));
}

TEST_CASE("measure works on JSON corpora") {
    fs::path out = temp_dir() / "sample_measured.json";
    RunResult r = run("measure --format json --input " + kFixtures + "/sample.json --output " +
                      out.string());
    CHECK(r.exit_code == 0);
    std::vector<Poem> poems = read_poems_json(read_file(out));
    CHECK(*poems[0].lines[0].fmsr == "amphibrach.trimeter");
    CHECK(*poems[0].lines[2].fmsr == "anapaest.trimeter");
}

TEST_CASE("agree on a file against itself reports kappa 1") {
    std::string sample = kFixtures + "/sample_annotated.tsv";
    RunResult r = run("agree --input " + sample + " --second " + sample + " --layer met");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("kappa syllable  1.000") != std::string::npos);
    CHECK(r.output.find("kappa line      1.000") != std::string::npos);
    RunResult js = run("agree --report json --input " + sample + " --second " + sample +
                       " --layer ft");
    CHECK(js.exit_code == 0);
    CHECK(js.output.find("\"kappa_boundary\": 1.0") != std::string::npos);
}

TEST_CASE("agree writes an optional confusion CSV") {
    std::string sample = kFixtures + "/sample_annotated.tsv";
    fs::path csv = temp_dir() / "confusion.csv";
    RunResult r = run("agree --input " + sample + " --second " + sample + " --layer main" +
                      " --confusion-csv " + csv.string());
    CHECK(r.exit_code == 0);
    std::string text = read_file(csv);
    CHECK(text.find("label,0,1,2") != std::string::npos);
}

TEST_CASE("pos tagging trains without the gold layer as input") {
    std::string sample = kFixtures + "/sample_annotated.tsv";
    fs::path model = temp_dir() / "pos.crf";
    CHECK(run("train-tagger --input " + sample + " --output " + model.string() +
              " --layer pos --epochs 30 --dev-fraction 0").exit_code == 0);
    std::string text = read_file(model);
    CHECK(text.find("task\tpos") != std::string::npos);
    // no feature may read the pos field when pos is the target
    CHECK(text.find("F\tpos[") == std::string::npos);
}

TEST_CASE("stats emits measure frequencies and accent ratios") {
    RunResult r = run("stats --input " + kFixtures + "/sample_annotated.tsv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("iambic") != std::string::npos);
    CHECK(r.output.find("pos") != std::string::npos);
}

TEST_CASE("train, tag, eval, pipeline round") {
    // Train a tiny meter tagger on the annotated sample, then reuse it.
    std::string sample = kFixtures + "/sample_annotated.tsv";
    fs::path model = temp_dir() / "met.crf";
    RunResult trained = run("train-tagger --input " + sample + " --output " + model.string() +
                            " --epochs 40 --dev-fraction 0 --seed 7");
    CHECK(trained.exit_code == 0);
    REQUIRE(fs::exists(model));

    // tag the same lines with met stripped
    std::vector<VerseLine> lines = parse_tabular(read_file(sample));
    std::vector<VerseLine> bare = lines;
    for (VerseLine& line : bare) {
        line.met.reset();
        line.met_line.reset();
        line.fmsr.reset();
        line.smsr.reset();
        line.foot_end.reset();
        line.caesura_after.reset();
        line.main_accent.reset();
    }
    fs::path bare_path = temp_dir() / "bare.tsv";
    write_file(bare_path, write_tabular(bare));
    fs::path tagged = temp_dir() / "tagged.tsv";
    CHECK(run("tag --model " + model.string() + " --input " + bare_path.string() + " --output " +
              tagged.string()).exit_code == 0);
    std::vector<VerseLine> predicted = parse_tabular(read_file(tagged));
    REQUIRE(predicted.size() == lines.size());
    // training memorizes the small sample
    int correct = 0;
    for (std::size_t i = 0; i < lines.size(); ++i)
        correct += predicted[i].met_string() == lines[i].met_string();
    CHECK(correct == static_cast<int>(lines.size()));

    // eval against gold
    RunResult eval = run("eval --gold " + sample + " --input " + tagged.string() + " --layer met");
    CHECK(eval.exit_code == 0);
    CHECK(eval.output.find("syll acc   1.000") != std::string::npos);

    // determinism: the same training run yields the same model file
    fs::path model2 = temp_dir() / "met2.crf";
    CHECK(run("train-tagger --input " + sample + " --output " + model2.string() +
              " --epochs 40 --dev-fraction 0 --seed 7").exit_code == 0);
    CHECK(read_file(model) == read_file(model2));

    // pipeline: raw text -> tagged tabular with measures
    fs::path raw = temp_dir() / "poem.txt";
    write_file(raw, "My love is like to ice and I to fire\n");
    fs::path piped = temp_dir() / "piped.tsv";
    RunResult pipe = run("pipeline --model " + model.string() + " --lang en --input " +
                         raw.string() + " --output " + piped.string());
    CHECK(pipe.exit_code == 0);
    std::vector<VerseLine> pl = parse_tabular(read_file(piped));
    REQUIRE(pl.size() == 1);
    CHECK(pl[0].fmsr.has_value());
    CHECK(pl[0].met_line.has_value());

    // pipeline on an empty file: empty output, exit 0
    fs::path empty = temp_dir() / "empty.txt";
    write_file(empty, "");
    fs::path empty_out = temp_dir() / "empty.tsv";
    RunResult empty_run = run("pipeline --model " + model.string() + " --input " + empty.string() +
                              " --output " + empty_out.string());
    CHECK(empty_run.exit_code == 0);
    CHECK(read_file(empty_out) == "# tok\tmet\tft\tpos\tsyll\n");
}

TEST_CASE("train-syll and syllabify with a model") {
    fs::path gold = temp_dir() / "gold.txt";
    write_file(gold, "dog·gy\nkit·ten\nWas·ser\nWin·den\n");
    fs::path model = temp_dir() / "hyph.crf";
    RunResult trained = run("train-syll --input " + gold.string() + " --output " + model.string() +
                            " --epochs 60 --dev-fraction 0");
    CHECK(trained.exit_code == 0);
    CHECK(trained.output.find("train word accuracy") != std::string::npos);

    fs::path text = temp_dir() / "line.txt";
    write_file(text, "doggy kitten\n");
    RunResult syl = run("syllabify --syll-model " + model.string() + " --input " + text.string());
    CHECK(syl.exit_code == 0);
    CHECK(syl.output.find("dog") != std::string::npos);
    CHECK(syl.output.find("gy") != std::string::npos);
}

TEST_CASE("joint training tags two layers") {
    std::string sample = kFixtures + "/sample_annotated.tsv";
    fs::path model = temp_dir() / "joint.crf";
    CHECK(run("train-tagger --input " + sample + " --output " + model.string() +
              " --layer met --aux ft --epochs 40 --dev-fraction 0").exit_code == 0);
    std::vector<VerseLine> bare = parse_tabular(read_file(sample));
    for (VerseLine& line : bare) {
        line.met.reset();
        line.met_line.reset();
        line.fmsr.reset();
        line.smsr.reset();
        line.foot_end.reset();
        line.caesura_after.reset();
        line.main_accent.reset();
    }
    fs::path bare_path = temp_dir() / "bare_joint.tsv";
    write_file(bare_path, write_tabular(bare));
    fs::path tagged = temp_dir() / "tagged_joint.tsv";
    CHECK(run("tag --model " + model.string() + " --input " + bare_path.string() + " --output " +
              tagged.string()).exit_code == 0);
    std::vector<VerseLine> predicted = parse_tabular(read_file(tagged));
    CHECK(predicted[0].met.has_value());
    CHECK(predicted[0].foot_end.has_value());
}

TEST_CASE("config file values are overridden by flags") {
    fs::path conf = temp_dir() / "scansion.conf";
    write_file(conf, "lang=de\nseed=99\n");
    fs::path in = temp_dir() / "conf_line.txt";
    write_file(in, "Wasser\n");
    // config selects German; flag overrides back to English
    RunResult de = run("syllabify --config " + conf.string() + " --input " + in.string());
    CHECK(de.exit_code == 0);
    CHECK(de.output.find("Was\t") != std::string::npos); // de: Was-ser
    RunResult en = run("syllabify --config " + conf.string() + " --lang en --input " +
                       in.string());
    CHECK(en.exit_code == 0);
    CHECK(en.output.find("Was\t") != std::string::npos); // same split either way
}

TEST_CASE("catalog file via flag") {
    fs::path mini = temp_dir() / "mini_catalog.tsv";
    write_file(mini, "# tiny\nmy.pair\t1\t(-+){2}\t-\n");
    std::string sample_path = kFixtures + "/ozymandias.tsv";
    std::vector<VerseLine> lines = parse_tabular(read_file(sample_path));
    VerseLine pair;
    pair.syllables = {{"a", 0, 0}, {"b", 0, 1}, {"c", 0, 2}, {"d", 0, 3}};
    pair.met = std::vector<StressMark>{StressMark::Unstressed, StressMark::Stressed,
                                       StressMark::Unstressed, StressMark::Stressed};
    fs::path input = temp_dir() / "pair.tsv";
    write_file(input, write_tabular({pair}));
    RunResult r = run("measure --catalog " + mini.string() + " --input " + input.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("my.pair") != std::string::npos);

    // the same catalog through the environment default
    fs::path out_env = temp_dir() / "cmd_env.out";
    std::string command = "SCANSION_CATALOG=" + mini.string() + " " + kCli + " measure --input " +
                          input.string() + " >" + out_env.string() + " 2>&1";
    REQUIRE(std::system(command.c_str()) == 0);
    CHECK(read_file(out_env).find("my.pair") != std::string::npos);
}
