#include <doctest.h>

#include <cctype>
#include <random>
#include <set>

#include "scansion/textnorm.hpp"

using namespace scansion;

TEST_CASE("normalize_text replaces long s and rotunda") {
    CHECK(normalize_text("Waſſer") == "Wasser");
    CHECK(normalize_text("") == "");
    CHECK(normalize_text("Herꝛ") == "Herr");
    CHECK(normalize_text("plain ascii!") == "plain ascii!");
}

TEST_CASE("normalize_text composes combining marks") {
    // a + U+0308 -> ä
    CHECK(normalize_text("Bäche") == "Bäche");
    // already composed text is untouched
    CHECK(normalize_text("Bäche") == "Bäche");
}

TEST_CASE("normalize_text is idempotent") {
    std::mt19937 rng(11);
    std::vector<std::string> pool = {"Waſser", "Straße", "ä", "Herꝛ",
                                     "x", " ", "grüßt", "ſſſ"};
    for (int trial = 0; trial < 50; ++trial) {
        std::string s;
        int parts = std::uniform_int_distribution<int>(0, 6)(rng);
        for (int i = 0; i < parts; ++i)
            s += pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        std::string once = normalize_text(s);
        CHECK(normalize_text(once) == once);
    }
}

TEST_CASE("tokenize_line splits punctuation but keeps elisions") {
    CHECK(tokenize_line("and despair!") == std::vector<std::string>{"and", "despair", "!"});
    CHECK(tokenize_line("despair'") == std::vector<std::string>{"despair'"});
    CHECK(tokenize_line("   ") == std::vector<std::string>{});
    CHECK(tokenize_line("'tis the hour") == std::vector<std::string>{"'tis", "the", "hour"});
    CHECK(tokenize_line("\"Quote,\" he said.") ==
          std::vector<std::string>{"\"", "Quote", ",", "\"", "he", "said", "."});
    CHECK(tokenize_line("works, ye Mighty,") ==
          std::vector<std::string>{"works", ",", "ye", "Mighty", ","});
    // a lone apostrophe is punctuation
    CHECK(tokenize_line("x ' y") == std::vector<std::string>{"x", "'", "y"});
}

TEST_CASE("tokenize_line preserves non-whitespace characters") {
    std::mt19937 rng(7);
    std::vector<std::string> pieces = {"and", "despair'", "!", "...", "O'er", "über", ",",
                                       "(so)", "'tis"};
    for (int trial = 0; trial < 100; ++trial) {
        std::string line;
        int parts = std::uniform_int_distribution<int>(0, 8)(rng);
        for (int i = 0; i < parts; ++i) {
            line += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
            line += std::uniform_int_distribution<int>(0, 1)(rng) ? " " : "  ";
        }
        std::multiset<char> before, after;
        for (char c : line)
            if (!isspace(static_cast<unsigned char>(c))) before.insert(c);
        for (const std::string& tok : tokenize_line(line)) {
            CHECK(!tok.empty());
            for (char c : tok) after.insert(c);
        }
        CHECK(before == after);
    }
}

TEST_CASE("strip_punctuation removes punctuation-only tokens") {
    CHECK(strip_punctuation({"works", ",", "ye"}) == std::vector<std::string>{"works", "ye"});
    CHECK(strip_punctuation({"despair'", "!"}) == std::vector<std::string>{"despair'"});
    CHECK(strip_punctuation({}) == std::vector<std::string>{});
    CHECK(strip_punctuation({"'", "...", "--"}) == std::vector<std::string>{});
}
