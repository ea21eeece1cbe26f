#include "scansion/textnorm.hpp"

#include <unicode/errorcode.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "scansion/error.hpp"

namespace scansion {

std::vector<char32_t> utf8_decode(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char b = static_cast<unsigned char>(text[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b < 0x80) {
            cp = b;
        } else if ((b >> 5) == 0x6 && i + 1 < text.size()) {
            cp = (b & 0x1F) << 6 | (text[i + 1] & 0x3F);
            len = 2;
        } else if ((b >> 4) == 0xE && i + 2 < text.size()) {
            cp = (b & 0x0F) << 12 | (text[i + 1] & 0x3F) << 6 | (text[i + 2] & 0x3F);
            len = 3;
        } else if ((b >> 3) == 0x1E && i + 3 < text.size()) {
            cp = (b & 0x07) << 18 | (text[i + 1] & 0x3F) << 12 | (text[i + 2] & 0x3F) << 6 |
                 (text[i + 3] & 0x3F);
            len = 4;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string utf8_encode(const std::vector<char32_t>& codepoints) {
    std::string out;
    out.reserve(codepoints.size());
    for (char32_t cp : codepoints) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t n = 0;
    for (char c : text)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    return n;
}

std::string utf8_prefix(std::string_view text, std::size_t k) {
    auto cps = utf8_decode(text);
    if (cps.size() > k) cps.resize(k);
    return utf8_encode(cps);
}

std::string utf8_suffix(std::string_view text, std::size_t k) {
    auto cps = utf8_decode(text);
    if (cps.size() > k) cps.erase(cps.begin(), cps.end() - static_cast<std::ptrdiff_t>(k));
    return utf8_encode(cps);
}

std::string normalize_text(std::string_view raw) {
    auto cps = utf8_decode(raw);
    for (char32_t& cp : cps) {
        if (cp == 0x017F) cp = U's';
        else if (cp == 0xA75B) cp = U'r';
    }
    icu::UnicodeString us = icu::UnicodeString::fromUTF8(utf8_encode(cps));
    icu::ErrorCode status;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (status.isFailure())
        throw Error("InternalError", std::string("NFC unavailable: ") + status.errorName());
    icu::UnicodeString composed = nfc->normalize(us, status);
    if (status.isFailure())
        throw Error("InternalError", std::string("NFC failed: ") + status.errorName());
    std::string out;
    composed.toUTF8String(out);
    return out;
}

namespace {

bool is_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' ||
           cp == U'\v' || cp == 0x00A0 || cp == 0x2028 || cp == 0x2029;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

bool is_letter(char32_t cp) {
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
    // Latin-1 letters minus the × and ÷ signs, plus the Latin Extended blocks.
    if (cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7) return true;
    return false;
}

} // namespace

bool is_punctuation_codepoint(char32_t cp) {
    if (is_letter(cp) || (cp >= U'0' && cp <= U'9') || is_space(cp)) return false;
    static const std::u32string common =
        U"!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~"
        U"¡¿«»‘’‚“”„"
        U"–—…′″";
    return common.find(cp) != std::u32string::npos;
}

bool is_punctuation_token(std::string_view token) {
    auto cps = utf8_decode(token);
    if (cps.empty()) return false;
    for (char32_t cp : cps)
        if (!is_punctuation_codepoint(cp)) return false;
    return true;
}

std::vector<std::string> tokenize_line(std::string_view text) {
    std::vector<std::string> tokens;
    auto cps = utf8_decode(text);
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && is_space(cps[i])) ++i;
        if (i >= cps.size()) break;
        std::size_t j = i;
        while (j < cps.size() && !is_space(cps[j])) ++j;
        std::vector<char32_t> chunk(cps.begin() + i, cps.begin() + j);
        i = j;

        // Peel leading punctuation. A leading apostrophe stays when the next
        // character is a letter ('tis, 'twas).
        std::size_t lo = 0, hi = chunk.size();
        std::vector<std::string> lead;
        while (lo < hi && is_punctuation_codepoint(chunk[lo])) {
            if (is_apostrophe(chunk[lo]) && lo + 1 < hi && is_letter(chunk[lo + 1])) break;
            lead.push_back(utf8_encode({chunk[lo]}));
            ++lo;
        }
        // Peel trailing punctuation; a trailing apostrophe after a letter stays.
        std::vector<std::string> trail;
        while (hi > lo && is_punctuation_codepoint(chunk[hi - 1])) {
            if (is_apostrophe(chunk[hi - 1]) && hi - 1 > lo && is_letter(chunk[hi - 2])) break;
            trail.push_back(utf8_encode({chunk[hi - 1]}));
            --hi;
        }
        for (auto& t : lead) tokens.push_back(std::move(t));
        if (hi > lo)
            tokens.push_back(utf8_encode(std::vector<char32_t>(chunk.begin() + lo, chunk.begin() + hi)));
        for (auto it = trail.rbegin(); it != trail.rend(); ++it) tokens.push_back(std::move(*it));
    }
    return tokens;
}

std::vector<std::string> strip_punctuation(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens)
        if (!is_punctuation_token(tok)) out.push_back(tok);
    return out;
}

} // namespace scansion
