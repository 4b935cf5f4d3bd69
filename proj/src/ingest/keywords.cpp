#include "vaxcast/ingest/keywords.hpp"

#include <algorithm>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace vaxcast::ingest {

namespace detail {
extern const std::string_view kStopwordsVersion;
extern const std::vector<std::string_view> kStopwords;
}  // namespace detail

namespace {

const std::unordered_set<std::string_view>& stopword_set() {
    static const std::unordered_set<std::string_view> set(detail::kStopwords.begin(), detail::kStopwords.end());
    return set;
}

// Decodes one UTF-8 sequence at s[i]; returns its length, 0 when malformed.
std::size_t decode(std::string_view s, std::size_t i, char32_t& cp) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len;
    char32_t min;
    if (b0 < 0x80) {
        cp = b0;
        return 1;
    } else if ((b0 & 0xE0) == 0xC0) {
        len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4, cp = b0 & 0x07, min = 0x10000;
    } else {
        return 0;
    }
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
    return len;
}

// Non-ASCII code points that separate words: punctuation, symbols, spaces, emoji.
bool is_separator(char32_t cp) {
    return (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 || (cp >= 0x2000 && cp <= 0x2BFF) ||
           (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFE00 && cp <= 0xFE0F) || (cp >= 0xFF00 && cp <= 0xFF0F) ||
           cp == 0xFFFD || (cp >= 0x1F000 && cp <= 0x1FAFF);
}

void append_lower(std::string& out, char32_t cp) {
    if ((cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) || (cp >= 0x391 && cp <= 0x3A9) || (cp >= 0x410 && cp <= 0x42F)) {
        cp += 0x20;
    } else if (((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) && cp % 2 == 0) {
        cp += 1;  // Latin Extended-A: upper case at even code points here, odd elsewhere
    } else if (((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) && cp % 2 == 1) {
        cp += 1;
    }
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool looks_like_url(std::string_view word) {
    auto starts = [&](std::string_view prefix) {
        if (word.size() < prefix.size()) return false;
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            char c = word[i];
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            if (c != prefix[i]) return false;
        }
        return true;
    };
    return starts("http://") || starts("https://") || starts("www.");
}

bool all_digits(std::string_view token) {
    return std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

bool is_stopword(std::string_view token) { return stopword_set().contains(token); }

std::string_view stopwords_version() { return detail::kStopwordsVersion; }

KeywordTable corpus_keywords(std::span<const std::string> documents, std::size_t min_frequency) {
    KeywordTable table;
    std::unordered_map<std::string, std::size_t> counts;
    auto flush = [&](std::string& token) {
        if (token.empty()) return;
        ++table.total_tokens;
        if (!all_digits(token) && !is_stopword(token)) ++counts[token];
        token.clear();
    };

    for (const std::string& doc : documents) {
        std::size_t i = 0;
        while (i < doc.size()) {
            while (i < doc.size() && is_space(doc[i])) ++i;
            std::size_t end = i;
            while (end < doc.size() && !is_space(doc[end])) ++end;
            const std::string_view word(doc.data() + i, end - i);
            if (looks_like_url(word)) {
                i = end;
                continue;
            }
            std::string token;
            for (std::size_t k = 0; k < word.size();) {
                char32_t cp = 0;
                const std::size_t len = decode(word, k, cp);
                if (len == 0) {
                    ++table.invalid_bytes;
                    flush(token);
                    ++k;
                    continue;
                }
                k += len;
                const bool ascii_word = (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
                if (ascii_word) {
                    token += static_cast<char>(cp >= 'A' && cp <= 'Z' ? cp - 'A' + 'a' : cp);
                } else if (cp >= 0x80 && !is_separator(cp)) {
                    append_lower(token, cp);
                } else {
                    flush(token);
                }
            }
            flush(token);
            i = end;
        }
    }

    for (auto& [token, n] : counts) {
        if (n >= min_frequency) table.rows.push_back({token, n});
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const KeywordRow& a, const KeywordRow& b) {
        return a.frequency != b.frequency ? a.frequency > b.frequency : a.token < b.token;
    });
    return table;
}

std::string keyword_csv(const KeywordTable& table) {
    std::string out = "token,frequency\n";
    for (const auto& r : table.rows) {
        out += r.token + "," + std::to_string(r.frequency) + "\n";  // tokens never hold ',' or '"'
    }
    return out;
}

}  // namespace vaxcast::ingest
