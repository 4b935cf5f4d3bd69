#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vaxcast::ingest {

struct KeywordRow {
    std::string token;
    std::size_t frequency = 0;
    friend bool operator==(const KeywordRow&, const KeywordRow&) = default;
};

struct KeywordTable {
    std::vector<KeywordRow> rows;  ///< frequency descending, then token ascending
    std::size_t total_tokens = 0;  ///< tokens seen before any filtering
    std::size_t invalid_bytes = 0; ///< malformed UTF-8 bytes, treated as separators
};

/// Token frequencies over a corpus. Words that look like URLs are dropped
/// whole; the rest is split on anything that is not a letter or digit (so
/// '#' and '@' sigils fall away), lowercased, and stripped of pure numbers
/// and stop words. Tokens seen fewer than `min_frequency` times are dropped.
KeywordTable corpus_keywords(std::span<const std::string> documents, std::size_t min_frequency = 2);

/// `token,frequency` CSV.
std::string keyword_csv(const KeywordTable& table);

bool is_stopword(std::string_view token);
std::string_view stopwords_version();

}  // namespace vaxcast::ingest
