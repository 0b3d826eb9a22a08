#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace prose2poem {

// Keywords K_1..K_n in extraction order and F_i, the number of extraction
// passes (whole text + one per span) that returned K_i.
struct KeywordSet {
  std::vector<std::string> keywords;
  std::vector<std::size_t> frequencies;

  std::size_t size() const { return keywords.size(); }
  bool operator==(const KeywordSet&) const = default;
};

// Statistics of one candidate term within one extraction pass.
struct TermStatistics {
  std::size_t count = 0;           // occurrences in the pass text
  std::size_t first_position = 0;  // 0-based position of the first occurrence
  std::size_t text_length = 0;     // tokens in the pass text
  std::size_t distinct_left = 0;   // distinct left neighbours (text start counts as one)
  std::size_t distinct_right = 0;  // distinct right neighbours (text end counts as one)
};

// Unsupervised term score, higher is more key:
//
//   frequency  = count / text_length
//   earliness  = 1 / log2(2 + first_position)
//   dispersion = (distinct_left + distinct_right) / (2 * count)
//   score      = frequency * earliness / (1 + dispersion)
//
// Dispersion close to 1 marks a term seen in a fresh context every time
// (function-word behaviour); repeated use in stable contexts lowers it.
// Strictly increasing in count when the other statistics are fixed.
double score_term(const TermStatistics& stats);

// Per-term statistics of one pass, in first-occurrence order.
std::vector<std::pair<std::string, TermStatistics>> term_statistics(
    std::span<const std::string> tokens);

struct KeywordOptions {
  std::size_t top_m = 5;
  std::unordered_set<std::string> stopwords;
};

// Half-open [begin, end) token range.
using Span = std::pair<std::size_t, std::size_t>;

// Ranks the terms of one pass: score descending, then earliest first
// occurrence, then lexicographic. Returns at most top_m terms.
std::vector<std::string> rank_terms(std::span<const std::string> tokens,
                                    const KeywordOptions& options);

// One whole-text pass plus one pass per span, merged by union in pass order.
// `spans` must partition `text` into contiguous non-empty ranges.
// Throws Error on empty text, top_m == 0 or a bad partition.
KeywordSet extract_keywords(std::span<const std::string> text, std::span<const Span> spans,
                            const KeywordOptions& options = {});

}  // namespace prose2poem
