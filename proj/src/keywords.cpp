#include "prose2poem/keywords.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "prose2poem/error.h"

namespace prose2poem {

double score_term(const TermStatistics& s) {
  if (s.count == 0 || s.text_length == 0) return 0.0;
  const double count = static_cast<double>(s.count);
  const double frequency = count / static_cast<double>(s.text_length);
  const double earliness = 1.0 / std::log2(2.0 + static_cast<double>(s.first_position));
  const double dispersion = static_cast<double>(s.distinct_left + s.distinct_right) / (2.0 * count);
  return frequency * earliness / (1.0 + dispersion);
}

std::vector<std::pair<std::string, TermStatistics>> term_statistics(
    std::span<const std::string> tokens) {
  struct Acc {
    TermStatistics stats;
    std::set<std::string> left;
    std::set<std::string> right;
  };
  // Sentinels cannot collide with tokens, which never contain whitespace.
  static const std::string kStart = " ^";
  static const std::string kEnd = " $";

  std::vector<std::string> order;
  std::unordered_map<std::string, Acc> acc;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto [it, inserted] = acc.try_emplace(tokens[i]);
    Acc& a = it->second;
    if (inserted) {
      order.push_back(tokens[i]);
      a.stats.first_position = i;
    }
    ++a.stats.count;
    a.left.insert(i == 0 ? kStart : tokens[i - 1]);
    a.right.insert(i + 1 == tokens.size() ? kEnd : tokens[i + 1]);
  }
  std::vector<std::pair<std::string, TermStatistics>> out;
  out.reserve(order.size());
  for (const auto& term : order) {
    Acc& a = acc.at(term);
    a.stats.text_length = tokens.size();
    a.stats.distinct_left = a.left.size();
    a.stats.distinct_right = a.right.size();
    out.emplace_back(term, a.stats);
  }
  return out;
}

std::vector<std::string> rank_terms(std::span<const std::string> tokens,
                                    const KeywordOptions& options) {
  struct Scored {
    std::string term;
    double score;
    std::size_t first;
  };
  std::vector<Scored> scored;
  for (auto& [term, stats] : term_statistics(tokens)) {
    if (options.stopwords.contains(term)) continue;
    scored.push_back({term, score_term(stats), stats.first_position});
  }
  std::ranges::sort(scored, [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.first != b.first) return a.first < b.first;
    return a.term < b.term;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < options.top_m; ++i) {
    out.push_back(std::move(scored[i].term));
  }
  return out;
}

KeywordSet extract_keywords(std::span<const std::string> text, std::span<const Span> spans,
                            const KeywordOptions& options) {
  if (text.empty()) throw Error("cannot extract keywords from empty text");
  if (options.top_m == 0) throw Error("top_m must be positive");
  std::size_t expected = 0;
  for (const auto& [begin, end] : spans) {
    if (begin != expected || end <= begin || end > text.size()) {
      throw Error("hemistich spans must partition the text into non-empty ranges");
    }
    expected = end;
  }
  if (expected != text.size()) {
    throw Error("hemistich spans must partition the text into non-empty ranges");
  }

  KeywordSet out;
  std::map<std::string, std::size_t> slot;
  auto merge = [&](const std::vector<std::string>& pass) {
    for (const auto& term : pass) {
      auto [it, inserted] = slot.try_emplace(term, out.keywords.size());
      if (inserted) {
        out.keywords.push_back(term);
        out.frequencies.push_back(1);
      } else {
        ++out.frequencies[it->second];
      }
    }
  };
  merge(rank_terms(text, options));
  for (const auto& [begin, end] : spans) {
    merge(rank_terms(text.subspan(begin, end - begin), options));
  }
  return out;
}

}  // namespace prose2poem
