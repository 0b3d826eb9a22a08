#include "prose2poem/augmentation.h"

#include <algorithm>
#include <numeric>

namespace prose2poem {

void SideCapacity::validate() const {
  if (first > kMaxIndex - 1 || second > kMaxIndex - 1) {
    throw Error("keywords per hemistich must be at most 9");
  }
}

bool AugmentedKeywords::contains(std::string_view word) const { return find(word) != nullptr; }

const FinalKeyword* AugmentedKeywords::find(std::string_view word) const {
  for (const auto& e : entries) {
    if (e.word == word) return &e;
  }
  return nullptr;
}

std::vector<std::string> AugmentedKeywords::words() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.word);
  return out;
}

AugmentedKeywords expand_synonyms(const KeywordSet& keywords, const SynonymLexicon& lexicon) {
  AugmentedKeywords out;
  for (const auto& k : keywords.keywords) {
    if (!out.contains(k)) out.entries.push_back({k, KeywordOrigin::original, ""});
  }
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    const auto& k = keywords.keywords[i];
    for (std::size_t j = 1; j <= keywords.frequencies[i]; ++j) {
      const auto& s = lexicon.synonym(k, j);
      if (s.empty()) break;
      if (!out.contains(s)) out.entries.push_back({s, KeywordOrigin::synonym, k});
    }
  }
  return out;
}

std::size_t couplet_count(const PlacementPlan& plan) {
  const std::size_t placed = plan.placed();
  if (placed == 0) throw Error("cannot size a poem from an empty placement plan");
  return (placed + kMaxIndex - 1) / kMaxIndex;
}

std::size_t required_keywords(std::size_t couplets, const SideCapacity& capacity) {
  return couplets * capacity.first + couplets * capacity.second;
}

namespace {

// Plan indices restricted to the current FK members.
IndexKeywords restrict_plan(const PlacementPlan& plan, const AugmentedKeywords& fk) {
  IndexKeywords out;
  for (int i = 0; i < kMaxIndex; ++i) {
    for (const auto& k : plan.ik[i]) {
      if (fk.contains(k)) out[i].push_back(k);
    }
  }
  return out;
}

std::vector<int> indices_by_aggregation(const IndexKeywords& ik, bool ascending) {
  std::vector<int> order;
  for (int i = 0; i < kMaxIndex; ++i) {
    if (!ik[i].empty()) order.push_back(i);
  }
  std::ranges::stable_sort(order, [&](int a, int b) {
    return ascending ? ik[a].size() < ik[b].size() : ik[a].size() > ik[b].size();
  });
  return order;
}

void grow(AugmentedKeywords& fk, std::size_t required, const PlacementPlan& plan,
          const IndexFrequencyTable& freq, const SynonymLexicon& lexicon,
          const WordFilter& accept) {
  const IndexKeywords ik = restrict_plan(plan, fk);
  const auto order = indices_by_aggregation(ik, /*ascending=*/true);

  // Per index: (keyword, synonym) candidates by synonym rank, then by
  // keyword corpus frequency.
  std::vector<std::vector<std::pair<std::string, std::string>>> queues;
  for (int idx : order) {
    auto keywords = ik[idx];
    std::ranges::stable_sort(keywords, [&](const std::string& a, const std::string& b) {
      const auto ca = freq.corpus_count(a);
      const auto cb = freq.corpus_count(b);
      return ca != cb ? ca > cb : a < b;
    });
    std::size_t deepest = 0;
    for (const auto& k : keywords) deepest = std::max(deepest, lexicon.synonym_count(k));
    auto& q = queues.emplace_back();
    for (std::size_t rank = 1; rank <= deepest; ++rank) {
      for (const auto& k : keywords) {
        const auto& s = lexicon.synonym(k, rank);
        if (!s.empty()) q.emplace_back(k, s);
      }
    }
  }

  std::vector<std::size_t> cursor(queues.size(), 0);
  bool progressed = true;
  while (fk.size() < required && progressed) {
    progressed = false;
    for (std::size_t q = 0; q < queues.size() && fk.size() < required; ++q) {
      while (cursor[q] < queues[q].size()) {
        const auto& [source, synonym] = queues[q][cursor[q]++];
        if (fk.contains(synonym) || (accept && !accept(synonym))) continue;
        fk.entries.push_back({synonym, KeywordOrigin::synonym, source});
        progressed = true;
        break;
      }
    }
  }
  if (fk.size() < required) throw ShortfallError(required - fk.size(), fk);
}

void drop(AugmentedKeywords& fk, const std::string& word) {
  std::erase_if(fk.entries, [&](const FinalKeyword& e) { return e.word == word; });
}

void shrink(AugmentedKeywords& fk, std::size_t required, const PlacementPlan& plan,
            const IndexFrequencyTable& freq) {
  auto position = [&](const std::string& w) {
    for (std::size_t i = 0; i < fk.entries.size(); ++i) {
      if (fk.entries[i].word == w) return i;
    }
    return fk.entries.size();
  };
  // Least corpus-frequent first; among equals the later FK member goes first.
  auto weaker = [&](const std::string& a, const std::string& b) {
    const auto ca = freq.corpus_count(a);
    const auto cb = freq.corpus_count(b);
    return ca != cb ? ca < cb : position(a) > position(b);
  };

  while (fk.size() > required) {
    const IndexKeywords ik = restrict_plan(plan, fk);
    const auto order = indices_by_aggregation(ik, /*ascending=*/false);
    if (order.empty()) break;
    for (int idx : order) {
      if (fk.size() <= required) break;
      const auto victim = *std::ranges::min_element(ik[idx], weaker);
      drop(fk, victim);
    }
  }

  if (fk.size() > required) {
    auto rest = fk.words();
    std::ranges::sort(rest, weaker);
    for (const auto& w : rest) {
      if (fk.size() <= required) break;
      drop(fk, w);
    }
  }
}

}  // namespace

AugmentedKeywords rebalance(const AugmentedKeywords& keywords, std::size_t required,
                            const PlacementPlan& plan, const IndexFrequencyTable& frequencies,
                            const SynonymLexicon& lexicon, const WordFilter& accept) {
  AugmentedKeywords fk = keywords;
  if (fk.size() < required) {
    grow(fk, required, plan, frequencies, lexicon, accept);
  } else if (fk.size() > required) {
    shrink(fk, required, plan, frequencies);
  }
  return fk;
}

}  // namespace prose2poem
