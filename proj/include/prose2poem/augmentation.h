#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "prose2poem/corpus.h"
#include "prose2poem/error.h"
#include "prose2poem/keywords.h"
#include "prose2poem/lexicon.h"
#include "prose2poem/placement.h"

namespace prose2poem {

// Keywords per first-hemistich (rsv_k) and second-hemistich (lsv_k) masked
// sequence. At most 9 each, so a slot always remains for a mask or rhyme.
struct SideCapacity {
  std::size_t first = 2;
  std::size_t second = 2;

  void validate() const;
  bool operator==(const SideCapacity&) const = default;
};

enum class KeywordOrigin { original, synonym };

struct FinalKeyword {
  std::string word;
  KeywordOrigin origin = KeywordOrigin::original;
  std::string source;  // the keyword this synonym was derived from

  bool operator==(const FinalKeyword&) const = default;
};

// FK: duplicate-free final keyword list with provenance.
struct AugmentedKeywords {
  std::vector<FinalKeyword> entries;

  std::size_t size() const { return entries.size(); }
  bool contains(std::string_view word) const;
  std::vector<std::string> words() const;
  const FinalKeyword* find(std::string_view word) const;

  bool operator==(const AugmentedKeywords&) const = default;
};

// FK = K u {Syn(K_i, j) : 1 <= j <= F_i}. Originals come first in K order,
// then synonyms in (i, j) order; a synonym that is already present keeps its
// earlier provenance.
AugmentedKeywords expand_synonyms(const KeywordSet& keywords, const SynonymLexicon& lexicon);

// C = ceil(placed keywords / 10). Throws Error for an empty plan.
std::size_t couplet_count(const PlacementPlan& plan);

// rkn = C * rsv_k + C * lsv_k.
std::size_t required_keywords(std::size_t couplets, const SideCapacity& capacity);

class ShortfallError : public Error {
 public:
  ShortfallError(std::size_t deficit, AugmentedKeywords partial)
      : Error("synonym lexicon exhausted " + std::to_string(deficit) +
              " keyword(s) short of the required count"),
        deficit_(deficit),
        partial_(std::move(partial)) {}

  std::size_t deficit() const { return deficit_; }
  // The keyword list as far as re-augmentation got.
  const AugmentedKeywords& partial() const { return partial_; }

 private:
  std::size_t deficit_;
  AugmentedKeywords partial_;
};

// Decides whether a synonym may join FK (e.g. only words that can be placed).
using WordFilter = std::function<bool(const std::string&)>;

// Resizes FK to exactly `required` members.
//
// Growing: indices of the plan that host FK members are visited from least
// to most aggregated (ties: lowest index); each contributes Syn(k, 1) of its
// most corpus-frequent keyword k. Further rounds try later synonym ranks and
// the other keywords of each index until the lexicon is exhausted, which
// raises ShortfallError.
//
// Shrinking: indices are visited from most to least aggregated (ties: lowest
// index) and each loses its least corpus-frequent FK member; rounds repeat
// with refreshed aggregation. Members absent from the plan are dropped last,
// least frequent first.
AugmentedKeywords rebalance(const AugmentedKeywords& keywords, std::size_t required,
                            const PlacementPlan& plan, const IndexFrequencyTable& frequencies,
                            const SynonymLexicon& lexicon, const WordFilter& accept = {});

}  // namespace prose2poem
