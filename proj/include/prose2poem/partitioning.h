#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "prose2poem/assoc_graph.h"
#include "prose2poem/corpus.h"
#include "prose2poem/placement.h"

namespace prose2poem {

enum class Side { first, second };

// A 10-slot hemistich template. Every slot holds a keyword, a rhyme word, or
// the mask symbol.
struct MaskedKeywordSequence {
  std::array<std::string, kMaxIndex> slots;
  Side side = Side::first;

  MaskedKeywordSequence();
  bool is_mask(std::size_t slot) const;
  std::size_t mask_count() const;
  // Non-mask tokens in slot order.
  std::vector<std::string> filled() const;

  bool operator==(const MaskedKeywordSequence&) const = default;
};

struct CoupletMks {
  MaskedKeywordSequence first;
  MaskedKeywordSequence second;

  bool operator==(const CoupletMks&) const = default;
};

struct PartitionCandidate {
  MaskedKeywordSequence mks;
  std::vector<int> indices;           // 1-based keyword slots, ascending
  std::vector<std::string> keywords;  // parallel to indices
  double gap_sum = 0.0;               // d_s
  double association_mean = 0.0;     // g_m
  double score = 0.5;                 // PS
};

// PS = sigmoid(log2(d_s) * g_m). d_s == 0 marks a sequence with fewer than
// two keywords, which scores sigmoid(0) = 0.5.
double partition_score(double gap_sum, double association_mean);

// Candidate ranking: score descending, then index vector, then keywords,
// both lexicographically ascending.
bool candidate_before(const PartitionCandidate& a, const PartitionCandidate& b);

// Number of ways to pick `count` distinct indices with one keyword each.
std::size_t combination_count(const IndexKeywords& ik, std::size_t count);

// All MKSs holding exactly `count` keywords at distinct IK-sanctioned indices,
// ranked by candidate_before. Built index by index; when a level holds more
// than `cap` partial sequences only the best `cap` by d_s * g_m survive. No
// pruning happens when combination_count(ik, count) <= cap, so the result is
// then exhaustive. Throws InfeasibleError when fewer than `count` indices
// hold keywords.
std::vector<PartitionCandidate> enumerate_candidates(const IndexKeywords& ik, std::size_t count,
                                                     Side side, const AssociationGraph& graph,
                                                     std::size_t cap = 20000);

// Builds a fully scored candidate from explicit (index, keyword) picks.
PartitionCandidate make_candidate(const std::vector<int>& indices,
                                  const std::vector<std::string>& keywords, Side side,
                                  const AssociationGraph& graph);

struct SelectOptions {
  // Allow one keyword in several selected sequences.
  bool allow_reuse = false;
  // Per couplet, whether slot 10 of the first/second hemistich must stay free
  // for a rhyme. Missing entries mean no reservation.
  std::vector<std::array<bool, 2>> reserve_last_slot;
};

struct SelectedPair {
  CoupletMks pair;
  double first_score = 0.0;
  double second_score = 0.0;
};

// Picks `couplets` candidates per side in rank order and zips them rank by
// rank. Without reuse, selection walks couplets in order (first side, then
// second) and skips candidates sharing a keyword with earlier picks;
// keyword-free candidates may be picked repeatedly. Throws InfeasibleError
// when a side runs out of candidates.
std::vector<SelectedPair> select_partitions(const std::vector<PartitionCandidate>& first,
                                            const std::vector<PartitionCandidate>& second,
                                            std::size_t couplets,
                                            const SelectOptions& options = {});

}  // namespace prose2poem
