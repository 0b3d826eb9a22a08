#include "prose2poem/partitioning.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "prose2poem/text.h"

namespace prose2poem {

MaskedKeywordSequence::MaskedKeywordSequence() { slots.fill(std::string(kMaskToken)); }

bool MaskedKeywordSequence::is_mask(std::size_t slot) const { return slots.at(slot) == kMaskToken; }

std::size_t MaskedKeywordSequence::mask_count() const {
  return static_cast<std::size_t>(std::ranges::count(slots, std::string(kMaskToken)));
}

std::vector<std::string> MaskedKeywordSequence::filled() const {
  std::vector<std::string> out;
  for (const auto& s : slots) {
    if (s != kMaskToken) out.push_back(s);
  }
  return out;
}

double partition_score(double gap_sum, double association_mean) {
  if (gap_sum <= 0.0) return 0.5;
  const double x = std::log2(gap_sum) * association_mean;
  return 1.0 / (1.0 + std::exp(-x));
}

bool candidate_before(const PartitionCandidate& a, const PartitionCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.indices != b.indices) return a.indices < b.indices;
  return a.keywords < b.keywords;
}

std::size_t combination_count(const IndexKeywords& ik, std::size_t count) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  // ways[k]: selections of k keywords among the indices seen so far.
  std::vector<std::size_t> ways(count + 1, 0);
  ways[0] = 1;
  for (const auto& list : ik) {
    if (list.empty()) continue;
    for (std::size_t k = count; k >= 1; --k) {
      const std::size_t add =
          ways[k - 1] > kMax / list.size() ? kMax : ways[k - 1] * list.size();
      ways[k] = ways[k] > kMax - add ? kMax : ways[k] + add;
    }
  }
  return ways[count];
}

PartitionCandidate make_candidate(const std::vector<int>& indices,
                                  const std::vector<std::string>& keywords, Side side,
                                  const AssociationGraph& graph) {
  PartitionCandidate c;
  c.mks.side = side;
  c.indices = indices;
  c.keywords = keywords;
  for (std::size_t k = 0; k < indices.size(); ++k) c.mks.slots.at(indices[k] - 1) = keywords[k];
  double gaps = 0.0;
  double assoc = 0.0;
  for (std::size_t k = 1; k < indices.size(); ++k) {
    gaps += indices[k] - indices[k - 1];
    assoc += graph.score(keywords[k - 1], keywords[k]);
  }
  c.gap_sum = gaps;
  c.association_mean = indices.size() >= 2 ? assoc / static_cast<double>(indices.size() - 1) : 0.0;
  c.score = partition_score(c.gap_sum, c.association_mean);
  return c;
}

std::vector<PartitionCandidate> enumerate_candidates(const IndexKeywords& ik, std::size_t count,
                                                     Side side, const AssociationGraph& graph,
                                                     std::size_t cap) {
  std::vector<int> available;
  for (int i = 0; i < kMaxIndex; ++i) {
    if (!ik[i].empty()) available.push_back(i + 1);
  }
  if (count > available.size()) {
    throw InfeasibleError("need " + std::to_string(count) + " keyword indices but only " +
                          std::to_string(available.size()) + " hold keywords");
  }
  if (cap == 0) throw Error("candidate cap must be positive");

  struct Partial {
    std::vector<int> indices;
    std::vector<std::string> keywords;
    double gaps = 0.0;
    double assoc = 0.0;

    double priority() const {
      return indices.size() < 2 ? 0.0 : gaps * (assoc / static_cast<double>(indices.size() - 1));
    }
  };

  std::vector<Partial> level(1);
  for (std::size_t depth = 0; depth < count; ++depth) {
    const std::size_t still_needed = count - depth - 1;
    std::vector<Partial> next;
    for (const auto& p : level) {
      const int last = p.indices.empty() ? 0 : p.indices.back();
      for (std::size_t a = 0; a < available.size(); ++a) {
        const int idx = available[a];
        if (idx <= last) continue;
        if (available.size() - a - 1 < still_needed) break;
        for (const auto& kw : ik[idx - 1]) {
          Partial q = p;
          if (!q.indices.empty()) {
            q.gaps += idx - q.indices.back();
            q.assoc += graph.score(q.keywords.back(), kw);
          }
          q.indices.push_back(idx);
          q.keywords.push_back(kw);
          next.push_back(std::move(q));
        }
      }
    }
    if (next.size() > cap) {
      std::ranges::stable_sort(next, [](const Partial& x, const Partial& y) {
        const double px = x.priority();
        const double py = y.priority();
        if (px != py) return px > py;
        if (x.indices != y.indices) return x.indices < y.indices;
        return x.keywords < y.keywords;
      });
      next.resize(cap);
    }
    level = std::move(next);
  }

  std::vector<PartitionCandidate> out;
  out.reserve(level.size());
  for (const auto& p : level) out.push_back(make_candidate(p.indices, p.keywords, side, graph));
  std::ranges::sort(out, candidate_before);
  return out;
}

std::vector<SelectedPair> select_partitions(const std::vector<PartitionCandidate>& first,
                                            const std::vector<PartitionCandidate>& second,
                                            std::size_t couplets, const SelectOptions& options) {
  std::set<std::string> used;
  std::vector<bool> taken_first(first.size(), false);
  std::vector<bool> taken_second(second.size(), false);

  auto pick = [&](const std::vector<PartitionCandidate>& list, std::vector<bool>& taken,
                  std::size_t couplet, std::size_t side) -> const PartitionCandidate& {
    const bool reserve = couplet < options.reserve_last_slot.size() &&
                         options.reserve_last_slot[couplet][side];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& c = list[i];
      const bool keyword_free = c.keywords.empty();
      if (taken[i] && !keyword_free) continue;
      if (reserve && !c.mks.is_mask(kMaxIndex - 1)) continue;
      if (!options.allow_reuse &&
          std::ranges::any_of(c.keywords, [&](const std::string& k) { return used.contains(k); })) {
        continue;
      }
      taken[i] = true;
      used.insert(c.keywords.begin(), c.keywords.end());
      return c;
    }
    throw InfeasibleError("not enough " + std::string(side == 0 ? "first" : "second") +
                          "-hemistich candidates for " + std::to_string(couplets) + " couplet(s)");
  };

  std::vector<SelectedPair> out;
  for (std::size_t c = 0; c < couplets; ++c) {
    const auto& a = pick(first, taken_first, c, 0);
    const auto& b = pick(second, taken_second, c, 1);
    out.push_back({CoupletMks{a.mks, b.mks}, a.score, b.score});
  }
  return out;
}

}  // namespace prose2poem
