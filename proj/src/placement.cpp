#include "prose2poem/placement.h"

#include <cmath>

namespace prose2poem {

std::size_t PlacementPlan::placed() const {
  std::size_t n = 0;
  for (const auto& list : ik) n += list.size();
  return n;
}

std::size_t nrl(int index, NeighborSide side, std::span<const int> ap) {
  std::size_t n = 0;
  for (int a : ap) {
    if (side == NeighborSide::lower ? a < index : a > index) ++n;
  }
  return n;
}

double rns(int lower_distance, std::size_t lower_aggregation, std::size_t lower_total) {
  return (lower_distance + 1.0) /
         ((static_cast<double>(lower_total) + 1.0) * (static_cast<double>(lower_aggregation) + 1.0));
}

double lns(int upper_distance, std::size_t upper_aggregation, std::size_t upper_total) {
  return (upper_distance + 1.0) /
         ((static_cast<double>(upper_total) + 1.0) * (static_cast<double>(upper_aggregation) + 1.0));
}

NeighborContext neighbor_context(int index, std::span<const int> ap, std::uint64_t frequency) {
  std::array<std::size_t, kMaxIndex + 2> occupancy{};
  for (int a : ap) ++occupancy.at(a);

  NeighborContext ctx;
  ctx.index = index;
  ctx.frequency = frequency;
  ctx.index_aggregation = occupancy[index];

  int lower = index - 1;
  while (lower > 0 && occupancy[lower] == 0) --lower;
  ctx.lower_distance = index - lower;
  ctx.lower_aggregation = lower > 0 ? occupancy[lower] : 0;

  int upper = index + 1;
  while (upper <= kMaxIndex && occupancy[upper] == 0) ++upper;
  ctx.upper_distance = upper - index;
  ctx.upper_aggregation = upper <= kMaxIndex ? occupancy[upper] : 0;

  ctx.lower_total = nrl(index, NeighborSide::lower, ap);
  ctx.upper_total = nrl(index, NeighborSide::upper, ap);
  return ctx;
}

std::optional<double> index_score(const NeighborContext& ctx, const PlacementOptions& options) {
  if (ctx.frequency == 0) return std::nullopt;
  const double right = rns(ctx.lower_distance, ctx.lower_aggregation, ctx.lower_total);
  const int upper_numerator =
      options.literal_upper_numerator ? ctx.lower_distance : ctx.upper_distance;
  const double left = lns(upper_numerator, ctx.upper_aggregation, ctx.upper_total);
  return std::abs(right - left) / (static_cast<double>(ctx.index_aggregation) + 1.0) *
         std::log10(static_cast<double>(ctx.frequency) + 1.0);
}

PlacementPlan place_keywords(std::span<const std::string> keywords,
                             const IndexFrequencyTable& frequencies,
                             const PlacementOptions& options) {
  PlacementPlan plan;
  for (const auto& keyword : keywords) {
    int best_index = 0;
    double best_score = 0.0;
    for (int i = 1; i <= kMaxIndex; ++i) {
      const auto score =
          index_score(neighbor_context(i, plan.ap, frequencies.count(i, keyword)), options);
      if (!score) continue;
      if (best_index == 0 || *score > best_score) {
        best_index = i;
        best_score = *score;
      }
    }
    if (best_index == 0) throw UnplaceableKeywordError(keyword);
    plan.keywords.push_back(keyword);
    plan.ap.push_back(best_index);
    plan.ik[best_index - 1].push_back(keyword);
  }
  return plan;
}

}  // namespace prose2poem
