#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prose2poem/corpus.h"
#include "prose2poem/error.h"

namespace prose2poem {

// Index i in 1..10 -> keywords suggested for it, in placement order.
using IndexKeywords = std::array<std::vector<std::string>, kMaxIndex>;

struct PlacementPlan {
  std::vector<std::string> keywords;  // in placement order
  std::vector<int> ap;                // suggested index per keyword, 1..10
  IndexKeywords ik;                   // inverse image of ap

  std::size_t size() const { return ap.size(); }
  std::size_t aggregation(int index) const { return ik.at(index - 1).size(); }
  std::size_t placed() const;
};

// Lower indices are the right-hand side of a Persian hemistich (read right to
// left), upper indices the left-hand side.
enum class NeighborSide { lower = 0, upper = 1 };

// Neighbourhood of index i given the positions suggested so far. When a side
// has no occupied index, the virtual boundary (0 or 11) acts as the neighbour
// with aggregation 0.
struct NeighborContext {
  int index = 1;
  int lower_distance = 1;          // X
  std::size_t lower_aggregation = 0;  // W
  int upper_distance = 1;          // Z
  std::size_t upper_aggregation = 0;  // Y
  std::uint64_t frequency = 0;     // F = IF_i(keyword)
  std::size_t index_aggregation = 0;  // G
  std::size_t lower_total = 0;     // nrl(i, lower)
  std::size_t upper_total = 0;     // nrl(i, upper)
};

struct PlacementOptions {
  // Evaluate the upper-side score with the lower distance in its numerator,
  // as literally printed in the source formula, instead of the symmetric
  // upper distance.
  bool literal_upper_numerator = false;
};

// Number of suggested positions strictly below (lower) or above (upper) i.
std::size_t nrl(int index, NeighborSide side, std::span<const int> ap);

// (X + 1) / ((nrl_lower + 1) * (W + 1))
double rns(int lower_distance, std::size_t lower_aggregation, std::size_t lower_total);
// (Z + 1) / ((nrl_upper + 1) * (Y + 1))
double lns(int upper_distance, std::size_t upper_aggregation, std::size_t upper_total);

NeighborContext neighbor_context(int index, std::span<const int> ap, std::uint64_t frequency);

// |rns - lns| / (G + 1) * log10(F + 1), or nullopt (excluded) when F == 0.
std::optional<double> index_score(const NeighborContext& ctx, const PlacementOptions& options = {});

class UnplaceableKeywordError : public Error {
 public:
  explicit UnplaceableKeywordError(const std::string& keyword)
      : Error("keyword never occurs at hemistich positions 1..10: " + keyword), keyword_(keyword) {}
  const std::string& keyword() const { return keyword_; }

 private:
  std::string keyword_;
};

// Greedy sequential placement: each keyword in turn goes to the argmax of its
// index scores against the positions chosen so far (lowest index on ties).
PlacementPlan place_keywords(std::span<const std::string> keywords,
                             const IndexFrequencyTable& frequencies,
                             const PlacementOptions& options = {});

}  // namespace prose2poem
