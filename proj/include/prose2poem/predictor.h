#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "prose2poem/ngram.h"

namespace prose2poem {

struct Candidate {
  std::string token;
  double log_prob = 0.0;  // natural log

  bool operator==(const Candidate&) const = default;
};

struct MaskPrediction {
  std::size_t position = 0;
  std::vector<Candidate> candidates;  // descending log_prob, at most top_k

  bool operator==(const MaskPrediction&) const = default;
};

// Positions of the mask token, ascending.
std::vector<std::size_t> mask_positions(std::span<const std::string> tokens);

// Implementations are immutable and safe to call concurrently.
class MaskPredictor {
 public:
  virtual ~MaskPredictor() = default;

  // One prediction per mask, positions ascending. Throws NoMaskError when the
  // sequence has no mask and Error when top_k is zero.
  virtual std::vector<MaskPrediction> predict(std::span<const std::string> tokens,
                                              std::size_t top_k) const = 0;
  virtual std::string name() const = 0;
};

// Throws ProtocolError unless the predictions cover exactly the mask
// positions of `tokens` in ascending order, each with 1..top_k candidates
// that are non-empty, unique, finite, <= 0 and sorted descending.
void validate_predictions(std::span<const std::string> tokens, std::size_t top_k,
                          const std::vector<MaskPrediction>& predictions);

// Scores every corpus word at a mask by (4 P4 + 3 P3 + 2 P2) / 9 over its
// left context within the sequence (sentinel padded, other masks unknown),
// renormalized over words so the end sentinel is never proposed. Ties go to
// the lexicographically smaller token.
class NgramPredictor : public MaskPredictor {
 public:
  explicit NgramPredictor(const NgramModel& model);

  std::vector<MaskPrediction> predict(std::span<const std::string> tokens,
                                      std::size_t top_k) const override;
  std::string name() const override { return "ngram"; }

  // Normalized probability of every word id at `position`.
  std::vector<double> distribution(std::span<const std::string> tokens,
                                   std::size_t position) const;

 private:
  const NgramModel& model_;
};

}  // namespace prose2poem
