#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prose2poem/corpus.h"
#include "prose2poem/error.h"
#include "prose2poem/ngram.h"
#include "prose2poem/partitioning.h"
#include "prose2poem/predictor.h"

namespace prose2poem {

struct DecoderConfig {
  std::size_t beam_depth = 8;
  std::size_t top_k = 50;
  // Weight of the predictor's probability against the n-gram fluency score.
  double lambda = 0.0;
  // Drop predictor candidates the n-gram model has never seen.
  bool vocabulary_only = false;
  std::uint64_t seed = 0;

  // Throws Error for beam_depth or top_k of zero or lambda outside [0, 1].
  void validate() const;
};

// (4f + 3t + 2b) / 10.
double sf_score(double f, double t, double b);

// sf_score of `word` after `previous` (the hemistich so far), with f, t, b the
// order 4, 3, 2 conditionals over a begin-sentinel padded context.
double fluency(const NgramModel& model, const std::vector<std::string>& previous,
               const std::string& word);

class DecodingStuckError : public Error {
 public:
  using Error::Error;
};

struct DecodeResult {
  Couplet couplet;
  double score = 0.0;
  std::vector<std::string> choices;  // tokens chosen at the masks, in fill order
};

// Fills the masks of both hemistichs, first hemistich left to right, then the
// second. The predictor is asked once per hemistich that has masks. Each
// filled mask adds lambda * q + (1 - lambda) * fluency, where q is the
// candidate's probability renormalized over the returned candidates. The
// beam keeps the best beam_depth hypotheses (ties: lexicographically smaller
// choice sequence). Non-mask slots are copied verbatim.
//
// Throws DecodingStuckError when a mask has no usable candidate; predictor
// errors propagate.
DecodeResult beam_decode(const CoupletMks& pair, const MaskPredictor& predictor,
                         const NgramModel& model, const DecoderConfig& config);

}  // namespace prose2poem
