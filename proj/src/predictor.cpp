#include "prose2poem/predictor.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "prose2poem/error.h"
#include "prose2poem/text.h"

namespace prose2poem {

std::vector<std::size_t> mask_positions(std::span<const std::string> tokens) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == kMaskToken) out.push_back(i);
  }
  return out;
}

void validate_predictions(std::span<const std::string> tokens, std::size_t top_k,
                          const std::vector<MaskPrediction>& predictions) {
  const auto masks = mask_positions(tokens);
  if (predictions.size() != masks.size()) {
    throw ProtocolError("expected " + std::to_string(masks.size()) + " predictions, got " +
                        std::to_string(predictions.size()));
  }
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const auto& p = predictions[i];
    const std::string where = "prediction for position " + std::to_string(p.position);
    if (p.position != masks[i]) {
      throw ProtocolError("prediction " + std::to_string(i) + " is for position " +
                          std::to_string(p.position) + ", expected " + std::to_string(masks[i]));
    }
    if (p.candidates.empty()) throw ProtocolError(where + " has no candidates");
    if (p.candidates.size() > top_k) {
      throw ProtocolError(where + " has " + std::to_string(p.candidates.size()) +
                          " candidates, more than top_k " + std::to_string(top_k));
    }
    std::set<std::string> seen;
    for (std::size_t c = 0; c < p.candidates.size(); ++c) {
      const auto& cand = p.candidates[c];
      if (cand.token.empty()) throw ProtocolError(where + " has an empty token");
      if (!std::isfinite(cand.log_prob)) throw ProtocolError(where + " has a non-finite log_prob");
      if (cand.log_prob > 0.0) throw ProtocolError(where + " has a positive log_prob");
      if (!seen.insert(cand.token).second) {
        throw ProtocolError(where + " repeats token " + cand.token);
      }
      if (c > 0 && cand.log_prob > p.candidates[c - 1].log_prob) {
        throw ProtocolError(where + " is not sorted by descending log_prob");
      }
    }
  }
}

NgramPredictor::NgramPredictor(const NgramModel& model) : model_(model) {
  if (model.word_count() == 0) throw Error("n-gram model has no words");
}

std::vector<double> NgramPredictor::distribution(std::span<const std::string> tokens,
                                                 std::size_t position) const {
  if (position >= tokens.size()) throw Error("mask position out of range");
  // Left context of length max_order - 1, padded with begin sentinels.
  const int top = model_.max_order();
  std::vector<std::uint32_t> left(top - 1, model_.begin_id());
  for (std::size_t i = 0; i < position; ++i) {
    left.erase(left.begin());
    left.push_back(model_.context_id(tokens[i]));
  }

  static constexpr double kWeights[] = {0.0, 0.0, 2.0, 3.0, 4.0};
  std::vector<double> mixed(model_.outcome_count(), 0.0);
  std::vector<double> dist;
  double weight_sum = 0.0;
  for (int k = 2; k <= top; ++k) {
    const std::span<const std::uint32_t> ctx(left.data() + left.size() - (k - 1), k - 1);
    model_.distribution(k, ctx, dist);
    for (std::size_t w = 0; w < mixed.size(); ++w) mixed[w] += kWeights[k] * dist[w];
    weight_sum += kWeights[k];
  }
  mixed.pop_back();  // end sentinel
  double total = 0.0;
  for (auto& p : mixed) {
    p /= weight_sum;
    total += p;
  }
  for (auto& p : mixed) p /= total;
  return mixed;
}

std::vector<MaskPrediction> NgramPredictor::predict(std::span<const std::string> tokens,
                                                    std::size_t top_k) const {
  if (top_k == 0) throw Error("top_k must be at least 1");
  const auto masks = mask_positions(tokens);
  if (masks.empty()) throw NoMaskError();

  std::vector<MaskPrediction> out;
  std::vector<std::uint32_t> order(model_.word_count());
  for (auto pos : masks) {
    const auto probs = distribution(tokens, pos);
    std::iota(order.begin(), order.end(), 0u);
    const std::size_t k = std::min(top_k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                        if (probs[a] != probs[b]) return probs[a] > probs[b];
                        return model_.word(a) < model_.word(b);
                      });
    MaskPrediction p;
    p.position = pos;
    for (std::size_t i = 0; i < k; ++i) {
      p.candidates.push_back({model_.word(order[i]), std::min(0.0, std::log(probs[order[i]]))});
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace prose2poem
