#include "prose2poem/decoder.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "prose2poem/text.h"

namespace prose2poem {

void DecoderConfig::validate() const {
  if (beam_depth == 0) throw Error("beam depth must be at least 1");
  if (top_k == 0) throw Error("top_k must be at least 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must lie in [0, 1]");
}

double sf_score(double f, double t, double b) { return (4.0 * f + 3.0 * t + 2.0 * b) / 10.0; }

double fluency(const NgramModel& model, const std::vector<std::string>& previous,
               const std::string& word) {
  std::vector<std::string> ctx(3, std::string(kBeginToken));
  for (const auto& t : previous) {
    ctx.erase(ctx.begin());
    ctx.push_back(t);
  }
  const std::span<const std::string> all(ctx);
  const double f = model.prob(4, all.subspan(0), word);
  const double t = model.prob(3, all.subspan(1), word);
  const double b = model.prob(2, all.subspan(2), word);
  return sf_score(f, t, b);
}

namespace {

struct Hypothesis {
  std::vector<std::string> first;
  std::vector<std::string> second;
  std::vector<std::string> choices;
  std::array<std::uint32_t, 3> context{};  // last three ids of the current hemistich
  double score = 0.0;
};

struct Expansion {
  double score;
  std::size_t parent;
  std::size_t option;
};

bool usable(const std::string& token) {
  if (token.empty() || is_reserved_token(token)) return false;
  return tokenize(token) == std::vector<std::string>{token};
}

struct Option {
  std::string token;
  std::uint32_t id;
  double q;
};

void push_context(std::array<std::uint32_t, 3>& ctx, std::uint32_t id) {
  ctx[0] = ctx[1];
  ctx[1] = ctx[2];
  ctx[2] = id;
}

}  // namespace

DecodeResult beam_decode(const CoupletMks& pair, const MaskPredictor& predictor,
                         const NgramModel& model, const DecoderConfig& config) {
  config.validate();
  if (model.max_order() < 4) throw Error("decoder needs a 4-gram model");

  std::vector<Hypothesis> beam(1);
  for (int side = 0; side < 2; ++side) {
    const auto& mks = side == 0 ? pair.first : pair.second;
    const std::vector<std::string> tokens(mks.slots.begin(), mks.slots.end());
    for (auto& h : beam) h.context.fill(model.begin_id());

    std::vector<std::vector<Option>> options(tokens.size());
    if (mks.mask_count() > 0) {
      for (const auto& p : predictor.predict(tokens, config.top_k)) {
        auto& list = options.at(p.position);
        for (const auto& c : p.candidates) {
          if (!usable(c.token)) continue;
          if (config.vocabulary_only && !model.word_id(c.token)) continue;
          list.push_back({c.token, model.outcome_id(c.token), std::exp(c.log_prob)});
        }
        if (list.empty()) {
          throw DecodingStuckError("no usable candidate for mask at slot " +
                                   std::to_string(p.position + 1));
        }
        double total = 0.0;
        for (const auto& o : list) total += o.q;
        for (auto& o : list) o.q = total > 0.0 ? o.q / total : 1.0 / static_cast<double>(list.size());
      }
    }

    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
      if (!mks.is_mask(pos)) {
        const auto id = model.context_id(tokens[pos]);
        for (auto& h : beam) {
          (side == 0 ? h.first : h.second).push_back(tokens[pos]);
          push_context(h.context, id);
        }
        continue;
      }
      const auto& opts = options[pos];
      if (opts.empty()) {
        throw DecodingStuckError("predictor returned nothing for slot " + std::to_string(pos + 1));
      }
      std::vector<Expansion> expansions;
      expansions.reserve(beam.size() * opts.size());
      for (std::size_t h = 0; h < beam.size(); ++h) {
        const auto& ctx = beam[h].context;
        for (std::size_t o = 0; o < opts.size(); ++o) {
          const double f = model.prob_id(std::span<const std::uint32_t>(ctx.data(), 3), opts[o].id);
          const double t = model.prob_id(std::span<const std::uint32_t>(ctx.data() + 1, 2), opts[o].id);
          const double b = model.prob_id(std::span<const std::uint32_t>(ctx.data() + 2, 1), opts[o].id);
          const double gain = config.lambda * opts[o].q + (1.0 - config.lambda) * sf_score(f, t, b);
          expansions.push_back({beam[h].score + gain, h, o});
        }
      }
      // Parents share a choice length, so comparing the parent's choices and
      // then the new token orders the extended choice sequences.
      auto before = [&](const Expansion& a, const Expansion& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.parent != b.parent && beam[a.parent].choices != beam[b.parent].choices) {
          return beam[a.parent].choices < beam[b.parent].choices;
        }
        return opts[a.option].token < opts[b.option].token;
      };
      const std::size_t keep = std::min(config.beam_depth, expansions.size());
      std::partial_sort(expansions.begin(), expansions.begin() + static_cast<std::ptrdiff_t>(keep),
                        expansions.end(), before);
      std::vector<Hypothesis> next;
      next.reserve(keep);
      for (std::size_t i = 0; i < keep; ++i) {
        const auto& e = expansions[i];
        Hypothesis n = beam[e.parent];
        n.score = e.score;
        (side == 0 ? n.first : n.second).push_back(opts[e.option].token);
        n.choices.push_back(opts[e.option].token);
        push_context(n.context, opts[e.option].id);
        next.push_back(std::move(n));
      }
      beam = std::move(next);
    }
  }

  auto better = [](const Hypothesis& a, const Hypothesis& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.choices < b.choices;
  };
  const auto& best = *std::min_element(beam.begin(), beam.end(), better);
  return {Couplet{best.first, best.second}, best.score, best.choices};
}

}  // namespace prose2poem
