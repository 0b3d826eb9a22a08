#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "fixture.h"
#include "oracles.h"
#include "prose2poem/decoder.h"
#include "prose2poem/error.h"
#include "prose2poem/ngram.h"
#include "prose2poem/predictor.h"
#include "prose2poem/random.h"

namespace prose2poem {
namespace {

using Words = std::vector<std::string>;

Corpus tiny() { return Corpus::from_couplets({{{"a", "b"}, {"a", "b"}}}); }

TEST(NgramModel, HandCounts) {
  const auto m = NgramModel::build(tiny());
  EXPECT_EQ(m.count(Words{"a", "b"}), 2u);
  EXPECT_EQ(m.count(Words{"b", "a"}), 0u);
  EXPECT_EQ(m.count(Words{"<s>", "a"}), 2u);
  EXPECT_EQ(m.count(Words{"b", "</s>"}), 2u);
  EXPECT_EQ(m.count(Words{"a"}), 2u);
  EXPECT_EQ(m.count(Words{"<s>"}), 2u);
  EXPECT_EQ(m.total_unigrams(), 8u);
  EXPECT_EQ(m.outcome_count(), 3u);
}

TEST(NgramModel, AddOneSmoothing) {
  const auto m = NgramModel::build(tiny());
  const double v = static_cast<double>(m.outcome_count());
  EXPECT_DOUBLE_EQ(m.prob(2, Words{"a"}, "b"), 3.0 / (2.0 + v));
  EXPECT_DOUBLE_EQ(m.prob(2, Words{"a"}, "a"), 1.0 / (2.0 + v));
  EXPECT_DOUBLE_EQ(m.prob(2, Words{"zz"}, "a"), 1.0 / v);
  EXPECT_DOUBLE_EQ(m.prob(3, Words{"a", "[MASK]"}, "b"), 1.0 / v);
  EXPECT_DOUBLE_EQ(m.prob(2, Words{"a"}, "unknown"), 1.0 / (2.0 + v));
  EXPECT_THROW(m.prob(1, Words{}, "a"), Error);
  EXPECT_THROW(m.prob(3, Words{"a"}, "a"), Error);
  EXPECT_THROW(NgramModel::build(tiny(), 5), Error);
}

TEST(NgramModel, ConditionalsSumToOne) {
  const auto& r = fixture::shared_resources();
  const auto& m = r.ngram;
  std::vector<double> dist;
  std::vector<std::uint32_t> ctx = {m.begin_id(), m.begin_id(), m.context_id("دل")};
  for (int order = 2; order <= 4; ++order) {
    m.distribution(order, std::span(ctx).subspan(4 - order), dist);
    EXPECT_NEAR(std::accumulate(dist.begin(), dist.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(NgramModel, CountsMatchOracle) {
  const auto f = fixture::make_fixture(60, 11);
  const auto corpus = Corpus::from_couplets(f.couplets);
  const auto m = NgramModel::build(corpus);
  for (std::size_t order = 2; order <= 4; ++order) {
    const auto want = oracle::count_ngrams(f.couplets, order);
    std::map<Words, std::uint64_t> ctx_totals;
    for (const auto& [gram, n] : want) {
      ASSERT_EQ(m.count(gram), n);
      ctx_totals[Words(gram.begin(), gram.end() - 1)] += n;
    }
    for (const auto& [ctx, n] : ctx_totals) ASSERT_EQ(m.context_total(ctx), n);
  }
}

TEST(NgramModel, SerializeRoundTrip) {
  const auto& m = fixture::shared_resources().ngram;
  const auto back = NgramModel::deserialize(m.serialize(), "mem");
  EXPECT_EQ(back.serialize(), m.serialize());
  EXPECT_EQ(back.corpus_hash(), m.corpus_hash());
  const Words ctx = {"<s>", "و", "دل"};
  EXPECT_EQ(back.prob(4, ctx, "عشق"), m.prob(4, ctx, "عشق"));
  EXPECT_THROW(NgramModel::deserialize(m.serialize().substr(0, 100), "mem"), DataError);
}

TEST(NgramPredictor, ContractAndOrdering) {
  const auto& r = fixture::shared_resources();
  const NgramPredictor p(r.ngram);
  const Words tokens = {"دل", "[MASK]", "و", "[MASK]"};
  const auto preds = p.predict(tokens, 5);
  ASSERT_EQ(preds.size(), 2u);
  EXPECT_EQ(preds[0].position, 1u);
  EXPECT_EQ(preds[1].position, 3u);
  EXPECT_NO_THROW(validate_predictions(tokens, 5, preds));
  EXPECT_EQ(p.predict(tokens, 1)[0].candidates.size(), 1u);
  EXPECT_EQ(p.predict(tokens, 1)[0].candidates[0], preds[0].candidates[0]);
  for (const auto& c : preds[0].candidates) EXPECT_NE(c.token, "</s>");
  EXPECT_THROW(p.predict(Words{"دل"}, 3), NoMaskError);
  EXPECT_THROW(p.predict(tokens, 0), Error);
}

TEST(NgramPredictor, MixtureMatchesHandInterpolation) {
  const auto& m = fixture::shared_resources().ngram;
  const NgramPredictor p(m);
  const Words tokens = {"از", "دل", "[MASK]"};
  const auto dist = p.distribution(tokens, 2);
  const Words c4 = {"<s>", "از", "دل"}, c3 = {"از", "دل"}, c2 = {"دل"};
  std::vector<double> raw;
  double total = 0.0;
  for (std::uint32_t id = 0; id < m.word_count(); ++id) {
    const auto& w = m.word(id);
    raw.push_back((4 * m.prob(4, c4, w) + 3 * m.prob(3, c3, w) + 2 * m.prob(2, c2, w)) / 9);
    total += raw.back();
  }
  ASSERT_EQ(dist.size(), raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_NEAR(dist[i], raw[i] / total, 1e-12);
  const auto top = p.predict(tokens, 3)[0].candidates;
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return raw[a] != raw[b] ? raw[a] > raw[b] : m.word(a) < m.word(b);
  });
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(top[k].token, m.word(static_cast<std::uint32_t>(order[k])));
    EXPECT_NEAR(top[k].log_prob, std::log(raw[order[k]] / total), 1e-9);
  }
}

TEST(ValidatePredictions, RejectsViolations) {
  const Words tokens = {"a", "[MASK]"};
  auto ok = std::vector<MaskPrediction>{{1, {{"x", -0.1}, {"y", -0.5}}}};
  EXPECT_NO_THROW(validate_predictions(tokens, 2, ok));
  auto unsorted = std::vector<MaskPrediction>{{1, {{"x", -0.5}, {"y", -0.1}}}};
  EXPECT_THROW(validate_predictions(tokens, 2, unsorted), ProtocolError);
  EXPECT_THROW(validate_predictions(tokens, 1, ok), ProtocolError);
  auto positive = std::vector<MaskPrediction>{{1, {{"x", 0.5}}}};
  EXPECT_THROW(validate_predictions(tokens, 2, positive), ProtocolError);
  auto wrong_pos = std::vector<MaskPrediction>{{0, {{"x", -0.1}}}};
  EXPECT_THROW(validate_predictions(tokens, 2, wrong_pos), ProtocolError);
  auto dup = std::vector<MaskPrediction>{{1, {{"x", -0.1}, {"x", -0.2}}}};
  EXPECT_THROW(validate_predictions(tokens, 2, dup), ProtocolError);
  auto empty = std::vector<MaskPrediction>{{1, {}}};
  EXPECT_THROW(validate_predictions(tokens, 2, empty), ProtocolError);
  EXPECT_THROW(validate_predictions(tokens, 2, {}), ProtocolError);
}

// Fixed candidates per position, for decoder tests.
class TablePredictor : public MaskPredictor {
 public:
  explicit TablePredictor(std::vector<Candidate> candidates) : candidates_(std::move(candidates)) {}
  std::vector<MaskPrediction> predict(std::span<const std::string> tokens,
                                      std::size_t top_k) const override {
    std::vector<MaskPrediction> out;
    for (auto pos : mask_positions(tokens)) {
      MaskPrediction p{pos, candidates_};
      if (p.candidates.size() > top_k) p.candidates.resize(top_k);
      out.push_back(p);
    }
    if (out.empty()) throw NoMaskError();
    return out;
  }
  std::string name() const override { return "table"; }

 private:
  std::vector<Candidate> candidates_;
};

TEST(SfScore, HandValues) {
  EXPECT_DOUBLE_EQ(sf_score(0, 0, 0), 0.0);
  EXPECT_NEAR(sf_score(1, 1, 1), 0.9, 1e-12);
  EXPECT_NEAR(sf_score(0.2, 0.4, 0.6), 0.32, 1e-12);
  EXPECT_NEAR(sf_score(0.2, 0.4, 0.6), oracle::sf(0.2, 0.4, 0.6), 1e-12);
}

CoupletMks template_of(const Words& first, const Words& second) {
  CoupletMks p;
  for (std::size_t i = 0; i < 10; ++i) {
    p.first.slots[i] = i < first.size() ? first[i] : "[MASK]";
    p.second.slots[i] = i < second.size() ? second[i] : "[MASK]";
  }
  p.second.side = Side::second;
  return p;
}

TEST(BeamDecode, NoMasksCopiesVerbatim) {
  const auto& r = fixture::shared_resources();
  const Words a = {"دل", "و", "جان", "از", "تو", "به", "در", "که", "با", "یار"};
  const Words b = {"گل", "و", "بلبل", "از", "تو", "به", "در", "که", "با", "کنار"};
  const auto out = beam_decode(template_of(a, b), NgramPredictor(r.ngram), r.ngram, {});
  EXPECT_EQ(out.couplet.first, a);
  EXPECT_EQ(out.couplet.second, b);
  EXPECT_TRUE(out.choices.empty());
  EXPECT_EQ(out.score, 0.0);
}

TEST(BeamDecode, SingleMaskIsArgmax) {
  const auto& r = fixture::shared_resources();
  Words full = {"دل", "و", "جان", "از", "تو", "به", "در", "که", "با", "یار"};
  Words first = full;
  first[3] = "[MASK]";
  const auto pair = template_of(first, full);
  const TablePredictor pred({{"عشق", -0.2}, {"از", -1.0}, {"گل", -1.5}, {"و", -2.0}});
  for (double lambda : {0.0, 0.5, 1.0}) {
    DecoderConfig cfg;
    cfg.beam_depth = 1;
    cfg.top_k = 4;
    cfg.lambda = lambda;
    const auto got = beam_decode(pair, pred, r.ngram, cfg);
    double best = 0;
    const auto want = oracle::best_decode(pair, pred, r.ngram, 4, lambda, &best);
    EXPECT_EQ(got.choices, want) << lambda;
    EXPECT_NEAR(got.score, best, 1e-12);
    EXPECT_EQ(got.couplet.first[3], want[0]);
  }
  DecoderConfig pure_q;
  pure_q.lambda = 1.0;
  EXPECT_EQ(beam_decode(pair, pred, r.ngram, pure_q).choices, Words{"عشق"});
}

TEST(BeamDecode, TwoMasksMatchExhaustiveSearch) {
  const auto& r = fixture::shared_resources();
  const NgramPredictor pred(r.ngram);
  Words a = {"دل", "[MASK]", "جان", "از", "[MASK]", "به", "در", "که", "با", "یار"};
  Words b = {"گل", "و", "بلبل", "از", "تو", "به", "در", "که", "با", "کنار"};
  const auto pair = template_of(a, b);
  DecoderConfig cfg;
  cfg.top_k = 5;
  cfg.beam_depth = 25;
  cfg.lambda = 0.3;
  const auto got = beam_decode(pair, pred, r.ngram, cfg);
  EXPECT_EQ(got.choices, oracle::best_decode(pair, pred, r.ngram, 5, 0.3));
}

TEST(BeamDecode, StuckAndConfigErrors) {
  const auto& r = fixture::shared_resources();
  Words first = {"دل", "[MASK]"};
  const auto pair = template_of(first, Words(10, "و"));
  const TablePredictor junk({{"two words", -0.1}, {"[MASK]", -0.2}});
  EXPECT_THROW(beam_decode(pair, junk, r.ngram, {}), DecodingStuckError);
  const TablePredictor unseen({{"qqq", -0.1}});
  DecoderConfig vocab_only;
  vocab_only.vocabulary_only = true;
  EXPECT_THROW(beam_decode(pair, unseen, r.ngram, vocab_only), DecodingStuckError);
  EXPECT_NO_THROW(beam_decode(pair, unseen, r.ngram, {}));
  DecoderConfig bad;
  bad.lambda = 1.5;
  EXPECT_THROW(beam_decode(pair, unseen, r.ngram, bad), Error);
  const auto trigram = NgramModel::build(tiny(), 3);
  EXPECT_THROW(beam_decode(pair, unseen, trigram, {}), Error);
}

TEST(BeamDecode, Fluency) {
  const auto m = NgramModel::build(tiny());
  const double v = static_cast<double>(m.outcome_count());
  // After "a" at hemistich start: 4-gram ctx (<s>,<s>,a), 3-gram (<s>,a), 2-gram (a).
  const double p = 3.0 / (2.0 + v);
  EXPECT_NEAR(fluency(m, Words{"a"}, "b"), oracle::sf(p, p, p), 1e-12);
}

}  // namespace
}  // namespace prose2poem
