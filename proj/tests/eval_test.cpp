#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fixture.h"
#include "json.hpp"
#include "prose2poem/error.h"
#include "prose2poem/eval.h"

namespace prose2poem {
namespace {

using Words = std::vector<std::string>;

TEST(Bleu, HandValues) {
  const Words abc = {"a", "b", "c"};
  EXPECT_DOUBLE_EQ(bleu(abc, abc, 4), 1.0);
  EXPECT_DOUBLE_EQ(bleu(abc, Words{"x", "y", "z"}, 1), 0.0);
  EXPECT_NEAR(bleu(abc, Words{"a", "b", "d"}, 1), 2.0 / 3.0, 1e-4);
  // Bigram precision 1/2: sqrt(2/3 * 1/2).
  EXPECT_NEAR(bleu(abc, Words{"a", "b", "d"}, 2), std::sqrt(1.0 / 3.0), 1e-12);
  // Brevity penalty exp(1 - 4/2).
  EXPECT_NEAR(bleu(Words{"a", "b"}, Words{"a", "b", "c", "d"}, 1), std::exp(-1.0), 1e-12);
  // Clipping: "a a a" against "a b" has unigram precision 1/3.
  EXPECT_NEAR(bleu(Words{"a", "a", "a"}, Words{"a", "b"}, 1), 1.0 / 3.0, 1e-12);
  EXPECT_THROW(bleu(Words{}, abc, 1), Error);
  EXPECT_THROW(bleu(abc, abc, 5), Error);
}

TEST(Rouge, HandValues) {
  const Words ab = {"a", "b"};
  for (auto v : {RougeVariant::one, RougeVariant::two, RougeVariant::lcs}) {
    EXPECT_DOUBLE_EQ(rouge(ab, ab, v), 1.0);
    EXPECT_DOUBLE_EQ(rouge(ab, Words{"c", "d"}, v), 0.0);
  }
  EXPECT_DOUBLE_EQ(rouge(ab, Words{"b", "a"}, RougeVariant::lcs), 0.5);
  EXPECT_DOUBLE_EQ(rouge(ab, Words{"b", "a"}, RougeVariant::one), 1.0);
  EXPECT_DOUBLE_EQ(rouge(ab, Words{"b", "a"}, RougeVariant::two), 0.0);
  // P = 1/1, R = 1/3.
  EXPECT_NEAR(rouge(Words{"a"}, Words{"a", "b", "c"}, RougeVariant::one), 0.5, 1e-12);
}

TEST(Perplexity, HandValues) {
  const std::vector<double> p = {0.5, 0.25};
  EXPECT_NEAR(perplexity(p), 2.828, 1e-3);
  const std::vector<double> uniform(17, 1.0 / 250);
  EXPECT_NEAR(perplexity(uniform), 250.0, 1e-6);
  EXPECT_DOUBLE_EQ(perplexity(std::vector<double>{1.0, 1.0}), 1.0);
  EXPECT_THROW(perplexity(std::vector<double>{}), Error);
  EXPECT_THROW(perplexity(std::vector<double>{0.0}), Error);
}

TEST(Perplexity, ModelOverHemistichs) {
  // Every bigram context sees (count + 1) / (total + V); replay by hand.
  const auto corpus = Corpus::from_couplets({{{"a", "b"}, {"a", "b"}}});
  const auto m = NgramModel::build(corpus, 2);
  const std::vector<Couplet> test = {{{"a", "c"}, {"b"}}};
  const double v = 3.0;
  const std::vector<double> probs = {
      3 / (2 + v),  // a | <s>
      1 / (2 + v),  // c | a
      1 / v,        // </s> | c (unseen context)
      1 / (2 + v),  // b | <s>
      3 / (2 + v),  // </s> | b
  };
  EXPECT_NEAR(perplexity(m, test), perplexity(probs), 1e-9);
  EXPECT_THROW(perplexity(m, std::vector<Couplet>{}), Error);
}

TEST(Affinity, SeparableToyFixture) {
  const auto table = EmbeddingTable::from_vectors({"g1", "g2", "e1", "e2", "n"}, 2,
                                                  {1, 0, 0.9f, 0.1f, 0, 1, 0.1f, 0.9f, 0.7f, 0.7f});
  const std::vector<AffinityExample> train = {{{{"g1"}, {"g2"}}, AffinityLabel::divine},
                                              {{{"e1"}, {"e2"}}, AffinityLabel::ethical}};
  const auto clf = AffinityClassifier::train(train, table);
  EXPECT_EQ(clf.classify({{"g2"}, {"g2"}}), AffinityLabel::divine);
  EXPECT_EQ(clf.classify({{"e1"}, {"unknown"}}), AffinityLabel::ethical);
  const std::vector<Couplet> gen = {{{"g1"}, {"g1"}}, {{"e2"}, {"e2"}}, {{"g2"}, {"g1"}}};
  const std::vector<Couplet> ref = {{{"g2"}, {"g2"}}, {{"e1"}, {"e1"}}, {{"e1"}, {"e2"}}};
  EXPECT_NEAR(semantic_affinity(gen, ref, clf), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(semantic_affinity(gen, gen, clf), 1.0);
  const std::vector<Couplet> flipped = {{{"e1"}, {"e1"}}, {{"g1"}, {"g1"}}};
  EXPECT_DOUBLE_EQ(semantic_affinity(std::span(gen).first(2), flipped, clf), 0.0);
  EXPECT_THROW(semantic_affinity(gen, flipped, clf), Error);
  EXPECT_THROW(AffinityClassifier{}.classify(gen[0]), Error);
}

TEST(ValidateFormat, SchemeChecks) {
  RhymeLexicon lex;
  lex.add_group({"x1", "x2", "x3", "x4"});
  lex.add_group({"y1", "y2"});
  const std::vector<Couplet> masnavi = {{{"a", "x1"}, {"b", "x2"}}, {{"c", "y1"}, {"d", "y2"}}};
  EXPECT_TRUE(validate_format(masnavi, PoetryFormat::masnavi, lex));
  EXPECT_FALSE(validate_format(masnavi, PoetryFormat::ghazal, lex));
  const std::vector<Couplet> ghazal = {{{"x1"}, {"x2"}}, {{"free"}, {"x3"}}, {{"y1"}, {"y2"}}};
  EXPECT_FALSE(validate_format(ghazal, PoetryFormat::ghazal, lex));
  const std::vector<Couplet> ghete = {{{"y1"}, {"x1"}}, {{"anything"}, {"x4"}}};
  EXPECT_TRUE(validate_format(ghete, PoetryFormat::ghete, lex));
  EXPECT_FALSE(validate_format(std::span(ghete).first(1), PoetryFormat::ghete, lex));
  const std::vector<Couplet> three(3, Couplet{{"x1"}, {"x2"}});
  EXPECT_FALSE(validate_format(three, PoetryFormat::robaei, lex));
}

TEST(Evaluate, ReportAggregates) {
  const auto& r = fixture::shared_resources();
  const auto& c = r.corpus.couplets();
  std::vector<EvalSample> samples = {
      {{c[0], c[1]}, {c[0], c[1]}, std::nullopt},
      {{c[2]}, {c[3]}, std::nullopt},
  };
  EvalOptions opts;
  opts.model = &r.ngram;
  opts.rhymes = &r.rhymes;
  const auto report = evaluate(samples, opts);
  EXPECT_EQ(report.samples, 2u);
  ASSERT_TRUE(report.bleu && report.rouge && report.perplexity);
  EXPECT_DOUBLE_EQ(report.per_sample[0].bleu[0], 1.0);
  EXPECT_DOUBLE_EQ((*report.bleu)[0], (1.0 + report.per_sample[1].bleu[0]) / 2);
  EXPECT_FALSE(report.semantic_affinity.has_value());
  EXPECT_FALSE(report.format_valid.has_value());
  const auto doc = nlohmann::json::parse(report_to_json(report));
  EXPECT_EQ(doc["samples"], 2);
}

}  // namespace
}  // namespace prose2poem
