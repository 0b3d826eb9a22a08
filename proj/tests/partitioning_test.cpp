#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "oracles.h"
#include "prose2poem/partitioning.h"
#include "prose2poem/random.h"

namespace prose2poem {
namespace {

using Words = std::vector<std::string>;

// Graph over words w0..w{n-1} where every pair shares a couplet, with
// pseudo-random embeddings so the weights vary.
struct ToyGraph {
  Corpus corpus;
  AssociationGraph graph;
};

ToyGraph toy_graph(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Couplet> couplets;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
  for (int c = 0; c < 30; ++c) {
    Couplet cp;
    for (int k = 0; k < 4; ++k) cp.first.push_back(words[rng.index(n)]);
    for (int k = 0; k < 4; ++k) cp.second.push_back(words[rng.index(n)]);
    couplets.push_back(cp);
  }
  ToyGraph t{Corpus::from_couplets(couplets), {}};
  std::vector<float> data;
  for (std::size_t i = 0; i < t.corpus.vocabulary().size() * 3; ++i) {
    data.push_back(static_cast<float>(rng.unit() * 2 - 1));
  }
  const auto table = EmbeddingTable::from_vectors(t.corpus.vocabulary().words(), 3, data);
  t.graph = AssociationGraph::build(t.corpus, table);
  return t;
}

TEST(PartitionScore, HandValues) {
  EXPECT_DOUBLE_EQ(partition_score(1, 0.8), 0.5);
  EXPECT_NEAR(partition_score(2, 0.5), 0.6225, 1e-4);
  EXPECT_NEAR(partition_score(4, 1.0), 0.8808, 1e-4);
  EXPECT_DOUBLE_EQ(partition_score(0, 0.3), 0.5);
}

TEST(EnumerateCandidates, ZeroCountGivesAllMask) {
  IndexKeywords ik;
  ik[2] = {"a"};
  const auto c = enumerate_candidates(ik, 0, Side::first, AssociationGraph{});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].mks.mask_count(), 10u);
  EXPECT_DOUBLE_EQ(c[0].score, 0.5);
}

TEST(EnumerateCandidates, SingleCombination) {
  const auto t = toy_graph(6, 1);
  IndexKeywords ik;
  ik[1] = {"w0"};
  ik[4] = {"w1"};
  const auto c = enumerate_candidates(ik, 2, Side::second, t.graph);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c[0].gap_sum, 3.0);
  EXPECT_DOUBLE_EQ(c[0].association_mean, t.graph.score("w0", "w1"));
  EXPECT_EQ(c[0].mks.slots[1], "w0");
  EXPECT_EQ(c[0].mks.slots[4], "w1");
  EXPECT_EQ(c[0].mks.mask_count(), 8u);
  EXPECT_EQ(c[0].mks.side, Side::second);
}

TEST(EnumerateCandidates, InfeasibleCount) {
  IndexKeywords ik;
  ik[0] = {"a", "b"};
  EXPECT_THROW(enumerate_candidates(ik, 2, Side::first, AssociationGraph{}), InfeasibleError);
}

TEST(EnumerateCandidates, MatchesExhaustiveOracle) {
  const auto t = toy_graph(12, 3);
  Rng rng(9);
  for (int n = 0; n < 20; ++n) {
    IndexKeywords ik;
    for (int i = 0; i < 10; ++i) {
      const std::size_t k = rng.index(3);
      for (std::size_t j = 0; j < k; ++j) ik[i].push_back("w" + std::to_string(rng.index(12)));
    }
    std::size_t available = 0;
    for (const auto& l : ik) available += !l.empty();
    const std::size_t count = rng.index(std::min<std::size_t>(available, 3) + 1);
    const auto want = oracle::ranked_partitions(
        ik, count, [&](const std::string& a, const std::string& b) { return t.graph.score(a, b); });
    if (want.size() > 1000) continue;
    ASSERT_EQ(combination_count(ik, count), want.size());
    const auto got = enumerate_candidates(ik, count, Side::first, t.graph, 1000);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t r = 0; r < got.size(); ++r) {
      EXPECT_EQ(got[r].indices, want[r].indices);
      EXPECT_EQ(got[r].keywords, want[r].keywords);
      EXPECT_NEAR(got[r].score, want[r].score, 1e-12);
    }
  }
}

TEST(EnumerateCandidates, PruningKeepsCapBest) {
  const auto t = toy_graph(12, 4);
  IndexKeywords ik;
  for (int i = 0; i < 10; ++i) ik[i] = {"w" + std::to_string(i), "w" + std::to_string(i + 1)};
  const auto pruned = enumerate_candidates(ik, 3, Side::first, t.graph, 50);
  EXPECT_FALSE(pruned.empty());
  EXPECT_LE(pruned.size(), 50u);
  for (std::size_t r = 1; r < pruned.size(); ++r) {
    EXPECT_FALSE(candidate_before(pruned[r], pruned[r - 1]));
  }
}

TEST(SelectPartitions, ZipsByRankWithoutReuse) {
  const auto t = toy_graph(8, 5);
  auto cand = [&](std::vector<int> idx, Words kw, Side side) {
    return make_candidate(idx, kw, side, t.graph);
  };
  std::vector<PartitionCandidate> first = {cand({1, 5}, {"w0", "w1"}, Side::first),
                                           cand({2, 6}, {"w0", "w2"}, Side::first),
                                           cand({3, 4}, {"w3", "w4"}, Side::first),
                                           cand({1, 9}, {"w5", "w6"}, Side::first)};
  std::vector<PartitionCandidate> second = {cand({2}, {"w1"}, Side::second),
                                            cand({2}, {"w7"}, Side::second),
                                            cand({5}, {"w2"}, Side::second),
                                            cand({7}, {"w6"}, Side::second)};
  std::ranges::sort(first, candidate_before);
  std::ranges::sort(second, candidate_before);
  auto to_choice = [](const std::vector<PartitionCandidate>& side) {
    std::vector<oracle::ScoredChoice> out;
    for (const auto& c : side) out.push_back({c.indices, c.keywords, c.gap_sum, c.association_mean, c.score});
    return out;
  };
  const auto want = oracle::select_ranked(to_choice(first), to_choice(second), 2);
  const auto got = select_partitions(first, second, 2);
  ASSERT_EQ(want.size(), 2u);
  ASSERT_EQ(got.size(), 2u);
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_EQ(got[c].pair.first, first[want[c].first].mks);
    EXPECT_EQ(got[c].pair.second, second[want[c].second].mks);
  }
  std::set<std::string> seen;
  for (const auto& p : got) {
    for (const auto& w : p.pair.first.filled()) EXPECT_TRUE(seen.insert(w).second) << w;
    for (const auto& w : p.pair.second.filled()) EXPECT_TRUE(seen.insert(w).second) << w;
  }
}

TEST(SelectPartitions, KeywordFreeCandidatesRepeatAndShortageThrows) {
  IndexKeywords none;
  const auto empty = enumerate_candidates(none, 0, Side::first, AssociationGraph{});
  const auto empty2 = enumerate_candidates(none, 0, Side::second, AssociationGraph{});
  EXPECT_EQ(select_partitions(empty, empty2, 3).size(), 3u);
  const auto t = toy_graph(4, 6);
  std::vector<PartitionCandidate> one = {make_candidate({1}, {"w0"}, Side::first, t.graph)};
  EXPECT_THROW(select_partitions(one, empty2, 2), InfeasibleError);
}

TEST(SelectPartitions, ReservedLastSlotIsSkipped) {
  const auto t = toy_graph(4, 7);
  std::vector<PartitionCandidate> first = {make_candidate({10}, {"w0"}, Side::first, t.graph),
                                           make_candidate({3}, {"w1"}, Side::first, t.graph)};
  std::ranges::sort(first, candidate_before);
  IndexKeywords none;
  const auto second = enumerate_candidates(none, 0, Side::second, AssociationGraph{});
  SelectOptions opts;
  opts.reserve_last_slot = {{true, true}};
  const auto got = select_partitions(first, second, 1, opts);
  EXPECT_EQ(got[0].pair.first.slots[2], "w1");
  EXPECT_EQ(got[0].pair.first.slots[9], "[MASK]");
}

}  // namespace
}  // namespace prose2poem
