#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "prose2poem/corpus.h"
#include "prose2poem/embeddings.h"

namespace prose2poem {

// Spatial closeness of two positions in a couplet of `length` tokens:
// 1 - |i - j| / length. Positions are 0-based. Throws Error for length 0 or
// positions outside the couplet.
double cooccurrence_score(std::size_t i, std::size_t j, std::size_t length);

// Word-association graph over a corpus vocabulary.
//
// Every unordered pair of distinct words sharing a couplet gets an edge. Each
// shared couplet contributes one co-occurrence score computed from the
// earliest position of each word in that couplet. The edge weight blends the
// mean co-occurrence score with the words' embedding similarity rescaled to
// [0, 1]:
//
//   weight = (cs_sum / cs_count + (sim + 1) / 2) / 2
//
// cs_sum is accumulated in 32.32 fixed point so that graphs built from
// corpus shards and merged are exactly equal to a single-pass build.
class AssociationGraph {
 public:
  static constexpr double kFixedScale = 4294967296.0;  // 2^32

  struct Edge {
    std::int64_t cs_fixed = 0;
    std::uint32_t cs_count = 0;
    double similarity = 0.0;
    double weight = 0.0;

    double cs_sum() const { return static_cast<double>(cs_fixed) / kFixedScale; }
    double cs_mean() const { return cs_sum() / cs_count; }

    bool operator==(const Edge&) const = default;
  };

  AssociationGraph() = default;

  // Throws DataError when a corpus word has no embedding.
  static AssociationGraph build(const Corpus& corpus, const EmbeddingTable& table);

  // Builds the edges contributed by a slice of couplets over a shared
  // vocabulary; merge() the shards to obtain the full graph.
  static AssociationGraph build_shard(std::span<const Couplet> couplets, const Vocabulary& vocab,
                                      const EmbeddingTable& table, std::uint64_t corpus_hash = 0);

  // Sums cs_sum and cs_count per edge and recomputes weights. Throws DataError
  // when the graphs use different vocabularies.
  static AssociationGraph merge(const AssociationGraph& a, const AssociationGraph& b);

  // g(a, b): edge weight, or 0 when no edge exists (including a == b).
  double score(std::string_view a, std::string_view b) const;
  const Edge* find(std::string_view a, std::string_view b) const;

  std::size_t vertex_count() const { return vocabulary_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::uint64_t corpus_hash() const { return corpus_hash_; }
  void set_corpus_hash(std::uint64_t h) { corpus_hash_ = h; }

  // Visits edges in ascending (id_a, id_b) order, id_a < id_b.
  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    for (auto key : sorted_keys()) {
      fn(static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key & 0xFFFFFFFFu),
         edges_.at(key));
    }
  }

  // File layout, little-endian:
  //   "P2PGRF01" | u64 corpus hash | u32 vocab | vocab x (u32 len, bytes) |
  //   u64 edges | edges x (u32 id_a, u32 id_b, i64 cs_sum in 2^-32 units,
  //                        u32 cs_count, f64 similarity, f64 weight)
  void save(const std::filesystem::path& path) const;
  static AssociationGraph load(const std::filesystem::path& path);
  std::string serialize() const;
  static AssociationGraph deserialize(std::string_view bytes, const std::string& source);

  bool operator==(const AssociationGraph& other) const {
    return vocabulary_ == other.vocabulary_ && edges_ == other.edges_;
  }

 private:
  static std::uint64_t key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
  std::vector<std::uint64_t> sorted_keys() const;

  Vocabulary vocabulary_;
  std::unordered_map<std::uint64_t, Edge> edges_;
  std::uint64_t corpus_hash_ = 0;
};

inline double association_score(const AssociationGraph& graph, std::string_view a,
                                std::string_view b) {
  return graph.score(a, b);
}

}  // namespace prose2poem
