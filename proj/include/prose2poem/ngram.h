#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "prose2poem/corpus.h"

namespace prose2poem {

// Word n-gram counts of orders 1..max_order over hemistichs. Each hemistich
// is padded with begin sentinels on the left and one end sentinel on the
// right. Immutable after build.
//
// The outcome vocabulary V is the corpus words plus the end sentinel; the
// begin sentinel only ever appears as context.
class NgramModel {
 public:
  static constexpr int kMaxOrder = 4;

  NgramModel() = default;

  // Throws EmptyCorpusError, or Error for an order outside 2..4.
  static NgramModel build(const Corpus& corpus, int max_order = kMaxOrder);

  int max_order() const { return max_order_; }
  std::size_t word_count() const { return words_.size(); }
  std::size_t outcome_count() const { return words_.size() + 1; }
  const std::string& word(std::uint32_t id) const { return words_.at(id); }
  std::optional<std::uint32_t> word_id(std::string_view word) const;
  std::uint64_t corpus_hash() const { return corpus_hash_; }

  // Count of a 1..max_order-gram given as strings (sentinels spelled "<s>"
  // and "</s>"). Unigram counts include one begin and one end sentinel per
  // hemistich.
  std::uint64_t count(std::span<const std::string> ngram) const;
  std::uint64_t context_total(std::span<const std::string> context) const;
  std::uint64_t total_unigrams() const { return total_unigrams_; }

  // Add-one smoothed P(word | context) = (c(ctx, w) + 1) / (c(ctx) + V) for
  // 2 <= order <= max_order and context.size() == order - 1. Unknown words,
  // including the mask symbol, are valid context and simply unseen.
  // Throws Error for an invalid order or context length.
  double prob(int order, std::span<const std::string> context, std::string_view word) const;

  // Id-level access used by the predictor. Context ids come from context_id().
  static constexpr std::uint32_t kUnknownId = 0x1FFFFF;
  std::uint32_t context_id(std::string_view token) const;
  std::uint32_t end_id() const { return static_cast<std::uint32_t>(words_.size()); }
  std::uint32_t begin_id() const { return static_cast<std::uint32_t>(words_.size() + 1); }

  std::uint32_t outcome_id(std::string_view token) const;
  // prob() on ids; an unknown outcome counts as unseen.
  double prob_id(std::span<const std::uint32_t> context, std::uint32_t outcome) const;

  // P_order(outcome | context) for every outcome id 0..V-1 (end sentinel last).
  void distribution(int order, std::span<const std::uint32_t> context,
                    std::vector<double>& out) const;

  // File layout, little-endian:
  //   "P2PNGM01" | u64 corpus hash | u32 max order | u32 words |
  //   words x (u32 len, bytes) | (words + 2) x u64 unigram counts |
  //   per order 2..max: u64 contexts | contexts x (u64 key, u64 total,
  //                     u32 n, n x (u32 outcome id, u32 count))
  void save(const std::filesystem::path& path) const;
  static NgramModel load(const std::filesystem::path& path);
  std::string serialize() const;
  static NgramModel deserialize(std::string_view bytes, const std::string& source);

 private:
  struct Context {
    std::uint64_t total = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> next;  // sorted by outcome id
  };

  static std::uint64_t pack(std::span<const std::uint32_t> ids);
  const Context* find_context(std::span<const std::uint32_t> ids) const;

  int max_order_ = kMaxOrder;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::uint64_t> unigrams_;  // words, end, begin
  std::uint64_t total_unigrams_ = 0;
  // contexts_[k - 2] holds order-k contexts (k - 1 ids).
  std::vector<std::unordered_map<std::uint64_t, Context>> contexts_;
  std::uint64_t corpus_hash_ = 0;
};

inline double ngram_prob(const NgramModel& model, int order, std::span<const std::string> context,
                         std::string_view word) {
  return model.prob(order, context, word);
}

}  // namespace prose2poem
