#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prose2poem/corpus.h"

namespace prose2poem {

struct EmbeddingOptions {
  std::size_t dim = 64;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  float learning_rate = 0.025f;
  std::uint64_t seed = 1;
};

// Word vectors of identical length. Immutable once built.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // Throws Error when data.size() != words.size() * dim.
  static EmbeddingTable from_vectors(std::vector<std::string> words, std::size_t dim,
                                     std::vector<float> data, std::uint64_t corpus_hash = 0);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vocabulary_.size(); }
  bool contains(std::string_view word) const { return vocabulary_.id(word).has_value(); }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::uint64_t corpus_hash() const { return corpus_hash_; }

  // Throws MissingWordError.
  std::span<const float> vector(std::string_view word) const;

  // File layout, all integers little-endian:
  //   "P2PEMB01" | u32 dim | u32 vocab | u64 corpus hash |
  //   vocab x (u32 byte length, UTF-8 bytes) | vocab x dim f32
  void save(const std::filesystem::path& path) const;
  static EmbeddingTable load(const std::filesystem::path& path);
  std::string serialize() const;
  static EmbeddingTable deserialize(std::string_view bytes, const std::string& source);

  bool operator==(const EmbeddingTable& other) const = default;

 private:
  Vocabulary vocabulary_;
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::uint64_t corpus_hash_ = 0;
};

// Skip-gram with negative sampling over couplets (both hemistichs form one
// sentence). Single-threaded; bit-for-bit reproducible for a fixed seed.
// Throws EmptyCorpusError.
EmbeddingTable train_embeddings(const Corpus& corpus, const EmbeddingOptions& options = {});

// Cosine similarity in [-1, 1]. Throws MissingWordError for unknown words.
double similarity(const EmbeddingTable& table, std::string_view a, std::string_view b);

}  // namespace prose2poem
