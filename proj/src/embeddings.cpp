#include "prose2poem/embeddings.h"

#include <algorithm>
#include <cmath>

#include "binary_io.h"
#include "prose2poem/error.h"
#include "prose2poem/lexicon.h"

namespace prose2poem {
namespace {

constexpr std::string_view kMagic = "P2PEMB01";
constexpr float kMaxExp = 6.0f;

// word2vec's linear congruential generator: portable and cheap.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ = state_ * 25214903917ULL + 11;
    return state_;
  }
  // Uniform in [0, 1), from the high bits.
  double unit() { return static_cast<double>(next() >> 16) * 0x1.0p-48; }

 private:
  std::uint64_t state_;
};

}  // namespace

EmbeddingTable EmbeddingTable::from_vectors(std::vector<std::string> words, std::size_t dim,
                                            std::vector<float> data, std::uint64_t corpus_hash) {
  if (dim == 0 || data.size() != words.size() * dim) {
    throw Error("embedding matrix does not match vocabulary size and dimension");
  }
  EmbeddingTable t;
  for (const auto& w : words) {
    if (t.vocabulary_.id(w)) throw DataError("duplicate embedding word: " + w);
    t.vocabulary_.add(w);
  }
  t.dim_ = dim;
  t.data_ = std::move(data);
  t.corpus_hash_ = corpus_hash;
  return t;
}

std::span<const float> EmbeddingTable::vector(std::string_view word) const {
  auto id = vocabulary_.id(word);
  if (!id) throw MissingWordError(std::string(word));
  return std::span<const float>(data_).subspan(static_cast<std::size_t>(*id) * dim_, dim_);
}

std::string EmbeddingTable::serialize() const {
  binary::Writer w;
  w.bytes(kMagic);
  w.u32(static_cast<std::uint32_t>(dim_));
  w.u32(static_cast<std::uint32_t>(vocabulary_.size()));
  w.u64(corpus_hash_);
  for (const auto& word : vocabulary_.words()) w.str(word);
  for (float v : data_) w.f32(v);
  return w.data();
}

EmbeddingTable EmbeddingTable::deserialize(std::string_view bytes, const std::string& source) {
  binary::Reader r(bytes, source);
  r.expect_magic(kMagic);
  const std::size_t dim = r.u32();
  const std::size_t count = r.u32();
  const std::uint64_t hash = r.u64();
  std::vector<std::string> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) words.push_back(r.str());
  std::vector<float> data(count * dim);
  for (auto& v : data) v = r.f32();
  r.expect_end();
  return from_vectors(std::move(words), dim, std::move(data), hash);
}

void EmbeddingTable::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  return deserialize(read_file(path), path.string());
}

EmbeddingTable train_embeddings(const Corpus& corpus, const EmbeddingOptions& opt) {
  if (corpus.empty()) throw EmptyCorpusError("cannot train embeddings on an empty corpus");
  if (opt.dim == 0 || opt.window == 0 || opt.epochs == 0) {
    throw Error("embedding dim, window and epochs must be positive");
  }
  const Vocabulary& vocab = corpus.vocabulary();
  const std::size_t vocab_size = vocab.size();
  const std::size_t dim = opt.dim;

  std::vector<std::vector<std::uint32_t>> sentences;
  std::vector<std::uint64_t> counts(vocab_size, 0);
  std::uint64_t total_tokens = 0;
  for (const auto& c : corpus.couplets()) {
    auto& s = sentences.emplace_back();
    for (const auto& t : c.tokens()) {
      const auto id = *vocab.id(t);
      s.push_back(id);
      ++counts[id];
      ++total_tokens;
    }
  }

  // Negative-sampling distribution: unigram counts raised to 0.75.
  std::vector<double> cumulative(vocab_size);
  double mass = 0.0;
  for (std::size_t i = 0; i < vocab_size; ++i) {
    mass += std::pow(static_cast<double>(counts[i]), 0.75);
    cumulative[i] = mass;
  }

  Lcg rng(opt.seed);
  std::vector<float> input(vocab_size * dim);
  std::vector<float> output(vocab_size * dim, 0.0f);
  for (auto& v : input) {
    v = static_cast<float>((rng.unit() - 0.5) / static_cast<double>(dim));
  }

  const double total_steps = static_cast<double>(total_tokens * opt.epochs);
  const float min_rate = opt.learning_rate * 1e-4f;
  std::vector<float> grad(dim);
  std::uint64_t step = 0;

  for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
    for (const auto& sentence : sentences) {
      const auto n = static_cast<std::ptrdiff_t>(sentence.size());
      for (std::ptrdiff_t pos = 0; pos < n; ++pos, ++step) {
        const float rate = std::max(
            min_rate, opt.learning_rate * static_cast<float>(1.0 - step / (total_steps + 1.0)));
        const std::uint32_t word = sentence[pos];
        const auto shrink = static_cast<std::ptrdiff_t>(rng.next() % opt.window);
        const auto reach = static_cast<std::ptrdiff_t>(opt.window) - shrink;
        for (std::ptrdiff_t c = pos - reach; c <= pos + reach; ++c) {
          if (c == pos || c < 0 || c >= n) continue;
          float* in = &input[static_cast<std::size_t>(sentence[c]) * dim];
          std::fill(grad.begin(), grad.end(), 0.0f);
          for (std::size_t d = 0; d <= opt.negatives; ++d) {
            std::uint32_t target = word;
            float label = 1.0f;
            if (d > 0) {
              const double r = rng.unit() * mass;
              target = static_cast<std::uint32_t>(
                  std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
              if (target >= vocab_size) target = static_cast<std::uint32_t>(vocab_size - 1);
              if (target == word) continue;
              label = 0.0f;
            }
            float* out = &output[static_cast<std::size_t>(target) * dim];
            float f = 0.0f;
            for (std::size_t k = 0; k < dim; ++k) f += in[k] * out[k];
            float g;
            if (f > kMaxExp) {
              g = (label - 1.0f) * rate;
            } else if (f < -kMaxExp) {
              g = label * rate;
            } else {
              g = (label - 1.0f / (1.0f + std::exp(-f))) * rate;
            }
            for (std::size_t k = 0; k < dim; ++k) grad[k] += g * out[k];
            for (std::size_t k = 0; k < dim; ++k) out[k] += g * in[k];
          }
          for (std::size_t k = 0; k < dim; ++k) in[k] += grad[k];
        }
      }
    }
  }
  return EmbeddingTable::from_vectors(vocab.words(), dim, std::move(input), corpus.hash());
}

double similarity(const EmbeddingTable& table, std::string_view a, std::string_view b) {
  const auto va = table.vector(a);
  const auto vb = table.vector(b);
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    dot += static_cast<double>(va[k]) * vb[k];
    na += static_cast<double>(va[k]) * va[k];
    nb += static_cast<double>(vb[k]) * vb[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace prose2poem
