#include "prose2poem/assoc_graph.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "binary_io.h"
#include "prose2poem/error.h"
#include "prose2poem/lexicon.h"

namespace prose2poem {
namespace {

constexpr std::string_view kMagic = "P2PGRF01";

std::int64_t to_fixed(double cs) {
  return static_cast<std::int64_t>(std::llround(cs * AssociationGraph::kFixedScale));
}

double edge_weight(const AssociationGraph::Edge& e) {
  return (e.cs_mean() + (e.similarity + 1.0) / 2.0) / 2.0;
}

}  // namespace

double cooccurrence_score(std::size_t i, std::size_t j, std::size_t length) {
  if (length == 0) throw Error("co-occurrence score needs a non-empty couplet");
  if (i >= length || j >= length) throw Error("co-occurrence position outside the couplet");
  const std::size_t distance = i > j ? i - j : j - i;
  return 1.0 - static_cast<double>(distance) / static_cast<double>(length);
}

AssociationGraph AssociationGraph::build(const Corpus& corpus, const EmbeddingTable& table) {
  return build_shard(corpus.couplets(), corpus.vocabulary(), table, corpus.hash());
}

AssociationGraph AssociationGraph::build_shard(std::span<const Couplet> couplets,
                                               const Vocabulary& vocab,
                                               const EmbeddingTable& table,
                                               std::uint64_t corpus_hash) {
  AssociationGraph g;
  g.vocabulary_ = vocab;
  g.corpus_hash_ = corpus_hash;

  std::vector<std::pair<std::uint32_t, std::size_t>> firsts;
  for (const auto& couplet : couplets) {
    const auto tokens = couplet.tokens();
    const std::size_t length = tokens.size();
    firsts.clear();
    for (std::size_t pos = 0; pos < length; ++pos) {
      auto id = vocab.id(tokens[pos]);
      if (!id) throw DataError("couplet word outside the graph vocabulary: " + tokens[pos]);
      const bool seen = std::ranges::any_of(firsts, [&](const auto& f) { return f.first == *id; });
      if (!seen) firsts.emplace_back(*id, pos);
    }
    for (std::size_t a = 0; a < firsts.size(); ++a) {
      for (std::size_t b = a + 1; b < firsts.size(); ++b) {
        Edge& e = g.edges_[key(firsts[a].first, firsts[b].first)];
        e.cs_fixed += to_fixed(cooccurrence_score(firsts[a].second, firsts[b].second, length));
        ++e.cs_count;
      }
    }
  }

  for (auto& [k, e] : g.edges_) {
    const auto& wa = vocab.word(static_cast<std::uint32_t>(k >> 32));
    const auto& wb = vocab.word(static_cast<std::uint32_t>(k & 0xFFFFFFFFu));
    if (!table.contains(wa) || !table.contains(wb)) {
      throw DataError("embedding table does not cover the graph vocabulary");
    }
    e.similarity = similarity(table, wa, wb);
    e.weight = edge_weight(e);
  }
  return g;
}

AssociationGraph AssociationGraph::merge(const AssociationGraph& a, const AssociationGraph& b) {
  if (!(a.vocabulary_ == b.vocabulary_)) {
    throw DataError("cannot merge association graphs over different vocabularies");
  }
  AssociationGraph out = a;
  for (const auto& [k, e] : b.edges_) {
    Edge& m = out.edges_[k];
    if (m.cs_count == 0) {
      m = e;
      continue;
    }
    m.cs_fixed += e.cs_fixed;
    m.cs_count += e.cs_count;
    m.weight = edge_weight(m);
  }
  return out;
}

const AssociationGraph::Edge* AssociationGraph::find(std::string_view a, std::string_view b) const {
  auto ia = vocabulary_.id(a);
  auto ib = vocabulary_.id(b);
  if (!ia || !ib || *ia == *ib) return nullptr;
  auto it = edges_.find(key(*ia, *ib));
  return it == edges_.end() ? nullptr : &it->second;
}

double AssociationGraph::score(std::string_view a, std::string_view b) const {
  const Edge* e = find(a, b);
  return e == nullptr ? 0.0 : e->weight;
}

std::vector<std::uint64_t> AssociationGraph::sorted_keys() const {
  std::vector<std::uint64_t> keys;
  keys.reserve(edges_.size());
  for (const auto& [k, e] : edges_) keys.push_back(k);
  std::ranges::sort(keys);
  return keys;
}

std::string AssociationGraph::serialize() const {
  binary::Writer w;
  w.bytes(kMagic);
  w.u64(corpus_hash_);
  w.u32(static_cast<std::uint32_t>(vocabulary_.size()));
  for (const auto& word : vocabulary_.words()) w.str(word);
  w.u64(edges_.size());
  for (auto k : sorted_keys()) {
    const Edge& e = edges_.at(k);
    w.u32(static_cast<std::uint32_t>(k >> 32));
    w.u32(static_cast<std::uint32_t>(k & 0xFFFFFFFFu));
    w.i64(e.cs_fixed);
    w.u32(e.cs_count);
    w.f64(e.similarity);
    w.f64(e.weight);
  }
  return w.data();
}

AssociationGraph AssociationGraph::deserialize(std::string_view bytes, const std::string& source) {
  binary::Reader r(bytes, source);
  r.expect_magic(kMagic);
  AssociationGraph g;
  g.corpus_hash_ = r.u64();
  const std::size_t words = r.u32();
  for (std::size_t i = 0; i < words; ++i) g.vocabulary_.add(r.str());
  if (g.vocabulary_.size() != words) throw DataError(source + ": duplicate vocabulary entries");
  const std::uint64_t edges = r.u64();
  for (std::uint64_t i = 0; i < edges; ++i) {
    const auto a = r.u32();
    const auto b = r.u32();
    if (a >= words || b >= words || a >= b) throw DataError(source + ": invalid edge endpoints");
    Edge e;
    e.cs_fixed = r.i64();
    e.cs_count = r.u32();
    e.similarity = r.f64();
    e.weight = r.f64();
    if (e.cs_count == 0) throw DataError(source + ": edge with zero co-occurrences");
    g.edges_.emplace(key(a, b), e);
  }
  r.expect_end();
  return g;
}

void AssociationGraph::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

AssociationGraph AssociationGraph::load(const std::filesystem::path& path) {
  return deserialize(read_file(path), path.string());
}

}  // namespace prose2poem
