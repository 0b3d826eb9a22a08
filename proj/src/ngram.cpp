#include "prose2poem/ngram.h"

#include <algorithm>

#include "binary_io.h"
#include "prose2poem/error.h"
#include "prose2poem/lexicon.h"
#include "prose2poem/text.h"

namespace prose2poem {
namespace {

constexpr std::string_view kMagic = "P2PNGM01";
constexpr int kIdBits = 21;

void check_order(int order, int max_order) {
  if (order < 2 || order > max_order) {
    throw Error("n-gram order must lie in 2.." + std::to_string(max_order) + ", got " +
                std::to_string(order));
  }
}

}  // namespace

std::uint64_t NgramModel::pack(std::span<const std::uint32_t> ids) {
  std::uint64_t key = 0;
  for (auto id : ids) key = (key << kIdBits) | id;
  return key;
}

std::optional<std::uint32_t> NgramModel::word_id(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t NgramModel::context_id(std::string_view token) const {
  if (token == kBeginToken) return begin_id();
  if (token == kEndToken) return end_id();
  auto id = word_id(token);
  return id ? *id : kUnknownId;
}

std::uint32_t NgramModel::outcome_id(std::string_view token) const {
  if (token == kEndToken) return end_id();
  auto id = word_id(token);
  return id ? *id : kUnknownId;
}

NgramModel NgramModel::build(const Corpus& corpus, int max_order) {
  if (corpus.empty()) throw EmptyCorpusError("cannot build an n-gram model from an empty corpus");
  if (max_order < 2 || max_order > kMaxOrder) throw Error("n-gram max order must lie in 2..4");
  if (corpus.vocabulary().size() + 2 >= kUnknownId) throw Error("vocabulary too large for n-gram ids");

  NgramModel m;
  m.max_order_ = max_order;
  m.words_ = corpus.vocabulary().words();
  for (std::uint32_t i = 0; i < m.words_.size(); ++i) m.ids_.emplace(m.words_[i], i);
  m.unigrams_.assign(m.words_.size() + 2, 0);
  m.corpus_hash_ = corpus.hash();

  std::vector<std::unordered_map<std::uint64_t, std::unordered_map<std::uint32_t, std::uint32_t>>>
      raw(max_order - 1);
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> totals(max_order - 1);

  const std::size_t pad = static_cast<std::size_t>(max_order - 1);
  std::vector<std::uint32_t> seq;
  auto add_hemistich = [&](const Hemistich& h) {
    seq.assign(pad, m.begin_id());
    for (const auto& t : h) seq.push_back(*m.word_id(t));
    seq.push_back(m.end_id());

    ++m.unigrams_[m.begin_id()];
    for (std::size_t t = pad; t < seq.size(); ++t) ++m.unigrams_[seq[t]];
    m.total_unigrams_ += h.size() + 2;

    for (std::size_t t = pad; t < seq.size(); ++t) {
      for (int k = 2; k <= max_order; ++k) {
        const std::span<const std::uint32_t> ctx(seq.data() + t - (k - 1), k - 1);
        const auto key = pack(ctx);
        ++raw[k - 2][key][seq[t]];
        ++totals[k - 2][key];
      }
    }
  };
  for (const auto& c : corpus.couplets()) {
    add_hemistich(c.first);
    add_hemistich(c.second);
  }

  m.contexts_.resize(max_order - 1);
  for (int k = 0; k < max_order - 1; ++k) {
    for (auto& [key, next] : raw[k]) {
      Context ctx;
      ctx.total = totals[k][key];
      ctx.next.assign(next.begin(), next.end());
      std::ranges::sort(ctx.next);
      m.contexts_[k].emplace(key, std::move(ctx));
    }
  }
  return m;
}

const NgramModel::Context* NgramModel::find_context(std::span<const std::uint32_t> ids) const {
  const int order = static_cast<int>(ids.size()) + 1;
  if (order < 2 || order > max_order_) return nullptr;
  if (std::ranges::find(ids, kUnknownId) != ids.end()) return nullptr;
  const auto& map = contexts_[order - 2];
  auto it = map.find(pack(ids));
  return it == map.end() ? nullptr : &it->second;
}

std::uint64_t NgramModel::count(std::span<const std::string> ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > max_order_) return 0;
  const auto target = ngram.back() == kBeginToken ? begin_id() : outcome_id(ngram.back());
  if (target == kUnknownId) return 0;
  if (ngram.size() == 1) return unigrams_[target];
  std::vector<std::uint32_t> ids;
  for (std::size_t i = 0; i + 1 < ngram.size(); ++i) ids.push_back(context_id(ngram[i]));
  const Context* ctx = find_context(ids);
  if (ctx == nullptr) return 0;
  auto it = std::ranges::lower_bound(ctx->next, std::pair<std::uint32_t, std::uint32_t>{target, 0});
  return it != ctx->next.end() && it->first == target ? it->second : 0;
}

std::uint64_t NgramModel::context_total(std::span<const std::string> context) const {
  std::vector<std::uint32_t> ids;
  for (const auto& t : context) ids.push_back(context_id(t));
  const Context* ctx = find_context(ids);
  return ctx == nullptr ? 0 : ctx->total;
}

double NgramModel::prob(int order, std::span<const std::string> context,
                        std::string_view word) const {
  check_order(order, max_order_);
  if (context.size() != static_cast<std::size_t>(order - 1)) {
    throw Error("order-" + std::to_string(order) + " context must hold " +
                std::to_string(order - 1) + " token(s)");
  }
  std::uint32_t ids[kMaxOrder - 1];
  for (std::size_t i = 0; i < context.size(); ++i) ids[i] = context_id(context[i]);
  return prob_id(std::span<const std::uint32_t>(ids, context.size()), outcome_id(word));
}

double NgramModel::prob_id(std::span<const std::uint32_t> context, std::uint32_t outcome) const {
  check_order(static_cast<int>(context.size()) + 1, max_order_);
  const Context* ctx = find_context(context);
  const double v = static_cast<double>(outcome_count());
  if (ctx == nullptr) return 1.0 / v;
  std::uint64_t c = 0;
  if (outcome != kUnknownId) {
    auto it = std::ranges::lower_bound(ctx->next, std::pair<std::uint32_t, std::uint32_t>{outcome, 0});
    if (it != ctx->next.end() && it->first == outcome) c = it->second;
  }
  return (static_cast<double>(c) + 1.0) / (static_cast<double>(ctx->total) + v);
}

void NgramModel::distribution(int order, std::span<const std::uint32_t> context,
                              std::vector<double>& out) const {
  check_order(order, max_order_);
  const double v = static_cast<double>(outcome_count());
  const Context* ctx = find_context(context);
  const double denom = (ctx == nullptr ? 0.0 : static_cast<double>(ctx->total)) + v;
  out.assign(outcome_count(), 1.0 / denom);
  if (ctx == nullptr) return;
  for (const auto& [id, c] : ctx->next) out[id] = (static_cast<double>(c) + 1.0) / denom;
}

std::string NgramModel::serialize() const {
  binary::Writer w;
  w.bytes(kMagic);
  w.u64(corpus_hash_);
  w.u32(static_cast<std::uint32_t>(max_order_));
  w.u32(static_cast<std::uint32_t>(words_.size()));
  for (const auto& word : words_) w.str(word);
  for (auto c : unigrams_) w.u64(c);
  for (const auto& map : contexts_) {
    std::vector<std::uint64_t> keys;
    for (const auto& [k, ctx] : map) keys.push_back(k);
    std::ranges::sort(keys);
    w.u64(keys.size());
    for (auto k : keys) {
      const Context& ctx = map.at(k);
      w.u64(k);
      w.u64(ctx.total);
      w.u32(static_cast<std::uint32_t>(ctx.next.size()));
      for (const auto& [id, c] : ctx.next) {
        w.u32(id);
        w.u32(c);
      }
    }
  }
  return w.data();
}

NgramModel NgramModel::deserialize(std::string_view bytes, const std::string& source) {
  binary::Reader r(bytes, source);
  r.expect_magic(kMagic);
  NgramModel m;
  m.corpus_hash_ = r.u64();
  m.max_order_ = static_cast<int>(r.u32());
  if (m.max_order_ < 2 || m.max_order_ > kMaxOrder) throw DataError(source + ": invalid order");
  const std::size_t words = r.u32();
  for (std::uint32_t i = 0; i < words; ++i) {
    m.words_.push_back(r.str());
    m.ids_.emplace(m.words_.back(), i);
  }
  m.unigrams_.resize(words + 2);
  for (auto& c : m.unigrams_) {
    c = r.u64();
    m.total_unigrams_ += c;
  }
  m.contexts_.resize(m.max_order_ - 1);
  for (auto& map : m.contexts_) {
    const auto n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto key = r.u64();
      Context ctx;
      ctx.total = r.u64();
      const auto next = r.u32();
      for (std::uint32_t j = 0; j < next; ++j) {
        const auto id = r.u32();
        const auto c = r.u32();
        if (id > words) throw DataError(source + ": outcome id out of range");
        ctx.next.emplace_back(id, c);
      }
      map.emplace(key, std::move(ctx));
    }
  }
  r.expect_end();
  return m;
}

void NgramModel::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

NgramModel NgramModel::load(const std::filesystem::path& path) {
  return deserialize(read_file(path), path.string());
}

}  // namespace prose2poem
