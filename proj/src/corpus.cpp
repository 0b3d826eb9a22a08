#include "prose2poem/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "prose2poem/error.h"
#include "prose2poem/text.h"

namespace prose2poem {

std::vector<std::string> Couplet::tokens() const {
  std::vector<std::string> out;
  out.reserve(length());
  out.insert(out.end(), first.begin(), first.end());
  out.insert(out.end(), second.begin(), second.end());
  return out;
}

std::uint32_t Vocabulary::add(std::string_view word) {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), id);
  return id;
}

std::optional<std::uint32_t> Vocabulary::id(std::string_view word) const {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  return std::nullopt;
}

Corpus Corpus::from_couplets(std::vector<Couplet> couplets) {
  if (couplets.empty()) throw EmptyCorpusError("corpus has no well-formed couplets");
  Corpus corpus;
  corpus.couplets_ = std::move(couplets);
  for (const auto& c : corpus.couplets_) {
    for (const auto& t : c.first) corpus.vocabulary_.add(t);
    for (const auto& t : c.second) corpus.vocabulary_.add(t);
  }
  corpus.hash_ = fingerprint(corpus.serialize());
  return corpus;
}

std::string Corpus::serialize() const {
  std::string out;
  for (const auto& c : couplets_) {
    out += detokenize(c.first);
    out.push_back('\t');
    out += detokenize(c.second);
    out.push_back('\n');
  }
  return out;
}

void Corpus::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << serialize();
  if (!out) throw IoError("failed writing " + path.string());
}

std::optional<Couplet> parse_couplet_line(std::string_view line) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) return std::nullopt;
  if (line.find('\t', tab + 1) != std::string_view::npos) return std::nullopt;
  Couplet c{tokenize(line.substr(0, tab)), tokenize(line.substr(tab + 1))};
  if (c.first.empty() || c.second.empty()) return std::nullopt;
  auto reserved = [](const std::string& t) { return is_reserved_token(t); };
  if (std::ranges::any_of(c.first, reserved) || std::ranges::any_of(c.second, reserved)) {
    return std::nullopt;
  }
  return c;
}

IngestResult ingest_corpus_text(std::string_view text) {
  std::vector<Couplet> couplets;
  std::size_t skipped = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (auto c = parse_couplet_line(line)) {
      couplets.push_back(std::move(*c));
    } else {
      ++skipped;
    }
  }
  return IngestResult{Corpus::from_couplets(std::move(couplets)), skipped};
}

IngestResult ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading corpus " + path.string());
  return ingest_corpus_text(buffer.str());
}

std::uint64_t IndexFrequencyTable::count(int index, std::string_view word) const {
  if (index < 1 || index > kMaxIndex) return 0;
  const auto& m = by_index_[index - 1];
  auto it = m.find(word);
  return it == m.end() ? 0 : it->second;
}

std::uint64_t IndexFrequencyTable::corpus_count(std::string_view word) const {
  auto it = corpus_counts_.find(word);
  return it == corpus_counts_.end() ? 0 : it->second;
}

bool IndexFrequencyTable::placeable(std::string_view word) const {
  for (int i = 1; i <= kMaxIndex; ++i) {
    if (count(i, word) > 0) return true;
  }
  return false;
}

std::uint64_t IndexFrequencyTable::index_total(int index) const {
  if (index < 1 || index > kMaxIndex) return 0;
  return index_totals_[index - 1];
}

void IndexFrequencyTable::add(int index, const std::string& word, std::uint64_t n) {
  if (index < 1 || index > kMaxIndex) {
    throw Error("index-frequency position out of range: " + std::to_string(index));
  }
  by_index_[index - 1][word] += n;
  index_totals_[index - 1] += n;
}

void IndexFrequencyTable::add_corpus_count(const std::string& word, std::uint64_t n) {
  corpus_counts_[word] += n;
}

IndexFrequencyTable build_index_frequencies(const Corpus& corpus) {
  if (corpus.empty()) throw EmptyCorpusError("cannot build index frequencies of an empty corpus");
  IndexFrequencyTable table;
  auto add_hemistich = [&](const Hemistich& h) {
    table.add_hemistich();
    for (std::size_t i = 0; i < h.size(); ++i) {
      table.add_corpus_count(h[i]);
      if (i < kMaxIndex) table.add(static_cast<int>(i) + 1, h[i]);
    }
  };
  for (const auto& c : corpus.couplets()) {
    add_hemistich(c.first);
    add_hemistich(c.second);
  }
  return table;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  s.couplets = corpus.size();
  s.vocabulary = corpus.vocabulary().size();
  for (const auto& c : corpus.couplets()) {
    for (const Hemistich* h : {&c.first, &c.second}) {
      ++s.hemistichs;
      s.tokens += h->size();
      if (h->size() <= static_cast<std::size_t>(kMaxIndex)) ++s.hemistichs_within_cap;
      s.longest_hemistich = std::max(s.longest_hemistich, h->size());
    }
  }
  return s;
}

}  // namespace prose2poem
