#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prose2poem {

using Hemistich = std::vector<std::string>;

struct Couplet {
  Hemistich first;
  Hemistich second;

  std::size_t length() const { return first.size() + second.size(); }
  // Both hemistichs concatenated; the unit for co-occurrence and embeddings.
  std::vector<std::string> tokens() const;

  bool operator==(const Couplet&) const = default;
};

// Dense bijection word <-> id, ids assigned in first-seen order.
class Vocabulary {
 public:
  std::uint32_t add(std::string_view word);
  std::optional<std::uint32_t> id(std::string_view word) const;
  const std::string& word(std::uint32_t id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> ids_;
};

class Corpus {
 public:
  Corpus() = default;
  // Throws EmptyCorpusError when `couplets` is empty.
  static Corpus from_couplets(std::vector<Couplet> couplets);

  const std::vector<Couplet>& couplets() const { return couplets_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::size_t size() const { return couplets_.size(); }
  bool empty() const { return couplets_.empty(); }

  // Fingerprint of the normalized corpus text; artifacts built from this
  // corpus record it so mismatched resource sets are detected at load time.
  std::uint64_t hash() const { return hash_; }

  // One couplet per line, hemistichs joined by TAB, tokens by single spaces.
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<Couplet> couplets_;
  Vocabulary vocabulary_;
  std::uint64_t hash_ = 0;
};

struct IngestResult {
  Corpus corpus;
  std::size_t skipped = 0;
};

// Parses "hemistich1\themistich2". Returns nullopt for malformed lines: no
// TAB or more than one, an empty hemistich after tokenization, or a reserved
// token.
std::optional<Couplet> parse_couplet_line(std::string_view line);

// Reads a UTF-8 couplet corpus. Blank lines are ignored; malformed lines are
// counted in `skipped`. Throws IoError if unreadable and EmptyCorpusError if
// no line is well-formed.
IngestResult ingest_corpus(const std::filesystem::path& path);
IngestResult ingest_corpus_text(std::string_view text);

inline constexpr int kMaxIndex = 10;

// IF_i(w): number of hemistichs in which w sits at 1-based position i, for
// i in 1..10. Positions past 10 are ignored. Also keeps total corpus counts
// of every word (all positions), used to rank keywords by frequency.
class IndexFrequencyTable {
 public:
  std::uint64_t count(int index, std::string_view word) const;
  std::uint64_t corpus_count(std::string_view word) const;
  // True when the word has nonzero IF at one of the ten indices.
  bool placeable(std::string_view word) const;
  std::uint64_t index_total(int index) const;
  std::uint64_t hemistich_count() const { return hemistichs_; }

  void add(int index, const std::string& word, std::uint64_t n = 1);
  void add_corpus_count(const std::string& word, std::uint64_t n = 1);
  void add_hemistich() { ++hemistichs_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  using Counts = std::unordered_map<std::string, std::uint64_t, Hash, std::equal_to<>>;
  std::array<Counts, kMaxIndex> by_index_;
  std::array<std::uint64_t, kMaxIndex> index_totals_{};
  Counts corpus_counts_;
  std::uint64_t hemistichs_ = 0;
};

IndexFrequencyTable build_index_frequencies(const Corpus& corpus);

struct CorpusStats {
  std::size_t couplets = 0;
  std::size_t hemistichs = 0;
  std::size_t tokens = 0;
  std::size_t vocabulary = 0;
  std::size_t hemistichs_within_cap = 0;  // hemistichs of <= 10 tokens
  std::size_t longest_hemistich = 0;

  double fraction_within_cap() const {
    return hemistichs == 0 ? 0.0 : static_cast<double>(hemistichs_within_cap) / hemistichs;
  }
};

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace prose2poem
