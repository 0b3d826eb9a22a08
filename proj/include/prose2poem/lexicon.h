#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prose2poem {

struct SynonymEntry {
  std::vector<std::string> synonyms;  // most frequent first
  std::vector<std::string> antonyms;
};

// Word -> ranked synonyms. Syn(w, j) is the j-th (1-based) synonym.
class SynonymLexicon {
 public:
  // Adds or extends an entry. Self-synonyms and repeated synonyms are dropped;
  // returns how many were dropped.
  std::size_t add(const std::string& word, const std::vector<std::string>& synonyms,
                  const std::vector<std::string>& antonyms = {});

  const SynonymEntry* find(std::string_view word) const;
  // Empty string when `word` has fewer than `rank` synonyms.
  const std::string& synonym(std::string_view word, std::size_t rank) const;
  std::size_t synonym_count(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::string>& words() const { return order_; }

 private:
  std::unordered_map<std::string, SynonymEntry> entries_;
  std::vector<std::string> order_;
};

// Groups of mutually rhyming words. A word may belong to several groups.
class RhymeLexicon {
 public:
  // Duplicate members are dropped; groups left with fewer than two distinct
  // words are discarded. Returns the number of dropped items (members or
  // whole groups).
  std::size_t add_group(const std::vector<std::string>& words);

  const std::vector<std::vector<std::string>>& groups() const { return groups_; }
  const std::vector<std::size_t>& groups_of(std::string_view word) const;
  bool contains(std::string_view word) const { return !groups_of(word).empty(); }
  bool share_group(std::string_view a, std::string_view b) const;
  // Every lexicon word once, in first-seen order.
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::vector<std::string>> groups_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  std::vector<std::string> words_;
};

template <typename T>
struct Loaded {
  T value;
  std::size_t warnings = 0;
};

// JSON-Lines {"word": str, "synonyms": [str...], "antonyms": [str...]}.
// Throws ParseError naming the offending line.
Loaded<SynonymLexicon> load_synonym_lexicon(const std::filesystem::path& path);
Loaded<SynonymLexicon> parse_synonym_lexicon(std::string_view text,
                                             const std::string& source = "<synonyms>");

// JSON-Lines {"group": [str, str, ...]}.
Loaded<RhymeLexicon> load_rhyme_lexicon(const std::filesystem::path& path);
Loaded<RhymeLexicon> parse_rhyme_lexicon(std::string_view text,
                                         const std::string& source = "<rhymes>");

void save_synonym_lexicon(const SynonymLexicon& lexicon, const std::filesystem::path& path);
void save_rhyme_lexicon(const RhymeLexicon& lexicon, const std::filesystem::path& path);

// Reads a whole file; throws IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Calls fn(line_number, line) for every non-blank line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t number = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    pos = eol + 1;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    fn(number, line);
  }
}

}  // namespace prose2poem
