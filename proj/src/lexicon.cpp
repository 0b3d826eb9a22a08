#include "prose2poem/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prose2poem/error.h"
#include "prose2poem/text.h"

namespace prose2poem {
namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& j, const char* key, const std::string& source,
                                     std::size_t line, bool required) {
  std::vector<std::string> out;
  auto it = j.find(key);
  if (it == j.end()) {
    if (required) throw ParseError(source, line, std::string("missing \"") + key + "\"");
    return out;
  }
  if (!it->is_array()) throw ParseError(source, line, std::string("\"") + key + "\" must be a list");
  for (const auto& item : *it) {
    if (!item.is_string()) {
      throw ParseError(source, line, std::string("\"") + key + "\" must hold strings");
    }
    auto norm = normalize_nfc(item.get<std::string>());
    if (!norm.empty()) out.push_back(std::move(norm));
  }
  return out;
}

json parse_line(std::string_view line, const std::string& source, std::size_t number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(source, number, e.what());
  }
  if (!j.is_object()) throw ParseError(source, number, "expected a JSON object");
  return j;
}

const std::string kEmpty;
const std::vector<std::size_t> kNoGroups;

}  // namespace

std::size_t SynonymLexicon::add(const std::string& word, const std::vector<std::string>& synonyms,
                                const std::vector<std::string>& antonyms) {
  auto [it, inserted] = entries_.try_emplace(word);
  if (inserted) order_.push_back(word);
  auto& entry = it->second;
  std::size_t dropped = 0;
  for (const auto& s : synonyms) {
    if (s == word || std::ranges::find(entry.synonyms, s) != entry.synonyms.end()) {
      ++dropped;
      continue;
    }
    entry.synonyms.push_back(s);
  }
  for (const auto& a : antonyms) {
    if (std::ranges::find(entry.antonyms, a) == entry.antonyms.end()) entry.antonyms.push_back(a);
  }
  return dropped;
}

const SynonymEntry* SynonymLexicon::find(std::string_view word) const {
  auto it = entries_.find(std::string(word));
  return it == entries_.end() ? nullptr : &it->second;
}

const std::string& SynonymLexicon::synonym(std::string_view word, std::size_t rank) const {
  const auto* e = find(word);
  if (e == nullptr || rank == 0 || rank > e->synonyms.size()) return kEmpty;
  return e->synonyms[rank - 1];
}

std::size_t SynonymLexicon::synonym_count(std::string_view word) const {
  const auto* e = find(word);
  return e == nullptr ? 0 : e->synonyms.size();
}

std::size_t RhymeLexicon::add_group(const std::vector<std::string>& words) {
  std::vector<std::string> members;
  std::size_t dropped = 0;
  for (const auto& w : words) {
    if (std::ranges::find(members, w) != members.end()) {
      ++dropped;
      continue;
    }
    members.push_back(w);
  }
  if (members.size() < 2) return dropped + 1;
  const std::size_t id = groups_.size();
  for (const auto& w : members) {
    auto& ids = index_[w];
    if (ids.empty()) words_.push_back(w);
    ids.push_back(id);
  }
  groups_.push_back(std::move(members));
  return dropped;
}

const std::vector<std::size_t>& RhymeLexicon::groups_of(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kNoGroups : it->second;
}

bool RhymeLexicon::share_group(std::string_view a, std::string_view b) const {
  const auto& ga = groups_of(a);
  const auto& gb = groups_of(b);
  for (auto g : ga) {
    if (std::ranges::find(gb, g) != gb.end()) return true;
  }
  return false;
}

Loaded<SynonymLexicon> parse_synonym_lexicon(std::string_view text, const std::string& source) {
  Loaded<SynonymLexicon> out;
  for_each_line(text, [&](std::size_t number, std::string_view line) {
    const json j = parse_line(line, source, number);
    auto word_it = j.find("word");
    if (word_it == j.end() || !word_it->is_string()) {
      throw ParseError(source, number, "missing string \"word\"");
    }
    const std::string word = normalize_nfc(word_it->get<std::string>());
    if (word.empty()) throw ParseError(source, number, "empty \"word\"");
    out.warnings += out.value.add(word, string_list(j, "synonyms", source, number, true),
                                  string_list(j, "antonyms", source, number, false));
  });
  return out;
}

Loaded<RhymeLexicon> parse_rhyme_lexicon(std::string_view text, const std::string& source) {
  Loaded<RhymeLexicon> out;
  for_each_line(text, [&](std::size_t number, std::string_view line) {
    const json j = parse_line(line, source, number);
    out.warnings += out.value.add_group(string_list(j, "group", source, number, true));
  });
  return out;
}

Loaded<SynonymLexicon> load_synonym_lexicon(const std::filesystem::path& path) {
  return parse_synonym_lexicon(read_file(path), path.string());
}

Loaded<RhymeLexicon> load_rhyme_lexicon(const std::filesystem::path& path) {
  return parse_rhyme_lexicon(read_file(path), path.string());
}

void save_synonym_lexicon(const SynonymLexicon& lexicon, const std::filesystem::path& path) {
  std::string out;
  for (const auto& word : lexicon.words()) {
    const auto* e = lexicon.find(word);
    out += json{{"word", word}, {"synonyms", e->synonyms}, {"antonyms", e->antonyms}}.dump();
    out.push_back('\n');
  }
  write_file(path, out);
}

void save_rhyme_lexicon(const RhymeLexicon& lexicon, const std::filesystem::path& path) {
  std::string out;
  for (const auto& g : lexicon.groups()) {
    out += json{{"group", g}}.dump();
    out.push_back('\n');
  }
  write_file(path, out);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace prose2poem
