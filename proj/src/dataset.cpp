#include "prose2poem/dataset.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "prose2poem/error.h"
#include "prose2poem/random.h"
#include "prose2poem/text.h"

namespace prose2poem {
namespace {

using nlohmann::json;

// Above this many possible variants per pair, variants are sampled instead
// of enumerated.
constexpr std::size_t kEnumerationLimit = 4096;

json parse_object(std::string_view line, const std::string& source, std::size_t number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(source, number, e.what());
  }
  if (!j.is_object()) throw ParseError(source, number, "expected a JSON object");
  return j;
}

std::string require_string(const json& j, const char* key, const std::string& source,
                           std::size_t number) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(source, number, std::string("missing string \"") + key + "\"");
  }
  return it->get<std::string>();
}

std::string pair_key(const ParallelPair& p) {
  std::string key = detokenize(p.prose);
  for (const auto& c : p.poem) {
    key += '\x1f';
    key += detokenize(c.first);
    key += '\t';
    key += detokenize(c.second);
  }
  return key;
}

}  // namespace

std::vector<ParallelPair> parse_parallel_pairs(std::string_view text, const std::string& source) {
  std::vector<ParallelPair> pairs;
  for_each_line(text, [&](std::size_t number, std::string_view line) {
    const json j = parse_object(line, source, number);
    ParallelPair pair;
    pair.prose = tokenize(require_string(j, "prose", source, number));
    auto it = j.find("couplets");
    if (it == j.end() || !it->is_array()) {
      throw ParseError(source, number, "missing list \"couplets\"");
    }
    for (const auto& c : *it) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_string()) {
        throw ParseError(source, number, "each couplet must be [\"h1\", \"h2\"]");
      }
      Couplet couplet{tokenize(c[0].get<std::string>()), tokenize(c[1].get<std::string>())};
      if (couplet.first.empty() || couplet.second.empty()) {
        throw ParseError(source, number, "empty hemistich");
      }
      pair.poem.push_back(std::move(couplet));
    }
    if (pair.prose.empty() || pair.poem.empty()) {
      throw ParseError(source, number, "prose and couplets must both be non-empty");
    }
    pairs.push_back(std::move(pair));
  });
  return pairs;
}

std::vector<ParallelPair> load_parallel_pairs(const std::filesystem::path& path) {
  return parse_parallel_pairs(read_file(path), path.string());
}

std::string serialize_parallel_pairs(const std::vector<ParallelPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    json couplets = json::array();
    for (const auto& c : p.poem) couplets.push_back({detokenize(c.first), detokenize(c.second)});
    out += json{{"prose", detokenize(p.prose)}, {"couplets", couplets}}.dump();
    out.push_back('\n');
  }
  return out;
}

std::string_view label_name(AffinityLabel label) {
  switch (label) {
    case AffinityLabel::divine: return "Divine";
    case AffinityLabel::ethical: return "Ethical";
    case AffinityLabel::amorous: return "Amorous";
    case AffinityLabel::philosophical: return "Philosophical";
  }
  return "";
}

std::optional<AffinityLabel> parse_label(std::string_view name) {
  std::string lower(name);
  std::ranges::transform(lower, lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (auto label : kAffinityLabels) {
    std::string candidate(label_name(label));
    std::ranges::transform(candidate, candidate.begin(),
                           [](unsigned char c) { return std::tolower(c); });
    if (candidate == lower) return label;
  }
  return std::nullopt;
}

std::vector<AffinityExample> parse_affinity_dataset(std::string_view text,
                                                    const std::string& source) {
  std::vector<AffinityExample> out;
  for_each_line(text, [&](std::size_t number, std::string_view line) {
    const json j = parse_object(line, source, number);
    Couplet c{tokenize(require_string(j, "first", source, number)),
              tokenize(require_string(j, "second", source, number))};
    if (c.first.empty() || c.second.empty()) throw ParseError(source, number, "empty hemistich");
    const auto label = parse_label(require_string(j, "label", source, number));
    if (!label) throw ParseError(source, number, "unknown affinity label");
    out.push_back({std::move(c), *label});
  });
  return out;
}

std::vector<AffinityExample> load_affinity_dataset(const std::filesystem::path& path) {
  return parse_affinity_dataset(read_file(path), path.string());
}

std::vector<ParallelPair> augment_parallel_pairs(const std::vector<ParallelPair>& pairs,
                                                 const SynonymLexicon& lexicon,
                                                 std::size_t factor, std::uint64_t seed) {
  if (factor == 0) throw Error("augmentation factor must be >= 1");
  std::vector<ParallelPair> out;
  std::unordered_set<std::string> seen;
  for (const auto& p : pairs) seen.insert(pair_key(p));

  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const ParallelPair& original = pairs[pi];
    out.push_back(original);
    if (factor == 1) continue;

    std::vector<std::size_t> positions;
    std::vector<const std::vector<std::string>*> options;
    std::size_t total = 1;
    for (std::size_t i = 0; i < original.prose.size(); ++i) {
      const auto* entry = lexicon.find(original.prose[i]);
      if (entry == nullptr || entry->synonyms.empty()) continue;
      positions.push_back(i);
      options.push_back(&entry->synonyms);
      total = std::min(kEnumerationLimit + 1, total * (entry->synonyms.size() + 1));
    }
    if (positions.empty()) continue;

    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (pi + 1)));
    const std::size_t wanted = factor - 1;
    std::size_t produced = 0;
    auto emit = [&](const std::vector<std::size_t>& choice) {
      ParallelPair variant = original;
      for (std::size_t k = 0; k < positions.size(); ++k) {
        if (choice[k] != 0) variant.prose[positions[k]] = (*options[k])[choice[k] - 1];
      }
      if (seen.insert(pair_key(variant)).second) {
        out.push_back(std::move(variant));
        ++produced;
      }
    };

    if (total <= kEnumerationLimit) {
      // Mixed-radix walk over every substitution pattern except identity.
      std::vector<std::vector<std::size_t>> all;
      std::vector<std::size_t> digits(positions.size(), 0);
      while (true) {
        std::size_t k = 0;
        while (k < digits.size() && ++digits[k] > options[k]->size()) digits[k++] = 0;
        if (k == digits.size()) break;
        all.push_back(digits);
      }
      rng.shuffle(all);
      for (const auto& choice : all) {
        if (produced == wanted) break;
        emit(choice);
      }
    } else {
      const std::size_t attempts = 32 * wanted;
      for (std::size_t a = 0; a < attempts && produced < wanted; ++a) {
        std::vector<std::size_t> choice(positions.size(), 0);
        bool any = false;
        for (std::size_t k = 0; k < positions.size(); ++k) {
          if (rng.index(2) == 1) {
            choice[k] = 1 + rng.index(options[k]->size());
            any = true;
          }
        }
        if (!any) {
          const std::size_t k = rng.index(positions.size());
          choice[k] = 1 + rng.index(options[k]->size());
        }
        emit(choice);
      }
    }
  }
  return out;
}

std::size_t mask_count(double ratio, std::size_t length) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw Error("mask ratio must lie in [0, 1]");
  const double scaled = ratio * static_cast<double>(length);
  const auto n = static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
  return std::min(n, length);
}

std::vector<MaskedExample> make_mlm_dataset(const Corpus& corpus, double mask_ratio,
                                            MaskLevel level, std::uint64_t seed) {
  mask_count(mask_ratio, 0);
  Rng rng(seed);
  std::vector<MaskedExample> out;
  auto mask_unit = [&](std::vector<std::string> unit) {
    MaskedExample ex{unit, unit};
    std::vector<std::size_t> order(unit.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t n = mask_count(mask_ratio, unit.size());
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(order[i], order[i + rng.index(order.size() - i)]);
      ex.masked[order[i]] = std::string(kMaskToken);
    }
    out.push_back(std::move(ex));
  };
  for (const auto& c : corpus.couplets()) {
    if (level == MaskLevel::couplet) {
      mask_unit(c.tokens());
    } else {
      mask_unit(c.first);
      mask_unit(c.second);
    }
  }
  return out;
}

}  // namespace prose2poem
