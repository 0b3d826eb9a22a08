#include "prose2poem/format.h"

#include <algorithm>
#include <set>

#include "prose2poem/text.h"

namespace prose2poem {

std::string_view format_name(PoetryFormat format) {
  switch (format) {
    case PoetryFormat::robaei: return "robaei";
    case PoetryFormat::ghazal: return "ghazal";
    case PoetryFormat::ghasideh: return "ghasideh";
    case PoetryFormat::masnavi: return "masnavi";
    case PoetryFormat::ghete: return "ghete";
    case PoetryFormat::dobeiti: return "dobeiti";
  }
  return "";
}

PoetryFormat parse_format(std::string_view name) {
  std::string lower;
  for (unsigned char c : name) {
    if (c == '\'' || c == '-' || c == '_') continue;
    lower.push_back(static_cast<char>(std::tolower(c)));
  }
  for (auto f : kAllFormats) {
    if (format_name(f) == lower) return f;
  }
  throw Error("unknown poetry format: " + std::string(name));
}

std::size_t min_couplets(PoetryFormat) { return 2; }

std::optional<std::size_t> max_couplets(PoetryFormat format) {
  if (format == PoetryFormat::robaei || format == PoetryFormat::dobeiti) return 2;
  return std::nullopt;
}

bool accepts_couplets(PoetryFormat format, std::size_t couplets) {
  const auto hi = max_couplets(format);
  return couplets >= min_couplets(format) && (!hi || couplets <= *hi);
}

RhymeScheme rhyme_scheme(PoetryFormat format, std::size_t couplets) {
  if (!accepts_couplets(format, couplets)) {
    throw InfeasibleError(std::string(format_name(format)) + " cannot have " +
                          std::to_string(couplets) + " couplet(s)");
  }
  RhymeScheme scheme(couplets);
  for (std::size_t c = 0; c < couplets; ++c) {
    switch (format) {
      case PoetryFormat::masnavi:
        scheme[c] = {static_cast<int>(c), static_cast<int>(c)};
        break;
      case PoetryFormat::ghete:
        scheme[c] = {kFreeLabel, 0};
        break;
      default:  // ghazal, ghasideh, robaei, dobeiti
        scheme[c] = {c == 0 ? 0 : kFreeLabel, 0};
        break;
    }
  }
  return scheme;
}

std::string scheme_string(const RhymeScheme& scheme) {
  std::string out;
  for (const auto& couplet : scheme) {
    for (int label : couplet) {
      if (label == kFreeLabel) {
        out.push_back('x');
      } else if (label < 26) {
        out.push_back(static_cast<char>('A' + label));
      } else {
        out += "[" + std::to_string(label) + "]";
      }
    }
  }
  return out;
}

bool rhyme_check(std::string_view a, std::string_view b, const RhymeLexicon& lexicon) {
  if (a == b) return false;
  if (lexicon.contains(a) && lexicon.contains(b)) return lexicon.share_group(a, b);
  const auto ca = to_code_points(a);
  const auto cb = to_code_points(b);
  std::size_t shared = 0;
  while (shared < ca.size() && shared < cb.size() &&
         ca[ca.size() - 1 - shared] == cb[cb.size() - 1 - shared]) {
    ++shared;
  }
  return shared >= 3;
}

std::string select_rhyme(std::span<const std::string> candidates,
                         std::span<const std::string> keywords, const AssociationGraph& graph) {
  if (candidates.empty()) throw Error("no rhyme candidates to choose from");
  if (keywords.empty()) return candidates.front();
  const std::string* best = nullptr;
  double best_mean = 0.0;
  for (const auto& c : candidates) {
    double sum = 0.0;
    for (const auto& k : keywords) sum += graph.score(c, k);
    const double mean = sum / static_cast<double>(keywords.size());
    if (best == nullptr || mean > best_mean || (mean == best_mean && c < *best)) {
      best = &c;
      best_mean = mean;
    }
  }
  return *best;
}

FormattedPairs apply_format(std::vector<CoupletMks> pairs, PoetryFormat format,
                            const RhymeLexicon& lexicon, const AssociationGraph& graph) {
  FormattedPairs out;
  out.scheme = rhyme_scheme(format, pairs.size());
  constexpr std::size_t kLast = kMaxIndex - 1;

  auto mks_at = [&](std::size_t couplet, int side) -> MaskedKeywordSequence& {
    return side == 0 ? pairs[couplet].first : pairs[couplet].second;
  };

  std::vector<int> labels;
  for (std::size_t c = 0; c < out.scheme.size(); ++c) {
    for (int side = 0; side < 2; ++side) {
      const int label = out.scheme[c][side];
      if (label == kFreeLabel) continue;
      if (!mks_at(c, side).is_mask(kLast)) {
        throw Error("rhyme slot of couplet " + std::to_string(c + 1) + " already holds a keyword");
      }
      if (std::ranges::find(labels, label) == labels.end()) labels.push_back(label);
    }
  }

  std::set<std::string> used_words;
  std::set<std::size_t> used_groups;

  auto unused_members = [&](std::size_t group) {
    std::size_t n = 0;
    for (const auto& w : lexicon.groups()[group]) n += used_words.contains(w) ? 0 : 1;
    return n;
  };

  for (int label : labels) {
    RhymeAssignment assignment;
    assignment.label = label;
    for (std::size_t c = 0; c < out.scheme.size(); ++c) {
      for (int side = 0; side < 2; ++side) {
        if (out.scheme[c][side] == label) assignment.positions.emplace_back(c, side);
      }
    }
    const std::size_t need = assignment.positions.size();

    std::optional<std::size_t> chosen_group;
    std::string initial;
    for (bool fresh_only : {true, false}) {
      auto usable_group = [&](std::size_t g) {
        return (!fresh_only || !used_groups.contains(g)) && unused_members(g) >= need;
      };
      std::vector<std::string> eligible;
      for (const auto& w : lexicon.words()) {
        if (used_words.contains(w)) continue;
        if (std::ranges::any_of(lexicon.groups_of(w), usable_group)) eligible.push_back(w);
      }
      if (eligible.empty()) continue;

      const auto [c0, s0] = assignment.positions.front();
      const auto keywords = mks_at(c0, s0).filled();
      std::vector<std::string> pool;
      for (const auto& w : eligible) {
        if (std::ranges::any_of(keywords, [&](const std::string& k) { return graph.score(w, k) > 0.0; })) {
          pool.push_back(w);
        }
      }
      initial = select_rhyme(pool.empty() ? eligible : pool, keywords, graph);
      for (auto g : lexicon.groups_of(initial)) {
        if (usable_group(g)) {
          chosen_group = g;
          break;
        }
      }
      break;
    }
    if (!chosen_group) {
      throw InsufficientRhymesError("no rhyme group has " + std::to_string(need) +
                                    " unused words for label " +
                                    scheme_string({{label, kFreeLabel}}).substr(0, 1));
    }

    assignment.group = *chosen_group;
    used_groups.insert(*chosen_group);
    for (std::size_t p = 0; p < assignment.positions.size(); ++p) {
      const auto [c, side] = assignment.positions[p];
      std::string word;
      if (p == 0) {
        word = initial;
      } else {
        std::vector<std::string> candidates;
        for (const auto& w : lexicon.groups()[*chosen_group]) {
          if (!used_words.contains(w)) candidates.push_back(w);
        }
        word = select_rhyme(candidates, mks_at(c, side).filled(), graph);
      }
      used_words.insert(word);
      assignment.words.push_back(word);
      mks_at(c, side).slots[kLast] = word;
    }
    out.rhymes.push_back(std::move(assignment));
  }
  out.pairs = std::move(pairs);
  return out;
}

}  // namespace prose2poem
