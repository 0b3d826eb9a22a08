#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prose2poem/corpus.h"
#include "prose2poem/lexicon.h"

namespace prose2poem {

struct ParallelPair {
  std::vector<std::string> prose;
  std::vector<Couplet> poem;

  bool operator==(const ParallelPair&) const = default;
};

// JSON-Lines {"prose": str, "couplets": [["h1", "h2"], ...]}.
std::vector<ParallelPair> parse_parallel_pairs(std::string_view text,
                                               const std::string& source = "<pairs>");
std::vector<ParallelPair> load_parallel_pairs(const std::filesystem::path& path);
std::string serialize_parallel_pairs(const std::vector<ParallelPair>& pairs);

enum class AffinityLabel { divine, ethical, amorous, philosophical };
inline constexpr std::array<AffinityLabel, 4> kAffinityLabels = {
    AffinityLabel::divine, AffinityLabel::ethical, AffinityLabel::amorous,
    AffinityLabel::philosophical};

std::string_view label_name(AffinityLabel label);
std::optional<AffinityLabel> parse_label(std::string_view name);

struct AffinityExample {
  Couplet couplet;
  AffinityLabel label;
};

// JSON-Lines {"first": str, "second": str, "label": str}.
std::vector<AffinityExample> parse_affinity_dataset(std::string_view text,
                                                    const std::string& source = "<affinity>");
std::vector<AffinityExample> load_affinity_dataset(const std::filesystem::path& path);

// Word-substitution augmentation. Every original pair is kept; each pair gains
// up to factor-1 distinct variants in which at least one prose token is
// replaced by one of its synonyms. Pairs whose prose has no lexicon-covered
// token get no variants. Output order: each original followed by its
// variants. Deterministic for a given seed.
std::vector<ParallelPair> augment_parallel_pairs(const std::vector<ParallelPair>& pairs,
                                                 const SynonymLexicon& lexicon,
                                                 std::size_t factor, std::uint64_t seed);

enum class MaskLevel { couplet, hemistich };

struct MaskedExample {
  std::vector<std::string> masked;
  std::vector<std::string> original;
};

// Half-up rounding of ratio * length, the exact mask count per unit.
std::size_t mask_count(double ratio, std::size_t length);

// One example per unit (couplet = both hemistichs concatenated), with exactly
// mask_count(ratio, unit length) tokens replaced by the mask symbol.
std::vector<MaskedExample> make_mlm_dataset(const Corpus& corpus, double mask_ratio,
                                            MaskLevel level, std::uint64_t seed);

}  // namespace prose2poem
