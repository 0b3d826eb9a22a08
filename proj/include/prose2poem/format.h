#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prose2poem/assoc_graph.h"
#include "prose2poem/error.h"
#include "prose2poem/lexicon.h"
#include "prose2poem/partitioning.h"

namespace prose2poem {

enum class PoetryFormat { robaei, ghazal, ghasideh, masnavi, ghete, dobeiti };

inline constexpr std::array<PoetryFormat, 6> kAllFormats = {
    PoetryFormat::robaei,  PoetryFormat::ghazal, PoetryFormat::ghasideh,
    PoetryFormat::masnavi, PoetryFormat::ghete,  PoetryFormat::dobeiti};

std::string_view format_name(PoetryFormat format);
// Case-insensitive; accepts "ghet'e" and "ghete". Throws Error when unknown.
PoetryFormat parse_format(std::string_view name);

// Allowed couplet counts: robaei and dobeiti need exactly 2, the rest at
// least 2.
std::size_t min_couplets(PoetryFormat format);
std::optional<std::size_t> max_couplets(PoetryFormat format);
bool accepts_couplets(PoetryFormat format, std::size_t couplets);

// Rhyme label per hemistich: 0 = A, 1 = B, ...; kFreeLabel = unconstrained.
inline constexpr int kFreeLabel = -1;
using RhymeScheme = std::vector<std::array<int, 2>>;

//   masnavi          AA BB CC ...
//   ghazal, ghasideh AA xA xA ...
//   robaei, dobeiti  AA xA
//   ghete            xA xA ...
// Throws InfeasibleError when the format does not accept `couplets`.
RhymeScheme rhyme_scheme(PoetryFormat format, std::size_t couplets);
std::string scheme_string(const RhymeScheme& scheme);

// True iff the words share a lexicon group, or the lexicon lacks at least one
// of them and they end in the same three or more code points. Identical
// words never rhyme.
bool rhyme_check(std::string_view a, std::string_view b, const RhymeLexicon& lexicon);

// Candidate with the highest mean association g to the keywords (ties: the
// lexicographically smallest). With no keywords, the first candidate.
// Throws Error when `candidates` is empty.
std::string select_rhyme(std::span<const std::string> candidates,
                         std::span<const std::string> keywords, const AssociationGraph& graph);

class InsufficientRhymesError : public Error {
 public:
  using Error::Error;
};

struct RhymeAssignment {
  int label = 0;
  std::size_t group = 0;                         // rhyme lexicon group id
  std::vector<std::string> words;                // R_1..R_o in scheme order
  std::vector<std::pair<std::size_t, int>> positions;  // (couplet, side)
};

struct FormattedPairs {
  std::vector<CoupletMks> pairs;
  RhymeScheme scheme;
  std::vector<RhymeAssignment> rhymes;
};

// Writes a rhyme word into slot 10 of every scheme-constrained hemistich.
//
// Per label, in order of first appearance: the initial rhyme is chosen by
// select_rhyme among lexicon words that have a nonzero association with a
// keyword of the hemistich it will end (falling back to the whole lexicon),
// restricted to groups with enough unused members for the label; the other
// positions draw from the same group without repetition. Labels prefer
// groups not used by earlier labels.
//
// Throws InfeasibleError for a couplet count the format rejects, Error if a
// constrained slot 10 is not a mask, and InsufficientRhymesError when no
// group is large enough.
FormattedPairs apply_format(std::vector<CoupletMks> pairs, PoetryFormat format,
                            const RhymeLexicon& lexicon, const AssociationGraph& graph);

}  // namespace prose2poem
