#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prose2poem/assoc_graph.h"
#include "prose2poem/augmentation.h"
#include "prose2poem/corpus.h"
#include "prose2poem/decoder.h"
#include "prose2poem/embeddings.h"
#include "prose2poem/format.h"
#include "prose2poem/keywords.h"
#include "prose2poem/lexicon.h"
#include "prose2poem/ngram.h"
#include "prose2poem/partitioning.h"
#include "prose2poem/placement.h"
#include "prose2poem/predictor.h"
#include "prose2poem/remote.h"

namespace prose2poem {

// Everything a translation reads. Immutable once built; one instance may
// serve concurrent translations.
struct Resources {
  Corpus corpus;
  IndexFrequencyTable frequencies;
  SynonymLexicon synonyms;
  RhymeLexicon rhymes;
  EmbeddingTable embeddings;
  AssociationGraph graph;
  NgramModel ngram;
};

// File names inside a resource directory.
namespace artifact {
inline constexpr const char* kCorpus = "corpus.tsv";
inline constexpr const char* kSynonyms = "synonyms.jsonl";
inline constexpr const char* kRhymes = "rhymes.jsonl";
inline constexpr const char* kAffinity = "affinity.jsonl";
inline constexpr const char* kEmbeddings = "embeddings.bin";
inline constexpr const char* kGraph = "graph.bin";
inline constexpr const char* kNgram = "ngram.bin";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifact

// Trains embeddings and builds the graph and n-gram model in memory.
Resources build_resources(Corpus corpus, SynonymLexicon synonyms, RhymeLexicon rhymes,
                          const EmbeddingOptions& embedding = {});

// Writes every artifact plus manifest.json into `dir` (created if needed).
void save_resources(const Resources& resources, const std::filesystem::path& dir);

// Loads a directory written by save_resources or by the CLI build steps.
// Throws IoError for a missing file and DataError when an artifact was built
// from a different corpus than corpus.tsv.
Resources load_resources(const std::filesystem::path& dir);

struct InitialTranslation {
  enum class Source { passthrough, external };

  std::vector<std::string> tokens;  // I_1..I_m
  std::vector<Span> spans;          // contiguous partition of tokens
  Source source = Source::passthrough;
};

class InitialTranslator {
 public:
  virtual ~InitialTranslator() = default;
  virtual InitialTranslation translate(std::string_view text) const = 0;
};

// Identity translation: the input is tokenized as is. Lines and TAB-separated
// segments become spans; a single segment of two or more tokens is split
// into two halves. Throws Error when the text has no tokens.
class PassthroughTranslator : public InitialTranslator {
 public:
  InitialTranslation translate(std::string_view text) const override;
};

enum class PredictorKind { ngram, remote };

struct PipelineConfig {
  PoetryFormat format = PoetryFormat::ghazal;
  SideCapacity capacity;
  DecoderConfig decoder;
  PredictorKind predictor = PredictorKind::ngram;
  std::string endpoint;
  RemoteOptions remote;
  std::uint64_t seed = 0;
  std::optional<std::size_t> couplets;  // override of the computed count
  KeywordOptions keywords;
  PlacementOptions placement;
  std::size_t candidate_cap = 20000;

  void validate() const;
};

std::unique_ptr<MaskPredictor> make_predictor(const PipelineConfig& config,
                                              const Resources& resources);

struct Provenance {
  KeywordSet extracted;
  std::vector<std::string> unplaceable;  // extracted keywords absent from positions 1..10
  std::size_t computed_couplets = 0;     // ceil(placed / 10) of the extracted keywords
  std::size_t couplets = 0;              // count actually generated
  std::string couplet_adjustment;        // "", "override" or "format"
  std::size_t required_keywords = 0;
  std::size_t shortfall = 0;             // keywords the synonym lexicon could not supply
  AugmentedKeywords final_keywords;
  PlacementPlan plan;
  SideCapacity capacity;                 // after any degradation
  std::vector<SelectedPair> selected;
  RhymeScheme scheme;
  std::vector<RhymeAssignment> rhymes;
};

struct HeuristicResult {
  std::vector<CoupletMks> pairs;  // formatted, rhyme words in place
  Provenance provenance;
};

// Keyword extraction, placement, augmentation, rebalancing, partitioning and
// formatting. Errors carry the name of the stage that raised them.
HeuristicResult heuristic_h(const InitialTranslation& translation, const Resources& resources,
                            const PipelineConfig& config);

struct GeneratedPoem {
  PoetryFormat format = PoetryFormat::ghazal;
  std::vector<Couplet> couplets;
  std::vector<CoupletMks> pairs;
  std::vector<std::array<double, 2>> partition_scores;
  std::vector<double> decode_scores;
  Provenance provenance;
  std::uint64_t seed = 0;
  std::string predictor;
};

GeneratedPoem translate(const InitialTranslation& translation, const Resources& resources,
                        const PipelineConfig& config, const MaskPredictor& predictor);
GeneratedPoem translate(std::string_view text, const Resources& resources,
                        const PipelineConfig& config);

// {"format", "couplets": [["h1", "h2"], ...], "scores", "provenance"}.
std::string poem_to_json(const GeneratedPoem& poem);
// One couplet per line, hemistichs separated by " / ".
std::string render_text(const GeneratedPoem& poem);

}  // namespace prose2poem
