#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prose2poem/corpus.h"
#include "prose2poem/dataset.h"
#include "prose2poem/embeddings.h"
#include "prose2poem/format.h"
#include "prose2poem/lexicon.h"
#include "prose2poem/ngram.h"

namespace prose2poem {

// Single-reference BLEU up to order n (1..4): brevity penalty times the
// geometric mean of clipped n-gram precisions. Orders longer than the
// candidate are left out of the mean; a zero precision gives 0.
// Throws Error on an empty sequence or bad order.
double bleu(std::span<const std::string> candidate, std::span<const std::string> reference, int n);

enum class RougeVariant { one, two, lcs };

// F1 of clipped n-gram overlap (one, two) or of the longest common
// subsequence (lcs). Throws Error on an empty sequence.
double rouge(std::span<const std::string> candidate, std::span<const std::string> reference,
             RougeVariant variant);

// 2^(-(1/N) sum log2 p). Throws Error when empty or a probability is not in
// (0, 1].
double perplexity(std::span<const double> probabilities);

// Perplexity of the model's add-one bigram conditionals over every token and
// the end sentinel of each hemistich. Throws Error on an empty test set.
double perplexity(const NgramModel& model, std::span<const Couplet> test);

// Nearest-centroid classifier over mean word embeddings.
class AffinityClassifier {
 public:
  AffinityClassifier() = default;

  // Examples without any embedded word are ignored. Throws Error when no
  // label ends up with a centroid.
  static AffinityClassifier train(std::span<const AffinityExample> examples,
                                  const EmbeddingTable& embeddings);

  bool trained() const { return embeddings_ != nullptr; }
  // Label whose centroid has the highest cosine similarity to the couplet's
  // mean embedding (ties: declaration order). A couplet with no embedded word
  // gets the first label that has a centroid. Throws Error when untrained.
  AffinityLabel classify(const Couplet& couplet) const;

 private:
  const EmbeddingTable* embeddings_ = nullptr;
  std::array<std::optional<std::vector<double>>, 4> centroids_;
};

// Fraction of index-aligned (generated, reference) pairs that receive the
// same label. Throws Error when the lists differ in size or are empty.
double semantic_affinity(std::span<const Couplet> generated, std::span<const Couplet> reference,
                         const AffinityClassifier& classifier);

// True iff the couplet count suits the format and, for every rhyme label,
// the final tokens of its hemistichs rhyme pairwise.
bool validate_format(std::span<const Couplet> poem, PoetryFormat format, const RhymeLexicon& lexicon);

struct EvalSample {
  std::vector<Couplet> generated;
  std::vector<Couplet> reference;
  std::optional<PoetryFormat> format;  // of the generated poem
};

struct SampleScores {
  std::array<double, 3> bleu{};   // orders 1..3
  std::array<double, 3> rouge{};  // 1, 2, L
  std::optional<double> perplexity;
  std::optional<bool> affinity_match;
  std::optional<bool> format_valid;
};

struct EvalOptions {
  bool bleu = true;
  bool rouge = true;
  const NgramModel* model = nullptr;                // perplexity when set
  const AffinityClassifier* classifier = nullptr;   // semantic affinity when set
  const RhymeLexicon* rhymes = nullptr;             // format validation when set
};

struct EvalReport {
  std::size_t samples = 0;
  std::optional<std::array<double, 3>> bleu;
  std::optional<std::array<double, 3>> rouge;
  std::optional<double> perplexity;
  std::optional<double> semantic_affinity;
  std::optional<bool> format_valid;
  std::vector<SampleScores> per_sample;
};

// Sequence metrics compare all hemistich tokens of a poem, in order, with the
// reference's. Averages are unweighted over samples; perplexity pools all
// generated hemistichs.
EvalReport evaluate(std::span<const EvalSample> samples, const EvalOptions& options);
std::string report_to_json(const EvalReport& report);

}  // namespace prose2poem
