#include "prose2poem/eval.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "prose2poem/error.h"
#include "prose2poem/text.h"

namespace prose2poem {

using nlohmann::json;

namespace {

using Counts = std::map<std::vector<std::string>, std::size_t>;

Counts ngram_counts(std::span<const std::string> tokens, std::size_t n) {
  Counts out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return out;
}

std::size_t clipped_overlap(const Counts& cand, const Counts& ref) {
  std::size_t hits = 0;
  for (const auto& [gram, c] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) hits += std::min(c, it->second);
  }
  return hits;
}

void require_tokens(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) throw Error("cannot score an empty sequence");
}

double f1(double precision, double recall) {
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

std::vector<std::string> poem_tokens(const std::vector<Couplet>& poem) {
  std::vector<std::string> out;
  for (const auto& c : poem) {
    out.insert(out.end(), c.first.begin(), c.first.end());
    out.insert(out.end(), c.second.begin(), c.second.end());
  }
  return out;
}

}  // namespace

double bleu(std::span<const std::string> candidate, std::span<const std::string> reference, int n) {
  require_tokens(candidate, reference);
  if (n < 1 || n > 4) throw Error("BLEU order must lie in 1..4");
  double log_sum = 0.0;
  int orders = 0;
  for (int k = 1; k <= n; ++k) {
    if (static_cast<std::size_t>(k) > candidate.size()) break;
    const auto cand = ngram_counts(candidate, k);
    const std::size_t total = candidate.size() - k + 1;
    const std::size_t hits = clipped_overlap(cand, ngram_counts(reference, k));
    if (hits == 0) return 0.0;
    log_sum += std::log(static_cast<double>(hits) / static_cast<double>(total));
    ++orders;
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / orders);
}

double rouge(std::span<const std::string> candidate, std::span<const std::string> reference,
             RougeVariant variant) {
  require_tokens(candidate, reference);
  if (variant == RougeVariant::lcs) {
    std::vector<std::size_t> prev(reference.size() + 1, 0);
    std::vector<std::size_t> cur(reference.size() + 1, 0);
    for (const auto& a : candidate) {
      for (std::size_t j = 1; j <= reference.size(); ++j) {
        cur[j] = a == reference[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
      }
      std::swap(prev, cur);
    }
    const double lcs = static_cast<double>(prev.back());
    return f1(lcs / static_cast<double>(candidate.size()), lcs / static_cast<double>(reference.size()));
  }
  const std::size_t n = variant == RougeVariant::one ? 1 : 2;
  if (candidate.size() < n || reference.size() < n) {
    // No n-grams on at least one side: identical sequences still match.
    return std::ranges::equal(candidate, reference) ? 1.0 : 0.0;
  }
  const double hits = static_cast<double>(
      clipped_overlap(ngram_counts(candidate, n), ngram_counts(reference, n)));
  return f1(hits / static_cast<double>(candidate.size() - n + 1),
            hits / static_cast<double>(reference.size() - n + 1));
}

double perplexity(std::span<const double> probabilities) {
  if (probabilities.empty()) throw Error("perplexity of an empty test set");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0 && p <= 1.0)) throw Error("probability outside (0, 1]: " + std::to_string(p));
    sum += std::log2(p);
  }
  return std::exp2(-sum / static_cast<double>(probabilities.size()));
}

double perplexity(const NgramModel& model, std::span<const Couplet> test) {
  std::vector<double> probs;
  std::vector<std::string> ctx(1);
  auto add = [&](const Hemistich& h) {
    ctx[0] = std::string(kBeginToken);
    for (const auto& t : h) {
      probs.push_back(model.prob(2, ctx, t));
      ctx[0] = t;
    }
    probs.push_back(model.prob(2, ctx, kEndToken));
  };
  for (const auto& c : test) {
    add(c.first);
    add(c.second);
  }
  return perplexity(probs);
}

AffinityClassifier AffinityClassifier::train(std::span<const AffinityExample> examples,
                                             const EmbeddingTable& embeddings) {
  AffinityClassifier out;
  const std::size_t dim = embeddings.dim();
  std::array<std::vector<double>, 4> sums;
  std::array<std::size_t, 4> counts{};
  for (auto& s : sums) s.assign(dim, 0.0);
  for (const auto& ex : examples) {
    std::size_t known = 0;
    std::vector<double> mean(dim, 0.0);
    for (const auto& t : ex.couplet.tokens()) {
      if (!embeddings.contains(t)) continue;
      const auto v = embeddings.vector(t);
      for (std::size_t d = 0; d < dim; ++d) mean[d] += v[d];
      ++known;
    }
    if (known == 0) continue;
    const auto label = static_cast<std::size_t>(ex.label);
    for (std::size_t d = 0; d < dim; ++d) sums[label][d] += mean[d] / static_cast<double>(known);
    ++counts[label];
  }
  bool any = false;
  for (std::size_t l = 0; l < 4; ++l) {
    if (counts[l] == 0) continue;
    for (auto& x : sums[l]) x /= static_cast<double>(counts[l]);
    out.centroids_[l] = std::move(sums[l]);
    any = true;
  }
  if (!any) throw Error("no affinity example has an embedded word");
  out.embeddings_ = &embeddings;
  return out;
}

AffinityLabel AffinityClassifier::classify(const Couplet& couplet) const {
  if (!trained()) throw Error("affinity classifier is not trained");
  const std::size_t dim = embeddings_->dim();
  std::vector<double> mean(dim, 0.0);
  std::size_t known = 0;
  for (const auto& t : couplet.tokens()) {
    if (!embeddings_->contains(t)) continue;
    const auto v = embeddings_->vector(t);
    for (std::size_t d = 0; d < dim; ++d) mean[d] += v[d];
    ++known;
  }
  std::optional<std::size_t> best;
  double best_sim = 0.0;
  for (std::size_t l = 0; l < 4; ++l) {
    if (!centroids_[l]) continue;
    if (known == 0) return kAffinityLabels[l];
    const auto& c = *centroids_[l];
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      dot += mean[d] * c[d];
      na += mean[d] * mean[d];
      nb += c[d] * c[d];
    }
    const double sim = na == 0.0 || nb == 0.0 ? 0.0 : dot / std::sqrt(na * nb);
    if (!best || sim > best_sim) {
      best = l;
      best_sim = sim;
    }
  }
  return kAffinityLabels[*best];
}

double semantic_affinity(std::span<const Couplet> generated, std::span<const Couplet> reference,
                         const AffinityClassifier& classifier) {
  if (generated.size() != reference.size()) {
    throw Error("semantic affinity needs as many references as generated couplets");
  }
  if (generated.empty()) throw Error("semantic affinity of an empty set");
  std::size_t same = 0;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    same += classifier.classify(generated[i]) == classifier.classify(reference[i]) ? 1 : 0;
  }
  return static_cast<double>(same) / static_cast<double>(generated.size());
}

bool validate_format(std::span<const Couplet> poem, PoetryFormat format, const RhymeLexicon& lexicon) {
  if (!accepts_couplets(format, poem.size())) return false;
  const auto scheme = rhyme_scheme(format, poem.size());
  std::map<int, std::vector<std::string>> endings;
  for (std::size_t c = 0; c < poem.size(); ++c) {
    for (int side = 0; side < 2; ++side) {
      const int label = scheme[c][side];
      if (label == kFreeLabel) continue;
      const auto& h = side == 0 ? poem[c].first : poem[c].second;
      if (h.empty()) return false;
      endings[label].push_back(h.back());
    }
  }
  for (const auto& [label, words] : endings) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = i + 1; j < words.size(); ++j) {
        if (!rhyme_check(words[i], words[j], lexicon)) return false;
      }
    }
  }
  return true;
}

EvalReport evaluate(std::span<const EvalSample> samples, const EvalOptions& options) {
  if (samples.empty()) throw Error("nothing to evaluate");
  EvalReport report;
  report.samples = samples.size();
  std::array<double, 3> bleu_sum{};
  std::array<double, 3> rouge_sum{};
  std::size_t affinity_hits = 0;
  bool all_valid = true;
  bool any_format = false;
  std::vector<Couplet> pooled;

  for (const auto& s : samples) {
    SampleScores scores;
    const auto cand = poem_tokens(s.generated);
    const auto ref = poem_tokens(s.reference);
    if (options.bleu) {
      for (int n = 1; n <= 3; ++n) scores.bleu[n - 1] = bleu(cand, ref, n);
      for (int i = 0; i < 3; ++i) bleu_sum[i] += scores.bleu[i];
    }
    if (options.rouge) {
      scores.rouge = {rouge(cand, ref, RougeVariant::one), rouge(cand, ref, RougeVariant::two),
                      rouge(cand, ref, RougeVariant::lcs)};
      for (int i = 0; i < 3; ++i) rouge_sum[i] += scores.rouge[i];
    }
    if (options.model != nullptr) scores.perplexity = perplexity(*options.model, s.generated);
    if (options.classifier != nullptr) {
      const Couplet g{poem_tokens(s.generated), {}};
      const Couplet r{ref, {}};
      scores.affinity_match = options.classifier->classify(g) == options.classifier->classify(r);
      affinity_hits += *scores.affinity_match ? 1 : 0;
    }
    if (options.rhymes != nullptr && s.format) {
      scores.format_valid = validate_format(s.generated, *s.format, *options.rhymes);
      all_valid = all_valid && *scores.format_valid;
      any_format = true;
    }
    pooled.insert(pooled.end(), s.generated.begin(), s.generated.end());
    report.per_sample.push_back(std::move(scores));
  }

  const double n = static_cast<double>(samples.size());
  if (options.bleu) {
    report.bleu = std::array<double, 3>{};
    for (int i = 0; i < 3; ++i) (*report.bleu)[i] = bleu_sum[i] / n;
  }
  if (options.rouge) {
    report.rouge = std::array<double, 3>{};
    for (int i = 0; i < 3; ++i) (*report.rouge)[i] = rouge_sum[i] / n;
  }
  if (options.model != nullptr) report.perplexity = perplexity(*options.model, pooled);
  if (options.classifier != nullptr) report.semantic_affinity = static_cast<double>(affinity_hits) / n;
  if (any_format) report.format_valid = all_valid;
  return report;
}

std::string report_to_json(const EvalReport& report) {
  json doc = {{"samples", report.samples}};
  if (report.bleu) doc["bleu"] = {{"bleu1", (*report.bleu)[0]}, {"bleu2", (*report.bleu)[1]}, {"bleu3", (*report.bleu)[2]}};
  if (report.rouge) doc["rouge"] = {{"rouge1", (*report.rouge)[0]}, {"rouge2", (*report.rouge)[1]}, {"rougeL", (*report.rouge)[2]}};
  if (report.perplexity) doc["perplexity"] = *report.perplexity;
  if (report.semantic_affinity) doc["semantic_affinity"] = *report.semantic_affinity;
  if (report.format_valid) doc["format_valid"] = *report.format_valid;
  json per = json::array();
  for (const auto& s : report.per_sample) {
    json entry = json::object();
    if (report.bleu) entry["bleu"] = s.bleu;
    if (report.rouge) entry["rouge"] = s.rouge;
    if (s.perplexity) entry["perplexity"] = *s.perplexity;
    if (s.affinity_match) entry["affinity_match"] = *s.affinity_match;
    if (s.format_valid) entry["format_valid"] = *s.format_valid;
    per.push_back(std::move(entry));
  }
  doc["per_sample"] = std::move(per);
  return doc.dump(2) + "\n";
}

}  // namespace prose2poem
