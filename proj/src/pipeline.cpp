#include "prose2poem/pipeline.h"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "prose2poem/error.h"
#include "prose2poem/text.h"

namespace prose2poem {

using nlohmann::json;

namespace {

constexpr int kMaxRecounts = 3;

template <typename Fn>
auto in_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(name);
    throw;
  }
}

std::size_t fit_to_format(std::size_t couplets, PoetryFormat format) {
  couplets = std::max(couplets, min_couplets(format));
  if (auto hi = max_couplets(format)) couplets = std::min(couplets, *hi);
  return couplets;
}

std::string origin_name(KeywordOrigin origin) {
  return origin == KeywordOrigin::original ? "original" : "synonym";
}

}  // namespace

InitialTranslation PassthroughTranslator::translate(std::string_view text) const {
  InitialTranslation out;
  out.source = InitialTranslation::Source::passthrough;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find_first_of("\n\t", start);
    if (end == std::string_view::npos) end = text.size();
    auto tokens = tokenize(text.substr(start, end - start));
    if (!tokens.empty()) {
      out.spans.emplace_back(out.tokens.size(), out.tokens.size() + tokens.size());
      out.tokens.insert(out.tokens.end(), tokens.begin(), tokens.end());
    }
    start = end + 1;
  }
  if (out.tokens.empty()) throw Error("input text has no tokens");
  if (out.spans.size() == 1 && out.tokens.size() >= 2) {
    const std::size_t half = out.tokens.size() / 2;
    out.spans = {{0, half}, {half, out.tokens.size()}};
  }
  return out;
}

void PipelineConfig::validate() const {
  capacity.validate();
  decoder.validate();
  if (candidate_cap == 0) throw Error("candidate cap must be positive");
  if (couplets && !accepts_couplets(format, *couplets)) {
    throw Error(std::string(format_name(format)) + " cannot have " + std::to_string(*couplets) +
                " couplet(s)");
  }
  if (predictor == PredictorKind::remote && endpoint.empty()) {
    throw Error("remote predictor needs an endpoint");
  }
}

std::unique_ptr<MaskPredictor> make_predictor(const PipelineConfig& config,
                                              const Resources& resources) {
  if (config.predictor == PredictorKind::remote) {
    return std::make_unique<RemotePredictor>(config.endpoint, config.remote);
  }
  return std::make_unique<NgramPredictor>(resources.ngram);
}

HeuristicResult heuristic_h(const InitialTranslation& translation, const Resources& res,
                            const PipelineConfig& config) {
  config.validate();
  HeuristicResult out;
  Provenance& prov = out.provenance;

  prov.extracted = in_stage("keywords", [&] {
    return extract_keywords(translation.tokens, translation.spans, config.keywords);
  });

  // Keywords that never occur at positions 1..10 cannot be placed; they are
  // reported instead of aborting the translation.
  KeywordSet placeable;
  for (std::size_t i = 0; i < prov.extracted.size(); ++i) {
    const auto& k = prov.extracted.keywords[i];
    if (res.frequencies.placeable(k)) {
      placeable.keywords.push_back(k);
      placeable.frequencies.push_back(prov.extracted.frequencies[i]);
    } else {
      prov.unplaceable.push_back(k);
    }
  }

  const auto initial_plan = in_stage("placement", [&] {
    if (placeable.keywords.empty()) {
      throw InfeasibleError("no extracted keyword occurs in the corpus at positions 1..10");
    }
    return place_keywords(placeable.keywords, res.frequencies, config.placement);
  });

  prov.computed_couplets = couplet_count(initial_plan);
  std::size_t couplets = prov.computed_couplets;
  bool fixed = false;
  if (config.couplets) {
    couplets = *config.couplets;
    prov.couplet_adjustment = "override";
    fixed = true;
  } else if (!accepts_couplets(config.format, couplets)) {
    couplets = fit_to_format(couplets, config.format);
    prov.couplet_adjustment = "format";
    fixed = true;
  }

  const auto accept = [&](const std::string& w) { return res.frequencies.placeable(w); };
  const auto expanded = in_stage("augmentation", [&] {
    auto fk = expand_synonyms(placeable, res.synonyms);
    std::erase_if(fk.entries, [&](const FinalKeyword& k) { return !accept(k.word); });
    return fk;
  });

  for (int round = 0;; ++round) {
    prov.required_keywords = required_keywords(couplets, config.capacity);
    prov.shortfall = 0;
    prov.final_keywords = in_stage("rebalance", [&] {
      const auto fk_plan = place_keywords(expanded.words(), res.frequencies, config.placement);
      try {
        return rebalance(expanded, prov.required_keywords, fk_plan, res.frequencies, res.synonyms,
                         accept);
      } catch (const ShortfallError& e) {
        prov.shortfall = e.deficit();
        return e.partial();
      }
    });
    prov.plan = in_stage("placement", [&] {
      return place_keywords(prov.final_keywords.words(), res.frequencies, config.placement);
    });
    if (fixed || prov.plan.size() == 0 || round + 1 >= kMaxRecounts) break;
    const auto recount = fit_to_format(couplet_count(prov.plan), config.format);
    if (recount == couplets) break;
    couplets = recount;
  }
  prov.couplets = couplets;
  prov.scheme = rhyme_scheme(config.format, couplets);

  SelectOptions select;
  for (const auto& labels : prov.scheme) {
    select.reserve_last_slot.push_back({labels[0] != kFreeLabel, labels[1] != kFreeLabel});
  }

  // Shrink the per-side keyword counts, larger side first, until enough
  // disjoint sequences exist. Zero keywords always succeed.
  SideCapacity cap = config.capacity;
  prov.selected = in_stage("partitioning", [&] {
    for (;;) {
      try {
        const auto first =
            enumerate_candidates(prov.plan.ik, cap.first, Side::first, res.graph, config.candidate_cap);
        const auto second = enumerate_candidates(prov.plan.ik, cap.second, Side::second, res.graph,
                                                 config.candidate_cap);
        return select_partitions(first, second, couplets, select);
      } catch (const InfeasibleError&) {
        if (cap.first == 0 && cap.second == 0) throw;
        if (cap.first >= cap.second) {
          --cap.first;
        } else {
          --cap.second;
        }
      }
    }
  });
  prov.capacity = cap;

  std::vector<CoupletMks> pairs;
  for (const auto& s : prov.selected) pairs.push_back(s.pair);
  auto formatted = in_stage("format", [&] {
    return apply_format(std::move(pairs), config.format, res.rhymes, res.graph);
  });
  prov.rhymes = std::move(formatted.rhymes);
  out.pairs = std::move(formatted.pairs);
  return out;
}

GeneratedPoem translate(const InitialTranslation& translation, const Resources& resources,
                        const PipelineConfig& config, const MaskPredictor& predictor) {
  auto h = heuristic_h(translation, resources, config);
  GeneratedPoem poem;
  poem.format = config.format;
  poem.seed = config.seed;
  poem.predictor = predictor.name();
  for (const auto& s : h.provenance.selected) {
    poem.partition_scores.push_back({s.first_score, s.second_score});
  }
  for (const auto& pair : h.pairs) {
    auto decoded = in_stage("decoder", [&] {
      return beam_decode(pair, predictor, resources.ngram, config.decoder);
    });
    poem.couplets.push_back(std::move(decoded.couplet));
    poem.decode_scores.push_back(decoded.score);
  }
  poem.pairs = std::move(h.pairs);
  poem.provenance = std::move(h.provenance);
  return poem;
}

GeneratedPoem translate(std::string_view text, const Resources& resources,
                        const PipelineConfig& config) {
  const auto translation = in_stage("translation", [&] { return PassthroughTranslator{}.translate(text); });
  const auto predictor = make_predictor(config, resources);
  return translate(translation, resources, config, *predictor);
}

std::string poem_to_json(const GeneratedPoem& poem) {
  json couplets = json::array();
  for (const auto& c : poem.couplets) couplets.push_back({detokenize(c.first), detokenize(c.second)});

  const auto& p = poem.provenance;
  json keywords = json::array();
  for (std::size_t i = 0; i < p.extracted.size(); ++i) {
    keywords.push_back({{"word", p.extracted.keywords[i]}, {"frequency", p.extracted.frequencies[i]}});
  }
  json final_keywords = json::array();
  for (const auto& k : p.final_keywords.entries) {
    json entry = {{"word", k.word}, {"origin", origin_name(k.origin)}};
    if (k.origin == KeywordOrigin::synonym) entry["source"] = k.source;
    final_keywords.push_back(std::move(entry));
  }
  json placement = json::array();
  for (std::size_t i = 0; i < p.plan.size(); ++i) {
    placement.push_back({{"word", p.plan.keywords[i]}, {"index", p.plan.ap[i]}});
  }
  json rhymes = json::array();
  for (const auto& r : p.rhymes) {
    rhymes.push_back({{"label", scheme_string({{r.label, kFreeLabel}}).substr(0, 1)},
                      {"group", r.group},
                      {"words", r.words}});
  }
  json mks = json::array();
  for (const auto& pair : poem.pairs) {
    mks.push_back({std::vector<std::string>(pair.first.slots.begin(), pair.first.slots.end()),
                   std::vector<std::string>(pair.second.slots.begin(), pair.second.slots.end())});
  }

  json doc = {
      {"format", format_name(poem.format)},
      {"couplets", std::move(couplets)},
      {"scores", {{"partition", poem.partition_scores}, {"decode", poem.decode_scores}}},
      {"provenance",
       {{"seed", poem.seed},
        {"predictor", poem.predictor},
        {"keywords", std::move(keywords)},
        {"unplaceable", p.unplaceable},
        {"couplet_count",
         {{"computed", p.computed_couplets},
          {"used", p.couplets},
          {"adjustment", p.couplet_adjustment}}},
        {"required_keywords", p.required_keywords},
        {"shortfall", p.shortfall},
        {"final_keywords", std::move(final_keywords)},
        {"placement", std::move(placement)},
        {"capacity", {{"first", p.capacity.first}, {"second", p.capacity.second}}},
        {"scheme", scheme_string(p.scheme)},
        {"rhymes", std::move(rhymes)},
        {"mks", std::move(mks)}}}};
  return doc.dump(2) + "\n";
}

std::string render_text(const GeneratedPoem& poem) {
  std::ostringstream out;
  for (const auto& c : poem.couplets) out << detokenize(c.first) << " / " << detokenize(c.second) << "\n";
  return out.str();
}

}  // namespace prose2poem
