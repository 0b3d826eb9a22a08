// Command-line front end: data preparation, translation, evaluation and a
// mock fill-mask server.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "prose2poem/dataset.h"
#include "prose2poem/eval.h"
#include "prose2poem/pipeline.h"
#include "prose2poem/remote.h"
#include "prose2poem/text.h"

namespace fs = std::filesystem;
namespace p2p = prose2poem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitRemote = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  return p2p::read_file(path);
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    p2p::write_file(path, text);
  }
}

p2p::Corpus load_corpus_arg(const std::string& corpus, const std::string& dir) {
  if (!corpus.empty()) return p2p::ingest_corpus(corpus).corpus;
  if (!dir.empty()) return p2p::ingest_corpus(fs::path(dir) / p2p::artifact::kCorpus).corpus;
  throw UsageError("either --corpus or --dir is required");
}

std::vector<p2p::Couplet> couplets_from_json(const json& list, const std::string& source) {
  if (!list.is_array()) throw p2p::DataError(source + ": \"couplets\" must be an array");
  std::vector<p2p::Couplet> out;
  for (const auto& c : list) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_string()) {
      throw p2p::DataError(source + ": each couplet must be [\"h1\", \"h2\"]");
    }
    out.push_back({p2p::tokenize(c[0].get<std::string>()), p2p::tokenize(c[1].get<std::string>())});
  }
  return out;
}

// A single JSON document, an array of documents or JSON Lines.
std::vector<json> read_documents(const std::string& path) {
  const auto text = read_input(path);
  std::vector<json> docs;
  try {
    auto doc = json::parse(text);
    if (doc.is_array()) {
      for (auto& d : doc) docs.push_back(std::move(d));
    } else {
      docs.push_back(std::move(doc));
    }
    return docs;
  } catch (const json::exception&) {
  }
  p2p::for_each_line(text, [&](std::size_t line, std::string_view s) {
    try {
      docs.push_back(json::parse(s));
    } catch (const json::exception& e) {
      throw p2p::ParseError(path, line, e.what());
    }
  });
  return docs;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::unordered_set<std::string> out;
  p2p::for_each_line(p2p::read_file(path), [&](std::size_t, std::string_view line) {
    for (auto& t : p2p::tokenize(line)) out.insert(std::move(t));
  });
  return out;
}

p2p::FillMaskServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persian prose to poetry engine"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Normalize a couplet corpus and lexicons into a resource directory");
  std::string corpus_path, out_dir, synonyms_path, rhymes_path, affinity_path;
  ingest->add_option("--corpus", corpus_path, "Corpus file, one \"h1<TAB>h2\" couplet per line")->required();
  ingest->add_option("--out", out_dir, "Resource directory")->required();
  ingest->add_option("--synonyms", synonyms_path, "Synonym lexicon (JSON Lines)");
  ingest->add_option("--rhymes", rhymes_path, "Rhyme lexicon (JSON Lines)");
  ingest->add_option("--affinity", affinity_path, "Affinity dataset (JSON Lines)");

  // train-embeddings
  auto* train = app.add_subcommand("train-embeddings", "Train word embeddings on the ingested corpus");
  std::string dir;
  p2p::EmbeddingOptions emb;
  train->add_option("--dir", dir, "Resource directory")->required();
  train->add_option("--dim", emb.dim, "Vector size")->check(CLI::PositiveNumber);
  train->add_option("--window", emb.window, "Context window")->check(CLI::PositiveNumber);
  train->add_option("--negatives", emb.negatives, "Negative samples per pair");
  train->add_option("--epochs", emb.epochs, "Passes over the corpus")->check(CLI::PositiveNumber);
  train->add_option("--seed", emb.seed, "Random seed");

  auto* graph_cmd = app.add_subcommand("build-graph", "Build the keyword association graph");
  graph_cmd->add_option("--dir", dir, "Resource directory")->required();

  auto* ngram_cmd = app.add_subcommand("build-ngram", "Build the 4-gram model");
  ngram_cmd->add_option("--dir", dir, "Resource directory")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--corpus", corpus_path, "Corpus file");
  stats->add_option("--dir", dir, "Resource directory");

  // translate
  auto* translate = app.add_subcommand("translate", "Turn prose into a poem");
  std::string input = "-", text, output = "-", format_name = "ghazal", predictor_name = "ngram";
  std::string endpoint, stopwords_path;
  p2p::PipelineConfig cfg;
  std::optional<std::size_t> couplets;
  int timeout_ms = 10000;
  bool plain = false;
  translate->add_option("--dir", dir, "Resource directory")->required();
  translate->add_option("--input", input, "Prose file or - for stdin");
  translate->add_option("--text", text, "Prose given inline (overrides --input)");
  translate->add_option("--format", format_name, "robaei, ghazal, ghasideh, masnavi, ghete or dobeiti");
  translate->add_option("--rsv", cfg.capacity.first, "Keywords per first hemistich");
  translate->add_option("--lsv", cfg.capacity.second, "Keywords per second hemistich");
  translate->add_option("--couplets", couplets, "Couplet count override");
  translate->add_option("--predictor", predictor_name, "ngram or remote")
      ->check(CLI::IsMember({"ngram", "remote"}));
  translate->add_option("--endpoint", endpoint, "Fill-mask service URL (env PROSE2POEM_ENDPOINT wins)");
  translate->add_option("--timeout", timeout_ms, "Remote timeout per attempt in milliseconds")
      ->check(CLI::PositiveNumber);
  translate->add_option("--retries", cfg.remote.retries, "Extra remote attempts after a transport failure")
      ->check(CLI::NonNegativeNumber);
  translate->add_option("--beam-depth", cfg.decoder.beam_depth, "Beam depth");
  translate->add_option("--top-k", cfg.decoder.top_k, "Candidates per mask");
  translate->add_option("--lambda", cfg.decoder.lambda, "Weight of predictor probability");
  translate->add_flag("--vocabulary-only", cfg.decoder.vocabulary_only,
                      "Drop predictor candidates outside the corpus vocabulary");
  translate->add_option("--seed", cfg.seed, "Random seed");
  translate->add_option("--stopwords", stopwords_path, "Words never used as keywords, one per line");
  translate->add_option("--out", output, "Output file or - for stdout");
  translate->add_flag("--plain", plain, "Print the couplets as text instead of JSON");

  // eval
  auto* eval = app.add_subcommand("eval", "Score generated poems against references");
  std::string generated, reference, metrics = "bleu,rouge";
  eval->add_option("--generated", generated, "translate output (JSON or JSON Lines)")->required();
  eval->add_option("--reference", reference, "JSON Lines of {\"couplets\": [[h1, h2], ...]}")->required();
  eval->add_option("--metrics", metrics, "Comma-separated subset of bleu,rouge,ppl,sa,format");
  eval->add_option("--dir", dir, "Resource directory (ppl, sa, format)");
  eval->add_option("--affinity", affinity_path, "Affinity dataset (default: DIR/affinity.jsonl)");
  eval->add_option("--out", output, "Report file or - for stdout");

  // serve-mock
  auto* serve = app.add_subcommand("serve-mock", "Serve the fill-mask protocol from the n-gram model");
  int port = 8765;
  std::string host = "127.0.0.1", model_name = "ngram-mock";
  bool unloaded = false;
  std::size_t max_top_k = 1000;
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--dir", dir, "Resource directory holding ngram.bin");
  serve->add_option("--model", model_name, "Model name reported by /v1/health");
  serve->add_option("--max-top-k", max_top_k, "Largest top_k served")->check(CLI::PositiveNumber);
  serve->add_flag("--unloaded", unloaded, "Answer every fill-mask request with 503");

  // augment
  auto* augment = app.add_subcommand("augment", "Word-substitution augmentation of parallel pairs");
  std::string pairs_path;
  std::size_t factor = 4;
  std::uint64_t seed = 0;
  augment->add_option("--pairs", pairs_path, "Parallel pairs (JSON Lines)")->required();
  augment->add_option("--synonyms", synonyms_path, "Synonym lexicon")->required();
  augment->add_option("--factor", factor, "Output size per input pair")->check(CLI::PositiveNumber);
  augment->add_option("--seed", seed, "Random seed");
  augment->add_option("--out", output, "Output file or - for stdout");

  // mlm-dataset
  auto* mlm = app.add_subcommand("mlm-dataset", "Masked-language-model training examples");
  double ratio = 0.15;
  std::string level = "couplet";
  mlm->add_option("--corpus", corpus_path, "Corpus file");
  mlm->add_option("--dir", dir, "Resource directory");
  mlm->add_option("--ratio", ratio, "Mask ratio");
  mlm->add_option("--level", level, "couplet or hemistich")->check(CLI::IsMember({"couplet", "hemistich"}));
  mlm->add_option("--seed", seed, "Random seed");
  mlm->add_option("--out", output, "Output file or - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ingest) {
      const auto result = p2p::ingest_corpus(corpus_path);
      fs::create_directories(out_dir);
      result.corpus.save(fs::path(out_dir) / p2p::artifact::kCorpus);
      std::size_t warnings = 0;
      p2p::SynonymLexicon syn;
      if (!synonyms_path.empty()) {
        auto loaded = p2p::load_synonym_lexicon(synonyms_path);
        syn = std::move(loaded.value);
        warnings += loaded.warnings;
      }
      p2p::save_synonym_lexicon(syn, fs::path(out_dir) / p2p::artifact::kSynonyms);
      p2p::RhymeLexicon rhy;
      if (!rhymes_path.empty()) {
        auto loaded = p2p::load_rhyme_lexicon(rhymes_path);
        rhy = std::move(loaded.value);
        warnings += loaded.warnings;
      }
      p2p::save_rhyme_lexicon(rhy, fs::path(out_dir) / p2p::artifact::kRhymes);
      if (!affinity_path.empty()) {
        p2p::load_affinity_dataset(affinity_path);  // validate before copying
        fs::copy_file(affinity_path, fs::path(out_dir) / p2p::artifact::kAffinity,
                      fs::copy_options::overwrite_existing);
      }
      const json manifest = {{"corpus_hash", result.corpus.hash()},
                             {"couplets", result.corpus.size()},
                             {"vocabulary", result.corpus.vocabulary().size()}};
      p2p::write_file(fs::path(out_dir) / p2p::artifact::kManifest, manifest.dump(2) + "\n");
      std::cerr << "ingested " << result.corpus.size() << " couplets, skipped " << result.skipped
                << " malformed line(s), " << warnings << " lexicon warning(s)\n";
    } else if (*train) {
      const auto corpus = load_corpus_arg("", dir);
      p2p::train_embeddings(corpus, emb).save(fs::path(dir) / p2p::artifact::kEmbeddings);
    } else if (*graph_cmd) {
      const auto corpus = load_corpus_arg("", dir);
      const auto emb_path = fs::path(dir) / p2p::artifact::kEmbeddings;
      const auto table = p2p::EmbeddingTable::load(emb_path);
      if (table.corpus_hash() != corpus.hash()) {
        throw p2p::DataError(emb_path.string() + " was built from a different corpus");
      }
      p2p::AssociationGraph::build(corpus, table).save(fs::path(dir) / p2p::artifact::kGraph);
    } else if (*ngram_cmd) {
      const auto corpus = load_corpus_arg("", dir);
      p2p::NgramModel::build(corpus).save(fs::path(dir) / p2p::artifact::kNgram);
    } else if (*stats) {
      const auto s = p2p::corpus_stats(load_corpus_arg(corpus_path, dir));
      const json doc = {{"couplets", s.couplets},
                        {"hemistichs", s.hemistichs},
                        {"tokens", s.tokens},
                        {"vocabulary", s.vocabulary},
                        {"longest_hemistich", s.longest_hemistich},
                        {"hemistichs_within_10", s.hemistichs_within_cap},
                        {"fraction_within_10", s.fraction_within_cap()}};
      std::cout << doc.dump(2) << "\n";
    } else if (*translate) {
      try {
        cfg.format = p2p::parse_format(format_name);
      } catch (const p2p::Error& e) {
        throw UsageError(e.what());
      }
      cfg.couplets = couplets;
      cfg.predictor = predictor_name == "remote" ? p2p::PredictorKind::remote : p2p::PredictorKind::ngram;
      cfg.endpoint = p2p::resolve_endpoint(endpoint);
      cfg.remote.timeout = std::chrono::milliseconds(timeout_ms);
      cfg.decoder.seed = cfg.seed;
      if (!stopwords_path.empty()) cfg.keywords.stopwords = load_stopwords(stopwords_path);
      try {
        cfg.validate();
      } catch (const p2p::Error& e) {
        throw UsageError(e.what());
      }
      const auto prose = text.empty() ? read_input(input) : text;
      const auto resources = p2p::load_resources(dir);
      const auto poem = p2p::translate(prose, resources, cfg);
      write_output(output, plain ? p2p::render_text(poem) : p2p::poem_to_json(poem));
    } else if (*eval) {
      p2p::EvalOptions opts;
      opts.bleu = opts.rouge = false;
      bool want_ppl = false, want_sa = false, want_format = false;
      std::stringstream list(metrics);
      for (std::string m; std::getline(list, m, ',');) {
        if (m == "bleu") opts.bleu = true;
        else if (m == "rouge") opts.rouge = true;
        else if (m == "ppl") want_ppl = true;
        else if (m == "sa") want_sa = true;
        else if (m == "format") want_format = true;
        else throw UsageError("unknown metric: " + m);
      }
      if ((want_ppl || want_sa || want_format) && dir.empty()) {
        throw UsageError("ppl, sa and format need --dir");
      }
      std::vector<p2p::EvalSample> samples;
      for (const auto& doc : read_documents(generated)) {
        p2p::EvalSample s;
        s.generated = couplets_from_json(doc.value("couplets", json()), generated);
        if (doc.contains("format")) s.format = p2p::parse_format(doc["format"].get<std::string>());
        samples.push_back(std::move(s));
      }
      const auto refs = read_documents(reference);
      if (refs.size() != samples.size()) {
        throw p2p::DataError("got " + std::to_string(samples.size()) + " generated poem(s) but " +
                             std::to_string(refs.size()) + " reference(s)");
      }
      for (std::size_t i = 0; i < refs.size(); ++i) {
        samples[i].reference = couplets_from_json(refs[i].value("couplets", json()), reference);
      }

      p2p::NgramModel model;
      p2p::EmbeddingTable table;
      p2p::AffinityClassifier classifier;
      p2p::RhymeLexicon rhymes;
      if (want_ppl) {
        model = p2p::NgramModel::load(fs::path(dir) / p2p::artifact::kNgram);
        opts.model = &model;
      }
      if (want_sa) {
        table = p2p::EmbeddingTable::load(fs::path(dir) / p2p::artifact::kEmbeddings);
        const auto path = affinity_path.empty() ? fs::path(dir) / p2p::artifact::kAffinity : fs::path(affinity_path);
        const auto examples = p2p::load_affinity_dataset(path);
        classifier = p2p::AffinityClassifier::train(examples, table);
        opts.classifier = &classifier;
      }
      if (want_format) {
        rhymes = p2p::load_rhyme_lexicon(fs::path(dir) / p2p::artifact::kRhymes).value;
        opts.rhymes = &rhymes;
      }
      write_output(output, p2p::report_to_json(p2p::evaluate(samples, opts)));
    } else if (*serve) {
      std::optional<p2p::NgramModel> model;
      std::optional<p2p::NgramPredictor> predictor;
      if (!unloaded) {
        if (dir.empty()) throw UsageError("serve-mock needs --dir unless --unloaded");
        model = p2p::NgramModel::load(fs::path(dir) / p2p::artifact::kNgram);
        predictor.emplace(*model);
      }
      p2p::FillMaskServer server(predictor ? &*predictor : nullptr, model_name, max_top_k);
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      std::cerr << "serving on http://" << host << ":" << port << "\n";
      server.serve(host, port);
      g_server = nullptr;
    } else if (*augment) {
      const auto pairs = p2p::load_parallel_pairs(pairs_path);
      const auto lex = p2p::load_synonym_lexicon(synonyms_path).value;
      write_output(output, p2p::serialize_parallel_pairs(p2p::augment_parallel_pairs(pairs, lex, factor, seed)));
    } else if (*mlm) {
      const auto corpus = load_corpus_arg(corpus_path, dir);
      const auto examples = p2p::make_mlm_dataset(
          corpus, ratio, level == "couplet" ? p2p::MaskLevel::couplet : p2p::MaskLevel::hemistich, seed);
      std::string out;
      for (const auto& ex : examples) {
        out += json({{"masked", ex.masked}, {"original", ex.original}}).dump() + "\n";
      }
      write_output(output, out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const p2p::TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return kExitRemote;
  } catch (const p2p::ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << "\n";
    return kExitRemote;
  } catch (const p2p::HttpStatusError& e) {
    std::cerr << "remote error: " << e.what() << "\n";
    return kExitRemote;
  } catch (const p2p::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
