#include <filesystem>

#include "json.hpp"
#include "prose2poem/error.h"
#include "prose2poem/pipeline.h"

namespace prose2poem {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_hash(std::uint64_t expected, std::uint64_t actual, const fs::path& path) {
  if (expected != actual) {
    throw DataError(path.string() + " was built from a different corpus (hash " +
                    std::to_string(actual) + ", corpus " + std::to_string(expected) + ")");
  }
}

fs::path require(const fs::path& dir, const char* name) {
  fs::path p = dir / name;
  if (!fs::exists(p)) throw IoError("missing resource file: " + p.string());
  return p;
}

}  // namespace

Resources build_resources(Corpus corpus, SynonymLexicon synonyms, RhymeLexicon rhymes,
                          const EmbeddingOptions& embedding) {
  Resources r;
  r.corpus = std::move(corpus);
  r.frequencies = build_index_frequencies(r.corpus);
  r.synonyms = std::move(synonyms);
  r.rhymes = std::move(rhymes);
  r.embeddings = train_embeddings(r.corpus, embedding);
  r.graph = AssociationGraph::build(r.corpus, r.embeddings);
  r.ngram = NgramModel::build(r.corpus);
  return r;
}

void save_resources(const Resources& r, const fs::path& dir) {
  fs::create_directories(dir);
  r.corpus.save(dir / artifact::kCorpus);
  save_synonym_lexicon(r.synonyms, dir / artifact::kSynonyms);
  save_rhyme_lexicon(r.rhymes, dir / artifact::kRhymes);
  r.embeddings.save(dir / artifact::kEmbeddings);
  r.graph.save(dir / artifact::kGraph);
  r.ngram.save(dir / artifact::kNgram);
  const json manifest = {{"corpus_hash", r.corpus.hash()},
                         {"couplets", r.corpus.size()},
                         {"vocabulary", r.corpus.vocabulary().size()}};
  write_file(dir / artifact::kManifest, manifest.dump(2) + "\n");
}

Resources load_resources(const fs::path& dir) {
  Resources r;
  r.corpus = ingest_corpus(require(dir, artifact::kCorpus)).corpus;
  const auto hash = r.corpus.hash();

  const auto manifest_path = dir / artifact::kManifest;
  if (fs::exists(manifest_path)) {
    try {
      const auto manifest = json::parse(read_file(manifest_path));
      check_hash(hash, manifest.at("corpus_hash").get<std::uint64_t>(), manifest_path);
    } catch (const json::exception& e) {
      throw DataError(manifest_path.string() + ": " + e.what());
    }
  }

  r.frequencies = build_index_frequencies(r.corpus);
  r.synonyms = load_synonym_lexicon(require(dir, artifact::kSynonyms)).value;
  r.rhymes = load_rhyme_lexicon(require(dir, artifact::kRhymes)).value;

  const auto emb = require(dir, artifact::kEmbeddings);
  r.embeddings = EmbeddingTable::load(emb);
  check_hash(hash, r.embeddings.corpus_hash(), emb);
  const auto graph = require(dir, artifact::kGraph);
  r.graph = AssociationGraph::load(graph);
  check_hash(hash, r.graph.corpus_hash(), graph);
  const auto ngram = require(dir, artifact::kNgram);
  r.ngram = NgramModel::load(ngram);
  check_hash(hash, r.ngram.corpus_hash(), ngram);
  return r;
}

}  // namespace prose2poem
