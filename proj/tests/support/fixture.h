#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prose2poem/corpus.h"
#include "prose2poem/dataset.h"
#include "prose2poem/lexicon.h"
#include "prose2poem/pipeline.h"

namespace prose2poem::fixture {

// A synthetic Persian couplet corpus with topic structure, plus lexicons that
// cover it. Every couplet ends both hemistichs with words of one rhyme group.
// About 1% of hemistichs are longer than ten tokens.
struct Fixture {
  std::vector<Couplet> couplets;
  SynonymLexicon synonyms;
  RhymeLexicon rhymes;
  std::vector<AffinityExample> affinity;
  std::vector<std::vector<std::string>> topics;  // content words per affinity label
  std::vector<std::string> function_words;
};

Fixture make_fixture(std::size_t couplets = 600, std::uint64_t seed = 7);

// Prose of 12..30 tokens drawn from the fixture vocabulary, on 1..3 lines.
std::string make_prose(const Fixture& fixture, std::uint64_t seed);

// Text forms of the fixture files as the CLI reads them.
std::string corpus_text(const Fixture& fixture);
std::string synonyms_text(const Fixture& fixture);
std::string rhymes_text(const Fixture& fixture);
std::string affinity_text(const Fixture& fixture);

// Default fixture and its resources, built once per process.
const Fixture& shared_fixture();
const Resources& shared_resources();

}  // namespace prose2poem::fixture
