#include "fixture.h"

#include <algorithm>

#include "json.hpp"
#include "prose2poem/random.h"
#include "prose2poem/text.h"

namespace prose2poem::fixture {

using nlohmann::json;

namespace {

const std::vector<std::vector<std::string>> kRhymeGroups = {
    {"یار", "بهار", "کنار", "نگار", "قرار", "دیار", "شکار", "غبار", "هزار", "خمار", "شمار", "سوار"},
    {"جان", "جهان", "زمان", "نشان", "روان", "بیان", "کمان", "گمان", "آسمان", "باران", "خزان", "دوران"},
    {"امید", "سپید", "خورشید", "رسید", "دمید", "کشید", "شنید", "پرید", "دوید", "جاوید", "نوید", "تابید"},
    {"مست", "دست", "شکست", "نشست", "پیوست", "هست", "بست", "گسست", "پرست", "الست", "پست", "رست"},
    {"بود", "سرود", "نمود", "ربود", "گشود", "درود", "فزود", "شنود", "کبود", "زدود", "غنود", "ستود"},
    {"کام", "جام", "نام", "شام", "دام", "پیام", "مدام", "تمام", "سلام", "آرام", "خرام", "بام"},
};

// Content words per affinity label: divine, ethical, amorous, philosophical.
const std::vector<std::vector<std::string>> kTopics = {
    {"خدا", "حق", "نور", "دعا", "نماز", "ایمان", "رحمت", "آیه", "فرشته", "عرش", "سجده", "توبه",
     "بنده", "پروردگار", "ذکر", "محراب", "قدسی", "ازل", "ابد", "یزدان"},
    {"پند", "نیکی", "ادب", "صبر", "راستی", "دانش", "خرد", "کردار", "انصاف", "مردم", "همت", "شرم",
     "نیکو", "بدی", "آزار", "گفتار", "کوشش", "قناعت", "احسان", "وفا"},
    {"دل", "عشق", "معشوق", "زلف", "لب", "رخ", "چشم", "بوسه", "دلبر", "عاشق", "شمع", "پروانه",
     "گل", "بلبل", "ساقی", "شراب", "هجران", "وصال", "نگاه", "مهر"},
    {"جهانی", "هستی", "راز", "اندیشه", "گردون", "فلک", "دریا", "خاک", "باد", "آتش", "آب", "چرخ",
     "حکمت", "معنی", "صورت", "فنا", "بقا", "سایه", "آینه", "زمانه"},
};

const std::vector<std::string> kFunctionWords = {"و",  "از", "به", "در", "که", "با",  "را", "این",
                                                 "آن", "بر", "چو", "هر", "ما", "من", "تو", "همه"};

const std::vector<std::string> kShared = {"شب", "روز", "صبح", "راه", "سر", "جام", "کوی", "ماه",
                                          "ستاره", "نسیم", "باغ", "سرو", "اشک", "غم", "شادی", "سخن"};

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[rng.index(items.size())];
}

std::string pick_body_word(Rng& rng, const std::vector<std::string>& topic) {
  const double u = rng.unit();
  if (u < 0.55) return pick(rng, topic);
  if (u < 0.85) return pick(rng, kFunctionWords);
  return pick(rng, kShared);
}

Hemistich make_hemistich(Rng& rng, const std::vector<std::string>& topic, const std::string& rhyme) {
  std::size_t length = 6 + rng.index(5);  // 6..10
  if (rng.unit() < 0.01) length = 11 + rng.index(2);
  Hemistich h;
  for (std::size_t i = 0; i + 1 < length; ++i) h.push_back(pick_body_word(rng, topic));
  h.push_back(rhyme);
  return h;
}

}  // namespace

Fixture make_fixture(std::size_t couplets, std::uint64_t seed) {
  Fixture f;
  f.topics = kTopics;
  f.function_words = kFunctionWords;
  for (const auto& g : kRhymeGroups) f.rhymes.add_group(g);

  Rng rng(seed);
  for (std::size_t c = 0; c < couplets; ++c) {
    const std::size_t label = rng.index(kTopics.size());
    const auto& group = pick(rng, kRhymeGroups);
    const std::size_t a = rng.index(group.size());
    std::size_t b = rng.index(group.size() - 1);
    if (b >= a) ++b;
    Couplet couplet{make_hemistich(rng, kTopics[label], group[a]),
                    make_hemistich(rng, kTopics[label], group[b])};
    if (c % 3 == 0) f.affinity.push_back({couplet, kAffinityLabels[label]});
    f.couplets.push_back(std::move(couplet));
  }

  // Two or three same-topic synonyms per content word, shared words map to
  // each other.
  Rng syn_rng(seed ^ 0x5EEDu);
  auto add_synonyms = [&](const std::vector<std::string>& pool) {
    for (const auto& w : pool) {
      std::vector<std::string> others;
      for (const auto& o : pool) {
        if (o != w) others.push_back(o);
      }
      syn_rng.shuffle(others);
      others.resize(2 + syn_rng.index(2));
      f.synonyms.add(w, others);
    }
  };
  for (const auto& topic : kTopics) add_synonyms(topic);
  add_synonyms(kShared);
  return f;
}

std::string make_prose(const Fixture& fixture, std::uint64_t seed) {
  Rng rng(seed * 0x9E3779B97F4A7C15ull + 1);
  const auto& topic = fixture.topics[rng.index(fixture.topics.size())];
  const std::size_t length = 12 + rng.index(19);
  const std::size_t lines = 1 + rng.index(3);
  std::string out;
  for (std::size_t i = 0; i < length; ++i) {
    if (i > 0) out += (lines > 1 && i % (length / lines + 1) == 0) ? "\n" : " ";
    const double u = rng.unit();
    if (u < 0.6) {
      out += pick(rng, topic);
    } else if (u < 0.9) {
      out += pick(rng, fixture.function_words);
    } else {
      out += pick(rng, kShared);
    }
  }
  return out;
}

std::string corpus_text(const Fixture& fixture) {
  std::string out;
  for (const auto& c : fixture.couplets) out += detokenize(c.first) + "\t" + detokenize(c.second) + "\n";
  return out;
}

std::string synonyms_text(const Fixture& fixture) {
  std::string out;
  for (const auto& w : fixture.synonyms.words()) {
    out += json({{"word", w}, {"synonyms", fixture.synonyms.find(w)->synonyms}}).dump() + "\n";
  }
  return out;
}

std::string rhymes_text(const Fixture& fixture) {
  std::string out;
  for (const auto& g : fixture.rhymes.groups()) out += json({{"group", g}}).dump() + "\n";
  return out;
}

std::string affinity_text(const Fixture& fixture) {
  std::string out;
  for (const auto& ex : fixture.affinity) {
    out += json({{"first", detokenize(ex.couplet.first)},
                 {"second", detokenize(ex.couplet.second)},
                 {"label", std::string(label_name(ex.label))}})
               .dump() +
           "\n";
  }
  return out;
}

const Fixture& shared_fixture() {
  static const Fixture f = make_fixture();
  return f;
}

const Resources& shared_resources() {
  static const Resources r = [] {
    const auto& f = shared_fixture();
    EmbeddingOptions opts;
    opts.dim = 32;
    opts.epochs = 3;
    return build_resources(Corpus::from_couplets(f.couplets), f.synonyms, f.rhymes, opts);
  }();
  return r;
}

}  // namespace prose2poem::fixture
