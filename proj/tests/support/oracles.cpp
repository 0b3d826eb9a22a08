#include "oracles.h"

#include <algorithm>
#include <cmath>

namespace prose2poem::oracle {

std::size_t nrl(int index, int side, const std::vector<int>& ap) {
  std::size_t n = 0;
  for (int a : ap) {
    if (side == 0 ? a < index : a > index) ++n;
  }
  return n;
}

double rns(int x, std::size_t w, std::size_t nrl_lower) {
  return (x + 1.0) / ((nrl_lower + 1.0) * (w + 1.0));
}

double lns(int z, std::size_t y, std::size_t nrl_upper) {
  return (z + 1.0) / ((nrl_upper + 1.0) * (y + 1.0));
}

double index_score(int index, const std::vector<int>& ap, std::uint64_t frequency,
                   bool literal_upper_numerator) {
  if (frequency == 0) return -1.0;
  std::array<std::size_t, 12> occupancy{};
  for (int a : ap) ++occupancy[a];
  int lower = 0;
  for (int j = index - 1; j >= 1; --j) {
    if (occupancy[j] > 0) {
      lower = j;
      break;
    }
  }
  int upper = 11;
  for (int j = index + 1; j <= 10; ++j) {
    if (occupancy[j] > 0) {
      upper = j;
      break;
    }
  }
  const int x = index - lower;
  const int z = upper - index;
  const double r = rns(x, occupancy[lower], nrl(index, 0, ap));
  const double l = lns(literal_upper_numerator ? x : z, occupancy[upper], nrl(index, 1, ap));
  return std::abs(r - l) / (occupancy[index] + 1.0) * std::log10(frequency + 1.0);
}

std::vector<int> place(const std::vector<std::string>& keywords,
                       const std::function<std::uint64_t(int, const std::string&)>& frequency) {
  std::vector<int> ap;
  for (const auto& k : keywords) {
    int best = -1;
    double best_score = -1.0;
    for (int i = 1; i <= 10; ++i) {
      const double s = index_score(i, ap, frequency(i, k));
      if (s < 0.0) continue;
      if (best < 0 || s > best_score) {
        best = i;
        best_score = s;
      }
    }
    if (best < 0) return {};
    ap.push_back(best);
  }
  return ap;
}

double cooccurrence(int i, int j, int length) { return 1.0 - std::abs(i - j) / double(length); }

double partition_score(double gap_sum, double association_mean, std::size_t keywords) {
  if (keywords < 2) return 0.5;
  return 1.0 / (1.0 + std::exp(-std::log2(gap_sum) * association_mean));
}

std::size_t couplets_for(std::size_t placed) { return (placed + 9) / 10; }

std::size_t required(std::size_t couplets, std::size_t rsv, std::size_t lsv) {
  return couplets * rsv + couplets * lsv;
}

double sf(double f, double t, double b) { return (4.0 * f + 3.0 * t + 2.0 * b) / 10.0; }

std::vector<Choice> all_partitions(const std::array<std::vector<std::string>, 10>& ik,
                                   std::size_t count) {
  std::vector<Choice> out;
  for (unsigned mask = 0; mask < (1u << 10); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != count) continue;
    std::vector<int> indices;
    bool ok = true;
    for (int i = 0; i < 10; ++i) {
      if (mask & (1u << i)) {
        if (ik[i].empty()) ok = false;
        indices.push_back(i + 1);
      }
    }
    if (!ok) continue;
    // Odometer over keyword choices.
    std::vector<std::size_t> pick(indices.size(), 0);
    for (;;) {
      std::vector<std::string> words;
      for (std::size_t k = 0; k < indices.size(); ++k) words.push_back(ik[indices[k] - 1][pick[k]]);
      out.emplace_back(indices, words);
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == ik[indices[k] - 1].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
  return out;
}

std::vector<ScoredChoice> ranked_partitions(
    const std::array<std::vector<std::string>, 10>& ik, std::size_t count,
    const std::function<double(const std::string&, const std::string&)>& g) {
  std::vector<ScoredChoice> out;
  for (auto& [indices, keywords] : all_partitions(ik, count)) {
    ScoredChoice c;
    double assoc = 0.0;
    int gaps = 0;
    for (std::size_t k = 1; k < indices.size(); ++k) {
      gaps += indices[k] - indices[k - 1];
      assoc += g(keywords[k - 1], keywords[k]);
    }
    c.gap_sum = gaps;
    c.association_mean = indices.size() >= 2 ? assoc / static_cast<double>(indices.size() - 1) : 0.0;
    c.score = partition_score(c.gap_sum, c.association_mean, indices.size());
    c.indices = std::move(indices);
    c.keywords = std::move(keywords);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const ScoredChoice& a, const ScoredChoice& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.indices != b.indices) return a.indices < b.indices;
    return a.keywords < b.keywords;
  });
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> select_ranked(
    const std::vector<ScoredChoice>& first, const std::vector<ScoredChoice>& second,
    std::size_t couplets) {
  std::vector<std::string> used;
  std::vector<bool> taken_first(first.size()), taken_second(second.size());
  auto pick = [&](const std::vector<ScoredChoice>& side, std::vector<bool>& taken) -> long {
    for (std::size_t r = 0; r < side.size(); ++r) {
      if (taken[r] && !side[r].keywords.empty()) continue;
      bool clash = false;
      for (const auto& k : side[r].keywords) {
        if (std::find(used.begin(), used.end(), k) != used.end()) clash = true;
      }
      if (clash) continue;
      taken[r] = true;
      used.insert(used.end(), side[r].keywords.begin(), side[r].keywords.end());
      return static_cast<long>(r);
    }
    return -1;
  };
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t c = 0; c < couplets; ++c) {
    const long a = pick(first, taken_first);
    const long b = a < 0 ? -1 : pick(second, taken_second);
    if (a < 0 || b < 0) return {};
    out.emplace_back(a, b);
  }
  return out;
}

std::map<std::vector<std::string>, std::uint64_t> count_ngrams(const std::vector<Couplet>& corpus,
                                                               std::size_t order) {
  std::map<std::vector<std::string>, std::uint64_t> out;
  auto add = [&](const Hemistich& h) {
    std::vector<std::string> seq(order > 1 ? order - 1 : 1, "<s>");
    seq.insert(seq.end(), h.begin(), h.end());
    seq.push_back("</s>");
    const std::size_t first = order > 1 ? order - 1 : 0;
    for (std::size_t end = first + 1; end <= seq.size(); ++end) {
      if (end < order) continue;
      ++out[std::vector<std::string>(seq.begin() + (end - order), seq.begin() + end)];
    }
  };
  for (const auto& c : corpus) {
    add(c.first);
    add(c.second);
  }
  return out;
}

std::vector<std::string> best_assignment(
    const std::vector<std::vector<std::string>>& options,
    const std::function<double(const std::vector<std::string>&)>& score, double* best_score) {
  std::vector<std::string> best;
  double top = 0.0;
  std::vector<std::size_t> pick(options.size(), 0);
  for (;;) {
    std::vector<std::string> current;
    for (std::size_t k = 0; k < options.size(); ++k) current.push_back(options[k][pick[k]]);
    const double s = score(current);
    if (best.empty() || s > top || (s == top && current < best)) {
      best = current;
      top = s;
    }
    std::size_t k = options.size();
    while (k > 0 && ++pick[k - 1] == options[k - 1].size()) pick[--k] = 0;
    if (k == 0) break;
  }
  if (best_score != nullptr) *best_score = top;
  return best;
}

std::vector<std::string> best_decode(const CoupletMks& pair, const MaskPredictor& predictor,
                                     const NgramModel& model, std::size_t top_k, double lambda,
                                     double* best_score) {
  struct Slot {
    int side;
    std::size_t position;
    std::vector<std::string> tokens;
    std::vector<double> q;
  };
  std::vector<Slot> slots;
  for (int side = 0; side < 2; ++side) {
    const auto& mks = side == 0 ? pair.first : pair.second;
    const std::vector<std::string> tokens(mks.slots.begin(), mks.slots.end());
    if (mks.mask_count() == 0) continue;
    for (const auto& p : predictor.predict(tokens, top_k)) {
      Slot s{side, p.position, {}, {}};
      double total = 0.0;
      for (const auto& c : p.candidates) {
        s.tokens.push_back(c.token);
        s.q.push_back(std::exp(c.log_prob));
        total += s.q.back();
      }
      for (auto& q : s.q) q /= total;
      slots.push_back(std::move(s));
    }
  }

  std::vector<std::vector<std::string>> options;
  for (const auto& s : slots) options.push_back(s.tokens);
  auto score = [&](const std::vector<std::string>& choice) {
    double total = 0.0;
    std::size_t next = 0;
    for (int side = 0; side < 2; ++side) {
      const auto& mks = side == 0 ? pair.first : pair.second;
      std::vector<std::string> ctx = {"<s>", "<s>", "<s>"};
      for (std::size_t pos = 0; pos < mks.slots.size(); ++pos) {
        std::string token = mks.slots[pos];
        if (next < slots.size() && slots[next].side == side && slots[next].position == pos) {
          token = choice[next];
          const auto& s = slots[next];
          const auto it = std::find(s.tokens.begin(), s.tokens.end(), token);
          const double q = s.q[static_cast<std::size_t>(it - s.tokens.begin())];
          const std::vector<std::string> c4(ctx.begin(), ctx.end());
          const std::vector<std::string> c3(ctx.begin() + 1, ctx.end());
          const std::vector<std::string> c2(ctx.begin() + 2, ctx.end());
          const double fl = sf(model.prob(4, c4, token), model.prob(3, c3, token),
                               model.prob(2, c2, token));
          total += lambda * q + (1.0 - lambda) * fl;
          ++next;
        }
        ctx.erase(ctx.begin());
        ctx.push_back(token);
      }
    }
    return total;
  };
  return best_assignment(options, score, best_score);
}

}  // namespace prose2poem::oracle
