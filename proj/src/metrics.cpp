#include "maskfill/metrics.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "maskfill/errors.hpp"

namespace maskfill {

namespace {

struct NgramHash {
  std::size_t operator()(std::span<const std::string> gram) const noexcept {
    std::size_t h = 0;
    for (const auto& t : gram) {
      h ^= std::hash<std::string>{}(t) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct NgramEq {
  bool operator()(std::span<const std::string> a, std::span<const std::string> b) const noexcept {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
};

}  // namespace

double affinity(const Scorer& scorer, std::span<const std::string> x,
                std::span<const std::string> x_plus) {
  return score(scorer, x).neg_log_likelihood - score(scorer, x_plus).neg_log_likelihood;
}

NgramTally tally_ngrams(const std::vector<std::vector<std::string>>& texts, std::size_t n) {
  if (n == 0) throw Error("n-gram order must be positive");
  std::unordered_set<std::span<const std::string>, NgramHash, NgramEq> seen;
  NgramTally t;
  for (const auto& text : texts) {
    if (text.size() < n) continue;
    std::span<const std::string> all(text);
    for (std::size_t i = 0; i + n <= text.size(); ++i) {
      ++t.total;
      seen.insert(all.subspan(i, n));
    }
  }
  t.distinct = seen.size();
  return t;
}

double dist_n(const std::vector<std::vector<std::string>>& texts, std::size_t n) {
  const auto t = tally_ngrams(texts, n);
  if (t.total == 0) throw EmptyInput("no " + std::to_string(n) + "-grams in input");
  return static_cast<double>(t.distinct) / static_cast<double>(t.total);
}

std::string resolve_source_id(const AugmentedSample& a) {
  if (!a.provenance.source_id.empty()) return a.provenance.source_id;
  const auto pos = a.sample.id.rfind("#aug");
  return pos == std::string::npos ? a.sample.id : a.sample.id.substr(0, pos);
}

MetricsReport evaluate_pair_corpus(const Corpus& orig, const std::vector<AugmentedSample>& aug,
                                   const Scorer& scorer) {
  std::unordered_map<std::string, const AnnotatedSample*> by_id;
  for (const auto& s : orig.samples) by_id.emplace(s.id, &s);

  MetricsReport r;
  std::unordered_map<std::string, double> source_nll;
  std::vector<std::vector<std::string>> texts;
  for (const auto& a : aug) {
    const std::string src = resolve_source_id(a);
    auto it = by_id.find(src);
    if (it == by_id.end()) {
      throw CorpusError("augmented sample '" + a.sample.id + "' has no source '" + src + "'");
    }
    auto cached = source_nll.find(src);
    if (cached == source_nll.end()) {
      cached = source_nll.emplace(src, score(scorer, it->second->tokens).neg_log_likelihood).first;
    }
    const double tau = cached->second - score(scorer, a.sample.tokens).neg_log_likelihood;
    r.affinity_per_pair.push_back({src, a.sample.id, tau});
    texts.push_back(a.sample.tokens);
  }

  double sum = 0.0;
  for (const auto& p : r.affinity_per_pair) sum += p.tau;
  r.counts.pairs = r.affinity_per_pair.size();
  r.affinity_mean = r.counts.pairs ? sum / static_cast<double>(r.counts.pairs) : 0.0;

  const auto uni = tally_ngrams(texts, 1);
  const auto bi = tally_ngrams(texts, 2);
  r.counts.tokens = uni.total;
  r.counts.distinct_unigrams = uni.distinct;
  r.counts.bigrams = bi.total;
  r.counts.distinct_bigrams = bi.distinct;
  if (uni.total == 0) throw EmptyInput("augmented corpus has no tokens");
  r.dist1 = static_cast<double>(uni.distinct) / static_cast<double>(uni.total);
  r.dist2 = bi.total ? static_cast<double>(bi.distinct) / static_cast<double>(bi.total) : 0.0;
  return r;
}

nlohmann::json report_to_json(const MetricsReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.affinity_per_pair) {
    pairs.push_back({{"source_id", p.source_id}, {"aug_id", p.aug_id}, {"tau", p.tau}});
  }
  return {{"affinity_mean", r.affinity_mean},
          {"affinity_per_pair", pairs},
          {"dist1", r.dist1},
          {"dist2", r.dist2},
          {"counts",
           {{"pairs", r.counts.pairs},
            {"tokens", r.counts.tokens},
            {"distinct_unigrams", r.counts.distinct_unigrams},
            {"bigrams", r.counts.bigrams},
            {"distinct_bigrams", r.counts.distinct_bigrams}}}};
}

std::string report_table(const MetricsReport& r) {
  char buf[256];
  std::ostringstream out;
  std::snprintf(buf, sizeof buf, "%-10s %12s %10s %10s\n", "pairs", "affinity", "dist-1",
                "dist-2");
  out << buf;
  std::snprintf(buf, sizeof buf, "%-10zu %12.6f %10.6f %10.6f\n", r.counts.pairs,
                r.affinity_mean, r.dist1, r.dist2);
  out << buf;
  return out.str();
}

}  // namespace maskfill
