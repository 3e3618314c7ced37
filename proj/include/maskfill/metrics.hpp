#pragma once

#include <span>
#include <string>
#include <vector>

#include "maskfill/augment.hpp"
#include "maskfill/corpus.hpp"
#include "maskfill/infill.hpp"

namespace maskfill {

struct PairAffinity {
  std::string source_id;
  std::string aug_id;
  double tau = 0.0;
};

struct MetricsCounts {
  std::size_t pairs = 0;
  std::size_t tokens = 0;
  std::size_t distinct_unigrams = 0;
  std::size_t bigrams = 0;
  std::size_t distinct_bigrams = 0;
};

struct MetricsReport {
  double affinity_mean = 0.0;
  std::vector<PairAffinity> affinity_per_pair;
  double dist1 = 0.0;
  double dist2 = 0.0;
  MetricsCounts counts;
};

/// Loss delta nll(x) - nll(x_plus) under `scorer`.
double affinity(const Scorer& scorer, std::span<const std::string> x,
                std::span<const std::string> x_plus);

struct NgramTally {
  std::size_t total = 0;
  std::size_t distinct = 0;
};

/// Counts n-gram occurrences and distinct n-grams pooled over all texts.
/// N-grams never cross text boundaries.
NgramTally tally_ngrams(const std::vector<std::vector<std::string>>& texts, std::size_t n);

/// Distinct n-grams over total n-gram occurrences. Throws EmptyInput when there are none.
double dist_n(const std::vector<std::vector<std::string>>& texts, std::size_t n);

/// Source id for an augmented record: its provenance, else the id with any
/// "#aug..." suffix removed.
std::string resolve_source_id(const AugmentedSample& a);

/// Affinity per (source, augmented) pair and Dist-1/2 over the augmented texts.
/// Throws CorpusError for an augmented sample whose source is missing.
MetricsReport evaluate_pair_corpus(const Corpus& orig, const std::vector<AugmentedSample>& aug,
                                   const Scorer& scorer);

nlohmann::json report_to_json(const MetricsReport& r);
std::string report_table(const MetricsReport& r);

}  // namespace maskfill
