#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "maskfill/corpus.hpp"
#include "maskfill/fragmenter.hpp"
#include "maskfill/infill.hpp"

namespace maskfill {

inline constexpr const char* kMethodMaskThenFill = "mask-then-fill";
inline constexpr const char* kMethodSynonym = "synonym";
inline constexpr const char* kMethodBacktranslation = "span-backtranslation";

struct Provenance {
  std::string source_id;
  std::string method;
  Span masked_range;  // [0,0) when nothing was replaced
  std::size_t fill_len = 0;
  std::uint64_t seed = 0;
  std::string backend_id;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct AugmentedSample {
  AnnotatedSample sample;
  Provenance provenance;
  friend bool operator==(const AugmentedSample&, const AugmentedSample&) = default;
};

struct FillFilterConfig {
  std::set<std::string> banned_lexemes;  // lowercased
  std::size_t min_fill_len = 1;
  std::size_t max_fill_len = 10;
  std::string mask_token = kDefaultMaskToken;
};

struct FilterVerdict {
  bool accepted = true;
  std::string reason;  // empty when accepted
};

/// Lowercased tokens of every trigger in the corpus.
std::set<std::string> harvest_trigger_lexemes(const Corpus& c);

std::string ascii_lower(std::string s);

FilterVerdict filter_fill(std::span<const std::string> fill, const FillFilterConfig& cfg);

/// "{source_id}#aug{index}"
std::string augmented_id(const std::string& source_id, std::size_t index);

/// Splices `fill` over the masked range and shifts every event span that
/// starts at or after the range end by len(fill) - len(range). Throws
/// SpanIntersectsMask if an event span crosses the masked range.
AugmentedSample fill_and_remap(const MaskedSample& m, std::span<const std::string> fill,
                               std::size_t index = 0);

/// Describes every event whose trigger or argument surface differs between
/// the source and the augmented sample. Empty when all surfaces match.
std::vector<std::string> surface_violations(const AnnotatedSample& source,
                                            const AnnotatedSample& augmented);

struct AugmentConfig {
  MaskConfig mask;
  FillFilterConfig filter;
  std::size_t n_aug = 1;
  std::size_t retries = 5;
  std::size_t num_candidates = 1;
  std::size_t top_k = 100;
  double top_p = 0.7;
  std::size_t beam_size = 5;
  std::uint64_t seed = 1024;
};

/// Up to cfg.n_aug Mask-then-Fill augmentations of one sample. Output j uses
/// the stream derived from (seed, sample id, j); a fill rejected by the
/// filter (or a backend with no candidate) costs one retry. Returns an empty
/// list when the sample has no eligible fragment. BackendUnavailable propagates.
std::vector<AugmentedSample> augment_sample(const AnnotatedSample& s, const Infiller& backend,
                                            const AugmentConfig& cfg);

struct AugmentResult {
  std::vector<AugmentedSample> samples;  // input order, then j order
  std::vector<std::string> notes;        // skipped samples and why
};

/// Augments every sample, optionally on `workers` threads. Samples whose
/// backend call fails are skipped and noted. Output order never depends on
/// scheduling.
AugmentResult augment_corpus(const Corpus& c, const Infiller& backend, const AugmentConfig& cfg,
                             std::size_t workers = 1);

using SynonymLexicon = std::map<std::string, std::vector<std::string>>;

/// Parses "headword<TAB>syn1,syn2,..." lines. Blank lines and lines starting
/// with '#' are skipped; synonyms that are not single tokens are dropped.
SynonymLexicon parse_synonym_lexicon(std::istream& in);
SynonymLexicon load_synonym_lexicon(const std::string& path);

/// Replaces each adjunct token that has synonyms with probability p_replace.
AugmentedSample synonym_replacement(const AnnotatedSample& s, const SynonymLexicon& lexicon,
                                    double p_replace, Rng& rng, std::size_t index = 0);

/// Round-trip translates one eligible adjunct fragment and splices the result back.
AugmentedSample span_backtranslation(const AnnotatedSample& s,
                                     const RoundTripTranslator& translator, Rng& rng,
                                     const MaskConfig& mask = {}, std::size_t index = 0);

nlohmann::json augmented_to_json(const AugmentedSample& a);
void serialize_augmented(const std::vector<AugmentedSample>& samples, std::ostream& out);
std::string serialize_augmented(const std::vector<AugmentedSample>& samples);

/// Reads an augmented corpus. Records without provenance are accepted with an
/// empty provenance, so a plain corpus can be read as its own augmentation.
std::vector<AugmentedSample> parse_augmented(std::istream& in);
std::vector<AugmentedSample> load_augmented(const std::string& path);

}  // namespace maskfill
