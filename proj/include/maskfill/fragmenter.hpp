#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "maskfill/corpus.hpp"
#include "maskfill/rng.hpp"

namespace maskfill {

inline constexpr const char* kDefaultMaskToken = "[MASK]";

/// Maximal token run touching no trigger or argument of any event.
struct Fragment {
  Span span;
  friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct MaskedSample {
  std::string source_id;
  std::vector<std::string> tokens_with_mask;
  Span masked_range;                 // in original token coordinates
  std::vector<std::string> target;   // held-out tokens
  std::vector<EventMention> events;  // original coordinates
  std::string mask_token = kDefaultMaskToken;
};

struct InfillTrainingExample {
  std::vector<std::string> masked_text;
  std::vector<std::string> target;
};

struct MaskConfig {
  std::size_t min_len = 1;
  std::size_t max_len = 10;
  std::string mask_token = kDefaultMaskToken;
};

/// Disjoint, sorted, maximal fragments covering exactly the tokens outside every event span.
std::vector<Fragment> compute_adjunct_fragments(const AnnotatedSample& s);

/// Masks one fragment whose length lies in [cfg.min_len, cfg.max_len], chosen uniformly.
/// Throws NoEligibleFragment when there is none.
MaskedSample select_and_mask(const AnnotatedSample& s, Rng& rng, const MaskConfig& cfg = {});

/// Masks a specific range; the range must lie inside the sample.
MaskedSample mask_range(const AnnotatedSample& s, const Span& range,
                        const std::string& mask_token = kDefaultMaskToken);

/// Replaces the single mask token with `fill`. Throws Error if the mask count is not one.
std::vector<std::string> splice_fill(std::span<const std::string> tokens_with_mask,
                                     std::span<const std::string> fill,
                                     const std::string& mask_token = kDefaultMaskToken);

/// Sizes of `n` contiguous near-equal parts of `total` tokens, longer parts first.
std::vector<std::size_t> partition_sizes(std::size_t total, std::size_t n);

/// Splits the sentence into `n_spans` parts and holds out part `span_index`.
InfillTrainingExample make_infill_example(std::span<const std::string> sentence,
                                          std::size_t n_spans, std::size_t span_index,
                                          const std::string& mask_token = kDefaultMaskToken);

/// Draws the part count from [1, min(10, L)] and the held-out part uniformly.
InfillTrainingExample generate_infill_training_example(std::span<const std::string> sentence,
                                                       Rng& rng,
                                                       const std::string& mask_token = kDefaultMaskToken);

/// One example per sentence; sentence i uses the stream derived from (seed, "infill", i).
std::vector<InfillTrainingExample> generate_infill_training_examples(
    const std::vector<std::vector<std::string>>& sentences, std::uint64_t seed,
    const std::string& mask_token = kDefaultMaskToken);

nlohmann::json masked_sample_to_json(const MaskedSample& m);
nlohmann::json infill_example_to_json(const InfillTrainingExample& e);

}  // namespace maskfill
