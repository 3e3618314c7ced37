#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maskfill/corpus.hpp"
#include "maskfill/rng.hpp"

namespace maskfill::testing {

/// "Mike left this town yesterday ." with one Transport event.
AnnotatedSample transport_sample();

/// ACE-style synthetic news sentences with 0-2 events each; ids "s0000", ...
Corpus synthetic_corpus(std::size_t n, std::uint64_t seed);

/// Random valid sample: 1..max_tokens tokens drawn from a small vocabulary,
/// 0..max_events events with non-overlapping trigger/argument spans per event.
AnnotatedSample random_sample(Rng& rng, std::size_t max_tokens = 12, std::size_t max_events = 3,
                              std::size_t vocab = 6);

/// Random valid sample whose tokens are all distinct ("t0", "t1", ...).
AnnotatedSample random_unique_sample(Rng& rng, std::size_t max_tokens = 12,
                                     std::size_t max_events = 3);

/// Plain whitespace-tokenized sentences taken from a synthetic corpus.
std::vector<std::vector<std::string>> plain_sentences(std::size_t n, std::uint64_t seed);

}  // namespace maskfill::testing
