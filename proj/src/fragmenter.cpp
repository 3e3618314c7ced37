#include "maskfill/fragmenter.hpp"

#include <algorithm>

#include "maskfill/errors.hpp"

namespace maskfill {

std::vector<Fragment> compute_adjunct_fragments(const AnnotatedSample& s) {
  auto spans = event_spans(s);
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });

  std::vector<Fragment> out;
  std::size_t cursor = 0;
  for (const auto& sp : spans) {
    if (sp.start > cursor) out.push_back({{cursor, sp.start}});
    cursor = std::max(cursor, sp.end);
  }
  if (cursor < s.tokens.size()) out.push_back({{cursor, s.tokens.size()}});
  return out;
}

MaskedSample mask_range(const AnnotatedSample& s, const Span& range,
                        const std::string& mask_token) {
  if (range.start >= range.end || range.end > s.tokens.size()) {
    throw Error("mask range outside sample '" + s.id + "'");
  }
  MaskedSample m;
  m.source_id = s.id;
  m.masked_range = range;
  m.events = s.events;
  m.mask_token = mask_token;
  const auto begin = s.tokens.begin();
  m.tokens_with_mask.assign(begin, begin + static_cast<std::ptrdiff_t>(range.start));
  m.tokens_with_mask.push_back(mask_token);
  m.tokens_with_mask.insert(m.tokens_with_mask.end(), begin + static_cast<std::ptrdiff_t>(range.end),
                            s.tokens.end());
  m.target = surface(s.tokens, range);
  return m;
}

MaskedSample select_and_mask(const AnnotatedSample& s, Rng& rng, const MaskConfig& cfg) {
  std::vector<Fragment> eligible;
  for (const auto& f : compute_adjunct_fragments(s)) {
    const auto len = f.span.length();
    if (len >= cfg.min_len && len <= cfg.max_len) eligible.push_back(f);
  }
  if (eligible.empty()) {
    throw NoEligibleFragment("sample '" + s.id + "' has no adjunct fragment of length " +
                             std::to_string(cfg.min_len) + ".." + std::to_string(cfg.max_len));
  }
  const auto& pick = eligible[rng.uniform_below(eligible.size())];
  return mask_range(s, pick.span, cfg.mask_token);
}

std::vector<std::string> splice_fill(std::span<const std::string> tokens_with_mask,
                                     std::span<const std::string> fill,
                                     const std::string& mask_token) {
  const auto count = std::count(tokens_with_mask.begin(), tokens_with_mask.end(), mask_token);
  if (count != 1) {
    throw Error("expected exactly one mask token, found " + std::to_string(count));
  }
  std::vector<std::string> out;
  out.reserve(tokens_with_mask.size() + fill.size());
  for (const auto& t : tokens_with_mask) {
    if (t == mask_token) {
      out.insert(out.end(), fill.begin(), fill.end());
    } else {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<std::size_t> partition_sizes(std::size_t total, std::size_t n) {
  if (n == 0 || n > total) throw Error("cannot split " + std::to_string(total) + " tokens into " +
                                       std::to_string(n) + " parts");
  std::vector<std::size_t> sizes(n, total / n);
  for (std::size_t i = 0; i < total % n; ++i) ++sizes[i];
  return sizes;
}

InfillTrainingExample make_infill_example(std::span<const std::string> sentence,
                                          std::size_t n_spans, std::size_t span_index,
                                          const std::string& mask_token) {
  const auto sizes = partition_sizes(sentence.size(), n_spans);
  if (span_index >= n_spans) throw Error("span index out of range");
  std::size_t start = 0;
  for (std::size_t i = 0; i < span_index; ++i) start += sizes[i];
  const std::size_t end = start + sizes[span_index];

  InfillTrainingExample ex;
  ex.masked_text.assign(sentence.begin(), sentence.begin() + static_cast<std::ptrdiff_t>(start));
  ex.masked_text.push_back(mask_token);
  ex.masked_text.insert(ex.masked_text.end(), sentence.begin() + static_cast<std::ptrdiff_t>(end),
                        sentence.end());
  ex.target.assign(sentence.begin() + static_cast<std::ptrdiff_t>(start),
                   sentence.begin() + static_cast<std::ptrdiff_t>(end));
  return ex;
}

InfillTrainingExample generate_infill_training_example(std::span<const std::string> sentence,
                                                       Rng& rng, const std::string& mask_token) {
  if (sentence.empty()) throw Error("cannot build an infilling example from an empty sentence");
  const std::size_t upper = std::min<std::size_t>(10, sentence.size());
  const std::size_t n_spans = 1 + rng.uniform_below(upper);
  const std::size_t index = rng.uniform_below(n_spans);
  return make_infill_example(sentence, n_spans, index, mask_token);
}

std::vector<InfillTrainingExample> generate_infill_training_examples(
    const std::vector<std::vector<std::string>>& sentences, std::uint64_t seed,
    const std::string& mask_token) {
  std::vector<InfillTrainingExample> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    Rng rng = Rng::derive(seed, "infill", i);
    out.push_back(generate_infill_training_example(sentences[i], rng, mask_token));
  }
  return out;
}

nlohmann::json masked_sample_to_json(const MaskedSample& m) {
  nlohmann::json events = sample_to_json(AnnotatedSample{"", {}, m.events})["events"];
  return {{"source_id", m.source_id},
          {"tokens_with_mask", m.tokens_with_mask},
          {"masked_range", span_to_json(m.masked_range)},
          {"target", m.target},
          {"events", events}};
}

nlohmann::json infill_example_to_json(const InfillTrainingExample& e) {
  return {{"masked_text", e.masked_text}, {"target", e.target}};
}

}  // namespace maskfill
