#include "maskfill/augment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "maskfill/errors.hpp"

namespace maskfill {

using nlohmann::json;

namespace {

Span shift_span(const Span& s, const Span& masked, long long delta, const std::string& id) {
  if (s.end <= masked.start) return s;
  if (s.start >= masked.end) {
    return {static_cast<std::size_t>(static_cast<long long>(s.start) + delta),
            static_cast<std::size_t>(static_cast<long long>(s.end) + delta)};
  }
  throw SpanIntersectsMask("sample '" + id + "': event span [" + std::to_string(s.start) + "," +
                           std::to_string(s.end) + ") intersects the masked range");
}

}  // namespace

std::string ascii_lower(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::set<std::string> harvest_trigger_lexemes(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& s : c.samples) {
    for (const auto& ev : s.events) {
      for (std::size_t i = ev.trigger.start; i < ev.trigger.end && i < s.tokens.size(); ++i) {
        out.insert(ascii_lower(s.tokens[i]));
      }
    }
  }
  return out;
}

FilterVerdict filter_fill(std::span<const std::string> fill, const FillFilterConfig& cfg) {
  if (fill.size() < cfg.min_fill_len || fill.size() > cfg.max_fill_len) {
    return {false, "length " + std::to_string(fill.size()) + " outside [" +
                       std::to_string(cfg.min_fill_len) + "," + std::to_string(cfg.max_fill_len) +
                       "]"};
  }
  for (const auto& t : fill) {
    if (t == cfg.mask_token) return {false, "contains the mask token"};
    if (cfg.banned_lexemes.count(ascii_lower(t))) return {false, "banned lexeme '" + t + "'"};
  }
  return {};
}

std::string augmented_id(const std::string& source_id, std::size_t index) {
  return source_id + "#aug" + std::to_string(index);
}

AugmentedSample fill_and_remap(const MaskedSample& m, std::span<const std::string> fill,
                               std::size_t index) {
  if (fill.empty()) throw Error("fill must contain at least one token");
  if (std::find(fill.begin(), fill.end(), m.mask_token) != fill.end()) {
    throw Error("fill contains the mask token");
  }
  const Span& range = m.masked_range;
  const long long delta =
      static_cast<long long>(fill.size()) - static_cast<long long>(range.length());

  AugmentedSample out;
  out.sample.id = augmented_id(m.source_id, index);
  out.sample.tokens = splice_fill(m.tokens_with_mask, fill, m.mask_token);
  out.sample.events = m.events;
  for (auto& ev : out.sample.events) {
    ev.trigger = shift_span(ev.trigger, range, delta, m.source_id);
    for (auto& arg : ev.arguments) arg.span = shift_span(arg.span, range, delta, m.source_id);
  }
  out.provenance.source_id = m.source_id;
  out.provenance.masked_range = range;
  out.provenance.fill_len = fill.size();
  return out;
}

std::vector<std::string> surface_violations(const AnnotatedSample& source,
                                            const AnnotatedSample& augmented) {
  std::vector<std::string> out;
  if (source.events.size() != augmented.events.size()) {
    out.emplace_back("event count differs");
    return out;
  }
  auto same = [&](const Span& a, const Span& b) {
    if (a.end > source.tokens.size() || b.end > augmented.tokens.size()) return false;
    return surface(source.tokens, a) == surface(augmented.tokens, b);
  };
  for (std::size_t e = 0; e < source.events.size(); ++e) {
    const auto& src = source.events[e];
    const auto& aug = augmented.events[e];
    const std::string prefix = "events[" + std::to_string(e) + "]";
    if (src.event_type != aug.event_type) out.push_back(prefix + ".type differs");
    if (!same(src.trigger, aug.trigger)) out.push_back(prefix + ".trigger surface differs");
    if (src.arguments.size() != aug.arguments.size()) {
      out.push_back(prefix + " argument count differs");
      continue;
    }
    for (std::size_t a = 0; a < src.arguments.size(); ++a) {
      if (src.arguments[a].role != aug.arguments[a].role ||
          !same(src.arguments[a].span, aug.arguments[a].span)) {
        out.push_back(prefix + ".arguments[" + std::to_string(a) + "] differs");
      }
    }
  }
  return out;
}

std::vector<AugmentedSample> augment_sample(const AnnotatedSample& s, const Infiller& backend,
                                            const AugmentConfig& cfg) {
  std::vector<AugmentedSample> out;
  for (std::size_t j = 0; j < cfg.n_aug; ++j) {
    const std::uint64_t stream_seed = derive_seed(cfg.seed, s.id, j);
    Rng rng(stream_seed);
    for (std::size_t attempt = 0; attempt <= cfg.retries; ++attempt) {
      MaskedSample masked;
      try {
        masked = select_and_mask(s, rng, cfg.mask);
      } catch (const NoEligibleFragment&) {
        return out;
      }
      InfillRequest req;
      req.tokens_with_mask = masked.tokens_with_mask;
      req.mask_token = masked.mask_token;
      req.num_candidates = cfg.num_candidates;
      req.max_fill_len = cfg.filter.max_fill_len;
      req.top_k = cfg.top_k;
      req.top_p = cfg.top_p;
      req.beam_size = cfg.beam_size;

      std::vector<InfillCandidate> candidates;
      try {
        candidates = infill(backend, req, rng);
      } catch (const NoCandidate&) {
        continue;
      }
      auto accepted = std::find_if(candidates.begin(), candidates.end(), [&](const auto& c) {
        return filter_fill(c.tokens, cfg.filter).accepted;
      });
      if (accepted == candidates.end()) continue;

      AugmentedSample aug = fill_and_remap(masked, accepted->tokens, j);
      aug.provenance.method = kMethodMaskThenFill;
      aug.provenance.seed = stream_seed;
      aug.provenance.backend_id = backend.id();
      out.push_back(std::move(aug));
      break;
    }
  }
  return out;
}

AugmentResult augment_corpus(const Corpus& c, const Infiller& backend, const AugmentConfig& cfg,
                             std::size_t workers) {
  const std::size_t n = c.samples.size();
  std::vector<std::vector<AugmentedSample>> per_sample(n);
  std::vector<std::string> errors(n);

  auto work = [&](std::size_t i) {
    const auto& s = c.samples[i];
    try {
      per_sample[i] = augment_sample(s, backend, cfg);
      if (per_sample[i].size() < cfg.n_aug) {
        errors[i] = "sample '" + s.id + "': produced " + std::to_string(per_sample[i].size()) +
                    " of " + std::to_string(cfg.n_aug) + " augmentations";
      }
    } catch (const Error& e) {
      errors[i] = "sample '" + s.id + "' skipped: " + e.what();
    }
  };

  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) work(i);
      });
    }
  }

  AugmentResult result;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& a : per_sample[i]) result.samples.push_back(std::move(a));
    if (!errors[i].empty()) result.notes.push_back(std::move(errors[i]));
  }
  return result;
}

SynonymLexicon parse_synonym_lexicon(std::istream& in) {
  SynonymLexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    const std::string head = line.substr(0, tab);
    if (!is_valid_token(head)) continue;
    std::istringstream rest(line.substr(tab + 1));
    std::string syn;
    auto& entry = lex[head];
    while (std::getline(rest, syn, ',')) {
      if (is_valid_token(syn) && syn != head &&
          std::find(entry.begin(), entry.end(), syn) == entry.end()) {
        entry.push_back(syn);
      }
    }
    if (entry.empty()) lex.erase(head);
  }
  return lex;
}

SynonymLexicon load_synonym_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_synonym_lexicon(in);
}

AugmentedSample synonym_replacement(const AnnotatedSample& s, const SynonymLexicon& lexicon,
                                    double p_replace, Rng& rng, std::size_t index) {
  AugmentedSample out;
  out.sample = s;
  out.sample.id = augmented_id(s.id, index);
  out.provenance.source_id = s.id;
  out.provenance.method = kMethodSynonym;
  out.provenance.backend_id = "lexicon";

  std::size_t first = s.tokens.size(), last = 0, replaced = 0;
  for (const auto& frag : compute_adjunct_fragments(s)) {
    for (std::size_t i = frag.span.start; i < frag.span.end; ++i) {
      auto it = lexicon.find(s.tokens[i]);
      if (it == lexicon.end()) it = lexicon.find(ascii_lower(s.tokens[i]));
      if (it == lexicon.end() || it->second.empty()) continue;
      if (rng.uniform01() >= p_replace) continue;
      out.sample.tokens[i] = it->second[rng.uniform_below(it->second.size())];
      first = std::min(first, i);
      last = std::max(last, i + 1);
      ++replaced;
    }
  }
  if (replaced > 0) out.provenance.masked_range = {first, last};
  out.provenance.fill_len = replaced;
  return out;
}

AugmentedSample span_backtranslation(const AnnotatedSample& s,
                                     const RoundTripTranslator& translator, Rng& rng,
                                     const MaskConfig& mask, std::size_t index) {
  MaskedSample masked = select_and_mask(s, rng, mask);
  auto translated = translator.round_trip(masked.target, rng.next_u64());
  if (translated.empty() ||
      !std::all_of(translated.begin(), translated.end(), is_valid_token) ||
      std::find(translated.begin(), translated.end(), mask.mask_token) != translated.end()) {
    throw BackendUnavailable("translator '" + translator.id() + "' returned an unusable span");
  }
  AugmentedSample out = fill_and_remap(masked, translated, index);
  out.provenance.method = kMethodBacktranslation;
  out.provenance.backend_id = translator.id();
  return out;
}

json augmented_to_json(const AugmentedSample& a) {
  json j = sample_to_json(a.sample);
  j["provenance"] = {{"source_id", a.provenance.source_id},
                     {"method", a.provenance.method},
                     {"masked_range", span_to_json(a.provenance.masked_range)},
                     {"fill_len", a.provenance.fill_len},
                     {"seed", a.provenance.seed},
                     {"backend_id", a.provenance.backend_id}};
  return j;
}

void serialize_augmented(const std::vector<AugmentedSample>& samples, std::ostream& out) {
  for (const auto& a : samples) out << augmented_to_json(a).dump() << '\n';
}

std::string serialize_augmented(const std::vector<AugmentedSample>& samples) {
  std::ostringstream out;
  serialize_augmented(samples, out);
  return out.str();
}

std::vector<AugmentedSample> parse_augmented(std::istream& in) {
  std::vector<AugmentedSample> out;
  std::unordered_set<std::string> ids;
  RecordReader reader(in);
  while (auto rec = reader.next()) {
    AugmentedSample a;
    a.sample = decode_sample_record(*rec);
    if (!ids.insert(a.sample.id).second) {
      throw CorpusError("duplicate id '" + a.sample.id + "'", rec->line);
    }
    if (auto it = rec->value.find("provenance"); it != rec->value.end()) {
      try {
        const json& p = *it;
        a.provenance.source_id = p.at("source_id").get<std::string>();
        a.provenance.method = p.value("method", "");
        if (p.contains("masked_range")) {
          const json& r = p["masked_range"];
          if (!r.is_array() || r.size() != 2) throw CorpusError("bad masked_range");
          a.provenance.masked_range = {r[0].get<std::size_t>(), r[1].get<std::size_t>()};
        }
        a.provenance.fill_len = p.value("fill_len", std::size_t{0});
        a.provenance.seed = p.value("seed", std::uint64_t{0});
        a.provenance.backend_id = p.value("backend_id", "");
      } catch (const std::exception& e) {
        throw CorpusError(std::string("malformed provenance: ") + e.what(), rec->line);
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<AugmentedSample> load_augmented(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return parse_augmented(in);
  } catch (const CorpusError& e) {
    throw CorpusError(path + ": " + e.what());
  }
}

}  // namespace maskfill
