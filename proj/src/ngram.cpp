#include "maskfill/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "maskfill/errors.hpp"
#include "maskfill/io.hpp"

namespace maskfill {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "maskfill-ngram/1";

}  // namespace

double TokenDistribution::total() const {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

TokenDistribution truncate_distribution(TokenDistribution dist, std::size_t top_k, double top_p) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < dist.ids.size(); ++i) {
    if (dist.probs[i] > 0.0) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dist.probs[a] != dist.probs[b]) return dist.probs[a] > dist.probs[b];
    return dist.ids[a] < dist.ids[b];
  });
  if (order.size() > top_k) order.resize(top_k);

  double kept = 0.0;
  for (auto i : order) kept += dist.probs[i];

  TokenDistribution out;
  double cumulative = 0.0;
  for (auto i : order) {
    out.ids.push_back(dist.ids[i]);
    out.probs.push_back(dist.probs[i]);
    cumulative += dist.probs[i];
    if (cumulative >= top_p * kept * (1.0 - 1e-12)) break;
  }
  const double mass = out.total();
  for (auto& p : out.probs) p /= mass;
  return out;
}

NgramModel NgramModel::train(const std::vector<std::vector<std::string>>& sentences,
                             std::size_t order, double smoothing) {
  if (order < 2) throw Error("n-gram order must be at least 2");
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
    throw Error("smoothing constant must be a non-negative number");
  }
  if (sentences.empty()) throw Error("cannot train an n-gram model on an empty corpus");

  std::set<std::string> words;
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      if (t == kBoundaryStart || t == kBoundaryEnd || t == kUnknown) {
        throw Error("training data contains reserved token '" + t + "'");
      }
      words.insert(t);
    }
  }

  NgramModel m;
  m.order_ = order;
  m.smoothing_ = smoothing;
  m.vocab_ = {kBoundaryStart, kBoundaryEnd, kUnknown};
  m.vocab_.insert(m.vocab_.end(), words.begin(), words.end());
  m.rebuild_index();

  for (const auto& s : sentences) {
    std::vector<std::uint32_t> ids(order - 1, kBosId);
    for (const auto& t : s) ids.push_back(m.index_.at(t));
    ids.push_back(kEosId);
    for (std::size_t i = order - 1; i < ids.size(); ++i) {
      std::vector<std::uint32_t> ctx(ids.begin() + static_cast<std::ptrdiff_t>(i - (order - 1)),
                                     ids.begin() + static_cast<std::ptrdiff_t>(i));
      auto& stats = m.counts_[std::move(ctx)];
      ++stats.total;
      ++stats.next[ids[i]];
    }
  }
  return m;
}

void NgramModel::rebuild_index() {
  index_.clear();
  for (std::uint32_t i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], i);
}

std::uint32_t NgramModel::token_id(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end() || it->second == kBosId) return kUnkId;
  return it->second;
}

const NgramModel::ContextStats* NgramModel::find(std::span<const std::uint32_t> context) const {
  auto it = counts_.find(std::vector<std::uint32_t>(context.begin(), context.end()));
  return it == counts_.end() ? nullptr : &it->second;
}

std::uint64_t NgramModel::count(std::span<const std::uint32_t> context, std::uint32_t next) const {
  const auto* stats = find(context);
  if (!stats) return 0;
  auto it = stats->next.find(next);
  return it == stats->next.end() ? 0 : it->second;
}

std::uint64_t NgramModel::context_total(std::span<const std::uint32_t> context) const {
  const auto* stats = find(context);
  return stats ? stats->total : 0;
}

std::vector<std::uint32_t> NgramModel::context_for(std::span<const std::string> history) const {
  const std::size_t width = order_ - 1;
  std::vector<std::uint32_t> ctx(width, kBosId);
  const std::size_t take = std::min(width, history.size());
  for (std::size_t i = 0; i < take; ++i) {
    ctx[width - take + i] = token_id(history[history.size() - take + i]);
  }
  return ctx;
}

double NgramModel::probability(std::span<const std::uint32_t> context, std::uint32_t next) const {
  if (next == kBosId || next >= vocab_.size()) return 0.0;
  const auto support = static_cast<double>(vocab_.size() - 1);
  const double denom = static_cast<double>(context_total(context)) + smoothing_ * support;
  if (denom <= 0.0) return 0.0;
  return (static_cast<double>(count(context, next)) + smoothing_) / denom;
}

TokenDistribution NgramModel::next_distribution(std::span<const std::uint32_t> context) const {
  const auto* stats = find(context);
  const double total = stats ? static_cast<double>(stats->total) : 0.0;
  const double denom = total + smoothing_ * static_cast<double>(vocab_.size() - 1);

  TokenDistribution d;
  d.ids.reserve(vocab_.size() - 1);
  d.probs.reserve(vocab_.size() - 1);
  for (std::uint32_t id = 1; id < vocab_.size(); ++id) {
    double c = smoothing_;
    if (stats) {
      auto it = stats->next.find(id);
      if (it != stats->next.end()) c += static_cast<double>(it->second);
    }
    d.ids.push_back(id);
    d.probs.push_back(denom > 0.0 ? c / denom : 0.0);
  }
  return d;
}

double NgramModel::neg_log_likelihood(std::span<const std::string> tokens) const {
  if (tokens.empty()) return 0.0;
  std::vector<std::uint32_t> ctx(order_ - 1, kBosId);
  double nll = 0.0;
  auto step = [&](std::uint32_t id) {
    nll -= std::log(probability(ctx, id));
    ctx.erase(ctx.begin());
    ctx.push_back(id);
  };
  for (const auto& t : tokens) step(token_id(t));
  step(kEosId);
  return nll;
}

InfillCandidate NgramModel::generate_fill(std::span<const std::string> left,
                                          std::span<const std::string> right, std::size_t max_len,
                                          std::size_t top_k, double top_p, Rng& rng,
                                          const std::string& mask_token) const {
  if (max_len < 1) throw Error("max_len must be at least 1");
  std::vector<std::uint32_t> ctx = context_for(left);
  const std::uint32_t stop_id = right.empty() ? kEosId : token_id(right.front());
  const std::uint32_t mask_id = index_.count(mask_token) ? index_.at(mask_token) : kUnkId;

  InfillCandidate cand;
  for (std::size_t step = 0; step < max_len; ++step) {
    const TokenDistribution full = next_distribution(ctx);
    TokenDistribution allowed;
    for (std::size_t i = 0; i < full.ids.size(); ++i) {
      const auto id = full.ids[i];
      // After the first token, producing the right-context token ends the fill.
      const bool stop = step > 0 && id == stop_id;
      if (!stop && (id == kEosId || id == kUnkId || id == mask_id)) continue;
      allowed.ids.push_back(id);
      allowed.probs.push_back(full.probs[i]);
    }
    const TokenDistribution trunc = truncate_distribution(std::move(allowed), top_k, top_p);
    if (trunc.ids.empty()) {
      if (step == 0) throw NoCandidate("every continuation has zero probability");
      break;
    }
    const double r = rng.uniform01();
    std::size_t pick = trunc.ids.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < trunc.ids.size(); ++i) {
      acc += trunc.probs[i];
      if (r < acc) {
        pick = i;
        break;
      }
    }
    const auto id = trunc.ids[pick];
    if (step > 0 && id == stop_id) break;
    cand.score += std::log(probability(ctx, id));
    cand.tokens.push_back(vocab_[id]);
    ctx.erase(ctx.begin());
    ctx.push_back(id);
  }
  cand.score += std::log(probability(ctx, stop_id));
  return cand;
}

json NgramModel::to_json() const {
  json counts = json::array();
  for (const auto& [ctx, stats] : counts_) {
    json next = json::array();
    for (const auto& [id, c] : stats.next) next.push_back({id, c});
    counts.push_back({{"context", ctx}, {"next", next}});
  }
  return {{"format", kFormat},
          {"order", order_},
          {"smoothing", smoothing_},
          {"vocab", vocab_},
          {"counts", counts}};
}

NgramModel NgramModel::from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) throw Error("unsupported model format");
    NgramModel m;
    m.order_ = j.at("order").get<std::size_t>();
    m.smoothing_ = j.at("smoothing").get<double>();
    m.vocab_ = j.at("vocab").get<std::vector<std::string>>();
    if (m.order_ < 2 || m.vocab_.size() < 3 || m.vocab_[kBosId] != kBoundaryStart ||
        m.vocab_[kEosId] != kBoundaryEnd || m.vocab_[kUnkId] != kUnknown) {
      throw Error("inconsistent model header");
    }
    m.rebuild_index();
    for (const auto& entry : j.at("counts")) {
      auto ctx = entry.at("context").get<std::vector<std::uint32_t>>();
      if (ctx.size() != m.order_ - 1) throw Error("context length does not match order");
      auto& stats = m.counts_[ctx];
      for (const auto& pair : entry.at("next")) {
        const auto id = pair.at(0).get<std::uint32_t>();
        const auto c = pair.at(1).get<std::uint64_t>();
        if (id == kBosId || id >= m.vocab_.size() || c == 0) throw Error("bad count entry");
        stats.next[id] = c;
        stats.total += c;
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed n-gram model: ") + e.what());
  }
}

NgramModel NgramModel::load(const std::string& path) {
  try {
    return from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

void NgramModel::save(const std::string& path) const {
  write_file_atomic(path, to_json().dump() + "\n");
}

std::vector<InfillCandidate> NgramBackend::generate(const InfillRequest& req,
                                                    std::uint64_t seed) const {
  const std::size_t pos = mask_position(req.tokens_with_mask, req.mask_token);
  std::span<const std::string> all(req.tokens_with_mask);
  auto left = all.first(pos);
  auto right = all.subspan(pos + 1);

  Rng rng(seed);
  std::vector<InfillCandidate> out;
  const std::size_t attempts = std::max<std::size_t>(32, 8 * req.num_candidates);
  for (std::size_t i = 0; i < attempts && out.size() < req.num_candidates; ++i) {
    auto cand = model_->generate_fill(left, right, req.max_fill_len, req.top_k, req.top_p, rng,
                                      req.mask_token);
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const auto& o) { return o.tokens == cand.tokens; });
    if (!seen) out.push_back(std::move(cand));
  }
  return out;
}

Score NgramBackend::score(std::span<const std::string> tokens) const {
  return {model_->neg_log_likelihood(tokens)};
}

}  // namespace maskfill
