#include "maskfill/infill.hpp"

#include <algorithm>
#include <cmath>

#include "maskfill/errors.hpp"

namespace maskfill {

using nlohmann::json;

std::string check_request(const InfillRequest& req) {
  const auto masks =
      std::count(req.tokens_with_mask.begin(), req.tokens_with_mask.end(), req.mask_token);
  if (masks != 1) return "expected exactly one mask token, found " + std::to_string(masks);
  if (req.num_candidates < 1) return "num_candidates must be at least 1";
  if (req.max_fill_len < 1) return "max_fill_len must be at least 1";
  if (req.top_k < 1) return "top_k must be at least 1";
  if (!(req.top_p > 0.0 && req.top_p <= 1.0)) return "top_p must lie in (0, 1]";
  return {};
}

std::size_t mask_position(std::span<const std::string> tokens, const std::string& mask_token) {
  std::size_t pos = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] != mask_token) continue;
    if (pos != tokens.size()) throw Error("more than one mask token");
    pos = i;
  }
  if (pos == tokens.size()) throw Error("no mask token");
  return pos;
}

std::vector<InfillCandidate> infill(const Infiller& backend, const InfillRequest& req, Rng& rng) {
  if (auto why = check_request(req); !why.empty()) throw Error("bad infill request: " + why);
  auto raw = backend.generate(req, rng.next_u64());

  std::vector<InfillCandidate> out;
  for (auto& c : raw) {
    if (c.tokens.empty() || c.tokens.size() > req.max_fill_len) continue;
    if (std::find(c.tokens.begin(), c.tokens.end(), req.mask_token) != c.tokens.end()) continue;
    if (!std::all_of(c.tokens.begin(), c.tokens.end(), is_valid_token)) continue;
    if (std::isnan(c.score)) continue;
    c.score = std::min(c.score, 0.0);
    if (std::any_of(out.begin(), out.end(), [&](const auto& o) { return o.tokens == c.tokens; })) {
      continue;
    }
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.tokens < b.tokens;
  });
  if (out.size() > req.num_candidates) out.resize(req.num_candidates);
  if (out.empty()) throw NoCandidate("backend '" + backend.id() + "' produced no legal fill");
  return out;
}

Score score(const Scorer& scorer, std::span<const std::string> tokens) {
  if (tokens.empty()) return {};
  return scorer.score(tokens);
}

json request_to_json(const InfillRequest& req, std::uint64_t seed) {
  return {{"tokens_with_mask", req.tokens_with_mask},
          {"mask_token", req.mask_token},
          {"num_candidates", req.num_candidates},
          {"max_fill_len", req.max_fill_len},
          {"top_k", req.top_k},
          {"top_p", req.top_p},
          {"beam_size", req.beam_size},
          {"seed", seed}};
}

InfillRequest request_from_json(const json& j, std::uint64_t* seed) {
  InfillRequest req;
  req.tokens_with_mask = j.at("tokens_with_mask").get<std::vector<std::string>>();
  req.mask_token = j.value("mask_token", std::string(kDefaultMaskToken));
  req.num_candidates = j.value("num_candidates", req.num_candidates);
  req.max_fill_len = j.value("max_fill_len", req.max_fill_len);
  req.top_k = j.value("top_k", req.top_k);
  req.top_p = j.value("top_p", req.top_p);
  req.beam_size = j.value("beam_size", req.beam_size);
  if (seed) *seed = j.value("seed", std::uint64_t{0});
  return req;
}

json candidates_to_json(const std::vector<InfillCandidate>& candidates) {
  json arr = json::array();
  for (const auto& c : candidates) arr.push_back({{"tokens", c.tokens}, {"score", c.score}});
  return {{"candidates", arr}};
}

std::vector<InfillCandidate> candidates_from_json(const json& j) {
  std::vector<InfillCandidate> out;
  for (const auto& c : j.at("candidates")) {
    out.push_back({c.at("tokens").get<std::vector<std::string>>(), c.at("score").get<double>()});
  }
  return out;
}

}  // namespace maskfill
