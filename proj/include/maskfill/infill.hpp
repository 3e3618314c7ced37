#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maskfill/fragmenter.hpp"
#include "maskfill/rng.hpp"

namespace maskfill {

struct InfillRequest {
  std::vector<std::string> tokens_with_mask;
  std::string mask_token = kDefaultMaskToken;
  std::size_t num_candidates = 1;
  std::size_t max_fill_len = 10;
  std::size_t top_k = 100;
  double top_p = 0.7;
  // Passed through to remote backends only; the native backend samples.
  std::size_t beam_size = 5;
};

struct InfillCandidate {
  std::vector<std::string> tokens;
  double score = 0.0;  // log-probability, <= 0
  friend bool operator==(const InfillCandidate&, const InfillCandidate&) = default;
};

struct Score {
  double neg_log_likelihood = 0.0;  // nats
};

/// Empty when the request is well formed, otherwise the reason it is not.
std::string check_request(const InfillRequest& req);

/// Position of the single mask token; throws Error unless there is exactly one.
std::size_t mask_position(std::span<const std::string> tokens, const std::string& mask_token);

/// Span-infilling backend. Implementations must be safe to call concurrently.
class Infiller {
 public:
  virtual ~Infiller() = default;
  virtual std::string id() const = 0;
  /// Raw candidates for a validated request; `infill()` enforces ordering and bounds.
  virtual std::vector<InfillCandidate> generate(const InfillRequest& req,
                                                std::uint64_t seed) const = 0;
};

/// Sequence scorer used for Affinity.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string id() const = 0;
  virtual Score score(std::span<const std::string> tokens) const = 0;
};

/// Round-trip (source -> pivot -> source) translation of a token span.
class RoundTripTranslator {
 public:
  virtual ~RoundTripTranslator() = default;
  virtual std::string id() const = 0;
  virtual std::vector<std::string> round_trip(std::span<const std::string> tokens,
                                              std::uint64_t seed) const = 0;
};

/// Validates the request, draws one seed from `rng`, and returns between 1 and
/// num_candidates distinct candidates sorted by score (descending). Candidates
/// that break the length/placeholder bounds are dropped. Throws NoCandidate
/// when nothing legal remains, Error on a malformed request.
std::vector<InfillCandidate> infill(const Infiller& backend, const InfillRequest& req, Rng& rng);

Score score(const Scorer& scorer, std::span<const std::string> tokens);

/// Returns the same candidates for every request. Useful as a test double.
class FixedInfiller final : public Infiller {
 public:
  explicit FixedInfiller(std::vector<InfillCandidate> candidates, std::string id = "fixed")
      : candidates_(std::move(candidates)), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  std::vector<InfillCandidate> generate(const InfillRequest&, std::uint64_t) const override {
    return candidates_;
  }

 private:
  std::vector<InfillCandidate> candidates_;
  std::string id_;
};

nlohmann::json request_to_json(const InfillRequest& req, std::uint64_t seed);
InfillRequest request_from_json(const nlohmann::json& j, std::uint64_t* seed = nullptr);
nlohmann::json candidates_to_json(const std::vector<InfillCandidate>& candidates);
std::vector<InfillCandidate> candidates_from_json(const nlohmann::json& j);

}  // namespace maskfill
