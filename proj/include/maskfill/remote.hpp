#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>

#include "maskfill/infill.hpp"

namespace maskfill {

struct RemoteOptions {
  std::size_t max_in_flight = 4;
  /// Extra attempts after a transport failure or 5xx reply. 4xx replies are not retried.
  std::size_t retries = 2;
  std::chrono::milliseconds timeout{30000};
};

/// Client for an infilling service speaking the JSON protocol:
///   POST /infill    request_to_json(...)   -> {candidates: [{tokens, score}]}
///   POST /score     {tokens}               -> {neg_log_likelihood}
///   POST /roundtrip {tokens, seed}         -> {tokens}
///   GET  /health                           -> {status: "ok", model_id}
/// Any non-2xx status or malformed body raises BackendUnavailable.
class RemoteBackend final : public Infiller, public Scorer, public RoundTripTranslator {
 public:
  /// `endpoint` is "http://host:port" (a missing scheme defaults to http).
  explicit RemoteBackend(std::string endpoint, RemoteOptions opts = {});
  ~RemoteBackend() override;

  std::string id() const override { return "remote:" + endpoint_; }
  const std::string& endpoint() const noexcept { return endpoint_; }

  /// Returns the served model id.
  std::string health() const;

  std::vector<InfillCandidate> generate(const InfillRequest& req,
                                        std::uint64_t seed) const override;
  Score score(std::span<const std::string> tokens) const override;
  std::vector<std::string> round_trip(std::span<const std::string> tokens,
                                      std::uint64_t seed) const override;

 private:
  nlohmann::json call(const std::string& method, const std::string& path,
                      const nlohmann::json* body) const;

  std::string endpoint_;
  RemoteOptions opts_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  mutable std::size_t in_flight_ = 0;
};

}  // namespace maskfill
