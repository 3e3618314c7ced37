#include "maskfill/remote.hpp"

#include <httplib.h>

#include <cmath>

#include "maskfill/errors.hpp"

namespace maskfill {

using nlohmann::json;

RemoteBackend::RemoteBackend(std::string endpoint, RemoteOptions opts)
    : endpoint_(std::move(endpoint)), opts_(opts) {
  if (endpoint_.find("://") == std::string::npos) endpoint_ = "http://" + endpoint_;
  while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
  if (opts_.max_in_flight == 0) opts_.max_in_flight = 1;
}

RemoteBackend::~RemoteBackend() = default;

json RemoteBackend::call(const std::string& method, const std::string& path,
                         const json* body) const {
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < opts_.max_in_flight; });
    ++in_flight_;
  }
  struct Release {
    const RemoteBackend* self;
    ~Release() {
      {
        std::lock_guard lock(self->mu_);
        --self->in_flight_;
      }
      self->cv_.notify_one();
    }
  } release{this};

  std::string last_error;
  for (std::size_t attempt = 0; attempt <= opts_.retries; ++attempt) {
    httplib::Client client(endpoint_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(opts_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(opts_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    auto res = method == "GET" ? client.Get(path)
                               : client.Post(path, body->dump(), "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw BackendUnavailable(endpoint_ + path + ": HTTP " + std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::parse_error&) {
      throw BackendUnavailable(endpoint_ + path + ": malformed response body");
    }
  }
  throw BackendUnavailable(endpoint_ + path + ": " + last_error);
}

std::string RemoteBackend::health() const {
  const json j = call("GET", "/health", nullptr);
  if (!j.is_object() || j.value("status", "") != "ok" || !j.contains("model_id") ||
      !j["model_id"].is_string()) {
    throw BackendUnavailable(endpoint_ + "/health: service not ready");
  }
  return j["model_id"].get<std::string>();
}

std::vector<InfillCandidate> RemoteBackend::generate(const InfillRequest& req,
                                                     std::uint64_t seed) const {
  const json body = request_to_json(req, seed);
  const json j = call("POST", "/infill", &body);
  try {
    return candidates_from_json(j);
  } catch (const json::exception&) {
    throw BackendUnavailable(endpoint_ + "/infill: malformed response body");
  }
}

Score RemoteBackend::score(std::span<const std::string> tokens) const {
  const json body = {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())}};
  const json j = call("POST", "/score", &body);
  if (!j.is_object() || !j.contains("neg_log_likelihood") || !j["neg_log_likelihood"].is_number()) {
    throw BackendUnavailable(endpoint_ + "/score: malformed response body");
  }
  const double nll = j["neg_log_likelihood"].get<double>();
  if (!(nll >= 0.0)) throw BackendUnavailable(endpoint_ + "/score: negative log-likelihood");
  return {nll};
}

std::vector<std::string> RemoteBackend::round_trip(std::span<const std::string> tokens,
                                                   std::uint64_t seed) const {
  const json body = {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())},
                     {"seed", seed}};
  const json j = call("POST", "/roundtrip", &body);
  try {
    return j.at("tokens").get<std::vector<std::string>>();
  } catch (const json::exception&) {
    throw BackendUnavailable(endpoint_ + "/roundtrip: malformed response body");
  }
}

}  // namespace maskfill
