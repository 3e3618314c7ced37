#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "maskfill/infill.hpp"

namespace maskfill {

inline constexpr const char* kBoundaryStart = "<s>";
inline constexpr const char* kBoundaryEnd = "</s>";
inline constexpr const char* kUnknown = "<unk>";

/// Next-token probabilities, parallel arrays of token id and probability.
struct TokenDistribution {
  std::vector<std::uint32_t> ids;
  std::vector<double> probs;

  double total() const;
};

/// Keeps the `top_k` most probable entries, then the smallest prefix whose
/// cumulative mass reaches `top_p`, and renormalizes. Ties break on lower id.
/// An all-zero input yields an empty distribution.
TokenDistribution truncate_distribution(TokenDistribution dist, std::size_t top_k, double top_p);

/// Add-k smoothed n-gram model over a closed vocabulary.
///
/// Sentences are padded with order-1 start markers and one end marker. The
/// next-token support is every training word plus the end marker and an
/// unknown-word slot, so P(w | ctx) = (c(ctx, w) + k) / (c(ctx) + k |V|).
class NgramModel {
 public:
  static constexpr std::uint32_t kBosId = 0;
  static constexpr std::uint32_t kEosId = 1;
  static constexpr std::uint32_t kUnkId = 2;

  /// Throws Error for order < 2, negative smoothing, an empty corpus, or
  /// sentences containing reserved boundary tokens.
  static NgramModel train(const std::vector<std::vector<std::string>>& sentences,
                          std::size_t order = 3, double smoothing = 0.01);

  static NgramModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static NgramModel load(const std::string& path);
  void save(const std::string& path) const;

  std::size_t order() const noexcept { return order_; }
  double smoothing() const noexcept { return smoothing_; }
  /// Vocabulary by id; ids 0..2 are the reserved markers.
  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }
  std::uint32_t token_id(const std::string& token) const;

  /// Raw count of `next` after the (order-1)-token context; 0 if unseen.
  std::uint64_t count(std::span<const std::uint32_t> context, std::uint32_t next) const;
  std::uint64_t context_total(std::span<const std::uint32_t> context) const;

  /// Context ids for the last order-1 tokens of `history`, start-padded.
  std::vector<std::uint32_t> context_for(std::span<const std::string> history) const;

  double probability(std::span<const std::uint32_t> context, std::uint32_t next) const;
  /// Full smoothed next-token distribution over the support.
  TokenDistribution next_distribution(std::span<const std::uint32_t> context) const;

  /// -sum log P(token | context) over the tokens and the end marker; 0 for empty input.
  double neg_log_likelihood(std::span<const std::string> tokens) const;

  /// Samples one fill left to right. Generation stops when the model emits the
  /// first right-context token (or the end marker when the right side is
  /// empty), or at max_len. Score = sum of the fill's log-probabilities plus
  /// the log-probability of that right-context token after the fill.
  InfillCandidate generate_fill(std::span<const std::string> left,
                                std::span<const std::string> right, std::size_t max_len,
                                std::size_t top_k, double top_p, Rng& rng,
                                const std::string& mask_token = kDefaultMaskToken) const;

  friend bool operator==(const NgramModel&, const NgramModel&) = default;

 private:
  struct ContextStats {
    std::uint64_t total = 0;
    std::map<std::uint32_t, std::uint64_t> next;
    friend bool operator==(const ContextStats&, const ContextStats&) = default;
  };

  std::size_t order_ = 3;
  double smoothing_ = 0.01;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::map<std::vector<std::uint32_t>, ContextStats> counts_;

  const ContextStats* find(std::span<const std::uint32_t> context) const;
  void rebuild_index();
};

/// Native infilling and scoring backend over a shared, immutable n-gram model.
class NgramBackend final : public Infiller, public Scorer {
 public:
  explicit NgramBackend(std::shared_ptr<const NgramModel> model, std::string id = "native-ngram")
      : model_(std::move(model)), id_(std::move(id)) {}

  std::string id() const override { return id_; }
  /// Draws repeated samples until num_candidates distinct fills are found or
  /// the attempt budget (max(32, 8k)) runs out.
  std::vector<InfillCandidate> generate(const InfillRequest& req,
                                        std::uint64_t seed) const override;
  Score score(std::span<const std::string> tokens) const override;

  const NgramModel& model() const noexcept { return *model_; }

 private:
  std::shared_ptr<const NgramModel> model_;
  std::string id_;
};

}  // namespace maskfill
