#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "temport/distant_labels.hpp"
#include "temport/feature_index.hpp"
#include "temport/features.hpp"

namespace temport {

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
  bool shuffle = true;
  bool averaging = true;
};

/// A bag whose sentence label cannot be covered (more tags than tokens).
/// Training skips these and counts them.
struct InfeasibleBag : std::runtime_error {
  InfeasibleBag() : std::runtime_error("sentence label has more tags than tokens") {}
};

/// Word-level temporal tagging model: one weight per tag-conjoined word
/// feature. Shared by the multiple-instance and missing-data trainers, which
/// differ only in how the clamped assignment is inferred.
class RecognizerModel {
 public:
  double weight(std::string_view feature) const { return weights_.get(feature); }
  void set_weight(std::string_view feature, double w) { weights_.set(feature, w); }
  SparseVector weights() const { return weights_.to_sparse(); }

  SparseWeights& raw() { return weights_; }
  const SparseWeights& raw() const { return weights_; }

  std::string component = "multit";
  nlohmann::json metadata = nlohmann::json::object();

  void save(const std::filesystem::path& path) const;
  static RecognizerModel load(const std::filesystem::path& path);

 private:
  SparseWeights weights_;
};

/// Per-token feature ids for every tag in the universe, cached by token
/// text. The interning flavor grows the bound model's feature index (used
/// during training); the find-only flavor never mutates the model.
class ScoreCache {
 public:
  static constexpr int kTags = TemporalTag::kUniverse;

  struct TokenIds {
    int n_templates = 0;
    std::vector<int> ids;  // n_templates * kTags, grouped by tag
    std::span<const int> for_tag(int tag_id) const {
      return {ids.data() + std::size_t(tag_id) * std::size_t(n_templates),
              std::size_t(n_templates)};
    }
  };

  explicit ScoreCache(const RecognizerModel& model)
      : model_(const_cast<RecognizerModel*>(&model)), interning_(false) {}
  explicit ScoreCache(RecognizerModel* model) : model_(model), interning_(true) {}

  const TokenIds& token_ids(const std::string& text);

  /// Scores of tagging this token with each of the 54 tags under the current
  /// weights. Not cached: weights move during training.
  void scores(const TokenIds& tok, std::array<double, kTags>& out) const;

  const RecognizerModel& model() const { return *model_; }

 private:
  RecognizerModel* model_;
  bool interning_;
  std::unordered_map<std::string, TokenIds> cache_;
};

/// Score matrix for one tweet: s[j][t] = theta . f(tag t, token j).
using ScoreMatrix = std::vector<std::array<double, TemporalTag::kUniverse>>;
ScoreMatrix score_matrix(ScoreCache& cache, const Tweet& tweet);

/// Sum over tokens of theta . f(z_j, w_j). Throws std::invalid_argument on
/// length mismatch.
double score(const RecognizerModel& model, const Tweet& tweet, const TagSequence& z);

/// Per-token argmax over all 54 tags; ties break toward the lowest tag id.
TagSequence infer_free(const RecognizerModel& model, const Tweet& tweet);
TagSequence infer_free(ScoreCache& cache, const Tweet& tweet);

/// Best assignment consistent with the sentence label: every label tag on at
/// least one token, all tokens restricted to label tags plus NA. Greedy
/// weighted set cover; throws InfeasibleBag when the label exceeds the token
/// count.
TagSequence infer_clamped(const RecognizerModel& model, const Tweet& tweet,
                          const SentenceLabel& label);
TagSequence infer_clamped(ScoreCache& cache, const Tweet& tweet, const SentenceLabel& label);

struct TrainStats {
  int infeasible_skipped = 0;
};

/// Latent-variable training: per bag, update weights by
/// learning_rate * (F(clamped argmax) - F(free argmax)), optionally
/// averaging all intermediate weight vectors. Deterministic given the seed.
RecognizerModel train(const std::vector<Bag>& bags, const TrainConfig& cfg,
                      TrainStats* stats = nullptr);

// Test-support oracles, feasible only at desk scale (<= 6 tokens, <= 8-tag
// universe): exact conditional log-likelihood of the sentence label and its
// gradient, by enumeration with proper normalization. nullopt means the
// clamped set is empty (log-likelihood -inf). The universe must contain NA.
std::optional<double> exact_loglik(const RecognizerModel& model, const Bag& bag,
                                   std::span<const TemporalTag> universe);
std::optional<SparseVector> exact_loglik_gradient(const RecognizerModel& model,
                                                  const Bag& bag,
                                                  std::span<const TemporalTag> universe);

namespace detail {

TagSequence argmax_per_token(const ScoreMatrix& s);
TagSequence greedy_cover(const ScoreMatrix& s, const SentenceLabel& label);
double sequence_score(const ScoreMatrix& s, const TagSequence& z);

}  // namespace detail

}  // namespace temport
