#pragma once

#include <span>
#include <utility>
#include <vector>

#include "temport/multit.hpp"

namespace temport {

/// Penalty/reward potentials coupling mentioned tags with the tags derived
/// from the event date. alpha_p <= 0 <= alpha_r.
struct MiDaTConfig {
  double alpha_p = -25.0;
  double alpha_r = 500.0;
  int max_moves = 0;  // 0 = 4 x token count

  int resolved_max_moves(std::size_t tokens) const {
    return max_moves > 0 ? max_moves : int(4 * tokens);
  }
};

/// Word score of z plus, over the 53 non-NA tag values, alpha_r where
/// membership in m (tags mentioned by z) agrees with membership in tprime
/// and alpha_p where it disagrees.
double joint_score(const RecognizerModel& model, const MiDaTConfig& cfg, const Tweet& tweet,
                   const TagSequence& z, const SentenceLabel& tprime);

/// Local search from the free argmax: repeatedly apply the single-token
/// reassignment with the largest strictly positive joint-score gain, over
/// the full 54-tag domain, until a local optimum or the move cap.
TagSequence infer_constrained(const RecognizerModel& model, const MiDaTConfig& cfg,
                              const Tweet& tweet, const SentenceLabel& tprime);
TagSequence infer_constrained(ScoreCache& cache, const MiDaTConfig& cfg, const Tweet& tweet,
                              const SentenceLabel& tprime);

/// Same update scheme as multit::train but with the soft-constrained
/// assignment as the positive half; the agreement potentials steer inference
/// only and never enter the weight update.
RecognizerModel train_midat(const std::vector<Bag>& bags, const MiDaTConfig& cfg,
                            const TrainConfig& tcfg, TrainStats* stats = nullptr);

/// Sentence-level tag F1 of free inference against the bags' heuristic
/// labels (the grid-search objective).
double heuristic_tag_f1(const RecognizerModel& model, const std::vector<Bag>& bags);

/// Trains one model per (alpha_p, alpha_r) point and returns the config with
/// the best dev F1; ties break toward the earliest grid position.
MiDaTConfig grid_search(const std::vector<Bag>& bags_train, const std::vector<Bag>& bags_dev,
                        const std::vector<std::pair<double, double>>& grid,
                        const TrainConfig& tcfg = TrainConfig{});

/// Shipped default grid; spans the large-corpus regime (penalty -25, reward
/// 500 and neighbors) and desk-scale magnitudes.
std::vector<std::pair<double, double>> default_grid();

namespace detail {

/// Restricted-domain variant used by the exhaustive-oracle tests; domain ids
/// must be ascending and include NA (id 0).
TagSequence hill_climb(const ScoreMatrix& s, const SentenceLabel& tprime,
                       const MiDaTConfig& cfg, std::span<const int> domain_ids);

}  // namespace detail

}  // namespace temport
