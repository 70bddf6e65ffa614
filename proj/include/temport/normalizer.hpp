#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "temport/feature_index.hpp"
#include "temport/multit.hpp"

namespace temport {

/// One date hypothesis for a tweet: a calendar date or the no-date (null)
/// hypothesis. Window candidates lie within +-10 days of the creation date;
/// external candidates come from an outside resolver and may fall anywhere.
struct Candidate {
  std::optional<Date> date;
  bool external = false;

  static Candidate null_hyp() { return {}; }
  static Candidate at(Date d) { return {d, false}; }
  static Candidate from_external(Date d) { return {d, true}; }
};

/// Exactly 22 candidates: offsets -10..+10 in order, then null.
std::vector<Candidate> gen_candidates(Date pub);

/// Log-linear binary classifier over candidates.
class NormalizerModel {
 public:
  FeatureGroups groups;
  double threshold = 0.5;

  double weight(std::string_view feature) const { return weights_.get(feature); }
  void set_weight(std::string_view feature, double w) { weights_.set(feature, w); }
  SparseVector weights() const { return weights_.to_sparse(); }

  SparseWeights& raw() { return weights_; }
  const SparseWeights& raw() const { return weights_; }

  nlohmann::json metadata = nlohmann::json::object();

  void save(const std::filesystem::path& path) const;
  static NormalizerModel load(const std::filesystem::path& path);

 private:
  SparseWeights weights_;
};

struct ScoredDate {
  Date date;
  double confidence = 0.0;
};

struct Resolution {
  std::vector<ScoredDate> dates;  // confidence descending
  bool is_null() const { return dates.empty(); }
};

/// P(candidate | tweet) = logistic(theta . g); each candidate is scored as
/// an independent binary decision. External candidates additionally fire the
/// EXTERNAL indicator.
double classify(const NormalizerModel& model, const Tweet& tweet,
                const TagSequence& extracted, const Candidate& cand);

/// Seeded SGD on logistic loss with L2 regularization over one binary
/// example per (bag, candidate) pair: positive at the bag's target date, or
/// at null for negative bags. Tags come from free inference under the
/// recognizer. epochs == 0 yields the zero model.
NormalizerModel train_normalizer(const std::vector<Bag>& bags,
                                 const RecognizerModel& recognizer,
                                 const FeatureGroups& groups, const TrainConfig& cfg,
                                 double l2 = 1e-4, double threshold = 0.5);

/// Interned-id mirror of the normalizer feature strings; the two paths share
/// one enumeration, so probabilities agree exactly.
class NormFeatureCache {
 public:
  explicit NormFeatureCache(NormalizerModel* model);        // interning
  explicit NormFeatureCache(const NormalizerModel& model);  // find-only

  void collect(const NormContext& ctx, std::optional<Date> candidate, bool external,
               std::vector<int>& out);

  const NormalizerModel& model() const { return *model_; }

 private:
  int id_of(const std::string& name) const;
  int lex_slot(std::unordered_map<std::string, std::vector<int>>& table,
               const std::string& key, int tag_id, const std::string& name);

  friend struct NormIdSink;

  NormalizerModel* model_;
  bool interning_;
  // Slot value -2 means "not looked up yet"; -1 means "unknown feature"
  // (possible only in find-only mode, where the model is fixed).
  std::vector<int> match_ids_, match_type_ids_, spur_ids_, miss_ids_;
  std::vector<int> dd_ids_, wd_ids_, nullcand_tag_ids_;
  int nullcand_id_ = -2;
  int external_id_ = -2;
  std::unordered_map<std::string, std::vector<int>> lex_ids_;      // word -> 54 slots
  std::unordered_map<std::string, std::vector<int>> lex_pos_ids_;  // word\x1fpos -> 54 slots
};

struct CandidateScores {
  double null_prob = 0.5;
  std::vector<ScoredDate> dates;  // window + external candidates, deduplicated
};

/// Thresholded decode: every candidate strictly beating both the threshold
/// and the null hypothesis, confidence descending.
Resolution decode(const CandidateScores& scores, double threshold);

/// Bulk resolution pipeline: recognizer tagging plus normalizer scoring with
/// persistent caches.
class Resolver {
 public:
  Resolver(const RecognizerModel& recognizer, const NormalizerModel& normalizer);

  TagSequence tag(const Tweet& tweet);
  CandidateScores score_candidates(const Tweet& tweet, const TagSequence& extracted,
                                   const std::vector<Date>& external_dates);
  Resolution resolve(const Tweet& tweet, const std::vector<Date>& external_dates);
  Resolution resolve(const Tweet& tweet, const TagSequence& extracted,
                     const std::vector<Date>& external_dates);

  /// Feature ids fired for one candidate, sorted (for explain output).
  std::vector<std::string> fired_features(const Tweet& tweet, const TagSequence& extracted,
                                          const Candidate& cand) const;

  const NormalizerModel& normalizer() const { return *normalizer_; }

 private:
  const RecognizerModel* recognizer_;
  const NormalizerModel* normalizer_;
  ScoreCache rec_cache_;
  NormFeatureCache norm_cache_;
  std::vector<int> scratch_;
};

/// Free-standing resolution per the module contract; equivalent to
/// Resolver::resolve with fresh caches.
Resolution resolve(const NormalizerModel& model, const RecognizerModel& recognizer,
                   const Tweet& tweet, const TagSequence& extracted,
                   const std::vector<Date>& external_dates);

struct ResolutionRecord {
  std::string id;
  Resolution res;
  std::vector<std::string> top_features;  // optional explain payload
};

/// One JSON object per line: {"id":..., "dates":[{"date":...,"confidence":...}]}.
void save_resolutions(std::span<const ResolutionRecord> records,
                      const std::filesystem::path& path);
std::vector<ResolutionRecord> load_resolutions(const std::filesystem::path& path);

}  // namespace temport
