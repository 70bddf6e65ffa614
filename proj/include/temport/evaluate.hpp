#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "temport/multit.hpp"
#include "temport/normalizer.hpp"

namespace temport {

struct PRF {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  /// 0/0 counts as 0 for precision, recall and F1.
  static PRF from_counts(long long tp, long long fp, long long fn);
};

/// Token-level tag scoring: a predicted non-NA tag is tp iff it equals gold
/// at that position, else fp; a gold non-NA tag without a matching
/// prediction is fn. NA positions are ignored. Sequences align pairwise.
PRF tag_prf(std::span<const TagSequence> gold, std::span<const TagSequence> pred);

/// Per-date-instance scoring. Gold is (tweet id, gold date set) with an
/// empty set meaning an explicit null annotation. Every predicted id must
/// appear in gold; gold ids without predictions count their dates as misses.
PRF date_prf(const std::vector<std::pair<std::string, std::vector<Date>>>& gold,
             const std::map<std::string, Resolution>& pred);

/// Fraction of tweets whose predicted date set exactly equals the gold set
/// (both empty counts as a match).
double date_accuracy(const std::vector<std::pair<std::string, std::vector<Date>>>& gold,
                     const std::map<std::string, Resolution>& pred);

struct SweepRow {
  double threshold = 0.0;
  PRF prf;
};

/// One PRF row per threshold over the dev corpus (tweets with gold
/// annotations). Candidates are scored once; only the decode cut varies, so
/// predicted sets are nested and recall is non-increasing.
std::vector<SweepRow> sweep(const RecognizerModel& recognizer, const NormalizerModel& model,
                            const std::vector<Tweet>& dev, std::span<const double> thresholds,
                            bool use_external = false);

/// The seven documented error categories for manual annotation of report
/// entries; categorization itself is not automated.
std::span<const std::string_view> error_category_labels();

/// Full date-evaluation report: overall PRF, exact-match accuracy, the error
/// category labels, and a per-tweet dump (id, gold, predicted with
/// confidences, a null category slot, any explain payload).
nlohmann::json date_eval_report(
    const std::vector<std::pair<std::string, std::vector<Date>>>& gold,
    const std::vector<ResolutionRecord>& pred);

nlohmann::json tags_eval_report(
    const std::vector<std::pair<std::string, TagSequence>>& gold,
    const std::vector<std::pair<std::string, TagSequence>>& pred);

nlohmann::json sweep_report(std::span<const SweepRow> rows);

}  // namespace temport
