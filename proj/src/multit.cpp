#include "temport/multit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "temport/error.hpp"
#include "temport/model_io.hpp"
#include "train_driver.hpp"

namespace temport {

void RecognizerModel::save(const std::filesystem::path& path) const {
  save_model_file(path, component, metadata, weights_.to_sparse());
}

RecognizerModel RecognizerModel::load(const std::filesystem::path& path) {
  LoadedModel raw = load_model_file(path);
  if (raw.component != "multit" && raw.component != "midat") {
    throw DataError(path.string() + ": component '" + raw.component +
                    "' is not a recognizer model");
  }
  RecognizerModel model;
  model.component = raw.component;
  model.metadata = std::move(raw.metadata);
  model.weights_.assign_from(raw.weights);
  return model;
}

const ScoreCache::TokenIds& ScoreCache::token_ids(const std::string& text) {
  auto it = cache_.find(text);
  if (it != cache_.end()) return it->second;

  const std::vector<std::string> templates = word_feature_templates({text, "", ""});
  TokenIds tok;
  tok.n_templates = int(templates.size());
  tok.ids.reserve(templates.size() * kTags);
  auto& index = model_->raw().index();
  std::string name;
  for (int tag_id = 0; tag_id < kTags; ++tag_id) {
    const std::string& tag_str = TemporalTag::from_id(tag_id).str();
    for (const std::string& base : templates) {
      name.assign(base);
      name += '|';
      name += tag_str;
      tok.ids.push_back(interning_ ? index.intern(name) : index.find(name));
    }
  }
  return cache_.emplace(text, std::move(tok)).first->second;
}

void ScoreCache::scores(const TokenIds& tok, std::array<double, kTags>& out) const {
  const SparseWeights& w = model_->raw();
  for (int tag_id = 0; tag_id < kTags; ++tag_id) {
    out[std::size_t(tag_id)] = w.dot_ids(tok.for_tag(tag_id));
  }
}

ScoreMatrix score_matrix(ScoreCache& cache, const Tweet& tweet) {
  ScoreMatrix s(tweet.tokens.size());
  for (std::size_t j = 0; j < tweet.tokens.size(); ++j) {
    cache.scores(cache.token_ids(tweet.tokens[j].text), s[j]);
  }
  return s;
}

double score(const RecognizerModel& model, const Tweet& tweet, const TagSequence& z) {
  if (z.size() != tweet.tokens.size()) {
    throw std::invalid_argument("tag sequence length does not match token count");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    for (const std::string& base : word_feature_templates(tweet.tokens[j])) {
      sum += model.weight(base + "|" + z[j].str());
    }
  }
  return sum;
}

namespace detail {

TagSequence argmax_per_token(const ScoreMatrix& s) {
  TagSequence z(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    int best = 0;
    for (int t = 1; t < TemporalTag::kUniverse; ++t) {
      if (s[j][std::size_t(t)] > s[j][std::size_t(best)]) best = t;
    }
    z[j] = TemporalTag::from_id(best);
  }
  return z;
}

double sequence_score(const ScoreMatrix& s, const TagSequence& z) {
  double sum = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) sum += s[j][std::size_t(z[j].id())];
  return sum;
}

TagSequence greedy_cover(const ScoreMatrix& s, const SentenceLabel& label) {
  const std::size_t n = s.size();
  const std::vector<TemporalTag> required = label.tags();
  if (required.size() > n) throw InfeasibleBag();

  // Domain: label tags plus NA, ascending id (NA is id 0).
  std::vector<int> domain;
  domain.push_back(0);
  for (TemporalTag t : required) domain.push_back(t.id());
  std::sort(domain.begin(), domain.end());

  TagSequence z(n);
  std::array<int, TemporalTag::kUniverse> count{};
  for (std::size_t j = 0; j < n; ++j) {
    int best = domain.front();
    for (int t : domain) {
      if (s[j][std::size_t(t)] > s[j][std::size_t(best)]) best = t;
    }
    z[j] = TemporalTag::from_id(best);
    ++count[std::size_t(best)];
  }

  // Cover uncovered label tags one at a time, each time demoting the token
  // whose reassignment loses the least score without uncovering anything.
  for (;;) {
    std::vector<int> uncovered;
    for (TemporalTag t : required) {
      if (count[std::size_t(t.id())] == 0) uncovered.push_back(t.id());
    }
    if (uncovered.empty()) break;

    double best_loss = std::numeric_limits<double>::infinity();
    int best_tag = -1;
    std::size_t best_tok = 0;
    for (int u : uncovered) {
      for (std::size_t j = 0; j < n; ++j) {
        int cur = z[j].id();
        bool safe = cur == 0 || count[std::size_t(cur)] >= 2;
        if (!safe) continue;
        double loss = s[j][std::size_t(cur)] - s[j][std::size_t(u)];
        if (loss < best_loss) {
          best_loss = loss;
          best_tag = u;
          best_tok = j;
        }
      }
    }
    if (best_tag == -1) throw InfeasibleBag();  // unreachable when |label| <= n

    --count[std::size_t(z[best_tok].id())];
    z[best_tok] = TemporalTag::from_id(best_tag);
    ++count[std::size_t(best_tag)];
  }
  return z;
}

}  // namespace detail

TagSequence infer_free(ScoreCache& cache, const Tweet& tweet) {
  return detail::argmax_per_token(score_matrix(cache, tweet));
}

TagSequence infer_free(const RecognizerModel& model, const Tweet& tweet) {
  ScoreCache cache(model);
  return infer_free(cache, tweet);
}

TagSequence infer_clamped(ScoreCache& cache, const Tweet& tweet, const SentenceLabel& label) {
  return detail::greedy_cover(score_matrix(cache, tweet), label);
}

TagSequence infer_clamped(const RecognizerModel& model, const Tweet& tweet,
                          const SentenceLabel& label) {
  ScoreCache cache(model);
  return infer_clamped(cache, tweet, label);
}

RecognizerModel train(const std::vector<Bag>& bags, const TrainConfig& cfg, TrainStats* stats) {
  return detail::train_driver(
      bags, cfg, "multit", nlohmann::json::object(),
      [](ScoreCache&, const ScoreMatrix& s, const Bag& bag) {
        return detail::greedy_cover(s, bag.label);
      },
      stats);
}

namespace {

void validate_exact_inputs(const Bag& bag, std::span<const TemporalTag> universe) {
  if (bag.tweet.tokens.size() > 6) {
    throw std::invalid_argument("exact enumeration limited to 6 tokens");
  }
  if (universe.size() > 8 || universe.empty()) {
    throw std::invalid_argument("exact enumeration limited to 1..8 tag values");
  }
  bool has_na = false;
  for (TemporalTag t : universe) has_na = has_na || t.is_na();
  if (!has_na) throw std::invalid_argument("universe must contain NA");
}

// Scores per token restricted to the universe, via the string feature path.
std::vector<std::vector<double>> universe_scores(const RecognizerModel& model,
                                                 const Tweet& tweet,
                                                 std::span<const TemporalTag> universe) {
  std::vector<std::vector<double>> s(tweet.tokens.size(),
                                     std::vector<double>(universe.size(), 0.0));
  for (std::size_t j = 0; j < tweet.tokens.size(); ++j) {
    const auto templates = word_feature_templates(tweet.tokens[j]);
    for (std::size_t u = 0; u < universe.size(); ++u) {
      double sum = 0.0;
      for (const std::string& base : templates) {
        sum += model.weight(base + "|" + universe[u].str());
      }
      s[j][u] = sum;
    }
  }
  return s;
}

double logsumexp(const std::vector<double>& xs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : xs) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - mx);
  return mx + std::log(sum);
}

// Enumerates assignments (indices into `domain`) for n tokens, calling
// visit(z_indices, total_score).
template <class Visit>
void enumerate(const std::vector<std::vector<double>>& s, const std::vector<int>& domain,
               Visit&& visit) {
  const std::size_t n = s.size();
  std::vector<int> z(n, 0);
  for (;;) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += s[j][std::size_t(domain[std::size_t(z[j])])];
    visit(z, total);
    std::size_t j = 0;
    while (j < n) {
      if (++z[j] < int(domain.size())) break;
      z[j] = 0;
      ++j;
    }
    if (j == n) break;
  }
}

}  // namespace

std::optional<double> exact_loglik(const RecognizerModel& model, const Bag& bag,
                                   std::span<const TemporalTag> universe) {
  validate_exact_inputs(bag, universe);
  const auto s = universe_scores(model, bag.tweet, universe);
  const std::size_t n = bag.tweet.tokens.size();

  // Free partition function factorizes over tokens: no coupling without the
  // sentence-level factors.
  double log_z_free = 0.0;
  for (std::size_t j = 0; j < n; ++j) log_z_free += logsumexp(s[j]);

  // Clamped: tokens restricted to label tags plus NA, every label tag
  // covered at least once.
  const std::vector<TemporalTag> required = bag.label.tags();
  for (TemporalTag t : required) {
    bool in_universe = false;
    for (TemporalTag u : universe) in_universe = in_universe || u == t;
    if (!in_universe) return std::nullopt;
  }
  std::vector<int> domain;  // indices into universe
  for (std::size_t u = 0; u < universe.size(); ++u) {
    if (universe[u].is_na() || bag.label.contains(universe[u])) domain.push_back(int(u));
  }

  std::vector<double> feasible_scores;
  enumerate(s, domain, [&](const std::vector<int>& z, double total) {
    for (TemporalTag t : required) {
      bool covered = false;
      for (std::size_t j = 0; j < z.size(); ++j) {
        covered = covered || universe[std::size_t(domain[std::size_t(z[j])])] == t;
      }
      if (!covered) return;
    }
    feasible_scores.push_back(total);
  });
  if (feasible_scores.empty()) return std::nullopt;

  return logsumexp(feasible_scores) - log_z_free;
}

std::optional<SparseVector> exact_loglik_gradient(const RecognizerModel& model, const Bag& bag,
                                                  std::span<const TemporalTag> universe) {
  validate_exact_inputs(bag, universe);
  const auto s = universe_scores(model, bag.tweet, universe);
  const std::size_t n = bag.tweet.tokens.size();
  const std::size_t nu = universe.size();

  std::vector<int> full_domain(nu);
  for (std::size_t u = 0; u < nu; ++u) full_domain[u] = int(u);

  const std::vector<TemporalTag> required = bag.label.tags();
  std::vector<int> clamped_domain;
  for (std::size_t u = 0; u < nu; ++u) {
    if (universe[u].is_na() || bag.label.contains(universe[u])) clamped_domain.push_back(int(u));
  }
  auto covers = [&](const std::vector<int>& z, const std::vector<int>& domain) {
    for (TemporalTag t : required) {
      bool covered = false;
      for (std::size_t j = 0; j < z.size(); ++j) {
        covered = covered || universe[std::size_t(domain[std::size_t(z[j])])] == t;
      }
      if (!covered) return false;
    }
    return true;
  };

  // Occupancy marginals P(z_j = u) under each distribution, by two-pass
  // enumeration (max shift, then exp-weighted accumulation).
  auto marginals = [&](const std::vector<int>& domain, bool constrained,
                       std::vector<std::vector<double>>& out) -> bool {
    double mx = -std::numeric_limits<double>::infinity();
    enumerate(s, domain, [&](const std::vector<int>& z, double total) {
      if (constrained && !covers(z, domain)) return;
      mx = std::max(mx, total);
    });
    if (!std::isfinite(mx)) return false;
    double z_sum = 0.0;
    out.assign(n, std::vector<double>(nu, 0.0));
    enumerate(s, domain, [&](const std::vector<int>& z, double total) {
      if (constrained && !covers(z, domain)) return;
      double w = std::exp(total - mx);
      z_sum += w;
      for (std::size_t j = 0; j < n; ++j) {
        out[j][std::size_t(domain[std::size_t(z[j])])] += w;
      }
    });
    for (auto& row : out) {
      for (double& v : row) v /= z_sum;
    }
    return true;
  };

  std::vector<std::vector<double>> p_clamped, p_free;
  if (!marginals(clamped_domain, true, p_clamped)) return std::nullopt;
  marginals(full_domain, false, p_free);

  SparseVector grad;
  for (std::size_t j = 0; j < n; ++j) {
    const auto templates = word_feature_templates(bag.tweet.tokens[j]);
    for (std::size_t u = 0; u < nu; ++u) {
      double delta = p_clamped[j][u] - p_free[j][u];
      if (delta == 0.0) continue;
      for (const std::string& base : templates) {
        grad.add(base + "|" + universe[u].str(), delta);
      }
    }
  }
  return grad;
}

}  // namespace temport
