#include "temport/midat.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "temport/rng.hpp"
#include "temport/synth.hpp"
#include "test_helpers.hpp"

using namespace temport;
using testutil::make_tweet;
using testutil::tag;

namespace {

RecognizerModel random_model(const Tweet& tweet, const std::vector<TemporalTag>& tags,
                             Rng& rng, double scale = 1.0) {
  RecognizerModel model;
  for (const Token& tok : tweet.tokens) {
    for (TemporalTag t : tags) {
      for (const std::string& base : word_feature_templates(tok)) {
        model.set_weight(base + "|" + t.str(), scale * rng.normal());
      }
    }
  }
  return model;
}

std::vector<TemporalTag> small_domain() {
  return {TemporalTag::na(), tag("TL=past"),  tag("TL=future"), tag("DOW=Mon"),
          tag("DOW=Fri"),    tag("DOM=9"),    tag("MOY=May"),   tag("DOM=25")};
}

Tweet random_tweet(Rng& rng, int n_tokens) {
  static const std::vector<std::string> kWords = {"kilo", "lima", "mike", "oscar",
                                                  "papa", "romeo", "sierra"};
  Tweet t;
  t.id = "r";
  t.created_at = Date::parse("2016-05-06");
  for (int j = 0; j < n_tokens; ++j) {
    t.tokens.push_back({kWords[rng.below(kWords.size())], "", ""});
  }
  return t;
}

}  // namespace

TEST_CASE("joint score: all-NA assignment against an empty tprime agrees everywhere") {
  Rng rng(51);
  Tweet t = random_tweet(rng, 3);
  RecognizerModel model = random_model(t, small_domain(), rng);
  MiDaTConfig cfg{-25.0, 500.0, 0};
  TagSequence z(3, TemporalTag::na());
  double expected = score(model, t, z) + 53.0 * cfg.alpha_r;
  CHECK(joint_score(model, cfg, t, z, SentenceLabel{}) == doctest::Approx(expected));
}

TEST_CASE("joint score: covering exactly the tprime tags agrees everywhere") {
  Rng rng(52);
  Tweet t = random_tweet(rng, 4);
  RecognizerModel model = random_model(t, small_domain(), rng);
  MiDaTConfig cfg{-25.0, 500.0, 0};
  auto tprime = testutil::label_of({"TL=future", "DOW=Mon", "DOM=9", "MOY=May"});
  TagSequence z = {tag("TL=future"), tag("DOW=Mon"), tag("DOM=9"), tag("MOY=May")};
  double expected = score(model, t, z) + 53.0 * cfg.alpha_r;
  CHECK(joint_score(model, cfg, t, z, tprime) == doctest::Approx(expected));
}

TEST_CASE("joint score: one spurious mention plus one ignored tag costs two penalties") {
  Rng rng(53);
  Tweet t = random_tweet(rng, 2);
  RecognizerModel model = random_model(t, small_domain(), rng);
  MiDaTConfig cfg{-7.0, 11.0, 0};
  auto tprime = testutil::label_of({"DOW=Mon"});
  // Mentions DOW=Fri (not in tprime) and never mentions DOW=Mon.
  TagSequence z = {tag("DOW=Fri"), TemporalTag::na()};
  double expected = score(model, t, z) + 51.0 * cfg.alpha_r + 2.0 * cfg.alpha_p;
  CHECK(joint_score(model, cfg, t, z, tprime) == doctest::Approx(expected));
}

TEST_CASE("zero potentials reduce constrained inference to free inference") {
  Rng rng(54);
  MiDaTConfig cfg{0.0, 0.0, 0};
  for (int trial = 0; trial < 30; ++trial) {
    Tweet t = random_tweet(rng, 1 + int(rng.below(6)));
    RecognizerModel model = random_model(t, small_domain(), rng);
    auto tprime = testutil::label_of({"DOW=Mon", "TL=future"});
    CHECK(infer_constrained(model, cfg, t, tprime) == infer_free(model, t));
  }
}

TEST_CASE("huge reward forces coverage of a single tprime tag") {
  RecognizerModel model;
  model.set_weight("W=x|NA", 3.0);
  Tweet t = make_tweet({"x"});
  MiDaTConfig cfg{-1.0, 1000.0, 0};
  auto tprime = testutil::label_of({"DOW=Mon"});
  TagSequence z = infer_constrained(model, cfg, t, tprime);
  REQUIRE(z.size() == 1);
  CHECK(z[0] == tag("DOW=Mon"));
  // And the joint score agrees that covering beats not covering.
  CHECK(joint_score(model, cfg, t, {tag("DOW=Mon")}, tprime) >
        joint_score(model, cfg, t, {TemporalTag::na()}, tprime));
}

TEST_CASE("local search improves strictly and respects the move cap") {
  Rng rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    Tweet t = random_tweet(rng, 2 + int(rng.below(5)));
    RecognizerModel model = random_model(t, small_domain(), rng, 2.0);
    auto tprime = testutil::label_of({"DOW=Mon", "DOM=9"});
    TagSequence start = infer_free(model, t);

    MiDaTConfig cfg{-2.0, 3.0, 0};
    TagSequence end = infer_constrained(model, cfg, t, tprime);
    if (end == start) continue;
    CHECK(joint_score(model, cfg, t, end, tprime) >
          joint_score(model, cfg, t, start, tprime));

    // Capping at one move changes at most one token relative to the start.
    MiDaTConfig capped{-2.0, 3.0, 1};
    TagSequence one = infer_constrained(model, capped, t, tprime);
    std::size_t diffs = 0;
    for (std::size_t j = 0; j < one.size(); ++j) diffs += one[j] != start[j];
    CHECK(diffs <= 1);
  }
}

TEST_CASE("local search reaches the exhaustive joint optimum on most small instances") {
  Rng rng(56);
  const auto domain = small_domain();
  std::vector<int> domain_ids;
  for (TemporalTag t : domain) domain_ids.push_back(t.id());
  std::sort(domain_ids.begin(), domain_ids.end());

  int hits = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    Tweet t = random_tweet(rng, 1 + int(rng.below(6)));
    RecognizerModel model = random_model(t, domain, rng, 2.0);
    MiDaTConfig cfg{-1.5, 2.5, 0};
    SentenceLabel tprime;
    if (rng.bernoulli(0.8)) tprime.set(tag("DOW=Mon"));
    if (rng.bernoulli(0.5)) tprime.set(tag("DOM=9"));

    ScoreCache cache(model);
    TagSequence z = detail::hill_climb(score_matrix(cache, t), tprime, cfg, domain_ids);
    double got = joint_score(model, cfg, t, z, tprime);
    double best = oracles::exhaustive_joint_optimum(model, cfg, t, tprime, domain);
    CHECK(got <= best + 1e-9);
    if (got >= best - 1e-9) ++hits;
  }
  CHECK(hits >= trials * 95 / 100);
}

TEST_CASE("train_midat: when constrained equals free the model stays zero") {
  // Negative bags with zero potentials: free == constrained always.
  std::vector<Bag> bags;
  for (int i = 0; i < 4; ++i) {
    Bag bag;
    bag.tweet = make_tweet({"plain", "words"}, "2016-05-06", "n" + std::to_string(i));
    bags.push_back(bag);
  }
  MiDaTConfig cfg{0.0, 0.0, 0};
  TrainConfig tcfg;
  tcfg.epochs = 3;
  RecognizerModel model = train_midat(bags, cfg, tcfg);
  CHECK(model.weights().empty());
}

TEST_CASE("midat model files carry the alpha parameters") {
  Bag bag;
  bag.tweet = make_tweet({"friday", "fun"}, "2016-05-06", "p");
  bag.target = Date::parse("2016-05-06");
  bag.label = derive_tags(*bag.target, bag.tweet.created_at);
  bag.polarity = Polarity::Positive;

  MiDaTConfig cfg{-2.0, 4.0, 0};
  TrainConfig tcfg;
  tcfg.epochs = 1;
  RecognizerModel model = train_midat({bag}, cfg, tcfg);
  CHECK(model.component == "midat");
  CHECK(model.metadata["alpha_p"].get<double>() == -2.0);
  CHECK(model.metadata["alpha_r"].get<double>() == 4.0);

  auto p = std::filesystem::temp_directory_path() / "temport_test_midat.tsv";
  model.save(p);
  RecognizerModel loaded = RecognizerModel::load(p);
  CHECK(loaded.component == "midat");
  CHECK(loaded.metadata["alpha_p"].get<double>() == -2.0);
}

TEST_CASE("grid search: single point grid returns that point") {
  std::vector<Bag> bags;
  Bag bag;
  bag.tweet = make_tweet({"friday", "fun", "soon"}, "2016-05-06", "p");
  bag.target = Date::parse("2016-05-06");
  bag.label = derive_tags(*bag.target, bag.tweet.created_at);
  bag.polarity = Polarity::Positive;
  bags.push_back(bag);

  TrainConfig tcfg;
  tcfg.epochs = 1;
  MiDaTConfig best = grid_search(bags, bags, {{-3.0, 7.0}}, tcfg);
  CHECK(best.alpha_p == -3.0);
  CHECK(best.alpha_r == 7.0);
}

TEST_CASE("grid search returns the config with the best dev F1") {
  SynthConfig scfg;
  scfg.n_tweets = 400;
  scfg.n_events = 6;
  scfg.seed = 19;
  auto synth = generate(scfg);
  auto bags = label_positives(synth.corpus, synth.events);
  REQUIRE(!bags.empty());
  std::vector<Bag> train_bags(bags.begin(), bags.begin() + bags.size() / 2);
  std::vector<Bag> dev_bags(bags.begin() + bags.size() / 2, bags.end());

  TrainConfig tcfg;
  tcfg.epochs = 3;
  std::vector<std::pair<double, double>> grid = {{-1.0, 2.0}, {-25.0, 500.0}, {0.0, 0.0}};
  MiDaTConfig best = grid_search(train_bags, dev_bags, grid, tcfg);

  double best_f1 = -1.0;
  for (const auto& [ap, ar] : grid) {
    MiDaTConfig cfg{ap, ar, 0};
    RecognizerModel model = train_midat(train_bags, cfg, tcfg);
    best_f1 = std::max(best_f1, heuristic_tag_f1(model, dev_bags));
  }
  RecognizerModel chosen = train_midat(train_bags, best, tcfg);
  CHECK(heuristic_tag_f1(chosen, dev_bags) == doctest::Approx(best_f1));
}

TEST_CASE("the shipped default grid includes penalty -25 with reward 500") {
  bool found = false;
  for (const auto& [ap, ar] : default_grid()) {
    found = found || (ap == -25.0 && ar == 500.0);
  }
  CHECK(found);
}

TEST_CASE("midat config validation") {
  Tweet t = make_tweet({"x"});
  RecognizerModel model;
  MiDaTConfig bad{1.0, 1.0, 0};
  CHECK_THROWS_AS(infer_constrained(model, bad, t, SentenceLabel{}), std::invalid_argument);
  MiDaTConfig bad2{-1.0, -1.0, 0};
  CHECK_THROWS_AS(joint_score(model, bad2, t, {TemporalTag::na()}, SentenceLabel{}),
                  std::invalid_argument);
}
