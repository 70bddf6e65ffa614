#include "temport/evaluate.hpp"

#include "doctest.h"
#include "temport/error.hpp"
#include "test_helpers.hpp"

using namespace temport;
using testutil::tag;

namespace {

TagSequence seq(std::initializer_list<const char*> tags) {
  TagSequence out;
  for (const char* c : tags) out.push_back(testutil::tag(c));
  return out;
}

}  // namespace

TEST_CASE("all-NA sequences are vacuous: zero counts, zero metrics") {
  std::vector<TagSequence> gold = {seq({"NA", "NA", "NA"})};
  PRF prf = tag_prf(gold, gold);
  CHECK(prf.tp == 0);
  CHECK(prf.fp == 0);
  CHECK(prf.fn == 0);
  CHECK(prf.precision == 0.0);
  CHECK(prf.recall == 0.0);
  CHECK(prf.f1 == 0.0);
}

TEST_CASE("perfect non-trivial prediction scores 1.0") {
  std::vector<TagSequence> gold = {
      seq({"DOW=Mon", "NA", "TL=future", "DOM=9", "NA"}),
      seq({"MOY=May", "NA", "NA", "DOW=Fri", "NA"}),
  };
  PRF prf = tag_prf(gold, gold);
  CHECK(prf.tp == 5);
  CHECK(prf.precision == 1.0);
  CHECK(prf.recall == 1.0);
  CHECK(prf.f1 == 1.0);
}

TEST_CASE("hand-counted 10-token case: 2 hits, 1 spurious, 1 miss") {
  std::vector<TagSequence> gold = {seq({"DOW=Mon", "NA", "TL=future", "NA", "DOM=9",
                                        "NA", "NA", "NA", "NA", "NA"})};
  std::vector<TagSequence> pred = {seq({"DOW=Mon", "NA", "TL=future", "MOY=May", "NA",
                                        "NA", "NA", "NA", "NA", "NA"})};
  PRF prf = tag_prf(gold, pred);
  CHECK(prf.tp == 2);
  CHECK(prf.fp == 1);
  CHECK(prf.fn == 1);
  CHECK(prf.precision == doctest::Approx(2.0 / 3.0));
  CHECK(prf.recall == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("a wrong tag at a gold position is both fp and fn") {
  std::vector<TagSequence> gold = {seq({"DOW=Mon"})};
  std::vector<TagSequence> pred = {seq({"DOW=Tue"})};
  PRF prf = tag_prf(gold, pred);
  CHECK(prf.tp == 0);
  CHECK(prf.fp == 1);
  CHECK(prf.fn == 1);
}

TEST_CASE("misaligned sequences are an error") {
  std::vector<TagSequence> gold = {seq({"NA", "NA"})};
  std::vector<TagSequence> pred = {seq({"NA"})};
  CHECK_THROWS_AS(tag_prf(gold, pred), DataError);
}

TEST_CASE("swapping gold and pred swaps precision and recall") {
  std::vector<TagSequence> gold = {seq({"DOW=Mon", "TL=future", "NA", "NA"})};
  std::vector<TagSequence> pred = {seq({"DOW=Mon", "NA", "MOY=May", "DOM=9"})};
  PRF a = tag_prf(gold, pred);
  PRF b = tag_prf(pred, gold);
  CHECK(a.precision == doctest::Approx(b.recall));
  CHECK(a.recall == doctest::Approx(b.precision));
}

namespace {

Resolution res_of(std::initializer_list<const char*> dates) {
  Resolution r;
  double conf = 0.9;
  for (const char* d : dates) {
    r.dates.push_back({Date::parse(d), conf});
    conf -= 0.1;
  }
  return r;
}

}  // namespace

TEST_CASE("date eval: empty predictions against null golds") {
  std::vector<std::pair<std::string, std::vector<Date>>> gold = {{"a", {}}, {"b", {}}};
  std::map<std::string, Resolution> pred = {{"a", {}}, {"b", {}}};
  PRF prf = date_prf(gold, pred);
  CHECK(prf.precision == 0.0);
  CHECK(prf.recall == 0.0);
  CHECK(prf.f1 == 0.0);
  CHECK(date_accuracy(gold, pred) == 1.0);
}

TEST_CASE("date eval: exact match on non-null golds") {
  std::vector<std::pair<std::string, std::vector<Date>>> gold = {
      {"a", {Date::parse("2016-05-09")}},
      {"b", {Date::parse("2016-05-10"), Date::parse("2016-05-11")}}};
  std::map<std::string, Resolution> pred = {
      {"a", res_of({"2016-05-09"})}, {"b", res_of({"2016-05-10", "2016-05-11"})}};
  PRF prf = date_prf(gold, pred);
  CHECK(prf.f1 == 1.0);
  CHECK(date_accuracy(gold, pred) == 1.0);
}

TEST_CASE("date eval 3-tweet fixture: one hit, one wrong on a null gold, one miss") {
  std::vector<std::pair<std::string, std::vector<Date>>> gold = {
      {"hit", {Date::parse("2016-05-09")}},
      {"overcall", {}},
      {"miss", {Date::parse("2016-05-11")}}};
  std::map<std::string, Resolution> pred = {
      {"hit", res_of({"2016-05-09"})},
      {"overcall", res_of({"2016-05-10"})},
      {"miss", {}}};
  PRF prf = date_prf(gold, pred);
  CHECK(prf.tp == 1);
  CHECK(prf.fp == 1);
  CHECK(prf.fn == 1);
  CHECK(prf.precision == doctest::Approx(0.5));
  CHECK(prf.recall == doctest::Approx(0.5));
}

TEST_CASE("unknown prediction ids are an error") {
  std::vector<std::pair<std::string, std::vector<Date>>> gold = {{"a", {}}};
  std::map<std::string, Resolution> pred = {{"ghost", res_of({"2016-05-09"})}};
  CHECK_THROWS_AS(date_prf(gold, pred), DataError);
}

TEST_CASE("date report carries accuracy, error categories and per-tweet entries") {
  std::vector<std::pair<std::string, std::vector<Date>>> gold = {
      {"a", {Date::parse("2016-05-09")}}, {"b", {}}};
  std::vector<ResolutionRecord> pred(2);
  pred[0].id = "a";
  pred[0].res = res_of({"2016-05-09"});
  pred[1].id = "b";
  nlohmann::json report = date_eval_report(gold, pred);
  CHECK(report["mode"] == "dates");
  CHECK(report["f1"].get<double>() == 1.0);
  CHECK(report["accuracy"].get<double>() == 1.0);
  CHECK(report["error_categories"].size() == 7);
  REQUIRE(report["tweets"].size() == 2);
  CHECK(report["tweets"][0]["id"] == "a");
  CHECK(report["tweets"][0]["category"].is_null());
}

TEST_CASE("PRF identities on assorted counts") {
  for (long long tp : {0LL, 3LL, 10LL}) {
    for (long long fp : {0LL, 2LL}) {
      for (long long fn : {0LL, 5LL}) {
        PRF prf = PRF::from_counts(tp, fp, fn);
        if (tp + fp > 0) CHECK(prf.precision == doctest::Approx(double(tp) / double(tp + fp)));
        if (prf.precision + prf.recall > 0) {
          CHECK(prf.f1 == doctest::Approx(2 * prf.precision * prf.recall /
                                          (prf.precision + prf.recall)));
        } else {
          CHECK(prf.f1 == 0.0);
        }
      }
    }
  }
}
