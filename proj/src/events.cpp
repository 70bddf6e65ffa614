#include "temport/events.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include "temport/error.hpp"
#include "temport/features.hpp"

namespace temport {

double ContingencyTable::expected_ed() const {
  double n = double(total());
  return double(n_ed + n_eD) * double(n_ed + n_Ed) / n;
}

double g_squared(const ContingencyTable& t) {
  const double n = double(t.total());
  const double row_e = double(t.n_ed + t.n_eD);
  const double row_E = double(t.n_Ed + t.n_ED);
  const double col_d = double(t.n_ed + t.n_Ed);
  const double col_D = double(t.n_eD + t.n_ED);

  auto term = [n](double observed, double row, double col) {
    if (observed == 0.0) return 0.0;
    return observed * std::log(observed * n / (row * col));
  };

  double sum = term(double(t.n_ed), row_e, col_d) + term(double(t.n_eD), row_e, col_D) +
               term(double(t.n_Ed), row_E, col_d) + term(double(t.n_ED), row_E, col_D);
  return 2.0 * sum;
}

std::vector<std::string> entity_runs(const Tweet& tweet) {
  std::set<std::string> runs;
  std::size_t i = 0;
  while (i < tweet.tokens.size()) {
    const std::string& ne = tweet.tokens[i].ne;
    if (ne.empty()) {
      ++i;
      continue;
    }
    std::string run = lowercase(tweet.tokens[i].text);
    std::size_t j = i + 1;
    while (j < tweet.tokens.size() && tweet.tokens[j].ne == ne) {
      run += ' ';
      run += lowercase(tweet.tokens[j].text);
      ++j;
    }
    runs.insert(std::move(run));
    i = j;
  }
  return {runs.begin(), runs.end()};
}

std::map<std::pair<std::string, Date>, ContingencyTable> count_cooccurrences(
    const std::vector<Tweet>& corpus) {
  // Margins first, then fill each co-occurring pair's table from them.
  std::map<std::pair<std::string, Date>, std::int64_t> pair_count;
  std::unordered_map<std::string, std::int64_t> entity_obs;  // obs with entity present
  std::map<Date, std::int64_t> date_obs;                     // obs with this date
  std::int64_t total_obs = 0;

  for (const Tweet& tweet : corpus) {
    std::vector<std::string> entities = entity_runs(tweet);
    std::set<Date> dates(tweet.external_dates.begin(), tweet.external_dates.end());
    if (dates.empty()) continue;

    total_obs += std::int64_t(dates.size());
    for (const std::string& e : entities) entity_obs[e] += std::int64_t(dates.size());
    for (Date d : dates) {
      date_obs[d] += 1;
      for (const std::string& e : entities) pair_count[{e, d}] += 1;
    }
  }

  std::map<std::pair<std::string, Date>, ContingencyTable> out;
  for (const auto& [key, n_ed] : pair_count) {
    ContingencyTable t;
    t.n_ed = n_ed;
    t.n_eD = entity_obs[key.first] - n_ed;
    t.n_Ed = date_obs[key.second] - n_ed;
    t.n_ED = total_obs - t.n_ed - t.n_eD - t.n_Ed;
    out.emplace(key, t);
  }
  return out;
}

std::vector<EventRecord> extract_events(const std::vector<Tweet>& corpus,
                                        std::size_t top_k, std::int64_t min_count) {
  std::vector<EventRecord> scored;
  for (const auto& [key, table] : count_cooccurrences(corpus)) {
    if (table.n_ed < min_count) continue;
    if (double(table.n_ed) <= table.expected_ed()) continue;  // positive association only
    scored.push_back({key.first, key.second, g_squared(table)});
  }
  std::sort(scored.begin(), scored.end(), [](const EventRecord& a, const EventRecord& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.entity != b.entity) return a.entity < b.entity;
    return a.date < b.date;
  });
  if (scored.size() > top_k) scored.resize(top_k);
  return scored;
}

std::vector<EventRecord> load_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open events file " + path.string());
  std::vector<EventRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected entity<TAB>date<TAB>score");
    }
    EventRecord rec;
    rec.entity = line.substr(0, t1);
    rec.date = Date::parse(line.substr(t1 + 1, t2 - t1 - 1));
    std::string_view score_sv(line.data() + t2 + 1, line.size() - t2 - 1);
    auto res = std::from_chars(score_sv.data(), score_sv.data() + score_sv.size(), rec.score);
    if (res.ec != std::errc() || res.ptr != score_sv.data() + score_sv.size()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad score field");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void save_events(const std::vector<EventRecord>& events, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write events file " + path.string());
  char buf[32];
  for (const EventRecord& e : events) {
    auto res = std::to_chars(buf, buf + sizeof(buf), e.score);
    out << e.entity << '\t' << e.date.str() << '\t'
        << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

}  // namespace temport
