#include "tweetorigin/evalkit.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tweetorigin/text.hpp"

namespace tweetorigin {

LocationVector ground_truth_vector(const GeoIndex& index, const Tweet& tweet,
                                   const CountryDict& dict) {
  if (!tweet.coordinates) throw std::runtime_error("not geotagged: tweet " + tweet.id);
  const auto [lon, lat] = *tweet.coordinates;
  const GeoFeature feature = index.reverse(lon, lat);
  return normalize_vector(vector_from_feature(feature), dict);
}

namespace {

// trim + case-fold; inputs are already country-normalized
bool slot_matches(const std::string& a, const std::string& b) {
  return lower_ascii(trim(a)) == lower_ascii(trim(b));
}

void score_level(LevelCount& level, const std::optional<std::string>& truth,
                 const std::optional<std::string>& conclusive) {
  if (!truth) return;  // not evaluable at this level
  if (conclusive && slot_matches(*conclusive, *truth)) {
    ++level.correct;
  } else {
    ++level.incorrect;
  }
}

}  // namespace

LevelAccuracy evaluate(const std::vector<GeotagResult>& results,
                       const std::unordered_map<std::string, LocationVector>& truths) {
  LevelAccuracy acc;
  for (const auto& r : results) {
    if (r.disposition != Disposition::geotagged || !r.conclusive) {
      throw std::invalid_argument("evaluate: result " + r.tweet_id + " is not geotagged");
    }
    const auto it = truths.find(r.tweet_id);
    if (it == truths.end()) {
      throw std::invalid_argument("evaluate: no ground truth for tweet " + r.tweet_id);
    }
    const LocationVector& truth = it->second;
    const LocationVector& got = *r.conclusive;
    score_level(acc.district, truth.district, got.district);
    score_level(acc.county, truth.county, got.county);
    score_level(acc.city, truth.city, got.city);
    score_level(acc.state, truth.state, got.state);
    score_level(acc.country, truth.country, got.country);
  }
  return acc;
}

namespace {

std::string fmt_accuracy(const LevelCount& c) {
  const auto acc = c.accuracy();
  if (!acc) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *acc * 100.0);
  return buf;
}

}  // namespace

std::string render_level_accuracy(const LevelAccuracy& acc) {
  const std::pair<const char*, const LevelCount*> levels[] = {
      {"country", &acc.country}, {"state", &acc.state},   {"city", &acc.city},
      {"county", &acc.county},   {"district", &acc.district}};
  std::ostringstream out;
  out << "level      correct  incorrect  accuracy\n";
  for (const auto& [name, count] : levels) {
    char line[96];
    std::snprintf(line, sizeof line, "%-10s %-8zu %-10zu %s\n", name, count->correct,
                  count->incorrect, fmt_accuracy(*count).c_str());
    out << line;
  }
  return out.str();
}

std::string level_accuracy_csv(const LevelAccuracy& acc) {
  const std::pair<const char*, const LevelCount*> levels[] = {
      {"country", &acc.country}, {"state", &acc.state},   {"city", &acc.city},
      {"county", &acc.county},   {"district", &acc.district}};
  std::ostringstream out;
  out << "level,correct,incorrect,accuracy\n";
  for (const auto& [name, count] : levels) {
    out << name << ',' << count->correct << ',' << count->incorrect << ',';
    if (const auto a = count->accuracy()) out << *a;
    out << '\n';
  }
  return out.str();
}

std::string level_accuracy_jsonl(const LevelAccuracy& acc) {
  const std::pair<const char*, const LevelCount*> levels[] = {
      {"country", &acc.country}, {"state", &acc.state},   {"city", &acc.city},
      {"county", &acc.county},   {"district", &acc.district}};
  std::ostringstream out;
  for (const auto& [name, count] : levels) {
    nlohmann::ordered_json j;
    j["level"] = name;
    j["correct"] = count->correct;
    j["incorrect"] = count->incorrect;
    if (const auto a = count->accuracy()) {
      j["accuracy"] = *a;
    } else {
      j["accuracy"] = nullptr;
    }
    out << j.dump() << '\n';
  }
  return out.str();
}

double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || a.size() != b.size()) {
    throw std::invalid_argument("cohen_kappa: label lists must be nonempty and equal length");
  }
  const double n = static_cast<double>(a.size());
  std::size_t agree = 0;
  std::unordered_map<std::string, std::size_t> count_a;
  std::unordered_map<std::string, std::size_t> count_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) ++agree;
    ++count_a[a[i]];
    ++count_b[b[i]];
  }
  const double p_o = static_cast<double>(agree) / n;
  double p_e = 0.0;
  for (const auto& [label, ca] : count_a) {
    const auto it = count_b.find(label);
    if (it == count_b.end()) continue;
    p_e += (static_cast<double>(ca) / n) * (static_cast<double>(it->second) / n);
  }
  if (p_e == 1.0) return 1.0;  // both raters constant and identical
  return (p_o - p_e) / (1.0 - p_e);
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::overall: return "overall";
    case Dimension::possibly_sensitive: return "possibly_sensitive";
    case Dimension::media: return "media";
    case Dimension::user_verified: return "user_verified";
    case Dimension::followers_band: return "followers_band";
    case Dimension::friends_band: return "friends_band";
    case Dimension::created_year: return "created_year";
    case Dimension::country: return "country";
    case Dimension::source: return "source";
  }
  return "unknown";
}

std::optional<Dimension> parse_dimension(std::string_view s) {
  static const Dimension all[] = {
      Dimension::overall,       Dimension::possibly_sensitive, Dimension::media,
      Dimension::user_verified, Dimension::followers_band,     Dimension::friends_band,
      Dimension::created_year,  Dimension::country,            Dimension::source};
  for (Dimension d : all) {
    if (s == to_string(d)) return d;
  }
  return std::nullopt;
}

Bands Bands::defaults() {
  return Bands{{0,      50,     100,    200,     300,     400,     500,      1000,    2000,
                5000,   10000,  20000,  50000,   100000,  200000,  500000,   1000000, 5000000}};
}

std::size_t Bands::band_for(std::uint64_t value) const {
  // last band is open-ended
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (value < edges[i + 1]) return i;
  }
  return edges.size() - 1;
}

namespace {

std::string fmt_edge(std::uint64_t v) {
  if (v >= 1000000 && v % 1000000 == 0) return std::to_string(v / 1000000) + "M";
  if (v >= 1000 && v % 1000 == 0) return std::to_string(v / 1000) + "k";
  return std::to_string(v);
}

}  // namespace

std::string Bands::label_for(std::size_t band) const {
  if (band + 1 >= edges.size()) return fmt_edge(edges.back()) + "+";
  return fmt_edge(edges[band]) + "-" + fmt_edge(edges[band + 1]);
}

namespace {

constexpr const char* kUnknownBucket = "unknown";

std::string bool_bucket(const std::optional<bool>& v) {
  if (!v) return kUnknownBucket;
  return *v ? "true" : "false";
}

std::string band_bucket(const std::optional<std::uint64_t>& v, const Bands& bands) {
  if (!v) return kUnknownBucket;
  return bands.label_for(bands.band_for(*v));
}

}  // namespace

DistributionReport distributions(const std::vector<std::pair<Tweet, EvidenceLabel>>& classified,
                                 Dimension dimension, const DistributionOptions& opts) {
  const CountryDict& dict = opts.countries ? *opts.countries : CountryDict::builtin();
  std::map<std::string, BucketStats> stats;  // ordered for deterministic reports
  for (const auto& [tweet, label] : classified) {
    std::string bucket;
    switch (dimension) {
      case Dimension::overall:
        bucket = "all";
        break;
      case Dimension::possibly_sensitive:
        bucket = bool_bucket(tweet.possibly_sensitive);
        break;
      case Dimension::media:
        bucket = bool_bucket(tweet.has_media);
        break;
      case Dimension::user_verified:
        bucket = bool_bucket(tweet.user_verified);
        break;
      case Dimension::followers_band:
        bucket = band_bucket(tweet.user_followers, opts.bands);
        break;
      case Dimension::friends_band:
        bucket = band_bucket(tweet.user_friends, opts.bands);
        break;
      case Dimension::created_year:
        bucket = tweet.user_created_year ? std::to_string(*tweet.user_created_year)
                                         : kUnknownBucket;
        break;
      case Dimension::country: {
        bucket = kUnknownBucket;
        if (tweet.coordinates && opts.index && !opts.index->empty()) {
          const auto [lon, lat] = *tweet.coordinates;
          const GeoFeature f = opts.index->reverse(lon, lat);
          if (!f.country.empty()) bucket = dict.normalize(f.country).value;
        }
        break;
      }
      case Dimension::source:
        bucket = tweet.source ? *tweet.source : kUnknownBucket;
        break;
    }
    auto& b = stats[bucket];
    if (label.label == Evidence::true_origin) {
      ++b.true_origin;
    } else {
      ++b.low_evidence;
    }
  }

  DistributionReport report;
  report.dimension = dimension;
  report.total = classified.size();
  report.buckets.assign(stats.begin(), stats.end());

  // band dimensions list every band, in band order, even when empty
  if (dimension == Dimension::followers_band || dimension == Dimension::friends_band) {
    std::vector<std::pair<std::string, BucketStats>> ordered;
    for (std::size_t i = 0; i < opts.bands.band_count(); ++i) {
      const std::string label = opts.bands.label_for(i);
      const auto it = stats.find(label);
      ordered.emplace_back(label, it == stats.end() ? BucketStats{} : it->second);
    }
    if (const auto it = stats.find(kUnknownBucket); it != stats.end()) {
      ordered.emplace_back(kUnknownBucket, it->second);
    }
    report.buckets = std::move(ordered);
  } else if (dimension == Dimension::country || dimension == Dimension::source) {
    // busiest buckets first, unknown last
    std::sort(report.buckets.begin(), report.buckets.end(), [](const auto& x, const auto& y) {
      const bool xu = x.first == kUnknownBucket;
      const bool yu = y.first == kUnknownBucket;
      if (xu != yu) return yu;
      if (x.second.total() != y.second.total()) return x.second.total() > y.second.total();
      return x.first < y.first;
    });
  }
  return report;
}

std::string render_distribution(const DistributionReport& report) {
  std::ostringstream out;
  out << "dimension: " << to_string(report.dimension) << "  (n=" << report.total << ")\n";
  out << "bucket               true_origin  low_evidence  proportion_true  share\n";
  for (const auto& [bucket, b] : report.buckets) {
    char line[160];
    const auto pt = b.proportion_true();
    const double share =
        report.total == 0 ? 0.0 : static_cast<double>(b.total()) / static_cast<double>(report.total);
    char ptbuf[24];
    if (pt) {
      std::snprintf(ptbuf, sizeof ptbuf, "%.3f", *pt);
    } else {
      std::snprintf(ptbuf, sizeof ptbuf, "-");
    }
    std::snprintf(line, sizeof line, "%-20s %-12zu %-13zu %-16s %.1f%%\n", bucket.c_str(),
                  b.true_origin, b.low_evidence, ptbuf, share * 100.0);
    out << line;
  }
  return out.str();
}

std::string distribution_jsonl(const DistributionReport& report) {
  std::ostringstream out;
  for (const auto& [bucket, b] : report.buckets) {
    nlohmann::ordered_json j;
    j["dimension"] = std::string(to_string(report.dimension));
    j["bucket"] = bucket;
    j["true_origin"] = b.true_origin;
    j["low_evidence"] = b.low_evidence;
    if (const auto pt = b.proportion_true()) {
      j["proportion_true"] = *pt;
    } else {
      j["proportion_true"] = nullptr;
    }
    j["share"] = report.total == 0
                     ? 0.0
                     : static_cast<double>(b.total()) / static_cast<double>(report.total);
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string distribution_csv(const DistributionReport& report) {
  std::ostringstream out;
  out << "dimension,bucket,true_origin,low_evidence,proportion_true,share\n";
  for (const auto& [bucket, b] : report.buckets) {
    out << to_string(report.dimension) << ',' << bucket << ',' << b.true_origin << ','
        << b.low_evidence << ',';
    if (const auto pt = b.proportion_true()) out << *pt;
    out << ',';
    if (report.total > 0) {
      out << (static_cast<double>(b.total()) / static_cast<double>(report.total));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace tweetorigin
