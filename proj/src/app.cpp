#include "tweetorigin/app.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tweetorigin/text.hpp"

namespace tweetorigin {

namespace {

std::vector<std::string> split_csv_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "' is not an integer: " + value);
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "' is not a number: " + value);
  }
}

}  // namespace

AppConfig parse_config(std::string_view text, const std::string& origin) {
  AppConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(origin + " line " + std::to_string(lineno) +
                               ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));

    if (key == "gazetteer") config.gazetteer_path = value;
    else if (key == "snapshot") config.snapshot_path = value;
    else if (key == "country_dict") config.country_dict_path = value;
    else if (key == "extractor") config.extractor = value;
    else if (key == "extractor_url") config.extractor_url = value;
    else if (key == "extractor_timeout_ms") config.extractor_timeout_ms = parse_int(key, value);
    else if (key == "extractor_max_inflight") {
      config.extractor_max_inflight = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "ngram_window") {
      config.ngram_window = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "classifier") config.classifier = value;
    else if (key == "classifier_url") config.classifier_url = value;
    else if (key == "classifier_timeout_ms") config.classifier_timeout_ms = parse_int(key, value);
    else if (key == "classifier_max_inflight") {
      config.classifier_max_inflight = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "classifier_batch") {
      config.classifier_batch = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "classifier_cutoff") config.classifier_cutoff = parse_double(key, value);
    else if (key == "oracle_labels") config.oracle_labels_path = value;
    else if (key == "generic_filter") config.generic_filter = split_csv_list(value);
    else if (key == "band_edges") {
      config.band_edges.clear();
      for (const auto& item : split_csv_list(value)) {
        try {
          std::size_t used = 0;
          config.band_edges.push_back(std::stoull(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw std::runtime_error("config key 'band_edges' has a bad edge: " + item);
        }
      }
    } else if (key == "bind") config.bind = value;
    else if (key == "port") config.port = parse_int(key, value);
    else {
      throw std::runtime_error(origin + " line " + std::to_string(lineno) +
                               ": unknown config key '" + key + "'");
    }
  }
  return config;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void apply_env_overrides(AppConfig& config) {
  const auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  if (const auto v = env("TWEETORIGIN_GAZETTEER")) config.gazetteer_path = *v;
  if (const auto v = env("TWEETORIGIN_SNAPSHOT")) config.snapshot_path = *v;
  if (const auto v = env("TWEETORIGIN_COUNTRY_DICT")) config.country_dict_path = *v;
  if (const auto v = env("TWEETORIGIN_ORACLE")) config.oracle_labels_path = *v;
  if (const auto v = env("TWEETORIGIN_BIND")) config.bind = *v;
  if (const auto v = env("TWEETORIGIN_PORT")) config.port = parse_int("TWEETORIGIN_PORT", *v);
}

void validate_config(const AppConfig& config) {
  if (config.extractor != "baseline" && config.extractor != "remote") {
    throw std::invalid_argument("extractor must be baseline or remote, got: " + config.extractor);
  }
  if (config.extractor == "remote" && config.extractor_url.empty()) {
    throw std::invalid_argument("extractor = remote requires extractor_url");
  }
  if (config.classifier != "heuristic" && config.classifier != "remote" &&
      config.classifier != "oracle") {
    throw std::invalid_argument("classifier must be heuristic, remote or oracle, got: " +
                                config.classifier);
  }
  if (config.classifier == "remote" && config.classifier_url.empty()) {
    throw std::invalid_argument("classifier = remote requires classifier_url");
  }
  if (config.classifier == "oracle" && config.oracle_labels_path.empty()) {
    throw std::invalid_argument("classifier = oracle requires oracle_labels");
  }
  if (config.band_edges.size() < 2) {
    throw std::invalid_argument("band_edges needs at least two edges");
  }
  for (std::size_t i = 1; i < config.band_edges.size(); ++i) {
    if (config.band_edges[i] <= config.band_edges[i - 1]) {
      throw std::invalid_argument("band_edges must be strictly increasing");
    }
  }
  if (config.port < 0 || config.port > 65535) {
    throw std::invalid_argument("port out of range");
  }
}

Runtime Runtime::open(const AppConfig& config, bool need_index) {
  validate_config(config);
  Runtime rt;
  rt.config = config;

  if (!config.snapshot_path.empty() && std::ifstream(config.snapshot_path).good()) {
    rt.index = std::make_shared<const GeoIndex>(load_index(config.snapshot_path));
  } else if (!config.gazetteer_path.empty()) {
    LoadReport report;
    rt.index =
        std::make_shared<const GeoIndex>(build_index(load_gazetteer(config.gazetteer_path, &report)));
  } else if (need_index) {
    throw std::invalid_argument("no gazetteer or snapshot configured");
  } else {
    rt.index = std::make_shared<const GeoIndex>();
  }

  rt.countries = config.country_dict_path.empty() ? CountryDict::builtin()
                                                  : CountryDict::load_csv(config.country_dict_path);

  if (config.extractor == "remote") {
    rt.extractor = std::make_unique<RemoteExtractor>(RemoteExtractor::Options{
        config.extractor_url, config.extractor_timeout_ms, config.extractor_max_inflight});
  } else {
    rt.extractor = std::make_unique<BaselineExtractor>(*rt.index, config.ngram_window);
  }

  if (config.classifier == "remote") {
    rt.classifier = std::make_unique<RemoteClassifier>(
        RemoteClassifier::Options{config.classifier_url, config.classifier_timeout_ms,
                                  config.classifier_batch, config.classifier_max_inflight});
  } else if (config.classifier == "oracle") {
    rt.classifier =
        std::make_unique<OracleClassifier>(OracleClassifier::from_file(config.oracle_labels_path));
  } else {
    rt.classifier = std::make_unique<HeuristicClassifier>(
        HeuristicClassifier::Options{config.classifier_cutoff});
  }
  return rt;
}

PipelineDeps Runtime::deps() const {
  PipelineDeps d = PipelineDeps::standard(*index, *extractor, *classifier, countries);
  d.filter = MentionFilter{config.generic_filter};
  return d;
}

}  // namespace tweetorigin
