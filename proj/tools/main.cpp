#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tweetorigin/app.hpp"
#include "tweetorigin/service.hpp"
#include "tweetorigin/text.hpp"

namespace to = tweetorigin;

namespace {

// exit 1: the invocation itself is wrong; exit 2: the work failed
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::string config_path;
  std::string gazetteer;
  std::string snapshot;
  std::string country_dict;
  std::string extractor;
  std::string classifier;
  std::string oracle_labels;
  std::string extractor_url;
  std::string classifier_url;
};

to::AppConfig resolve_config(const GlobalFlags& flags) {
  to::AppConfig config;
  if (!flags.config_path.empty()) {
    config = to::load_config(flags.config_path);
  } else if (const char* env = std::getenv("TWEETORIGIN_CONFIG"); env && *env) {
    config = to::load_config(env);
  }
  to::apply_env_overrides(config);
  if (!flags.gazetteer.empty()) config.gazetteer_path = flags.gazetteer;
  if (!flags.snapshot.empty()) config.snapshot_path = flags.snapshot;
  if (!flags.country_dict.empty()) config.country_dict_path = flags.country_dict;
  if (!flags.extractor.empty()) config.extractor = flags.extractor;
  if (!flags.classifier.empty()) config.classifier = flags.classifier;
  if (!flags.oracle_labels.empty()) config.oracle_labels_path = flags.oracle_labels;
  if (!flags.extractor_url.empty()) config.extractor_url = flags.extractor_url;
  if (!flags.classifier_url.empty()) config.classifier_url = flags.classifier_url;
  return config;
}

std::vector<std::string> read_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = to::trim(line);
    if (!t.empty()) labels.push_back(t);
  }
  return labels;
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write: " + path);
  return file;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tweet origin geotagging toolkit"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "config file (key = value lines)");
  app.add_option("--gazetteer", flags.gazetteer, "gazetteer jsonl path");
  app.add_option("--snapshot", flags.snapshot, "index snapshot path");
  app.add_option("--country-dict", flags.country_dict, "country code csv path");
  app.add_option("--extractor", flags.extractor, "baseline | remote");
  app.add_option("--extractor-url", flags.extractor_url, "remote extractor base url");
  app.add_option("--classifier", flags.classifier, "heuristic | remote | oracle");
  app.add_option("--classifier-url", flags.classifier_url, "remote classifier base url");
  app.add_option("--oracle", flags.oracle_labels, "oracle labels jsonl path");

  // build-index
  auto* build = app.add_subcommand("build-index", "build and save an index snapshot");
  std::string build_out;
  build->add_option("--out", build_out, "snapshot output path")->required();

  // search
  auto* search = app.add_subcommand("search", "forward geocode a query");
  std::string search_query;
  std::size_t search_limit = 10;
  search->add_option("query", search_query, "free-text place query")->required();
  search->add_option("--limit", search_limit, "max features");

  // reverse
  auto* reverse = app.add_subcommand("reverse", "reverse geocode a coordinate pair");
  double rev_lon = 0.0;
  double rev_lat = 0.0;
  reverse->add_option("lon", rev_lon, "longitude")->required();
  reverse->add_option("lat", rev_lat, "latitude")->required();

  // geotag
  auto* geotag = app.add_subcommand("geotag", "geotag a jsonl corpus");
  std::string geotag_corpus_path;
  std::string geotag_out;
  std::string geotag_summary_json;
  geotag->add_option("corpus", geotag_corpus_path, "tweets jsonl path")->required();
  geotag->add_option("--out", geotag_out, "results jsonl path (default stdout)");
  geotag->add_option("--summary-json", geotag_summary_json, "write summary as json");

  // compare-lem
  auto* compare = app.add_subcommand("compare-lem", "compare extractor candidates on a corpus");
  std::string compare_corpus_path;
  std::vector<std::string> compare_extractors;
  std::string compare_json;
  compare->add_option("corpus", compare_corpus_path, "tweets jsonl path")->required();
  compare->add_option("--candidates", compare_extractors,
                      "extractors to compare (baseline, remote); default: configured one");
  compare->add_option("--json", compare_json, "write report rows as jsonl");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "geotag a corpus and score against coordinates");
  std::string eval_corpus_path;
  std::string eval_csv;
  std::string eval_json;
  evaluate->add_option("corpus", eval_corpus_path, "tweets jsonl path (with coordinates)")
      ->required();
  evaluate->add_option("--csv", eval_csv, "write the level table as csv");
  evaluate->add_option("--json", eval_json, "write the level table as jsonl");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "classify a corpus and report a distribution");
  std::string analyze_corpus_path;
  std::string analyze_dimension = "overall";
  std::string analyze_csv;
  analyze->add_option("corpus", analyze_corpus_path, "tweets jsonl path")->required();
  analyze->add_option("--dimension", analyze_dimension,
                      "overall | possibly_sensitive | media | user_verified | followers_band | "
                      "friends_band | created_year | country | source");
  analyze->add_option("--csv", analyze_csv, "write the distribution as csv");
  std::string analyze_json;
  analyze->add_option("--json", analyze_json, "write the distribution as jsonl");

  // kappa
  auto* kappa = app.add_subcommand("kappa", "inter-annotator agreement of two label files");
  std::string kappa_a;
  std::string kappa_b;
  kappa->add_option("a", kappa_a, "labels, one per line")->required();
  kappa->add_option("b", kappa_b, "labels, one per line")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "run the geocoding + geotagging service");
  std::string serve_bind;
  int serve_port = -1;
  serve->add_option("--bind", serve_bind, "bind address (default from config)");
  serve->add_option("--port", serve_port, "port (default from config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (build->parsed()) {
      const auto config = resolve_config(flags);
      if (config.gazetteer_path.empty()) {
        throw UsageError("build-index needs --gazetteer");
      }
      to::LoadReport report;
      auto entries = to::load_gazetteer(config.gazetteer_path, &report);
      const auto index = to::build_index(std::move(entries));
      to::save_index(index, build_out);
      std::cerr << "loaded " << report.loaded << " entries, skipped " << report.skipped << "\n";
      for (const auto& d : report.diagnostics) std::cerr << "  " << d << "\n";
      std::cout << build_out << "\n";
      return 0;
    }

    if (search->parsed()) {
      const auto rt = to::Runtime::open(resolve_config(flags));
      auto features = nlohmann::ordered_json::array();
      for (const auto& f : rt.index->forward(search_query, search_limit)) {
        features.push_back(to::feature_to_json(f));
      }
      nlohmann::ordered_json j;
      j["features"] = std::move(features);
      std::cout << j.dump() << "\n";
      return 0;
    }

    if (reverse->parsed()) {
      const auto rt = to::Runtime::open(resolve_config(flags));
      std::cout << to::feature_to_json(rt.index->reverse(rev_lon, rev_lat)).dump() << "\n";
      return 0;
    }

    if (geotag->parsed()) {
      const auto rt = to::Runtime::open(resolve_config(flags));
      const auto deps = rt.deps();
      std::ifstream corpus(geotag_corpus_path);
      if (!corpus) throw std::runtime_error("cannot open corpus: " + geotag_corpus_path);
      std::ofstream out_file;
      std::ostream& out = open_sink(geotag_out, out_file);
      std::vector<to::TweetFailure> failures;
      const auto summary = to::geotag_corpus(
          deps, corpus,
          [&out](const to::GeotagResult& r) { out << to::geotag_result_to_json(r).dump() << "\n"; },
          &failures);
      std::cerr << to::render_funnel(summary);
      for (const auto& f : failures) std::cerr << "failed " << f.tweet_id << ": " << f.message << "\n";
      if (!geotag_summary_json.empty()) {
        nlohmann::ordered_json j;
        j["total"] = summary.total;
        j["with_mentions"] = summary.with_mentions;
        j["with_valid_mentions"] = summary.with_valid_mentions;
        j["true_origin"] = summary.true_origin;
        j["low_evidence"] = summary.low_evidence;
        j["geotagged"] = summary.geotagged;
        j["null_vectors"] = summary.null_vectors;
        j["no_mentions"] = summary.no_mentions;
        j["no_valid_mentions"] = summary.no_valid_mentions;
        j["failed"] = summary.failed;
        write_file(geotag_summary_json, j.dump() + "\n");
      }
      return 0;
    }

    if (compare->parsed()) {
      const auto rt = to::Runtime::open(resolve_config(flags));
      const auto corpus = to::read_corpus(compare_corpus_path);
      std::vector<std::unique_ptr<to::LocationExtractor>> owned;
      std::vector<to::LocationExtractor*> extractors;
      if (compare_extractors.empty()) {
        extractors.push_back(rt.extractor.get());
      } else {
        for (const auto& name : compare_extractors) {
          if (name == "baseline") {
            owned.push_back(
                std::make_unique<to::BaselineExtractor>(*rt.index, rt.config.ngram_window));
          } else if (name == "remote") {
            if (rt.config.extractor_url.empty()) {
              throw UsageError("remote candidate needs --extractor-url");
            }
            owned.push_back(std::make_unique<to::RemoteExtractor>(to::RemoteExtractor::Options{
                rt.config.extractor_url, rt.config.extractor_timeout_ms,
                rt.config.extractor_max_inflight}));
          } else {
            throw UsageError("unknown extractor candidate: " + name);
          }
          extractors.push_back(owned.back().get());
        }
      }
      const auto rows = to::compare_lem_candidates(*rt.index, extractors, corpus);
      std::cout << to::render_lem_report(rows);
      if (!compare_json.empty()) {
        std::ostringstream out;
        for (const auto& row : rows) {
          nlohmann::ordered_json j;
          j["extractor"] = row.extractor;
          j["idloc"] = row.stats.idloc;
          j["tloc"] = row.stats.tloc;
          j["vloc"] = row.stats.vloc;
          j["tvloc"] = row.stats.tvloc;
          j["invalid_locations"] = row.stats.invalid_locations;
          j["invalid_tweets"] = row.stats.invalid_tweets;
          j["failed_tweets"] = row.failed_tweets;
          out << j.dump() << "\n";
        }
        write_file(compare_json, out.str());
      }
      return 0;
    }

    if (evaluate->parsed()) {
      const auto rt = to::Runtime::open(resolve_config(flags));
      const auto deps = rt.deps();
      const auto corpus = to::read_corpus(eval_corpus_path);
      std::vector<to::GeotagResult> results;
      std::vector<to::TweetFailure> failures;
      const auto summary = to::geotag_corpus(
          deps, corpus, [&results](const to::GeotagResult& r) { results.push_back(r); }, &failures);
      std::cerr << to::render_funnel(summary);

      std::unordered_map<std::string, to::LocationVector> truths;
      std::unordered_map<std::string, const to::Tweet*> by_id;
      for (const auto& t : corpus) by_id[t.id] = &t;
      std::vector<to::GeotagResult> evaluable;
      std::size_t without_truth = 0;
      for (const auto& r : results) {
        if (r.disposition != to::Disposition::geotagged) continue;
        const auto* tweet = by_id.at(r.tweet_id);
        if (!tweet->coordinates) {
          ++without_truth;
          continue;
        }
        truths[r.tweet_id] = to::ground_truth_vector(*rt.index, *tweet, rt.countries);
        evaluable.push_back(r);
      }
      if (without_truth > 0) {
        std::cerr << without_truth << " geotagged tweet(s) lack coordinates, skipped\n";
      }
      const auto acc = to::evaluate(evaluable, truths);
      std::cout << to::render_level_accuracy(acc);
      if (!eval_csv.empty()) write_file(eval_csv, to::level_accuracy_csv(acc));
      if (!eval_json.empty()) write_file(eval_json, to::level_accuracy_jsonl(acc));
      return 0;
    }

    if (analyze->parsed()) {
      const auto dim = to::parse_dimension(analyze_dimension);
      if (!dim) throw UsageError("unknown dimension: " + analyze_dimension);
      const auto rt = to::Runtime::open(resolve_config(flags));
      const auto corpus = to::read_corpus(analyze_corpus_path);
      std::vector<to::PreprocessedTweet> pre;
      pre.reserve(corpus.size());
      for (const auto& t : corpus) pre.push_back(to::preprocess_tweet(t.text));
      const auto outcome = to::classify_batch(*rt.classifier, pre);
      std::vector<std::pair<to::Tweet, to::EvidenceLabel>> classified;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (outcome.labels[i]) classified.emplace_back(corpus[i], *outcome.labels[i]);
      }
      if (!outcome.failures.empty()) {
        std::cerr << outcome.failures.size() << " tweet(s) failed to classify\n";
      }
      to::DistributionOptions opts;
      opts.bands = to::Bands{rt.config.band_edges};
      opts.index = rt.index.get();
      opts.countries = &rt.countries;
      const auto report = to::distributions(classified, *dim, opts);
      std::cout << to::render_distribution(report);
      if (!analyze_csv.empty()) write_file(analyze_csv, to::distribution_csv(report));
      if (!analyze_json.empty()) write_file(analyze_json, to::distribution_jsonl(report));
      return 0;
    }

    if (kappa->parsed()) {
      const auto a = read_label_file(kappa_a);
      const auto b = read_label_file(kappa_b);
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.10g", to::cohen_kappa(a, b));
      std::string text(buf);
      if (text.find('.') == std::string::npos && text.find('e') == std::string::npos &&
          text.find("inf") == std::string::npos && text.find("nan") == std::string::npos) {
        text += ".0";
      }
      std::cout << text << "\n";
      return 0;
    }

    if (serve->parsed()) {
      auto config = resolve_config(flags);
      if (!serve_bind.empty()) config.bind = serve_bind;
      if (serve_port >= 0) config.port = serve_port;
      const auto rt = to::Runtime::open(config);
      to::Service service(*rt.index, rt.deps());
      std::cerr << "listening on " << config.bind << ":" << config.port << "\n";
      if (!service.listen(config.bind, config.port)) {
        throw std::runtime_error("cannot bind " + config.bind + ":" + std::to_string(config.port));
      }
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
