#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "tweetorigin/app.hpp"
#include "tweetorigin/classifier.hpp"
#include "tweetorigin/evalkit.hpp"
#include "tweetorigin/gazetteer.hpp"
#include "tweetorigin/lem.hpp"
#include "tweetorigin/locvec.hpp"
#include "tweetorigin/pipeline.hpp"

namespace py = pybind11;
namespace to = tweetorigin;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
  const py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

// Index + plugins with stable addresses for the pipeline deps.
struct PyPipeline {
  std::shared_ptr<const to::GeoIndex> index;
  to::CountryDict countries;
  std::unique_ptr<to::LocationExtractor> extractor;
  std::unique_ptr<to::EvidenceClassifier> classifier;

  to::GeotagResult geotag(const std::string& id, const std::string& text) const {
    to::Tweet tweet;
    tweet.id = id;
    tweet.text = text;
    const auto deps = to::PipelineDeps::standard(*index, *extractor, *classifier, countries);
    return to::geotag_tweet(deps, tweet);
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "tweet origin geotagging: gazetteer geocoding, mention extraction, "
            "evidence classification and location-vector voting";

  py::class_<to::GeoIndex, std::shared_ptr<to::GeoIndex>>(m, "Index")
      .def_static(
          "from_gazetteer",
          [](const std::string& path) {
            return std::make_shared<to::GeoIndex>(to::build_index(to::load_gazetteer(path)));
          },
          py::arg("path"), "Build an index from a gazetteer jsonl file.")
      .def_static(
          "load",
          [](const std::string& path) {
            return std::make_shared<to::GeoIndex>(to::load_index(path));
          },
          py::arg("path"), "Load a binary index snapshot.")
      .def("save", [](const to::GeoIndex& self, const std::string& path) { self.save(path); })
      .def("__len__", &to::GeoIndex::size)
      .def(
          "search",
          [](const to::GeoIndex& self, const std::string& query, std::size_t limit) {
            py::list out;
            for (const auto& f : self.forward(query, limit)) {
              out.append(json_to_py(to::feature_to_json(f)));
            }
            return out;
          },
          py::arg("query"), py::arg("limit") = 10)
      .def(
          "reverse",
          [](const to::GeoIndex& self, double lon, double lat) {
            return json_to_py(to::feature_to_json(self.reverse(lon, lat)));
          },
          py::arg("lon"), py::arg("lat"));

  m.def(
      "preprocess",
      [](const std::string& text) { return to::preprocess_tweet(text).normalized; },
      py::arg("text"), "Normalize tweet text (entities, URLs, mentions, emoji, whitespace).");

  m.def("vote", &to::vote, py::arg("values"),
        "Most frequent non-None value; ties go to the earliest first occurrence.");

  m.def(
      "conclusive",
      [](const std::vector<std::vector<std::optional<std::string>>>& rows) {
        std::vector<to::LocationVector> vectors;
        for (const auto& row : rows) {
          if (row.size() != to::LocationVector::kComponents) {
            throw std::invalid_argument("each vector needs 5 components");
          }
          to::LocationVector v;
          for (std::size_t i = 0; i < row.size(); ++i) v.component(i) = row[i];
          vectors.push_back(std::move(v));
        }
        const to::LocationVector c = to::conclusive_vector(vectors);
        std::vector<std::optional<std::string>> out;
        for (std::size_t i = 0; i < to::LocationVector::kComponents; ++i) {
          out.push_back(c.component(i));
        }
        return out;
      },
      py::arg("vectors"),
      "Slot-wise majority vote over [district, county, city, state, country] rows.");

  m.def(
      "normalize_country",
      [](const std::string& value) {
        const auto n = to::CountryDict::builtin().normalize(value);
        return py::make_tuple(n.value, n.known);
      },
      py::arg("value"), "Resolve an ISO-3166 alpha-2 code or name; returns (value, known).");

  m.def(
      "cohen_kappa",
      [](const py::sequence& a, const py::sequence& b) {
        const auto to_labels = [](const py::sequence& seq) {
          std::vector<std::string> out;
          out.reserve(py::len(seq));
          for (const auto& item : seq) out.push_back(py::str(item).cast<std::string>());
          return out;
        };
        return to::cohen_kappa(to_labels(a), to_labels(b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "filter_surfaces",
      [](const std::vector<std::string>& surfaces) {
        const auto filter = to::MentionFilter::defaults();
        std::vector<std::string> out;
        for (const auto& s : surfaces) {
          if (filter.keep(s)) out.push_back(s);
        }
        return out;
      },
      py::arg("surfaces"), "Drop short, numeric and generic-region mention surfaces.");

  py::class_<PyPipeline>(m, "Pipeline")
      .def(py::init([](std::shared_ptr<to::GeoIndex> index, const std::string& classifier,
                       const std::string& oracle_path, std::size_t ngram_window) {
             auto p = std::make_unique<PyPipeline>();
             p->index = index;
             p->countries = to::CountryDict::builtin();
             p->extractor = std::make_unique<to::BaselineExtractor>(*p->index, ngram_window);
             if (classifier == "heuristic") {
               p->classifier = std::make_unique<to::HeuristicClassifier>();
             } else if (classifier == "oracle") {
               p->classifier = std::make_unique<to::OracleClassifier>(
                   to::OracleClassifier::from_file(oracle_path));
             } else {
               throw std::invalid_argument("classifier must be 'heuristic' or 'oracle'");
             }
             return p;
           }),
           py::arg("index"), py::arg("classifier") = "heuristic", py::arg("oracle_path") = "",
           py::arg("ngram_window") = 4)
      .def(
          "geotag",
          [](const PyPipeline& self, const std::string& id, const std::string& text) {
            return json_to_py(to::geotag_result_to_json(self.geotag(id, text)));
          },
          py::arg("id"), py::arg("text"));
}
