#include "tweetorigin/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <regex>
#include <semaphore>

#include <httplib.h>
#include <json.hpp>

#include "tweetorigin/text.hpp"

namespace tweetorigin {

namespace {

// ---- HTML entities ----

// Decodes one pass of named and numeric entities; returns true when anything
// changed. Decoding repeats until stable so nothing entity-shaped survives
// (each changing pass strictly shrinks the string, so this terminates).
bool decode_entities_once(const std::string& in, std::string& out) {
  static const std::pair<const char*, const char*> kNamed[] = {
      {"&amp;", "&"}, {"&lt;", "<"},   {"&gt;", ">"},
      {"&quot;", "\""}, {"&apos;", "'"}, {"&nbsp;", "\xC2\xA0"}};
  bool changed = false;
  out.clear();
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] != '&') {
      out.push_back(in[i++]);
      continue;
    }
    bool matched = false;
    for (const auto& [entity, repl] : kNamed) {
      const std::size_t len = std::strlen(entity);
      if (in.compare(i, len, entity) == 0) {
        out += repl;
        i += len;
        matched = changed = true;
        break;
      }
    }
    if (matched) continue;
    // numeric: &#123; or &#x1F600;
    if (i + 2 < in.size() && in[i + 1] == '#') {
      std::size_t j = i + 2;
      const bool hex = j < in.size() && (in[j] == 'x' || in[j] == 'X');
      if (hex) ++j;
      std::uint32_t cp = 0;
      std::size_t digits = 0;
      while (j < in.size() && digits < 8) {
        const char c = in[j];
        int d = -1;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        if (d < 0) break;
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        ++digits;
        ++j;
      }
      if (digits > 0 && j < in.size() && in[j] == ';' && cp > 0 && cp <= 0x10FFFF &&
          !(cp >= 0xD800 && cp <= 0xDFFF)) {
        append_utf8(out, cp);
        i = j + 1;
        changed = true;
        continue;
      }
    }
    out.push_back(in[i++]);
  }
  return changed;
}

std::string decode_entities(std::string s) {
  std::string next;
  while (decode_entities_once(s, next)) s.swap(next);
  return s;
}

// ---- URLs and mentions ----

const std::regex& url_regex() {
  static const std::regex re(R"((https?://|www\.)\S+)", std::regex::icase);
  return re;
}

const std::regex& mention_regex() {
  static const std::regex re(R"(@\w+)");
  return re;
}

// ---- emoji ----

bool is_emoji_codepoint(std::uint32_t cp) {
  // pictographs, emoticons, transport, supplemental symbols, flags, dingbats
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return true;
  if (cp >= 0x1F1E6 && cp <= 0x1F1FF) return true;  // regional indicators
  if (cp >= 0x2600 && cp <= 0x27BF) return true;
  if (cp == 0x2B05 || cp == 0x2B06 || cp == 0x2B07) return true;
  if (cp == 0x2B1B || cp == 0x2B1C || cp == 0x2B50 || cp == 0x2B55) return true;
  if (cp == 0x203C || cp == 0x2049) return true;
  // joiners and modifiers that only occur inside emoji sequences
  if (cp == 0x200D || cp == 0xFE0E || cp == 0xFE0F || cp == 0x20E3) return true;
  return false;
}

// A maximal run of emoji codepoints (including joiners/modifiers) becomes a
// single EMOJI token.
std::string replace_emoji(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t len = 1;
    const std::uint32_t cp = decode_utf8(s, i, &len);
    if (is_emoji_codepoint(cp)) {
      out += "EMOJI";
      i += len;
      while (i < s.size()) {
        std::size_t len2 = 1;
        const std::uint32_t cp2 = decode_utf8(s, i, &len2);
        if (!is_emoji_codepoint(cp2)) break;
        i += len2;
      }
    } else {
      out.append(s, i, len);
      i += len;
    }
  }
  return out;
}

// ---- whitespace ----

bool is_unicode_space(std::uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0xA0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::string collapse_whitespace(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t len = 1;
    const std::uint32_t cp = decode_utf8(s, i, &len);
    if (is_unicode_space(cp)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.append(s, i, len);
    }
    i += len;
  }
  return out;
}

}  // namespace

namespace {

std::string normalize_pass(const std::string& text) {
  std::string s = decode_entities(text);
  s = std::regex_replace(s, url_regex(), "HTTPURL");
  s = std::regex_replace(s, mention_regex(), "@USER");
  s = replace_emoji(s);
  return collapse_whitespace(s);
}

}  // namespace

PreprocessedTweet preprocess_tweet(const std::string& text) {
  // Replacement tokens can fuse with neighboring word characters into a new
  // mention-shaped run ("@bob<emoji>" -> "@USEREMOJI"), so the pass repeats
  // until stable. After the first pass only the mention rule can still act,
  // which settles within two more passes.
  std::string s = normalize_pass(text);
  for (int i = 0; i < 4; ++i) {
    std::string next = normalize_pass(s);
    if (next == s) break;
    s = std::move(next);
  }
  return PreprocessedTweet{text, std::move(s)};
}

std::string_view to_string(Evidence e) {
  return e == Evidence::true_origin ? "true_origin" : "low_evidence";
}

BatchOutcome EvidenceClassifier::classify_many(const std::vector<PreprocessedTweet>& tweets) {
  BatchOutcome out;
  out.labels.resize(tweets.size());
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    try {
      out.labels[i] = classify(tweets[i]);
    } catch (const std::exception& e) {
      out.failures.emplace_back(i, e.what());
    }
  }
  return out;
}

namespace {

struct Cue {
  std::regex pattern;
  int weight;
};

const std::vector<Cue>& positive_cues() {
  static const std::vector<Cue> cues = [] {
    std::vector<Cue> v;
    const auto add = [&v](const char* re, int w) {
      v.push_back({std::regex(re), w});
    };
    add(R"(\bhere\b)", 2);
    add(R"(\bthis (morning|afternoon|evening)\b)", 2);
    add(R"(\btonight\b)", 2);
    add(R"(\bright now\b)", 2);
    add(R"*(\b(i'm|im|i am) (at|in)\b)*", 2);
    add(R"*(\b(we're|we are) (at|in)\b)*", 2);
    add(R"(\bjust (arrived|landed)\b)", 2);
    add(R"(\b(our|my) (beautiful |little |great |own |home )?(city|town|neighborhood|neighbourhood|suburb)\b)", 2);
    add(R"(\btoday\b)", 1);
    add(R"(\bcurrently\b)", 1);
    return v;
  }();
  return cues;
}

const std::vector<Cue>& negative_cues() {
  static const std::vector<Cue> cues = [] {
    std::vector<Cue> v;
    const auto add = [&v](const char* re, int w) {
      v.push_back({std::regex(re), w});
    };
    add(R"(\bthrowback\b)", 3);
    add(R"(\btbt\b)", 3);
    add(R"(\bpre-?covid\b)", 3);
    add(R"(\btravell?ed to\b)", 2);
    add(R"(\btrip to\b)", 2);
    add(R"(\bvisited\b)", 2);
    add(R"(\blast (year|month|summer|winter)\b)", 2);
    add(R"(\bremember when\b)", 2);
    add(R"(\bbreaking\b)", 2);
    add(R"(^[^:]{0,60}: )", 1);  // headline shape
    return v;
  }();
  return cues;
}

}  // namespace

EvidenceLabel HeuristicClassifier::classify(const PreprocessedTweet& tweet) {
  const std::string text = lower_ascii(tweet.normalized);
  int margin = 0;
  for (const auto& cue : positive_cues()) {
    if (std::regex_search(text, cue.pattern)) margin += cue.weight;
  }
  for (const auto& cue : negative_cues()) {
    if (std::regex_search(text, cue.pattern)) margin -= cue.weight;
  }
  // a single weak cue is not enough: the logistic midpoint sits at 1.5
  const double p_true = 1.0 / (1.0 + std::exp(1.5 - static_cast<double>(margin)));
  EvidenceLabel out;
  out.label = p_true >= opts_.true_origin_cutoff ? Evidence::true_origin : Evidence::low_evidence;
  out.score = out.label == Evidence::true_origin ? p_true : 1.0 - p_true;
  return out;
}

std::unordered_map<std::string, Evidence> load_oracle_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open oracle labels: " + path);
  std::unordered_map<std::string, Evidence> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.contains("text") || !j["text"].is_string() || !j.contains("label") ||
        !j["label"].is_number_integer()) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) +
                               ": expected {\"text\", \"label\"}");
    }
    const int label = j["label"].get<int>();
    if (label != 0 && label != 1) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": label must be 0 or 1");
    }
    labels[j["text"].get<std::string>()] =
        label == 0 ? Evidence::true_origin : Evidence::low_evidence;
  }
  return labels;
}

OracleClassifier OracleClassifier::from_file(const std::string& path) {
  return OracleClassifier(load_oracle_labels(path));
}

EvidenceLabel OracleClassifier::classify(const PreprocessedTweet& tweet) {
  const auto it = labels_.find(tweet.original);
  if (it == labels_.end()) {
    throw ClassifyError("no oracle label for tweet text: " + utf8_prefix(tweet.original, 40));
  }
  return EvidenceLabel{it->second, 1.0};
}

namespace {
struct InflightGate {
  explicit InflightGate(std::ptrdiff_t n) : sem(n) {}
  std::counting_semaphore<64> sem;
};
}  // namespace

RemoteClassifier::RemoteClassifier(Options opts) : opts_(std::move(opts)) {
  std::size_t n = opts_.max_inflight == 0 ? 64 : opts_.max_inflight;
  n = std::min<std::size_t>(64, std::max<std::size_t>(1, n));
  inflight_gate_ = std::make_shared<InflightGate>(static_cast<std::ptrdiff_t>(n));
}

std::vector<EvidenceLabel> RemoteClassifier::request_chunk(const std::vector<std::string>& texts) {
  auto* gate = static_cast<InflightGate*>(inflight_gate_.get());
  gate->sem.acquire();
  struct Release {
    InflightGate* g;
    ~Release() { g->sem.release(); }
  } release{gate};

  httplib::Client client(opts_.base_url);
  client.set_connection_timeout(0, opts_.timeout_ms * 1000);
  client.set_read_timeout(0, opts_.timeout_ms * 1000);

  nlohmann::json body;
  body["texts"] = texts;
  const auto res = client.Post("/classify", body.dump(), "application/json");
  if (!res) throw TransportError("classifier endpoint unreachable: " + opts_.base_url);
  if (res->status != 200) {
    throw TransportError("classifier endpoint returned status " + std::to_string(res->status));
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed classifier response: ") + e.what());
  }
  if (!j.contains("labels") || !j["labels"].is_array() || j["labels"].size() != texts.size()) {
    throw TransportError("classifier response labels missing or wrong length");
  }
  const bool has_scores = j.contains("scores") && j["scores"].is_array();
  if (has_scores && j["scores"].size() != texts.size()) {
    throw TransportError("classifier response scores wrong length");
  }
  std::vector<EvidenceLabel> out(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (!j["labels"][i].is_number_integer()) {
      throw TransportError("classifier response label is not an integer");
    }
    const int raw = j["labels"][i].get<int>();
    if (raw != 0 && raw != 1) throw TransportError("classifier response label out of range");
    EvidenceLabel lab;
    if (has_scores) {
      const auto& pair = j["scores"][i];
      if (!pair.is_array() || pair.size() != 2) {
        throw TransportError("classifier response score pair malformed");
      }
      const double p0 = pair[0].get<double>();
      const double p1 = pair[1].get<double>();
      // the label is the argmax of the class scores; exact ties fall back to
      // the server's label field
      if (p0 > p1) lab.label = Evidence::true_origin;
      else if (p1 > p0) lab.label = Evidence::low_evidence;
      else lab.label = raw == 0 ? Evidence::true_origin : Evidence::low_evidence;
      lab.score = std::max(p0, p1);
      if (lab.score < 0.0 || lab.score > 1.0) {
        throw TransportError("classifier response score out of [0,1]");
      }
    } else {
      lab.label = raw == 0 ? Evidence::true_origin : Evidence::low_evidence;
      lab.score = 1.0;
    }
    out[i] = lab;
  }
  return out;
}

EvidenceLabel RemoteClassifier::classify(const PreprocessedTweet& tweet) {
  const std::vector<std::string> texts{utf8_prefix(tweet.normalized, 280)};
  return request_chunk(texts).front();
}

BatchOutcome RemoteClassifier::classify_many(const std::vector<PreprocessedTweet>& tweets) {
  BatchOutcome out;
  out.labels.resize(tweets.size());
  const std::size_t chunk = opts_.batch_size == 0 ? 1 : opts_.batch_size;
  for (std::size_t begin = 0; begin < tweets.size(); begin += chunk) {
    const std::size_t end = std::min(tweets.size(), begin + chunk);
    std::vector<std::string> texts;
    texts.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      texts.push_back(utf8_prefix(tweets[i].normalized, 280));
    }
    try {
      const auto labels = request_chunk(texts);
      for (std::size_t i = begin; i < end; ++i) out.labels[i] = labels[i - begin];
    } catch (const std::exception& e) {
      for (std::size_t i = begin; i < end; ++i) out.failures.emplace_back(i, e.what());
    }
  }
  return out;
}

}  // namespace tweetorigin
