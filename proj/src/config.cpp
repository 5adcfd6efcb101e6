#include "nsx/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>

#include "nsx/errors.hpp"

namespace nsx {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config: " + std::string(key) + " expects a number, got '" + std::string(text) + "'");
  }
  return v;
}

Index parse_count(std::string_view key, std::string_view text) {
  const auto v = parse_number<long long>(key, text);
  if (v < 0) throw ConfigError("config: " + std::string(key) + " must be nonnegative");
  return static_cast<Index>(v);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const auto item = trim(text.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

std::vector<Index> parse_dims(std::string_view key, std::string_view text) {
  std::vector<Index> out;
  for (const auto& item : split_list(text)) {
    const Index v = parse_count(key, item);
    if (v < 1) throw ConfigError("config: " + std::string(key) + " entries must be positive");
    out.push_back(v);
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_same_v<T, std::string>) {
      s += items[i];
    } else {
      s += std::to_string(items[i]);
    }
  }
  return s;
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {
      "dataset", "size", "dim", "metric", "methods", "dims", "witness", "eval", "pairs",
      "shepard_objects", "recall_corpus", "recall_queries", "recall_k", "lmds_landmarks",
      "seed", "workers", "out", "cache", "reps", "bench_objects", "angle_dims",
      "angle_samples", "bins"};
  return k;
}

void ExperimentConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "dataset") {
    dataset = value;
  } else if (key == "size") {
    size = parse_count(key, value);
  } else if (key == "dim") {
    dim = parse_count(key, value);
  } else if (key == "metric") {
    metric = value;
  } else if (key == "methods" || key == "method") {
    auto list = split_list(value);
    for (const auto& m : list) {
      if (std::find(kAllMethods.begin(), kAllMethods.end(), m) == kAllMethods.end()) {
        throw ConfigError("config: unknown method '" + m + "'");
      }
    }
    methods = std::move(list);
  } else if (key == "dims") {
    dims = parse_dims(key, value);
  } else if (key == "witness") {
    witness = parse_count(key, value);
  } else if (key == "eval") {
    eval = parse_count(key, value);
  } else if (key == "pairs") {
    pairs = static_cast<std::size_t>(parse_count(key, value));
  } else if (key == "shepard_objects") {
    shepard_objects = parse_count(key, value);
  } else if (key == "recall_corpus") {
    recall_corpus = parse_count(key, value);
  } else if (key == "recall_queries") {
    recall_queries = parse_count(key, value);
  } else if (key == "recall_k") {
    recall_k = static_cast<std::size_t>(parse_count(key, value));
  } else if (key == "lmds_landmarks") {
    lmds_landmarks = parse_count(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "workers") {
    workers = static_cast<unsigned>(std::max<Index>(1, parse_count(key, value)));
  } else if (key == "out") {
    out = std::string(value);
  } else if (key == "cache") {
    cache = std::string(value);
  } else if (key == "reps") {
    reps = static_cast<int>(std::max<Index>(1, parse_count(key, value)));
  } else if (key == "bench_objects") {
    bench_objects = parse_count(key, value);
  } else if (key == "angle_dims") {
    angle_dims = parse_dims(key, value);
  } else if (key == "angle_samples") {
    angle_samples = static_cast<std::size_t>(parse_count(key, value));
  } else if (key == "bins") {
    bins = static_cast<std::size_t>(std::max<Index>(1, parse_count(key, value)));
  } else {
    throw ConfigError("config: unknown key '" + std::string(key) + "'");
  }
}

void ExperimentConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    try {
      set(trim(s.substr(0, eq)), s.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void ExperimentConfig::load_environment() {
  for (const auto& key : keys()) {
    std::string var = "NSX_";
    for (char c : key) var += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(var.c_str())) set(key, v);
  }
}

std::vector<Index> ExperimentConfig::target_dims(Index input_dim) const {
  std::vector<Index> d = dims;
  if (d.empty()) {
    for (double f : {0.8, 0.4, 0.2, 0.1, 0.05}) {
      const auto k = static_cast<Index>(f * static_cast<double>(input_dim));
      if (k >= 2) d.push_back(k);
    }
    d.push_back(2);
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

std::vector<std::string> ExperimentConfig::method_list(bool metric_has_coordinates) const {
  if (!methods.empty()) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& m : methods) {
      if (seen.insert(m).second) out.push_back(m);
    }
    return out;
  }
  if (metric_has_coordinates) return kAllMethods;
  return {"zen", "lwb", "upb", "lmds"};
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  return {{"dataset", dataset},
          {"size", std::to_string(size)},
          {"dim", std::to_string(dim)},
          {"metric", metric},
          {"methods", join(methods)},
          {"dims", join(dims)},
          {"witness", std::to_string(witness)},
          {"eval", std::to_string(eval)},
          {"pairs", std::to_string(pairs)},
          {"shepard_objects", std::to_string(shepard_objects)},
          {"recall_corpus", std::to_string(recall_corpus)},
          {"recall_queries", std::to_string(recall_queries)},
          {"recall_k", std::to_string(recall_k)},
          {"lmds_landmarks", std::to_string(lmds_landmarks)},
          {"seed", std::to_string(seed)},
          {"workers", std::to_string(workers)},
          {"out", out.string()},
          {"cache", cache.string()},
          {"reps", std::to_string(reps)},
          {"bench_objects", std::to_string(bench_objects)},
          {"angle_dims", join(angle_dims)},
          {"angle_samples", std::to_string(angle_samples)},
          {"bins", std::to_string(bins)}};
}

}  // namespace nsx
