#include "bvf/sim_config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <string_view>

#include "bvf/error.hpp"

namespace bvf {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ValidationError("config key '" + key + "': cannot parse '" + std::string(text) + "'");
  return value;
}

template <class T>
std::vector<T> split_list(const std::string& key, std::string_view text, auto&& convert) {
  std::vector<T> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (item.empty()) throw ValidationError("config key '" + key + "': empty list item");
    out.push_back(convert(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void reject_unknown(const KeyValueConfig& kv, const std::set<std::string>& known) {
  for (const auto& [k, v] : kv)
    if (!known.contains(k)) throw ValidationError("unknown config key '" + k + "'");
}

void apply_params(const KeyValueConfig& kv, BvfParams& p) {
  if (auto it = kv.find("kind"); it != kv.end()) p.kind = parse_baseline_kind(it->second);
  if (auto it = kv.find("alpha0"); it != kv.end()) p.alpha0 = parse_number<double>(it->first, it->second);
  if (auto it = kv.find("alpha1"); it != kv.end()) p.alpha1 = parse_number<double>(it->first, it->second);
  if (auto it = kv.find("alpha2"); it != kv.end()) p.alpha2 = parse_number<double>(it->first, it->second);
  if (auto it = kv.find("lambda"); it != kv.end()) p.lambda = parse_number<double>(it->first, it->second);
}

}  // namespace

KeyValueConfig parse_key_value(std::istream& in) {
  KeyValueConfig kv;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(number, "expected key = value");
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ParseError(number, "empty key");
    if (!kv.emplace(key, value).second) throw ParseError(number, "repeated key '" + key + "'");
  }
  return kv;
}

KeyValueConfig load_key_value(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  return parse_key_value(in);
}

EstimationStudyConfig estimation_config_from(const KeyValueConfig& kv, EstimationStudyConfig base) {
  reject_unknown(kv, {"kind", "alpha0", "alpha1", "alpha2", "lambda", "n", "censor_frac", "reps", "level",
                      "boot_B", "seed", "workers"});
  apply_params(kv, base.true_params);
  if (auto it = kv.find("n"); it != kv.end()) base.n = parse_number<int>(it->first, it->second);
  if (auto it = kv.find("censor_frac"); it != kv.end())
    base.censored_fraction = parse_number<double>(it->first, it->second);
  if (auto it = kv.find("reps"); it != kv.end()) base.replications = parse_number<int>(it->first, it->second);
  if (auto it = kv.find("level"); it != kv.end()) base.ci_level = parse_number<double>(it->first, it->second);
  if (auto it = kv.find("boot_B"); it != kv.end()) base.bootstrap_B = parse_number<int>(it->first, it->second);
  if (auto it = kv.find("seed"); it != kv.end()) base.seed = parse_number<std::uint64_t>(it->first, it->second);
  if (auto it = kv.find("workers"); it != kv.end()) base.workers = parse_number<int>(it->first, it->second);
  return base;
}

SelectionStudyConfig selection_config_from(const KeyValueConfig& kv, SelectionStudyConfig base) {
  reject_unknown(kv, {"kind", "alpha0", "alpha1", "alpha2", "lambda", "candidates", "n_grid", "censor_frac",
                      "reps", "seed", "workers", "criterion"});
  apply_params(kv, base.parent);
  if (auto it = kv.find("candidates"); it != kv.end())
    base.candidates = split_list<BaselineKind>(it->first, it->second,
                                               [](std::string_view s) { return parse_baseline_kind(s); });
  if (auto it = kv.find("n_grid"); it != kv.end()) {
    const std::string& key = it->first;
    base.n_grid = split_list<int>(key, it->second, [&](std::string_view s) { return parse_number<int>(key, s); });
  }
  if (auto it = kv.find("censor_frac"); it != kv.end())
    base.censored_fraction = parse_number<double>(it->first, it->second);
  if (auto it = kv.find("reps"); it != kv.end()) base.replications = parse_number<int>(it->first, it->second);
  if (auto it = kv.find("seed"); it != kv.end()) base.seed = parse_number<std::uint64_t>(it->first, it->second);
  if (auto it = kv.find("workers"); it != kv.end()) base.workers = parse_number<int>(it->first, it->second);
  if (auto it = kv.find("criterion"); it != kv.end()) base.criterion = parse_criterion(it->second);
  return base;
}

}  // namespace bvf
