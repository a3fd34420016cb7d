#include "bvf/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "bvf/error.hpp"

namespace bvf {

CompetingRisksData CompetingRisksData::create(std::vector<CompetingRisksRecord> records,
                                              std::optional<double> censoring_time) {
  if (records.empty()) throw ValidationError("no records");
  if (censoring_time && !(*censoring_time > 0.0 && std::isfinite(*censoring_time)))
    throw ValidationError("censoring time must be positive and finite");

  CompetingRisksData data;
  for (const auto& r : records) {
    if (!(r.t > 0.0) || !std::isfinite(r.t)) throw ValidationError("lifetimes must be positive and finite");
    const int k = static_cast<int>(r.delta);
    if (k < 0 || k > 3) throw ValidationError("delta must be one of 0, 1, 2, 3");
    ++data.counts_[k];
    if (r.delta == FailureMode::Censored) {
      if (!censoring_time) censoring_time = r.t;
      if (r.t != *censoring_time) throw ValidationError("censored times differ");
    }
  }
  if (censoring_time) {
    for (const auto& r : records) {
      if (r.delta != FailureMode::Censored && r.t > *censoring_time)
        throw ValidationError("failure observed after the censoring time");
    }
  }
  data.records_ = std::move(records);
  data.censoring_time_ = censoring_time;
  return data;
}

CompetingRisksData from_bivariate(std::span<const BivariatePair> pairs, std::optional<double> censoring_time) {
  if (censoring_time && !(*censoring_time > 0.0))
    throw DomainError("censoring time must be positive");
  std::vector<CompetingRisksRecord> records;
  records.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("bivariate coordinates must be positive");
    const double t = std::min(x, y);
    if (censoring_time && t > *censoring_time) {
      records.push_back({*censoring_time, FailureMode::Censored});
    } else if (x < y) {
      records.push_back({t, FailureMode::Risk1First});
    } else if (y < x) {
      records.push_back({t, FailureMode::Risk2First});
    } else {
      records.push_back({t, FailureMode::Tie});
    }
  }
  return CompetingRisksData::create(std::move(records), censoring_time);
}

namespace {

// Optional comment line carrying C, so data with m3 = 0 keeps its censoring time.
constexpr std::string_view kCensoringDirective = "# censoring_time=";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

CompetingRisksData read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<CompetingRisksRecord> records;
  std::optional<double> censoring_time;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.starts_with(kCensoringDirective)) {
      const std::string_view value = trim(view.substr(kCensoringDirective.size()));
      double c = 0.0;
      auto [cp, cec] = std::from_chars(value.data(), value.data() + value.size(), c);
      if (cec != std::errc() || cp != value.data() + value.size())
        throw ParseError(line_no, "cannot parse censoring time '" + std::string(value) + "'");
      censoring_time = c;
      continue;
    }
    if (view.empty() || view.front() == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char c : view)
        if (c != ' ' && c != '\t') compact.push_back(c);
      if (compact != "t,delta") throw ParseError(line_no, "expected header 't,delta'");
      header_seen = true;
      continue;
    }
    const auto comma = view.find(',');
    if (comma == std::string_view::npos) throw ParseError(line_no, "expected two comma-separated fields");
    const std::string_view t_field = trim(view.substr(0, comma));
    const std::string_view d_field = trim(view.substr(comma + 1));
    double t = 0.0;
    auto [tp, tec] = std::from_chars(t_field.data(), t_field.data() + t_field.size(), t);
    if (tec != std::errc() || tp != t_field.data() + t_field.size())
      throw ParseError(line_no, "cannot parse time '" + std::string(t_field) + "'");
    if (!(t > 0.0) || !std::isfinite(t)) throw ParseError(line_no, "time must be a positive decimal");
    int delta = -1;
    auto [dp, dec] = std::from_chars(d_field.data(), d_field.data() + d_field.size(), delta);
    if (dec != std::errc() || dp != d_field.data() + d_field.size() || delta < 0 || delta > 3)
      throw ParseError(line_no, "delta must be one of 0, 1, 2, 3");
    records.push_back({t, static_cast<FailureMode>(delta)});
  }
  if (!header_seen) throw ParseError(line_no, "missing header 't,delta'");
  return CompetingRisksData::create(std::move(records), censoring_time);
}

void write_csv(const CompetingRisksData& data, std::ostream& out) {
  char buf[64];
  if (data.censoring_time()) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *data.censoring_time());
    out << kCensoringDirective << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
  out << "t,delta\n";
  for (const auto& r : data.records()) {
    // Shortest representation that round-trips.
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r.t);
    out << std::string_view(buf, static_cast<std::size_t>(end - buf)) << ',' << static_cast<int>(r.delta)
        << '\n';
  }
}

CompetingRisksData load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return read_csv(in);
}

void save_csv(const CompetingRisksData& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  write_csv(data, out);
  if (!out) throw ValidationError("write to '" + path.string() + "' failed");
}

}  // namespace bvf
