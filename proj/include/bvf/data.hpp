#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bvf/model.hpp"

namespace bvf {

// Failure mode indicator delta; the numeric values are the file encoding.
enum class FailureMode : int { Tie = 0, Risk1First = 1, Risk2First = 2, Censored = 3 };

struct CompetingRisksRecord {
  double t;
  FailureMode delta;

  friend bool operator==(const CompetingRisksRecord&, const CompetingRisksRecord&) = default;
};

// Observed (t_i, delta_i) pairs. Immutable after construction; the counts
// m_0..m_3 are always recomputed from the records.
class CompetingRisksData {
 public:
  // Throws ValidationError when
  //  - records is empty or some t is not positive and finite,
  //  - censored records carry different times, or differ from censoring_time,
  //  - a failure is observed after censoring_time.
  // Without an explicit censoring_time, C is taken from the censored records.
  static CompetingRisksData create(std::vector<CompetingRisksRecord> records,
                                   std::optional<double> censoring_time = std::nullopt);

  const std::vector<CompetingRisksRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const std::array<std::size_t, 4>& counts() const { return counts_; }
  std::size_t count(FailureMode mode) const { return counts_[static_cast<int>(mode)]; }
  // m0 + m1 + m2
  std::size_t failures() const { return counts_[0] + counts_[1] + counts_[2]; }
  std::optional<double> censoring_time() const { return censoring_time_; }

  friend bool operator==(const CompetingRisksData&, const CompetingRisksData&) = default;

 private:
  CompetingRisksData() = default;

  std::vector<CompetingRisksRecord> records_;
  std::array<std::size_t, 4> counts_{};
  std::optional<double> censoring_time_;
};

// delta = 1 if x < y, 2 if x > y, 0 if x == y; with a censoring time C,
// pairs with min(x, y) > C become (C, 3). min(x, y) == C is a failure.
CompetingRisksData from_bivariate(std::span<const BivariatePair> pairs,
                                  std::optional<double> censoring_time = std::nullopt);

// CSV with header "t,delta"; '#' lines and blank lines are skipped, except
// an optional "# censoring_time=C" line, which records C even when m3 = 0.
CompetingRisksData read_csv(std::istream& in);
void write_csv(const CompetingRisksData& data, std::ostream& out);

CompetingRisksData load_csv(const std::filesystem::path& path);
void save_csv(const CompetingRisksData& data, const std::filesystem::path& path);

}  // namespace bvf
