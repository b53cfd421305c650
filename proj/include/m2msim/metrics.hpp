#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace m2m {

/// Empirical CDF over a sorted copy of the samples.
class CdfTable {
 public:
  explicit CdfTable(std::vector<double> samples);

  std::size_t Count() const { return m_sorted.size(); }
  const std::vector<double>& Sorted() const { return m_sorted; }
  /// Fraction of samples <= x.
  double CdfAt(double x) const;
  /// Lower empirical quantile: smallest sample x with CdfAt(x) >= p.
  double Percentile(double p) const;
  double Mean() const;
  /// (value, cdf) at every distinct sample value, ascending.
  std::vector<std::pair<double, double>> Points() const;

 private:
  std::vector<double> m_sorted;
};

/// Throws DomainError on an empty sample set.
CdfTable ComputeCdf(std::span<const double> samples);

struct PercentileSummary {
  std::size_t count = 0;
  double p10 = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double mean = 0.0;
};

PercentileSummary Summarize(const CdfTable& cdf);

}  // namespace m2m
