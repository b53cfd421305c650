#include "m2msim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "m2msim/errors.hpp"

namespace m2m {

CdfTable::CdfTable(std::vector<double> samples) : m_sorted(std::move(samples)) {
  if (m_sorted.empty()) {
    throw DomainError("CDF of an empty sample set");
  }
  std::sort(m_sorted.begin(), m_sorted.end());
}

double CdfTable::CdfAt(double x) const {
  const auto it = std::upper_bound(m_sorted.begin(), m_sorted.end(), x);
  return static_cast<double>(it - m_sorted.begin()) / static_cast<double>(m_sorted.size());
}

double CdfTable::Percentile(double p) const {
  const double n = static_cast<double>(m_sorted.size());
  // guard against p * n landing a rounding error above an integer
  const double rank = std::ceil(p * n - 1e-9);
  const auto index = static_cast<std::size_t>(std::clamp(rank - 1.0, 0.0, n - 1.0));
  return m_sorted[index];
}

double CdfTable::Mean() const {
  return std::accumulate(m_sorted.begin(), m_sorted.end(), 0.0) / static_cast<double>(m_sorted.size());
}

std::vector<std::pair<double, double>> CdfTable::Points() const {
  std::vector<std::pair<double, double>> points;
  const double n = static_cast<double>(m_sorted.size());
  for (std::size_t i = 0; i < m_sorted.size(); ++i) {
    if (i + 1 < m_sorted.size() && m_sorted[i + 1] == m_sorted[i]) {
      continue;
    }
    points.emplace_back(m_sorted[i], static_cast<double>(i + 1) / n);
  }
  return points;
}

CdfTable ComputeCdf(std::span<const double> samples) { return CdfTable(std::vector<double>(samples.begin(), samples.end())); }

PercentileSummary Summarize(const CdfTable& cdf) {
  return {cdf.Count(), cdf.Percentile(0.1), cdf.Percentile(0.5), cdf.Percentile(0.9), cdf.Mean()};
}

}  // namespace m2m
