#pragma once

#include <optional>
#include <string_view>

namespace m2m {

enum class AppClass { ELASTIC, HARD_REAL_TIME, DELAY_ADAPTIVE, RATE_ADAPTIVE };

std::string_view ToString(AppClass c);
std::optional<AppClass> ParseAppClass(std::string_view name);

/**
 * Rate-to-utility mapping for one application class. Rates are in bit/s.
 *
 *   ELASTIC         min(1, log(1 + r/r0) / log(1 + rMax/r0))
 *   HARD_REAL_TIME  1 if r >= threshold else 0
 *   DELAY_ADAPTIVE,
 *   RATE_ADAPTIVE   (s(a(r - b)) - s(-ab)) / (1 - s(-ab)), s logistic,
 *                   b = midpoint, a = shape / midpoint
 *
 * Delay-adaptive uses a large shape (sharp knee at the intrinsic rate),
 * rate-adaptive a small one.
 */
struct UtilitySpec {
  AppClass appClass = AppClass::ELASTIC;
  double r0 = 1e6;
  double rMax = 10e6;
  double threshold = 1e6;
  double midpoint = 1e6;
  double shape = 4.0;

  static UtilitySpec Elastic(double r0, double rMax);
  static UtilitySpec HardRealTime(double threshold);
  static UtilitySpec DelayAdaptive(double midpoint, double shape = 20.0);
  static UtilitySpec RateAdaptive(double midpoint, double shape = 4.0);

  /// Rate at which the class is considered saturated (rMax, threshold or midpoint).
  double NormalizationRate() const;
  /// Throws ConfigError when a parameter is out of range.
  void Validate() const;

  friend bool operator==(const UtilitySpec&, const UtilitySpec&) = default;
};

double Logistic(double x);

/// Utility in [0, 1]; throws DomainError on a negative rate.
double EvalUtility(const UtilitySpec& spec, double rateBps);

/// U(rate + delta) - U(rate).
double MarginalUtility(const UtilitySpec& spec, double rateBps, double deltaBps);

}  // namespace m2m
