#include "m2msim/utility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "m2msim/errors.hpp"

namespace m2m {

std::string_view ToString(AppClass c) {
  switch (c) {
    case AppClass::ELASTIC:
      return "ELASTIC";
    case AppClass::HARD_REAL_TIME:
      return "HARD_REAL_TIME";
    case AppClass::DELAY_ADAPTIVE:
      return "DELAY_ADAPTIVE";
    case AppClass::RATE_ADAPTIVE:
      return "RATE_ADAPTIVE";
  }
  return "?";
}

std::optional<AppClass> ParseAppClass(std::string_view name) {
  for (AppClass c : {AppClass::ELASTIC, AppClass::HARD_REAL_TIME, AppClass::DELAY_ADAPTIVE, AppClass::RATE_ADAPTIVE}) {
    if (ToString(c) == name) {
      return c;
    }
  }
  return std::nullopt;
}

UtilitySpec UtilitySpec::Elastic(double r0, double rMax) {
  UtilitySpec s;
  s.appClass = AppClass::ELASTIC;
  s.r0 = r0;
  s.rMax = rMax;
  return s;
}

UtilitySpec UtilitySpec::HardRealTime(double threshold) {
  UtilitySpec s;
  s.appClass = AppClass::HARD_REAL_TIME;
  s.threshold = threshold;
  return s;
}

UtilitySpec UtilitySpec::DelayAdaptive(double midpoint, double shape) {
  UtilitySpec s;
  s.appClass = AppClass::DELAY_ADAPTIVE;
  s.midpoint = midpoint;
  s.shape = shape;
  return s;
}

UtilitySpec UtilitySpec::RateAdaptive(double midpoint, double shape) {
  UtilitySpec s = DelayAdaptive(midpoint, shape);
  s.appClass = AppClass::RATE_ADAPTIVE;
  return s;
}

double UtilitySpec::NormalizationRate() const {
  switch (appClass) {
    case AppClass::ELASTIC:
      return rMax;
    case AppClass::HARD_REAL_TIME:
      return threshold;
    default:
      return midpoint;
  }
}

void UtilitySpec::Validate() const {
  switch (appClass) {
    case AppClass::ELASTIC:
      if (!(r0 > 0.0) || !(rMax > 0.0)) {
        throw ConfigError("elastic utility needs r0 > 0 and r_max > 0");
      }
      break;
    case AppClass::HARD_REAL_TIME:
      if (!(threshold > 0.0)) {
        throw ConfigError("hard real-time utility needs threshold > 0");
      }
      break;
    default:
      if (!(midpoint > 0.0) || !(shape > 0.0)) {
        throw ConfigError("sigmoid utility needs midpoint > 0 and shape > 0");
      }
  }
}

double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double EvalUtility(const UtilitySpec& spec, double rateBps) {
  if (!(rateBps >= 0.0)) {
    throw DomainError("utility of a negative rate: " + std::to_string(rateBps));
  }
  switch (spec.appClass) {
    case AppClass::ELASTIC:
      return std::min(1.0, std::log1p(rateBps / spec.r0) / std::log1p(spec.rMax / spec.r0));
    case AppClass::HARD_REAL_TIME:
      return rateBps >= spec.threshold ? 1.0 : 0.0;
    case AppClass::DELAY_ADAPTIVE:
    case AppClass::RATE_ADAPTIVE: {
      const double a = spec.shape / spec.midpoint;
      const double base = Logistic(-spec.shape);
      const double u = (Logistic(a * (rateBps - spec.midpoint)) - base) / (1.0 - base);
      return std::clamp(u, 0.0, 1.0);
    }
  }
  return 0.0;
}

double MarginalUtility(const UtilitySpec& spec, double rateBps, double deltaBps) {
  return EvalUtility(spec, rateBps + deltaBps) - EvalUtility(spec, rateBps);
}

}  // namespace m2m
