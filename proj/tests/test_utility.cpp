#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "m2msim/errors.hpp"
#include "m2msim/utility.hpp"

using namespace m2m;

namespace {

std::vector<UtilitySpec> AllClasses() {
  return {UtilitySpec::Elastic(0.3e6, 6e6), UtilitySpec::HardRealTime(1e6), UtilitySpec::DelayAdaptive(1e6, 20.0),
          UtilitySpec::RateAdaptive(1e6, 4.0)};
}

}  // namespace

TEST_CASE("hard real-time step") {
  const UtilitySpec s = UtilitySpec::HardRealTime(1e6);
  CHECK(EvalUtility(s, 0.0) == 0.0);
  CHECK(EvalUtility(s, 999999.0) == 0.0);
  CHECK(EvalUtility(s, 1e6) == 1.0);
  CHECK(EvalUtility(s, 5e6) == 1.0);
  CHECK(MarginalUtility(s, 0.2e6, 0.5e6) == 0.0);
  CHECK(MarginalUtility(s, 0.6e6, 0.5e6) == 1.0);
  CHECK(MarginalUtility(s, 2e6, 0.5e6) == 0.0);
}

TEST_CASE("elastic closed form") {
  const UtilitySpec s = UtilitySpec::Elastic(0.3e6, 6e6);
  CHECK(EvalUtility(s, 0.0) == 0.0);
  CHECK(EvalUtility(s, 6e6) == doctest::Approx(1.0));
  CHECK(EvalUtility(s, 12e6) == 1.0);
  CHECK(EvalUtility(s, 1e6) == doctest::Approx(std::log(1.0 + 1.0 / 0.3) / std::log(21.0)));
  CHECK(MarginalUtility(s, 0.1e6, 0.5e6) > MarginalUtility(s, 3e6, 0.5e6));
}

TEST_CASE("sigmoid midpoint undoes to one half") {
  for (const UtilitySpec& s : {UtilitySpec::RateAdaptive(0.3e6, 4.0), UtilitySpec::DelayAdaptive(2e6, 20.0)}) {
    const double base = 1.0 / (1.0 + std::exp(s.shape));
    const double raw = EvalUtility(s, s.midpoint) * (1.0 - base) + base;
    CHECK(std::abs(raw - 0.5) <= 1e-6);
    CHECK(EvalUtility(s, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("negative rate is a domain error") {
  for (const UtilitySpec& s : AllClasses()) {
    CHECK_THROWS_AS(EvalUtility(s, -1.0), DomainError);
  }
}

TEST_CASE("range, monotonicity and telescoping") {
  std::mt19937_64 rng(12);
  for (const UtilitySpec& s : AllClasses()) {
    const double top = 10.0 * s.NormalizationRate();
    double previous = -1.0;
    for (int k = 0; k <= 2000; ++k) {
      const double r = top * k / 2000.0;
      const double u = EvalUtility(s, r);
      CHECK(u >= 0.0);
      CHECK(u <= 1.0);
      CHECK(u >= previous);
      previous = u;
    }
    std::uniform_real_distribution<double> rate(0.0, top);
    for (int k = 0; k < 200; ++k) {
      const double r = rate(rng), d1 = rate(rng) / 10.0, d2 = rate(rng) / 10.0;
      CHECK(MarginalUtility(s, r, d1 + d2) ==
            doctest::Approx(MarginalUtility(s, r, d1) + MarginalUtility(s, r + d1, d2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("elastic concavity") {
  const UtilitySpec s = UtilitySpec::Elastic(0.3e6, 6e6);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> rate(0.0, 8e6);
  for (int k = 0; k < 2000; ++k) {
    double r1 = rate(rng), r2 = rate(rng);
    if (r1 > r2) {
      std::swap(r1, r2);
    }
    const double d = rate(rng) / 8.0;
    CHECK(MarginalUtility(s, r1, d) >= MarginalUtility(s, r2, d) - 1e-15);
  }
  // strictly increasing below saturation
  CHECK(EvalUtility(s, 5.9e6) > EvalUtility(s, 5.8e6));
}

TEST_CASE("sigmoid second difference changes sign once") {
  for (const UtilitySpec& s : {UtilitySpec::RateAdaptive(1e6, 4.0), UtilitySpec::DelayAdaptive(1e6, 20.0)}) {
    const double top = 10.0 * s.midpoint;
    const int steps = 4000;
    const double h = top / steps;
    int changes = 0;
    int lastSign = 0;
    for (int k = 1; k < steps; ++k) {
      const double r = k * h;
      const double second = EvalUtility(s, r + h) - 2.0 * EvalUtility(s, r) + EvalUtility(s, r - h);
      if (std::abs(second) < 1e-13) {
        continue;
      }
      const int sign = second > 0 ? 1 : -1;
      if (lastSign != 0 && sign != lastSign) {
        ++changes;
      }
      lastSign = sign;
    }
    CHECK(changes == 1);
  }
}

TEST_CASE("class names and validation") {
  for (const UtilitySpec& s : AllClasses()) {
    CHECK(ParseAppClass(ToString(s.appClass)) == s.appClass);
    CHECK_NOTHROW(s.Validate());
  }
  CHECK_FALSE(ParseAppClass("CLASS_5").has_value());
  CHECK_THROWS_AS(UtilitySpec::Elastic(0.0, 1.0).Validate(), ConfigError);
  CHECK_THROWS_AS(UtilitySpec::HardRealTime(-1.0).Validate(), ConfigError);
  CHECK_THROWS_AS(UtilitySpec::RateAdaptive(1e6, 0.0).Validate(), ConfigError);
}
