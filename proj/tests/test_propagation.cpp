#include <doctest.h>

#include <cmath>
#include <random>

#include "m2msim/errors.hpp"
#include "m2msim/propagation.hpp"

using namespace m2m;

TEST_CASE("macro pathloss reference distances") {
  CHECK(PathlossMacroDb(1.0) == doctest::Approx(128.1).epsilon(1e-12));
  CHECK(std::abs(PathlossMacroDb(0.5) - 116.78) <= 0.01);
  CHECK(std::abs(PathlossMacroDb(0.25) - 105.46) <= 0.01);
}

TEST_CASE("macro pathloss clamps below the floor and rejects bad input") {
  CHECK(PathlossMacroDb(0.001) == PathlossMacroDb(0.01));
  CHECK(PathlossMacroDb(0.005, 0.002) < PathlossMacroDb(0.01));
  CHECK_THROWS_AS(PathlossMacroDb(0.0), DomainError);
  CHECK_THROWS_AS(PathlossMacroDb(-1.0), DomainError);
  CHECK_THROWS_AS(PathlossMacroDb(std::nan("")), DomainError);
}

TEST_CASE("macro pathloss strictly increasing") {
  double previous = PathlossMacroDb(0.01);
  for (double d = 0.02; d < 3.0; d += 0.01) {
    const double current = PathlossMacroDb(d);
    CHECK(current > previous);
    previous = current;
  }
}

TEST_CASE("device pathloss branches") {
  CHECK(PathlossMtcdMtcdDb(10.0) == doctest::Approx(88.9));
  CHECK(PathlossMtcdMtcdDb(1.0) == doctest::Approx(48.9));
  // LOS branch below the breakpoint
  CHECK(PathlossMtcdMtcdDb(0.1) == doctest::Approx(38.5 + 20.0 * std::log10(0.1)));
  CHECK(std::abs(PathlossMtcdMtcdDb(0.3 - 1e-9) - PathlossMtcdMtcdDb(0.3)) < 0.1);
  CHECK(std::abs(PathlossMtcdMtcdDb(0.3) - 28.0) < 0.1);
  CHECK_THROWS_AS(PathlossMtcdMtcdDb(0.0), DomainError);
  CHECK_THROWS_AS(PathlossMtcdMtcdDb(-3.0), DomainError);
}

TEST_CASE("device pathloss is increasing on each branch") {
  double previous = PathlossMtcdMtcdDb(0.01);
  for (double d = 0.02; d < 0.3; d += 0.01) {
    CHECK(PathlossMtcdMtcdDb(d) > previous);
    previous = PathlossMtcdMtcdDb(d);
  }
  previous = PathlossMtcdMtcdDb(0.3);
  for (double d = 0.4; d < 200.0; d += 0.7) {
    CHECK(PathlossMtcdMtcdDb(d) > previous);
    previous = PathlossMtcdMtcdDb(d);
  }
}

TEST_CASE("antenna pattern") {
  CHECK(AntennaGainDb(0.0, 0.0) == doctest::Approx(14.0));
  CHECK(AntennaGainDb(0.0, 70.0) == doctest::Approx(2.0));
  CHECK(AntennaGainDb(0.0, 180.0) == doctest::Approx(-11.0));
  CHECK(AntennaGainDb(30.0, 30.0 + 35.0) == doctest::Approx(AntennaGainDb(30.0, 30.0 - 35.0)));
  // wrapping across +-180
  CHECK(AntennaGainDb(170.0, -170.0) == doctest::Approx(14.0 - 12.0 * (20.0 / 70.0) * (20.0 / 70.0)));
}

TEST_CASE("angle normalisation") {
  CHECK(NormalizeAngleDeg(0.0) == 0.0);
  CHECK(NormalizeAngleDeg(180.0) == 180.0);
  CHECK(NormalizeAngleDeg(-180.0) == 180.0);
  CHECK(NormalizeAngleDeg(540.0) == doctest::Approx(180.0));
  CHECK(NormalizeAngleDeg(-190.0) == doctest::Approx(170.0));
  CHECK(NormalizeAngleDeg(725.0) == doctest::Approx(5.0));
}

TEST_CASE("dB conversions round-trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> db(-200.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = db(rng);
    CHECK(std::abs(LinearToDb(DbToLinear(x)) - x) < 1e-9);
  }
}
