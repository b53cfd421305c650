#include "m2msim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "m2msim/errors.hpp"

namespace m2m {

double PathlossMacroDb(double distanceKm, double minDistanceKm) {
  if (!(distanceKm > 0.0) || !std::isfinite(distanceKm)) {
    throw DomainError("macro pathloss needs a positive distance, got " + std::to_string(distanceKm));
  }
  const double r = std::max(distanceKm, minDistanceKm);
  return 128.1 + 37.6 * std::log10(r);
}

double PathlossMtcdMtcdDb(double distanceM, double losBreakpointM) {
  if (!(distanceM > 0.0) || !std::isfinite(distanceM)) {
    throw DomainError("device pathloss needs a positive distance, got " + std::to_string(distanceM));
  }
  if (distanceM < losBreakpointM) {
    return 38.5 + 20.0 * std::log10(distanceM);
  }
  return 48.9 + 40.0 * std::log10(distanceM);
}

double NormalizeAngleDeg(double angleDeg) {
  double a = std::fmod(angleDeg, 360.0);
  if (a <= -180.0) {
    a += 360.0;
  } else if (a > 180.0) {
    a -= 360.0;
  }
  return a;
}

double AntennaGainDb(double boresightDeg, double angleToRxDeg, const AntennaPattern& pattern) {
  const double theta = NormalizeAngleDeg(angleToRxDeg - boresightDeg);
  const double ratio = theta / pattern.beamwidthDeg;
  return pattern.peakGainDbi - std::min(12.0 * ratio * ratio, pattern.maxAttenuationDb);
}

double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }

double LinearToDb(double linear) { return 10.0 * std::log10(linear); }

}  // namespace m2m
