#pragma once

// Closed-form propagation pieces shared by placement and the channel state.

namespace m2m {

/// Macro pathloss for eNB links, distance in km. Distances below
/// minDistanceKm are clamped to it.
double PathlossMacroDb(double distanceKm, double minDistanceKm = 0.01);

/// Device-to-device pathloss, distance in m. The LOS branch applies below the
/// breakpoint, the NLOS branch at or above it.
double PathlossMtcdMtcdDb(double distanceM, double losBreakpointM = 0.3);

/// Wraps an angle into (-180, 180].
double NormalizeAngleDeg(double angleDeg);

struct AntennaPattern {
  double peakGainDbi = 14.0;
  double beamwidthDeg = 70.0;
  double maxAttenuationDb = 25.0;

  friend bool operator==(const AntennaPattern&, const AntennaPattern&) = default;
};

/// Horizontal sector pattern: peak - min(12 (theta / theta3dB)^2, Am).
double AntennaGainDb(double boresightDeg, double angleToRxDeg, const AntennaPattern& pattern = {});

double DbToLinear(double db);
double LinearToDb(double linear);

}  // namespace m2m
