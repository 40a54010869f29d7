#pragma once

namespace atomchip::constants {

// CODATA 2018 values, SI units throughout.
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kBohrMagneton = 9.2740100783e-24;  // J/T
inline constexpr double kHbar = 1.054571817e-34;           // J s
inline constexpr double kBoltzmann = 1.380649e-23;         // J/K
inline constexpr double kEpsilon0 = 8.8541878128e-12;      // F/m
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kGravityAccel = 9.80665;              // m/s^2

// mu0/(2 pi) is kept as its own constant so that the wire-field kernels use
// exactly 2e-7 T m/A, matching the classic mu0 = 4 pi x 1e-7 convention.
inline constexpr double kMu0Over2Pi = 2.0e-7;  // T m/A
inline constexpr double kMu0 = 2.0 * kPi * kMu0Over2Pi;

// Copper resistivity, the reference material for substrate noise estimates.
inline constexpr double kRhoCopper = 1.7e-8;  // Ohm m

// Atomic unit of polarizability, for species catalog entries.
inline constexpr double kPolarizabilityAu = 1.64877727436e-41;  // C m^2/V

// Unit shorthands for conversions.
inline constexpr double kGauss = 1.0e-4;        // T
inline constexpr double kMicron = 1.0e-6;       // m
inline constexpr double kMilliAmp = 1.0e-3;     // A
inline constexpr double kMbar = 1.0e2;          // Pa

struct PhysicalConstants {
    double bohr_magneton = kBohrMagneton;
    double hbar = kHbar;
    double boltzmann = kBoltzmann;
    double mu0 = kMu0;
    double epsilon0 = kEpsilon0;
    double atomic_mass_unit = kAtomicMassUnit;
    double elementary_charge = kElementaryCharge;
    double gravity_accel = kGravityAccel;
};

}  // namespace atomchip::constants
