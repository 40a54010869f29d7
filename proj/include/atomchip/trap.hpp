#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "atomchip/potential.hpp"

namespace atomchip {

enum class TrapClass { QuadrupoleZero, IoffePritchard, Unresolved };

std::string to_string(TrapClass c);

struct DepthResult {
    double depth = 0.0;  // J, barrier above the trap minimum
    bool unbounded = false;  // no barrier found; depth taken at the domain edge
    Vec3 escape_direction;
    Vec3 barrier_position;
};

struct TrapReport {
    Vec3 position;
    double b_min = 0.0;          // T
    TrapClass classification = TrapClass::Unresolved;
    double grad_at_edge = 0.0;   // T/m, linear slope of |B| outside the harmonic bottom
    std::array<double, 3> frequencies{};  // rad/s, sorted descending
    std::array<Vec3, 3> principal_axes{};
    double depth = 0.0;          // J
    double depth_mK = 0.0;
    bool depth_unbounded = false;
    double height_h = 0.0;       // m above z = 0
    double larmor = 0.0;         // rad/s
    double adiabaticity = 0.0;   // omega_L / max(omega_i)
    double gs_size_table = 0.0;  // sqrt(hbar/(M omega_perp))
    double gs_size_ho = 0.0;     // sqrt(hbar/(2 M omega_perp))
    double gs_freq = 0.0;        // omega_perp / 2pi, Hz
};

enum class SplitRegime { TwoVertical, MergedHarmonic, TwoHorizontal };

std::string to_string(SplitRegime r);

struct SplitDiagnosis {
    double d_split = 0.0;  // m
    SplitRegime regime = SplitRegime::MergedHarmonic;
    std::vector<Vec3> minima_positions;
};

struct MinimizeOptions {
    double t = 0.0;
    int max_iterations = 400;
    double position_tol = 1.0e-13;  // m
    double initial_step = 0.0;      // 0 = auto from conductor clearance
};

/// Candidate trap positions for the recognizable preset layouts; falls back
/// to a coarse |B| grid scan for free-form scenes.
std::vector<Vec3> analyticSeed(const Scene& scene);

/// Local minimizer of the potential energy surface: quasi-Newton descent
/// with numeric gradients, plus a cyclic coordinate golden-section stage
/// that handles the |B| cone at quadrupole zeros.
Vec3 findMinimum(const PotentialModel& model, const Vec3& seed,
                 const MinimizeOptions& opts = {});

/// Escape-barrier search: radial fan of 26 directions at three angular
/// refinement levels with ridge refinement of the best candidate.
/// Deterministic for fixed options.
DepthResult trapDepth(const PotentialModel& model, const Vec3& position, double t = 0.0);

TrapReport characterize(const PotentialModel& model, const Vec3& position, double t = 0.0);

/// Splitting analysis of the co-propagating two-wire guide.
SplitDiagnosis twoWireDiagnose(const Scene& scene);

struct GuidePath {
    Vec3 origin;
    Vec3 axis{1.0, 0.0, 0.0};
    double s_begin = 0.0;
    double s_end = 0.0;
    int samples = 0;
    Vec3 transverse_seed;    // first-sample seed in the transverse plane
    double window = 0.0;     // transverse search half-width (0 = auto)
};

struct GuideScanRecord {
    double s = 0.0;
    bool found = false;            // lost-minimum flag when false
    Vec3 minimum;
    double u_min = 0.0;            // J
    double f_perp = 0.0;           // Hz, stiffest transverse frequency
    double f_perp_2 = 0.0;         // Hz, softer transverse frequency
    double barrier_to_surface = 0.0;  // J
    std::vector<Vec3> minima;      // all transverse minima at this station
    double inter_guide_barrier = -1.0;  // J; < 0 when fewer than two minima
};

std::vector<GuideScanRecord> guideScan(const PotentialModel& model, const GuidePath& path,
                                       double t = 0.0);

/// Gradient and Hessian of the potential energy by Richardson-extrapolated
/// central differences.
GradHessian energyGradHessian(const PotentialModel& model, const Vec3& point, double t,
                              double step = 0.0);

}  // namespace atomchip
