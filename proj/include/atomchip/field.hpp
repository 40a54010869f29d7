#pragma once

#include "atomchip/scene.hpp"
#include "atomchip/vec3.hpp"

namespace atomchip {

/// |B| below this value counts as a field zero; the gradient of the modulus
/// is not differentiable there and derivative calls refuse to run.
inline constexpr double kZeroFieldThreshold = 1.0e-10;  // T

struct FieldSample {
    Vec3 b;            // T
    Vec3 e;            // V/m
    double b_modulus = 0.0;
    Vec3 grad_modB;    // T/m
    Mat3 hessian_modB; // T/m^2
    Vec3 grad_error;   // per-component Richardson error estimate, T/m
};

struct GradHessian {
    Vec3 gradient;
    Mat3 hessian;
    Vec3 gradient_error;
};

/// Closed-form Biot-Savart field of a straight thin segment.
/// Throws SingularityError when the point lies on the conductor.
Vec3 bSegmentThin(const WireSegment& segment, const Vec3& point);
Vec3 bSegmentThin(const Vec3& a, const Vec3& b, double current, const Vec3& point,
                  double singularRadius = 0.0);

/// Finite cross-section field via filament subdivision: an n x n grid for
/// rectangles, azimuthally sampled rings for circles. Throws
/// InsideConductorError for points inside the conductor volume.
Vec3 bSegmentFinite(const WireSegment& segment, const Vec3& point, int nFilaments);

/// Finite-size field with automatic filament refinement (doubling until the
/// result moves by less than relTol).
Vec3 bSegmentFiniteAuto(const WireSegment& segment, const Vec3& point,
                        int nStart = 16, double relTol = 1.0e-6);

/// Electric field of a uniform finite line charge.
Vec3 eLineSegment(const Vec3& a, const Vec3& b, double density, const Vec3& point);

Vec3 sceneB(const Scene& scene, const Vec3& point, double t);
Vec3 sceneE(const Scene& scene, const Vec3& point, double t);
Vec3 eField(const Scene& scene, const Vec3& point, double t);

/// Central finite differences of |B| with Richardson extrapolation.
/// step <= 0 selects the default max(1e-9 m, 1e-4 x conductor clearance).
GradHessian gradHessianModB(const Scene& scene, const Vec3& point, double t,
                            double step = 0.0);

FieldSample fieldTotal(const Scene& scene, const Vec3& point, double t);

}  // namespace atomchip
