#pragma once

#include <functional>
#include <vector>

#include "atomchip/field.hpp"
#include "atomchip/scene.hpp"
#include "atomchip/species.hpp"

namespace atomchip {

struct PotentialTerm {
    enum class Kind { Zeeman, Polarization, Mirror, VanDerWaals, Gravity, Custom };
    Kind kind = Kind::Zeeman;
    bool enabled = true;
    double c3 = 0.0;  // J m^3, Van der Waals coefficient
    std::function<double(const Vec3&, double)> custom;

    static PotentialTerm zeeman() { return {Kind::Zeeman, true, 0.0, {}}; }
    static PotentialTerm polarization() { return {Kind::Polarization, true, 0.0, {}}; }
    static PotentialTerm mirror() { return {Kind::Mirror, true, 0.0, {}}; }
    static PotentialTerm vanDerWaals(double c3) { return {Kind::VanDerWaals, true, c3, {}}; }
    static PotentialTerm gravity() { return {Kind::Gravity, true, 0.0, {}}; }
    static PotentialTerm customTerm(std::function<double(const Vec3&, double)> f) {
        return {Kind::Custom, true, 0.0, std::move(f)};
    }
};

/// Scalar potential energy surface for one atom in a scene: the sum of the
/// enabled terms. Pure function of (point, t); share freely across threads.
struct PotentialModel {
    const Scene* scene = nullptr;
    AtomSpecies atom;
    std::vector<PotentialTerm> terms;

    double energy(const Vec3& point, double t) const;
    /// Distance to the closest forbidden region (conductors and the chip
    /// surface or mirror plane); negative inside.
    double clearance(const Vec3& point) const;
    double surfaceHeight() const;  // z of the chip surface / mirror plane
    bool hasMirror() const { return scene && scene->mirror.has_value(); }
};

PotentialModel makeZeemanModel(const Scene& scene, const AtomSpecies& atom);

double zeemanEnergy(const AtomSpecies& atom, double bModulus);
double polarizationEnergy(const AtomSpecies& atom, double eModulus);
double mirrorEnergy(const MirrorPlane& mirror, double z);

/// Radial guide potential of a charged evanescent-wave fiber:
/// A K0^2(B r) - (1/4 pi eps0)^2 2 alpha q^2 / r^2.
double fiberGuideEnergy(double amplitude, double inverseRange, const AtomSpecies& atom,
                        double lineDensity, double r);

double totalEnergy(const PotentialModel& model, const Vec3& point, double t);

/// Modified Bessel functions of order zero (power series below x = 9,
/// asymptotic expansion above; relative error well under 1e-7).
double besselI0(double x);
double besselK0(double x);

}  // namespace atomchip
