#include "atomchip/potential.hpp"

#include <cmath>
#include <limits>

#include "atomchip/constants.hpp"
#include "atomchip/errors.hpp"

namespace atomchip {

using constants::kBohrMagneton;
using constants::kEpsilon0;
using constants::kGravityAccel;
using constants::kPi;

double zeemanEnergy(const AtomSpecies& atom, double bModulus) {
    return atom.g_f * atom.m_f * kBohrMagneton * bModulus;
}

double polarizationEnergy(const AtomSpecies& atom, double eModulus) {
    return -0.5 * atom.polarizability * eModulus * eModulus;
}

double mirrorEnergy(const MirrorPlane& mirror, double z) {
    return mirror.v0 * std::exp(-mirror.kappa * (z - mirror.z0));
}

double fiberGuideEnergy(double amplitude, double inverseRange, const AtomSpecies& atom,
                        double lineDensity, double r) {
    if (!(r > 0.0)) throw PresetError("fiberGuideEnergy: r must be positive");
    const double k0 = besselK0(inverseRange * r);
    const double pref = 1.0 / (4.0 * kPi * kEpsilon0);
    return amplitude * k0 * k0 -
           pref * pref * 2.0 * atom.polarizability * lineDensity * lineDensity / (r * r);
}

double PotentialModel::surfaceHeight() const {
    if (scene && scene->mirror) return scene->mirror->z0;
    return 0.0;
}

double PotentialModel::clearance(const Vec3& point) const {
    double best = std::numeric_limits<double>::infinity();
    if (scene) best = scene->conductorClearance(point);
    best = std::min(best, point.z - surfaceHeight());
    return best;
}

double PotentialModel::energy(const Vec3& point, double t) const {
    return totalEnergy(*this, point, t);
}

double totalEnergy(const PotentialModel& model, const Vec3& point, double t) {
    double total = 0.0;
    const Scene* scene = model.scene;
    for (const auto& term : model.terms) {
        if (!term.enabled) continue;
        switch (term.kind) {
            case PotentialTerm::Kind::Zeeman:
                if (scene) total += zeemanEnergy(model.atom, sceneB(*scene, point, t).norm());
                break;
            case PotentialTerm::Kind::Polarization:
                if (scene)
                    total += polarizationEnergy(model.atom, sceneE(*scene, point, t).norm());
                break;
            case PotentialTerm::Kind::Mirror:
                if (scene && scene->mirror) total += mirrorEnergy(*scene->mirror, point.z);
                break;
            case PotentialTerm::Kind::VanDerWaals: {
                const double d = point.z - model.surfaceHeight();
                if (d > 0.0 && d < 1.0e-6) total += -term.c3 / (d * d * d);
                break;
            }
            case PotentialTerm::Kind::Gravity:
                total += model.atom.mass * kGravityAccel * point.z;
                break;
            case PotentialTerm::Kind::Custom:
                if (term.custom) total += term.custom(point, t);
                break;
        }
    }
    return total;
}

PotentialModel makeZeemanModel(const Scene& scene, const AtomSpecies& atom) {
    PotentialModel m;
    m.scene = &scene;
    m.atom = atom;
    m.terms = {PotentialTerm::zeeman()};
    if (scene.gravity_enabled) m.terms.push_back(PotentialTerm::gravity());
    return m;
}

namespace {
constexpr double kEulerGamma = 0.57721566490153286061;
}

double besselI0(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double besselK0(double x) {
    if (!(x > 0.0)) throw PresetError("besselK0: argument must be positive");
    if (x <= 9.0) {
        // K0 = -(ln(x/2) + gamma) I0(x) + sum_k (x^2/4)^k / (k!)^2 H_k
        const double q = 0.25 * x * x;
        double term = 1.0;
        double harmonic = 0.0;
        double sum = 0.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            harmonic += 1.0 / k;
            const double add = term * harmonic;
            sum += add;
            if (add < 1e-18 * std::max(sum, 1.0)) break;
        }
        return -(std::log(0.5 * x) + kEulerGamma) * besselI0(x) + sum;
    }
    // Asymptotic series: K0(x) ~ sqrt(pi/2x) e^-x sum_k a_k, with
    // a_k = a_{k-1} * -(2k-1)^2 / (8 k x).
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 16; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(odd * odd) / (8.0 * k * x);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::sqrt(kPi / (2.0 * x)) * std::exp(-x) * sum;
}

}  // namespace atomchip
