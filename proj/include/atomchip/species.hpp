#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atomchip/constants.hpp"

namespace atomchip {

/// Hyperfine state of a trappable atom. The magnetic coupling enters all
/// potentials through mu_eff = g_F m_F mu_B; a positive value marks a weak
/// field seeker (trappable at field minima).
struct AtomSpecies {
    std::string name;
    double mass = 0.0;            // kg
    double f_total = 0.0;         // hyperfine F
    double m_f = 0.0;             // magnetic quantum number
    double g_f = 0.0;             // Lande factor
    double polarizability = 0.0;  // C m^2 / V
    std::optional<double> mu_parallel_override;  // J/T

    double muEff() const { return g_f * m_f * constants::kBohrMagneton; }
    double muParallel() const {
        return mu_parallel_override ? *mu_parallel_override : muEff();
    }
    bool isWeakFieldSeeker() const { return g_f * m_f > 0.0; }
    bool isStrongFieldSeeker() const { return g_f * m_f < 0.0; }

    void validate() const;
};

namespace species {

AtomSpecies lithium7(double fTotal = 2.0, double mF = 2.0);
AtomSpecies rubidium87(double fTotal = 2.0, double mF = 2.0);

/// Lookup by catalog name, e.g. "Li7:F=2,mF=2" or "Rb87:F=1,mF=-1".
AtomSpecies byName(const std::string& name);
std::vector<std::string> catalogNames();

}  // namespace species
}  // namespace atomchip
