#include "atomchip/species.hpp"

#include <cmath>
#include <sstream>

#include "atomchip/errors.hpp"

namespace atomchip {

void AtomSpecies::validate() const {
    if (!(mass > 0.0)) throw PresetError("species '" + name + "': mass must be positive");
    if (std::abs(m_f) > f_total + 1e-12)
        throw PresetError("species '" + name + "': |m_F| exceeds F");
    if (!(polarizability >= 0.0))
        throw PresetError("species '" + name + "': polarizability must be >= 0");
}

namespace species {
namespace {

using constants::kAtomicMassUnit;
using constants::kPolarizabilityAu;

// Lande g_F for alkali ground states (J = 1/2, g_J ~ 2): g_F = +-g_J/(2I+1)
// with the sign set by F = I +- 1/2. For both 7Li and 87Rb (I = 3/2) this
// gives g_F = +1/2 for F = 2 and -1/2 for F = 1.
double alkaliGf(double nuclearSpin, double fTotal) {
    const double upper = nuclearSpin + 0.5;
    const double sign = (std::abs(fTotal - upper) < 0.25) ? 1.0 : -1.0;
    return sign * 2.0 / (2.0 * nuclearSpin + 1.0);
}

std::string stateName(const std::string& base, double fTotal, double mF) {
    std::ostringstream os;
    os << base << ":F=" << fTotal << ",mF=" << mF;
    return os.str();
}

}  // namespace

AtomSpecies lithium7(double fTotal, double mF) {
    AtomSpecies s;
    s.name = stateName("Li7", fTotal, mF);
    s.mass = 7.0160034366 * kAtomicMassUnit;
    s.f_total = fTotal;
    s.m_f = mF;
    s.g_f = alkaliGf(1.5, fTotal);
    s.polarizability = 164.11 * kPolarizabilityAu;
    s.validate();
    return s;
}

AtomSpecies rubidium87(double fTotal, double mF) {
    AtomSpecies s;
    s.name = stateName("Rb87", fTotal, mF);
    s.mass = 86.9091805310 * kAtomicMassUnit;
    s.f_total = fTotal;
    s.m_f = mF;
    s.g_f = alkaliGf(1.5, fTotal);
    s.polarizability = 319.8 * kPolarizabilityAu;
    s.validate();
    return s;
}

AtomSpecies byName(const std::string& name) {
    // Accepted forms: "Li7:F=2,mF=2", "Rb87:F=1,mF=-1", plus the bare
    // shorthands "Li7" and "Rb87" for the stretched F=2,mF=2 state.
    std::string base = name;
    double fTotal = 2.0;
    double mF = 2.0;
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
        base = name.substr(0, colon);
        double f = 0.0, m = 0.0;
        if (std::sscanf(name.c_str() + colon, ":F=%lf,mF=%lf", &f, &m) == 2) {
            fTotal = f;
            mF = m;
        } else {
            throw PresetError("unrecognized species state spec: " + name);
        }
    }
    if (base == "Li7" || base == "Li") return lithium7(fTotal, mF);
    if (base == "Rb87" || base == "Rb") return rubidium87(fTotal, mF);
    throw PresetError("unknown species: " + name);
}

std::vector<std::string> catalogNames() {
    return {"Li7:F=2,mF=2", "Li7:F=2,mF=-2", "Li7:F=1,mF=-1",
            "Rb87:F=2,mF=2", "Rb87:F=1,mF=-1"};
}

}  // namespace species
}  // namespace atomchip
