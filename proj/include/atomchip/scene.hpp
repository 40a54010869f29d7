#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "atomchip/species.hpp"
#include "atomchip/vec3.hpp"

namespace atomchip {

/// Time dependence attached to currents, charges or bias components.
/// The schedule value multiplies the element's nominal amplitude.
struct Schedule {
    enum class Kind { Constant, Sinusoid, Ramp };
    Kind kind = Kind::Constant;
    double constant = 1.0;
    double amplitude = 0.0;       // sinusoid
    double angular_frequency = 0.0;
    double phase = 0.0;
    std::vector<std::pair<double, double>> ramp;  // (t, value), sorted by t

    static Schedule constantValue(double v);
    static Schedule sinusoid(double amplitude, double omega, double phase);
    static Schedule piecewiseLinear(std::vector<std::pair<double, double>> pts);

    double value(double t) const;
};

struct CrossSection {
    enum class Kind { Thin, Rectangle, Circle };
    Kind kind = Kind::Thin;
    double width = 0.0;      // m, rectangle
    double thickness = 0.0;  // m, rectangle
    double radius = 0.0;     // m, circle

    static CrossSection thin() { return {}; }
    static CrossSection rectangle(double w, double t);
    static CrossSection circle(double r);
};

struct WireSegment {
    Vec3 start;
    Vec3 end;
    double current = 0.0;  // A, signed along start -> end
    CrossSection cross_section;
    std::optional<std::pair<double, double>> end_voltages;  // V at start/end
    std::string schedule_id;  // empty = no schedule
    // Radius used for collision tests; thin wires default to 0.5 um.
    std::optional<double> collision_radius_override;

    Vec3 direction() const { return (end - start).normalized(); }
    double length() const { return (end - start).norm(); }
    double collisionRadius() const;
};

struct LineCharge {
    Vec3 start;
    Vec3 end;
    double density_start = 0.0;  // C/m
    double density_end = 0.0;    // C/m (linear variation in between)
    double physical_radius = 0.0;
    std::string schedule_id;
    int subdivisions = 64;  // sub-segments used when the density varies

    bool uniform() const { return density_start == density_end; }
};

struct PointCharge {
    Vec3 position;
    double charge = 0.0;  // C
    std::string schedule_id;
};

struct BiasField {
    enum class Kind { Uniform, Quadrupole };
    Kind kind = Kind::Uniform;
    Vec3 field;          // T, uniform
    double gradient = 0.0;  // T/m, quadrupole transverse gradient
    Vec3 center;
    Vec3 axis{0.0, 0.0, 1.0};
    std::string schedule_id;

    static BiasField uniform(const Vec3& b);
    static BiasField quadrupole(double gradient, const Vec3& center, const Vec3& axis);
};

struct MirrorPlane {
    double z0 = 0.0;      // m
    double v0 = 0.0;      // J
    double kappa = 0.0;   // 1/m
};

struct Substrate {
    enum class Geometry { HalfSpace, Layer, Wire };
    double temperature = 300.0;   // K
    double resistivity = 1.7e-8;  // Ohm m
    Geometry geometry = Geometry::HalfSpace;
    double layer_thickness = 0.0;  // m
    double wire_radius = 0.0;      // m
    bool apply_half_factor = true;
};

struct Diagnostic {
    std::string code;
    std::string message;
};

/// Preset provenance; kept on the Scene so analysis passes can pick
/// analytic seeds for the canonical wire layouts.
struct PresetInfo {
    std::string kind;
    std::map<std::string, double> params;
};

/// Full chip description. Immutable after validation; share freely across
/// threads. Chip surface convention: the plane z = 0, wires at z <= 0,
/// heights measured from z = 0.
struct Scene {
    std::vector<WireSegment> wires;
    std::vector<LineCharge> line_charges;
    std::vector<PointCharge> point_charges;
    std::vector<BiasField> bias_fields;
    std::optional<MirrorPlane> mirror;
    std::optional<Substrate> substrate;
    bool gravity_enabled = false;
    std::map<std::string, Schedule> schedules;
    std::optional<PresetInfo> preset;

    double scheduleValue(const std::string& id, double t) const;
    /// Distance from p to the closest conductor surface (wires and line
    /// charges), used for derivative step sizing and collision tests.
    double conductorClearance(const Vec3& p) const;
};

std::vector<Diagnostic> validateScene(const Scene& scene);

}  // namespace atomchip
