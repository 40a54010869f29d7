#include "atomchip/presets.hpp"

#include <cmath>

#include "atomchip/constants.hpp"
#include "atomchip/errors.hpp"

namespace atomchip {
namespace {

using constants::kPi;

double require(const PresetParams& p, const std::string& kind, const std::string& name) {
    const auto it = p.find(name);
    if (it == p.end())
        throw PresetError("preset '" + kind + "': missing parameter '" + name + "'");
    return it->second;
}

double optional(const PresetParams& p, const std::string& name, double fallback) {
    const auto it = p.find(name);
    return it == p.end() ? fallback : it->second;
}

double requirePositive(const PresetParams& p, const std::string& kind, const std::string& name) {
    const double v = require(p, kind, name);
    if (!(v > 0.0))
        throw PresetError("preset '" + kind + "': parameter '" + name + "' must be positive");
    return v;
}

void addPath(Scene& scene, const std::vector<Vec3>& points, double current,
             const std::string& scheduleId = {}) {
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        WireSegment w;
        w.start = points[i];
        w.end = points[i + 1];
        w.current = current;
        w.schedule_id = scheduleId;
        scene.wires.push_back(w);
    }
}

void addUniformBias(Scene& scene, const Vec3& b) {
    if (b.norm() > 0.0) scene.bias_fields.push_back(BiasField::uniform(b));
}

std::vector<Vec3> arcPoints(double radius, double a0, double a1, int segments, double z) {
    std::vector<Vec3> pts;
    pts.reserve(segments + 1);
    for (int i = 0; i <= segments; ++i) {
        const double a = a0 + (a1 - a0) * static_cast<double>(i) / segments;
        pts.push_back({radius * std::cos(a), radius * std::sin(a), z});
    }
    return pts;
}

// Half loop in the chip plane, fed by straight leads running off at -y so
// that concentric loops do not share a conductor axis.
void addHalfLoop(Scene& scene, double radius, double current, int segments) {
    auto pts = arcPoints(radius, 0.0, kPi, segments, 0.0);
    const double leadLength = 10.0 * radius;
    std::vector<Vec3> path;
    path.push_back({radius, -leadLength, 0.0});
    path.insert(path.end(), pts.begin(), pts.end());
    path.push_back({-radius, -leadLength, 0.0});
    addPath(scene, path, current);
}

void addFullLoop(Scene& scene, double radius, double current, int segments) {
    auto pts = arcPoints(radius, 0.0, 2.0 * kPi, segments, 0.0);
    pts.back() = pts.front();
    addPath(scene, pts, current);
}

Vec3 biasFromParams(const PresetParams& p) {
    return {optional(p, "bias_x", 0.0), optional(p, "bias_y", 0.0), optional(p, "bias_z", 0.0)};
}

Scene sideGuide(const PresetParams& p) {
    const double current = require(p, "side_guide", "current");
    const double bias = requirePositive(p, "side_guide", "bias");
    const double ip = optional(p, "ip_field", 0.0);
    const double length = optional(p, "length", 1.0);
    if (!(length > 0.0)) throw PresetError("preset 'side_guide': length must be positive");

    Scene s;
    // Current flows along -x so that the guide forms above the chip (+z)
    // with the bias along -y.
    addPath(s, {{+0.5 * length, 0.0, 0.0}, {-0.5 * length, 0.0, 0.0}}, current);
    addUniformBias(s, {0.0, -bias, 0.0});
    if (ip != 0.0) addUniformBias(s, {ip, 0.0, 0.0});
    return s;
}

Scene twoWire(const PresetParams& p, bool counterPropagating) {
    const std::string kind = counterPropagating ? "two_wire_counter" : "two_wire_co";
    const double current = require(p, kind, "current");
    const double bias = requirePositive(p, kind, "bias");
    const double d = requirePositive(p, kind, "separation");
    const double ip = optional(p, "ip_field", 0.0);
    const double length = optional(p, "length", 1.0);

    Scene s;
    if (counterPropagating) {
        // Wires at y = +-d/2; bias orthogonal to the wire plane (+z).
        addPath(s, {{-0.5 * length, +0.5 * d, 0.0}, {+0.5 * length, +0.5 * d, 0.0}}, current);
        addPath(s, {{+0.5 * length, -0.5 * d, 0.0}, {-0.5 * length, -0.5 * d, 0.0}}, current);
        addUniformBias(s, {0.0, 0.0, bias});
    } else {
        // Co-propagating currents, bias parallel to the wire plane (-y).
        addPath(s, {{+0.5 * length, +0.5 * d, 0.0}, {-0.5 * length, +0.5 * d, 0.0}}, current);
        addPath(s, {{+0.5 * length, -0.5 * d, 0.0}, {-0.5 * length, -0.5 * d, 0.0}}, current);
        addUniformBias(s, {0.0, -bias, 0.0});
    }
    if (ip != 0.0) addUniformBias(s, {ip, 0.0, 0.0});
    return s;
}

Scene bentWireTrap(const PresetParams& p, bool zShape) {
    const std::string kind = zShape ? "z_trap" : "u_trap";
    const double current = require(p, kind, "current");
    const double bias = requirePositive(p, kind, "bias");
    const double bar = requirePositive(p, kind, "bar_length");
    const double lead = optional(p, "lead_length", 10.0 * bar);
    if (!(lead > 0.0)) throw PresetError("preset '" + kind + "': lead_length must be positive");

    Scene s;
    const double h = 0.5 * bar;
    // Bar carries current along +x; the bias along +y cancels its field
    // above the chip plane.
    const double leadEndY = zShape ? +lead : -lead;
    addPath(s,
            {{-h, -lead, 0.0}, {-h, 0.0, 0.0}, {+h, 0.0, 0.0}, {+h, leadEndY, 0.0}},
            current);
    addUniformBias(s, {0.0, bias, 0.0});
    const double ip = optional(p, "ip_field", 0.0);
    if (ip != 0.0) addUniformBias(s, {ip, 0.0, 0.0});
    return s;
}

Scene crossedWires(const PresetParams& p, bool hConfiguration) {
    const std::string kind = hConfiguration ? "h_trap" : "crossed_wires";
    const double current = require(p, kind, "current");
    const double crossCurrent = require(p, kind, "cross_current");
    const double bias = requirePositive(p, kind, "bias");
    const double length = optional(p, "length", 1.0);
    const double crossLength = optional(p, "cross_length", length);
    const double depth = optional(p, "cross_depth", 2.0e-6);

    Scene s;
    addPath(s, {{+0.5 * length, 0.0, 0.0}, {-0.5 * length, 0.0, 0.0}}, current);
    addUniformBias(s, {0.0, -bias, 0.0});
    const double zc = -depth;
    if (hConfiguration) {
        const double sep = requirePositive(p, kind, "cross_separation");
        addPath(s, {{-0.5 * sep, -0.5 * crossLength, zc}, {-0.5 * sep, +0.5 * crossLength, zc}},
                crossCurrent);
        addPath(s, {{+0.5 * sep, -0.5 * crossLength, zc}, {+0.5 * sep, +0.5 * crossLength, zc}},
                crossCurrent);
    } else {
        addPath(s, {{0.0, -0.5 * crossLength, zc}, {0.0, +0.5 * crossLength, zc}}, crossCurrent);
    }
    const double longBias = optional(p, "long_bias", optional(p, "ip_field", 0.0));
    if (longBias != 0.0) addUniformBias(s, {longBias, 0.0, 0.0});
    return s;
}

Scene ySplitter(const PresetParams& p) {
    const double current = require(p, "y_splitter", "current");
    const double bias = requirePositive(p, "y_splitter", "bias");
    const double length = optional(p, "length", 4.0e-3);
    const double halfWidth = requirePositive(p, "y_splitter", "opening_half_width");
    const double ratio = optional(p, "split_ratio", 0.5);
    if (ratio < 0.0 || ratio > 1.0)
        throw PresetError("preset 'y_splitter': split_ratio must be in [0,1]");

    Scene s;
    // Input wire feeds the fork at the origin; arm currents preserve the
    // node current balance.
    addPath(s, {{-length, 0.0, 0.0}, {0.0, 0.0, 0.0}}, current);
    addPath(s, {{0.0, 0.0, 0.0}, {length, +halfWidth, 0.0}}, ratio * current);
    addPath(s, {{0.0, 0.0, 0.0}, {length, -halfWidth, 0.0}}, (1.0 - ratio) * current);
    addUniformBias(s, {0.0, bias, 0.0});
    const double ip = optional(p, "ip_field", 0.0);
    if (ip != 0.0) addUniformBias(s, {ip, 0.0, 0.0});
    return s;
}

Scene xSplitter(const PresetParams& p) {
    const double current = require(p, "x_splitter", "current");
    const double bias = requirePositive(p, "x_splitter", "bias");
    const double sClose = requirePositive(p, "x_splitter", "closest_separation");
    const double sInlet = requirePositive(p, "x_splitter", "inlet_separation");
    const double length = optional(p, "length", 4.0e-3);
    const double waist = optional(p, "waist_length", 0.25 * length);
    if (sInlet <= sClose)
        throw PresetError("preset 'x_splitter': inlet_separation must exceed closest_separation");

    Scene s;
    auto bentWire = [&](double sign) {
        addPath(s,
                {{+length, sign * 0.5 * sInlet, 0.0},
                 {+0.5 * waist, sign * 0.5 * sClose, 0.0},
                 {-0.5 * waist, sign * 0.5 * sClose, 0.0},
                 {-length, sign * 0.5 * sInlet, 0.0}},
                current);
    };
    bentWire(+1.0);
    bentWire(-1.0);
    addUniformBias(s, {0.0, -bias, 0.0});
    const double ip = optional(p, "ip_field", 0.0);
    if (ip != 0.0) addUniformBias(s, {ip, 0.0, 0.0});
    return s;
}

// Side guide plus two meandering wires. Driving the meanders in temporal
// quadrature (and laying them out in spatial quadrature) produces a
// longitudinal modulation that travels one pitch per drive period.
Scene conveyor(const PresetParams& p) {
    const double current = require(p, "conveyor", "current");
    const double bias = requirePositive(p, "conveyor", "bias");
    const double ip = require(p, "conveyor", "ip_field");
    const double modCurrent = require(p, "conveyor", "modulation_current");
    const double pitch = requirePositive(p, "conveyor", "pitch");
    const double amplitude = requirePositive(p, "conveyor", "amplitude");
    const double omega = requirePositive(p, "conveyor", "drive_omega");
    const int periods = static_cast<int>(optional(p, "n_periods", 3.0));
    const double depth = optional(p, "meander_depth", 2.0e-6);
    const double length = optional(p, "length", std::max(1.0e-2, 4.0 * periods * pitch));

    Scene s;
    addPath(s, {{+0.5 * length, 0.0, 0.0}, {-0.5 * length, 0.0, 0.0}}, current);
    addUniformBias(s, {0.0, -bias, 0.0});
    addUniformBias(s, {ip, 0.0, 0.0});

    s.schedules["conveyor_m1"] = Schedule::sinusoid(1.0, omega, 0.0);
    s.schedules["conveyor_m2"] = Schedule::sinusoid(1.0, omega, 0.5 * kPi);

    auto addMeander = [&](double x0, const std::string& scheduleId) {
        std::vector<Vec3> pts;
        double x = x0 - 0.5 * periods * pitch;
        double side = -1.0;
        pts.push_back({x, side * amplitude, -depth});
        for (int j = 0; j < 2 * periods; ++j) {
            pts.push_back({x, -side * amplitude, -depth});
            side = -side;
            x += 0.5 * pitch;
            pts.push_back({x, side * amplitude, -depth});
        }
        addPath(s, pts, modCurrent, scheduleId);
    };
    addMeander(0.0, "conveyor_m1");
    addMeander(0.25 * pitch, "conveyor_m2");
    return s;
}

Scene wlIoffe(const PresetParams& p, char variant) {
    const std::string kind = std::string("wl_ioffe_") + variant;
    const int segments = static_cast<int>(optional(p, "segments", 64.0));
    Scene s;
    switch (variant) {
        case 'a':
            for (int i = 1; i <= 3; ++i) {
                const std::string idx = std::to_string(i);
                addHalfLoop(s, requirePositive(p, kind, "radius_" + idx),
                            require(p, kind, "current_" + idx), segments);
            }
            break;
        case 'b':
            for (int i = 1; i <= 2; ++i) {
                const std::string idx = std::to_string(i);
                addHalfLoop(s, requirePositive(p, kind, "radius_" + idx),
                            require(p, kind, "current_" + idx), segments);
            }
            addUniformBias(s, biasFromParams(p));
            break;
        case 'c':
            addHalfLoop(s, requirePositive(p, kind, "radius_1"), require(p, kind, "current_1"),
                        segments);
            addFullLoop(s, requirePositive(p, kind, "radius_2"), require(p, kind, "current_2"),
                        segments);
            addUniformBias(s, biasFromParams(p));
            break;
        case 'd': {
            addFullLoop(s, requirePositive(p, kind, "radius_1"), require(p, kind, "current_1"),
                        segments);
            addFullLoop(s, requirePositive(p, kind, "radius_2"), require(p, kind, "current_2"),
                        segments);
            addUniformBias(s, biasFromParams(p));
            const double rb = requirePositive(p, kind, "bar_distance");
            const double ib = require(p, kind, "bar_current");
            const double lb = optional(p, "bar_length", 10.0 * rb);
            // Four external bars along z form the transverse 2D quadrupole.
            addPath(s, {{+rb, 0.0, -0.5 * lb}, {+rb, 0.0, +0.5 * lb}}, ib);
            addPath(s, {{-rb, 0.0, -0.5 * lb}, {-rb, 0.0, +0.5 * lb}}, ib);
            addPath(s, {{0.0, +rb, -0.5 * lb}, {0.0, +rb, +0.5 * lb}}, -ib);
            addPath(s, {{0.0, -rb, -0.5 * lb}, {0.0, -rb, +0.5 * lb}}, -ib);
            break;
        }
        default:
            throw PresetError("unknown Ioffe loop variant");
    }
    return s;
}

Scene chargedWireOnMirror(const PresetParams& p) {
    const std::string kind = "charged_wire_on_mirror";
    const double density = require(p, kind, "density");
    const double length = optional(p, "length", 0.1);
    const double radius = optional(p, "physical_radius", 0.25e-6);
    const double v0 = requirePositive(p, kind, "barrier_amplitude");
    const double kappa = requirePositive(p, kind, "decay_constant");

    Scene s;
    LineCharge lc;
    lc.start = {-0.5 * length, 0.0, 0.0};
    lc.end = {+0.5 * length, 0.0, 0.0};
    lc.density_start = lc.density_end = density;
    lc.physical_radius = radius;
    s.line_charges.push_back(lc);
    s.mirror = MirrorPlane{0.0, v0, kappa};
    return s;
}

Scene ringQuadrupole(const PresetParams& p) {
    // Straight wire on the axis of a quadrupole bias field: ring trap.
    const std::string kind = "ring_quadrupole";
    const double current = require(p, kind, "current");
    const double gradient = requirePositive(p, kind, "gradient");
    const double length = optional(p, "length", 1.0);
    const double height = optional(p, "center_height", 0.0);

    Scene s;
    addPath(s, {{0.0, 0.0, height - 0.5 * length}, {0.0, 0.0, height + 0.5 * length}}, current);
    s.bias_fields.push_back(
        BiasField::quadrupole(gradient, {0.0, 0.0, height}, {0.0, 0.0, 1.0}));
    return s;
}

}  // namespace

Scene buildPreset(const std::string& kind, const PresetParams& params) {
    Scene s;
    if (kind == "side_guide")
        s = sideGuide(params);
    else if (kind == "two_wire_counter")
        s = twoWire(params, true);
    else if (kind == "two_wire_co")
        s = twoWire(params, false);
    else if (kind == "u_trap")
        s = bentWireTrap(params, false);
    else if (kind == "z_trap")
        s = bentWireTrap(params, true);
    else if (kind == "h_trap")
        s = crossedWires(params, true);
    else if (kind == "crossed_wires")
        s = crossedWires(params, false);
    else if (kind == "y_splitter")
        s = ySplitter(params);
    else if (kind == "x_splitter")
        s = xSplitter(params);
    else if (kind == "conveyor")
        s = conveyor(params);
    else if (kind == "wl_ioffe_a")
        s = wlIoffe(params, 'a');
    else if (kind == "wl_ioffe_b")
        s = wlIoffe(params, 'b');
    else if (kind == "wl_ioffe_c")
        s = wlIoffe(params, 'c');
    else if (kind == "wl_ioffe_d")
        s = wlIoffe(params, 'd');
    else if (kind == "charged_wire_on_mirror")
        s = chargedWireOnMirror(params);
    else if (kind == "ring_quadrupole")
        s = ringQuadrupole(params);
    else
        throw PresetError("unknown preset kind: " + kind);

    s.gravity_enabled = optional(params, "gravity", 0.0) != 0.0;
    s.preset = PresetInfo{kind, params};
    const auto diags = validateScene(s);
    if (!diags.empty())
        throw PresetError("preset '" + kind + "' produced an invalid scene: " + diags.front().message);
    return s;
}

std::vector<std::string> presetKinds() {
    return {"side_guide",   "two_wire_counter", "two_wire_co", "u_trap",
            "z_trap",       "h_trap",           "crossed_wires", "y_splitter",
            "x_splitter",   "conveyor",         "wl_ioffe_a",  "wl_ioffe_b",
            "wl_ioffe_c",   "wl_ioffe_d",       "charged_wire_on_mirror",
            "ring_quadrupole"};
}

}  // namespace atomchip
