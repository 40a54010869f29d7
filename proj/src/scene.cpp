#include "atomchip/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "atomchip/errors.hpp"

namespace atomchip {

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

Schedule Schedule::constantValue(double v) {
    Schedule s;
    s.kind = Kind::Constant;
    s.constant = v;
    return s;
}

Schedule Schedule::sinusoid(double amplitude, double omega, double phase) {
    Schedule s;
    s.kind = Kind::Sinusoid;
    s.amplitude = amplitude;
    s.angular_frequency = omega;
    s.phase = phase;
    return s;
}

Schedule Schedule::piecewiseLinear(std::vector<std::pair<double, double>> pts) {
    Schedule s;
    s.kind = Kind::Ramp;
    std::sort(pts.begin(), pts.end());
    s.ramp = std::move(pts);
    return s;
}

double Schedule::value(double t) const {
    switch (kind) {
        case Kind::Constant:
            return constant;
        case Kind::Sinusoid:
            return amplitude * std::sin(angular_frequency * t + phase);
        case Kind::Ramp: {
            if (ramp.empty()) return 0.0;
            if (t <= ramp.front().first) return ramp.front().second;
            if (t >= ramp.back().first) return ramp.back().second;
            for (std::size_t i = 1; i < ramp.size(); ++i) {
                if (t <= ramp[i].first) {
                    const auto& [t0, v0] = ramp[i - 1];
                    const auto& [t1, v1] = ramp[i];
                    const double w = (t - t0) / (t1 - t0);
                    return v0 + w * (v1 - v0);
                }
            }
            return ramp.back().second;
        }
    }
    return 0.0;
}

CrossSection CrossSection::rectangle(double w, double t) {
    CrossSection c;
    c.kind = Kind::Rectangle;
    c.width = w;
    c.thickness = t;
    return c;
}

CrossSection CrossSection::circle(double r) {
    CrossSection c;
    c.kind = Kind::Circle;
    c.radius = r;
    return c;
}

double WireSegment::collisionRadius() const {
    if (collision_radius_override) return *collision_radius_override;
    switch (cross_section.kind) {
        case CrossSection::Kind::Thin:
            return 0.5e-6;
        case CrossSection::Kind::Rectangle:
            return 0.5 * std::hypot(cross_section.width, cross_section.thickness);
        case CrossSection::Kind::Circle:
            return cross_section.radius;
    }
    return 0.5e-6;
}

BiasField BiasField::uniform(const Vec3& b) {
    BiasField f;
    f.kind = Kind::Uniform;
    f.field = b;
    return f;
}

BiasField BiasField::quadrupole(double gradient, const Vec3& center, const Vec3& axis) {
    BiasField f;
    f.kind = Kind::Quadrupole;
    f.gradient = gradient;
    f.center = center;
    f.axis = axis.normalized();
    return f;
}

double Scene::scheduleValue(const std::string& id, double t) const {
    if (id.empty()) return 1.0;
    const auto it = schedules.find(id);
    if (it == schedules.end())
        throw ConfigError("unresolved schedule id: " + id);
    return it->second.value(t);
}

namespace {

double pointSegmentDistance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double u = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + d * u)).norm();
}

}  // namespace

double Scene::conductorClearance(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : wires) {
        const double d = pointSegmentDistance(p, w.start, w.end) - w.collisionRadius();
        best = std::min(best, d);
    }
    for (const auto& lc : line_charges) {
        const double d = pointSegmentDistance(p, lc.start, lc.end) - lc.physical_radius;
        best = std::min(best, d);
    }
    return best;
}

namespace {

void checkSchedule(const Scene& scene, const std::string& id, const std::string& owner,
                   std::vector<Diagnostic>& out) {
    if (id.empty()) return;
    if (scene.schedules.find(id) == scene.schedules.end())
        out.push_back({"unresolved-schedule", owner + " references unknown schedule '" + id + "'"});
}

// Two collinear segments whose spans overlap while carrying different
// currents describe a physically impossible layout.
bool collinearOverlapConflict(const WireSegment& a, const WireSegment& b) {
    const Vec3 da = a.end - a.start;
    const Vec3 db = b.end - b.start;
    const Vec3 ua = da.normalized();
    if (da.cross(db).norm() > 1e-12 * da.norm() * db.norm()) return false;
    const Vec3 off = b.start - a.start;
    if (off.cross(ua).norm() > 1e-12 * std::max(1.0, off.norm())) return false;
    // Project b's endpoints onto a's axis.
    const double la = da.norm();
    double t0 = (b.start - a.start).dot(ua);
    double t1 = (b.end - a.start).dot(ua);
    if (t0 > t1) std::swap(t0, t1);
    const double overlap = std::min(la, t1) - std::max(0.0, t0);
    if (overlap <= 1e-15) return false;
    // Signed current along a's direction.
    const double ib = b.current * (db.normalized().dot(ua) > 0 ? 1.0 : -1.0);
    return std::abs(ib - a.current) > 1e-15 * std::max(std::abs(ib), std::abs(a.current));
}

}  // namespace

std::vector<Diagnostic> validateScene(const Scene& scene) {
    std::vector<Diagnostic> diags;
    int i = 0;
    for (const auto& w : scene.wires) {
        const std::string owner = "wire[" + std::to_string(i) + "]";
        if ((w.end - w.start).norm() == 0.0)
            diags.push_back({"degenerate-segment", owner + ": start equals end"});
        if (w.cross_section.kind == CrossSection::Kind::Rectangle &&
            (w.cross_section.width <= 0.0 || w.cross_section.thickness <= 0.0))
            diags.push_back({"non-positive cross-section", owner + ": rectangle dimensions must be positive"});
        if (w.cross_section.kind == CrossSection::Kind::Circle && w.cross_section.radius <= 0.0)
            diags.push_back({"non-positive cross-section", owner + ": circle radius must be positive"});
        checkSchedule(scene, w.schedule_id, owner, diags);
        ++i;
    }
    i = 0;
    for (const auto& lc : scene.line_charges) {
        const std::string owner = "line_charge[" + std::to_string(i) + "]";
        if ((lc.end - lc.start).norm() == 0.0)
            diags.push_back({"degenerate-segment", owner + ": start equals end"});
        if (lc.physical_radius < 0.0)
            diags.push_back({"negative-radius", owner + ": physical radius must be >= 0"});
        if (lc.subdivisions < 1)
            diags.push_back({"bad-subdivision", owner + ": subdivisions must be >= 1"});
        checkSchedule(scene, lc.schedule_id, owner, diags);
        ++i;
    }
    i = 0;
    for (const auto& pc : scene.point_charges) {
        const std::string owner = "point_charge[" + std::to_string(i) + "]";
        if (!std::isfinite(pc.charge) || !std::isfinite(pc.position.x) ||
            !std::isfinite(pc.position.y) || !std::isfinite(pc.position.z))
            diags.push_back({"non-finite", owner + ": non-finite value"});
        checkSchedule(scene, pc.schedule_id, owner, diags);
        ++i;
    }
    i = 0;
    for (const auto& b : scene.bias_fields) {
        const std::string owner = "bias[" + std::to_string(i) + "]";
        if (b.kind == BiasField::Kind::Quadrupole && b.gradient <= 0.0)
            diags.push_back({"non-positive-gradient", owner + ": quadrupole gradient must be positive"});
        checkSchedule(scene, b.schedule_id, owner, diags);
        ++i;
    }
    if (scene.mirror) {
        if (scene.mirror->v0 <= 0.0)
            diags.push_back({"bad-mirror", "mirror barrier amplitude must be positive"});
        if (scene.mirror->kappa <= 0.0)
            diags.push_back({"bad-mirror", "mirror decay constant must be positive"});
    }
    if (scene.substrate) {
        const auto& s = *scene.substrate;
        if (s.temperature <= 0.0)
            diags.push_back({"bad-substrate", "substrate temperature must be positive"});
        if (s.resistivity <= 0.0)
            diags.push_back({"bad-substrate", "substrate resistivity must be positive"});
        if (s.geometry == Substrate::Geometry::Layer && s.layer_thickness <= 0.0)
            diags.push_back({"bad-substrate", "layer thickness must be positive"});
        if (s.geometry == Substrate::Geometry::Wire && s.wire_radius <= 0.0)
            diags.push_back({"bad-substrate", "substrate wire radius must be positive"});
    }
    for (const auto& [id, sched] : scene.schedules) {
        if (sched.kind == Schedule::Kind::Sinusoid && sched.angular_frequency <= 0.0)
            diags.push_back({"bad-schedule", "schedule '" + id + "': sinusoid frequency must be positive"});
    }
    for (std::size_t a = 0; a < scene.wires.size(); ++a) {
        for (std::size_t b = a + 1; b < scene.wires.size(); ++b) {
            if (collinearOverlapConflict(scene.wires[a], scene.wires[b]))
                diags.push_back({"overlapping-wires",
                                 "wires " + std::to_string(a) + " and " + std::to_string(b) +
                                     " overlap on a shared axis with conflicting currents"});
        }
    }
    return diags;
}

}  // namespace atomchip
