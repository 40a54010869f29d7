#include "atomchip/field.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "atomchip/constants.hpp"
#include "atomchip/errors.hpp"

namespace atomchip {
namespace {

using constants::kEpsilon0;
using constants::kMu0Over2Pi;
using constants::kPi;

constexpr double kOnAxisEps = 1.0e-15;  // m

struct SegmentFrame {
    Vec3 u;   // axis direction
    Vec3 v;   // cross-section "width" axis (horizontal where possible)
    Vec3 w;   // cross-section "thickness" axis
};

SegmentFrame segmentFrame(const Vec3& a, const Vec3& b) {
    SegmentFrame f;
    f.u = (b - a).normalized();
    Vec3 ref{0.0, 0.0, 1.0};
    if (std::abs(f.u.dot(ref)) > 0.9) ref = {1.0, 0.0, 0.0};
    f.v = f.u.cross(ref).normalized();
    f.w = f.u.cross(f.v);
    return f;
}

}  // namespace

Vec3 bSegmentThin(const Vec3& a, const Vec3& b, double current, const Vec3& point,
                  double singularRadius) {
    if (current == 0.0) return {};
    const Vec3 d = b - a;
    const double len = d.norm();
    if (len == 0.0) return {};
    const Vec3 u = d / len;
    const Vec3 ra = point - a;
    const Vec3 rb = point - b;
    const Vec3 perp = u.cross(ra);  // |perp| = distance to the segment axis
    const double rho2 = perp.squaredNorm();
    const double rho = std::sqrt(rho2);

    const double ta = u.dot(ra);
    const double tb = u.dot(rb);
    if (rho <= std::max(singularRadius, kOnAxisEps) && ta >= -singularRadius &&
        tb <= singularRadius) {
        throw SingularityError("field evaluated on a current-carrying segment");
    }
    if (rho2 == 0.0) return {};  // on the extended axis but outside the span

    const double na = ra.norm();
    const double nb = rb.norm();
    const double geom = ta / na - tb / nb;
    const double scale = 0.5 * kMu0Over2Pi * current * geom / rho2;
    return perp * scale;
}

Vec3 bSegmentThin(const WireSegment& segment, const Vec3& point) {
    return bSegmentThin(segment.start, segment.end, segment.current, point,
                        segment.collisionRadius());
}

namespace {

struct Filament {
    Vec3 offset;     // displacement of the filament from the segment axis
    double fraction; // share of the total current
};

std::vector<Filament> rectangleFilaments(const SegmentFrame& f, double width,
                                         double thickness, int n) {
    std::vector<Filament> fils;
    fils.reserve(static_cast<std::size_t>(n) * n);
    const double frac = 1.0 / (static_cast<double>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double xv = width * ((i + 0.5) / n - 0.5);
        for (int j = 0; j < n; ++j) {
            const double xw = thickness * ((j + 0.5) / n - 0.5);
            fils.push_back({f.v * xv + f.w * xw, frac});
        }
    }
    return fils;
}

// Concentric rings with area-proportional weights. The azimuthal count per
// ring is raised until the discrete ring's exterior field matches the
// continuum one at the requested evaluation distance (error ~ (s/rho)^K).
std::vector<Filament> circleFilaments(const SegmentFrame& f, double radius, int n,
                                      double evalRho) {
    std::vector<Filament> fils;
    const int rings = std::max(1, n / 4);
    double areaTotal = 0.0;
    std::vector<double> ringArea(rings);
    std::vector<double> ringRadius(rings);
    for (int m = 0; m < rings; ++m) {
        const double r0 = radius * m / rings;
        const double r1 = radius * (m + 1) / rings;
        ringRadius[m] = std::sqrt(0.5 * (r0 * r0 + r1 * r1));  // area centroid radius
        ringArea[m] = r1 * r1 - r0 * r0;
        areaTotal += ringArea[m];
    }
    for (int m = 0; m < rings; ++m) {
        const double s = ringRadius[m];
        int k = std::max(n, 8);
        if (evalRho > s) {
            const double ratio = s / evalRho;
            if (ratio > 0.0) {
                const double needed = std::ceil(-26.0 / std::log(ratio));  // ~1e-11 target
                if (std::isfinite(needed))
                    k = std::max(k, std::min(4096, static_cast<int>(needed)));
            }
        }
        const double frac = ringArea[m] / areaTotal / k;
        for (int j = 0; j < k; ++j) {
            const double phi = 2.0 * kPi * (j + 0.5) / k;
            fils.push_back({f.v * (s * std::cos(phi)) + f.w * (s * std::sin(phi)), frac});
        }
    }
    return fils;
}

bool insideCrossSection(const WireSegment& seg, const Vec3& point) {
    const SegmentFrame f = segmentFrame(seg.start, seg.end);
    const Vec3 rel = point - seg.start;
    const double along = f.u.dot(rel);
    if (along < 0.0 || along > seg.length()) return false;
    const double xv = f.v.dot(rel);
    const double xw = f.w.dot(rel);
    switch (seg.cross_section.kind) {
        case CrossSection::Kind::Rectangle:
            return std::abs(xv) <= 0.5 * seg.cross_section.width &&
                   std::abs(xw) <= 0.5 * seg.cross_section.thickness;
        case CrossSection::Kind::Circle:
            return std::hypot(xv, xw) <= seg.cross_section.radius;
        case CrossSection::Kind::Thin:
            return false;
    }
    return false;
}

}  // namespace

Vec3 bSegmentFinite(const WireSegment& segment, const Vec3& point, int nFilaments) {
    if (segment.cross_section.kind == CrossSection::Kind::Thin)
        throw PresetError("bSegmentFinite requires a rectangle or circle cross-section");
    if (nFilaments < 1) throw PresetError("nFilaments must be >= 1");
    if (insideCrossSection(segment, point))
        throw InsideConductorError("field evaluated inside the conductor volume");

    const SegmentFrame f = segmentFrame(segment.start, segment.end);
    std::vector<Filament> fils;
    if (segment.cross_section.kind == CrossSection::Kind::Rectangle) {
        fils = rectangleFilaments(f, segment.cross_section.width,
                                  segment.cross_section.thickness, nFilaments);
    } else {
        const Vec3 rel = point - segment.start;
        const double evalRho = std::hypot(f.v.dot(rel), f.w.dot(rel));
        fils = circleFilaments(f, segment.cross_section.radius, nFilaments, evalRho);
    }
    Vec3 total;
    for (const auto& fil : fils) {
        total += bSegmentThin(segment.start + fil.offset, segment.end + fil.offset,
                              segment.current * fil.fraction, point);
    }
    return total;
}

Vec3 bSegmentFiniteAuto(const WireSegment& segment, const Vec3& point, int nStart,
                        double relTol) {
    Vec3 prev = bSegmentFinite(segment, point, nStart);
    for (int n = 2 * nStart; n <= 256; n *= 2) {
        const Vec3 next = bSegmentFinite(segment, point, n);
        const double diff = (next - prev).norm();
        const double scale = std::max(next.norm(), 1e-300);
        prev = next;
        if (diff <= relTol * scale) break;
    }
    return prev;
}

Vec3 eLineSegment(const Vec3& a, const Vec3& b, double density, const Vec3& point) {
    if (density == 0.0) return {};
    const Vec3 d = b - a;
    const double len = d.norm();
    if (len == 0.0) return {};
    const Vec3 u = d / len;
    const Vec3 ra = point - a;
    const Vec3 rb = point - b;
    const double na = ra.norm();
    const double nb = rb.norm();
    if (na < kOnAxisEps || nb < kOnAxisEps)
        throw SingularityError("field evaluated on a line charge");
    const double ta = u.dot(ra);
    const double tb = u.dot(rb);
    const Vec3 perpVec = ra - u * ta;
    const double rho2 = perpVec.squaredNorm();
    const double pref = density / (4.0 * kPi * kEpsilon0);

    const double eAxial = pref * (1.0 / nb - 1.0 / na);
    Vec3 field = u * eAxial;
    if (rho2 > 0.0) {
        const double eRho = pref * (ta / na - tb / nb) / rho2;
        field += perpVec * eRho;
    } else if (ta > 0.0 && tb < 0.0) {
        throw SingularityError("field evaluated on a line charge axis");
    }
    return field;
}

Vec3 sceneB(const Scene& scene, const Vec3& point, double t) {
    Vec3 total;
    int index = 0;
    for (const auto& w : scene.wires) {
        const double amp = scene.scheduleValue(w.schedule_id, t);
        if (amp == 0.0 || w.current == 0.0) {
            ++index;
            continue;
        }
        try {
            if (w.cross_section.kind == CrossSection::Kind::Thin) {
                WireSegment ws = w;
                ws.current = w.current * amp;
                total += bSegmentThin(ws, point);
            } else {
                WireSegment ws = w;
                ws.current = w.current * amp;
                total += bSegmentFiniteAuto(ws, point);
            }
        } catch (SingularityError& e) {
            e.element_index = index;
            throw;
        }
        ++index;
    }
    for (const auto& bias : scene.bias_fields) {
        const double amp = scene.scheduleValue(bias.schedule_id, t);
        if (bias.kind == BiasField::Kind::Uniform) {
            total += bias.field * amp;
        } else {
            const Vec3 rel = point - bias.center;
            const Vec3 axial = bias.axis * rel.dot(bias.axis);
            const Vec3 perp = rel - axial;
            total += (perp - axial * 2.0) * (bias.gradient * amp);
        }
    }
    return total;
}

Vec3 sceneE(const Scene& scene, const Vec3& point, double t) {
    Vec3 total;
    int index = 0;
    for (const auto& lc : scene.line_charges) {
        const double amp = scene.scheduleValue(lc.schedule_id, t);
        try {
            if (lc.uniform()) {
                total += eLineSegment(lc.start, lc.end, lc.density_start * amp, point);
            } else {
                // Linearly varying density: subdivide into uniform pieces.
                const int n = lc.subdivisions;
                const Vec3 step = (lc.end - lc.start) / n;
                for (int i = 0; i < n; ++i) {
                    const double f0 = static_cast<double>(i) / n;
                    const double f1 = static_cast<double>(i + 1) / n;
                    const double dens =
                        0.5 * ((lc.density_start + f0 * (lc.density_end - lc.density_start)) +
                               (lc.density_start + f1 * (lc.density_end - lc.density_start)));
                    total += eLineSegment(lc.start + step * static_cast<double>(i),
                                          lc.start + step * static_cast<double>(i + 1),
                                          dens * amp, point);
                }
            }
        } catch (SingularityError& e) {
            e.element_index = index;
            throw;
        }
        ++index;
    }
    for (const auto& pc : scene.point_charges) {
        const double amp = scene.scheduleValue(pc.schedule_id, t);
        const Vec3 rel = point - pc.position;
        const double r = rel.norm();
        if (r < kOnAxisEps)
            throw SingularityError("field evaluated on a point charge");
        total += rel * (pc.charge * amp / (4.0 * kPi * kEpsilon0 * r * r * r));
    }
    return total;
}

Vec3 eField(const Scene& scene, const Vec3& point, double t) {
    return sceneE(scene, point, t);
}

namespace {

double modB(const Scene& scene, const Vec3& p, double t) {
    return sceneB(scene, p, t).norm();
}

double derivativeStep(const Scene& scene, const Vec3& point) {
    const double clearance = scene.conductorClearance(point);
    double h = 1.0e-4 * clearance;
    if (!std::isfinite(h) || h > 1.0e-3) h = 1.0e-3;
    return std::max(1.0e-9, h);
}

}  // namespace

GradHessian gradHessianModB(const Scene& scene, const Vec3& point, double t, double step) {
    const double f0 = modB(scene, point, t);
    if (f0 < kZeroFieldThreshold)
        throw AtFieldZeroError("|B| below zero threshold; modulus gradient undefined");

    const double h = step > 0.0 ? step : derivativeStep(scene, point);
    GradHessian out;

    // Axis samples at +-h and +-h/2 feed Richardson-extrapolated first and
    // second central differences.
    double fp[3], fm[3], fp2[3], fm2[3];
    for (int i = 0; i < 3; ++i) {
        Vec3 d;
        d[i] = h;
        fp[i] = modB(scene, point + d, t);
        fm[i] = modB(scene, point - d, t);
        d[i] = 0.5 * h;
        fp2[i] = modB(scene, point + d, t);
        fm2[i] = modB(scene, point - d, t);

        const double g1 = (fp[i] - fm[i]) / (2.0 * h);
        const double g2 = (fp2[i] - fm2[i]) / h;
        out.gradient[i] = (4.0 * g2 - g1) / 3.0;
        out.gradient_error[i] = std::abs(g2 - g1) / 3.0;

        const double s1 = (fp[i] - 2.0 * f0 + fm[i]) / (h * h);
        const double s2 = (fp2[i] - 2.0 * f0 + fm2[i]) / (0.25 * h * h);
        out.hessian(i, i) = (4.0 * s2 - s1) / 3.0;
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            auto cross = [&](double hh) {
                Vec3 dpp = point, dpm = point, dmp = point, dmm = point;
                dpp[i] += hh; dpp[j] += hh;
                dpm[i] += hh; dpm[j] -= hh;
                dmp[i] -= hh; dmp[j] += hh;
                dmm[i] -= hh; dmm[j] -= hh;
                return (modB(scene, dpp, t) - modB(scene, dpm, t) - modB(scene, dmp, t) +
                        modB(scene, dmm, t)) /
                       (4.0 * hh * hh);
            };
            const double c1 = cross(h);
            const double c2 = cross(0.5 * h);
            const double c = (4.0 * c2 - c1) / 3.0;
            out.hessian(i, j) = c;
            out.hessian(j, i) = c;
        }
    }
    return out;
}

FieldSample fieldTotal(const Scene& scene, const Vec3& point, double t) {
    FieldSample s;
    s.b = sceneB(scene, point, t);
    s.e = sceneE(scene, point, t);
    s.b_modulus = s.b.norm();
    if (s.b_modulus >= kZeroFieldThreshold) {
        const GradHessian gh = gradHessianModB(scene, point, t);
        s.grad_modB = gh.gradient;
        s.hessian_modB = gh.hessian;
        s.grad_error = gh.gradient_error;
    }
    return s;
}

}  // namespace atomchip
