#include "atomchip/trap.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "atomchip/constants.hpp"
#include "atomchip/errors.hpp"

namespace atomchip {
namespace {

namespace k = constants;

constexpr double kGolden = 0.6180339887498949;

double clampedClearance(const PotentialModel& model, const Vec3& p) {
    const double c = model.clearance(p);
    if (!std::isfinite(c)) return 1.0e-3;
    return std::max(c, 1.0e-9);
}

double fdStep(const PotentialModel& model, const Vec3& p, double step) {
    if (step > 0.0) return step;
    return std::max(1.0e-9, std::min(1.0e-3, 1.0e-4 * clampedClearance(model, p)));
}

Vec3 numericGradient(const PotentialModel& model, const Vec3& p, double t, double h) {
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
        Vec3 dp = p, dm = p;
        dp[i] += h;
        dm[i] -= h;
        g[i] = (model.energy(dp, t) - model.energy(dm, t)) / (2.0 * h);
    }
    return g;
}

/// Golden-section minimization of a 1D slice; tolerant of the conical kinks
/// of |B| at quadrupole zeros.
double goldenMinimize(const std::function<double(double)>& f, double lo, double hi,
                      double tol) {
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

double goldenMaximize(const std::function<double(double)>& f, double lo, double hi,
                      double tol) {
    return goldenMinimize([&](double x) { return -f(x); }, lo, hi, tol);
}

struct EigenSystem {
    std::array<double, 3> values{};  // descending
    std::array<Vec3, 3> vectors{};
};

EigenSystem symmetricEigen(const Mat3& m) {
    Eigen::Matrix3d em;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) em(i, j) = m(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(em);
    EigenSystem out;
    // Eigen sorts ascending; report descending.
    for (int i = 0; i < 3; ++i) {
        out.values[i] = solver.eigenvalues()(2 - i);
        const auto v = solver.eigenvectors().col(2 - i);
        out.vectors[i] = {v(0), v(1), v(2)};
    }
    return out;
}

bool sceneHasZeeman(const PotentialModel& model) {
    if (!model.scene) return false;
    for (const auto& term : model.terms)
        if (term.enabled && term.kind == PotentialTerm::Kind::Zeeman) return true;
    return false;
}

/// Cyclic coordinate descent with a shrinking golden-section bracket.
Vec3 coordinateDescent(const PotentialModel& model, Vec3 x, double t, double span,
                       double posTol) {
    while (span > posTol) {
        for (int axis = 0; axis < 3; ++axis) {
            auto slice = [&](double u) {
                Vec3 p = x;
                p[axis] += u;
                return model.energy(p, t);
            };
            const double u = goldenMinimize(slice, -span, span, 0.02 * span + 0.25 * posTol);
            x[axis] += u;
        }
        span *= 0.4;
    }
    return x;
}

}  // namespace

GradHessian energyGradHessian(const PotentialModel& model, const Vec3& point, double t,
                              double step) {
    const double h = fdStep(model, point, step);
    const double f0 = model.energy(point, t);
    GradHessian out;
    double fp[3], fm[3], fp2[3], fm2[3];
    for (int i = 0; i < 3; ++i) {
        Vec3 d;
        d[i] = h;
        fp[i] = model.energy(point + d, t);
        fm[i] = model.energy(point - d, t);
        d[i] = 0.5 * h;
        fp2[i] = model.energy(point + d, t);
        fm2[i] = model.energy(point - d, t);
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
                return (model.energy(dpp, t) - model.energy(dpm, t) - model.energy(dmp, t) +
                        model.energy(dmm, t)) /
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

std::vector<Vec3> analyticSeed(const Scene& scene) {
    const double mu2pi = k::kMu0Over2Pi;
    if (scene.preset) {
        const auto& info = *scene.preset;
        auto param = [&](const std::string& name, double fallback = 0.0) {
            const auto it = info.params.find(name);
            return it == info.params.end() ? fallback : it->second;
        };
        const std::string& kind = info.kind;
        if (kind == "side_guide" || kind == "conveyor" || kind == "crossed_wires" ||
            kind == "h_trap" || kind == "y_splitter") {
            const double r0 = mu2pi * param("current") / param("bias", 1.0);
            return {{0.0, 0.0, r0}};
        }
        if (kind == "u_trap" || kind == "z_trap") {
            const double r0 = mu2pi * param("current") / param("bias", 1.0);
            return {{0.0, 0.0, r0}, {0.0, -0.3 * r0, r0}};
        }
        if (kind == "two_wire_counter") {
            const double d = param("separation");
            const double arg =
                (2.0 * k::kMu0 / k::kPi) * param("current") / (d * param("bias", 1.0)) - 1.0;
            if (arg > 0.0) return {{0.0, 0.0, 0.5 * d * std::sqrt(arg)}};
            // Bias beyond the critical field: a side guide next to each wire.
            const double r1 = mu2pi * param("current") / param("bias", 1.0);
            return {{0.0, +0.5 * d + r1, 0.0},
                    {0.0, +0.5 * d - r1, 0.0},
                    {0.0, -0.5 * d - r1, 0.0},
                    {0.0, -0.5 * d + r1, 0.0}};
        }
        if (kind == "two_wire_co" || kind == "x_splitter") {
            const double d = param("separation", param("closest_separation"));
            const double ds = mu2pi * param("current") / param("bias", 1.0);
            if (0.5 * d < ds) {
                const double root = std::sqrt(std::max(ds * ds - 0.25 * d * d, 0.0));
                return {{0.0, 0.0, ds + root}, {0.0, 0.0, std::max(ds - root, 0.05 * ds)}};
            }
            return {{0.0, +0.5 * d, ds}, {0.0, -0.5 * d, ds}};
        }
        if (kind == "ring_quadrupole") {
            const double rho = std::sqrt(mu2pi * std::abs(param("current")) / param("gradient"));
            const double zc = param("center_height", 0.0);
            return {{rho, 0.0, zc}, {-rho, 0.0, zc}};
        }
    }
    // Coarse |B| grid scan for free-form scenes.
    Vec3 lo{1e9, 1e9, 1e9}, hi{-1e9, -1e9, -1e9};
    auto grow = [&](const Vec3& p) {
        for (int i = 0; i < 3; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    };
    for (const auto& w : scene.wires) {
        grow(w.start);
        grow(w.end);
    }
    for (const auto& lc : scene.line_charges) {
        grow(lc.start);
        grow(lc.end);
    }
    if (lo.x > hi.x) return {};
    const double extent = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 1e-4});
    const int n = 15;
    struct Cell {
        Vec3 p;
        double b;
    };
    std::vector<Cell> cells;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            for (int iz = 1; iz <= n; ++iz) {
                Vec3 p{lo.x + (hi.x - lo.x) * ix / (n - 1.0),
                       lo.y + (hi.y - lo.y) * iy / (n - 1.0),
                       0.02 * extent * iz};
                try {
                    cells.push_back({p, sceneB(scene, p, 0.0).norm()});
                } catch (const SingularityError&) {
                }
            }
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.b < b.b; });
    std::vector<Vec3> seeds;
    for (const auto& c : cells) {
        bool fresh = true;
        for (const auto& s : seeds)
            if ((s - c.p).norm() < 0.1 * extent) fresh = false;
        if (fresh) seeds.push_back(c.p);
        if (seeds.size() >= 8) break;
    }
    return seeds;
}

Vec3 findMinimum(const PotentialModel& model, const Vec3& seed, const MinimizeOptions& opts) {
    const double t = opts.t;
    const double u0 = model.energy(seed, t);
    if (!std::isfinite(u0)) throw ConvergenceError("potential not finite at seed");

    const double step0 = opts.initial_step > 0.0
                             ? opts.initial_step
                             : std::clamp(0.05 * clampedClearance(model, seed), 1e-9, 1e-4);

    // Quasi-Newton descent (BFGS on the inverse Hessian).
    Vec3 x = seed;
    const double h = fdStep(model, x, 0.0);
    Vec3 g = numericGradient(model, x, t, h);
    const double g0norm = g.norm();
    Eigen::Matrix3d H = Eigen::Matrix3d::Identity();
    if (g0norm > 0.0) H *= step0 / g0norm;

    double lastStep = step0;
    int stalls = 0;
    for (int iter = 0; iter < opts.max_iterations && stalls < 3; ++iter) {
        const Eigen::Vector3d ge(g.x, g.y, g.z);
        Eigen::Vector3d de = -H * ge;
        Vec3 d{de(0), de(1), de(2)};
        double dnorm = d.norm();
        if (dnorm == 0.0) break;
        const double maxStep = 0.5 * clampedClearance(model, x);
        if (dnorm > maxStep) {
            d *= maxStep / dnorm;
            dnorm = maxStep;
        }
        const double slope = g.dot(d);
        double alpha = 1.0;
        const double fx = model.energy(x, t);
        bool accepted = false;
        for (int ls = 0; ls < 25; ++ls) {
            Vec3 xn = x + d * alpha;
            double fn;
            try {
                fn = model.energy(xn, t);
            } catch (const SingularityError&) {
                alpha *= 0.3;
                continue;
            }
            if (fn <= fx + 1e-4 * alpha * slope || fn < fx) {
                const Vec3 gn = numericGradient(model, xn, t, fdStep(model, xn, 0.0));
                const Vec3 s = xn - x;
                const Vec3 yv = gn - g;
                const double sy = s.dot(yv);
                if (sy > 1e-30) {
                    const Eigen::Vector3d se(s.x, s.y, s.z), ye(yv.x, yv.y, yv.z);
                    const double rho = 1.0 / sy;
                    const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
                    H = (I - rho * se * ye.transpose()) * H * (I - rho * ye * se.transpose()) +
                        rho * se * se.transpose();
                }
                lastStep = s.norm();
                x = xn;
                g = gn;
                accepted = true;
                break;
            }
            alpha *= 0.3;
        }
        if (!accepted) {
            ++stalls;
            H = Eigen::Matrix3d::Identity() * (0.1 * lastStep / std::max(g.norm(), 1e-300));
        } else if (lastStep < 32.0 * opts.position_tol ||
                   g.norm() < 1e-9 * g0norm + 1e-40) {
            break;
        }
    }

    // Golden-section polish; also the workhorse near quadrupole zeros where
    // the modulus has a cone and Newton steps thrash.
    const double span = std::max(64.0 * opts.position_tol, std::min(4.0 * lastStep, step0));
    x = coordinateDescent(model, x, t, span, opts.position_tol);

    if (!std::isfinite(model.energy(x, t)))
        throw ConvergenceError("minimizer left the valid domain");
    return x;
}

namespace {

struct RayResult {
    double barrier = -std::numeric_limits<double>::infinity();
    double barrier_r = 0.0;
    double end_u = 0.0;
    bool hit_boundary = false;  // surface or conductor terminated the ray
    std::vector<std::pair<double, double>> samples;  // (r, U)
};

RayResult marchRay(const PotentialModel& model, const Vec3& origin, const Vec3& dir, double t,
                   double h0, double rMax) {
    RayResult out;
    const bool hasScene = model.scene != nullptr;
    const double zFloor = model.surfaceHeight();
    double r = h0;
    double rPrev = 0.0;
    while (r <= rMax) {
        Vec3 p = origin + dir * r;
        if (hasScene) {
            if (p.z < zFloor || model.scene->conductorClearance(p) <= 0.0) {
                // Bisect to the crossing point and record the potential there.
                double lo = rPrev, hi = r;
                for (int i = 0; i < 40; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    const Vec3 pm = origin + dir * mid;
                    const bool inside =
                        pm.z < zFloor || model.scene->conductorClearance(pm) <= 0.0;
                    (inside ? hi : lo) = mid;
                }
                const double rc = lo;
                if (rc > 0.0) {
                    try {
                        const double uc = model.energy(origin + dir * rc, t);
                        out.samples.emplace_back(rc, uc);
                        if (uc > out.barrier) {
                            out.barrier = uc;
                            out.barrier_r = rc;
                        }
                        out.end_u = uc;
                    } catch (const SingularityError&) {
                    }
                }
                out.hit_boundary = true;
                return out;
            }
        }
        double u;
        try {
            u = model.energy(p, t);
        } catch (const SingularityError&) {
            out.hit_boundary = true;
            return out;
        }
        out.samples.emplace_back(r, u);
        out.end_u = u;
        if (u > out.barrier) {
            out.barrier = u;
            out.barrier_r = r;
        }
        rPrev = r;
        r *= 1.2;
    }
    return out;
}

std::vector<Vec3> fanDirections() {
    std::vector<Vec3> dirs;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int l = -1; l <= 1; ++l) {
                if (i == 0 && j == 0 && l == 0) continue;
                dirs.push_back(Vec3(i, j, l).normalized());
            }
    return dirs;
}

}  // namespace

DepthResult trapDepth(const PotentialModel& model, const Vec3& position, double t) {
    const double u0 = model.energy(position, t);
    const double scale = clampedClearance(model, position);
    const double h0 = scale / 64.0;
    // Rays have to clear the whole wire layout: past the conductor ends the
    // asymptotic (bias-only) potential is the relevant escape level.
    double extent = 0.0;
    if (model.scene) {
        for (const auto& w : model.scene->wires) {
            extent = std::max(extent, (w.start - position).norm());
            extent = std::max(extent, (w.end - position).norm());
        }
        for (const auto& lc : model.scene->line_charges) {
            extent = std::max(extent, (lc.start - position).norm());
            extent = std::max(extent, (lc.end - position).norm());
        }
    }
    const double rMax = model.scene ? std::max(2000.0 * scale, 3.0 * extent) : 1.0e7 * h0;

    DepthResult best;
    best.depth = std::numeric_limits<double>::infinity();
    RayResult bestRay;

    const double uTiny = 1e-9 * std::abs(u0) + 1e-40;
    auto consider = [&](const Vec3& dir) {
        const RayResult ray = marchRay(model, position, dir, t, h0, rMax);
        if (!std::isfinite(ray.barrier)) return;
        const double depth = ray.barrier - u0;
        if (depth < best.depth) {
            best.depth = depth;
            best.escape_direction = dir;
            best.barrier_position = position + dir * ray.barrier_r;
            // No climb along this ray: the domain edge sets the depth.
            best.unbounded = !ray.hit_boundary && ray.barrier <= u0 + uTiny;
            bestRay = ray;
        }
    };

    for (const auto& dir : fanDirections()) consider(dir);

    // Angular refinement of the escape direction at three resolutions.
    for (const double angle : {10.0, 4.0, 1.5}) {
        const double tanA = std::tan(angle * k::kPi / 180.0);
        const Vec3 d0 = best.escape_direction;
        Vec3 ref{0.0, 0.0, 1.0};
        if (std::abs(d0.dot(ref)) > 0.9) ref = {1.0, 0.0, 0.0};
        const Vec3 e1 = d0.cross(ref).normalized();
        const Vec3 e2 = d0.cross(e1);
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                if (a == 0 && b == 0) continue;
                consider((d0 + (e1 * double(a) + e2 * double(b)) * tanA).normalized());
            }
    }

    // Refine the barrier location along the winning ray.
    if (!bestRay.samples.empty() && !best.unbounded) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < bestRay.samples.size(); ++i)
            if (bestRay.samples[i].second > bestRay.samples[idx].second) idx = i;
        if (idx > 0 && idx + 1 < bestRay.samples.size()) {
            const double lo = bestRay.samples[idx - 1].first;
            const double hi = bestRay.samples[idx + 1].first;
            const Vec3 dir = best.escape_direction;
            auto along = [&](double r) { return model.energy(position + dir * r, t); };
            const double rStar = goldenMaximize(along, lo, hi, 1e-4 * (hi - lo));
            const double uStar = along(rStar);
            if (uStar > bestRay.samples[idx].second) {
                best.depth = uStar - u0;
                best.barrier_position = position + dir * rStar;
            }
        }
    }

    if (best.unbounded) best.depth = bestRay.end_u - u0;
    return best;
}

TrapReport characterize(const PotentialModel& model, const Vec3& position, double t) {
    TrapReport report;
    report.position = position;
    report.height_h = position.z;

    const bool hasField = sceneHasZeeman(model);
    if (hasField) report.b_min = sceneB(*model.scene, position, t).norm();

    const bool quadrupole = hasField && report.b_min < kZeroFieldThreshold;
    report.classification = quadrupole ? TrapClass::QuadrupoleZero
                            : hasField ? TrapClass::IoffePritchard
                                       : TrapClass::Unresolved;

    if (!quadrupole) {
        const GradHessian gh = energyGradHessian(model, position, t);
        const EigenSystem es = symmetricEigen(gh.hessian);
        const double lamScale = std::max(std::abs(es.values[0]), std::abs(es.values[2]));
        if (es.values[2] < -1e-4 * lamScale)
            throw SaddlePointError("position is a saddle of the potential, not a minimum");
        for (int i = 0; i < 3; ++i) {
            report.frequencies[i] = std::sqrt(std::max(es.values[i], 0.0) / model.atom.mass);
            report.principal_axes[i] = es.vectors[i];
        }
    }

    // Linear |B| slope outside the harmonic bottom, from
    // sqrt(B(delta)^2 - Bmin^2)/delta along the coordinate axes.
    if (hasField) {
        const double delta = std::clamp(0.02 * clampedClearance(model, position), 1e-8, 1e-4);
        double gBest = 0.0;
        for (int axis = 0; axis < 3; ++axis) {
            double acc = 0.0;
            for (const double sgn : {-1.0, 1.0}) {
                Vec3 p = position;
                p[axis] += sgn * delta;
                const double b = sceneB(*model.scene, p, t).norm();
                acc += std::sqrt(std::max(b * b - report.b_min * report.b_min, 0.0)) / delta;
            }
            gBest = std::max(gBest, 0.5 * acc);
        }
        report.grad_at_edge = gBest;
    }

    const DepthResult depth = trapDepth(model, position, t);
    report.depth = depth.depth;
    report.depth_mK = depth.depth / k::kBoltzmann * 1e3;
    report.depth_unbounded = depth.unbounded;

    report.larmor = model.atom.muParallel() * report.b_min / k::kHbar;
    const double omegaMax = report.frequencies[0];
    report.adiabaticity = omegaMax > 0.0 ? report.larmor / omegaMax : 0.0;
    if (omegaMax > 0.0) {
        report.gs_size_table = std::sqrt(k::kHbar / (model.atom.mass * omegaMax));
        report.gs_size_ho = std::sqrt(k::kHbar / (2.0 * model.atom.mass * omegaMax));
        report.gs_freq = omegaMax / (2.0 * k::kPi);
    }
    return report;
}

SplitDiagnosis twoWireDiagnose(const Scene& scene) {
    if (!scene.preset ||
        (scene.preset->kind != "two_wire_co" && scene.preset->kind != "x_splitter"))
        throw PresetError("two_wire_diagnose requires a co-propagating two-wire scene");
    const auto& params = scene.preset->params;
    auto param = [&](const std::string& name) {
        const auto it = params.find(name);
        if (it == params.end())
            throw PresetError("two-wire scene is missing parameter " + name);
        return it->second;
    };
    const double current = param("current");
    const double bias = param("bias");
    const double d = scene.preset->kind == "two_wire_co" ? param("separation")
                                                         : param("closest_separation");

    SplitDiagnosis diag;
    diag.d_split = k::kMu0Over2Pi * current / bias;
    const double rel = (0.5 * d - diag.d_split) / diag.d_split;
    if (std::abs(rel) < 1e-3)
        diag.regime = SplitRegime::MergedHarmonic;
    else if (rel < 0.0)
        diag.regime = SplitRegime::TwoVertical;
    else
        diag.regime = SplitRegime::TwoHorizontal;

    // Locate the minima numerically with a unit weak-field seeker.
    AtomSpecies probe;
    probe.name = "probe";
    probe.mass = k::kAtomicMassUnit;
    probe.f_total = 1.0;
    probe.m_f = 1.0;
    probe.g_f = 1.0;
    PotentialModel model = makeZeemanModel(scene, probe);

    std::vector<Vec3> found;
    for (const auto& seed : analyticSeed(scene)) {
        try {
            const Vec3 m = findMinimum(model, seed);
            bool fresh = true;
            for (const auto& other : found)
                if ((other - m).norm() < 1e-3 * diag.d_split) fresh = false;
            if (fresh) found.push_back(m);
        } catch (const ConvergenceError&) {
        }
    }
    std::sort(found.begin(), found.end(), [](const Vec3& a, const Vec3& b) {
        return a.z < b.z || (a.z == b.z && a.y < b.y);
    });
    diag.minima_positions = found;

    // The numerically located minima have to match the declared regime.
    const double tol = 0.05 * diag.d_split;
    bool consistent = true;
    switch (diag.regime) {
        case SplitRegime::TwoVertical:
            consistent = found.size() == 2 && std::abs(found[0].y) < tol &&
                         std::abs(found[1].y) < tol && (found[1].z - found[0].z) > tol;
            break;
        case SplitRegime::MergedHarmonic:
            consistent = found.size() >= 1 &&
                         std::abs(found.front().z - diag.d_split) < 0.05 * diag.d_split;
            break;
        case SplitRegime::TwoHorizontal:
            consistent = found.size() == 2 && found[0].y < -tol && found[1].y > tol;
            break;
    }
    if (!consistent)
        throw ConvergenceError("two-wire minima arrangement does not match the regime");
    return diag;
}

std::vector<GuideScanRecord> guideScan(const PotentialModel& model, const GuidePath& path,
                                       double t) {
    std::vector<GuideScanRecord> records;
    if (path.samples < 1) return records;

    // Transverse frame.
    const Vec3 u = path.axis.normalized();
    Vec3 ref{0.0, 0.0, 1.0};
    if (std::abs(u.dot(ref)) > 0.9) ref = {0.0, 1.0, 0.0};
    const Vec3 e1 = u.cross(ref).normalized();
    const Vec3 e2 = u.cross(e1);

    const double window =
        path.window > 0.0 ? path.window
                          : 3.0 * std::max({std::abs(path.transverse_seed.x),
                                            std::abs(path.transverse_seed.y),
                                            std::abs(path.transverse_seed.z), 10e-6});

    auto toPoint = [&](double s, double a, double b) {
        return path.origin + u * s + e1 * a + e2 * b;
    };

    std::pair<double, double> prev{path.transverse_seed.dot(e1), path.transverse_seed.dot(e2)};
    bool prevValid = true;

    for (int i = 0; i < path.samples; ++i) {
        const double s = path.samples == 1 ? path.s_begin
                                           : path.s_begin + (path.s_end - path.s_begin) * i /
                                                                (path.samples - 1.0);
        GuideScanRecord rec;
        rec.s = s;

        auto energyAt = [&](double a, double b) -> double {
            try {
                return model.energy(toPoint(s, a, b), t);
            } catch (const SingularityError&) {
                return std::numeric_limits<double>::infinity();
            }
        };

        // Coarse transverse grid to find all candidate basins.
        const int n = 25;
        std::vector<std::vector<double>> grid(n, std::vector<double>(n));
        const double zFloor = model.surfaceHeight();
        for (int ia = 0; ia < n; ++ia)
            for (int ib = 0; ib < n; ++ib) {
                const double a = -window + 2.0 * window * ia / (n - 1.0);
                const double b = -window + 2.0 * window * ib / (n - 1.0);
                const Vec3 p = toPoint(s, a, b);
                grid[ia][ib] = (p.z <= zFloor && model.scene)
                                   ? std::numeric_limits<double>::infinity()
                                   : energyAt(a, b);
            }
        std::vector<std::pair<double, double>> candidates;
        for (int ia = 1; ia + 1 < n; ++ia)
            for (int ib = 1; ib + 1 < n; ++ib) {
                const double v = grid[ia][ib];
                if (!std::isfinite(v)) continue;
                bool isMin = true;
                for (int da = -1; da <= 1 && isMin; ++da)
                    for (int db = -1; db <= 1; ++db) {
                        if (da == 0 && db == 0) continue;
                        if (grid[ia + da][ib + db] < v) {
                            isMin = false;
                            break;
                        }
                    }
                if (isMin)
                    candidates.emplace_back(-window + 2.0 * window * ia / (n - 1.0),
                                            -window + 2.0 * window * ib / (n - 1.0));
            }
        if (prevValid) candidates.push_back(prev);

        // Refine candidates by 2D coordinate descent and deduplicate.
        std::vector<std::pair<std::pair<double, double>, double>> minima;
        for (auto [a0, b0] : candidates) {
            double a = a0, b = b0;
            double span = window / (n - 1.0) * 2.0;
            while (span > 1e-12) {
                a = goldenMinimize([&](double aa) { return energyAt(aa, b); }, a - span,
                                   a + span, 0.02 * span);
                b = goldenMinimize([&](double bb) { return energyAt(a, bb); }, b - span,
                                   b + span, 0.02 * span);
                span *= 0.4;
            }
            if (std::abs(a) > window || std::abs(b) > window) continue;
            const double uv = energyAt(a, b);
            if (!std::isfinite(uv)) continue;
            bool fresh = true;
            for (auto& m : minima)
                if (std::hypot(m.first.first - a, m.first.second - b) < window * 5e-3) {
                    fresh = false;
                    if (uv < m.second) m = {{a, b}, uv};
                }
            if (fresh) minima.push_back({{a, b}, uv});
        }
        std::sort(minima.begin(), minima.end(),
                  [](const auto& x, const auto& y) { return x.second < y.second; });

        if (minima.empty()) {
            rec.found = false;
            prevValid = false;
            records.push_back(rec);
            continue;
        }

        // Follow the branch continuing the previous sample where possible.
        std::size_t pick = 0;
        if (prevValid) {
            double bestDist = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < minima.size(); ++m) {
                const double dist = std::hypot(minima[m].first.first - prev.first,
                                               minima[m].first.second - prev.second);
                if (dist < bestDist) {
                    bestDist = dist;
                    pick = m;
                }
            }
        }
        const auto [amin, bmin] = minima[pick].first;
        rec.found = true;
        rec.minimum = toPoint(s, amin, bmin);
        rec.u_min = minima[pick].second;
        prev = {amin, bmin};
        prevValid = true;
        for (const auto& m : minima)
            rec.minima.push_back(toPoint(s, m.first.first, m.first.second));

        // Transverse curvature -> frequencies.
        const double h = std::max(1e-9, 1e-3 * window);
        const double f0 = energyAt(amin, bmin);
        const double faa =
            (energyAt(amin + h, bmin) - 2.0 * f0 + energyAt(amin - h, bmin)) / (h * h);
        const double fbb =
            (energyAt(amin, bmin + h) - 2.0 * f0 + energyAt(amin, bmin - h)) / (h * h);
        const double fab = (energyAt(amin + h, bmin + h) - energyAt(amin + h, bmin - h) -
                            energyAt(amin - h, bmin + h) + energyAt(amin - h, bmin - h)) /
                           (4.0 * h * h);
        const double tr = faa + fbb;
        const double det = faa * fbb - fab * fab;
        const double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
        const double l1 = 0.5 * tr + disc;
        const double l2 = 0.5 * tr - disc;
        rec.f_perp = std::sqrt(std::max(l1, 0.0) / model.atom.mass) / (2.0 * k::kPi);
        rec.f_perp_2 = std::sqrt(std::max(l2, 0.0) / model.atom.mass) / (2.0 * k::kPi);

        // Barrier toward the chip surface (straight down).
        if (model.scene) {
            const RayResult down = marchRay(model, rec.minimum, {0.0, 0.0, -1.0}, t,
                                            std::max(rec.minimum.z / 256.0, 1e-9),
                                            10.0 * std::max(rec.minimum.z, 1e-6));
            if (std::isfinite(down.barrier)) rec.barrier_to_surface = down.barrier - rec.u_min;
        }

        // Barrier between the two lowest guides, when present.
        if (minima.size() >= 2) {
            const auto [a2, b2] = minima[1].first;
            double maxU = -std::numeric_limits<double>::infinity();
            for (int q = 0; q <= 100; ++q) {
                const double w = q / 100.0;
                maxU = std::max(maxU, energyAt(amin + w * (a2 - amin), bmin + w * (b2 - bmin)));
            }
            rec.inter_guide_barrier = maxU - std::min(minima[0].second, minima[1].second);
        }
        records.push_back(rec);
    }
    return records;
}

std::string to_string(TrapClass c) {
    switch (c) {
        case TrapClass::QuadrupoleZero:
            return "quadrupole_zero";
        case TrapClass::IoffePritchard:
            return "ioffe_pritchard";
        case TrapClass::Unresolved:
            return "unresolved";
    }
    return "unresolved";
}

std::string to_string(SplitRegime r) {
    switch (r) {
        case SplitRegime::TwoVertical:
            return "two_vertical";
        case SplitRegime::MergedHarmonic:
            return "merged_harmonic";
        case SplitRegime::TwoHorizontal:
            return "two_horizontal";
    }
    return "merged_harmonic";
}

}  // namespace atomchip
