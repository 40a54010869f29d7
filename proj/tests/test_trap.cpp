#include <cmath>

#include "atomchip/constants.hpp"
#include "atomchip/errors.hpp"
#include "atomchip/potential.hpp"
#include "atomchip/presets.hpp"
#include "atomchip/trap.hpp"
#include "doctest.h"

using namespace atomchip;
namespace k = atomchip::constants;

namespace {

PotentialModel guideModel(const Scene& scene, const AtomSpecies& atom) {
    return makeZeemanModel(scene, atom);
}

}  // namespace

TEST_CASE("analytic seeds for the canonical guides") {
    auto sg = buildPreset("side_guide", {{"current", 1.0}, {"bias", 80e-4}});
    auto seeds = analyticSeed(sg);
    REQUIRE(seeds.size() == 1);
    CHECK(seeds[0].z == doctest::Approx(25e-6));

    auto sg2 = buildPreset("side_guide", {{"current", 0.5}, {"bias", 200e-4}});
    CHECK(analyticSeed(sg2)[0].z == doctest::Approx(5e-6));

    // Above the critical field the two-wire counter guide decouples into a
    // side guide next to each wire.
    auto tw = buildPreset("two_wire_counter",
                          {{"current", 0.1}, {"bias", 130e-4}, {"separation", 10e-6}});
    const double critical = 2.0 * k::kMu0 * 0.1 / (k::kPi * 10e-6);
    CHECK(critical == doctest::Approx(80e-4));
    seeds = analyticSeed(tw);
    REQUIRE(seeds.size() == 4);
    const double r1 = k::kMu0Over2Pi * 0.1 / 130e-4;
    CHECK(r1 == doctest::Approx(1.538e-6).epsilon(1e-3));
    CHECK(std::abs(seeds[0].y - (5e-6 + r1)) < 1e-12);

    // Below critical: a single line of minima on the symmetry axis.
    auto twLow = buildPreset("two_wire_counter",
                             {{"current", 1.0}, {"bias", 80e-4}, {"separation", 10e-6}});
    seeds = analyticSeed(twLow);
    REQUIRE(seeds.size() == 1);
    CHECK(seeds[0].z == doctest::Approx(15e-6).epsilon(1e-6));
}

TEST_CASE("find_minimum converges to the side-guide line") {
    auto scene = buildPreset("side_guide",
                             {{"current", 1.0}, {"bias", 80e-4}, {"ip_field", 2e-4}});
    const auto model = guideModel(scene, species::lithium7());
    const Vec3 m = findMinimum(model, {1e-6, 4e-6, 31e-6});
    CHECK(std::abs(m.z - 25e-6) < 1e-9);
    CHECK(std::abs(m.y) < 1e-9);

    // A seed at the analytic minimum stays put (the guide axis is flat, so
    // compare at sub-nm resolution).
    const Vec3 m2 = findMinimum(model, {0.0, 0.0, 25e-6});
    CHECK((m2 - Vec3{0.0, 0.0, 25e-6}).norm() < 1e-9);
    CHECK(std::abs(m2.z - 25e-6) < 2e-12);
}

TEST_CASE("u_trap converges to a quadrupole zero, z_trap to an Ioffe minimum") {
    auto u = buildPreset("u_trap", {{"current", 2.0}, {"bias", 20e-4}, {"bar_length", 2e-3}});
    const auto uModel = guideModel(u, species::lithium7());
    Vec3 seed = analyticSeed(u)[0];
    const Vec3 uMin = findMinimum(uModel, seed);
    auto uReport = characterize(uModel, uMin);
    CHECK(uReport.classification == TrapClass::QuadrupoleZero);
    CHECK(uReport.b_min < 1e-10);

    auto z = buildPreset("z_trap", {{"current", 2.0}, {"bias", 20e-4}, {"bar_length", 2e-3}});
    const auto zModel = guideModel(z, species::lithium7());
    const Vec3 zMin = findMinimum(zModel, analyticSeed(z)[0]);
    auto zReport = characterize(zModel, zMin);
    CHECK(zReport.classification == TrapClass::IoffePritchard);
    CHECK(zReport.b_min > 1e-5);
    for (int i = 0; i < 3; ++i) CHECK(zReport.frequencies[i] > 0.0);
    CHECK(zReport.frequencies[0] >= zReport.frequencies[1]);
    CHECK(zReport.frequencies[1] >= zReport.frequencies[2]);
}

TEST_CASE("characterize: pure quadratic bowl gives omega = sqrt(k/M) exactly") {
    const double kSpring = 2.5e-13;  // J/m^2
    PotentialModel model;
    model.atom = species::rubidium87();
    model.terms = {PotentialTerm::customTerm([kSpring](const Vec3& p, double) {
        return 0.5 * kSpring * p.squaredNorm();
    })};
    const auto report = characterize(model, {0.0, 0.0, 0.0});
    const double expected = std::sqrt(kSpring / model.atom.mass);
    for (int i = 0; i < 3; ++i)
        CHECK(report.frequencies[i] == doctest::Approx(expected).epsilon(1e-8));
    CHECK(report.gs_size_table == doctest::Approx(std::sqrt(2.0) * report.gs_size_ho));
}

TEST_CASE("characterize rejects saddles") {
    PotentialModel model;
    model.atom = species::rubidium87();
    model.terms = {PotentialTerm::customTerm([](const Vec3& p, double) {
        return 1e-13 * (p.x * p.x + p.y * p.y - p.z * p.z);
    })};
    CHECK_THROWS_AS(characterize(model, {0.0, 0.0, 0.0}), SaddlePointError);
}

TEST_CASE("trap depth: truncated harmonic bowl is exact") {
    const double kSpring = 4e-14;
    const double uWall = 3e-26;
    PotentialModel model;
    model.atom = species::lithium7();
    model.terms = {PotentialTerm::customTerm([=](const Vec3& p, double) {
        return std::min(0.5 * kSpring * p.squaredNorm(), uWall);
    })};
    const auto depth = trapDepth(model, {0.0, 0.0, 0.0});
    CHECK(depth.depth == doctest::Approx(uWall).epsilon(1e-9));
    CHECK(!depth.unbounded);
}

TEST_CASE("trap depth: side guide escapes where |B| approaches the bias") {
    auto scene = buildPreset("side_guide", {{"current", 1.0}, {"bias", 80e-4}});
    const auto model = guideModel(scene, species::lithium7());
    const Vec3 min = findMinimum(model, analyticSeed(scene)[0]);
    const auto depth = trapDepth(model, min);
    const double expected = species::lithium7().muEff() * 80e-4;
    CHECK(depth.depth == doctest::Approx(expected).epsilon(0.02));
    CHECK(depth.depth / k::kBoltzmann == doctest::Approx(5.37e-3).epsilon(0.02));
}

TEST_CASE("Table side-guide row: Li 1 A / 80 G / 2 G") {
    auto quad = buildPreset("side_guide", {{"current", 1.0}, {"bias", 80e-4}});
    auto ioffe = buildPreset("side_guide",
                             {{"current", 1.0}, {"bias", 80e-4}, {"ip_field", 2e-4}});
    const auto li = species::lithium7();
    const auto quadModel = guideModel(quad, li);
    const auto ioffeModel = guideModel(ioffe, li);

    const Vec3 pos = findMinimum(ioffeModel, analyticSeed(ioffe)[0]);
    CHECK(std::abs(pos.z - 25e-6) < 1e-9);

    const auto report = characterize(ioffeModel, pos);
    CHECK(report.gs_freq == doctest::Approx(100e3).epsilon(0.05));
    CHECK(report.gs_size_table == doctest::Approx(120e-9).epsilon(0.05));
    CHECK(report.classification == TrapClass::IoffePritchard);
    CHECK(report.larmor == doctest::Approx(k::kBohrMagneton * 2e-4 / k::kHbar).epsilon(1e-6));

    const Vec3 qpos = findMinimum(quadModel, analyticSeed(quad)[0]);
    const auto qreport = characterize(quadModel, qpos);
    CHECK(qreport.grad_at_edge == doctest::Approx(320.0).epsilon(0.02));  // 32 kG/cm
    CHECK(qreport.depth_mK == doctest::Approx(5.4).epsilon(0.02));
}

TEST_CASE("Table side-guide row: Rb 1 A / 80 G / 1 G") {
    auto ioffe = buildPreset("side_guide",
                             {{"current", 1.0}, {"bias", 80e-4}, {"ip_field", 1e-4}});
    const auto model = guideModel(ioffe, species::rubidium87());
    const Vec3 pos = findMinimum(model, analyticSeed(ioffe)[0]);
    const auto report = characterize(model, pos);
    CHECK(report.gs_freq == doctest::Approx(41e3).epsilon(0.05));
    CHECK(report.gs_size_table == doctest::Approx(53e-9).epsilon(0.05));
}

TEST_CASE("frequency scaling law over a bias grid") {
    // omega ~ (Bb/r0) sqrt(1/(M Bip)) with r0 = (mu0/2pi) I/Bb: closed form
    // from the quadrupole gradient and Ioffe bottom.
    const auto li = species::lithium7();
    for (const double bb : {40e-4, 80e-4, 160e-4}) {
        for (const double bip : {1e-4, 2e-4, 4e-4}) {
            auto scene = buildPreset("side_guide",
                                     {{"current", 1.0}, {"bias", bb}, {"ip_field", bip}});
            const auto model = guideModel(scene, li);
            const Vec3 pos = findMinimum(model, analyticSeed(scene)[0]);
            const auto report = characterize(model, pos);
            const double r0 = k::kMu0Over2Pi * 1.0 / bb;
            const double curvature = bb * bb / (r0 * r0 * bip);
            const double expected = std::sqrt(li.muEff() * curvature / li.mass);
            CHECK(report.frequencies[0] == doctest::Approx(expected).epsilon(0.03));
            CHECK(report.frequencies[1] == doctest::Approx(expected).epsilon(0.03));
        }
    }
}

TEST_CASE("current scaling at fixed bias: halving I halves r0 and doubles the gradient") {
    const auto li = species::lithium7();
    auto s1 = buildPreset("side_guide", {{"current", 1.0}, {"bias", 80e-4}});
    auto s2 = buildPreset("side_guide", {{"current", 0.5}, {"bias", 80e-4}});
    const auto m1 = guideModel(s1, li);
    const auto m2 = guideModel(s2, li);
    const Vec3 p1 = findMinimum(m1, analyticSeed(s1)[0]);
    const Vec3 p2 = findMinimum(m2, analyticSeed(s2)[0]);
    CHECK(p2.z == doctest::Approx(0.5 * p1.z).epsilon(0.01));
    const auto r1 = characterize(m1, p1);
    const auto r2 = characterize(m2, p2);
    CHECK(r2.grad_at_edge == doctest::Approx(2.0 * r1.grad_at_edge).epsilon(0.01));
}

TEST_CASE("argmin is invariant under scaling of mu_eff") {
    auto scene = buildPreset("side_guide",
                             {{"current", 1.0}, {"bias", 80e-4}, {"ip_field", 2e-4}});
    const auto strong = guideModel(scene, species::lithium7(2, 2));
    const auto weak = guideModel(scene, species::lithium7(2, 1));  // half the moment
    const Vec3 p1 = findMinimum(strong, {2e-6, -3e-6, 30e-6});
    const Vec3 p2 = findMinimum(weak, {2e-6, -3e-6, 30e-6});
    CHECK((p1 - p2).norm() < 2e-11);
}

TEST_CASE("two-wire splitting regimes and d_split self-consistency") {
    const double current = 1.0;
    const double d = 20e-6;
    // Merge condition d/2 = d_split at Bb = (mu0/2pi) I/(d/2).
    const double bMerge = k::kMu0Over2Pi * current / (0.5 * d);

    auto below = buildPreset("two_wire_co",
                             {{"current", current}, {"bias", 0.5 * bMerge}, {"separation", d}});
    auto diag = twoWireDiagnose(below);
    CHECK(diag.regime == SplitRegime::TwoVertical);
    REQUIRE(diag.minima_positions.size() == 2);
    // Two minima stacked vertically on the symmetry axis.
    CHECK(std::abs(diag.minima_positions[0].y) < 1e-7);
    CHECK(std::abs(diag.minima_positions[1].y) < 1e-7);
    const double ds = diag.d_split;
    const double root = std::sqrt(ds * ds - 0.25 * d * d);
    CHECK(diag.minima_positions[1].z == doctest::Approx(ds + root).epsilon(1e-3));
    CHECK(diag.minima_positions[0].z == doctest::Approx(ds - root).epsilon(1e-3));

    auto merged = buildPreset("two_wire_co",
                              {{"current", current}, {"bias", bMerge}, {"separation", d}});
    diag = twoWireDiagnose(merged);
    CHECK(diag.regime == SplitRegime::MergedHarmonic);
    CHECK(diag.minima_positions.front().z == doctest::Approx(diag.d_split).epsilon(1e-3));

    auto above = buildPreset("two_wire_co",
                             {{"current", current}, {"bias", 2.0 * bMerge}, {"separation", d}});
    diag = twoWireDiagnose(above);
    CHECK(diag.regime == SplitRegime::TwoHorizontal);
    REQUIRE(diag.minima_positions.size() == 2);
    CHECK(diag.minima_positions[0].y < -0.2 * d);
    CHECK(diag.minima_positions[1].y > 0.2 * d);

    auto sideGuide = buildPreset("side_guide", {{"current", 1.0}, {"bias", 80e-4}});
    CHECK_THROWS_AS(twoWireDiagnose(sideGuide), PresetError);
}

TEST_CASE("guide scan: straight guide has a flat profile") {
    auto scene = buildPreset("side_guide",
                             {{"current", 1.0}, {"bias", 80e-4}, {"ip_field", 2e-4}});
    const auto model = guideModel(scene, species::lithium7());
    GuidePath path;
    path.origin = {0.0, 0.0, 0.0};
    path.axis = {1.0, 0.0, 0.0};
    path.s_begin = -1e-3;
    path.s_end = 1e-3;
    path.samples = 9;
    path.transverse_seed = {0.0, 0.0, 25e-6};
    path.window = 60e-6;
    const auto records = guideScan(model, path);
    REQUIRE(records.size() == 9);
    const auto& first = records.front();
    for (const auto& rec : records) {
        REQUIRE(rec.found);
        CHECK(rec.u_min == doctest::Approx(first.u_min).epsilon(1e-6));
        CHECK(rec.f_perp == doctest::Approx(first.f_perp).epsilon(1e-4));
        CHECK(rec.minimum.z == doctest::Approx(first.minimum.z).epsilon(1e-6));
    }
}

TEST_CASE("guide scan: Y splitter outputs sit lower and tighter than the input") {
    auto scene = buildPreset("y_splitter", {{"current", 1.0},
                                            {"bias", 40e-4},
                                            {"ip_field", 2e-4},
                                            {"opening_half_width", 0.5e-3},
                                            {"length", 4e-3}});
    const auto model = guideModel(scene, species::lithium7());
    const double r0 = k::kMu0Over2Pi * 1.0 / 40e-4;  // input guide height, 50 um

    GuidePath path;
    path.axis = {1.0, 0.0, 0.0};
    path.s_begin = -3e-3;
    path.s_end = -1e-3;
    path.samples = 3;
    path.transverse_seed = {0.0, 0.0, r0};
    path.window = 2.5 * r0;
    const auto input = guideScan(model, path);
    REQUIRE(input.back().found);

    // Scan one output arm along its own axis.
    const Vec3 armDir = Vec3{4e-3, 0.5e-3, 0.0}.normalized();
    GuidePath armPath;
    armPath.origin = {0.0, 0.0, 0.0};
    armPath.axis = armDir;
    armPath.s_begin = 1.5e-3;
    armPath.s_end = 3.5e-3;
    armPath.samples = 3;
    armPath.transverse_seed = {0.0, 0.0, 0.5 * r0};
    armPath.window = 2.5 * r0;
    const auto output = guideScan(model, armPath);
    REQUIRE(output.back().found);

    CHECK(output.back().minimum.z < 0.75 * input.back().minimum.z);
    CHECK(output.back().f_perp > 1.5 * input.back().f_perp);

    // A fourth port appears between the arms in the splitting region.
    GuidePath splitRegion = armPath;
    splitRegion.axis = {1.0, 0.0, 0.0};
    splitRegion.s_begin = 0.4e-3;
    splitRegion.s_end = 1.2e-3;
    splitRegion.samples = 3;
    splitRegion.transverse_seed = {0.0, 0.0, r0};
    splitRegion.window = 2.0 * r0;
    const auto mid = guideScan(model, splitRegion);
    bool sawFourthPort = false;
    for (const auto& rec : mid)
        if (rec.minima.size() >= 2) sawFourthPort = true;
    CHECK(sawFourthPort);
}

TEST_CASE("guide scan: X splitter barrier vanishes at d_split") {
    const double current = 1.0;
    // Choose the bias so that d_split equals the half-separation at the waist.
    const double sClose = 30e-6;
    const double bias = k::kMu0Over2Pi * current / (0.5 * sClose);
    auto scene = buildPreset("x_splitter", {{"current", current},
                                            {"bias", bias},
                                            {"closest_separation", sClose},
                                            {"inlet_separation", 400e-6},
                                            {"length", 4e-3},
                                            {"waist_length", 0.4e-3}});
    const auto model = guideModel(scene, species::lithium7());
    GuidePath path;
    path.axis = {1.0, 0.0, 0.0};
    path.s_begin = 0.0;  // waist center
    path.s_end = 1.4e-3;
    path.samples = 6;
    path.transverse_seed = {0.0, 0.0, 0.5 * sClose};
    path.window = 300e-6;
    const auto records = guideScan(model, path);
    REQUIRE(records.front().found);

    // At the waist the two guides have merged: the inter-guide barrier is
    // zero (single minimum). Away from the waist a finite barrier grows.
    const double scale = species::lithium7().muEff() * bias;
    CHECK(records.front().inter_guide_barrier < 0.02 * scale);
    const auto& far = records.back();
    REQUIRE(far.found);
    REQUIRE(far.inter_guide_barrier >= 0.0);
    CHECK(far.inter_guide_barrier > 0.1 * scale);
}

TEST_CASE("state-dependent trap: electric barrier lowering breaks the weak state first") {
    // Side guide plus a charged electrode below the trap: the electric
    // attraction lowers the barrier to the surface. The state with the
    // smaller magnetic moment loses its barrier at a lower charge.
    auto makeScene = [](double q) {
        auto scene = buildPreset("side_guide",
                                 {{"current", 0.5}, {"bias", 20e-4}, {"ip_field", 2e-4}});
        LineCharge lc;
        lc.start = {-0.05, 0.0, -2e-6};
        lc.end = {0.05, 0.0, -2e-6};
        lc.density_start = lc.density_end = q;
        lc.physical_radius = 0.5e-6;
        scene.line_charges.push_back(lc);
        return scene;
    };
    const auto strongState = species::lithium7(2, 2);  // mu_eff = mu_B
    const auto weakState = species::lithium7(1, -1);   // mu_eff = mu_B/2

    auto barrier = [&](const AtomSpecies& atom, double q) {
        auto scene = makeScene(q);
        PotentialModel model;
        model.scene = &scene;
        model.atom = atom;
        model.terms = {PotentialTerm::zeeman(), PotentialTerm::polarization()};
        const Vec3 pos = findMinimum(model, {0.0, 0.0, 50e-6});
        double barrierU = -1e300;
        const double u0 = model.energy(pos, 0.0);
        for (double z = pos.z; z > 3e-6; z -= pos.z / 2000.0) {
            const double u = model.energy({pos.x, pos.y, z}, 0.0);
            barrierU = std::max(barrierU, u);
        }
        return barrierU - u0;
    };

    auto criticalCharge = [&](const AtomSpecies& atom) {
        double lo = 0.0, hi = 4e-9;
        REQUIRE(barrier(atom, lo) > 0.0);
        REQUIRE(barrier(atom, hi) <= 1e-30);
        for (int i = 0; i < 20; ++i) {
            const double mid = 0.5 * (lo + hi);
            (barrier(atom, mid) > 1e-30 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    const double qWeak = criticalCharge(weakState);
    const double qStrong = criticalCharge(strongState);
    CHECK(qWeak < qStrong);
}
