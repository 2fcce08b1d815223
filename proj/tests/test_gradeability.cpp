#include <doctest.h>

#include <cmath>
#include <random>

#include "mfid/error.hpp"
#include "mfid/gradeability.hpp"
#include "oracles.hpp"

using namespace mfid;
using namespace mfid::grade;

namespace {

VehicleParams to_params(const oracle::Vehicle& v) {
    return {v.m, v.wheelbase, v.l_f, v.h, v.r_w, v.T, v.G_r, v.mu};
}

// Torque comfortably above what friction can transmit.
const oracle::Vehicle kTruck{3500, 3.3, 1.6, 0.9, 0.45, 1000, 20, 0.7};

FailureMode mode_of(int oracle_mode) {
    switch (oracle_mode) {
        case 0: return FailureMode::TipOver;
        case 1: return FailureMode::TorqueLimit;
        default: return FailureMode::TractionLimit;
    }
}

DynamicParams degenerate(double T_max) {
    DynamicParams d;
    d.torque_map = TorqueMap::flat(T_max);
    d.converter_ramp = 0.0;
    d.c_f = d.c_r = 3e6;
    return d;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an mfid::Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("rigid statics on flat ground") {
    const auto p = to_params(kTruck);
    const auto v = rigid_feasibility(0.0, p);
    CHECK(v.pass);
    CHECK(v.N_f == doctest::Approx(p.m * oracle::g * p.l_r() / p.wheelbase));
    CHECK(v.N_r == doctest::Approx(p.m * oracle::g * p.l_f / p.wheelbase));
}

TEST_CASE("rigid normals match the oracle along the grade") {
    const auto p = to_params(kTruck);
    for (double g : {5.0, 20.0, 41.0, 80.0}) {
        const auto [nf, nr] = oracle::rigid_normals(kTruck, g);
        const auto v = rigid_feasibility(g, p);
        CHECK(v.N_f == doctest::Approx(nf).epsilon(1e-12));
        CHECK(v.N_r == doctest::Approx(nr).epsilon(1e-12));
        CHECK(v.N_f + v.N_r == doctest::Approx(p.m * oracle::g * std::cos(std::atan(g / 100))).epsilon(1e-12));
    }
}

TEST_CASE("rigid failure modes") {
    auto p = to_params(kTruck);
    p.mu = 10.0;
    p.h_cg = 0.3;  // keeps mu h below the wheelbase
    const double tip = 100.0 * p.l_r() / p.h_cg;
    CHECK(rigid_feasibility(tip - 0.01, p).failure_mode != std::optional(FailureMode::TipOver));
    CHECK(rigid_feasibility(tip + 0.01, p).failure_mode == std::optional(FailureMode::TipOver));

    auto slick = to_params(kTruck);
    slick.mu = 0.0;
    slick.T_max = 1e6;
    const auto v = rigid_feasibility(1.0, slick);
    CHECK_FALSE(v.pass);
    CHECK(v.failure_mode == std::optional(FailureMode::TractionLimit));

    auto weak = to_params(kTruck);
    weak.T_max = 0.0;
    CHECK(rigid_feasibility(0.0, weak).pass);
    CHECK(rigid_feasibility(0.1, weak).failure_mode == std::optional(FailureMode::TorqueLimit));
}

TEST_CASE("analytic rigid critical grade") {
    const auto r = analytic_rigid_critical(to_params(kTruck));
    CHECK(r.critical_grade == doctest::Approx(100 * 0.7 * 1.6 / (3.3 - 0.63)).epsilon(1e-12));
    CHECK(r.critical_grade == doctest::Approx(41.95).epsilon(1e-3));
    CHECK(r.failure_mode == std::optional(FailureMode::TractionLimit));

    auto grippy = to_params(kTruck);
    grippy.mu = 10.0;
    grippy.h_cg = 0.3;
    grippy.T_max = 1e6;
    const auto tip = analytic_rigid_critical(grippy);
    CHECK(tip.critical_grade == doctest::Approx(100 * 1.7 / 0.3));
    CHECK(tip.failure_mode == std::optional(FailureMode::TipOver));

    auto zero = to_params(kTruck);
    zero.T_max = 0.0;
    const auto z = analytic_rigid_critical(zero);
    CHECK(z.critical_grade == 0.0);
    CHECK(z.failure_mode == std::optional(FailureMode::TorqueLimit));
}

TEST_CASE("tip-over binds on the reference truck with very high friction") {
    // mu = 10 breaks mu h < wheelbase at h = 0.9; mu = 3.6 is the largest
    // admissible round value and leaves friction far from binding.
    auto p = to_params(kTruck);
    p.mu = 10.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.mu = 3.6;
    p.T_max = 1e6;
    const auto r = analytic_rigid_critical(p);
    CHECK(r.critical_grade == doctest::Approx(188.9).epsilon(1e-3));
    CHECK(r.failure_mode == std::optional(FailureMode::TipOver));
    const auto s = critical_grade(Tier::Rigid, tier_feasibility(Tier::Rigid, {p, {1e5, 1e5}, {}, {}}),
                                  SweepSolver{0.1});
    CHECK(s.critical_grade == doctest::Approx(188.8).epsilon(1e-9));
    CHECK(s.failure_mode == std::optional(FailureMode::TipOver));
}

TEST_CASE("sweep and bisection on the reference truck") {
    const auto fn = tier_feasibility(Tier::Rigid, {to_params(kTruck), {1e5, 1e5}, {}, {}});
    const auto s = critical_grade(Tier::Rigid, fn, SweepSolver{0.1});
    CHECK(s.critical_grade == doctest::Approx(41.9).epsilon(1e-9));
    CHECK(s.failure_mode == std::optional(FailureMode::TractionLimit));
    const auto b = critical_grade(Tier::Rigid, fn, BisectionSolver{0, 400, 0.01});
    CHECK(std::abs(b.critical_grade - 41.95) <= 0.01);
    CHECK(std::abs(b.critical_grade - s.critical_grade) <= 0.1);
    CHECK(b.failure_mode == std::optional(FailureMode::TractionLimit));
    CHECK(b.evaluations < 40);

    auto zero = to_params(kTruck);
    zero.T_max = 0.0;
    const auto zfn = tier_feasibility(Tier::Rigid, {zero, {1e5, 1e5}, {}, {}});
    for (const GradeSolver solver : {GradeSolver{SweepSolver{}}, GradeSolver{BisectionSolver{}}}) {
        const auto z = critical_grade(Tier::Rigid, zfn, solver);
        CHECK(z.critical_grade == 0.0);
        CHECK(z.failure_mode == std::optional(FailureMode::TorqueLimit));
    }
}

TEST_CASE("solvers match the oracle on random vehicles") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const auto v = oracle::random_vehicle(rng);
        const auto p = to_params(v);
        const auto ref = oracle::rigid_critical(v);
        const auto fn = tier_feasibility(Tier::Rigid, {p, {1e5, 1e5}, {}, {}});
        const auto s = critical_grade(Tier::Rigid, fn, SweepSolver{0.1});
        const auto b = critical_grade(Tier::Rigid, fn, BisectionSolver{0, 400, 0.01});
        INFO("trial " << trial << " oracle " << ref.grade);
        CHECK(s.critical_grade <= ref.grade);
        CHECK(ref.grade - s.critical_grade <= 0.1);
        CHECK(std::abs(b.critical_grade - ref.grade) <= 0.01);
        CHECK(s.failure_mode == std::optional(mode_of(ref.mode)));
        CHECK(analytic_rigid_critical(p).critical_grade == doctest::Approx(ref.grade).epsilon(1e-12));
    }
}

TEST_CASE("spring equilibrium on flat ground") {
    const auto p = to_params(kTruck);
    const double k = 2e5;
    const auto eq = spring_equilibrium(0.0, p, {k, k}, 1e-12);
    const double W = p.m * oracle::g;
    // exact pitch: phi = a (l_f - l_r) / (1 - 2 a h) with a = W / (wheelbase^2 k)
    const double a = W / (p.wheelbase * p.wheelbase * k);
    const double phi = a * (p.l_f - p.l_r()) / (1.0 - 2.0 * a * p.h_cg);
    CHECK(eq.pitch == doctest::Approx(phi).epsilon(1e-9));
    CHECK(eq.pitch == doctest::Approx((eq.delta_r - eq.delta_f) / p.wheelbase).epsilon(1e-12));
    CHECK(k * eq.delta_f + k * eq.delta_r == doctest::Approx(W).epsilon(1e-9));
    // first-order estimates from the undeflected statics
    CHECK(eq.delta_f == doctest::Approx(W * p.l_r() / (p.wheelbase * k)).epsilon(1e-2));
    CHECK(eq.delta_r == doctest::Approx(W * p.l_f / (p.wheelbase * k)).epsilon(1e-2));
    CHECK(eq.N_f == doctest::Approx(k * eq.delta_f).epsilon(1e-9));

    CHECK_THROWS_AS((void)spring_equilibrium(0.0, p, {0.0, k}), Error);
    CHECK_THROWS_AS((void)spring_equilibrium(0.0, p, {k, -1.0}), Error);
}

TEST_CASE("stiff springs reproduce the rigid tier") {
    const auto p = to_params(kTruck);
    const SpringParams stiff{1e12, 1e12};
    for (double g = 0.0; g <= 60.0; g += 10.0) {
        const auto r = rigid_feasibility(g, p);
        const auto s = spring_feasibility(g, p, stiff);
        CHECK(r.pass == s.pass);
        CHECK(r.failure_mode == s.failure_mode);
        CHECK(std::abs(r.N_f - s.N_f) <= 1e-6 * p.m * oracle::g);
        CHECK(std::abs(r.N_r - s.N_r) <= 1e-6 * p.m * oracle::g);
    }
    const auto rigid = critical_grade(Tier::Rigid, tier_feasibility(Tier::Rigid, {p, stiff, {}, {}}),
                                      BisectionSolver{});
    const auto spring = critical_grade(Tier::Spring, tier_feasibility(Tier::Spring, {p, stiff, {}, {}}),
                                       BisectionSolver{});
    CHECK(std::abs(rigid.critical_grade - spring.critical_grade) <= 0.1);
}

TEST_CASE("compliant springs shift the critical grade only slightly") {
    const auto p = to_params(kTruck);
    const SpringParams soft{2e5, 2e5};
    CHECK(spring_feasibility(0.0, p, soft).pass);
    const auto rigid = critical_grade(Tier::Rigid, tier_feasibility(Tier::Rigid, {p, soft, {}, {}}),
                                      SweepSolver{0.1});
    const auto spring = critical_grade(Tier::Spring, tier_feasibility(Tier::Spring, {p, soft, {}, {}}),
                                       SweepSolver{0.1});
    CHECK(std::abs(rigid.critical_grade - spring.critical_grade) <= 3.0);
    for (double g = 0.0; g < 80.0; g += 2.0) {
        if (std::abs(g - rigid.critical_grade) > 3.0) {
            CHECK(rigid_feasibility(g, p).pass == spring_feasibility(g, p, soft).pass);
        }
    }
}

TEST_CASE("spring tier reports tip-over while settling") {
    auto p = to_params(kTruck);
    p.mu = 3.0;
    p.T_max = 1e6;
    const double tip = 100.0 * p.l_r() / p.h_cg;
    const auto v = spring_feasibility(tip + 5.0, p, {5e4, 5e4});
    CHECK_FALSE(v.pass);
    CHECK(v.failure_mode == std::optional(FailureMode::TipOver));
    CHECK(code_of([&] { (void)spring_equilibrium(tip + 5.0, p, {5e4, 5e4}); }) ==
          ErrorCode::TipOverDuringSettling);
}

TEST_CASE("critical grade rises with friction, torque and CG height") {
    const auto at = [](VehicleParams p) {
        return critical_grade(Tier::Spring, tier_feasibility(Tier::Spring, {p, {2e5, 2e5}, {}, {}}),
                              BisectionSolver{})
            .critical_grade;
    };
    const auto base = to_params(kTruck);
    double prev = -1.0;
    for (double mu : {0.2, 0.4, 0.6, 0.8}) {
        auto p = base;
        p.mu = mu;
        const double g = at(p);
        CHECK(g > prev);
        prev = g;
    }
    prev = -1.0;
    for (double T : {100.0, 200.0, 300.0, 400.0}) {
        auto p = base;
        p.T_max = T;
        const double g = at(p);
        CHECK(g >= prev);
        prev = g;
    }
    // friction-bound: a higher CG moves load onto the driven rear axle
    prev = -1.0;
    for (double h : {0.6, 0.9, 1.2, 1.5}) {
        auto p = base;
        p.mu = 0.5;
        p.T_max = 1e6;
        p.h_cg = h;
        const double g = at(p);
        CHECK(g > prev);
        prev = g;
    }
}

TEST_CASE("dynamic climb basics") {
    const auto p = to_params(kTruck);
    const SpringParams springs{2e5, 2e5};
    DynamicParams d;
    d.torque_map = TorqueMap({800, 2000, 3200}, {700, 1000, 800});

    const auto flat = simulate_climb(0.0, p, springs, d);
    CHECK(flat.verdict.pass);
    CHECK(flat.distance >= d.success_distance);

    DynamicParams dead = d;
    dead.torque_map = TorqueMap::flat(0.0);
    for (double g : {0.5, 10.0}) {
        const auto v = dynamic_feasibility(g, p, springs, dead);
        CHECK_FALSE(v.pass);
        const bool expected_mode = v.failure_mode == std::optional(FailureMode::TorqueLimit) ||
                                   v.failure_mode == std::optional(FailureMode::Timeout);
        CHECK(expected_mode);
    }
    CHECK_FALSE(dynamic_feasibility(0.0, p, springs, dead).pass);

    auto tippy = p;
    tippy.mu = 3.0;
    tippy.h_cg = 1.0;
    tippy.T_max = 1e5;
    DynamicParams strong = d;
    strong.torque_map = TorqueMap::flat(1e5);
    const auto tip = dynamic_feasibility(100.0 * tippy.l_r() / tippy.h_cg + 10.0, tippy, springs, strong);
    CHECK(tip.failure_mode == std::optional(FailureMode::TipOver));
}

TEST_CASE("degenerate dynamic configuration approaches the rigid limit") {
    const auto p = to_params(kTruck);
    const auto setup = VehicleSetup{p, {1e9, 1e9}, degenerate(p.T_max), {}};
    const auto rigid = analytic_rigid_critical(p);
    const auto dyn = critical_grade(Tier::Dynamic, tier_feasibility(Tier::Dynamic, setup), BisectionSolver{0, 400, 0.05});
    CHECK(std::abs(dyn.critical_grade - rigid.critical_grade) <= 3.0);
    CHECK(dyn.failure_mode == std::optional(FailureMode::TractionLimit));
}

TEST_CASE("torque map and converter") {
    const TorqueMap map({1000, 2000}, {400, 600});
    CHECK(map(500) == 400);
    CHECK(map(1500) == doctest::Approx(500));
    CHECK(map(5000) == 600);
    CHECK_THROWS_AS(TorqueMap({2000, 1000}, {1, 2}), Error);
    CHECK_THROWS_AS(TorqueMap({1000}, {1, 2}), Error);

    DynamicParams d;
    d.converter_ramp = 2.0;
    d.stall_fraction = 0.4;
    CHECK(d.converter_factor(0.0) == doctest::Approx(0.4));
    CHECK(d.converter_factor(1.0) == doctest::Approx(0.7));
    CHECK(d.converter_factor(3.0) == 1.0);
}

TEST_CASE("sweep refuses to run forever") {
    const FeasibilityFn always = [](double) { return GradeFeasibility{}; };
    CHECK(code_of([&] { (void)critical_grade(Tier::Rigid, always, SweepSolver{10.0}); }) == ErrorCode::NeverFails);
    CHECK(code_of([&] { (void)critical_grade(Tier::Rigid, always, BisectionSolver{}); }) ==
          ErrorCode::PreconditionViolation);
    CHECK(code_of([&] { (void)critical_grade(Tier::Rigid, always, SweepSolver{0.0}); }) ==
          ErrorCode::PreconditionViolation);
}

TEST_CASE("vehicle validation") {
    auto p = to_params(kTruck);
    p.l_f = 4.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = to_params(kTruck);
    p.mu = -0.1;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("descriptors") {
    CHECK(rigid_descriptor().cost().input_count == 8);
    CHECK(spring_descriptor().extends() == std::optional<std::string>("grade.rigid"));
    CHECK_FALSE(dynamic_descriptor().extends().has_value());
    CHECK(dynamic_descriptor().features().includes(spring_descriptor().features()));
}
