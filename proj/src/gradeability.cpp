#include "mfid/gradeability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "mfid/error.hpp"
#include "mfid/format.hpp"

namespace mfid::grade {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }
bool non_negative(double v) { return v >= 0.0 && std::isfinite(v); }

// Tip-over, then the binding one of the drive and friction bounds.
GradeFeasibility judge(double alpha, const VehicleParams& p, AxleLoads loads) {
    GradeFeasibility out{true, std::nullopt, loads.N_f, loads.N_r};
    if (loads.N_f <= 0.0) {
        out.pass = false;
        out.failure_mode = FailureMode::TipOver;
        return out;
    }
    const double required = p.m * kGravity * std::sin(alpha);
    const double drive = p.drive_force_limit();
    const double friction = p.mu * std::max(loads.N_r, 0.0);
    if (std::min(drive, friction) < required) {
        out.pass = false;
        out.failure_mode = drive <= friction ? FailureMode::TorqueLimit : FailureMode::TractionLimit;
    }
    return out;
}

// i * increment, snapped to a 1e-9 grid so 419 * 0.1 reads back as 41.9.
double sweep_grade(long i, double increment) {
    return std::round(static_cast<double>(i) * increment * 1e9) / 1e9;
}

}  // namespace

void VehicleParams::validate() const {
    require(positive(m), "vehicle mass must be positive");
    require(positive(wheelbase), "wheelbase must be positive");
    require(positive(l_f) && l_f < wheelbase, "need 0 < l_f < wheelbase");
    require(positive(h_cg), "CG height must be positive");
    require(positive(r_w), "wheel radius must be positive");
    require(non_negative(T_max), "peak torque must be >= 0");
    require(positive(G_r), "gear reduction must be positive");
    require(non_negative(mu), "friction coefficient must be >= 0");
    require(mu * h_cg < wheelbase, "need mu * h_cg < wheelbase");
}

void SpringParams::validate() const {
    require(positive(k_f) && positive(k_r), "spring rates must be positive");
}

std::string_view to_string(FailureMode mode) noexcept {
    switch (mode) {
        case FailureMode::TipOver: return "TipOver";
        case FailureMode::TractionLimit: return "TractionLimit";
        case FailureMode::TorqueLimit: return "TorqueLimit";
        case FailureMode::Timeout: return "Timeout";
    }
    return "?";
}

std::string_view to_string(Tier tier) noexcept {
    switch (tier) {
        case Tier::Rigid: return "rigid";
        case Tier::Spring: return "spring";
        case Tier::Dynamic: return "dynamic";
    }
    return "?";
}

double grade_to_angle(double grade_percent) { return std::atan(grade_percent / 100.0); }
double angle_to_grade(double alpha) { return 100.0 * std::tan(alpha); }

AxleLoads static_axle_loads(double m, double wheelbase, double l_f, double h, double alpha) {
    const double w = m * kGravity / wheelbase;
    const double l_r = wheelbase - l_f;
    const double c = std::cos(alpha), s = std::sin(alpha);
    return {w * (l_r * c - h * s), w * (l_f * c + h * s)};
}

GradeFeasibility rigid_feasibility(double grade, const VehicleParams& p) {
    p.validate();
    if (!(grade >= 0.0)) throw Error(ErrorCode::InvalidArgument, "grade must be >= 0");
    const double alpha = grade_to_angle(grade);
    return judge(alpha, p, static_axle_loads(p.m, p.wheelbase, p.l_f, p.h_cg, alpha));
}

GradeResult analytic_rigid_critical(const VehicleParams& p) {
    p.validate();
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double tan_tip = p.l_r() / p.h_cg;
    const double tan_fric = p.mu * p.l_f / (p.wheelbase - p.mu * p.h_cg);
    const double ratio = p.drive_force_limit() / (p.m * kGravity);
    const double tan_torque = ratio >= 1.0 ? inf : std::tan(std::asin(ratio));

    GradeResult r;
    r.tier = Tier::Rigid;
    double best = tan_tip;
    r.failure_mode = FailureMode::TipOver;
    if (tan_torque < best) {
        best = tan_torque;
        r.failure_mode = FailureMode::TorqueLimit;
    }
    if (tan_fric < best) {
        best = tan_fric;
        r.failure_mode = FailureMode::TractionLimit;
    }
    r.critical_grade = 100.0 * best;
    return r;
}

SpringEquilibrium spring_equilibrium(double grade, const VehicleParams& p, const SpringParams& s,
                                     double tol) {
    p.validate();
    s.validate();
    if (!(grade >= 0.0)) throw Error(ErrorCode::InvalidArgument, "grade must be >= 0");
    const double alpha = grade_to_angle(grade);
    const double L = p.wheelbase;

    AxleLoads loads{};
    const auto settle = [&](const numerics::State& delta) {
        const double d_f = delta[0], d_r = delta[1];
        const double pitch = (d_r - d_f) / L;
        const double l_f = p.l_f + p.h_cg * pitch;
        const double h = p.h_cg - (d_f * p.l_r() + d_r * p.l_f) / L;
        loads = static_axle_loads(p.m, L, l_f, h, alpha);
        if (loads.N_f <= 0.0) {
            throw Error(ErrorCode::TipOverDuringSettling,
                        "front axle unloaded at grade " + shortest(grade) + "%");
        }
        return numerics::State{loads.N_f / s.k_f, loads.N_r / s.k_r};
    };

    const auto fp = numerics::fixed_point(settle, {0.0, 0.0}, tol);
    // fixed_point returns g(x) of the last iterate, so `loads` belongs to the
    // previous compressions; recompute them at the returned point.
    (void)settle(fp.x);
    const double d_f = fp.x[0], d_r = fp.x[1];
    return {loads.N_f, loads.N_r, d_f, d_r, (d_r - d_f) / L, fp.iterations};
}

GradeFeasibility spring_feasibility(double grade, const VehicleParams& p, const SpringParams& s) {
    try {
        const auto eq = spring_equilibrium(grade, p, s);
        return judge(grade_to_angle(grade), p, {eq.N_f, eq.N_r});
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TipOverDuringSettling) throw;
        const auto loads = static_axle_loads(p.m, p.wheelbase, p.l_f, p.h_cg, grade_to_angle(grade));
        return {false, FailureMode::TipOver, loads.N_f, loads.N_r};
    }
}

GradeResult critical_grade(Tier tier, const FeasibilityFn& feasibility, const GradeSolver& solver) {
    GradeResult result;
    result.tier = tier;
    result.solver = solver;

    const auto eval = [&](double g) {
        ++result.evaluations;
        return feasibility(g);
    };

    if (const auto* sweep = std::get_if<SweepSolver>(&solver)) {
        if (!(sweep->increment > 0.0)) {
            throw Error(ErrorCode::PreconditionViolation, "sweep increment must be positive");
        }
        const auto at_zero = eval(0.0);
        if (!at_zero.pass) {
            result.failure_mode = at_zero.failure_mode;
            return result;
        }
        for (long i = 1;; ++i) {
            const double g = sweep_grade(i, sweep->increment);
            if (g > kNeverFailsGrade) {
                throw Error(ErrorCode::NeverFails,
                            "no failure up to " + shortest(kNeverFailsGrade) + "% grade");
            }
            const auto v = eval(g);
            if (!v.pass) {
                result.critical_grade = sweep_grade(i - 1, sweep->increment);
                result.failure_mode = v.failure_mode;
                return result;
            }
        }
    }

    const auto& bis = std::get<BisectionSolver>(solver);
    if (!(bis.lo >= 0.0 && bis.lo < bis.hi && bis.tol > 0.0)) {
        throw Error(ErrorCode::PreconditionViolation, "bisection needs 0 <= lo < hi and tol > 0");
    }
    std::map<double, GradeFeasibility> seen;
    const auto indicator = [&](double g) {
        auto it = seen.find(g);
        if (it == seen.end()) it = seen.emplace(g, eval(g)).first;
        return it->second.pass ? -1.0 : 1.0;
    };

    if (indicator(bis.lo) > 0.0) {
        if (bis.lo == 0.0) {
            // Nothing is climbable; same answer the sweep gives.
            result.failure_mode = seen.at(bis.lo).failure_mode;
            return result;
        }
        throw Error(ErrorCode::PreconditionViolation, "vehicle fails at the lower bracket grade");
    }
    if (indicator(bis.hi) < 0.0) {
        throw Error(ErrorCode::PreconditionViolation, "vehicle passes at the upper bracket grade");
    }
    const auto bracket = numerics::bisect_bracket(indicator, bis.lo, bis.hi, bis.tol);
    result.critical_grade = bracket.lo;
    result.failure_mode = seen.at(bracket.hi).failure_mode;
    return result;
}

FeasibilityFn tier_feasibility(Tier tier, const VehicleSetup& setup) {
    switch (tier) {
        case Tier::Rigid:
            return [setup](double g) { return rigid_feasibility(g, setup.vehicle); };
        case Tier::Spring:
            return [setup](double g) { return spring_feasibility(g, setup.vehicle, setup.springs); };
        case Tier::Dynamic:
            return [setup](double g) {
                return dynamic_feasibility(g, setup.vehicle, setup.springs, setup.dynamics, setup.solver);
            };
    }
    throw Error(ErrorCode::InvalidArgument, "unknown tier");
}

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

namespace {

GrayBoxSpec rigid_gray_box() {
    return {
        .inputs = {{"Vehicle mass", 1, "curb mass m"},
                   {"Location of wheel centers", 3, "wheelbase, CG-to-front-axle distance, CG height"},
                   {"Drivetrain", 3, "peak torque T_max, gear reduction G_r, wheel radius r_w"},
                   {"Tire-ground friction", 1, "Coulomb coefficient mu"}},
        .relations = {{"grade loop: axle normal forces from the quasi-static moment balance on the slope",
                       {"quasi-static-grade-load-distribution"}},
                      {"tip-over check: the front axle normal force must stay positive",
                       {"tip-over-stability", "quasi-static-grade-load-distribution"}},
                      {"tractive check: m g sin(alpha) against min(T_max G_r / r_w, mu N_r)",
                       {"torque-limit", "traction-limit", "coulomb-friction"}}},
        .outputs = {{"critical grade", "%"}, {"failure mode", "-"}},
    };
}

FeatureSet rigid_features() {
    return {"coulomb-friction", "quasi-static-grade-load-distribution", "tip-over-stability",
            "traction-limit", "torque-limit"};
}

FeatureSet spring_features() {
    return rigid_features().united_with(FeatureSet{"suspension-spring-settling"});
}

}  // namespace

ModelDescriptor rigid_descriptor() {
    return {"grade.rigid", rigid_features(), rigid_gray_box(), ValidityFrame{}, 2};
}

ModelDescriptor spring_descriptor() {
    auto box = rigid_gray_box();
    box.inputs.push_back({"Suspension spring rates", 2, "front and rear axle spring rates"});
    box.relations.push_back({"settling sub-loop: iterate spring compressions to a fixed point, "
                             "shifting CG height and pitch before the checks",
                             {"suspension-spring-settling", "quasi-static-grade-load-distribution"}});
    return {"grade.spring", spring_features(), std::move(box), ValidityFrame{}, 2, "grade.rigid"};
}

ModelDescriptor dynamic_descriptor() {
    GrayBoxSpec box{
        .inputs = {{"Vehicle mass properties", 2, "mass m and pitch inertia I_yy"},
                   {"Location of wheel centers", 3, "wheelbase, CG-to-front-axle distance, CG height"},
                   {"Drivetrain", 2, "lowest-gear reduction G_r and wheel radius r_w"},
                   {"Engine torque map", 2, "RPM breakpoints and torque values"},
                   {"Torque converter", 2, "stall torque fraction and lockup ramp time"},
                   {"Suspension spring rates", 2, "front and rear axle spring rates"},
                   {"Suspension damping rates", 2, "front and rear axle damping rates"},
                   {"Tire-ground friction", 1, "Coulomb coefficient mu"},
                   {"Test course", 2, "success distance and time limit"},
                   {"Integrator tolerances", 2, "relative and absolute tolerance"}},
        .relations = {{"engine torque looked up from RPM and ramped by the converter",
                       {"engine-torque-map", "torque-converter", "torque-limit"}},
                      {"tractive force capped by mu N_r(t)", {"traction-limit", "coulomb-friction"}},
                      {"heave and pitch driven by spring and damper forces with inertia I_yy",
                       {"suspension-spring-settling", "suspension-damping", "pitch-dynamics"}},
                      {"longitudinal acceleration shifts load through the CG height",
                       {"dynamic-weight-transfer", "quasi-static-grade-load-distribution"}},
                      {"front wheel lift-off ends the run as tip-over", {"tip-over-stability"}},
                      {"adaptive 3(2) Runge-Kutta integration from rest", {"time-domain-integration"}}},
        .outputs = {{"critical grade", "%"}, {"failure mode", "-"}},
    };
    auto features = spring_features().united_with(
        FeatureSet{"dynamic-weight-transfer", "engine-torque-map", "torque-converter",
                   "suspension-damping", "pitch-dynamics", "time-domain-integration"});
    return {"grade.dynamic", std::move(features), std::move(box), ValidityFrame{}, 3};
}

}  // namespace mfid::grade
