// Time-domain climb from rest.
//
// Body-fixed frame aligned with the grade. State:
//   [0] s      distance along the grade (m)
//   [1] v      speed along the grade (m/s)
//   [2] z      heave of the CG, positive away from the ground (m)
//   [3] phi    pitch, positive nose-up (rad)
//   [4] z'     [5] phi'
//
// Wheels are massless rigid point contacts, so each axle's normal force is
// its spring plus damper force. The ground's longitudinal force acts h below
// the CG, which is where acceleration weight transfer comes from.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfid/error.hpp"
#include "mfid/gradeability.hpp"

namespace mfid::grade {

TorqueMap::TorqueMap(std::vector<double> rpm, std::vector<double> torque_nm)
    : rpm_(std::move(rpm)), torque_(std::move(torque_nm)) {
    if (rpm_.empty() || rpm_.size() != torque_.size()) {
        throw Error(ErrorCode::InvalidArgument, "torque map needs matching non-empty rpm/torque arrays");
    }
    for (std::size_t i = 0; i < rpm_.size(); ++i) {
        if (!std::isfinite(rpm_[i]) || !(torque_[i] >= 0.0) || !std::isfinite(torque_[i])) {
            throw Error(ErrorCode::InvalidArgument, "torque map entries must be finite, torque >= 0");
        }
        if (i > 0 && !(rpm_[i] > rpm_[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "torque map RPM breakpoints must increase strictly");
        }
    }
}

TorqueMap TorqueMap::flat(double torque) { return {{0.0, 1.0}, {torque, torque}}; }

double TorqueMap::operator()(double rpm) const {
    if (rpm <= rpm_.front()) return torque_.front();
    if (rpm >= rpm_.back()) return torque_.back();
    const auto hi = std::upper_bound(rpm_.begin(), rpm_.end(), rpm);
    const auto i = static_cast<std::size_t>(hi - rpm_.begin());
    const double w = (rpm - rpm_[i - 1]) / (rpm_[i] - rpm_[i - 1]);
    return torque_[i - 1] + w * (torque_[i] - torque_[i - 1]);
}

void DynamicParams::validate() const {
    const auto bad = [](const char* what) { return Error(ErrorCode::InvalidArgument, what); };
    if (!(converter_ramp >= 0.0)) throw bad("converter ramp must be >= 0");
    if (!(stall_fraction > 0.0 && stall_fraction <= 1.0)) throw bad("stall fraction must lie in (0, 1]");
    if (!(c_f > 0.0) || !(c_r > 0.0)) throw bad("damping rates must be positive");
    if (!(I_yy > 0.0)) throw bad("pitch inertia must be positive");
    if (!(success_distance > 0.0) || !(time_limit > 0.0)) {
        throw bad("success distance and time limit must be positive");
    }
}

double DynamicParams::converter_factor(double t) const {
    if (converter_ramp <= 0.0 || t >= converter_ramp) return 1.0;
    return stall_fraction + (1.0 - stall_fraction) * std::max(t, 0.0) / converter_ramp;
}

namespace {

struct Forces {
    double N_f, N_r;
    double drive;     // torque-limited tractive force
    double traction;  // applied tractive force
    double accel;     // along the grade
    double ground_x;  // ground longitudinal force on the vehicle
};

class ClimbModel {
public:
    ClimbModel(double alpha, const VehicleParams& p, const SpringParams& s, const DynamicParams& d)
        : p_(p), s_(s), d_(d), sin_a_(std::sin(alpha)), cos_a_(std::cos(alpha)) {}

    [[nodiscard]] Forces forces(double t, std::span<const double> y) const {
        const double v = y[1], z = y[2], phi = y[3], dz = y[4], dphi = y[5];
        const double l_f = p_.l_f, l_r = p_.l_r();
        const double comp_f = -z - l_f * phi, comp_r = -z + l_r * phi;
        const double rate_f = -dz - l_f * dphi, rate_r = -dz + l_r * dphi;

        Forces f{};
        f.N_f = s_.k_f * comp_f + d_.c_f * rate_f;
        f.N_r = s_.k_r * comp_r + d_.c_r * rate_r;

        const double engine_rpm = std::max(v, 0.0) * p_.G_r / (2.0 * std::numbers::pi * p_.r_w) * 60.0;
        const double engine_torque = d_.torque_map(engine_rpm) * d_.converter_factor(t);
        f.drive = engine_torque * p_.G_r / p_.r_w;
        f.traction = std::min(f.drive, p_.mu * std::max(f.N_r, 0.0));

        const double grade_force = p_.m * kGravity * sin_a_;
        double accel = (f.traction - grade_force) / p_.m;
        if (v <= 0.0 && accel < 0.0) accel = 0.0;  // held at rest; no roll-back
        f.accel = accel;
        f.ground_x = p_.m * accel + grade_force;
        return f;
    }

    void rhs(double t, std::span<const double> y, std::span<double> dy) const {
        const Forces f = forces(t, y);
        const double phi = y[3];
        const double arm_f = p_.l_f + p_.h_cg * phi;
        const double arm_r = p_.l_r() - p_.h_cg * phi;
        const double height = p_.h_cg + y[2];

        dy[0] = y[1];
        dy[1] = f.accel;
        dy[2] = y[4];
        dy[3] = y[5];
        dy[4] = (f.N_f + f.N_r - p_.m * kGravity * cos_a_) / p_.m;
        dy[5] = (f.N_f * arm_f - f.N_r * arm_r + f.ground_x * height) / d_.I_yy;
    }

    [[nodiscard]] double grade_force() const { return p_.m * kGravity * sin_a_; }
    [[nodiscard]] double mu() const { return p_.mu; }

private:
    VehicleParams p_;
    SpringParams s_;
    DynamicParams d_;
    double sin_a_, cos_a_;
};

constexpr double kChunk = 0.25;  // s between event checks

}  // namespace

DynamicRun simulate_climb(double grade, const VehicleParams& p, const SpringParams& s,
                          const DynamicParams& d, const numerics::SolverConfig& solver) {
    p.validate();
    s.validate();
    d.validate();
    if (!(grade >= 0.0)) throw Error(ErrorCode::InvalidArgument, "grade must be >= 0");

    DynamicRun run;
    const double alpha = grade_to_angle(grade);

    // Start parked on the grade with the suspension settled.
    SpringEquilibrium eq{};
    try {
        eq = spring_equilibrium(grade, p, s);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TipOverDuringSettling) throw;
        const auto loads = static_axle_loads(p.m, p.wheelbase, p.l_f, p.h_cg, alpha);
        run.verdict = {false, FailureMode::TipOver, loads.N_f, loads.N_r};
        run.min_N_f = loads.N_f;
        return run;
    }
    const double z0 = -(eq.delta_f * p.l_r() + eq.delta_r * p.l_f) / p.wheelbase;

    const ClimbModel model(alpha, p, s, d);
    const numerics::OdeSystem system{6, [&model](double t, std::span<const double> y, std::span<double> dy) {
        model.rhs(t, y, dy);
    }};

    numerics::State y{0.0, 0.0, z0, eq.pitch, 0.0, 0.0};
    double t = 0.0;
    std::size_t friction_bound = 0, drive_short = 0, samples = 0;
    run.min_N_f = eq.N_f;

    const auto record = [&](double ts, const numerics::State& ys) -> bool {
        const Forces f = model.forces(ts, ys);
        ++samples;
        if (model.mu() * std::max(f.N_r, 0.0) < f.drive) ++friction_bound;
        if (f.drive < model.grade_force()) ++drive_short;
        run.min_N_f = std::min(run.min_N_f, f.N_f);
        run.verdict.N_f = f.N_f;
        run.verdict.N_r = f.N_r;
        run.distance = ys[0];
        run.elapsed = ts;
        if (f.N_f <= 0.0) {
            run.verdict.pass = false;
            run.verdict.failure_mode = FailureMode::TipOver;
            return true;
        }
        if (ys[0] >= d.success_distance) {
            run.verdict.pass = true;
            run.verdict.failure_mode.reset();
            return true;
        }
        return false;
    };

    if (record(t, y)) {
        run.samples = samples;
        return run;
    }
    while (t < d.time_limit) {
        const double t_next = std::min(t + kChunk, d.time_limit);
        const auto traj = numerics::integrate_rk23(system, t, y, t_next, solver);
        for (std::size_t i = 1; i < traj.size(); ++i) {
            if (record(traj.times[i], traj.states[i])) {
                run.samples = samples;
                return run;
            }
        }
        t = t_next;
        y = traj.final_state();
    }

    run.samples = samples;
    run.verdict.pass = false;
    if (2 * friction_bound >= samples) run.verdict.failure_mode = FailureMode::TractionLimit;
    else if (2 * drive_short >= samples) run.verdict.failure_mode = FailureMode::TorqueLimit;
    else run.verdict.failure_mode = FailureMode::Timeout;
    return run;
}

GradeFeasibility dynamic_feasibility(double grade, const VehicleParams& p, const SpringParams& s,
                                     const DynamicParams& d, const numerics::SolverConfig& solver) {
    return simulate_climb(grade, p, s, d, solver).verdict;
}

}  // namespace mfid::grade
