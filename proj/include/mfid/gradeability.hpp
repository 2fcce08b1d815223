#pragma once

// Longitudinal gradeability: can a rear-driven vehicle start from rest and
// climb a constant grade without lifting its front axle?
//
// Three tiers of the same test:
//   rigid   quasi-static statics on the grade, rigid suspension
//   spring  as rigid, after the suspension springs settle (fixed point)
//   dynamic planar heave/pitch/longitudinal time simulation with an engine
//           torque map and a torque-converter ramp
//
// Grades are percent, 100 tan(alpha).

#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "mfid/fidelity.hpp"
#include "mfid/numerics.hpp"

namespace mfid::grade {

inline constexpr double kGravity = 9.80665;  // m/s^2

/// Rear-wheel drive. Throws InvalidArgument on invariant violations.
struct VehicleParams {
    double m;          // kg
    double wheelbase;  // m
    double l_f;        // CG to front axle (m)
    double h_cg;       // CG height (m)
    double r_w;        // wheel radius (m)
    double T_max;      // peak engine torque (N m), >= 0
    double G_r;        // overall gear reduction
    double mu;         // tire-ground Coulomb friction, >= 0

    void validate() const;
    [[nodiscard]] double l_r() const noexcept { return wheelbase - l_f; }
    [[nodiscard]] double drive_force_limit() const noexcept { return T_max * G_r / r_w; }
};

struct SpringParams {
    double k_f;  // N/m
    double k_r;  // N/m

    void validate() const;
};

/// Piecewise-linear torque over engine RPM, clamped at the ends.
class TorqueMap {
public:
    TorqueMap(std::vector<double> rpm, std::vector<double> torque_nm);
    /// Two-point map delivering `torque` at every speed.
    static TorqueMap flat(double torque);

    [[nodiscard]] double operator()(double rpm) const;
    [[nodiscard]] const std::vector<double>& rpm() const noexcept { return rpm_; }
    [[nodiscard]] const std::vector<double>& torque_nm() const noexcept { return torque_; }

private:
    std::vector<double> rpm_;
    std::vector<double> torque_;
};

struct DynamicParams {
    TorqueMap torque_map = TorqueMap::flat(0.0);
    double converter_ramp = 1.0;   // s from stall fraction to lockup; 0 = locked
    double stall_fraction = 0.5;
    double c_f = 2.0e4;            // N s/m
    double c_r = 2.0e4;            // N s/m
    double I_yy = 5000.0;          // kg m^2
    double success_distance = 20.0;  // m
    double time_limit = 20.0;        // s

    void validate() const;
    /// Delivered fraction of map torque at time t.
    [[nodiscard]] double converter_factor(double t) const;
};

enum class FailureMode { TipOver, TractionLimit, TorqueLimit, Timeout };
enum class Tier { Rigid, Spring, Dynamic };

std::string_view to_string(FailureMode mode) noexcept;
std::string_view to_string(Tier tier) noexcept;

struct GradeFeasibility {
    bool pass = true;
    std::optional<FailureMode> failure_mode;
    double N_f = 0.0;  // N
    double N_r = 0.0;  // N
};

struct SweepSolver {
    double increment = 0.1;  // grade points
};

struct BisectionSolver {
    double lo = 0.0;
    double hi = 400.0;
    double tol = 0.01;
};

using GradeSolver = std::variant<SweepSolver, BisectionSolver>;

struct GradeResult {
    double critical_grade = 0.0;
    std::optional<FailureMode> failure_mode;
    GradeSolver solver;
    Tier tier = Tier::Rigid;
    int evaluations = 0;
};

[[nodiscard]] double grade_to_angle(double grade_percent);
[[nodiscard]] double angle_to_grade(double alpha);

struct AxleLoads {
    double N_f;
    double N_r;
};

/// Quasi-static axle normals on a grade, CG at distance l_f behind the front
/// axle and height h above the ground.
[[nodiscard]] AxleLoads static_axle_loads(double m, double wheelbase, double l_f, double h,
                                          double alpha);

[[nodiscard]] GradeFeasibility rigid_feasibility(double grade, const VehicleParams& p);

/// Closed form min over tip-over, friction and torque limits.
[[nodiscard]] GradeResult analytic_rigid_critical(const VehicleParams& p);

struct SpringEquilibrium {
    double N_f, N_r;
    double delta_f, delta_r;  // spring compressions (m)
    double pitch;             // rad, positive when the rear sits lower
    int iterations;
};

/// Throws TipOverDuringSettling, NonConvergence.
[[nodiscard]] SpringEquilibrium spring_equilibrium(double grade, const VehicleParams& p,
                                                   const SpringParams& s, double tol = 1e-6);

/// Tip-over during settling is reported as a TipOver verdict.
[[nodiscard]] GradeFeasibility spring_feasibility(double grade, const VehicleParams& p,
                                                  const SpringParams& s);

/// Diagnostics of one dynamic run, in addition to the verdict.
struct DynamicRun {
    GradeFeasibility verdict;
    double distance = 0.0;       // m travelled when the run ended
    double elapsed = 0.0;        // s
    double min_N_f = 0.0;        // N
    std::size_t samples = 0;
};

[[nodiscard]] DynamicRun simulate_climb(double grade, const VehicleParams& p,
                                        const SpringParams& s, const DynamicParams& d,
                                        const numerics::SolverConfig& solver = {});

[[nodiscard]] GradeFeasibility dynamic_feasibility(double grade, const VehicleParams& p,
                                                   const SpringParams& s, const DynamicParams& d,
                                                   const numerics::SolverConfig& solver = {});

using FeasibilityFn = std::function<GradeFeasibility(double grade)>;

/// Sweep from 0% in fixed increments, or bisect the pass/fail boundary.
/// Throws NeverFails (sweep past 400%) and PreconditionViolation.
[[nodiscard]] GradeResult critical_grade(Tier tier, const FeasibilityFn& feasibility,
                                         const GradeSolver& solver);

/// Inputs for all three tiers.
struct VehicleSetup {
    VehicleParams vehicle;
    SpringParams springs;
    DynamicParams dynamics;
    numerics::SolverConfig solver;
};

[[nodiscard]] FeasibilityFn tier_feasibility(Tier tier, const VehicleSetup& setup);

inline constexpr double kNeverFailsGrade = 400.0;

[[nodiscard]] ModelDescriptor rigid_descriptor();
[[nodiscard]] ModelDescriptor spring_descriptor();
[[nodiscard]] ModelDescriptor dynamic_descriptor();

}  // namespace mfid::grade
