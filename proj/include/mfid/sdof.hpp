#pragma once

// Settling time of a spring-mass-damper under a step force: the classic
// 4/(zeta*omega_n) rule of thumb, and a time-domain model that integrates
// the equation of motion and scans for the last exit from the band.

#include <optional>
#include <string_view>

#include "mfid/fidelity.hpp"
#include "mfid/numerics.hpp"

namespace mfid::sdof {

/// m > 0, k > 0, c >= 0; throws InvalidArgument otherwise.
class SmdParams {
public:
    SmdParams(double m, double c, double k);

    /// Parameters with damping set so the damping ratio equals `zeta`.
    static SmdParams with_damping_ratio(double m, double k, double zeta);

    [[nodiscard]] double m() const noexcept { return m_; }
    [[nodiscard]] double c() const noexcept { return c_; }
    [[nodiscard]] double k() const noexcept { return k_; }

private:
    double m_, c_, k_;
};

struct StepForcing {
    explicit StepForcing(double F0);
    double F0;
};

struct SettlingCriterion {
    SettlingCriterion(double band = 0.02, double horizon_factor = 12.0);
    double band;
    double horizon_factor;
};

enum class SettlingMethod { Heuristic, Numeric };

struct SettlingResult {
    double t_s = 0.0;
    std::optional<double> steady_state;
    SettlingMethod method = SettlingMethod::Heuristic;
    /// Largest accepted integrator step (numeric method only).
    double max_step = 0.0;
};

struct ModalParameters {
    double omega_n;
    double zeta;
};

[[nodiscard]] ModalParameters modal_parameters(const SmdParams& p);

/// t_s = 4 / (zeta omega_n). Throws ZeroDamping when c = 0.
[[nodiscard]] SettlingResult heuristic_settling_time(const SmdParams& p,
                                                     std::optional<StepForcing> f = std::nullopt);

/// Closed-form response from rest, y(0) = y'(0) = 0.
[[nodiscard]] double analytic_step_response(const SmdParams& p, const StepForcing& f, double t);

/// Slowest time constant of the free response; infinite when undamped.
[[nodiscard]] double slowest_time_constant(const SmdParams& p);

/// Throws ZeroDamping, NoSettling, and integrator errors.
[[nodiscard]] SettlingResult numeric_settling_time(const SmdParams& p, const StepForcing& f,
                                                   const SettlingCriterion& crit = {},
                                                   const numerics::SolverConfig& solver = {});

[[nodiscard]] ModelDescriptor heuristic_descriptor(double underdamped_limit = 0.7);
[[nodiscard]] ModelDescriptor numeric_descriptor();

}  // namespace mfid::sdof
