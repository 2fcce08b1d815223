#pragma once

// Numerical kernels shared by the dynamic models: an adaptive
// Bogacki-Shampine 3(2) integrator, bisection on a sign change, and plain
// fixed-point iteration.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mfid::numerics {

using State = std::vector<double>;

/// dy/dt = f(t, y). The callback writes into `dydt`, which has the system
/// dimension; it must be deterministic for a given (t, y).
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeSystem {
    std::size_t dimension = 1;
    Rhs rhs;
};

struct SolverConfig {
    double rtol = 1e-6;
    double atol = 1e-9;
    std::optional<double> h0;     // default (t_end - t0) / 100
    std::optional<double> h_min;  // default 1e-12 * (t_end - t0)
    std::size_t max_steps = 1'000'000;
};

/// Accepted steps only; times[0] = t0 and times.back() = t_end.
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] const State& final_state() const { return states.back(); }
    /// Largest accepted step.
    [[nodiscard]] double max_step() const;
};

/// Throws StepUnderflow, StepBudgetExhausted, InvalidArgument.
[[nodiscard]] Trajectory integrate_rk23(const OdeSystem& system, double t0, const State& y0,
                                        double t_end, const SolverConfig& config = {});

using ScalarFn = std::function<double(double)>;

struct BracketResult {
    double root = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

/// Final sign-change bracket, with function values at both ends.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
    int iterations = 0;
};

/// Halves [lo, hi] until its width is <= tol, keeping a sign change inside.
/// An endpoint with f == 0 collapses the bracket onto it. Throws
/// NoSignChange, IterationBudget, InvalidArgument.
[[nodiscard]] Bracket bisect_bracket(const ScalarFn& f, double lo, double hi, double tol,
                                     int max_iter = 200);

/// Midpoint of the final bracket.
[[nodiscard]] BracketResult bisection(const ScalarFn& f, double lo, double hi, double tol,
                                      int max_iter = 200);

using VectorMap = std::function<State(const State&)>;

struct FixedPointResult {
    State x;
    int iterations = 0;
};

/// Iterates x <- g(x) until max |g(x) - x| <= tol and returns that g(x).
/// Throws NonConvergence, NonFinite, InvalidArgument.
[[nodiscard]] FixedPointResult fixed_point(const VectorMap& g, State x0, double tol,
                                           int max_iter = 1000);

}  // namespace mfid::numerics
