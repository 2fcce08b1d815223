#include "mfid/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfid/error.hpp"
#include "mfid/format.hpp"

namespace mfid::numerics {

double Trajectory::max_step() const {
    double h = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) h = std::max(h, times[i] - times[i - 1]);
    return h;
}

namespace {

// Bogacki-Shampine 3(2).
constexpr double c2 = 1.0 / 2.0, c3 = 3.0 / 4.0;
constexpr double a21 = 1.0 / 2.0;
constexpr double a32 = 3.0 / 4.0;
constexpr double b1 = 2.0 / 9.0, b2 = 1.0 / 3.0, b3 = 4.0 / 9.0;
constexpr double e1 = b1 - 7.0 / 24.0, e2 = b2 - 1.0 / 4.0, e3 = b3 - 1.0 / 3.0,
                 e4 = 0.0 - 1.0 / 8.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

}  // namespace

Trajectory integrate_rk23(const OdeSystem& system, double t0, const State& y0, double t_end,
                          const SolverConfig& config) {
    const std::size_t n = system.dimension;
    if (!system.rhs) throw Error(ErrorCode::InvalidArgument, "ODE system has no right-hand side");
    if (n == 0 || y0.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "initial state dimension does not match system");
    }
    if (!(t_end > t0)) throw Error(ErrorCode::InvalidArgument, "t_end must exceed t0");
    if (!(config.rtol >= 1e-14) || !(config.atol > 0.0) || config.max_steps == 0) {
        throw Error(ErrorCode::InvalidArgument, "tolerances must be positive, rtol >= 1e-14");
    }
    const double span = t_end - t0;
    double h = config.h0.value_or(span / 100.0);
    const double h_min = config.h_min.value_or(1e-12 * span);
    if (!(h > 0.0) || !(h_min > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "step sizes must be positive");
    }

    Trajectory traj;
    traj.times.push_back(t0);
    traj.states.push_back(y0);

    State y = y0, y_stage(n), y_new(n);
    State k1(n), k2(n), k3(n), k4(n);
    system.rhs(t0, y, k1);

    double t = t0;
    std::size_t attempts = 0;
    while (t < t_end) {
        if (attempts++ >= config.max_steps) {
            throw Error(ErrorCode::StepBudgetExhausted,
                        "exceeded " + std::to_string(config.max_steps) + " steps at t=" + shortest(t));
        }
        const bool final_step = t + h >= t_end;
        if (final_step) h = t_end - t;
        else if (h < h_min) {
            throw Error(ErrorCode::StepUnderflow, "step " + shortest(h) + " below h_min at t=" + shortest(t));
        }

        for (std::size_t i = 0; i < n; ++i) y_stage[i] = y[i] + h * a21 * k1[i];
        system.rhs(t + c2 * h, y_stage, k2);
        for (std::size_t i = 0; i < n; ++i) y_stage[i] = y[i] + h * a32 * k2[i];
        system.rhs(t + c3 * h, y_stage, k3);
        for (std::size_t i = 0; i < n; ++i) {
            y_new[i] = y[i] + h * (b1 * k1[i] + b2 * k2[i] + b3 * k3[i]);
        }
        const double t_new = final_step ? t_end : t + h;
        system.rhs(t_new, y_new, k4);

        double ratio = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double err = h * (e1 * k1[i] + e2 * k2[i] + e3 * k3[i] + e4 * k4[i]);
            const double scale = config.atol + config.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            ratio = std::max(ratio, std::abs(err) / scale);
        }
        if (!std::isfinite(ratio)) ratio = std::numeric_limits<double>::infinity();

        const double factor =
            ratio == 0.0 ? kMaxFactor
                         : std::clamp(kSafety * std::cbrt(1.0 / ratio), kMinFactor, kMaxFactor);

        if (ratio <= 1.0) {
            t = t_new;
            y.swap(y_new);
            k1.swap(k4);  // first same as last
            traj.times.push_back(t);
            traj.states.push_back(y);
        }
        h *= factor;
    }
    return traj;
}

Bracket bisect_bracket(const ScalarFn& f, double lo, double hi, double tol, int max_iter) {
    if (!(lo < hi) || !(tol > 0.0) || max_iter < 0) {
        throw Error(ErrorCode::InvalidArgument, "bisection needs lo < hi and tol > 0");
    }
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return {lo, lo, f_lo, f_lo, 0};
    if (f_hi == 0.0) return {hi, hi, f_hi, f_hi, 0};
    if (!((f_lo < 0.0 && f_hi > 0.0) || (f_lo > 0.0 && f_hi < 0.0))) {
        throw Error(ErrorCode::NoSignChange,
                    "f(" + shortest(lo) + ")=" + shortest(f_lo) + " and f(" + shortest(hi) +
                        ")=" + shortest(f_hi) + " share a sign");
    }

    int iterations = 0;
    while (hi - lo > tol) {
        if (iterations >= max_iter) {
            throw Error(ErrorCode::IterationBudget,
                        "bracket width " + shortest(hi - lo) + " after " + std::to_string(iterations) +
                            " iterations");
        }
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;  // width at floating-point resolution
        const double f_mid = f(mid);
        ++iterations;
        if (f_mid == 0.0) return {mid, mid, f_mid, f_mid, iterations};
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    return {lo, hi, f_lo, f_hi, iterations};
}

BracketResult bisection(const ScalarFn& f, double lo, double hi, double tol, int max_iter) {
    const auto b = bisect_bracket(f, lo, hi, tol, max_iter);
    const double root = b.lo == b.hi ? b.lo : b.lo + 0.5 * (b.hi - b.lo);
    return {root, b.iterations, std::abs(f(root))};
}

FixedPointResult fixed_point(const VectorMap& g, State x0, double tol, int max_iter) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "fixed-point tolerance must be positive");
    State x = std::move(x0);
    for (int iter = 1; iter <= max_iter; ++iter) {
        State gx = g(x);
        if (gx.size() != x.size()) {
            throw Error(ErrorCode::InvalidArgument, "fixed-point map changed the dimension");
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            if (!std::isfinite(gx[i])) {
                throw Error(ErrorCode::NonFinite, "iterate " + std::to_string(iter) + " is not finite");
            }
            diff = std::max(diff, std::abs(gx[i] - x[i]));
        }
        if (diff <= tol) return {std::move(gx), iter};
        x = std::move(gx);
    }
    throw Error(ErrorCode::NonConvergence,
                "no convergence within " + std::to_string(max_iter) + " iterations");
}

}  // namespace mfid::numerics
