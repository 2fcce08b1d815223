#include "mfid/sdof.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "mfid/error.hpp"
#include "mfid/format.hpp"

namespace mfid::sdof {

SmdParams::SmdParams(double m, double c, double k) : m_(m), c_(c), k_(k) {
    if (!(m > 0.0) || !(k > 0.0) || !(c >= 0.0) || !std::isfinite(m) || !std::isfinite(c) ||
        !std::isfinite(k)) {
        throw Error(ErrorCode::InvalidArgument, "need m > 0, k > 0, c >= 0 (finite)");
    }
}

SmdParams SmdParams::with_damping_ratio(double m, double k, double zeta) {
    if (!(m > 0.0) || !(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "need m > 0, k > 0");
    return {m, 2.0 * zeta * std::sqrt(k * m), k};
}

StepForcing::StepForcing(double F0_) : F0(F0_) {
    if (F0 == 0.0 || !std::isfinite(F0)) {
        throw Error(ErrorCode::InvalidArgument, "step magnitude must be finite and nonzero");
    }
}

SettlingCriterion::SettlingCriterion(double band_, double horizon_factor_)
    : band(band_), horizon_factor(horizon_factor_) {
    if (!(band > 0.0 && band < 1.0)) throw Error(ErrorCode::InvalidArgument, "band must lie in (0, 1)");
    if (!(horizon_factor >= 4.0)) throw Error(ErrorCode::InvalidArgument, "horizon_factor must be >= 4");
}

ModalParameters modal_parameters(const SmdParams& p) {
    return {std::sqrt(p.k() / p.m()), p.c() / (2.0 * std::sqrt(p.k() * p.m()))};
}

SettlingResult heuristic_settling_time(const SmdParams& p, std::optional<StepForcing> f) {
    const auto [wn, zeta] = modal_parameters(p);
    if (zeta == 0.0) throw Error(ErrorCode::ZeroDamping, "heuristic undefined without damping");
    SettlingResult r;
    r.t_s = 4.0 / (zeta * wn);
    r.method = SettlingMethod::Heuristic;
    if (f) r.steady_state = f->F0 / p.k();
    return r;
}

double analytic_step_response(const SmdParams& p, const StepForcing& f, double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::OutOfDomain, "t must be >= 0");
    const auto [wn, zeta] = modal_parameters(p);
    const double y_ss = f.F0 / p.k();
    double u;
    if (zeta < 1.0) {
        const double root = std::sqrt(1.0 - zeta * zeta);
        const double wd = wn * root;
        u = 1.0 - std::exp(-zeta * wn * t) * (std::cos(wd * t) + zeta / root * std::sin(wd * t));
    } else if (zeta == 1.0) {
        u = 1.0 - std::exp(-wn * t) * (1.0 + wn * t);
    } else {
        const double root = std::sqrt(zeta * zeta - 1.0);
        const double s1 = -wn * (zeta - root);  // slow pole
        const double s2 = -wn * (zeta + root);
        u = 1.0 + (s2 * std::exp(s1 * t) - s1 * std::exp(s2 * t)) / (s1 - s2);
    }
    return y_ss * u;
}

double slowest_time_constant(const SmdParams& p) {
    const auto [wn, zeta] = modal_parameters(p);
    if (zeta == 0.0) return std::numeric_limits<double>::infinity();
    if (zeta <= 1.0) return 1.0 / (zeta * wn);
    return 1.0 / (wn * (zeta - std::sqrt(zeta * zeta - 1.0)));
}

namespace {

// Cubic Hermite interpolant of one accepted step, from displacement and
// velocity at both ends.
struct HermiteStep {
    double t0, h;
    double c0, c1, c2, c3;  // in s = (t - t0) / h

    HermiteStep(double ta, double tb, const numerics::State& ya, const numerics::State& yb)
        : t0(ta), h(tb - ta) {
        const double d0 = h * ya[1], d1 = h * yb[1];
        c0 = ya[0];
        c1 = d0;
        c2 = -3.0 * ya[0] - 2.0 * d0 + 3.0 * yb[0] - d1;
        c3 = 2.0 * ya[0] + d0 - 2.0 * yb[0] + d1;
    }

    [[nodiscard]] double operator()(double t) const {
        const double s = (t - t0) / h;
        return c0 + s * (c1 + s * (c2 + s * c3));
    }

    /// Interior stationary points, as times.
    [[nodiscard]] std::vector<double> extrema() const {
        std::vector<double> out;
        const double a = 3.0 * c3, b = 2.0 * c2, c = c1;
        const auto push = [&](double s) {
            if (s > 0.0 && s < 1.0) out.push_back(t0 + s * h);
        };
        if (std::abs(a) < 1e-300) {
            if (b != 0.0) push(-c / b);
        } else {
            const double disc = b * b - 4.0 * a * c;
            if (disc >= 0.0) {
                const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
                if (q != 0.0) push(c / q);
                push(q / a);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

constexpr int kSubdivisions = 64;
constexpr double kCrossingTol = 1e-6;

}  // namespace

SettlingResult numeric_settling_time(const SmdParams& p, const StepForcing& f,
                                     const SettlingCriterion& crit,
                                     const numerics::SolverConfig& solver) {
    const double zeta = modal_parameters(p).zeta;
    if (!(zeta > 0.0)) throw Error(ErrorCode::ZeroDamping, "numeric settling needs damping");

    const double y_ss = f.F0 / p.k();
    const double band = crit.band * std::abs(y_ss);
    const double horizon = crit.horizon_factor * slowest_time_constant(p);

    const double m = p.m(), c = p.c(), k = p.k(), F0 = f.F0;
    const numerics::OdeSystem system{2, [=](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = (F0 - c * y[1] - k * y[0]) / m;
    }};
    const auto traj = numerics::integrate_rk23(system, 0.0, {0.0, 0.0}, horizon, solver);

    const auto outside = [&](double y) { return std::abs(y - y_ss) - band; };
    if (outside(traj.final_state()[0]) > 0.0) {
        throw Error(ErrorCode::NoSettling,
                    "response still outside the band at t=" + shortest(horizon));
    }

    SettlingResult result;
    result.method = SettlingMethod::Numeric;
    result.steady_state = y_ss;
    result.max_step = traj.max_step();
    result.t_s = 0.0;

    // Walk back from the end to the last step whose interpolant leaves the band.
    for (std::size_t j = traj.size() - 1; j-- > 0;) {
        const HermiteStep step(traj.times[j], traj.times[j + 1], traj.states[j], traj.states[j + 1]);

        std::vector<double> probes;
        probes.reserve(kSubdivisions + 3);
        for (int i = 0; i <= kSubdivisions; ++i) probes.push_back(step.t0 + step.h * i / kSubdivisions);
        probes.back() = traj.times[j + 1];
        for (double te : step.extrema()) probes.push_back(te);
        std::sort(probes.begin(), probes.end());

        // Last probe outside the band; the following probe is inside.
        std::size_t last_out = probes.size();
        for (std::size_t i = probes.size(); i-- > 0;) {
            if (outside(step(probes[i])) > 0.0) {
                last_out = i;
                break;
            }
        }
        if (last_out == probes.size()) continue;
        if (last_out + 1 == probes.size()) {
            // Only possible at the left end of the final step; the right end is inside.
            result.t_s = probes.back();
            break;
        }
        const auto g = [&](double t) { return outside(step(t)); };
        result.t_s = numerics::bisection(g, probes[last_out], probes[last_out + 1], kCrossingTol).root;
        break;
    }
    return result;
}

ModelDescriptor heuristic_descriptor(double underdamped_limit) {
    GrayBoxSpec box{
        .inputs = {{"Spring-mass-damper parameters", 3, "sprung mass m, damping rate c, spring rate k"}},
        .relations = {{"natural frequency sqrt(k/m) and damping ratio c/(2 sqrt(km))", {"modal-parameters"}},
                      {"settling time 4/(zeta omega_n) for a step input",
                       {"modal-parameters", "step-forcing"}}},
        .outputs = {{"settling time t_s", "s"}},
    };
    ValidityFrame frame{{{"zeta", PredicateRelation::LessEqual, underdamped_limit},
                         {"forcing", PredicateRelation::Equal, std::string("step")}}};
    return {"smd.heuristic", FeatureSet{"modal-parameters", "step-forcing"}, std::move(box),
            std::move(frame), 1};
}

ModelDescriptor numeric_descriptor() {
    GrayBoxSpec box{
        .inputs = {{"Spring-mass-damper parameters", 3, "sprung mass m, damping rate c, spring rate k"},
                   {"Initial conditions", 2, "displacement and velocity at t = 0"},
                   {"Forcing function", 1, "step magnitude F0"},
                   {"Settling criterion", 2, "band fraction and simulated horizon"}},
        .relations = {{"natural frequency and damping ratio set the horizon", {"modal-parameters"}},
                      {"m y'' + c y' + k y = F0 with damping dissipating energy",
                       {"energy-dissipation-dynamics", "step-forcing"}},
                      {"adaptive 3(2) Runge-Kutta time response", {"time-domain-integration"}},
                      {"last exit from the band around the steady state F0/k",
                       {"time-domain-integration", "step-forcing"}}},
        .outputs = {{"settling time t_s", "s"}, {"steady state F0/k", "m"}},
    };
    ValidityFrame frame{{{"zeta", PredicateRelation::Greater, 0.0}}};
    return {"smd.numeric",
            FeatureSet{"modal-parameters", "step-forcing", "energy-dissipation-dynamics",
                       "time-domain-integration"},
            std::move(box), std::move(frame), 3};
}

}  // namespace mfid::sdof
