#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "idl/dde_integrator.hpp"
#include "idl/energy.hpp"
#include "idl/errors.hpp"
#include "idl/schedule.hpp"

namespace idl {

struct ObservabilityEstimate {
    double d_hat_emp = 0.0;  // max trial ratio E_S(end)/E_S(start)
    double d = 0.0;          // implied observability constant d_hat/(1 - d_hat)
    bool non_observable = false;
    int trials = 0;
    std::vector<double> ratios;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in [-1, 1], reproducible across platforms.
inline double uniform_pm1(std::uint64_t& state) {
    state = splitmix64(state);
    return 2.0 * ((state >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace detail

// Empirical stand-in for the even-interval observability constant: runs the
// damped-only dynamics from R random initial states over one even interval and
// reports the worst energy ratio. Evidence, not a proof: the true d_n is a
// supremum over all data.
inline ObservabilityEstimate estimate_observability_constant(
    const SpectralOperator& op, const DampingSchedule& schedule, int even_interval_index,
    double dt, int trials, std::uint64_t seed, bool nonlinearity_on = false, double p = 0.0) {
    if (trials < 1) throw Error("observability: need at least one trial");
    const auto& ivs = schedule.intervals();
    if (even_interval_index < 0 || even_interval_index >= static_cast<int>(ivs.size()))
        throw Error("observability: interval index out of range");
    const Interval& iv = ivs[static_cast<std::size_t>(even_interval_index)];
    if (iv.parity != Parity::even) throw Error("observability: interval is not even");

    // Single-interval restriction with the coefficient clock shifted to zero.
    const double t0 = iv.t_begin;
    CoefficientFn b1 = iv.b1;
    if (!b1.is_constant()) {
        auto orig = iv.b1;
        b1.fn = [orig, t0](double t) { return orig(t + t0); };
    }
    DampingSchedule sub = DampingSchedule::explicit_schedule(
        {0.0, iv.length()}, {EvenRecord{b1, iv.m, iv.M}}, {}, 0.0, DampingMode::delayed,
        schedule.geometry(), schedule.feedback());

    const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(iv.length() / dt)));
    const double dt_eff = iv.length() / static_cast<double>(n_steps);

    ObservabilityEstimate out;
    out.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        std::uint64_t rng = detail::splitmix64(seed ^ (0x51ed2701ULL + static_cast<std::uint64_t>(trial)));
        RunSpec spec;
        spec.op = &op;
        spec.schedule = &sub;
        spec.nonlinearity_on = nonlinearity_on;
        spec.p = p;
        spec.dt = dt_eff;
        spec.sample_stride = n_steps;
        spec.initial.position.resize(static_cast<std::size_t>(op.mode_count()));
        spec.initial.velocity.resize(static_cast<std::size_t>(op.mode_count()));
        for (double& x : spec.initial.position) x = detail::uniform_pm1(rng);
        for (double& x : spec.initial.velocity) x = detail::uniform_pm1(rng);
        const RunResult run = run_scenario(spec);
        const double e0 = run.trace.rows.front().E_S;
        const double e1 = run.trace.rows.back().E_S;
        if (!(e0 > 0.0)) throw DegenerateTrial("observability: zero initial energy");
        out.ratios.push_back(e1 / e0);
        out.d_hat_emp = std::max(out.d_hat_emp, e1 / e0);
    }
    if (out.d_hat_emp >= 1.0 - 1e-12) {
        out.non_observable = true;
        out.d = std::numeric_limits<double>::infinity();
    } else {
        out.d = out.d_hat_emp / (1.0 - out.d_hat_emp);
    }
    return out;
}

}  // namespace idl
