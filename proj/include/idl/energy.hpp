#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idl/errors.hpp"
#include "idl/operator_core.hpp"
#include "idl/schedule.hpp"
#include "idl/stability_criteria.hpp"

namespace idl {

struct EnergyRow {
    double t = 0.0;
    double E_S = 0.0;
    double E = 0.0;
    double delay_integral = 0.0;
    int interval_index = 0;
    Parity parity = Parity::even;
    double b1 = 0.0;
    double b_odd = 0.0;
};

struct EnergyTrace {
    std::vector<EnergyRow> rows;
    std::string scenario_hash;
};

// E_S = (||u||_V^2 + ||u_t||_H^2)/2 - F(u); the functional F is <= 0, so the
// nonlinear term only adds energy.
inline double energy_standard(const SpectralOperator& op, const SystemState& state, double p,
                              bool nonlinearity_on) {
    const NormSet ns = norms(op, state);
    double e = 0.5 * (ns.v_sq_position + ns.h_sq_velocity);
    if (nonlinearity_on) e -= eval_nonlinearity(op, state.position, p).functional;
    return e;
}

namespace detail {

// Trapezoid of  |b2(s+tau)| * v(s)^T K v(s)  over the history window; the
// shifted coefficient is zero wherever the schedule carries no b2 support.
template <class VelAt>
double delay_integral_trapezoid(const DampingSchedule& schedule, const Matrix* K_tilde,
                                std::span<const double> times, VelAt&& vel_at) {
    double integral = 0.0;
    double prev = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double b2 = schedule.odd_coefficient_or_zero(times[j] + schedule.tau());
        const double cur = std::abs(b2) * w_norm_sq(K_tilde, vel_at(j));
        if (j > 0) integral += 0.5 * (prev + cur) * (times[j] - times[j - 1]);
        prev = cur;
    }
    return integral;
}

}  // namespace detail

struct DelayedEnergy {
    double E = 0.0;
    double delay_integral = 0.0;
};

// E = E_S + (1/2) integral over [t - tau, t] of ||B2*(s+tau) u_t(s)||^2 ds.
inline DelayedEnergy energy_delayed(const SpectralOperator& op, const SystemState& state, double p,
                                    bool nonlinearity_on,
                                    std::span<const double> window_times,
                                    std::span<const std::vector<double>> window_velocities,
                                    const DampingSchedule& schedule, const Matrix* K_tilde) {
    if (schedule.mode() != DampingMode::delayed || schedule.tau() <= 0.0)
        throw Error("energy_delayed: needs delayed mode with tau > 0");
    if (window_times.size() != window_velocities.size() || window_times.size() < 2)
        throw HistoryGap("energy_delayed: malformed history window");
    const double tau = schedule.tau();
    const double tol = 1e-9 * std::max(1.0, tau);
    if (window_times.front() > state.time - tau + tol || window_times.back() < state.time - tol)
        throw HistoryGap("energy_delayed: window does not cover [t - tau, t]");
    DelayedEnergy out;
    out.delay_integral =
        0.5 * detail::delay_integral_trapezoid(schedule, K_tilde, window_times,
                                               [&](std::size_t j) {
                                                   return std::span<const double>(
                                                       window_velocities[j]);
                                               });
    out.E = energy_standard(op, state, p, nonlinearity_on) + out.delay_integral;
    return out;
}

struct EvenIntervalCheck {
    int n = 0;
    double t_begin = 0.0;
    double length = 0.0;
    double ratio = 0.0;
    std::optional<double> bound;
    bool ratio_ok = true;
    bool monotone_ok = true;
    double worst_monotone_jump = 0.0;
};

struct OddIntervalCheck {
    int n = 0;
    double t_begin = 0.0;
    double length = 0.0;
    double growth = 0.0;
    double bound = 1.0;
    bool growth_ok = true;
    bool pointwise_ok = true;
    bool monotone_up_ok = true;  // checked in negative mode only
};

struct IntervalReport {
    std::vector<EvenIntervalCheck> evens;
    std::vector<OddIntervalCheck> odds;
    std::vector<std::string> violations;
    bool all_ok() const { return violations.empty(); }
};

struct ReportInputs {
    std::optional<double> lambda1;           // distributed even-interval bound
    std::optional<double> d_constant;        // localized observability constant
    double C_embed = 1.0;                    // C (delayed) or C3 (negative mode)
    double rel_slack = 1e-6;                 // absorbs integrator error in bound checks
    double monotone_tol_factor = 1e-10;      // x E_S(0)
};

namespace detail {

inline std::size_t row_at_time(const EnergyTrace& trace, double t) {
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    auto it = std::lower_bound(trace.rows.begin(), trace.rows.end(), t - tol,
                               [](const EnergyRow& r, double x) { return r.t < x; });
    if (it == trace.rows.end() || std::abs(it->t - t) > tol)
        throw MissingEndpointSample("interval_report: no sample at t = " + std::to_string(t));
    return static_cast<std::size_t>(it - trace.rows.begin());
}

}  // namespace detail

// Compares observed per-interval contraction/growth against the closed-form
// bounds: contraction factor (or d_hat) on even intervals, exp(2 C M T) on the
// intervals carrying the delayed or negative feedback.
inline IntervalReport interval_report(const EnergyTrace& trace, const DampingSchedule& schedule,
                                      const ReportInputs& in) {
    if (trace.rows.empty()) throw MissingEndpointSample("interval_report: empty trace");
    IntervalReport rep;
    const double e0 = trace.rows.front().E_S;
    const double mono_tol = in.monotone_tol_factor * std::max(e0, 1e-300);
    const bool negative_mode = schedule.mode() == DampingMode::negative;

    for (const IntervalRow& row : schedule.interval_table()) {
        const double t_a = row.t_begin;
        const double t_b = row.t_begin + row.length;
        // Skip intervals beyond the simulated horizon.
        if (t_b > trace.rows.back().t + 1e-9 * std::max(1.0, t_b)) break;
        const std::size_t ia = detail::row_at_time(trace, t_a);
        const std::size_t ib = detail::row_at_time(trace, t_b);

        if (row.parity == Parity::even) {
            EvenIntervalCheck ec;
            ec.n = row.n;
            ec.t_begin = t_a;
            ec.length = row.length;
            const double ea = trace.rows[ia].E_S;
            const double eb = trace.rows[ib].E_S;
            ec.ratio = ea > 0.0 ? eb / ea : (eb > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
            if (schedule.geometry().distributed) {
                if (in.lambda1 && row.m > 0.0)
                    ec.bound = obs_contraction_constant(row.length, row.m, row.M, *in.lambda1);
            } else if (in.d_constant) {
                ec.bound = d_hat(*in.d_constant);
            }
            if (ec.bound) {
                ec.ratio_ok = ec.ratio <= *ec.bound * (1.0 + in.rel_slack);
                if (!ec.ratio_ok)
                    rep.violations.push_back("even interval " + std::to_string(row.n) +
                                             ": contraction ratio " + std::to_string(ec.ratio) +
                                             " exceeds bound " + std::to_string(*ec.bound));
            }
            for (std::size_t i = ia + 1; i <= ib; ++i) {
                const double jump = trace.rows[i].E_S - trace.rows[i - 1].E_S;
                ec.worst_monotone_jump = std::max(ec.worst_monotone_jump, jump);
            }
            if (ec.worst_monotone_jump > mono_tol) {
                ec.monotone_ok = false;
                rep.violations.push_back("even interval " + std::to_string(row.n) +
                                         ": E_S not non-increasing");
            }
            rep.evens.push_back(ec);
        } else {
            OddIntervalCheck oc;
            oc.n = row.n;
            oc.t_begin = t_a;
            oc.length = row.length;
            const double Ea = trace.rows[ia].E;
            const double Eb = trace.rows[ib].E;
            oc.growth = Ea > 0.0 ? Eb / Ea : 1.0;
            oc.bound = std::exp(2.0 * in.C_embed * row.M_odd * row.length);
            oc.growth_ok = oc.growth <= oc.bound * (1.0 + in.rel_slack);
            if (!oc.growth_ok)
                rep.violations.push_back("odd interval " + std::to_string(row.n) +
                                         ": growth " + std::to_string(oc.growth) +
                                         " exceeds bound " + std::to_string(oc.bound));
            for (std::size_t i = ia; i <= ib; ++i) {
                const double dt_rel = trace.rows[i].t - t_a;
                const double cap = std::exp(2.0 * in.C_embed * row.M_odd * dt_rel) * Ea *
                                   (1.0 + in.rel_slack);
                if (trace.rows[i].E > cap + 1e-300) {
                    oc.pointwise_ok = false;
                    rep.violations.push_back("odd interval " + std::to_string(row.n) +
                                             ": pointwise growth bound broken at t = " +
                                             std::to_string(trace.rows[i].t));
                    break;
                }
            }
            if (negative_mode) {
                for (std::size_t i = ia + 1; i <= ib; ++i) {
                    if (trace.rows[i].E_S < trace.rows[i - 1].E_S - mono_tol) {
                        oc.monotone_up_ok = false;
                        rep.violations.push_back("odd interval " + std::to_string(row.n) +
                                                 ": E_S not non-decreasing");
                        break;
                    }
                }
            }
            rep.odds.push_back(oc);
        }
    }
    return rep;
}

struct DissipationCheck {
    int n = 0;
    double energy_drop = 0.0;
    double damping_integral = 0.0;
    double residual_rel = 0.0;
};

// Discrete check of  E_S(t_b) - E_S(t_a) + integral b1 <u_t, K g(u_t)> dt = 0
// on even intervals, from a stride-1 trajectory.
template <class StateAt>
std::vector<DissipationCheck> dissipation_identity(std::span<const double> times, StateAt&& state_at,
                                                   const SpectralOperator& op,
                                                   const DampingSchedule& schedule,
                                                   const Matrix* K_omega, double p,
                                                   bool nonlinearity_on) {
    std::vector<DissipationCheck> out;
    if (times.size() < 2) return out;
    const double dt = times[1] - times[0];
    std::vector<double> gv;
    // The integrand takes the owning interval's coefficient so its right
    // endpoint carries the left limit, not the next interval's value.
    auto integrand = [&](std::size_t i, const Interval& iv) {
        const SystemState& st = state_at(i);
        const double b1 = iv.b1(times[i]);
        if (b1 == 0.0) return 0.0;
        const auto& v = st.velocity;
        double inner;
        if (schedule.feedback() && !schedule.feedback()->is_identity()) {
            gv.resize(v.size());
            schedule.feedback()->apply(v, gv);
            if (K_omega) {
                std::vector<double> kg(v.size());
                K_omega->matvec(gv, kg);
                inner = 0.0;
                for (std::size_t k = 0; k < v.size(); ++k) inner += v[k] * kg[k];
            } else {
                inner = 0.0;
                for (std::size_t k = 0; k < v.size(); ++k) inner += v[k] * gv[k];
            }
        } else {
            inner = w_norm_sq(K_omega, v);
        }
        return b1 * inner;
    };
    for (const IntervalRow& row : schedule.interval_table()) {
        if (row.parity != Parity::even) continue;
        const Interval& owner = schedule.intervals()[static_cast<std::size_t>(row.n)];
        const double t_a = row.t_begin, t_b = row.t_begin + row.length;
        if (t_b > times.back() + 1e-9) break;
        const std::size_t ia = static_cast<std::size_t>(std::llround((t_a - times[0]) / dt));
        const std::size_t ib = static_cast<std::size_t>(std::llround((t_b - times[0]) / dt));
        if (ia >= times.size() || ib >= times.size())
            throw MissingEndpointSample("dissipation: interval endpoints not sampled");
        // Composite Simpson; a 3/8 block absorbs an odd panel count.
        const std::size_t panels = ib - ia;
        if (panels < 2) continue;
        double integral = 0.0;
        std::size_t stop = ib;
        if (panels % 2 == 1) {
            stop = ib - 3;
            integral += 3.0 * dt / 8.0 *
                        (integrand(stop, owner) + 3.0 * integrand(stop + 1, owner) +
                         3.0 * integrand(stop + 2, owner) + integrand(ib, owner));
        }
        for (std::size_t i = ia; i + 2 <= stop; i += 2)
            integral += dt / 3.0 * (integrand(i, owner) + 4.0 * integrand(i + 1, owner) +
                                    integrand(i + 2, owner));
        DissipationCheck c;
        c.n = row.n;
        const double ea = energy_standard(op, state_at(ia), p, nonlinearity_on);
        const double eb = energy_standard(op, state_at(ib), p, nonlinearity_on);
        c.energy_drop = eb - ea;
        c.damping_integral = integral;
        c.residual_rel = std::abs(c.energy_drop + integral) / std::max(ea, 1e-300);
        out.push_back(c);
    }
    return out;
}

// Least-squares slope of log E_S over the trailing fraction of the trace.
inline double fit_log_energy_rate(const EnergyTrace& trace, double trailing_fraction = 0.5) {
    if (trace.rows.size() < 4) throw Error("rate fit: trace too short");
    const double t0 = trace.rows.front().t, t1 = trace.rows.back().t;
    const double cut = t1 - trailing_fraction * (t1 - t0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (const EnergyRow& r : trace.rows) {
        if (r.t < cut || r.E_S <= 0.0) continue;
        const double x = r.t, y = std::log(r.E_S);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) throw Error("rate fit: not enough positive-energy samples");
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw Error("rate fit: degenerate sample times");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace idl
