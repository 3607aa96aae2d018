#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idl/energy.hpp"
#include "idl/errors.hpp"
#include "idl/operator_core.hpp"
#include "idl/schedule.hpp"

namespace idl {

// Pre-history for the delayed velocity on [-tau, 0], described on M+1 coarse
// slots with spacing tau/M.
struct HistorySpec {
    enum class Rule { zero, constant, samples };
    Rule rule = Rule::zero;
    std::vector<double> constant_velocity;
    std::vector<std::vector<double>> sample_velocities;  // at -tau + j*tau/M, j = 0..M
    double tau = 0.0;
    int slots = 1;

    std::vector<double> slot_times() const {
        std::vector<double> t(static_cast<std::size_t>(slots) + 1);
        for (int j = 0; j <= slots; ++j) t[static_cast<std::size_t>(j)] = -tau + j * (tau / slots);
        return t;
    }
};

inline HistorySpec init_history(HistorySpec::Rule rule, double tau, int slots,
                                std::vector<double> constant_velocity = {},
                                std::vector<std::vector<double>> samples = {}) {
    if (tau <= 0.0) throw NonPositiveDelay("history: tau must be positive in delayed mode");
    if (slots < 1) throw Error("history: need at least one slot step to span [-tau, 0]");
    HistorySpec h;
    h.rule = rule;
    h.tau = tau;
    h.slots = slots;
    h.constant_velocity = std::move(constant_velocity);
    h.sample_velocities = std::move(samples);
    if (rule == HistorySpec::Rule::samples &&
        h.sample_velocities.size() != static_cast<std::size_t>(slots) + 1)
        throw Error("history: samples rule needs exactly slots+1 vectors");
    return h;
}

struct TrajectoryMeta {
    double dt = 0.0;
    long stride = 1;
    std::string scheme = "rk4-hermite";
    std::string scenario_hash;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SystemState> states;
    TrajectoryMeta meta;
};

struct RunSpec {
    const SpectralOperator* op = nullptr;
    const DampingSchedule* schedule = nullptr;
    bool nonlinearity_on = false;
    double p = 0.0;
    SystemState initial;
    double dt = 1e-3;
    long sample_stride = 1;
    int history_slots = 1;  // M: delay buffer resolution
    double horizon = 0.0;   // 0 = full schedule horizon
    double safety = 0.5;    // fraction of the explicit stability limit
    HistorySpec prehistory;
    std::string scenario_hash;
};

struct RunResult {
    Trajectory trajectory;
    EnergyTrace trace;
};

namespace detail {

// Classical fourth-order step for y' = f(t, y) with y = (a, v); the delayed
// velocity is resolved per stage by the caller.
template <class Rhs>
void rk4_step(Rhs&& rhs, double t, double h, std::vector<double>& a, std::vector<double>& v) {
    const std::size_t n = a.size();
    std::vector<double> ka1(n), kv1(n), ka2(n), kv2(n), ka3(n), kv3(n), ka4(n), kv4(n);
    std::vector<double> ta(n), tv(n);
    rhs(t, a, v, 0, ka1, kv1);
    for (std::size_t i = 0; i < n; ++i) {
        ta[i] = a[i] + 0.5 * h * ka1[i];
        tv[i] = v[i] + 0.5 * h * kv1[i];
    }
    rhs(t + 0.5 * h, ta, tv, 1, ka2, kv2);
    for (std::size_t i = 0; i < n; ++i) {
        ta[i] = a[i] + 0.5 * h * ka2[i];
        tv[i] = v[i] + 0.5 * h * kv2[i];
    }
    rhs(t + 0.5 * h, ta, tv, 1, ka3, kv3);
    for (std::size_t i = 0; i < n; ++i) {
        ta[i] = a[i] + h * ka3[i];
        tv[i] = v[i] + h * kv3[i];
    }
    rhs(t + h, ta, tv, 2, ka4, kv4);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] += h / 6.0 * (ka1[i] + 2.0 * ka2[i] + 2.0 * ka3[i] + ka4[i]);
        v[i] += h / 6.0 * (kv1[i] + 2.0 * kv2[i] + 2.0 * kv3[i] + kv4[i]);
    }
}

}  // namespace detail

// Fine-grained delay ring: one (velocity, acceleration) pair per integrator
// step over the trailing window [t - tau, t]. Lookups at step boundaries are
// exact reads; the half-step stage uses cubic Hermite between neighbours.
class DelayRing {
public:
    DelayRing(int dim, long delay_steps, double dt)
        : dim_(dim), delay_steps_(delay_steps), dt_(dt), capacity_(delay_steps + 2),
          v_(static_cast<std::size_t>(capacity_) * dim, 0.0),
          a_(static_cast<std::size_t>(capacity_) * dim, 0.0) {}

    long delay_steps() const { return delay_steps_; }

    void store(long step, std::span<const double> v, std::span<const double> acc) {
        const std::size_t base = slot(step) * static_cast<std::size_t>(dim_);
        std::copy(v.begin(), v.end(), v_.begin() + static_cast<std::ptrdiff_t>(base));
        std::copy(acc.begin(), acc.end(), a_.begin() + static_cast<std::ptrdiff_t>(base));
        head_ = step;
    }

    std::span<const double> velocity(long step) const {
        check_range(step);
        return {v_.data() + slot(step) * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }

    std::span<const double> acceleration(long step) const {
        check_range(step);
        return {a_.data() + slot(step) * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }

    // Velocity at (step + 1/2) by cubic Hermite on the bracketing entries.
    void velocity_mid(long step, std::vector<double>& out) const {
        const auto v0 = velocity(step);
        const auto v1 = velocity(step + 1);
        const auto a0 = acceleration(step);
        const auto a1 = acceleration(step + 1);
        out.resize(static_cast<std::size_t>(dim_));
        for (int i = 0; i < dim_; ++i) {
            // theta = 1/2: basis values 1/2, h/8, 1/2, -h/8
            out[static_cast<std::size_t>(i)] =
                0.5 * (v0[static_cast<std::size_t>(i)] + v1[static_cast<std::size_t>(i)]) +
                0.125 * dt_ * (a0[static_cast<std::size_t>(i)] - a1[static_cast<std::size_t>(i)]);
        }
    }

private:
    int dim_;
    long delay_steps_;
    double dt_;
    long capacity_;
    std::vector<double> v_, a_;
    long head_ = 0;

    std::size_t slot(long step) const {
        long s = step % capacity_;
        if (s < 0) s += capacity_;
        return static_cast<std::size_t>(s);
    }

    void check_range(long step) const {
        if (step > head_ || step < head_ - capacity_ + 1)
            throw HistoryGap("delay ring: step " + std::to_string(step) + " outside window");
    }
};

class Integrator {
public:
    explicit Integrator(const RunSpec& spec) : spec_(spec) {
        if (!spec.op || !spec.schedule) throw Error("integrator: missing operator or schedule");
        const SpectralOperator& op = *spec.op;
        op.check_dimension(spec.initial.position.size());
        op.check_dimension(spec.initial.velocity.size());
        if (!(spec.dt > 0.0)) throw Error("integrator: dt must be positive");
        const double dt_max = spec.safety * 2.0 / std::sqrt(op.lambda_max());
        if (spec.dt > dt_max)
            throw StabilityGuard("integrator: dt = " + std::to_string(spec.dt) +
                                 " exceeds stability guard " + std::to_string(dt_max));

        horizon_ = spec.horizon > 0.0 ? spec.horizon : spec.schedule->horizon();
        if (horizon_ > spec.schedule->horizon() + 1e-9 * std::max(1.0, horizon_))
            throw ValidationError("integrator: horizon exceeds schedule horizon");
        steps_ = snap_to_grid(horizon_, spec.dt, "horizon");
        for (const Interval& iv : spec.schedule->intervals()) {
            if (iv.t_end > horizon_ + 1e-9) break;
            snap_to_grid(iv.t_end, spec.dt, "switch time");
        }
        if (spec.sample_stride < 1) throw ValidationError("integrator: sample stride must be >= 1");
        if (steps_ % spec.sample_stride != 0)
            throw ValidationError("integrator: sample stride must divide the step count");

        const DampingGeometry& geo = spec.schedule->geometry();
        if (!geo.distributed) {
            K_omega_ = op.region_mass_matrix(geo.omega.a, geo.omega.b);
            K_tilde_ = op.region_mass_matrix(geo.omega_tilde.a, geo.omega_tilde.b);
        }
        if (spec.nonlinearity_on && !op.has_geometry())
            throw MissingGeometry("integrator: nonlinearity needs operator geometry");
        if (spec.schedule->mode() == DampingMode::delayed && !spec.schedule->has_delay() &&
            spec.schedule->has_active_odd())
            throw ValidationError("integrator: delayed feedback active but tau = 0");

        state_ = spec.initial;
        state_.time = 0.0;

        if (spec.schedule->has_delay()) {
            const double tau = spec.schedule->tau();
            const int M = std::max(1, spec.history_slots);
            const double slot_dt = tau / M;
            const double ratio = slot_dt / spec.dt;
            const long r = std::llround(ratio);
            if (r < 1 || std::abs(r * spec.dt - slot_dt) > 1e-9 * slot_dt)
                throw ValidationError("integrator: dt must divide tau/M exactly");
            delay_steps_ = static_cast<long>(M) * r;
            ring_.emplace(op.mode_count(), delay_steps_, spec.dt);
            seed_ring();
        }
    }

    long steps_total() const { return steps_; }
    double horizon() const { return horizon_; }
    const SystemState& state() const { return state_; }

    void step_once() {
        if (step_index_ >= steps_) throw OutOfHorizon("integrator: past end of run");
        const double t = step_index_ * spec_.dt;
        std::vector<double> vd0, vdh, vd1;
        if (ring_) {
            vd0.assign(ring_->velocity(step_index_ - delay_steps_).begin(),
                       ring_->velocity(step_index_ - delay_steps_).end());
            ring_->velocity_mid(step_index_ - delay_steps_, vdh);
            vd1.assign(ring_->velocity(step_index_ - delay_steps_ + 1).begin(),
                       ring_->velocity(step_index_ - delay_steps_ + 1).end());
        }
        const std::vector<double>* delayed[3] = {&vd0, &vdh, &vd1};
        // Switch times sit on the step grid, so the whole step belongs to the
        // interval of its left endpoint; the interval's coefficient extends
        // continuously to the closed right endpoint.
        const Interval& iv = spec_.schedule->interval_at_clamped(t);
        detail::rk4_step(
            [&](double ts, const std::vector<double>& a, const std::vector<double>& v,
                int stage_slot, std::vector<double>& da, std::vector<double>& dv) {
                rhs(ts, iv, a, v, ring_ ? delayed[stage_slot] : nullptr, da, dv);
            },
            t, spec_.dt, state_.position, state_.velocity);
        ++step_index_;
        state_.time = step_index_ * spec_.dt;
        if (ring_) {
            acceleration_at(state_.time, state_.position, state_.velocity, acc_buf_);
            ring_->store(step_index_, state_.velocity, acc_buf_);
        }
    }

    // Energy row for the current state, including the delay integral.
    EnergyRow sample_row() const {
        EnergyRow row;
        row.t = state_.time;
        row.E_S = energy_standard(*spec_.op, state_, spec_.p, spec_.nonlinearity_on);
        row.delay_integral = 0.0;
        if (ring_) {
            const double dt = spec_.dt;
            const long start = step_index_ - delay_steps_;
            std::vector<double> times(static_cast<std::size_t>(delay_steps_) + 1);
            for (long j = 0; j <= delay_steps_; ++j)
                times[static_cast<std::size_t>(j)] = (start + j) * dt;
            row.delay_integral =
                0.5 * detail::delay_integral_trapezoid(
                          *spec_.schedule, K_tilde_ ? &*K_tilde_ : nullptr, times,
                          [&](std::size_t j) {
                              return ring_->velocity(start + static_cast<long>(j));
                          });
        }
        row.E = row.E_S + row.delay_integral;
        const CoeffSample cs = spec_.schedule->coefficients_at_clamped(state_.time);
        row.interval_index = cs.interval_index;
        row.parity = cs.parity;
        row.b1 = cs.b1;
        row.b_odd = cs.b_odd;
        return row;
    }

    const Matrix* K_omega() const { return K_omega_ ? &*K_omega_ : nullptr; }
    const Matrix* K_tilde() const { return K_tilde_ ? &*K_tilde_ : nullptr; }

private:
    RunSpec spec_;
    SystemState state_;
    double horizon_ = 0.0;
    long steps_ = 0;
    long step_index_ = 0;
    long delay_steps_ = 0;
    std::optional<DelayRing> ring_;
    std::optional<Matrix> K_omega_, K_tilde_;
    std::vector<double> acc_buf_, gv_buf_, kv_buf_;

    static long snap_to_grid(double t, double dt, const char* what) {
        const long k = std::llround(t / dt);
        if (k < 0 || std::abs(k * dt - t) > 1e-9 * std::max(1.0, std::abs(t)))
            throw ValidationError(std::string("integrator: ") + what + " " + std::to_string(t) +
                                  " is not a multiple of dt");
        return k;
    }

    void seed_ring() {
        const HistorySpec& h = spec_.prehistory;
        const int dim = spec_.op->mode_count();
        std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
        std::vector<double> a(static_cast<std::size_t>(dim), 0.0);
        for (long s = -delay_steps_; s < 0; ++s) {
            fill_prehistory_value(h, s * spec_.dt, v, a);
            ring_->store(s, v, a);
        }
        acceleration_at(0.0, state_.position, state_.velocity, acc_buf_);
        ring_->store(0, state_.velocity, acc_buf_);
    }

    void fill_prehistory_value(const HistorySpec& h, double t, std::vector<double>& v,
                               std::vector<double>& a) const {
        const int dim = spec_.op->mode_count();
        std::fill(v.begin(), v.end(), 0.0);
        std::fill(a.begin(), a.end(), 0.0);
        switch (h.rule) {
            case HistorySpec::Rule::zero:
                return;
            case HistorySpec::Rule::constant:
                if (h.constant_velocity.size() != static_cast<std::size_t>(dim))
                    throw DimensionMismatch("history: constant velocity dimension");
                v = h.constant_velocity;
                return;
            case HistorySpec::Rule::samples: {
                const double tau = spec_.schedule->tau();
                const int M = h.slots;
                if (h.sample_velocities.size() != static_cast<std::size_t>(M) + 1)
                    throw Error("history: samples rule needs slots+1 vectors");
                const double pos = (t + tau) / (tau / M);  // coarse index coordinate
                long j = static_cast<long>(std::floor(pos));
                if (j < 0) j = 0;
                if (j > M - 1) j = M - 1;
                const double theta = pos - j;
                const auto& s0 = h.sample_velocities[static_cast<std::size_t>(j)];
                const auto& s1 = h.sample_velocities[static_cast<std::size_t>(j) + 1];
                if (s0.size() != static_cast<std::size_t>(dim) ||
                    s1.size() != static_cast<std::size_t>(dim))
                    throw DimensionMismatch("history: sample dimension");
                const double slot_dt = tau / M;
                for (int i = 0; i < dim; ++i) {
                    const std::size_t si = static_cast<std::size_t>(i);
                    // finite-difference slopes at the coarse points
                    const double d0 = coarse_slope(h, j, i, slot_dt);
                    const double d1 = coarse_slope(h, j + 1, i, slot_dt);
                    const double t2 = theta * theta, t3 = t2 * theta;
                    v[si] = (2 * t3 - 3 * t2 + 1) * s0[si] + (t3 - 2 * t2 + theta) * slot_dt * d0 +
                            (-2 * t3 + 3 * t2) * s1[si] + (t3 - t2) * slot_dt * d1;
                    a[si] = ((6 * t2 - 6 * theta) * s0[si] + (3 * t2 - 4 * theta + 1) * slot_dt * d0 +
                             (-6 * t2 + 6 * theta) * s1[si] + (3 * t2 - 2 * theta) * slot_dt * d1) /
                            slot_dt;
                }
                return;
            }
        }
    }

    double coarse_slope(const HistorySpec& h, long j, int i, double slot_dt) const {
        const long M = h.slots;
        const std::size_t si = static_cast<std::size_t>(i);
        auto val = [&](long k) { return h.sample_velocities[static_cast<std::size_t>(k)][si]; };
        if (j <= 0) return (val(1) - val(0)) / slot_dt;
        if (j >= M) return (val(M) - val(M - 1)) / slot_dt;
        return (val(j + 1) - val(j - 1)) / (2.0 * slot_dt);
    }

    void rhs(double t, const Interval& iv, const std::vector<double>& a,
             const std::vector<double>& v, const std::vector<double>* v_delayed,
             std::vector<double>& da, std::vector<double>& dv) {
        const SpectralOperator& op = *spec_.op;
        const int n = op.mode_count();
        da = v;
        dv.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            dv[static_cast<std::size_t>(k)] = -op.eigenvalues()[static_cast<std::size_t>(k)] *
                                              a[static_cast<std::size_t>(k)];
        const double b1 = iv.b1(t);
        if (b1 != 0.0) {
            const std::vector<double>* gv = &v;
            if (spec_.schedule->feedback()) {
                gv_buf_.resize(static_cast<std::size_t>(n));
                spec_.schedule->feedback()->apply(v, gv_buf_);
                gv = &gv_buf_;
            }
            apply_region(K_omega_, *gv, b1, -1.0, dv);
        }
        const double b_odd = iv.b_odd(t);
        if (b_odd != 0.0) {
            if (spec_.schedule->mode() == DampingMode::delayed) {
                if (v_delayed) apply_region(K_tilde_, *v_delayed, b_odd, -1.0, dv);
            } else {
                apply_region(K_tilde_, v, b_odd, +1.0, dv);
            }
        }
        if (spec_.nonlinearity_on) {
            const NonlinearityEval nl = eval_nonlinearity(op, a, spec_.p);
            for (int k = 0; k < n; ++k)
                dv[static_cast<std::size_t>(k)] += nl.modal_force[static_cast<std::size_t>(k)];
        }
    }

    void apply_region(const std::optional<Matrix>& K, const std::vector<double>& v, double coeff,
                      double sign, std::vector<double>& dv) {
        const std::size_t n = v.size();
        if (K) {
            kv_buf_.resize(n);
            K->matvec(v, kv_buf_);
            for (std::size_t k = 0; k < n; ++k) dv[k] += sign * coeff * kv_buf_[k];
        } else {
            for (std::size_t k = 0; k < n; ++k) dv[k] += sign * coeff * v[k];
        }
    }

    // Right-continuous acceleration for the history slots: at a switch instant
    // the slot carries the value seen entering the next step.
    void acceleration_at(double t, const std::vector<double>& a, const std::vector<double>& v,
                         std::vector<double>& out) {
        std::vector<double> da;
        const std::vector<double>* vd = nullptr;
        std::vector<double> vd_store;
        if (ring_) {
            const auto sp = ring_->velocity(step_index_ - delay_steps_);
            vd_store.assign(sp.begin(), sp.end());
            vd = &vd_store;
        }
        out.resize(a.size());
        rhs(t, spec_.schedule->interval_at_clamped(t), a, v, vd, da, out);
    }
};

// Deterministic fixed-step run; identical inputs reproduce the trajectory
// bit for bit.
inline RunResult run_scenario(const RunSpec& spec) {
    Integrator integ(spec);
    RunResult out;
    out.trajectory.meta.dt = spec.dt;
    out.trajectory.meta.stride = spec.sample_stride;
    out.trajectory.meta.scenario_hash = spec.scenario_hash;
    out.trace.scenario_hash = spec.scenario_hash;
    const long steps = integ.steps_total();
    for (long s = 0;; ++s) {
        if (s % spec.sample_stride == 0) {
            out.trajectory.times.push_back(integ.state().time);
            out.trajectory.states.push_back(integ.state());
            out.trace.rows.push_back(integ.sample_row());
        }
        if (s == steps) break;
        integ.step_once();
    }
    return out;
}

}  // namespace idl
