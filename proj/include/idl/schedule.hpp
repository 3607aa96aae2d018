#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "idl/errors.hpp"
#include "idl/operator_core.hpp"

namespace idl {

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

enum class DampingMode { delayed, negative };

// Per-interval coefficient: a constant unless a sampled callable is attached.
struct CoefficientFn {
    double value = 0.0;
    std::function<double(double)> fn;

    double operator()(double t) const { return fn ? fn(t) : value; }
    bool is_constant() const { return !fn; }

    static CoefficientFn constant(double v) { return CoefficientFn{v, nullptr}; }
    static CoefficientFn zero() { return constant(0.0); }
};

struct Region {
    double a = 0.0;
    double b = 0.0;
};

struct DampingGeometry {
    bool distributed = true;
    Region omega;        // support of the stabilizing feedback B_1
    Region omega_tilde;  // support of B_2 (delayed) or B_3 (negative)

    static DampingGeometry make_distributed() { return DampingGeometry{}; }
    static DampingGeometry localized(Region om, Region om_tilde) {
        return DampingGeometry{false, om, om_tilde};
    }
};

// One interval I_n = [t_begin, t_end). Even intervals carry the undelayed
// coefficient b1 with bounds 0 < m <= b1 <= M; odd intervals carry the delayed
// coefficient b2 (or the negative-damping coefficient b3) with |b| <= M_odd.
struct Interval {
    double t_begin = 0.0;
    double t_end = 0.0;
    Parity parity = Parity::even;
    CoefficientFn b1;
    CoefficientFn b_odd;
    double m = 0.0;
    double M = 0.0;
    double M_odd = 0.0;

    double length() const { return t_end - t_begin; }
};

struct EvenRecord {
    CoefficientFn b1;
    double m = 0.0;
    double M = 0.0;
};

struct OddRecord {
    CoefficientFn b;
    double M = 0.0;
};

struct CoeffSample {
    double b1 = 0.0;
    double b_odd = 0.0;
    int interval_index = 0;
    Parity parity = Parity::even;
};

struct IntervalRow {
    int n = 0;
    double t_begin = 0.0;
    double length = 0.0;
    Parity parity = Parity::even;
    double m = 0.0;
    double M = 0.0;
    double M_odd = 0.0;
};

struct Violation {
    std::string kind;
    int interval = -1;
    std::string detail;
};

class DampingSchedule {
public:
    DampingSchedule() = default;

    // Low-level constructor; validate_schedule reports whatever is wrong.
    static DampingSchedule from_intervals(std::vector<Interval> intervals, double tau,
                                          DampingMode mode, DampingGeometry geometry,
                                          std::optional<FeedbackG> g = std::nullopt) {
        DampingSchedule s;
        s.intervals_ = std::move(intervals);
        s.tau_ = tau;
        s.mode_ = mode;
        s.geometry_ = geometry;
        s.g_ = std::move(g);
        return s;
    }

    // Builds intervals from switch times plus per-parity records. Parity
    // alternates starting even when both record lists are present; a single
    // record kind yields a uniform-parity schedule (on-off damping, or a
    // delay-only run driven entirely from pre-history).
    static DampingSchedule explicit_schedule(const std::vector<double>& switch_times,
                                             const std::vector<EvenRecord>& even,
                                             const std::vector<OddRecord>& odd, double tau,
                                             DampingMode mode, DampingGeometry geometry,
                                             std::optional<FeedbackG> g = std::nullopt) {
        if (switch_times.size() < 2) throw Error("schedule: need at least one interval");
        const std::size_t count = switch_times.size() - 1;
        const bool alternating = !even.empty() && !odd.empty();
        std::vector<Interval> intervals(count);
        std::size_t ei = 0, oi = 0;
        for (std::size_t j = 0; j < count; ++j) {
            Interval& iv = intervals[j];
            iv.t_begin = switch_times[j];
            iv.t_end = switch_times[j + 1];
            const bool is_even = alternating ? (j % 2 == 0) : !even.empty();
            if (is_even) {
                if (ei >= even.size()) throw Error("schedule: missing even-interval record");
                iv.parity = Parity::even;
                iv.b1 = even[ei].b1;
                iv.m = even[ei].m;
                iv.M = even[ei].M;
                iv.b_odd = CoefficientFn::zero();
                ++ei;
            } else {
                if (oi >= odd.size()) throw Error("schedule: missing odd-interval record");
                iv.parity = Parity::odd;
                iv.b_odd = odd[oi].b;
                iv.M_odd = odd[oi].M;
                iv.b1 = CoefficientFn::zero();
                ++oi;
            }
        }
        return from_intervals(std::move(intervals), tau, mode, geometry, std::move(g));
    }

    // Alternating schedule of `pairs` (even, odd) interval pairs with fixed
    // lengths; the odd coefficient may vary with the pair index n.
    static DampingSchedule periodic(int pairs, double t_even, double t_odd, double b1_value,
                                    const std::function<double(int)>& odd_value, double tau,
                                    DampingMode mode, DampingGeometry geometry,
                                    std::optional<FeedbackG> g = std::nullopt) {
        if (pairs < 1) throw Error("schedule: need at least one interval pair");
        std::vector<double> times;
        std::vector<EvenRecord> even;
        std::vector<OddRecord> odd;
        times.push_back(0.0);
        for (int n = 0; n < pairs; ++n) {
            times.push_back(times.back() + t_even);
            times.push_back(times.back() + t_odd);
            even.push_back(EvenRecord{CoefficientFn::constant(b1_value), b1_value, b1_value});
            const double bo = odd_value ? odd_value(n) : 0.0;
            odd.push_back(OddRecord{CoefficientFn::constant(bo), std::abs(bo)});
        }
        return explicit_schedule(times, even, odd, tau, mode, geometry, std::move(g));
    }

    const std::vector<Interval>& intervals() const { return intervals_; }
    double tau() const { return tau_; }
    DampingMode mode() const { return mode_; }
    const DampingGeometry& geometry() const { return geometry_; }
    const std::optional<FeedbackG>& feedback() const { return g_; }

    double horizon() const { return intervals_.empty() ? 0.0 : intervals_.back().t_end; }

    bool has_delay() const { return mode_ == DampingMode::delayed && tau_ > 0.0; }

    bool has_active_odd() const {
        for (const Interval& iv : intervals_)
            if (iv.parity == Parity::odd && iv.M_odd > 0.0) return true;
        return false;
    }

    int interval_index_at(double t) const {
        if (t < 0.0 || t >= horizon())
            throw OutOfHorizon("schedule: t = " + std::to_string(t) + " outside [0, " +
                               std::to_string(horizon()) + ")");
        auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                                   [](double x, const Interval& iv) { return x < iv.t_end; });
        return static_cast<int>(it - intervals_.begin());
    }

    CoeffSample coefficients_at(double t) const {
        const int n = interval_index_at(t);
        const Interval& iv = intervals_[n];
        return CoeffSample{iv.b1(t), iv.b_odd(t), n, iv.parity};
    }

    // Half-open lookup clamped into [0, horizon); the integrator evaluates its
    // final stage exactly at the horizon and takes the left limit there.
    CoeffSample coefficients_at_clamped(double t) const {
        const double h = horizon();
        if (t >= h) t = std::nextafter(h, 0.0);
        if (t < 0.0) t = 0.0;
        return coefficients_at(t);
    }

    const Interval& interval_at_clamped(double t) const {
        const double h = horizon();
        if (t >= h) t = std::nextafter(h, 0.0);
        if (t < 0.0) t = 0.0;
        return intervals_[static_cast<std::size_t>(interval_index_at(t))];
    }

    // Shifted-window coefficient for the delay energy: zero outside [0, horizon).
    double odd_coefficient_or_zero(double t) const {
        if (t < 0.0 || t >= horizon()) return 0.0;
        const Interval& iv = intervals_[interval_index_at(t)];
        return iv.b_odd(t);
    }

    std::vector<IntervalRow> interval_table() const {
        std::vector<IntervalRow> rows;
        rows.reserve(intervals_.size());
        for (std::size_t j = 0; j < intervals_.size(); ++j) {
            const Interval& iv = intervals_[j];
            rows.push_back(IntervalRow{static_cast<int>(j), iv.t_begin, iv.length(), iv.parity,
                                       iv.m, iv.M, iv.M_odd});
        }
        return rows;
    }

private:
    std::vector<Interval> intervals_;
    double tau_ = 0.0;
    DampingMode mode_ = DampingMode::delayed;
    DampingGeometry geometry_;
    std::optional<FeedbackG> g_;
};

namespace detail {

constexpr int kValidationSamples = 1000;

template <class F>
void sample_interval(const Interval& iv, F&& f) {
    const double h = iv.length() / kValidationSamples;
    for (int i = 0; i < kValidationSamples; ++i) f(iv.t_begin + (i + 0.5) * h);
}

}  // namespace detail

// Checks every structural assumption; violations are data, not faults.
inline std::vector<Violation> validate_schedule(const DampingSchedule& s) {
    std::vector<Violation> out;
    const auto& ivs = s.intervals();
    if (ivs.empty()) {
        out.push_back({"EmptySchedule", -1, "no intervals"});
        return out;
    }
    if (ivs.front().t_begin != 0.0)
        out.push_back({"TimeOrigin", 0, "first interval must start at t = 0"});
    for (std::size_t j = 0; j < ivs.size(); ++j) {
        if (!(ivs[j].t_end > ivs[j].t_begin))
            out.push_back({"NonMonotoneTimes", static_cast<int>(j), "interval has no length"});
        if (j + 1 < ivs.size() && ivs[j].t_end != ivs[j + 1].t_begin)
            out.push_back({"NonMonotoneTimes", static_cast<int>(j), "intervals not contiguous"});
    }
    if (s.tau() < 0.0) out.push_back({"NegativeDelay", -1, "tau < 0"});
    if (s.mode() == DampingMode::delayed && s.tau() == 0.0 && s.has_active_odd())
        out.push_back({"DelayRequired", -1, "delayed mode with active b2 needs tau > 0"});

    const double tol = 1e-12;
    for (std::size_t j = 0; j < ivs.size(); ++j) {
        const Interval& iv = ivs[j];
        const int n = static_cast<int>(j);
        if (iv.parity == Parity::even) {
            if (!(iv.m > 0.0))
                out.push_back({"BoundViolation", n, "even interval needs lower bound m > 0"});
            if (iv.m > iv.M)
                out.push_back({"OrderViolation", n, "m > M on even interval"});
            bool in_bounds = true, overlap = false;
            detail::sample_interval(iv, [&](double t) {
                const double v = iv.b1(t);
                if (v < iv.m - tol * std::max(1.0, iv.m) || v > iv.M + tol * std::max(1.0, iv.M))
                    in_bounds = false;
                if (iv.b_odd(t) != 0.0) overlap = true;
            });
            if (!in_bounds)
                out.push_back({"BoundViolation", n, "b1 leaves [m, M] on even interval"});
            if (overlap)
                out.push_back({"SupportOverlap", n, "delayed/negative coefficient active on even interval"});
            if (s.mode() == DampingMode::delayed && s.tau() > iv.length() + tol)
                out.push_back({"LengthViolation", n,
                               "tau exceeds even-interval length T = " + std::to_string(iv.length())});
        } else {
            bool in_bounds = true, overlap = false;
            detail::sample_interval(iv, [&](double t) {
                if (std::abs(iv.b_odd(t)) > iv.M_odd + tol * std::max(1.0, iv.M_odd))
                    in_bounds = false;
                if (iv.b1(t) != 0.0) overlap = true;
            });
            if (!in_bounds)
                out.push_back({"BoundViolation", n, "|b| exceeds M on odd interval"});
            if (overlap)
                out.push_back({"SupportOverlap", n, "b1 active on odd interval"});
        }
    }

    const DampingGeometry& geo = s.geometry();
    if (!geo.distributed) {
        if (!(geo.omega.a < geo.omega.b))
            out.push_back({"RegionViolation", -1, "omega is empty"});
        if (!(geo.omega_tilde.a < geo.omega_tilde.b))
            out.push_back({"RegionViolation", -1, "omega_tilde is empty"});
        if (s.mode() == DampingMode::delayed &&
            (geo.omega_tilde.a < geo.omega.a - tol || geo.omega_tilde.b > geo.omega.b + tol))
            out.push_back({"RegionViolation", -1,
                           "delayed mode requires omega_tilde inside omega"});
    }
    return out;
}

}  // namespace idl
