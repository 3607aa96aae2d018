#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idl/errors.hpp"

namespace idl {

// Declared sequence families for the per-interval parameter sequences and for
// series terms. Divergence of a series is undecidable from finitely many
// terms, so the exact classification below works on these symbolic families;
// anything else falls back to a partial-sum heuristic.
struct SequenceSpec {
    enum class Family { constant, power_law, geometric, explicit_list, log_linear_ratio, composite };

    Family family = Family::constant;
    double a = 0.0;            // constant value / amplitude / log-ratio factor
    double q = 0.0;            // power-law exponent: a * (n+1)^(-q)
    double r = 1.0;            // geometric ratio: a * r^n, r > 0
    double alpha = 0.0;        // log ratio: a * ln((n+alpha)/(n+beta))
    double beta = 0.0;
    std::vector<double> values;
    std::vector<SequenceSpec> parts;

    static SequenceSpec constant(double c) {
        SequenceSpec s;
        s.family = Family::constant;
        s.a = c;
        return s;
    }
    static SequenceSpec power_law(double amplitude, double exponent) {
        SequenceSpec s;
        s.family = Family::power_law;
        s.a = amplitude;
        s.q = exponent;
        return s;
    }
    static SequenceSpec geometric(double amplitude, double ratio) {
        SequenceSpec s;
        s.family = Family::geometric;
        s.a = amplitude;
        s.r = ratio;
        return s;
    }
    static SequenceSpec list(std::vector<double> v) {
        SequenceSpec s;
        s.family = Family::explicit_list;
        s.values = std::move(v);
        return s;
    }
    static SequenceSpec log_ratio(double factor, double alpha, double beta) {
        SequenceSpec s;
        s.family = Family::log_linear_ratio;
        s.a = factor;
        s.alpha = alpha;
        s.beta = beta;
        return s;
    }
    static SequenceSpec sum(std::vector<SequenceSpec> parts) {
        SequenceSpec s;
        s.family = Family::composite;
        s.parts = std::move(parts);
        return s;
    }

    void check_valid() const {
        auto finite = [](double x) { return std::isfinite(x); };
        switch (family) {
            case Family::constant:
                if (!finite(a)) throw UnsupportedFamily("sequence: non-finite constant");
                break;
            case Family::power_law:
                if (!finite(a) || !finite(q)) throw UnsupportedFamily("sequence: bad power law");
                break;
            case Family::geometric:
                if (!finite(a) || !finite(r) || r <= 0.0)
                    throw UnsupportedFamily("sequence: geometric ratio must be positive");
                break;
            case Family::explicit_list:
                for (double v : values)
                    if (!finite(v)) throw UnsupportedFamily("sequence: non-finite list entry");
                break;
            case Family::log_linear_ratio:
                if (!finite(a) || !(alpha > 0.0) || !(beta > 0.0))
                    throw UnsupportedFamily("sequence: log ratio needs positive offsets");
                break;
            case Family::composite:
                if (parts.empty()) throw UnsupportedFamily("sequence: empty composite");
                for (const auto& p : parts) p.check_valid();
                break;
        }
    }

    double at(long n) const {
        switch (family) {
            case Family::constant:
                return a;
            case Family::power_law:
                return a * std::pow(static_cast<double>(n + 1), -q);
            case Family::geometric:
                return a * std::pow(r, static_cast<double>(n));
            case Family::explicit_list:
                return n < static_cast<long>(values.size()) ? values[static_cast<std::size_t>(n)]
                                                            : 0.0;
            case Family::log_linear_ratio:
                return a * std::log((n + alpha) / (n + beta));
            case Family::composite: {
                double s = 0.0;
                for (const auto& p : parts) s += p.at(n);
                return s;
            }
        }
        return 0.0;
    }
};

namespace seq_detail {

// Asymptotic scale phi(n). Power means n^{-p} (negative p = growth); Geo means
// r^n; LogGrowth means ln n.
struct Scale {
    enum class Kind { zero, power, geo, log_growth };
    Kind kind = Kind::zero;
    double p = 0.0;

    static Scale zero() { return Scale{}; }
    static Scale power(double p) { return Scale{Kind::power, p}; }
    static Scale geo(double r) { return Scale{Kind::geo, r}; }
    static Scale log_growth() { return Scale{Kind::log_growth, 0.0}; }

    bool same(const Scale& o) const { return kind == o.kind && p == o.p; }
};

// Orders scales by eventual magnitude of |phi(n)|: returns +1 if a wins.
inline int compare(const Scale& a, const Scale& b) {
    auto rank = [](const Scale& s) {
        switch (s.kind) {
            case Scale::Kind::geo:
                return s.p > 1.0 ? 6 : 1;
            case Scale::Kind::power:
                return s.p < 0.0 ? 5 : 2;
            case Scale::Kind::log_growth:
                return 4;
            case Scale::Kind::zero:
                return 0;
        }
        return 0;
    };
    const int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind) {
        case Scale::Kind::geo:
            if (a.p != b.p) return a.p < b.p ? -1 : 1;
            return 0;
        case Scale::Kind::power:
            if (a.p != b.p) return a.p > b.p ? -1 : 1;  // smaller p = larger n^{-p}
            return 0;
        default:
            return 0;
    }
}

inline Scale scale_mul(const Scale& a, const Scale& b, bool& ok) {
    using K = Scale::Kind;
    if (a.kind == K::zero || b.kind == K::zero) return Scale::zero();
    if (a.kind == K::power && b.kind == K::power) return Scale::power(a.p + b.p);
    if (a.kind == K::geo && b.kind == K::geo) return Scale::geo(a.p * b.p);
    if (a.kind == K::geo && b.kind == K::power) return Scale::geo(a.p);
    if (a.kind == K::power && b.kind == K::geo) return Scale::geo(b.p);
    ok = false;  // log-scale products are outside the supported algebra
    return Scale::zero();
}

inline Scale scale_reciprocal(const Scale& s, bool& ok) {
    using K = Scale::Kind;
    if (s.kind == K::power) return Scale::power(-s.p);
    if (s.kind == K::geo) return Scale::geo(1.0 / s.p);
    ok = false;
    return Scale::zero();
}

// First-order tail model: x_n = limit + coef*phi(n)*(1+o(1)) for finite
// limits, or x_n ~ coef*phi(n) when the limit is infinite.
struct Tail {
    bool valid = false;
    double limit = 0.0;
    double coef = 0.0;
    Scale scale;

    static Tail invalid() { return Tail{}; }
    static Tail exact_const(double c) { return Tail{true, c, 0.0, Scale::zero()}; }
    static Tail finite(double limit, double coef, Scale s) {
        if (coef == 0.0) return exact_const(limit);
        return Tail{true, limit, coef, s};
    }
    static Tail infinite(double sign, double coef, Scale s) {
        return Tail{true, sign * std::numeric_limits<double>::infinity(), coef, s};
    }
    bool is_inf() const { return std::isinf(limit); }
};

inline Tail merge_dev(double limit, double c1, Scale s1, double c2, Scale s2) {
    if (c1 == 0.0 || s1.kind == Scale::Kind::zero) return Tail::finite(limit, c2, s2);
    if (c2 == 0.0 || s2.kind == Scale::Kind::zero) return Tail::finite(limit, c1, s1);
    if (s1.same(s2)) {
        const double c = c1 + c2;
        if (c == 0.0) return Tail::invalid();  // leading order cancels; next order unknown
        return Tail::finite(limit, c, s1);
    }
    const int cmp = compare(s1, s2);
    if (cmp == 0) return Tail::invalid();  // same rank, different param family mix
    return cmp > 0 ? Tail::finite(limit, c1, s1) : Tail::finite(limit, c2, s2);
}

inline Tail t_add(const Tail& a, const Tail& b) {
    if (!a.valid || !b.valid) return Tail::invalid();
    if (a.is_inf() || b.is_inf()) {
        if (a.is_inf() && b.is_inf()) {
            if ((a.limit > 0) != (b.limit > 0)) return Tail::invalid();  // inf - inf
            const int cmp = compare(a.scale, b.scale);
            if (cmp == 0 && a.scale.same(b.scale))
                return Tail::infinite(a.limit > 0 ? 1 : -1, a.coef + b.coef, a.scale);
            if (cmp == 0) return Tail::invalid();
            return cmp > 0 ? a : b;
        }
        return a.is_inf() ? a : b;
    }
    Tail m = merge_dev(a.limit + b.limit, a.coef, a.scale, b.coef, b.scale);
    return m;
}

inline Tail t_scale(const Tail& a, double k) {
    if (!a.valid) return Tail::invalid();
    if (k == 0.0) return Tail::exact_const(0.0);
    if (a.is_inf()) return Tail::infinite((a.limit > 0) == (k > 0) ? 1 : -1, a.coef * k, a.scale);
    return Tail::finite(a.limit * k, a.coef * k, a.scale);
}

inline Tail t_add_const(const Tail& a, double c) {
    if (!a.valid) return Tail::invalid();
    if (a.is_inf()) return a;
    return Tail::finite(a.limit + c, a.coef, a.scale);
}

inline Tail t_mul(const Tail& a, const Tail& b) {
    if (!a.valid || !b.valid) return Tail::invalid();
    bool ok = true;
    if (a.is_inf() || b.is_inf()) {
        auto side_sign = [](const Tail& t) { return t.is_inf() ? (t.limit > 0 ? 1 : -1)
                                                               : (t.limit > 0 ? 1 : (t.limit < 0 ? -1 : 0)); };
        const int sa = side_sign(a), sb = side_sign(b);
        if (sa == 0 || sb == 0) return Tail::invalid();  // inf * 0
        if (a.is_inf() && b.is_inf()) {
            Scale s = scale_mul(a.scale, b.scale, ok);
            if (!ok) return Tail::invalid();
            return Tail::infinite(sa * sb, a.coef * b.coef, s);
        }
        const Tail& inf_side = a.is_inf() ? a : b;
        const Tail& fin_side = a.is_inf() ? b : a;
        return Tail::infinite(sa * sb, inf_side.coef * fin_side.limit, inf_side.scale);
    }
    const double limit = a.limit * b.limit;
    if (a.limit == 0.0 && b.limit == 0.0) {
        Scale s = scale_mul(a.scale, b.scale, ok);
        if (!ok) return Tail::invalid();
        if (a.coef == 0.0 || b.coef == 0.0) return Tail::exact_const(0.0);
        return Tail::finite(0.0, a.coef * b.coef, s);
    }
    return merge_dev(limit, a.coef * b.limit, a.scale, b.coef * a.limit, b.scale);
}

inline Tail t_reciprocal(const Tail& a) {
    if (!a.valid) return Tail::invalid();
    bool ok = true;
    if (a.is_inf()) {
        Scale s = scale_reciprocal(a.scale, ok);
        if (!ok) return Tail::invalid();
        return Tail::finite(0.0, 1.0 / a.coef, s);
    }
    if (a.limit == 0.0) {
        if (a.coef == 0.0) return Tail::invalid();  // identically zero
        Scale s = scale_reciprocal(a.scale, ok);
        if (!ok) return Tail::invalid();
        return Tail::infinite(a.coef > 0 ? 1 : -1, 1.0 / a.coef, s);
    }
    return Tail::finite(1.0 / a.limit, -a.coef / (a.limit * a.limit), a.scale);
}

inline Tail t_ln(const Tail& a) {
    if (!a.valid) return Tail::invalid();
    if (a.is_inf()) {
        if (a.limit < 0) return Tail::invalid();
        if (a.scale.kind == Scale::Kind::geo)
            return Tail::infinite(1, std::log(a.scale.p), Scale::power(-1.0));
        if (a.scale.kind == Scale::Kind::power)
            return Tail::infinite(1, -a.scale.p, Scale::log_growth());
        return Tail::invalid();
    }
    if (a.limit == 0.0) {
        if (a.coef <= 0.0) return Tail::invalid();  // not eventually positive
        if (a.scale.kind == Scale::Kind::geo)
            return Tail::infinite(-1, std::log(a.scale.p), Scale::power(-1.0));
        if (a.scale.kind == Scale::Kind::power)
            return Tail::infinite(-1, -a.scale.p, Scale::log_growth());
        return Tail::invalid();
    }
    if (a.limit < 0.0) return Tail::invalid();
    return Tail::finite(std::log(a.limit), a.coef / a.limit, a.scale);
}

inline Tail to_tail(const SequenceSpec& s) {
    using F = SequenceSpec::Family;
    switch (s.family) {
        case F::constant:
            return Tail::exact_const(s.a);
        case F::power_law:
            if (s.a == 0.0 || s.q == 0.0) return Tail::exact_const(s.a);
            if (s.q > 0.0) return Tail::finite(0.0, s.a, Scale::power(s.q));
            return Tail::infinite(s.a > 0 ? 1 : -1, s.a, Scale::power(s.q));
        case F::geometric:
            if (s.a == 0.0 || s.r == 1.0) return Tail::exact_const(s.a);
            if (s.r < 1.0) return Tail::finite(0.0, s.a, Scale::geo(s.r));
            return Tail::infinite(s.a > 0 ? 1 : -1, s.a, Scale::geo(s.r));
        case F::explicit_list:
            return Tail::exact_const(0.0);  // eventually zero
        case F::log_linear_ratio:
            if (s.a == 0.0 || s.alpha == s.beta) return Tail::exact_const(0.0);
            return Tail::finite(0.0, s.a * (s.alpha - s.beta), Scale::power(1.0));
        case F::composite: {
            Tail t = Tail::exact_const(0.0);
            for (const auto& p : s.parts) t = t_add(t, to_tail(p));
            return t;
        }
    }
    return Tail::invalid();
}

// Is sum x_n finite, judged from the tail? nullopt when undecidable here.
inline std::optional<bool> tail_summable(const Tail& t) {
    if (!t.valid) return std::nullopt;
    if (t.is_inf() || t.limit != 0.0) return false;
    if (t.scale.kind == Scale::Kind::zero) return true;
    if (t.scale.kind == Scale::Kind::geo) return t.scale.p < 1.0;
    if (t.scale.kind == Scale::Kind::power) return t.scale.p > 1.0;
    return std::nullopt;
}

}  // namespace seq_detail

enum class Outcome { DivergesToMinusInfinity, ConvergesOrBoundedBelow, Inconclusive };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::DivergesToMinusInfinity: return "DivergesToMinusInfinity";
        case Outcome::ConvergesOrBoundedBelow: return "ConvergesOrBoundedBelow";
        case Outcome::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

struct Verdict {
    Outcome outcome = Outcome::Inconclusive;
    std::string rationale;
    std::vector<std::pair<long, double>> partial_sums;  // at N = 1e2, 1e3, 1e4, 1e5
};

namespace seq_detail {

struct Classified {
    Outcome outcome = Outcome::Inconclusive;
    bool conclusive = false;
    const char* rule = "";
};

inline Classified classify_series(const Tail& t) {
    Classified c;
    if (!t.valid) return c;
    c.conclusive = true;
    if (t.is_inf()) {
        c.outcome = t.limit < 0 ? Outcome::DivergesToMinusInfinity
                                : Outcome::ConvergesOrBoundedBelow;
        c.rule = t.limit < 0 ? "terms diverge to -inf" : "terms diverge to +inf";
        return c;
    }
    if (t.limit < 0.0) {
        c.outcome = Outcome::DivergesToMinusInfinity;
        c.rule = "negative term limit";
        return c;
    }
    if (t.limit > 0.0) {
        c.outcome = Outcome::ConvergesOrBoundedBelow;
        c.rule = "positive term limit";
        return c;
    }
    switch (t.scale.kind) {
        case Scale::Kind::zero:
            c.outcome = Outcome::ConvergesOrBoundedBelow;
            c.rule = "eventually zero terms";
            return c;
        case Scale::Kind::geo:
            if (t.scale.p < 1.0) {
                c.outcome = Outcome::ConvergesOrBoundedBelow;
                c.rule = "geometric tail, absolutely convergent";
                return c;
            }
            break;
        case Scale::Kind::power:
            if (t.scale.p > 1.0) {
                c.outcome = Outcome::ConvergesOrBoundedBelow;
                c.rule = "p-series tail with p > 1";
                return c;
            }
            if (t.scale.p > 0.0) {
                c.outcome = t.coef < 0 ? Outcome::DivergesToMinusInfinity
                                       : Outcome::ConvergesOrBoundedBelow;
                c.rule = "non-summable power tail";
                return c;
            }
            break;  // non-decaying deviation with a finite limit is inconsistent
        case Scale::Kind::log_growth:
            break;
    }
    c.conclusive = false;
    c.outcome = Outcome::Inconclusive;
    return c;
}

inline std::vector<std::pair<long, double>> partial_sums(const std::function<double(long)>& term) {
    static const long checkpoints[] = {100, 1000, 10000, 100000};
    std::vector<std::pair<long, double>> out;
    double sum = 0.0, comp = 0.0;
    long n = 0;
    for (long cp : checkpoints) {
        for (; n < cp; ++n) {
            const double y = term(n) - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        out.emplace_back(cp, sum);
    }
    return out;
}

inline Verdict heuristic_verdict(std::vector<std::pair<long, double>> sums) {
    Verdict v;
    v.partial_sums = std::move(sums);
    bool monotone = true;
    for (std::size_t i = 1; i < v.partial_sums.size(); ++i)
        if (!(v.partial_sums[i].second < v.partial_sums[i - 1].second)) monotone = false;
    if (monotone && v.partial_sums.back().second < -1e6) {
        v.outcome = Outcome::DivergesToMinusInfinity;
        v.rationale = "heuristic: partial sums pass -1e6 monotonically";
    } else {
        v.outcome = Outcome::Inconclusive;
        v.rationale = "heuristic: partial sums inconclusive";
    }
    return v;
}

}  // namespace seq_detail

// Decides sum(terms) = -inf for a declared family, exactly where the family
// algebra supports it; explicit lists are finite sums and never -inf.
inline Verdict series_verdict(const SequenceSpec& terms) {
    terms.check_valid();
    auto sums = seq_detail::partial_sums([&](long n) { return terms.at(n); });
    const seq_detail::Tail tail = seq_detail::to_tail(terms);
    const auto cls = seq_detail::classify_series(tail);
    if (cls.conclusive) {
        Verdict v;
        v.outcome = cls.outcome;
        v.rationale = std::string("exact: ") + cls.rule;
        v.partial_sums = std::move(sums);
        return v;
    }
    return seq_detail::heuristic_verdict(std::move(sums));
}

// Numeric fallback for term sequences with no declared family.
inline Verdict series_verdict(const std::function<double(long)>& term) {
    return seq_detail::heuristic_verdict(seq_detail::partial_sums(term));
}

}  // namespace idl
