#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "idl/errors.hpp"
#include "idl/rational.hpp"
#include "idl/sequence.hpp"

namespace idl {

namespace detail {

// Shared between the double and exact-rational paths.
template <class Num>
Num obs_contraction_impl(const Num& T, const Num& m, const Num& M, const Num& lambda1) {
    const Num T2 = T * T;
    const Num S = Num(4) / (lambda1 * m) + (Num(3) * T2) / (Num(32) * m) +
                  (M * T2) / (Num(16) * lambda1);
    const Num X = (T2 * T) / (Num(30) * S);
    return Num(1) / (Num(1) + X);
}

template <class Num>
Num c_hat_impl(const Num& c, const Num& C, const Num& T, const Num& M, const Num& m) {
    const Num y = Num(2) * c * (Num(1) + Num(4) * C * C * T * T * M * M);
    return y / (m + y);
}

inline void require_positive(double x, const char* name) {
    if (!(x > 0.0)) throw NonPositive(std::string("criteria: ") + name + " must be positive");
}

inline void require_positive(const Rational& x, const char* name) {
    if (x.sign() <= 0) throw NonPositive(std::string("criteria: ") + name + " must be positive");
}

}  // namespace detail

// Even-interval contraction factor from the observability estimate; lies
// strictly in (0, 1) for positive arguments.
inline double obs_contraction_constant(double T, double m, double M, double lambda1) {
    detail::require_positive(T, "T");
    detail::require_positive(m, "m");
    detail::require_positive(M, "M");
    detail::require_positive(lambda1, "lambda1");
    if (m > M) throw BoundOrder("criteria: m > M");
    return detail::obs_contraction_impl(T, m, M, lambda1);
}

inline Rational obs_contraction_constant(const Rational& T, const Rational& m, const Rational& M,
                                         const Rational& lambda1) {
    detail::require_positive(T, "T");
    detail::require_positive(m, "m");
    detail::require_positive(M, "M");
    detail::require_positive(lambda1, "lambda1");
    if (m > M) throw BoundOrder("criteria: m > M");
    return detail::obs_contraction_impl(T, m, M, lambda1);
}

// Contraction-plus-delay constant of the distributed-damping criterion.
inline double c_tilde(double T, double m, double M, double lambda1, double MT_odd) {
    if (MT_odd < 0.0) throw NonPositive("criteria: delay term must be >= 0");
    return obs_contraction_constant(T, m, M, lambda1) + MT_odd;
}

inline Rational c_tilde(const Rational& T, const Rational& m, const Rational& M,
                        const Rational& lambda1, const Rational& MT_odd) {
    if (MT_odd.sign() < 0) throw NonPositive("criteria: delay term must be >= 0");
    return obs_contraction_constant(T, m, M, lambda1) + MT_odd;
}

// Explicit linear-case contraction factor.
inline double c_hat_linear(double c, double C, double T, double M, double m) {
    detail::require_positive(c, "c");
    detail::require_positive(C, "C");
    detail::require_positive(T, "T");
    detail::require_positive(M, "M");
    detail::require_positive(m, "m");
    return detail::c_hat_impl(c, C, T, M, m);
}

inline Rational c_hat_linear(const Rational& c, const Rational& C, const Rational& T,
                             const Rational& M, const Rational& m) {
    detail::require_positive(c, "c");
    detail::require_positive(C, "C");
    detail::require_positive(T, "T");
    detail::require_positive(M, "M");
    detail::require_positive(m, "m");
    return detail::c_hat_impl(c, C, T, M, m);
}

// Contraction factor implied by an observability constant d.
inline double d_hat(double d) {
    detail::require_positive(d, "d");
    return d / (d + 1.0);
}

inline Rational d_hat(const Rational& d) {
    detail::require_positive(d, "d");
    return d / (d + Rational(1));
}

enum class TheoremId { First, First_generale, stab2Cris5, linear, posneg, posneg_linear };

inline const char* to_string(TheoremId id) {
    switch (id) {
        case TheoremId::First: return "First";
        case TheoremId::First_generale: return "First_generale";
        case TheoremId::stab2Cris5: return "stab2Cris5";
        case TheoremId::linear: return "linear";
        case TheoremId::posneg: return "posneg";
        case TheoremId::posneg_linear: return "posneg_linear";
    }
    return "First";
}

inline std::optional<TheoremId> theorem_from_string(const std::string& s) {
    if (s == "First") return TheoremId::First;
    if (s == "First_generale") return TheoremId::First_generale;
    if (s == "stab2Cris5") return TheoremId::stab2Cris5;
    if (s == "linear") return TheoremId::linear;
    if (s == "posneg") return TheoremId::posneg;
    if (s == "posneg_linear") return TheoremId::posneg_linear;
    return std::nullopt;
}

// Parameter sequences (indexed by the interval-pair counter n) plus the
// constants each criterion needs.
struct TheoremInputs {
    SequenceSpec m_even = SequenceSpec::constant(1.0);
    SequenceSpec M_even = SequenceSpec::constant(1.0);
    SequenceSpec T_even = SequenceSpec::constant(1.0);
    SequenceSpec MT_odd = SequenceSpec::constant(0.0);  // product M_{odd} * T_{odd}
    std::optional<SequenceSpec> d_seq;
    std::optional<double> lambda1;
    std::optional<double> C_embed;
    std::optional<double> C1;
    std::optional<double> C3;
    std::optional<double> c_obs;
    std::optional<double> T_bar;
};

struct CheckResult {
    Verdict verdict;
    std::vector<double> term_preview;      // first few series terms
    std::optional<bool> prima_holds;       // sum of MT_odd finite
    std::optional<bool> seconda_diverges;  // theorem-specific divergence condition
    bool simplified_pair_applies = false;
    std::vector<std::string> hypothesis_flags;
};

namespace detail {

inline double require_constant(const std::optional<double>& v, const char* name) {
    if (!v || !(*v > 0.0))
        throw MissingConstant(std::string("check: missing or non-positive constant ") + name);
    return *v;
}

inline void check_sequence_samples(const TheoremInputs& in, bool need_even_bounds) {
    for (long n = 0; n < 64; ++n) {
        if (need_even_bounds) {
            const double m = in.m_even.at(n), M = in.M_even.at(n), T = in.T_even.at(n);
            if (!(m > 0.0) || !(M > 0.0) || !(T > 0.0))
                throw NonPositive("check: m, M, T sequences must stay positive");
            if (m > M * (1.0 + 1e-12)) throw BoundOrder("check: m_2n > M_2n at n = " + std::to_string(n));
        }
        if (in.MT_odd.at(n) < 0.0) throw NonPositive("check: MT_odd must be >= 0");
        if (in.d_seq && !(in.d_seq->at(n) > 0.0))
            throw NonPositive("check: observability constants d_n must be positive");
    }
}

struct ObsTails {
    seq_detail::Tail s;  // contraction factor tail
    seq_detail::Tail X;  // the positive bracket whose log drives (seconda)
};

inline ObsTails obs_contraction_tails(const seq_detail::Tail& T, const seq_detail::Tail& m,
                                      const seq_detail::Tail& M, double lambda1) {
    using namespace seq_detail;
    const Tail T2 = t_mul(T, T);
    const Tail S = t_add(t_add(t_scale(t_reciprocal(m), 4.0 / lambda1),
                               t_scale(t_mul(T2, t_reciprocal(m)), 3.0 / 32.0)),
                         t_scale(t_mul(M, T2), 1.0 / (16.0 * lambda1)));
    const Tail X = t_scale(t_mul(t_mul(T2, T), t_reciprocal(S)), 1.0 / 30.0);
    return ObsTails{t_reciprocal(t_add_const(X, 1.0)), X};
}

// c_hat as 1/(1 + m/y) so the algebra survives y -> infinity.
inline seq_detail::Tail c_hat_tail(const seq_detail::Tail& T, const seq_detail::Tail& M,
                                   const seq_detail::Tail& m, double c, double C) {
    using namespace seq_detail;
    const Tail theta = t_scale(t_mul(t_mul(T, T), t_mul(M, M)), 4.0 * C * C);
    const Tail y = t_scale(t_add_const(theta, 1.0), 2.0 * c);
    return t_reciprocal(t_add_const(t_mul(m, t_reciprocal(y)), 1.0));
}

// d_hat as 1 - 1/(1+d), robust as d -> infinity.
inline seq_detail::Tail d_hat_tail(const seq_detail::Tail& d) {
    using namespace seq_detail;
    return t_add_const(t_scale(t_reciprocal(t_add_const(d, 1.0)), -1.0), 1.0);
}

// inf T_{2n} estimated from samples and the tail limit.
inline double sequence_infimum(const SequenceSpec& s) {
    double lo = s.at(0);
    for (long n = 1; n < 1000; ++n) lo = std::min(lo, s.at(n));
    const seq_detail::Tail t = seq_detail::to_tail(s);
    if (t.valid && !t.is_inf()) lo = std::min(lo, t.limit);
    return lo;
}

}  // namespace detail

// Evaluates the selected stability criterion: assembles the series terms,
// classifies the series exactly when the input families allow, otherwise by
// partial sums, and reports the simplified sufficient pair alongside.
inline CheckResult check_theorem(TheoremId id, const TheoremInputs& in) {
    using namespace seq_detail;
    in.m_even.check_valid();
    in.M_even.check_valid();
    in.T_even.check_valid();
    in.MT_odd.check_valid();
    if (in.d_seq) in.d_seq->check_valid();

    const bool uses_even_bounds = id == TheoremId::First || id == TheoremId::First_generale ||
                                  id == TheoremId::linear || id == TheoremId::posneg_linear;
    detail::check_sequence_samples(in, uses_even_bounds);

    CheckResult out;

    const Tail tm = to_tail(in.m_even);
    const Tail tM = to_tail(in.M_even);
    const Tail tT = to_tail(in.T_even);
    const Tail tu = to_tail(in.MT_odd);

    Tail term_tail = Tail::invalid();
    std::function<double(long)> term_fn;
    std::optional<bool> seconda;

    switch (id) {
        case TheoremId::First:
        case TheoremId::First_generale: {
            const double lam = detail::require_constant(in.lambda1, "lambda1");
            const auto obs = detail::obs_contraction_tails(tT, tm, tM, lam);
            term_tail = t_add(t_scale(tu, 2.0), t_ln(t_add(obs.s, tu)));
            const auto sX = tail_summable(obs.X);
            if (sX) seconda = !*sX;
            term_fn = [in, lam](long n) {
                const double u = in.MT_odd.at(n);
                return 2.0 * u + std::log(obs_contraction_constant(in.T_even.at(n), in.m_even.at(n),
                                                                   in.M_even.at(n), lam) +
                                          u);
            };
            break;
        }
        case TheoremId::linear: {
            const double c = detail::require_constant(in.c_obs, "c");
            const double C = detail::require_constant(in.C_embed, "C");
            const double Tbar = detail::require_constant(in.T_bar, "T_bar");
            if (detail::sequence_infimum(in.T_even) <= Tbar)
                out.hypothesis_flags.push_back("observability window: inf T_2n <= T_bar");
            const Tail chat = detail::c_hat_tail(tT, tM, tm, c, C);
            term_tail = t_add(t_scale(tu, 2.0 * C), t_ln(t_add(chat, t_scale(tu, C))));
            const Tail theta = t_scale(t_mul(t_mul(tT, tT), t_mul(tM, tM)), 4.0 * C * C);
            const Tail Z = t_mul(tm, t_reciprocal(t_add_const(theta, 1.0)));
            const auto sZ = tail_summable(Z);
            if (sZ) seconda = !*sZ;
            term_fn = [in, c, C](long n) {
                const double u = in.MT_odd.at(n);
                return 2.0 * C * u + std::log(c_hat_linear(c, C, in.T_even.at(n), in.M_even.at(n),
                                                           in.m_even.at(n)) +
                                              C * u);
            };
            break;
        }
        case TheoremId::stab2Cris5: {
            if (!in.d_seq) throw MissingConstant("check: stab2Cris5 needs observability constants d_n");
            const double C = detail::require_constant(in.C_embed, "C");
            const Tail dh = detail::d_hat_tail(to_tail(*in.d_seq));
            term_tail = t_add(t_scale(tu, 2.0 * C), t_ln(t_add(dh, t_scale(tu, C))));
            const auto sW = tail_summable(t_ln(dh));
            if (sW) seconda = !*sW;
            const SequenceSpec d = *in.d_seq;
            term_fn = [in, d, C](long n) {
                const double u = in.MT_odd.at(n);
                return 2.0 * C * u + std::log(d_hat(d.at(n)) + C * u);
            };
            break;
        }
        case TheoremId::posneg: {
            if (!in.d_seq) throw MissingConstant("check: posneg needs observability constants d_n");
            const double C3 = detail::require_constant(in.C3, "C3");
            const Tail dh = detail::d_hat_tail(to_tail(*in.d_seq));
            term_tail = t_add(t_scale(tu, 2.0 * C3), t_ln(dh));
            const auto sW = tail_summable(t_ln(dh));
            if (sW) seconda = !*sW;
            const SequenceSpec d = *in.d_seq;
            term_fn = [in, d, C3](long n) {
                return 2.0 * C3 * in.MT_odd.at(n) + std::log(d_hat(d.at(n)));
            };
            break;
        }
        case TheoremId::posneg_linear: {
            const double c = detail::require_constant(in.c_obs, "c");
            const double C1 = detail::require_constant(in.C1, "C1");
            const double C3 = detail::require_constant(in.C3, "C3");
            const double Tbar = detail::require_constant(in.T_bar, "T_bar");
            if (detail::sequence_infimum(in.T_even) <= Tbar)
                out.hypothesis_flags.push_back("observability window: inf T_2n <= T_bar");
            const Tail chat = detail::c_hat_tail(tT, tM, tm, c, C1);
            term_tail = t_add(t_scale(tu, 2.0 * C3), t_ln(chat));
            const Tail theta = t_scale(t_mul(t_mul(tT, tT), t_mul(tM, tM)), 4.0 * C1 * C1);
            const Tail Z = t_mul(tm, t_reciprocal(t_add_const(theta, 1.0)));
            const auto sZ = tail_summable(Z);
            if (sZ) seconda = !*sZ;
            term_fn = [in, c, C1, C3](long n) {
                return 2.0 * C3 * in.MT_odd.at(n) +
                       std::log(c_hat_linear(c, C1, in.T_even.at(n), in.M_even.at(n),
                                             in.m_even.at(n)));
            };
            break;
        }
    }

    out.prima_holds = tail_summable(tu);
    out.seconda_diverges = seconda;
    out.simplified_pair_applies =
        out.prima_holds.value_or(false) && out.seconda_diverges.value_or(false);

    for (long n = 0; n < 16; ++n) out.term_preview.push_back(term_fn(n));

    auto sums = partial_sums(term_fn);
    const auto cls = classify_series(term_tail);
    if (cls.conclusive) {
        out.verdict.outcome = cls.outcome;
        out.verdict.rationale = std::string("exact: ") + cls.rule;
        out.verdict.partial_sums = std::move(sums);
    } else if (out.simplified_pair_applies) {
        out.verdict.outcome = Outcome::DivergesToMinusInfinity;
        out.verdict.rationale = "exact: simplified sufficient pair";
        out.verdict.partial_sums = std::move(sums);
    } else {
        out.verdict = heuristic_verdict(std::move(sums));
    }
    if (!out.hypothesis_flags.empty() &&
        out.verdict.outcome == Outcome::DivergesToMinusInfinity) {
        out.verdict.outcome = Outcome::Inconclusive;
        out.verdict.rationale = "hypothesis violated: " + out.hypothesis_flags.front();
    }
    return out;
}

}  // namespace idl
