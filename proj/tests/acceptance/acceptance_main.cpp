// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Oracles used here are independent of the library paths they
// check: closed forms, a decimal-limb fraction arithmetic, a long-double
// tail-analysis summation, and a complex Newton root finder.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "idl/dde_integrator.hpp"
#include "idl/energy.hpp"
#include "idl/observability.hpp"
#include "idl/rational.hpp"
#include "idl/report.hpp"
#include "idl/scenario.hpp"
#include "idl/stability_criteria.hpp"

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_conservation() {
    const auto t0 = std::chrono::steady_clock::now();
    const idl::Scenario sc = idl::load_preset("conservative");
    const idl::RunResult run = idl::run_scenario(idl::make_run_spec(sc));
    const double e0 = run.trace.rows.front().E_S;
    double worst = 0.0;
    for (const idl::EnergyRow& r : run.trace.rows)
        worst = std::max(worst, std::abs(r.E_S - e0) / e0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = worst <= 1e-8 && secs < 30.0;
    report(1, ok, "conservative preset keeps E_S constant",
           fmt("max relative drift %.3e, runtime %.2f s", worst, secs));
}

// ---------------------------------------------------------------- criterion 2
void criterion_closed_form() {
    const auto op = idl::SpectralOperator::custom({1.0});
    const auto s = idl::DampingSchedule::explicit_schedule(
        {0.0, 2.0}, {idl::EvenRecord{idl::CoefficientFn::constant(2.0), 2.0, 2.0}}, {}, 0.0,
        idl::DampingMode::delayed, idl::DampingGeometry::make_distributed());

    idl::RunSpec spec;
    spec.op = &op;
    spec.schedule = &s;
    spec.dt = 1e-3;
    spec.sample_stride = 100;
    spec.initial = {0.0, {1.0}, {0.0}};
    const idl::RunResult run = idl::run_scenario(spec);
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        const std::size_t i = static_cast<std::size_t>(std::llround(t / 0.1));
        const double expect = (1.0 + t) * std::exp(-t);
        worst = std::max(worst, std::abs(run.trajectory.states[i].position[0] - expect));
    }

    std::vector<double> errs;
    for (double dt : {0.04, 0.02, 0.01, 0.005, 0.0025}) {
        idl::RunSpec cs = spec;
        cs.dt = dt;
        cs.sample_stride = std::lround(2.0 / dt);
        const idl::RunResult r = idl::run_scenario(cs);
        errs.push_back(std::abs(r.trajectory.states.back().position[0] - 3.0 * std::exp(-2.0)));
    }
    bool order_ok = true;
    double worst_ratio = 16.0;
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double ratio = errs[i - 1] / errs[i];
        if (ratio < 12.8 || ratio > 19.2) order_ok = false;
        if (std::abs(ratio - 16.0) > std::abs(worst_ratio - 16.0)) worst_ratio = ratio;
    }
    const bool ok = worst <= 1e-8 && order_ok;
    report(2, ok, "critically damped closed form and fourth-order convergence",
           fmt("max abs error %.3e, extreme halving ratio %.2f", worst, worst_ratio));
}

// shared run for criteria 3-5: distributed delayed schedule with lambda1 = 1,
// b1 = m = M = 1, T_even = T_odd = 1, b2 = 0.1, ten interval pairs
struct SharedRun {
    idl::SpectralOperator op = idl::SpectralOperator::custom({1.0, 2.3, 4.7, 9.1});
    idl::DampingSchedule schedule;
    idl::RunResult run;
};

SharedRun make_shared_run() {
    SharedRun sr;
    sr.schedule = idl::DampingSchedule::periodic(
        10, 1.0, 1.0, 1.0, [](int) { return 0.1; }, 1.0, idl::DampingMode::delayed,
        idl::DampingGeometry::make_distributed());
    idl::RunSpec spec;
    spec.op = &sr.op;
    spec.schedule = &sr.schedule;
    spec.dt = 1e-3;
    spec.sample_stride = 1;
    spec.history_slots = 100;
    spec.initial = {0.0, {1.0, 0.6, -0.4, 0.25}, {0.0, 0.3, -0.2, 0.1}};
    sr.run = idl::run_scenario(spec);
    return sr;
}

// ---------------------------------------------------------------- criterion 3
void criterion_dissipation(const SharedRun& sr) {
    const auto checks = idl::dissipation_identity(
        sr.run.trajectory.times,
        [&](std::size_t i) -> const idl::SystemState& { return sr.run.trajectory.states[i]; },
        sr.op, sr.schedule, nullptr, 0.0, false);
    double worst = 0.0;
    for (const auto& c : checks) worst = std::max(worst, c.residual_rel);
    const bool ok = checks.size() == 10 && worst <= 1e-6;
    report(3, ok, "dissipation identity on every even interval",
           fmt("%g intervals, worst relative residual %.3e", double(checks.size()), worst));
}

// ---------------------------------------------------------------- criterion 4
void criterion_contraction(const SharedRun& sr) {
    const double bound = 1995.0 / 2011.0;
    double worst = 0.0;
    int count = 0;
    for (const idl::IntervalRow& row : sr.schedule.interval_table()) {
        if (row.parity != idl::Parity::even) continue;
        const std::size_t ia = static_cast<std::size_t>(std::llround(row.t_begin / 1e-3));
        const std::size_t ib =
            static_cast<std::size_t>(std::llround((row.t_begin + row.length) / 1e-3));
        const double ratio = sr.run.trace.rows[ib].E_S / sr.run.trace.rows[ia].E_S;
        worst = std::max(worst, ratio);
        ++count;
    }
    const bool ok = count == 10 && worst <= bound + 1e-6;
    report(4, ok, "even-interval contraction stays below 1995/2011",
           fmt("worst observed ratio %.6f vs bound %.6f", worst, bound));
}

// ---------------------------------------------------------------- criterion 5
void criterion_delay_growth(const SharedRun& sr) {
    double worst_margin = 0.0;
    bool ok = true;
    for (const idl::IntervalRow& row : sr.schedule.interval_table()) {
        if (row.parity != idl::Parity::odd) continue;
        const std::size_t ia = static_cast<std::size_t>(std::llround(row.t_begin / 1e-3));
        const std::size_t ib =
            static_cast<std::size_t>(std::llround((row.t_begin + row.length) / 1e-3));
        const double Ea = sr.run.trace.rows[ia].E;
        for (std::size_t i = ia; i <= ib; ++i) {
            const double cap = std::exp(2.0 * row.M_odd * (sr.run.trace.rows[i].t - row.t_begin)) *
                               Ea * (1.0 + 1e-6);
            const double margin = sr.run.trace.rows[i].E / cap;
            worst_margin = std::max(worst_margin, margin);
            if (sr.run.trace.rows[i].E > cap) ok = false;
        }
    }
    report(5, ok, "pointwise delay-interval growth bound",
           fmt("worst E / bound = %.6f", worst_margin));
}

// ---------------------------------------------------------------- criterion 6
void criterion_destabilization() {
    const idl::Scenario sc = idl::load_preset("datko_delay");
    const idl::RunResult run = idl::run_scenario(idl::make_run_spec(sc));
    const double fitted = idl::fit_log_energy_rate(run.trace, 0.5);

    // Newton on the characteristic function s^2 + 1 + b s e^{-tau s}
    const double b = 0.1, tau = M_PI;
    std::complex<double> z(0.05, 1.0);
    for (int i = 0; i < 80; ++i) {
        const auto h = z * z + 1.0 + b * z * std::exp(-tau * z);
        const auto hp = 2.0 * z + b * std::exp(-tau * z) * (1.0 - tau * z);
        z -= h / hp;
    }
    const double target = 2.0 * z.real();
    const bool ok = std::abs(fitted - target) <= 0.1 * std::abs(target);
    report(6, ok, "fitted Datko growth rate matches the characteristic root",
           fmt("fitted %.5f vs 2 sigma = %.5f", fitted, target));
}

// ---------------------------------------------------------------- criterion 7

// Independent series oracle: a 1e6-term long-double Kahan partial sum plus
// tail-sign and log-log-slope analysis of the closed-form terms out to
// n = 1e18 (every sign crossover in this parameter grid happens below 1e13).
// Conclusive only when the far tail has a uniform sign and its decay exponent
// sits clearly away from the p = 1 summability boundary.
struct FamilyParam {
    bool constant = true;
    double a = 1.0;
    double q = 0.0;
    long double at(long double n) const {
        if (constant) return a;
        return static_cast<long double>(a) * std::pow(n + 1.0L, -static_cast<long double>(q));
    }
    idl::SequenceSpec spec() const {
        return constant ? idl::SequenceSpec::constant(a) : idl::SequenceSpec::power_law(a, q);
    }
};

int series_oracle(const std::function<long double(long double)>& term) {
    long double sum = 0.0L, comp = 0.0L, sum_half = 0.0L;
    for (long n = 0; n < 1000000; ++n) {
        const long double y = term(static_cast<long double>(n)) - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (n == 499999) sum_half = sum;
    }
    // far-tail samples at n = 10^k
    bool all_neg = true, all_nonneg = true;
    std::vector<double> lx, ly;
    for (int k = 14; k <= 18; ++k) {
        const long double n = std::pow(10.0L, k);
        const long double t = term(n);
        if (t < 0.0L) all_nonneg = false;
        if (t >= 0.0L) all_neg = false;
        if (t < 0.0L) {
            lx.push_back(k * std::log(10.0));
            ly.push_back(static_cast<double>(std::log(-t)));
        }
    }
    if (all_nonneg) return 0;  // partial sums eventually nondecreasing
    if (!all_neg) return -1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = -(m * sxy - sx * sy) / (m * sxx - sx * sx);  // decay exponent
    if (slope <= 0.93) {
        // flat negative terms must already pull the recorded sums down
        if (slope < 0.1 && !(sum < sum_half)) return -1;
        return 1;
    }
    if (slope >= 1.07) return 0;  // summable tail on top of a finite sum
    return -1;
}

void criterion_grid() {
    const std::vector<FamilyParam> m_fams = {{true, 0.6, 0.0},
                                             {true, 1.0, 0.0},
                                             {false, 1.0, 0.5},
                                             {false, 1.0, 1.0},
                                             {false, 1.0, 2.0}};
    const std::vector<double> M_mults = {1.0, 2.0};
    const std::vector<double> Ts = {1.0, 2.0};
    const std::vector<FamilyParam> u_fams = {{true, 0.0, 0.0},  {true, 0.4, 0.0},
                                             {true, 1.5, 0.0},  {false, 0.5, 2.0},
                                             {false, 0.2, 1.0}, {false, 1.0, 0.7}};
    const double lambda1 = 1.0;

    int combos = 0, compared = 0, mismatches = 0, altro_failures = 0, altro_applied = 0;
    for (const auto& mf : m_fams) {
        for (double mult : M_mults) {
            for (double T : Ts) {
                for (const auto& uf : u_fams) {
                    ++combos;
                    idl::TheoremInputs in;
                    in.m_even = mf.spec();
                    in.M_even = mf.constant
                                    ? idl::SequenceSpec::constant(mf.a * mult)
                                    : idl::SequenceSpec::power_law(mf.a * mult, mf.q);
                    in.T_even = idl::SequenceSpec::constant(T);
                    in.MT_odd = uf.spec();
                    in.lambda1 = lambda1;
                    const idl::CheckResult res = idl::check_theorem(idl::TheoremId::First, in);

                    const auto term = [&](long double n) -> long double {
                        const long double mn = mf.at(n);
                        const long double Mn = mn * mult;
                        const long double un = uf.at(n);
                        const long double T2 = static_cast<long double>(T) * T;
                        const long double S = 4.0L / (lambda1 * mn) + 3.0L * T2 / (32.0L * mn) +
                                              Mn * T2 / (16.0L * lambda1);
                        const long double X = T2 * T / (30.0L * S);
                        // ln(1/(1+X) + u) = ln1p(u (1+X)) - ln1p(X), free of
                        // cancellation for tiny X and u
                        return 2.0L * un + std::log1p(un * (1.0L + X)) - std::log1p(X);
                    };
                    const int oracle = series_oracle(term);
                    if (oracle >= 0) {
                        ++compared;
                        const bool prod_dmi =
                            res.verdict.outcome == idl::Outcome::DivergesToMinusInfinity;
                        if (prod_dmi != (oracle == 1)) ++mismatches;
                    }
                    if (res.prima_holds.value_or(false) && res.seconda_diverges.value_or(false)) {
                        ++altro_applied;
                        if (res.verdict.outcome != idl::Outcome::DivergesToMinusInfinity)
                            ++altro_failures;
                    }
                }
            }
        }
    }
    const bool ok = combos >= 100 && mismatches == 0 && altro_failures == 0 && compared >= 80 &&
                    altro_applied >= 20;
    report(7, ok, "criteria engine agrees with the 1e6-term summation oracle",
           fmt("%g combos, %g compared, %g mismatches", double(combos), double(compared),
               double(mismatches)) +
               fmt(", simplified pair applied %g times with %g counterexamples",
                   double(altro_applied), double(altro_failures)));
}

// ---------------------------------------------------------------- criterion 8

// Independent fraction arithmetic: base-10^4 decimal limbs, no normalization,
// equality by cross-multiplication.
namespace frac_oracle {

struct Big {
    std::vector<int> d;  // little-endian base 10000
    bool neg = false;

    static Big from_ll(long long v) {
        Big b;
        if (v < 0) {
            b.neg = true;
            v = -v;
        }
        while (v) {
            b.d.push_back(static_cast<int>(v % 10000));
            v /= 10000;
        }
        return b;
    }

    static Big from_decimal(const std::string& s) {
        Big b;
        std::size_t start = 0;
        if (!s.empty() && s[0] == '-') {
            b.neg = true;
            start = 1;
        }
        for (std::size_t end = s.size(); end > start;) {
            const std::size_t begin = end >= start + 4 ? end - 4 : start;
            b.d.push_back(std::stoi(s.substr(begin, end - begin)));
            end = begin;
        }
        while (!b.d.empty() && b.d.back() == 0) b.d.pop_back();
        if (b.d.empty()) b.neg = false;
        return b;
    }

    bool zero() const { return d.empty(); }
};

int cmp_mag(const Big& a, const Big& b) {
    if (a.d.size() != b.d.size()) return a.d.size() < b.d.size() ? -1 : 1;
    for (std::size_t i = a.d.size(); i-- > 0;)
        if (a.d[i] != b.d[i]) return a.d[i] < b.d[i] ? -1 : 1;
    return 0;
}

Big add_mag(const Big& a, const Big& b) {
    Big r;
    int carry = 0;
    for (std::size_t i = 0; i < std::max(a.d.size(), b.d.size()) || carry; ++i) {
        int s = carry;
        if (i < a.d.size()) s += a.d[i];
        if (i < b.d.size()) s += b.d[i];
        r.d.push_back(s % 10000);
        carry = s / 10000;
    }
    return r;
}

Big sub_mag(const Big& a, const Big& b) {  // needs |a| >= |b|
    Big r;
    int borrow = 0;
    for (std::size_t i = 0; i < a.d.size(); ++i) {
        int s = a.d[i] - borrow - (i < b.d.size() ? b.d[i] : 0);
        borrow = s < 0;
        if (s < 0) s += 10000;
        r.d.push_back(s);
    }
    while (!r.d.empty() && r.d.back() == 0) r.d.pop_back();
    return r;
}

Big add(const Big& a, const Big& b) {
    if (a.neg == b.neg) {
        Big r = add_mag(a, b);
        r.neg = a.neg && !r.zero();
        return r;
    }
    const int c = cmp_mag(a, b);
    if (c == 0) return Big{};
    Big r = c > 0 ? sub_mag(a, b) : sub_mag(b, a);
    r.neg = (c > 0 ? a.neg : b.neg) && !r.zero();
    return r;
}

Big mul(const Big& a, const Big& b) {
    Big r;
    if (a.zero() || b.zero()) return r;
    r.d.assign(a.d.size() + b.d.size(), 0);
    for (std::size_t i = 0; i < a.d.size(); ++i) {
        long long carry = 0;
        for (std::size_t j = 0; j < b.d.size() || carry; ++j) {
            long long cur = r.d[i + j] + carry;
            if (j < b.d.size()) cur += static_cast<long long>(a.d[i]) * b.d[j];
            r.d[i + j] = static_cast<int>(cur % 10000);
            carry = cur / 10000;
        }
    }
    while (!r.d.empty() && r.d.back() == 0) r.d.pop_back();
    r.neg = a.neg != b.neg && !r.zero();
    return r;
}

struct Frac {
    Big n, d;  // d kept positive, never reduced
    static Frac of(long long nn, long long dd) { return Frac{Big::from_ll(nn), Big::from_ll(dd)}; }
};

Frac add(const Frac& a, const Frac& b) {
    return Frac{add(mul(a.n, b.d), mul(b.n, a.d)), mul(a.d, b.d)};
}
Frac mul(const Frac& a, const Frac& b) { return Frac{mul(a.n, b.n), mul(a.d, b.d)}; }
Frac div(const Frac& a, const Frac& b) {
    Frac r{mul(a.n, b.d), mul(a.d, b.n)};
    if (r.d.neg) {
        r.d.neg = false;
        r.n.neg = !r.n.neg && !r.n.zero();
    }
    return r;
}

bool equals(const Frac& a, const Big& num, const Big& den) {
    const Big lhs = mul(a.n, den);
    const Big rhs = mul(num, a.d);
    return lhs.neg == rhs.neg && cmp_mag(lhs, rhs) == 0;
}

Frac contraction(const Frac& T, const Frac& m, const Frac& M, const Frac& lam) {
    const Frac T2 = mul(T, T);
    const Frac S = add(add(div(Frac::of(4, 1), mul(lam, m)),
                           div(mul(Frac::of(3, 1), T2), mul(Frac::of(32, 1), m))),
                       div(mul(M, T2), mul(Frac::of(16, 1), lam)));
    const Frac X = div(mul(T2, T), mul(Frac::of(30, 1), S));
    return div(Frac::of(1, 1), add(Frac::of(1, 1), X));
}

Frac c_hat(const Frac& c, const Frac& C, const Frac& T, const Frac& M, const Frac& m) {
    const Frac theta = mul(mul(Frac::of(4, 1), mul(C, C)), mul(mul(T, T), mul(M, M)));
    const Frac y = mul(Frac::of(2, 1), mul(c, add(Frac::of(1, 1), theta)));
    return div(y, add(m, y));
}

}  // namespace frac_oracle

bool rational_matches(const idl::Rational& r, const frac_oracle::Frac& expect) {
    const std::string s = r.to_string();
    const auto slash = s.find('/');
    const frac_oracle::Big num =
        frac_oracle::Big::from_decimal(slash == std::string::npos ? s : s.substr(0, slash));
    const frac_oracle::Big den =
        frac_oracle::Big::from_decimal(slash == std::string::npos ? "1" : s.substr(slash + 1));
    return frac_oracle::equals(expect, num, den);
}

void criterion_exact_constants() {
    using idl::Rational;
    bool spots = true;

    if (idl::c_tilde(Rational(1), Rational(1), Rational(1), Rational(1), Rational(0)).to_string() !=
        "1995/2011")
        spots = false;
    if (idl::c_hat_linear(Rational(1), Rational(1), Rational(1), Rational(1), Rational(1))
            .to_string() != "10/11")
        spots = false;
    if (idl::c_hat_linear(Rational(1), Rational(1), Rational(2), Rational(1), Rational(2))
            .to_string() != "17/18")
        spots = false;
    if (idl::d_hat(Rational(1)).to_string() != "1/2") spots = false;

    std::mt19937_64 rng(0xACCE55);
    auto draw = [&] { return 1 + static_cast<long long>(rng() % 60); };
    int checked = 0, bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const long long Tn = draw(), Td = draw(), mn = draw(), md = draw(), kn = draw(),
                        kd = draw(), ln2 = draw(), ld = draw(), dn = draw(), dd = draw(),
                        cn = draw(), cd = draw();
        Rational T(Tn, Td), m(mn, md), M(kn, kd), lam(ln2, ld), d(dn, dd), c(cn, cd);
        using frac_oracle::Frac;
        const Frac fT = Frac::of(Tn, Td);
        Frac fm = Frac::of(mn, md), fM = Frac::of(kn, kd);
        if (m > M) {
            std::swap(m, M);
            std::swap(fm, fM);
        }
        const Frac flam = Frac::of(ln2, ld);
        const Frac fd = Frac::of(dn, dd);
        const Frac fc = Frac::of(cn, cd);

        ++checked;
        const Rational s = idl::obs_contraction_constant(T, m, M, lam);
        if (!rational_matches(s, frac_oracle::contraction(fT, fm, fM, flam))) ++bad;
        const Rational ch = idl::c_hat_linear(c, lam, T, M, m);
        if (!rational_matches(ch, frac_oracle::c_hat(fc, flam, fT, fM, fm))) ++bad;
        const Rational dh = idl::d_hat(d);
        if (!rational_matches(dh, frac_oracle::div(fd, frac_oracle::add(fd, Frac::of(1, 1)))))
            ++bad;
    }
    const bool ok = spots && bad == 0 && checked == 1000;
    report(8, ok, "exact constants match the independent fraction oracle",
           fmt("%g random inputs, %g mismatches, spot values ", double(checked), double(bad)) +
               (spots ? "ok" : "wrong"));
}

// ---------------------------------------------------------------- criterion 9
void criterion_positive_negative() {
    const auto op = idl::SpectralOperator::dirichlet_1d(5, 1.0);
    const auto geo =
        idl::DampingGeometry::localized(idl::Region{0.05, 0.6}, idl::Region{0.65, 0.95});
    const auto s = idl::DampingSchedule::periodic(6, 1.0, 1.0, 1.0, [](int) { return 0.2; }, 0.0,
                                                  idl::DampingMode::negative, geo);
    idl::RunSpec spec;
    spec.op = &op;
    spec.schedule = &s;
    spec.dt = 1e-3;
    spec.sample_stride = 1;
    spec.initial = {0.0, {1.0, 0.5, -0.3, 0.2, -0.1}, {0.0, 0.2, 0.1, -0.1, 0.05}};
    const idl::RunResult run = idl::run_scenario(spec);

    idl::ReportInputs in;
    in.lambda1 = op.poincare_lambda1();
    in.C_embed = 1.0;
    in.monotone_tol_factor = 1e-10;
    const idl::IntervalReport rep = idl::interval_report(run.trace, s, in);
    bool mono = rep.evens.size() == 6 && rep.odds.size() == 6;
    for (const auto& e : rep.evens) mono = mono && e.monotone_ok;
    for (const auto& o : rep.odds) mono = mono && o.monotone_up_ok;

    // the positive-negative criteria must evaluate on this configuration
    bool criteria_ok = true;
    try {
        idl::TheoremInputs ti;
        ti.m_even = idl::SequenceSpec::constant(1.0);
        ti.M_even = idl::SequenceSpec::constant(1.0);
        ti.T_even = idl::SequenceSpec::constant(1.0);
        ti.MT_odd = idl::SequenceSpec::constant(0.2);
        ti.d_seq = idl::SequenceSpec::constant(4.0);
        ti.C3 = 1.0;
        (void)idl::check_theorem(idl::TheoremId::posneg, ti);
        ti.c_obs = 2.0;
        ti.C1 = 1.0;
        ti.T_bar = 0.5;
        (void)idl::check_theorem(idl::TheoremId::posneg_linear, ti);
    } catch (const std::exception&) {
        criteria_ok = false;
    }
    const bool ok = mono && criteria_ok;
    report(9, ok, "positive-negative mode: monotone energies and evaluable criteria",
           fmt("disjoint regions, %g even / %g odd intervals", double(rep.evens.size()),
               double(rep.odds.size())));
}

// --------------------------------------------------------------- criterion 10
void criterion_stability_demo() {
    bool ok = true;
    std::string detail;

    {  // criterion satisfied: decaying delay load, strong even damping
        const auto op = idl::SpectralOperator::custom({1.0, 3.0, 7.0});
        const auto s = idl::DampingSchedule::periodic(
            50, 1.0, 1.0, 1.0, [](int n) { return 0.5 * std::pow(n + 1.0, -2.0); }, 1.0,
            idl::DampingMode::delayed, idl::DampingGeometry::make_distributed());
        idl::RunSpec spec;
        spec.op = &op;
        spec.schedule = &s;
        spec.dt = 1e-3;
        spec.sample_stride = 10;
        spec.history_slots = 100;
        spec.initial = {0.0, {1.0, 0.5, -0.3}, {0.0, 0.2, 0.1}};
        const idl::RunResult run = idl::run_scenario(spec);

        idl::TheoremInputs in;
        in.m_even = idl::SequenceSpec::constant(1.0);
        in.M_even = idl::SequenceSpec::constant(1.0);
        in.T_even = idl::SequenceSpec::constant(1.0);
        in.MT_odd = idl::SequenceSpec::power_law(0.5, 2.0);
        in.lambda1 = 1.0;
        const idl::CheckResult res = idl::check_theorem(idl::TheoremId::First, in);
        if (res.verdict.outcome != idl::Outcome::DivergesToMinusInfinity) ok = false;

        const double e0 = run.trace.rows.front().E_S;
        double prev = e0;
        bool decreasing = true;
        for (int n = 1; n <= 50; ++n) {
            const std::size_t idx = static_cast<std::size_t>(std::llround(2.0 * n / 0.01));
            const double e = run.trace.rows[idx].E_S;
            if (e > prev * (1.0 + 1e-9)) decreasing = false;
            prev = e;
        }
        const double final_ratio = prev / e0;
        if (!decreasing || final_ratio >= 1e-2) ok = false;
        detail += fmt("stable: E_S(final)/E_S(0) = %.3e, monotone along pairs", final_ratio);
    }

    {  // criterion violated: constant large delay load pumps the energy
        const auto op = idl::SpectralOperator::custom({1.0});
        const auto s = idl::DampingSchedule::periodic(
            8, 3.5, 2.0, 1.0, [](int) { return 2.0; }, 3.0, idl::DampingMode::delayed,
            idl::DampingGeometry::make_distributed());
        idl::RunSpec spec;
        spec.op = &op;
        spec.schedule = &s;
        spec.dt = 1e-3;
        spec.sample_stride = 10;
        spec.history_slots = 300;
        spec.initial = {0.0, {1.0}, {0.0}};
        const idl::RunResult run = idl::run_scenario(spec);

        idl::TheoremInputs in;
        in.m_even = idl::SequenceSpec::constant(1.0);
        in.M_even = idl::SequenceSpec::constant(1.0);
        in.T_even = idl::SequenceSpec::constant(3.5);
        in.MT_odd = idl::SequenceSpec::constant(4.0);
        in.lambda1 = 1.0;
        const idl::CheckResult res = idl::check_theorem(idl::TheoremId::First, in);
        if (res.verdict.outcome == idl::Outcome::DivergesToMinusInfinity) ok = false;

        int grew = 0;
        double product = 1.0;
        for (const idl::IntervalRow& row : s.interval_table()) {
            if (row.parity != idl::Parity::odd) continue;
            const std::size_t ia = static_cast<std::size_t>(std::llround(row.t_begin / 0.01));
            const std::size_t ib =
                static_cast<std::size_t>(std::llround((row.t_begin + row.length) / 0.01));
            const double r = run.trace.rows[ib].E / run.trace.rows[ia].E;
            product *= r;
            if (r > 1.0) ++grew;
        }
        if (grew < 8 || product <= 1.0) ok = false;
        detail += fmt("; not concluded: %g/8 delay intervals grow, product %.2e", double(grew),
                      product);
    }

    report(10, ok, "stability demonstration and its converse", detail);
}

}  // namespace

int main() {
    criterion_conservation();
    criterion_closed_form();
    const SharedRun sr = make_shared_run();
    criterion_dissipation(sr);
    criterion_contraction(sr);
    criterion_delay_growth(sr);
    criterion_destabilization();
    criterion_grid();
    criterion_exact_constants();
    criterion_positive_negative();
    criterion_stability_demo();
    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
