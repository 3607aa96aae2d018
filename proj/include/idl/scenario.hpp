#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idl/dde_integrator.hpp"
#include "idl/errors.hpp"
#include "idl/observability.hpp"
#include "idl/operator_core.hpp"
#include "idl/schedule.hpp"
#include "idl/stability_criteria.hpp"

namespace idl {

using json = nlohmann::json;

inline constexpr const char* kScenarioSchema = "idl-scenario-v1";

struct DConstantSpec {
    enum class Kind { none, constant, empirical };
    Kind kind = Kind::none;
    double value = 0.0;
    int trials = 8;
    int interval = 0;
};

struct OddCoefficientRule {
    enum class Kind { constant, power_law, geometric };
    Kind kind = Kind::constant;
    double value = 0.0;      // constant
    double amplitude = 0.0;  // power_law / geometric
    double exponent = 0.0;   // power_law
    double ratio = 1.0;      // geometric

    double at(int n) const {
        switch (kind) {
            case Kind::constant: return value;
            case Kind::power_law: return amplitude * std::pow(n + 1.0, -exponent);
            case Kind::geometric: return amplitude * std::pow(ratio, n);
        }
        return 0.0;
    }

    SequenceSpec magnitude_sequence(double scale) const {
        switch (kind) {
            case Kind::constant: return SequenceSpec::constant(std::abs(value) * scale);
            case Kind::power_law: return SequenceSpec::power_law(std::abs(amplitude) * scale, exponent);
            case Kind::geometric: return SequenceSpec::geometric(std::abs(amplitude) * scale, ratio);
        }
        return SequenceSpec::constant(0.0);
    }
};

struct GeneratorInfo {
    bool periodic = false;
    int pairs = 0;
    double t_even = 0.0;
    double t_odd = 0.0;
    double b1 = 0.0;
    OddCoefficientRule odd_rule;
};

struct Scenario {
    json doc;
    std::string name;
    std::uint64_t seed = 0;

    SpectralOperator op = SpectralOperator::custom({1.0});
    DampingSchedule schedule;
    bool nonlinearity_on = false;
    double p = 0.0;
    std::optional<FeedbackG> g;

    double dt = 1e-3;
    long sample_stride = 1;
    int history_slots = 1;
    double safety = 0.5;
    double horizon = 0.0;

    SystemState initial;
    HistorySpec prehistory;

    std::optional<double> C, C1, C3, c_obs, T_bar;
    DConstantSpec d_spec;
    GeneratorInfo generator;

    std::string out_dir;
    std::string trace_csv;
    std::string report_json;
    std::string hash;
};

namespace detail {

inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

inline const json& need(const json& j, const char* key, const char* where) {
    if (!j.contains(key))
        throw ParseError(std::string("scenario: missing '") + key + "' in " + where);
    return j.at(key);
}

}  // namespace detail

// Hash of every numerics-affecting field: the document minus output routing
// and the display name.
inline std::string scenario_hash(const json& doc) {
    json j = doc;
    j.erase("outputs");
    j.erase("name");
    return detail::fnv1a_hex(j.dump());
}

inline SpectralOperator build_operator(const json& spec) {
    const std::string kind = detail::need(spec, "kind", "operator").get<std::string>();
    if (kind == "dirichlet_1d") {
        return SpectralOperator::dirichlet_1d(
            detail::need(spec, "modes", "operator").get<int>(),
            detail::need(spec, "length", "operator").get<double>(),
            detail::get_or(spec, "nodes_per_wavelength", 8));
    }
    if (kind == "custom") {
        return SpectralOperator::custom(
            detail::need(spec, "eigenvalues", "operator").get<std::vector<double>>());
    }
    throw ParseError("scenario: unknown operator kind '" + kind + "'");
}

namespace detail {

inline OddCoefficientRule parse_odd_rule(const json& j) {
    OddCoefficientRule r;
    if (j.is_number()) {
        r.kind = OddCoefficientRule::Kind::constant;
        r.value = j.get<double>();
        return r;
    }
    const std::string kind = need(j, "kind", "b_odd rule").get<std::string>();
    if (kind == "constant") {
        r.kind = OddCoefficientRule::Kind::constant;
        r.value = need(j, "value", "b_odd rule").get<double>();
    } else if (kind == "power_law") {
        r.kind = OddCoefficientRule::Kind::power_law;
        r.amplitude = need(j, "amplitude", "b_odd rule").get<double>();
        r.exponent = need(j, "exponent", "b_odd rule").get<double>();
    } else if (kind == "geometric") {
        r.kind = OddCoefficientRule::Kind::geometric;
        r.amplitude = need(j, "amplitude", "b_odd rule").get<double>();
        r.ratio = need(j, "ratio", "b_odd rule").get<double>();
    } else {
        throw ParseError("scenario: unknown coefficient rule '" + kind + "'");
    }
    return r;
}

inline DampingGeometry parse_geometry(const json& j) {
    const std::string kind = get_or<std::string>(j, "kind", "distributed");
    if (kind == "distributed") return DampingGeometry::make_distributed();
    if (kind == "localized") {
        auto om = need(j, "omega", "geometry").get<std::vector<double>>();
        auto ot = need(j, "omega_tilde", "geometry").get<std::vector<double>>();
        if (om.size() != 2 || ot.size() != 2)
            throw ParseError("scenario: regions are [a, b] pairs");
        return DampingGeometry::localized(Region{om[0], om[1]}, Region{ot[0], ot[1]});
    }
    throw ParseError("scenario: unknown geometry kind '" + kind + "'");
}

}  // namespace detail

inline Scenario scenario_from_json(const json& doc);

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("scenario: cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    return scenario_from_json(doc);
}

inline Scenario scenario_from_json(const json& doc) {
    Scenario sc;
    sc.doc = doc;
    if (detail::get_or<std::string>(doc, "schema", kScenarioSchema) != kScenarioSchema)
        throw ParseError("scenario: unsupported schema version");
    sc.name = detail::get_or<std::string>(doc, "name", "scenario");
    sc.seed = detail::get_or<std::uint64_t>(doc, "seed", 0);

    sc.op = build_operator(detail::need(doc, "operator", "scenario"));

    if (doc.contains("nonlinearity")) {
        const json& nl = doc.at("nonlinearity");
        sc.nonlinearity_on = detail::get_or(nl, "enabled", false);
        sc.p = detail::get_or(nl, "p", 0.0);
        if (sc.p < 0.0) throw ParseError("scenario: nonlinearity exponent p must be >= 0");
    }
    if (doc.contains("feedback_g")) {
        const json& fg = doc.at("feedback_g");
        if (detail::get_or(fg, "enabled", false))
            sc.g = FeedbackG(detail::need(fg, "lower_slope", "feedback_g").get<double>(),
                             detail::need(fg, "upper_slope", "feedback_g").get<double>());
    }

    const json& sj = detail::need(doc, "schedule", "scenario");
    const std::string mode_s = detail::get_or<std::string>(sj, "mode", "delayed");
    const DampingMode mode = mode_s == "negative" ? DampingMode::negative : DampingMode::delayed;
    if (mode_s != "delayed" && mode_s != "negative")
        throw ParseError("scenario: schedule mode must be 'delayed' or 'negative'");
    const double tau = detail::get_or(sj, "tau", 0.0);
    const DampingGeometry geometry = detail::parse_geometry(
        sj.contains("geometry") ? sj.at("geometry") : json::object());

    const json& ij = detail::need(sj, "intervals", "schedule");
    const std::string ikind = detail::need(ij, "kind", "intervals").get<std::string>();
    if (ikind == "periodic") {
        GeneratorInfo gen;
        gen.periodic = true;
        gen.pairs = detail::need(ij, "pairs", "intervals").get<int>();
        gen.t_even = detail::need(ij, "t_even", "intervals").get<double>();
        gen.t_odd = detail::need(ij, "t_odd", "intervals").get<double>();
        gen.b1 = detail::need(ij, "b1", "intervals").get<double>();
        gen.odd_rule = detail::parse_odd_rule(detail::need(ij, "b_odd", "intervals"));
        sc.generator = gen;
        const OddCoefficientRule rule = gen.odd_rule;
        sc.schedule = DampingSchedule::periodic(
            gen.pairs, gen.t_even, gen.t_odd, gen.b1, [rule](int n) { return rule.at(n); }, tau,
            mode, geometry, sc.g);
    } else if (ikind == "explicit") {
        const auto times = detail::need(ij, "switch_times", "intervals").get<std::vector<double>>();
        std::vector<EvenRecord> even;
        std::vector<OddRecord> odd;
        for (const json& e : detail::get_or(ij, "even", json::array())) {
            const double b1 = detail::need(e, "b1", "even record").get<double>();
            even.push_back(EvenRecord{CoefficientFn::constant(b1),
                                      detail::get_or(e, "m", b1), detail::get_or(e, "M", b1)});
        }
        for (const json& o : detail::get_or(ij, "odd", json::array())) {
            const double b = detail::need(o, "b", "odd record").get<double>();
            odd.push_back(OddRecord{CoefficientFn::constant(b),
                                    detail::get_or(o, "M", std::abs(b))});
        }
        sc.schedule = DampingSchedule::explicit_schedule(times, even, odd, tau, mode, geometry, sc.g);
    } else {
        throw ParseError("scenario: unknown interval layout '" + ikind + "'");
    }

    const json& integ = detail::need(doc, "integrator", "scenario");
    sc.dt = detail::need(integ, "dt", "integrator").get<double>();
    sc.sample_stride = detail::get_or<long>(integ, "sample_stride", 1);
    sc.history_slots = detail::get_or(integ, "history_slots", 1);
    sc.safety = detail::get_or(integ, "safety", 0.5);
    sc.horizon = detail::get_or(doc, "horizon", sc.schedule.horizon());

    const json& init = detail::need(doc, "initial", "scenario");
    const std::string init_kind = detail::need(init, "kind", "initial").get<std::string>();
    const int n = sc.op.mode_count();
    sc.initial.position.assign(static_cast<std::size_t>(n), 0.0);
    sc.initial.velocity.assign(static_cast<std::size_t>(n), 0.0);
    if (init_kind == "modes") {
        auto pos = detail::need(init, "position", "initial").get<std::vector<double>>();
        auto vel = detail::need(init, "velocity", "initial").get<std::vector<double>>();
        if (static_cast<int>(pos.size()) != n || static_cast<int>(vel.size()) != n)
            throw ParseError("scenario: initial data dimension mismatch");
        sc.initial.position = std::move(pos);
        sc.initial.velocity = std::move(vel);
    } else if (init_kind == "named") {
        const std::string shape = detail::need(init, "name", "initial").get<std::string>();
        const double amp = detail::get_or(init, "amplitude", 1.0);
        if (shape == "fundamental") {
            sc.initial.position[0] = amp;
        } else if (shape == "mixed") {
            for (int k = 0; k < n; ++k)
                sc.initial.position[static_cast<std::size_t>(k)] = amp * std::pow(2.0, -(k + 1));
        } else {
            throw ParseError("scenario: unknown initial shape '" + shape + "'");
        }
    } else {
        throw ParseError("scenario: unknown initial kind '" + init_kind + "'");
    }

    sc.prehistory.rule = HistorySpec::Rule::zero;
    sc.prehistory.tau = tau;
    sc.prehistory.slots = std::max(1, sc.history_slots);
    if (doc.contains("prehistory")) {
        const json& ph = doc.at("prehistory");
        const std::string rule = detail::get_or<std::string>(ph, "rule", "zero");
        if (rule == "constant") {
            sc.prehistory.rule = HistorySpec::Rule::constant;
            sc.prehistory.constant_velocity =
                detail::need(ph, "velocity", "prehistory").get<std::vector<double>>();
        } else if (rule != "zero") {
            throw ParseError("scenario: unknown prehistory rule '" + rule + "'");
        }
    }

    if (doc.contains("criteria")) {
        const json& cj = doc.at("criteria");
        if (cj.contains("C")) sc.C = cj.at("C").get<double>();
        if (cj.contains("C1")) sc.C1 = cj.at("C1").get<double>();
        if (cj.contains("C3")) sc.C3 = cj.at("C3").get<double>();
        if (cj.contains("c")) sc.c_obs = cj.at("c").get<double>();
        if (cj.contains("T_bar")) sc.T_bar = cj.at("T_bar").get<double>();
        if (cj.contains("d")) {
            const json& dj = cj.at("d");
            const std::string kind = detail::need(dj, "kind", "criteria.d").get<std::string>();
            if (kind == "constant") {
                sc.d_spec.kind = DConstantSpec::Kind::constant;
                sc.d_spec.value = detail::need(dj, "value", "criteria.d").get<double>();
            } else if (kind == "empirical") {
                sc.d_spec.kind = DConstantSpec::Kind::empirical;
                sc.d_spec.trials = detail::get_or(dj, "trials", 8);
                sc.d_spec.interval = detail::get_or(dj, "interval", 0);
            } else {
                throw ParseError("scenario: unknown d specification '" + kind + "'");
            }
        }
    }

    sc.out_dir = ".";
    if (const char* env = std::getenv("IDL_OUT_DIR")) sc.out_dir = env;
    if (doc.contains("outputs")) {
        const json& oj = doc.at("outputs");
        const std::string dir = detail::get_or<std::string>(oj, "dir", "");
        if (!dir.empty()) sc.out_dir = dir;
        sc.trace_csv = detail::get_or<std::string>(oj, "trace_csv", "");
        sc.report_json = detail::get_or<std::string>(oj, "report_json", "");
    }
    sc.hash = scenario_hash(doc);
    if (sc.trace_csv.empty()) sc.trace_csv = "trace-" + sc.hash + ".csv";
    if (sc.report_json.empty()) sc.report_json = "report-" + sc.hash + ".json";

    // Aggregate validation: schedule structure plus grid compatibility.
    std::vector<std::string> problems;
    for (const Violation& v : validate_schedule(sc.schedule))
        problems.push_back(v.kind + " (interval " + std::to_string(v.interval) + "): " + v.detail);
    if (!(sc.dt > 0.0)) problems.push_back("integrator dt must be positive");
    if (sc.horizon > sc.schedule.horizon() + 1e-9)
        problems.push_back("horizon exceeds schedule horizon");
    auto on_grid = [&](double t) {
        const long k = std::llround(t / sc.dt);
        return std::abs(k * sc.dt - t) <= 1e-9 * std::max(1.0, std::abs(t));
    };
    if (!on_grid(sc.horizon)) problems.push_back("horizon is not a multiple of dt");
    for (const Interval& iv : sc.schedule.intervals()) {
        if (iv.t_end > sc.horizon + 1e-9) break;
        if (!on_grid(iv.t_end))
            problems.push_back("switch time " + std::to_string(iv.t_end) +
                               " is not a multiple of dt");
        else if (std::llround(iv.t_end / sc.dt) % sc.sample_stride != 0)
            problems.push_back("sample stride misses switch time " + std::to_string(iv.t_end));
    }
    if (sc.schedule.has_delay()) {
        const double slot_dt = sc.schedule.tau() / std::max(1, sc.history_slots);
        const long r = std::llround(slot_dt / sc.dt);
        if (r < 1 || std::abs(r * sc.dt - slot_dt) > 1e-9 * slot_dt)
            problems.push_back("dt must divide tau/history_slots exactly");
    }
    if (!sc.schedule.geometry().distributed && sc.op.has_geometry()) {
        const double L = sc.op.length();
        const auto& g = sc.schedule.geometry();
        if (g.omega.a < 0.0 || g.omega.b > L || g.omega_tilde.a < 0.0 || g.omega_tilde.b > L)
            problems.push_back("damping regions must lie inside (0, L)");
    }
    if (!sc.schedule.geometry().distributed && !sc.op.has_geometry())
        problems.push_back("localized damping needs an operator with geometry");
    if (!problems.empty()) {
        std::string msg = "scenario validation failed:";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ValidationError(msg);
    }
    return sc;
}

inline RunSpec make_run_spec(const Scenario& sc) {
    RunSpec rs;
    rs.op = &sc.op;
    rs.schedule = &sc.schedule;
    rs.nonlinearity_on = sc.nonlinearity_on;
    rs.p = sc.p;
    rs.initial = sc.initial;
    rs.dt = sc.dt;
    rs.sample_stride = sc.sample_stride;
    rs.history_slots = sc.history_slots;
    rs.horizon = sc.horizon;
    rs.safety = sc.safety;
    rs.prehistory = sc.prehistory;
    rs.scenario_hash = sc.hash;
    return rs;
}

// Criteria-engine inputs derived from the schedule. Periodic generators give
// symbolic families; explicit schedules fall back to finite lists.
inline TheoremInputs make_theorem_inputs(const Scenario& sc,
                                         std::optional<double> resolved_d = std::nullopt) {
    TheoremInputs in;
    in.lambda1 = sc.op.poincare_lambda1();
    in.C_embed = sc.C.value_or(1.0);
    in.C1 = sc.C1.value_or(1.0);
    in.C3 = sc.C3.value_or(1.0);
    in.c_obs = sc.c_obs;
    in.T_bar = sc.T_bar;

    // Effective even-interval bounds under a nonlinear feedback g follow its
    // slope window.
    double g_lo = 1.0, g_hi = 1.0;
    if (sc.g) {
        g_lo = sc.g->lower_slope();
        g_hi = sc.g->upper_slope();
    }

    if (sc.generator.periodic) {
        in.m_even = SequenceSpec::constant(sc.generator.b1 * g_lo);
        in.M_even = SequenceSpec::constant(sc.generator.b1 * g_hi);
        in.T_even = SequenceSpec::constant(sc.generator.t_even);
        in.MT_odd = sc.generator.odd_rule.magnitude_sequence(sc.generator.t_odd);
    } else {
        std::vector<double> m, M, T, MT;
        for (const IntervalRow& row : sc.schedule.interval_table()) {
            if (row.parity == Parity::even) {
                m.push_back(row.m * g_lo);
                M.push_back(row.M * g_hi);
                T.push_back(row.length);
            } else {
                MT.push_back(row.M_odd * row.length);
            }
        }
        in.m_even = SequenceSpec::list(std::move(m));
        in.M_even = SequenceSpec::list(std::move(M));
        in.T_even = SequenceSpec::list(std::move(T));
        in.MT_odd = SequenceSpec::list(std::move(MT));
    }

    if (resolved_d) {
        in.d_seq = SequenceSpec::constant(*resolved_d);
    } else if (sc.d_spec.kind == DConstantSpec::Kind::constant) {
        in.d_seq = SequenceSpec::constant(sc.d_spec.value);
    }
    return in;
}

// Resolves the observability constant d, running the empirical estimator when
// the scenario asks for it.
inline std::optional<double> resolve_d_constant(const Scenario& sc) {
    switch (sc.d_spec.kind) {
        case DConstantSpec::Kind::none: return std::nullopt;
        case DConstantSpec::Kind::constant: return sc.d_spec.value;
        case DConstantSpec::Kind::empirical: {
            const ObservabilityEstimate est = estimate_observability_constant(
                sc.op, sc.schedule, sc.d_spec.interval, sc.dt, sc.d_spec.trials, sc.seed,
                sc.nonlinearity_on, sc.p);
            if (est.non_observable)
                throw DegenerateTrial("criteria: empirical observability found no contraction");
            return est.d;
        }
    }
    return std::nullopt;
}

// ---- presets ----

inline std::vector<std::string> preset_names() {
    return {"conservative", "distributed_wave", "localized_wave", "posneg_wave", "datko_delay"};
}

inline json preset_json(const std::string& name) {
    json j;
    j["schema"] = kScenarioSchema;
    j["name"] = name;
    j["seed"] = 20150915;
    if (name == "conservative") {
        j["operator"] = {{"kind", "dirichlet_1d"}, {"modes", 8}, {"length", 1.0}};
        j["nonlinearity"] = {{"enabled", false}, {"p", 0.0}};
        j["schedule"] = {{"mode", "delayed"},
                         {"tau", 0.0},
                         {"geometry", {{"kind", "distributed"}}},
                         {"intervals",
                          {{"kind", "explicit"},
                           {"switch_times", {0.0, 100.0}},
                           {"even", json::array()},
                           {"odd", {{{"b", 0.0}, {"M", 0.0}}}}}}};
        j["integrator"] = {{"dt", 1e-3}, {"sample_stride", 100}};
        j["initial"] = {{"kind", "named"}, {"name", "fundamental"}, {"amplitude", 1.0}};
        j["horizon"] = 100.0;
    } else if (name == "distributed_wave") {
        j["operator"] = {{"kind", "dirichlet_1d"}, {"modes", 6}, {"length", 1.0}};
        j["nonlinearity"] = {{"enabled", true}, {"p", 2.0}};
        j["schedule"] = {{"mode", "delayed"},
                         {"tau", 1.0},
                         {"geometry", {{"kind", "distributed"}}},
                         {"intervals",
                          {{"kind", "periodic"},
                           {"pairs", 8},
                           {"t_even", 2.0},
                           {"t_odd", 1.0},
                           {"b1", 1.0},
                           {"b_odd", {{"kind", "constant"}, {"value", 0.05}}}}}};
        j["integrator"] = {{"dt", 1e-3}, {"sample_stride", 10}, {"history_slots", 100}};
        j["initial"] = {{"kind", "named"}, {"name", "mixed"}, {"amplitude", 0.5}};
        j["criteria"] = {{"C", 1.0}};
    } else if (name == "localized_wave") {
        j["operator"] = {{"kind", "dirichlet_1d"}, {"modes", 6}, {"length", 1.0}};
        j["nonlinearity"] = {{"enabled", true}, {"p", 2.0}};
        j["schedule"] = {{"mode", "delayed"},
                         {"tau", 1.0},
                         {"geometry",
                          {{"kind", "localized"},
                           {"omega", {0.05, 0.65}},
                           {"omega_tilde", {0.15, 0.55}}}},
                         {"intervals",
                          {{"kind", "periodic"},
                           {"pairs", 8},
                           {"t_even", 2.0},
                           {"t_odd", 1.0},
                           {"b1", 1.0},
                           {"b_odd", {{"kind", "power_law"}, {"amplitude", 0.2}, {"exponent", 2.0}}}}}};
        j["integrator"] = {{"dt", 1e-3}, {"sample_stride", 10}, {"history_slots", 100}};
        j["initial"] = {{"kind", "named"}, {"name", "mixed"}, {"amplitude", 0.5}};
        j["criteria"] = {{"C", 1.0}, {"d", {{"kind", "empirical"}, {"trials", 8}, {"interval", 0}}}};
    } else if (name == "posneg_wave") {
        j["operator"] = {{"kind", "dirichlet_1d"}, {"modes", 6}, {"length", 1.0}};
        j["nonlinearity"] = {{"enabled", false}, {"p", 0.0}};
        j["schedule"] = {{"mode", "negative"},
                         {"tau", 0.0},
                         {"geometry",
                          {{"kind", "localized"},
                           {"omega", {0.05, 0.65}},
                           {"omega_tilde", {0.7, 0.95}}}},
                         {"intervals",
                          {{"kind", "periodic"},
                           {"pairs", 8},
                           {"t_even", 2.0},
                           {"t_odd", 1.0},
                           {"b1", 1.0},
                           {"b_odd", {{"kind", "power_law"}, {"amplitude", 0.1}, {"exponent", 2.0}}}}}};
        j["integrator"] = {{"dt", 1e-3}, {"sample_stride", 10}};
        j["initial"] = {{"kind", "named"}, {"name", "mixed"}, {"amplitude", 0.5}};
        j["criteria"] = {{"C1", 1.0},
                         {"C3", 1.0},
                         {"c", 2.0},
                         {"T_bar", 0.5},
                         {"d", {{"kind", "constant"}, {"value", 4.0}}}};
    } else if (name == "datko_delay") {
        // Pure delayed damping; parameters sit on the destabilizing branch of
        // the characteristic equation s^2 + 1 + b s e^{-tau s} = 0.
        const double tau = M_PI;
        const double dt = tau / 2048.0;
        const long steps = 80000;
        const double horizon = steps * dt;
        j["operator"] = {{"kind", "custom"}, {"eigenvalues", {1.0}}};
        j["nonlinearity"] = {{"enabled", false}, {"p", 0.0}};
        j["schedule"] = {{"mode", "delayed"},
                         {"tau", tau},
                         {"geometry", {{"kind", "distributed"}}},
                         {"intervals",
                          {{"kind", "explicit"},
                           {"switch_times", {0.0, horizon}},
                           {"even", json::array()},
                           {"odd", {{{"b", 0.1}, {"M", 0.1}}}}}}};
        j["integrator"] = {{"dt", dt}, {"sample_stride", 16}, {"history_slots", 1024}};
        j["initial"] = {{"kind", "modes"}, {"position", {1.0}}, {"velocity", {0.0}}};
        j["prehistory"] = {{"rule", "zero"}};
        j["horizon"] = horizon;
    } else {
        throw ParseError("unknown preset '" + name + "'");
    }
    j["outputs"] = {{"dir", ""}};
    return j;
}

inline Scenario load_preset(const std::string& name) { return scenario_from_json(preset_json(name)); }

// Dotted-path parameter override for sweeps: "schedule.intervals.b_odd.value".
inline json with_parameter(const json& doc, const std::string& dotted_path, double value) {
    std::string ptr = "/";
    for (char c : dotted_path) ptr += c == '.' ? '/' : c;
    json out = doc;
    try {
        out[json::json_pointer(ptr)] = value;
    } catch (const json::exception& e) {
        throw ParseError("sweep: bad parameter path '" + dotted_path + "': " + e.what());
    }
    return out;
}

}  // namespace idl
