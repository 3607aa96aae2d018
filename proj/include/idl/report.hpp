#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "idl/energy.hpp"
#include "idl/errors.hpp"
#include "idl/stability_criteria.hpp"

namespace idl {

inline constexpr const char* kReportSchema = "idl-report-v1";

namespace detail {

inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

// Fixed column layout; the b2 column carries b3 in negative-damping runs.
inline std::string trace_csv_string(const EnergyTrace& trace) {
    std::string out = "t,E_S,E,delay_integral,interval_index,parity,b1,b2\n";
    for (const EnergyRow& r : trace.rows) {
        out += detail::g17(r.t);
        out += ',';
        out += detail::g17(r.E_S);
        out += ',';
        out += detail::g17(r.E);
        out += ',';
        out += detail::g17(r.delay_integral);
        out += ',';
        out += std::to_string(r.interval_index);
        out += ',';
        out += to_string(r.parity);
        out += ',';
        out += detail::g17(r.b1);
        out += ',';
        out += detail::g17(r.b_odd);
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoError("short write to " + path);
}

inline void write_trace_csv(const EnergyTrace& trace, const std::string& path) {
    write_text_file(path, trace_csv_string(trace));
}

struct StabilityReport {
    std::string scenario_hash;
    std::string scenario_name;
    std::string summary = "ok";
    std::vector<std::string> violations;
    std::optional<IntervalReport> intervals;
    std::optional<std::string> theorem;
    std::optional<CheckResult> criteria;
    std::optional<double> fitted_log_rate;
};

inline nlohmann::json verdict_to_json(const Verdict& v) {
    nlohmann::json j;
    j["outcome"] = to_string(v.outcome);
    j["rationale"] = v.rationale;
    nlohmann::json sums = nlohmann::json::array();
    for (const auto& [n, s] : v.partial_sums) sums.push_back({{"N", n}, {"sum", s}});
    j["partial_sums"] = sums;
    return j;
}

inline nlohmann::json report_to_json(const StabilityReport& rep) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["scenario_hash"] = rep.scenario_hash;
    j["scenario_name"] = rep.scenario_name;
    j["summary"] = rep.summary;
    j["violations"] = rep.violations;
    if (rep.fitted_log_rate) j["fitted_log_rate"] = *rep.fitted_log_rate;
    if (rep.intervals) {
        nlohmann::json evens = nlohmann::json::array();
        for (const EvenIntervalCheck& e : rep.intervals->evens) {
            nlohmann::json r;
            r["n"] = e.n;
            r["t_begin"] = e.t_begin;
            r["length"] = e.length;
            r["observed_ratio"] = e.ratio;
            if (e.bound) r["bound"] = *e.bound;
            r["ratio_ok"] = e.ratio_ok;
            r["monotone_ok"] = e.monotone_ok;
            evens.push_back(r);
        }
        nlohmann::json odds = nlohmann::json::array();
        for (const OddIntervalCheck& o : rep.intervals->odds) {
            nlohmann::json r;
            r["n"] = o.n;
            r["t_begin"] = o.t_begin;
            r["length"] = o.length;
            r["observed_growth"] = o.growth;
            r["bound"] = o.bound;
            r["growth_ok"] = o.growth_ok;
            r["pointwise_ok"] = o.pointwise_ok;
            r["monotone_up_ok"] = o.monotone_up_ok;
            odds.push_back(r);
        }
        j["intervals"] = {{"even", evens}, {"odd", odds}};
    }
    if (rep.criteria) {
        nlohmann::json c;
        c["theorem"] = rep.theorem.value_or("");
        c["verdict"] = verdict_to_json(rep.criteria->verdict);
        c["term_preview"] = rep.criteria->term_preview;
        if (rep.criteria->prima_holds) c["prima_holds"] = *rep.criteria->prima_holds;
        if (rep.criteria->seconda_diverges) c["seconda_diverges"] = *rep.criteria->seconda_diverges;
        c["simplified_pair_applies"] = rep.criteria->simplified_pair_applies;
        c["hypothesis_flags"] = rep.criteria->hypothesis_flags;
        j["criteria"] = c;
    }
    return j;
}

inline void write_report_json(const StabilityReport& rep, const std::string& path) {
    write_text_file(path, report_to_json(rep).dump(2) + "\n");
}

}  // namespace idl
