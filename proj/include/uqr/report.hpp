#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqr/classical.hpp"
#include "uqr/config.hpp"
#include "uqr/errors.hpp"
#include "uqr/operators.hpp"
#include "uqr/quantum_stats.hpp"
#include "uqr/relations.hpp"
#include "uqr/states.hpp"
#include "uqr/version.hpp"

// JSON emission and parsing for every report type the CLI can produce.
// JSON is the canonical format; CSV exists for sweep tables and the human
// rendering is derived text, never parsed back.

namespace uqr {

using json = nlohmann::json;

// ---- config ----------------------------------------------------------------

inline void to_json(json& j, const Config& c) {
    j = json{{"hbar", c.hbar},
             {"circle_n", c.circle_n},
             {"line_n", c.line_n},
             {"norm_tol", c.norm_tol},
             {"herm_tol", c.herm_tol},
             {"boundary_tol_factor", c.boundary_tol_factor},
             {"divergence_ratio", c.divergence_ratio},
             {"refinements", c.refinements},
             {"increment_floor_rel", c.increment_floor_rel},
             {"settle_rel", c.settle_rel},
             {"relation_tol_c", c.relation_tol_c},
             {"relation_tol_abs", c.relation_tol_abs},
             {"truncation_tol", c.truncation_tol},
             {"oracle_cap", c.oracle_cap},
             {"output", c.output}};
}

inline void from_json(const json& j, Config& c) {
    c = Config{};
    if (j.contains("hbar")) j.at("hbar").get_to(c.hbar);
    if (j.contains("circle_n")) j.at("circle_n").get_to(c.circle_n);
    if (j.contains("line_n")) j.at("line_n").get_to(c.line_n);
    if (j.contains("norm_tol")) j.at("norm_tol").get_to(c.norm_tol);
    if (j.contains("herm_tol")) j.at("herm_tol").get_to(c.herm_tol);
    if (j.contains("boundary_tol_factor")) j.at("boundary_tol_factor").get_to(c.boundary_tol_factor);
    if (j.contains("divergence_ratio")) j.at("divergence_ratio").get_to(c.divergence_ratio);
    if (j.contains("refinements")) j.at("refinements").get_to(c.refinements);
    if (j.contains("increment_floor_rel")) j.at("increment_floor_rel").get_to(c.increment_floor_rel);
    if (j.contains("settle_rel")) j.at("settle_rel").get_to(c.settle_rel);
    if (j.contains("relation_tol_c")) j.at("relation_tol_c").get_to(c.relation_tol_c);
    if (j.contains("relation_tol_abs")) j.at("relation_tol_abs").get_to(c.relation_tol_abs);
    if (j.contains("truncation_tol")) j.at("truncation_tol").get_to(c.truncation_tol);
    if (j.contains("oracle_cap")) j.at("oracle_cap").get_to(c.oracle_cap);
    if (j.contains("output")) j.at("output").get_to(c.output);
    c.validate();
}

// ---- domain reports ---------------------------------------------------------

inline void to_json(json& j, const DomainReport& r) {
    j = json{{"in_domain", to_string(r.in_domain)},
             {"reason", to_string(r.reason)},
             {"boundary_magnitude_mismatch", r.boundary_magnitude_mismatch},
             {"divergence", r.divergence_flag},
             {"checked", r.checked}};
    json seq = json::array();
    for (const auto& [n, v] : r.derivative_norm_sequence) seq.push_back(json{{"n", n}, {"norm", v}});
    j["norm_sequence"] = seq;
}

inline void from_json(const json& j, DomainReport& r) {
    r = DomainReport{};
    const std::string verdict = j.at("in_domain").get<std::string>();
    if (verdict == "yes") r.in_domain = DomainVerdict::Yes;
    else if (verdict == "no") r.in_domain = DomainVerdict::No;
    else if (verdict == "marginal") r.in_domain = DomainVerdict::Marginal;
    else throw ParseError("domain report: bad verdict '" + verdict + "'");
    const std::string reason = j.at("reason").get<std::string>();
    if (reason == "ok") r.reason = DomainReason::OK;
    else if (reason == "boundary-condition-violated") r.reason = DomainReason::BoundaryConditionViolated;
    else if (reason == "derivative-not-square-integrable")
        r.reason = DomainReason::DerivativeNotSquareIntegrable;
    else if (reason == "not-differentiable") r.reason = DomainReason::NotDifferentiable;
    else throw ParseError("domain report: bad reason '" + reason + "'");
    j.at("boundary_magnitude_mismatch").get_to(r.boundary_magnitude_mismatch);
    j.at("divergence").get_to(r.divergence_flag);
    j.at("checked").get_to(r.checked);
    for (const auto& e : j.at("norm_sequence"))
        r.derivative_norm_sequence.emplace_back(e.at("n").get<int>(), e.at("norm").get<double>());
}

// ---- statistics -------------------------------------------------------------

inline void to_json(json& j, const StatReport& s) {
    j = json{{"mean_a", s.mean_a},
             {"mean_b", s.mean_b},
             {"delta_a", s.delta_a},
             {"delta_b", s.delta_b},
             {"covariance", s.covariance},
             {"imag_cross", s.imag_cross},
             {"mean_imag_residual_a", s.mean_imag_residual_a},
             {"mean_imag_residual_b", s.mean_imag_residual_b},
             {"warnings", s.warnings}};
    if (s.commutator_expectation) j["commutator_expectation"] = *s.commutator_expectation;
}

inline void from_json(const json& j, StatReport& s) {
    s = StatReport{};
    j.at("mean_a").get_to(s.mean_a);
    j.at("mean_b").get_to(s.mean_b);
    j.at("delta_a").get_to(s.delta_a);
    j.at("delta_b").get_to(s.delta_b);
    j.at("covariance").get_to(s.covariance);
    j.at("imag_cross").get_to(s.imag_cross);
    j.at("mean_imag_residual_a").get_to(s.mean_imag_residual_a);
    j.at("mean_imag_residual_b").get_to(s.mean_imag_residual_b);
    j.at("warnings").get_to(s.warnings);
    if (j.contains("commutator_expectation"))
        s.commutator_expectation = j.at("commutator_expectation").get<double>();
}

// ---- relation reports -------------------------------------------------------

inline void to_json(json& j, const BoundReport& b) {
    j = json{{"applies", b.applies}};
    if (b.applies) {
        j["value"] = b.value;
        j["satisfied"] = b.satisfied;
        j["margin"] = b.margin;
    }
    if (b.blocker) j["blocked_by"] = *b.blocker;
}

inline void from_json(const json& j, BoundReport& b) {
    b = BoundReport{};
    j.at("applies").get_to(b.applies);
    if (b.applies) {
        j.at("value").get_to(b.value);
        j.at("satisfied").get_to(b.satisfied);
        j.at("margin").get_to(b.margin);
    }
    if (j.contains("blocked_by")) b.blocker = j.at("blocked_by").get<DomainReport>();
}

inline void to_json(json& j, const RelationReport& r) {
    j = json{{"stats", r.stats},
             {"lhs", r.lhs},
             {"modified", r.modified},
             {"tolerance", r.tolerance_used}};
    if (r.commutator_form) j["commutator_form"] = *r.commutator_form;
    if (r.standard) j["standard"] = *r.standard;
}

inline void from_json(const json& j, RelationReport& r) {
    r = RelationReport{};
    j.at("stats").get_to(r.stats);
    j.at("lhs").get_to(r.lhs);
    j.at("modified").get_to(r.modified);
    j.at("tolerance").get_to(r.tolerance_used);
    if (j.contains("commutator_form"))
        r.commutator_form = j.at("commutator_form").get<BoundReport>();
    if (j.contains("standard")) r.standard = j.at("standard").get<BoundReport>();
}

// ---- classical reports -------------------------------------------------------

inline void to_json(json& j, const ClassicalMoments& m) {
    j = json{{"mean_a", m.mean_a},
             {"mean_b", m.mean_b},
             {"delta_a", m.delta_a},
             {"delta_b", m.delta_b},
             {"sigma_ab", m.sigma_ab}};
}

inline void from_json(const json& j, ClassicalMoments& m) {
    j.at("mean_a").get_to(m.mean_a);
    j.at("mean_b").get_to(m.mean_b);
    j.at("delta_a").get_to(m.delta_a);
    j.at("delta_b").get_to(m.delta_b);
    j.at("sigma_ab").get_to(m.sigma_ab);
}

inline void to_json(json& j, const ClassicalRelationReport& r) {
    j = json{{"moments", r.moments},
             {"lhs", r.lhs},
             {"rhs", r.rhs},
             {"satisfied", r.satisfied},
             {"equality", r.equality}};
    if (r.lambda) {
        j["lambda"] = *r.lambda;
        j["lambda_residual"] = r.lambda_residual;
    }
}

inline void from_json(const json& j, ClassicalRelationReport& r) {
    r = ClassicalRelationReport{};
    j.at("moments").get_to(r.moments);
    j.at("lhs").get_to(r.lhs);
    j.at("rhs").get_to(r.rhs);
    j.at("satisfied").get_to(r.satisfied);
    j.at("equality").get_to(r.equality);
    if (j.contains("lambda")) {
        r.lambda = j.at("lambda").get<double>();
        j.at("lambda_residual").get_to(r.lambda_residual);
    }
}

// ---- grid / recipe echoes ----------------------------------------------------

inline json topology_to_json(const GridTopology& t) {
    json j{{"n_points", t.n_points()}};
    if (t.kind() == GridKind::Circle) {
        j["kind"] = "circle";
    } else {
        j["kind"] = "line";
        j["x_min"] = t.x_min();
        j["x_max"] = t.x_max();
    }
    return j;
}

inline json recipe_to_json(const StateRecipe& r) {
    json j{{"family", r.family_name()}, {"label", r.label()}};
    json params = json::object();
    for (const auto& [k, v] : r.parameters()) params[k] = v;
    j["parameters"] = params;
    return j;
}

// ---- run records ---------------------------------------------------------

/// Envelope around one CLI invocation: what ran, with which configuration,
/// and everything it produced. parse(emit(r)) == r.
struct RunRecord {
    std::string artifact = kProjectName;
    std::string version = kVersion;
    std::string command;
    std::optional<std::string> timestamp;  // absent under --deterministic
    Config config;
    json input = json::object();
    json results = json::object();

    bool operator==(const RunRecord& o) const {
        json a, b;
        to_json_impl(a, *this);
        to_json_impl(b, o);
        return a == b;
    }

    static void to_json_impl(json& j, const RunRecord& r) {
        j = json{{"artifact", r.artifact},
                 {"version", r.version},
                 {"command", r.command},
                 {"config", r.config},
                 {"input", r.input},
                 {"results", r.results}};
        if (r.timestamp) j["timestamp"] = *r.timestamp;
    }
};

inline void to_json(json& j, const RunRecord& r) { RunRecord::to_json_impl(j, r); }

inline void from_json(const json& j, RunRecord& r) {
    r = RunRecord{};
    j.at("artifact").get_to(r.artifact);
    j.at("version").get_to(r.version);
    j.at("command").get_to(r.command);
    j.at("config").get_to(r.config);
    r.input = j.at("input");
    r.results = j.at("results");
    if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
}

inline std::string emit_record(const RunRecord& r) {
    json j = r;
    return j.dump(2) + "\n";
}

inline RunRecord parse_record(const std::string& text) {
    try {
        return json::parse(text).get<RunRecord>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("run record: ") + e.what());
    }
}

// ---- csv + human renderings ---------------------------------------------

/// Sweep tables: one flat JSON object per row -> CSV with the union of keys
/// as columns (sorted for stable output).
inline std::string render_csv(const json& rows) {
    if (!rows.is_array()) throw StructuralError("render_csv: expected an array of rows");
    std::set<std::string> columns;
    for (const auto& row : rows)
        for (auto it = row.begin(); it != row.end(); ++it) columns.insert(it.key());
    std::ostringstream out;
    bool first = true;
    for (const auto& c : columns) {
        if (!first) out << ",";
        out << c;
        first = false;
    }
    out << "\n";
    for (const auto& row : rows) {
        first = true;
        for (const auto& c : columns) {
            if (!first) out << ",";
            first = false;
            if (!row.contains(c)) continue;
            const auto& v = row.at(c);
            if (v.is_string()) out << v.get<std::string>();
            else out << v.dump();
        }
        out << "\n";
    }
    return out.str();
}

namespace detail {

inline void render_human_value(std::ostringstream& out, const json& v, int indent) {
    const std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (v.is_object()) {
        out << "\n";
        for (auto it = v.begin(); it != v.end(); ++it) {
            out << pad << "  " << it.key() << ": ";
            render_human_value(out, it.value(), indent + 1);
        }
    } else if (v.is_array()) {
        out << v.dump() << "\n";
    } else if (v.is_string()) {
        out << v.get<std::string>() << "\n";
    } else {
        out << v.dump() << "\n";
    }
}

}  // namespace detail

inline std::string render_human(const RunRecord& r) {
    json j = r;
    std::ostringstream out;
    out << r.artifact << " " << r.version << " — " << r.command << "\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "artifact" || it.key() == "version" || it.key() == "command") continue;
        out << it.key() << ": ";
        detail::render_human_value(out, it.value(), 0);
    }
    return out.str();
}

}  // namespace uqr
