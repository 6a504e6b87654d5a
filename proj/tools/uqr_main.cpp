// uqr — command-line front end.
//
// Subcommands:
//   analyze       evaluate the uncertainty bounds for one state and pair
//   domain-check  run the operator-domain diagnostic for one state
//   sweep         evaluate a recipe family over parameter ranges
//   classical     classical two-variable uncertainty relation from CSV
//   version       print name and version
//
// Exit codes: 0 every applicable bound satisfied; 1 usage/parse/config error;
// 2 an applicable bound is violated beyond tolerance; 3 no bound applicable
// (domain failure only).

#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "uqr/classical.hpp"
#include "uqr/config.hpp"
#include "uqr/expression.hpp"
#include "uqr/oracle.hpp"
#include "uqr/report.hpp"
#include "uqr/states.hpp"
#include "uqr/version.hpp"

using namespace uqr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolated = 2;
constexpr int kExitInapplicable = 3;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& text, const std::string& what) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError(what + ": expected a number, got '" + text + "'");
    }
}

// ---- state spec mini-language: family:key=value,key=value ----------------

struct StateSpec {
    StateRecipe recipe;
    std::string text;
};

StateSpec parse_state_spec(const std::string& text, double hbar) {
    const auto colon = text.find(':');
    const std::string family = text.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        for (const auto& item : split(text.substr(colon + 1), ',')) {
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw ParseError("state spec: expected key=value, got '" + item + "'");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    auto take = [&](const std::string& key, std::optional<double> fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (!fallback) throw ParseError("state spec: missing required key '" + key + "'");
            return *fallback;
        }
        const double v = parse_number(it->second, "state spec key '" + key + "'");
        kv.erase(it);
        return v;
    };
    auto finish = [&](StateRecipe r) {
        if (!kv.empty())
            throw ParseError("state spec: unknown key '" + kv.begin()->first + "' for family '" +
                             family + "'");
        return StateSpec{std::move(r), text};
    };

    if (family == "lz-eigenstate")
        return finish(StateRecipe::lz_eigenstate(static_cast<int>(take("m", 1.0))));
    if (family == "gaussian") {
        const double sigma = take("sigma", 1.0);
        const double x0 = take("x0", 0.0);
        const double p0 = take("p0", 0.0);
        const double chirp = take("chirp", 0.0);
        return finish(StateRecipe::gaussian(x0, p0, sigma, chirp, hbar));
    }
    if (family == "cusp") return finish(StateRecipe::cusp_state());
    if (family == "slow-decay") return finish(StateRecipe::slow_decay(take("power", 0.25)));
    if (family == "circle-packet") {
        auto it = kv.find("coeffs");
        if (it == kv.end()) throw ParseError("state spec: circle-packet needs coeffs=v1/v2/...");
        std::vector<cplx> coeffs;
        for (const auto& tok : split(it->second, '/'))
            coeffs.emplace_back(parse_number(tok, "circle-packet coefficient"), 0.0);
        kv.erase(it);
        const int m_min = static_cast<int>(take("mmin", 0.0));
        const double alpha = take("alpha", 0.0);
        return finish(StateRecipe::circle_wave_packet(std::move(coeffs), m_min, alpha));
    }
    if (family == "custom") {
        if (auto it = kv.find("expr"); it != kv.end()) {
            const std::string expr_text = it->second;
            kv.erase(it);
            GridKind kind = GridKind::Line;
            if (auto k = kv.find("kind"); k != kv.end()) {
                if (k->second == "circle") kind = GridKind::Circle;
                else if (k->second != "line")
                    throw ParseError("state spec: kind must be line or circle");
                kv.erase(k);
            }
            return finish(StateRecipe::custom_expression(expr_text, kind));
        }
        if (auto it = kv.find("file"); it != kv.end()) {
            const std::string path = it->second;
            kv.erase(it);
            std::ifstream in(path);
            if (!in) throw ParseError("state spec: cannot open '" + path + "'");
            std::vector<double> xs;
            std::vector<cplx> amps;
            std::string line;
            int line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                std::istringstream row(line);
                double x, re, im = 0.0;
                if (!(row >> x >> re)) {
                    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                    throw ParseError("state file: bad row at line " + std::to_string(line_no));
                }
                row >> im;
                xs.push_back(x);
                amps.emplace_back(re, im);
            }
            if (xs.size() < 3) throw ParseError("state file: need at least 3 samples");
            const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
            for (size_t i = 0; i < xs.size(); ++i)
                if (std::abs(xs[i] - (xs.front() + static_cast<double>(i) * h)) > 1e-9 * std::max(1.0, std::abs(h)))
                    throw ParseError("state file: grid values must be uniformly spaced");
            bool circle = false;
            if (auto k = kv.find("kind"); k != kv.end()) {
                if (k->second == "circle") circle = true;
                else if (k->second != "line")
                    throw ParseError("state spec: kind must be line or circle");
                kv.erase(k);
            }
            if (circle && (std::abs(xs.front()) > 1e-9 || std::abs(xs.back() - kTwoPi) > 1e-9))
                throw ParseError("state file: circle samples must span exactly [0, 2 pi]");
            const auto topo = circle
                                  ? GridTopology::circle(static_cast<int>(xs.size()))
                                  : GridTopology::line(xs.front(), xs.back(),
                                                       static_cast<int>(xs.size()));
            return finish(StateRecipe::custom_samples(normalize(WaveFunction(topo, amps))));
        }
        throw ParseError("state spec: custom needs expr=... or file=...");
    }
    throw ParseError("state spec: unknown family '" + family + "'");
}

// ---- operator tokens -------------------------------------------------------

OperatorSpec parse_operator(const std::string& token, double hbar) {
    if (token == "x" || token == "position") return OperatorSpec::position(hbar);
    if (token == "p" || token == "momentum") return OperatorSpec::momentum(hbar);
    if (token == "phi" || token == "angle") return OperatorSpec::angle(hbar);
    if (token == "Lz" || token == "lz" || token == "angular-momentum")
        return OperatorSpec::angular_momentum(hbar);
    if (token.rfind("f=", 0) == 0) {
        const std::string text = token.substr(2);
        auto ast = expr::parse(text);
        return OperatorSpec::multiply_by(
            [ast](double coord) { return expr::evaluate(*ast, coord).real(); }, "f=" + text, hbar);
    }
    throw ParseError("operator: unknown token '" + token +
                     "' (use x, p, phi, Lz, or f=<expression>)");
}

// ---- shared command plumbing ----------------------------------------------

struct CommonFlags {
    std::string config_path;
    std::string output;
    std::string out_path;
    bool deterministic = false;
    double hbar = -1.0;      // <0: keep config value
    int grid_n = -1;         // <0: keep config default
    double x_min = 0.0, x_max = 0.0;
    bool has_box = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool with_grid = true) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--output", f.output, "json (canonical) | csv (sweeps) | human");
    cmd->add_option("--out", f.out_path, "write the report to FILE instead of stdout");
    cmd->add_flag("--deterministic", f.deterministic, "omit timestamps (byte-stable output)");
    cmd->add_option("--hbar", f.hbar, "override hbar");
    if (with_grid) {
        cmd->add_option("--grid-n", f.grid_n, "override the sample count");
        auto* lo = cmd->add_option("--x-min", f.x_min, "line box lower edge");
        auto* hi = cmd->add_option("--x-max", f.x_max, "line box upper edge");
        lo->needs(hi);
        hi->needs(lo);
    }
}

Config load_config(const CommonFlags& f) {
    Config cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw ParseError("config: cannot open '" + f.config_path + "'");
        try {
            cfg = json::parse(in).get<Config>();
        } catch (const json::exception& e) {
            throw ParseError(std::string("config: ") + e.what());
        }
    }
    if (f.hbar > 0) cfg.hbar = f.hbar;
    if (!f.output.empty()) cfg.output = f.output;
    cfg.validate();
    return cfg;
}

GridTopology pick_topology(const StateRecipe& recipe, const Config& cfg, const CommonFlags& f,
                           bool widen) {
    const int n = f.grid_n > 0 ? f.grid_n
                               : (recipe.grid_kind() == GridKind::Circle ? cfg.circle_n : cfg.line_n);
    if (f.has_box) {
        if (recipe.grid_kind() != GridKind::Line)
            throw ParseError("--x-min/--x-max apply to line states only");
        return GridTopology::line(f.x_min, f.x_max, n);
    }
    GridTopology topo = recipe.default_topology(n);
    if (widen && topo.kind() == GridKind::Line)
        topo = widen_until_decayed(recipe, topo, cfg.truncation_tol);
    return topo;
}

void write_output(const std::string& text, const CommonFlags& f) {
    if (f.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(f.out_path);
    if (!out) throw StructuralError("cannot write '" + f.out_path + "'");
    out << text;
}

RunRecord base_record(const std::string& command, const Config& cfg, const CommonFlags& f) {
    RunRecord r;
    r.command = command;
    r.config = cfg;
    if (!f.deterministic) r.timestamp = utc_timestamp();
    return r;
}

void emit_record_as(const RunRecord& rec, const Config& cfg, const CommonFlags& f) {
    if (cfg.output == "json") {
        write_output(emit_record(rec), f);
    } else if (cfg.output == "human") {
        write_output(render_human(rec), f);
    } else {
        throw ParseError("csv output is only available for 'sweep'");
    }
}

int exit_code_for(const RelationReport& rep) {
    if (!rep.any_applicable()) return kExitInapplicable;
    return rep.all_applicable_satisfied() ? kExitOk : kExitViolated;
}

// Evaluate one state against one pair; shared by analyze and sweep.
// Returns the relation report, or the domain evidence when gated off.
struct Evaluation {
    std::optional<RelationReport> relation;
    std::optional<DomainReport> blocked_by;
    json extras = json::object();
};

Evaluation evaluate_pair(const OperatorSpec& A, const OperatorSpec& B,
                         const ResampleableState& state, const Config& cfg) {
    Evaluation out;
    try {
        RelationReport rep = evaluate_commutator_form(A, B, state, cfg.relation_options());
        // Pair-specific boundary-term companions.
        if (A.kind() == OperatorKind::Angle && B.kind() == OperatorKind::AngularMomentum) {
            out.extras["phi_lz_closed_form_bound"] = phi_lz_bound(state, cfg.hbar, cfg.relation_options());
            out.extras["boundary_im_closed_form"] = phi_lz_boundary_im(state, cfg.hbar);
        }
        if (A.kind() == OperatorKind::Position && B.kind() == OperatorKind::Momentum) {
            const auto term = xp_boundary_term(state, cfg.hbar, cfg.relation_options());
            out.extras["xp_boundary_term"] = json{{"value", term.value},
                                                  {"edge_density", term.edge_density},
                                                  {"truncation_suspect", term.truncation_suspect}};
        }
        out.relation = std::move(rep);
    } catch (const InapplicableError& e) {
        out.blocked_by = e.report;
    }
    return out;
}

// ---- subcommands -----------------------------------------------------------

int run_analyze(const std::string& state_text, const std::string& pair_text,
                const CommonFlags& flags) {
    const Config cfg = load_config(flags);
    const auto tokens = split(pair_text, ',');
    if (tokens.size() != 2) throw ParseError("--pair expects two comma-separated operators");
    const OperatorSpec A = parse_operator(tokens[0], cfg.hbar);
    const OperatorSpec B = parse_operator(tokens[1], cfg.hbar);
    const StateSpec spec = parse_state_spec(state_text, cfg.hbar);
    const GridTopology topo = pick_topology(spec.recipe, cfg, flags, /*widen=*/true);
    const ResampleableState state = spec.recipe.resampleable(topo);

    RunRecord rec = base_record("analyze", cfg, flags);
    rec.input = json{{"state", recipe_to_json(spec.recipe)},
                     {"pair", json::array({A.label(), B.label()})},
                     {"grid", topology_to_json(topo)}};

    const Evaluation ev = evaluate_pair(A, B, state, cfg);
    int code = kExitInapplicable;
    if (ev.relation) {
        rec.results["relation"] = *ev.relation;
        code = exit_code_for(*ev.relation);
    } else {
        rec.results["inapplicable"] = *ev.blocked_by;
    }
    if (!ev.extras.empty()) rec.results["extras"] = ev.extras;
    emit_record_as(rec, cfg, flags);
    return code;
}

int run_domain_check(const std::string& state_text, const std::string& op_text,
                     const CommonFlags& flags) {
    const Config cfg = load_config(flags);
    const OperatorSpec A = parse_operator(op_text, cfg.hbar);
    const StateSpec spec = parse_state_spec(state_text, cfg.hbar);
    const GridTopology topo = pick_topology(spec.recipe, cfg, flags, /*widen=*/false);
    const ResampleableState state = spec.recipe.resampleable(topo);

    const DomainReport rep = domain_check(A, state, cfg.stat_options().domain);
    RunRecord rec = base_record("domain-check", cfg, flags);
    rec.input = json{{"state", recipe_to_json(spec.recipe)},
                     {"operator", A.label()},
                     {"grid", topology_to_json(topo)}};
    rec.results["domain"] = rep;
    emit_record_as(rec, cfg, flags);
    return rep.yes() ? kExitOk : kExitInapplicable;
}

std::vector<double> parse_range(const std::string& text) {
    // Either v1/v2/v3 or start:stop:step (stop inclusive, with slack).
    if (text.find(':') == std::string::npos) {
        std::vector<double> vals;
        for (const auto& tok : split(text, '/')) vals.push_back(parse_number(tok, "range value"));
        return vals;
    }
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ParseError("range: expected start:stop:step or v1/v2/...");
    const double start = parse_number(parts[0], "range start");
    const double stop = parse_number(parts[1], "range stop");
    const double step = parse_number(parts[2], "range step");
    if (step == 0.0) throw ParseError("range: step must be nonzero");
    std::vector<double> vals;
    const double dir = step > 0 ? 1.0 : -1.0;
    for (double v = start; dir * (v - stop) <= 1e-12 * std::max(1.0, std::abs(stop)); v += step)
        vals.push_back(v);
    if (vals.empty()) throw ParseError("range: empty sweep");
    return vals;
}

int run_sweep(const std::string& state_text, const std::vector<std::string>& range_texts,
              const std::string& pair_text, const CommonFlags& flags) {
    const Config cfg = load_config(flags);
    const auto tokens = split(pair_text, ',');
    if (tokens.size() != 2) throw ParseError("--pair expects two comma-separated operators");
    const OperatorSpec A = parse_operator(tokens[0], cfg.hbar);
    const OperatorSpec B = parse_operator(tokens[1], cfg.hbar);
    const StateSpec base = parse_state_spec(state_text, cfg.hbar);

    std::vector<SweepAxis> axes;
    for (const auto& rt : range_texts) {
        const auto eq = rt.find('=');
        if (eq == std::string::npos) throw ParseError("--range expects key=start:stop:step");
        axes.push_back(SweepAxis{rt.substr(0, eq), parse_range(rt.substr(eq + 1))});
    }
    const auto recipes = sweep(base.recipe, axes);

    // Evaluations are pure, so recipes run on a small thread pool; rows are
    // written into pre-indexed slots and assembled in order afterwards, which
    // keeps the output byte-stable regardless of scheduling.
    struct Row {
        json full;
        json flat;
        bool applicable = false;
        bool violated = false;
        std::exception_ptr error;
    };
    std::vector<Row> computed(recipes.size());
    std::atomic<size_t> cursor{0};
    auto work = [&] {
        while (true) {
            const size_t i = cursor.fetch_add(1);
            if (i >= recipes.size()) break;
            Row& slot = computed[i];
            try {
                const StateRecipe& recipe = recipes[i];
                const GridTopology topo = pick_topology(recipe, cfg, flags, /*widen=*/true);
                const ResampleableState state = recipe.resampleable(topo);
                const Evaluation ev = evaluate_pair(A, B, state, cfg);

                json row{{"state", recipe_to_json(recipe)}};
                json flat{{"state", recipe.label()}};
                for (const auto& [k, v] : recipe.parameters()) flat[k] = v;
                if (ev.relation) {
                    const RelationReport& r = *ev.relation;
                    slot.applicable = true;
                    slot.violated = !r.all_applicable_satisfied();
                    row["relation"] = r;
                    flat["mean_a"] = r.stats.mean_a;
                    flat["mean_b"] = r.stats.mean_b;
                    flat["delta_a"] = r.stats.delta_a;
                    flat["delta_b"] = r.stats.delta_b;
                    flat["covariance"] = r.stats.covariance;
                    flat["imag_cross"] = r.stats.imag_cross;
                    flat["lhs"] = r.lhs;
                    flat["modified_bound"] = r.modified.value;
                    flat["modified_margin"] = r.modified.margin;
                    flat["modified_satisfied"] = r.modified.satisfied;
                    if (r.standard && r.standard->applies) {
                        flat["standard_bound"] = r.standard->value;
                        flat["standard_satisfied"] = r.standard->satisfied;
                    } else {
                        flat["standard_bound"] = "inapplicable";
                    }
                } else {
                    row["inapplicable"] = *ev.blocked_by;
                    flat["inapplicable"] = to_string(ev.blocked_by->reason);
                }
                if (!ev.extras.empty()) {
                    row["extras"] = ev.extras;
                    if (ev.extras.contains("phi_lz_closed_form_bound"))
                        flat["closed_form_bound"] = ev.extras["phi_lz_closed_form_bound"];
                }
                slot.full = std::move(row);
                slot.flat = std::move(flat);
            } catch (...) {
                slot.error = std::current_exception();
            }
        }
    };
    const size_t n_workers =
        std::max<size_t>(1, std::min<size_t>(std::thread::hardware_concurrency(), recipes.size()));
    std::vector<std::thread> pool;
    for (size_t t = 1; t < n_workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    json rows = json::array();
    json flat_rows = json::array();
    bool any_violation = false;
    bool any_applicable = false;
    for (Row& r : computed) {
        if (r.error) std::rethrow_exception(r.error);
        any_applicable = any_applicable || r.applicable;
        any_violation = any_violation || r.violated;
        rows.push_back(std::move(r.full));
        flat_rows.push_back(std::move(r.flat));
    }

    RunRecord rec = base_record("sweep", cfg, flags);
    rec.input = json{{"state", recipe_to_json(base.recipe)},
                     {"pair", json::array({A.label(), B.label()})},
                     {"axes", [&] {
                          json a = json::array();
                          for (const auto& ax : axes)
                              a.push_back(json{{"key", ax.key}, {"values", ax.values}});
                          return a;
                      }()}};
    rec.results["rows"] = rows;

    if (cfg.output == "csv") {
        write_output(render_csv(flat_rows), flags);
    } else {
        emit_record_as(rec, cfg, flags);
    }
    if (!any_applicable) return kExitInapplicable;
    return any_violation ? kExitViolated : kExitOk;
}

int run_classical(const std::string& csv_path, const CommonFlags& flags) {
    const Config cfg = load_config(flags);
    std::ifstream in(csv_path);
    if (!in) throw ParseError("classical: cannot open '" + csv_path + "'");
    const SampleSet samples = load_samples_csv(in);
    const auto rep = classical_relation(samples);
    const auto quad = quadratic_discriminant_check(
        samples, {-10.0, -3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0, 10.0});

    RunRecord rec = base_record("classical", cfg, flags);
    rec.input = json{{"csv", csv_path}, {"rows", samples.pairs.size()}};
    rec.results["classical"] = rep;
    rec.results["quadratic"] =
        json{{"worst_margin", quad.worst_margin}, {"discriminant", quad.discriminant}};
    emit_record_as(rec, cfg, flags);
    return rep.satisfied ? kExitOk : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"domain-aware uncertainty relations on 1-D grids"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "evaluate uncertainty bounds for a state/pair");
    std::string an_state, an_pair;
    CommonFlags an_flags;
    analyze->add_option("--state", an_state, "state spec, e.g. lz-eigenstate:m=1")->required();
    analyze->add_option("--pair", an_pair, "operator pair, e.g. phi,Lz or x,p")->required();
    add_common_flags(analyze, an_flags);

    // domain-check
    auto* dc = app.add_subcommand("domain-check", "operator-domain diagnostic for a state");
    std::string dc_state, dc_op;
    CommonFlags dc_flags;
    dc->add_option("--state", dc_state, "state spec")->required();
    dc->add_option("--operator", dc_op, "operator token (x, p, phi, Lz, f=<expr>)")->required();
    add_common_flags(dc, dc_flags);

    // sweep
    auto* sw = app.add_subcommand("sweep", "evaluate a family over parameter ranges");
    std::string sw_state, sw_pair;
    std::vector<std::string> sw_ranges;
    CommonFlags sw_flags;
    sw->add_option("--state", sw_state, "base state spec")->required();
    sw->add_option("--range", sw_ranges, "key=start:stop:step or key=v1/v2/... (repeatable)")
        ->required();
    sw->add_option("--pair", sw_pair, "operator pair")->required();
    add_common_flags(sw, sw_flags);

    // classical
    auto* cl = app.add_subcommand("classical", "classical relation from a CSV of samples");
    std::string cl_csv;
    CommonFlags cl_flags;
    cl->add_option("--csv", cl_csv, "two or three columns: a,b[,weight]")->required();
    add_common_flags(cl, cl_flags, /*with_grid=*/false);

    // version
    auto* ver = app.add_subcommand("version", "print version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ver->parsed()) {
            std::cout << kProjectName << " " << kVersion << "\n";
            return kExitOk;
        }
        if (analyze->parsed()) return run_analyze(an_state, an_pair, an_flags);
        if (dc->parsed()) return run_domain_check(dc_state, dc_op, dc_flags);
        if (sw->parsed()) return run_sweep(sw_state, sw_ranges, sw_pair, sw_flags);
        if (cl->parsed()) return run_classical(cl_csv, cl_flags);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
