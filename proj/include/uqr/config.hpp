#pragma once

#include <string>

#include "uqr/errors.hpp"
#include "uqr/oracle.hpp"
#include "uqr/quantum_stats.hpp"
#include "uqr/relations.hpp"

namespace uqr {

/**
 * Runtime configuration: hbar, default grid sizes, and every tolerance used
 * by the diagnostics. Loaded from JSON, overridable per flag, and echoed
 * verbatim into each emitted record so runs are reproducible.
 */
struct Config {
    double hbar = 1.0;
    int circle_n = 8193;         // default circle grid
    int line_n = 8193;           // default line grid
    double norm_tol = kNormTol;
    double herm_tol = 1e-8;
    double boundary_tol_factor = 10.0;
    double divergence_ratio = 0.9;
    int refinements = 4;
    double increment_floor_rel = 1e-10;
    double settle_rel = 1e-3;
    double relation_tol_c = 4.0;
    double relation_tol_abs = 1e-10;
    double truncation_tol = 1e-12;
    int oracle_cap = kOracleDefaultCap;
    std::string output = "json";  // json | csv | human

    void validate() const {
        if (!(hbar > 0)) throw StructuralError("config: hbar must be > 0");
        if (circle_n < 3 || line_n < 3) throw StructuralError("config: grid sizes must be >= 3");
        if (!(norm_tol > 0) || !(herm_tol > 0) || !(boundary_tol_factor > 0) ||
            !(divergence_ratio > 0) || !(relation_tol_c > 0) || !(relation_tol_abs > 0) ||
            !(truncation_tol > 0) || !(increment_floor_rel > 0) || !(settle_rel > 0))
            throw StructuralError("config: tolerances must be > 0");
        if (refinements < 2) throw StructuralError("config: refinements must be >= 2");
        if (oracle_cap < 3) throw StructuralError("config: oracle cap must be >= 3");
        if (output != "json" && output != "csv" && output != "human")
            throw StructuralError("config: output must be json, csv or human");
    }

    StatOptions stat_options() const {
        StatOptions so;
        so.domain.refinements = refinements;
        so.domain.divergence_ratio = divergence_ratio;
        so.domain.boundary_tol_factor = boundary_tol_factor;
        so.domain.increment_floor_rel = increment_floor_rel;
        so.domain.settle_rel = settle_rel;
        so.norm_tol = norm_tol;
        so.herm_tol = herm_tol;
        return so;
    }

    RelationOptions relation_options() const {
        RelationOptions ro;
        ro.stats = stat_options();
        ro.tol_c = relation_tol_c;
        ro.tol_abs = relation_tol_abs;
        ro.truncation_tol = truncation_tol;
        return ro;
    }
};

}  // namespace uqr
