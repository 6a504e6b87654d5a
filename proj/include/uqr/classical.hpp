#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uqr/errors.hpp"

namespace uqr {

/**
 * Paired observations of two classical statistical variables, optionally
 * weighted. Weights must already be normalized (nonnegative, summing to 1);
 * unweighted sets are treated as uniform. Moments are population moments —
 * expectations under the empirical distribution — not Bessel-corrected
 * estimators.
 */
struct SampleSet {
    SampleSet(std::vector<std::pair<double, double>> pairs_,
              std::optional<std::vector<double>> weights_ = std::nullopt)
        : pairs(std::move(pairs_)), weights(std::move(weights_)) {
        if (pairs.size() < 2) throw StructuralError("SampleSet: need at least 2 observations");
        if (weights) {
            if (weights->size() != pairs.size())
                throw StructuralError("SampleSet: weight count does not match observations");
            double sum = 0.0;
            for (double w : *weights) {
                if (!(w >= 0.0)) throw StructuralError("SampleSet: weights must be nonnegative");
                sum += w;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw StructuralError("SampleSet: weights must sum to 1 (got " +
                                      std::to_string(sum) + ")");
        }
    }

    double weight(size_t i) const {
        return weights ? (*weights)[i] : 1.0 / static_cast<double>(pairs.size());
    }

    std::vector<std::pair<double, double>> pairs;
    std::optional<std::vector<double>> weights;
};

struct ClassicalMoments {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double delta_a = 0.0;
    double delta_b = 0.0;
    double sigma_ab = 0.0;
};

inline ClassicalMoments classical_moments(const SampleSet& s) {
    ClassicalMoments m;
    for (size_t i = 0; i < s.pairs.size(); ++i) {
        m.mean_a += s.weight(i) * s.pairs[i].first;
        m.mean_b += s.weight(i) * s.pairs[i].second;
    }
    double va = 0.0, vb = 0.0, cov = 0.0;
    for (size_t i = 0; i < s.pairs.size(); ++i) {
        const double da = s.pairs[i].first - m.mean_a;
        const double db = s.pairs[i].second - m.mean_b;
        va += s.weight(i) * da * da;
        vb += s.weight(i) * db * db;
        cov += s.weight(i) * da * db;
    }
    m.delta_a = std::sqrt(std::max(0.0, va));
    m.delta_b = std::sqrt(std::max(0.0, vb));
    m.sigma_ab = cov;
    return m;
}

/**
 * da * db >= |sigma_ab|, with the equality certificate: when the relation
 * is tight, the centered variables are linearly dependent and the least-
 * squares coefficient lambda with abar + lambda * bbar = 0 is recovered and
 * verified by its residual.
 */
struct ClassicalRelationReport {
    ClassicalMoments moments;
    double lhs = 0.0;  // da * db
    double rhs = 0.0;  // |sigma_ab|
    bool satisfied = true;
    bool equality = false;
    std::optional<double> lambda;
    double lambda_residual = 0.0;
};

inline ClassicalRelationReport classical_relation(const SampleSet& s, double equality_tol = 1e-10) {
    ClassicalRelationReport r;
    r.moments = classical_moments(s);
    r.lhs = r.moments.delta_a * r.moments.delta_b;
    r.rhs = std::abs(r.moments.sigma_ab);
    const double scale = std::max({r.lhs, r.rhs, 1e-300});
    r.satisfied = r.lhs >= r.rhs - 1e-12 * scale;
    r.equality = std::abs(r.lhs - r.rhs) <= equality_tol * scale;
    if (r.equality) {
        const double vb = r.moments.delta_b * r.moments.delta_b;
        const double va = r.moments.delta_a * r.moments.delta_a;
        if (vb > 1e-300) {
            const double lambda = -r.moments.sigma_ab / vb;
            double resid2 = va + lambda * lambda * vb + 2.0 * lambda * r.moments.sigma_ab;
            r.lambda = lambda;
            r.lambda_residual = std::sqrt(std::max(0.0, resid2));
        } else if (va <= 1e-300) {
            r.lambda = 0.0;  // both variables constant; any lambda works
            r.lambda_residual = 0.0;
        }
        // vb = 0 with va > 0: equality holds (0 >= 0) but no finite lambda
        // maps abar onto bbar; lambda stays unset.
    }
    return r;
}

/// Grid scan of <(abar + lambda bbar)^2> plus the discriminant condition
/// 4 sigma_ab^2 - 4 da^2 db^2 <= 0.
struct ClassicalQuadraticReport {
    double worst_margin = 0.0;
    double discriminant = 0.0;
};

inline ClassicalQuadraticReport quadratic_discriminant_check(const SampleSet& s,
                                                             const std::vector<double>& lambda_grid) {
    const ClassicalMoments m = classical_moments(s);
    const double va = m.delta_a * m.delta_a;
    const double vb = m.delta_b * m.delta_b;
    ClassicalQuadraticReport out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (double lambda : lambda_grid) {
        double q = 0.0;
        for (size_t i = 0; i < s.pairs.size(); ++i) {
            const double da = s.pairs[i].first - m.mean_a;
            const double db = s.pairs[i].second - m.mean_b;
            const double x = da + lambda * db;
            q += s.weight(i) * x * x;
        }
        out.worst_margin = std::min(out.worst_margin, q);
    }
    out.discriminant = 4.0 * m.sigma_ab * m.sigma_ab - 4.0 * va * vb;
    return out;
}

/**
 * CSV reader for sample data: two or three numeric columns a,b[,weight],
 * comma- or whitespace-separated, optional header line. Malformed rows are
 * collected and reported together by line number.
 */
inline SampleSet load_samples_csv(std::istream& in) {
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> weights;
    bool any_weight = false;
    std::vector<int> bad_lines;
    std::string line;
    int line_no = 0;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++line_no;
        std::string cleaned = line;
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream row(cleaned);
        std::vector<std::string> fields;
        std::string tok;
        while (row >> tok) fields.push_back(tok);
        if (fields.empty()) continue;

        std::vector<double> values;
        bool numeric = true;
        for (const auto& f : fields) {
            try {
                size_t used = 0;
                values.push_back(std::stod(f, &used));
                if (used != f.size()) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
            if (!numeric) break;
        }
        if (!numeric) {
            if (first_content_line) {  // header
                first_content_line = false;
                continue;
            }
            bad_lines.push_back(line_no);
            continue;
        }
        first_content_line = false;
        if (values.size() != 2 && values.size() != 3) {
            bad_lines.push_back(line_no);
            continue;
        }
        pairs.emplace_back(values[0], values[1]);
        if (values.size() == 3) {
            weights.push_back(values[2]);
            any_weight = true;
        } else {
            weights.push_back(-1.0);  // placeholder; mixing is an error below
        }
    }

    if (!bad_lines.empty()) {
        std::string msg = "malformed sample rows at line(s):";
        for (int l : bad_lines) msg += " " + std::to_string(l);
        throw ParseError(msg);
    }
    if (pairs.size() < 2) throw ParseError("need at least 2 sample rows");
    if (any_weight) {
        for (double w : weights)
            if (w < 0.0) throw ParseError("either every row carries a weight or none does");
        return SampleSet(std::move(pairs), std::move(weights));
    }
    return SampleSet(std::move(pairs));
}

}  // namespace uqr
