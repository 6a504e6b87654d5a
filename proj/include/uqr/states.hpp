#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "uqr/errors.hpp"
#include "uqr/expression.hpp"
#include "uqr/grid.hpp"

namespace uqr {

// ---------------------------------------------------------------------------
// Analytic state families. Every family knows how to sample itself in closed
// form on any grid of the right kind, which is what makes grid-refinement
// diagnostics exact instead of interpolation-limited.
// ---------------------------------------------------------------------------

/// psi_m(phi) = exp(i m phi) / sqrt(2 pi)
struct LzEigenstateParams {
    int m = 1;
};

/// Gaussian packet with optional linear chirp:
///   psi(x) ~ exp(i p0 (x - x0) / hbar) * exp(-(1 - i c) (x - x0)^2 / (2 sigma^2))
/// Moments (continuum): <x> = x0, <p> = p0, dx = sigma/sqrt(2),
/// dp = hbar sqrt(1 + c^2) / (sigma sqrt(2)), sigma_xp = c hbar / 2,
/// Im<xbar psi, pbar psi> = hbar / 2.
struct GaussianParams {
    double x0 = 0.0;
    double p0 = 0.0;
    double sigma = 1.0;
    double chirp = 0.0;
};

/// sqrt(2|x - x0|) exp(-|x - x0|), normalized in the continuum. The center
/// x0 is re-chosen per grid as the midpoint of the two central cells so that
/// no node ever lands on the cusp (the derivative is undefined there); the
/// half-step offset holds at every refinement level because it is applied
/// at sampling time.
struct CuspStateParams {};

/// Finite superposition of angular-momentum modes. boundary_phase = alpha
/// multiplies the packet by exp(i alpha phi / 2 pi), so psi(2 pi) =
/// exp(i alpha) psi(0): endpoint magnitudes always match, strict
/// periodicity only when alpha = 0 mod 2 pi.
struct CircleWavePacketParams {
    std::vector<cplx> coefficients;  // modes m_min, m_min+1, ...
    int m_min = 0;
    double boundary_phase = 0.0;
};

/// psi(x) ~ (1 + x^2)^(-power), normalized on its (truncated) box.
struct SlowDecayParams {
    double power = 0.25;
};

/// User expression in x/phi, evaluated per sample then normalized.
struct CustomExprParams {
    std::string text;
    GridKind kind = GridKind::Line;
};

/// State known only via samples (e.g. loaded from a file). Resampling uses
/// local cubic interpolation of the original samples.
struct CustomSamplesParams {
    std::shared_ptr<const WaveFunction> source;
};

class StateRecipe {
public:
    using Family = std::variant<LzEigenstateParams, GaussianParams, CuspStateParams,
                                CircleWavePacketParams, SlowDecayParams, CustomExprParams,
                                CustomSamplesParams>;

    static StateRecipe lz_eigenstate(int m) { return StateRecipe(LzEigenstateParams{m}); }

    static StateRecipe gaussian(double x0, double p0, double sigma, double chirp = 0.0,
                                double hbar = 1.0) {
        if (!(sigma > 0.0)) throw StructuralError("gaussian: sigma must be > 0");
        StateRecipe r{GaussianParams{x0, p0, sigma, chirp}};
        r.hbar_ = hbar;
        return r;
    }

    static StateRecipe cusp_state() { return StateRecipe(CuspStateParams{}); }

    static StateRecipe circle_wave_packet(std::vector<cplx> coefficients, int m_min,
                                          double boundary_phase = 0.0) {
        if (coefficients.empty())
            throw StructuralError("circle_wave_packet: need at least one coefficient");
        return StateRecipe(CircleWavePacketParams{std::move(coefficients), m_min, boundary_phase});
    }

    static StateRecipe slow_decay(double power) {
        if (!(power > 0.0)) throw StructuralError("slow_decay: power must be > 0");
        return StateRecipe(SlowDecayParams{power});
    }

    static StateRecipe custom_expression(std::string text, GridKind kind) {
        expr::parse(text);  // validate now, not at first realize
        return StateRecipe(CustomExprParams{std::move(text), kind});
    }

    static StateRecipe custom_samples(WaveFunction source) {
        return StateRecipe(
            CustomSamplesParams{std::make_shared<const WaveFunction>(std::move(source))});
    }

    const Family& family() const { return family_; }
    double hbar() const { return hbar_; }

    GridKind grid_kind() const {
        struct V {
            GridKind operator()(const LzEigenstateParams&) const { return GridKind::Circle; }
            GridKind operator()(const GaussianParams&) const { return GridKind::Line; }
            GridKind operator()(const CuspStateParams&) const { return GridKind::Line; }
            GridKind operator()(const CircleWavePacketParams&) const { return GridKind::Circle; }
            GridKind operator()(const SlowDecayParams&) const { return GridKind::Line; }
            GridKind operator()(const CustomExprParams& p) const { return p.kind; }
            GridKind operator()(const CustomSamplesParams& p) const {
                return p.source->topology.kind();
            }
        };
        return std::visit(V{}, family_);
    }

    std::string family_name() const {
        struct V {
            std::string operator()(const LzEigenstateParams&) const { return "lz-eigenstate"; }
            std::string operator()(const GaussianParams&) const { return "gaussian"; }
            std::string operator()(const CuspStateParams&) const { return "cusp"; }
            std::string operator()(const CircleWavePacketParams&) const { return "circle-packet"; }
            std::string operator()(const SlowDecayParams&) const { return "slow-decay"; }
            std::string operator()(const CustomExprParams&) const { return "custom-expr"; }
            std::string operator()(const CustomSamplesParams&) const { return "custom-samples"; }
        };
        return std::visit(V{}, family_);
    }

    /// Normalized sampling of the family on the given grid.
    WaveFunction realize(const GridTopology& topo) const {
        if (topo.kind() != grid_kind())
            throw StructuralError("realize: state family '" + family_name() +
                                  "' is incompatible with " + topo.describe());
        return normalize(WaveFunction(topo, raw_samples(topo)));
    }

    ResampleableState resampleable(const GridTopology& topo) const {
        StateRecipe self = *this;
        return ResampleableState{realize(topo),
                                 [self](const GridTopology& t) { return self.realize(t); }};
    }

    /// Grid a caller should use when no explicit box was given.
    GridTopology default_topology(int n_points) const {
        struct V {
            int n;
            double hbar;
            GridTopology operator()(const LzEigenstateParams&) const {
                return GridTopology::circle(n);
            }
            GridTopology operator()(const GaussianParams& p) const {
                const double half = 12.0 * p.sigma;
                return GridTopology::line(p.x0 - half, p.x0 + half, n);
            }
            GridTopology operator()(const CuspStateParams&) const {
                return GridTopology::line(-20.0, 20.0, n);
            }
            GridTopology operator()(const CircleWavePacketParams&) const {
                return GridTopology::circle(n);
            }
            GridTopology operator()(const SlowDecayParams&) const {
                return GridTopology::line(-50.0, 50.0, n);
            }
            GridTopology operator()(const CustomExprParams& p) const {
                return p.kind == GridKind::Circle ? GridTopology::circle(n)
                                                  : GridTopology::line(-12.0, 12.0, n);
            }
            GridTopology operator()(const CustomSamplesParams& p) const {
                return p.source->topology;
            }
        };
        return std::visit(V{n_points, hbar_}, family_);
    }

    /// Named numeric parameters, for sweeps and report echoes.
    std::map<std::string, double> parameters() const {
        struct V {
            std::map<std::string, double> operator()(const LzEigenstateParams& p) const {
                return {{"m", static_cast<double>(p.m)}};
            }
            std::map<std::string, double> operator()(const GaussianParams& p) const {
                return {{"x0", p.x0}, {"p0", p.p0}, {"sigma", p.sigma}, {"chirp", p.chirp}};
            }
            std::map<std::string, double> operator()(const CuspStateParams&) const { return {}; }
            std::map<std::string, double> operator()(const CircleWavePacketParams& p) const {
                return {{"m_min", static_cast<double>(p.m_min)}, {"alpha", p.boundary_phase}};
            }
            std::map<std::string, double> operator()(const SlowDecayParams& p) const {
                return {{"power", p.power}};
            }
            std::map<std::string, double> operator()(const CustomExprParams&) const { return {}; }
            std::map<std::string, double> operator()(const CustomSamplesParams&) const { return {}; }
        };
        return std::visit(V{}, family_);
    }

    /// Copy with one named parameter replaced; unknown keys throw.
    StateRecipe with_parameter(const std::string& key, double value) const {
        StateRecipe out = *this;
        bool ok = std::visit(
            [&](auto& p) -> bool { return set_param(p, key, value); }, out.family_);
        if (!ok)
            throw StructuralError("with_parameter: family '" + family_name() +
                                  "' has no parameter '" + key + "'");
        return out;
    }

    std::string label() const {
        std::string out = family_name();
        const auto params = parameters();
        if (!params.empty()) {
            out += ":";
            bool first = true;
            for (const auto& [k, v] : params) {
                if (!first) out += ",";
                first = false;
                out += k + "=" + format_double(v);
            }
        }
        return out;
    }

private:
    explicit StateRecipe(Family family) : family_(std::move(family)) {}

    static bool set_param(LzEigenstateParams& p, const std::string& key, double value) {
        if (key == "m") {
            p.m = static_cast<int>(std::llround(value));
            return true;
        }
        return false;
    }
    static bool set_param(GaussianParams& p, const std::string& key, double value) {
        if (key == "x0") p.x0 = value;
        else if (key == "p0") p.p0 = value;
        else if (key == "sigma") p.sigma = value;
        else if (key == "chirp") p.chirp = value;
        else return false;
        if (!(p.sigma > 0.0)) throw StructuralError("gaussian: sigma must be > 0");
        return true;
    }
    static bool set_param(CuspStateParams&, const std::string&, double) { return false; }
    static bool set_param(CircleWavePacketParams& p, const std::string& key, double value) {
        if (key == "alpha") {
            p.boundary_phase = value;
            return true;
        }
        if (key == "m_min") {
            p.m_min = static_cast<int>(std::llround(value));
            return true;
        }
        return false;
    }
    static bool set_param(SlowDecayParams& p, const std::string& key, double value) {
        if (key == "power") {
            p.power = value;
            if (!(p.power > 0.0)) throw StructuralError("slow_decay: power must be > 0");
            return true;
        }
        return false;
    }
    static bool set_param(CustomExprParams&, const std::string&, double) { return false; }
    static bool set_param(CustomSamplesParams&, const std::string&, double) { return false; }

    static std::string format_double(double v) {
        if (v == std::floor(v) && std::abs(v) < 1e15) {
            return std::to_string(static_cast<long long>(v));
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g", v);
        return buf;
    }

    std::vector<cplx> raw_samples(const GridTopology& topo) const {
        const int n = topo.n_points();
        std::vector<cplx> a(static_cast<size_t>(n));
        struct V {
            const GridTopology& topo;
            std::vector<cplx>& a;
            double hbar;

            void operator()(const LzEigenstateParams& p) const {
                const double c = 1.0 / std::sqrt(kTwoPi);
                for (int k = 0; k < topo.n_points(); ++k) {
                    const double phi = topo.coordinate(k);
                    a[static_cast<size_t>(k)] = c * std::polar(1.0, p.m * phi);
                }
            }

            void operator()(const GaussianParams& p) const {
                const cplx width_term(1.0, -p.chirp);
                const double s2 = 2.0 * p.sigma * p.sigma;
                for (int k = 0; k < topo.n_points(); ++k) {
                    const double u = topo.coordinate(k) - p.x0;
                    const cplx phase(0.0, p.p0 * u / hbar);
                    a[static_cast<size_t>(k)] = std::exp(phase - width_term * (u * u) / s2);
                }
            }

            void operator()(const CuspStateParams&) const {
                const int mid = (topo.n_points() - 1) / 2;
                const double center = topo.coordinate(mid) + 0.5 * topo.step();
                for (int k = 0; k < topo.n_points(); ++k) {
                    const double r = std::abs(topo.coordinate(k) - center);
                    a[static_cast<size_t>(k)] = std::sqrt(2.0 * r) * std::exp(-r);
                }
            }

            void operator()(const CircleWavePacketParams& p) const {
                const double nu = p.boundary_phase / kTwoPi;
                for (int k = 0; k < topo.n_points(); ++k) {
                    const double phi = topo.coordinate(k);
                    cplx sum = 0.0;
                    for (size_t j = 0; j < p.coefficients.size(); ++j) {
                        const double m = static_cast<double>(p.m_min + static_cast<int>(j));
                        sum += p.coefficients[j] * std::polar(1.0, m * phi);
                    }
                    a[static_cast<size_t>(k)] = sum * std::polar(1.0, nu * phi);
                }
            }

            void operator()(const SlowDecayParams& p) const {
                for (int k = 0; k < topo.n_points(); ++k) {
                    const double x = topo.coordinate(k);
                    a[static_cast<size_t>(k)] = std::pow(1.0 + x * x, -p.power);
                }
            }

            void operator()(const CustomExprParams& p) const {
                const auto ast = expr::parse(p.text);
                for (int k = 0; k < topo.n_points(); ++k)
                    a[static_cast<size_t>(k)] = expr::evaluate(*ast, topo.coordinate(k));
            }

            void operator()(const CustomSamplesParams& p) const {
                const WaveFunction& src = *p.source;
                if (topo == src.topology) {
                    a = src.amplitudes;
                    return;
                }
                for (int k = 0; k < topo.n_points(); ++k)
                    a[static_cast<size_t>(k)] =
                        detail::cubic_sample(src.amplitudes, src.topology, topo.coordinate(k));
            }
        };
        std::visit(V{topo, a, hbar_}, family_);
        return a;
    }

    Family family_;
    double hbar_ = 1.0;
};

/// One axis of a parameter sweep.
struct SweepAxis {
    std::string key;
    std::vector<double> values;
};

/// Cartesian product of axis values applied to a base recipe.
inline std::vector<StateRecipe> sweep(const StateRecipe& base, const std::vector<SweepAxis>& axes) {
    for (const auto& axis : axes)
        if (axis.values.empty())
            throw StructuralError("sweep: axis '" + axis.key + "' has no values");
    std::vector<StateRecipe> out{base};
    for (const auto& axis : axes) {
        std::vector<StateRecipe> next;
        next.reserve(out.size() * axis.values.size());
        for (const auto& recipe : out)
            for (double v : axis.values) next.push_back(recipe.with_parameter(axis.key, v));
        out = std::move(next);
    }
    return out;
}

/**
 * Widens a line box (keeping the sample spacing roughly fixed) until
 * |x| |psi(x)|^2 at both edges drops below `threshold`, re-realizing the
 * recipe each time. Returns the final topology; callers should still check
 * the edge criterion, since slowly decaying families never satisfy it.
 */
inline GridTopology widen_until_decayed(const StateRecipe& recipe, GridTopology topo,
                                        double threshold = 1e-12, int max_widenings = 8) {
    if (topo.kind() != GridKind::Line)
        throw StructuralError("widen_until_decayed: requires a line grid");
    for (int iter = 0; iter <= max_widenings; ++iter) {
        const WaveFunction psi = recipe.realize(topo);
        const double lo = std::abs(topo.x_min()) * std::norm(psi.front());
        const double hi = std::abs(topo.x_max()) * std::norm(psi.back());
        if (std::max(lo, hi) < threshold) return topo;
        if (iter == max_widenings) break;
        const double mid = 0.5 * (topo.x_min() + topo.x_max());
        const double half = 0.75 * (topo.x_max() - topo.x_min());  // grow by 1.5x
        const int n = static_cast<int>(std::llround((topo.n_points() - 1) * 1.5)) + 1;
        topo = GridTopology::line(mid - half, mid + half, n);
    }
    return topo;
}

}  // namespace uqr
