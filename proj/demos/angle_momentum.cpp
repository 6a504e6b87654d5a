// Walks through the angle / angular-momentum pair on an eigenstate of Lz:
// the naive commutator bound would claim dphi * dLz >= hbar/2, but the
// product is zero. The domain diagnostics show why the commutator bound may
// not be quoted, and the covariance-augmented bound evaluates to 0 >= 0.

#include <cstdio>
#include <numbers>

#include "uqr/relations.hpp"
#include "uqr/states.hpp"

using namespace uqr;

int main() {
    const auto state = StateRecipe::lz_eigenstate(1).resampleable(GridTopology::circle(8193));
    const auto phi = OperatorSpec::angle();
    const auto lz = OperatorSpec::angular_momentum();

    const RelationReport rep = evaluate_commutator_form(phi, lz, state);
    std::printf("state: exp(i phi)/sqrt(2 pi) on 8193 circle samples\n\n");
    std::printf("delta_phi      = %.9f   (pi/sqrt(3) = %.9f)\n", rep.stats.delta_a,
                std::numbers::pi / std::sqrt(3.0));
    std::printf("delta_Lz       = %.3e\n", rep.stats.delta_b);
    std::printf("product        = %.3e   << hbar/2 = 0.5\n", rep.lhs);

    std::printf("\nmodified bound  = %.3e  -> %s (margin %.3e)\n", rep.modified.value,
                rep.modified.satisfied ? "satisfied" : "VIOLATED", rep.modified.margin);

    if (rep.standard && !rep.standard->applies && rep.standard->blocker) {
        const DomainReport& why = *rep.standard->blocker;
        std::printf("standard bound  = inapplicable: %s fails (%s)\n", why.checked.c_str(),
                    to_string(why.reason));
        std::printf("                  endpoint magnitude mismatch = %.6f\n",
                    why.boundary_magnitude_mismatch);
    }

    std::printf("\nclosed-form bound from the endpoint sample: %.3e\n",
                phi_lz_bound(state));
    return 0;
}
