// A normalized state whose momentum image is not square integrable:
// sqrt(2|x|) exp(-|x|). The norm of p psi grows without settling as the grid
// is refined, and the domain check reports exactly that.

#include <cstdio>

#include "uqr/operators.hpp"
#include "uqr/states.hpp"

using namespace uqr;

int main() {
    const auto state = StateRecipe::cusp_state().resampleable(GridTopology::line(-20, 20, 1025));
    std::printf("norm of the state: %.12f\n\n", norm(state.wf));

    const DomainReport rep = domain_check(OperatorSpec::momentum(), state);
    std::printf("%-8s %s\n", "n", "||p psi||");
    for (const auto& [n, v] : rep.derivative_norm_sequence) std::printf("%-8d %.6f\n", n, v);

    std::printf("\nverdict: %s (%s)\n", to_string(rep.in_domain), to_string(rep.reason));
    std::printf("divergence flag: %s\n", rep.divergence_flag ? "true" : "false");
    return 0;
}
