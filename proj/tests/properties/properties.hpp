#pragma once

#include <cstdint>
#include <string>

namespace dfh::props {

struct PropertyResult {
    bool ok{true};
    std::string detail;
};

// Each check is self-contained and deterministic for a given seed.
PropertyResult quadrature_exactness();
PropertyResult bisection_random_rounds(int rounds, std::uint64_t seed);
PropertyResult forchheimer_monotonicity(int pairs, std::uint64_t seed);
PropertyResult indicator_quadrature_vs_subdivision(double rel_tol);
PropertyResult mark_max_cases();

}  // namespace dfh::props
