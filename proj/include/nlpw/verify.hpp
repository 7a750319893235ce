#pragma once

#include <cstdint>

#include "nlpw/emit.hpp"

namespace nlpw::cli {

struct VerifyConfig {
    int n = 1024;        // mesh for the eigen-solver checks
    bool quick = false;  // smaller grids, smaller default n
    std::uint64_t seed = 0;
};

/// Runs the library's cross-checks: generalized-trig identities, the
/// quadrature Beta oracles, the H/K lemma grids, eigen-solver oracle
/// equivalence and gradient consistency, and the saturation plateau for
/// (2,2,3).  Each check reports its measured residual.
VerifyReport run_verify_suite(const VerifyConfig& cfg);

} // namespace nlpw::cli
