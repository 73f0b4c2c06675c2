#pragma once

#include <cstddef>
#include <vector>

#include "sigkit/tensor_algebra.hpp"

namespace sigkit {

/// Hard bounds on the brute-force enumeration; degree n of an M-segment
/// path costs O(M^n) terms.
struct OracleLimits {
    int max_segments = 8;
    int max_depth = 4;
    int max_dim = 3;
};

/// Which index tuples to enumerate. WeaklyIncreasing is the exact
/// piecewise-linear signature; StrictlyIncreasing keeps only the cross
/// terms (no repeated segment indices, no factorial weights).
enum class TupleClass { WeaklyIncreasing, StrictlyIncreasing };

/// Ground-truth signature of a single path (L points, d channels,
/// row-major) by direct enumeration of segment-index tuples: degree n is
/// the sum over 1 <= j_1 <= ... <= j_n <= L-1 of
/// (ΔX_{j_1} ⊗ ... ⊗ ΔX_{j_n}) weighted by 1/m! per run of m equal
/// consecutive indices. Deliberately a different algorithm from both
/// kernels. Throws ResourceError when the limits are exceeded.
FlatSignature signature_bruteforce(const std::vector<double>& path, std::size_t len, int dim,
                                   int depth, const OracleLimits& limits = OracleLimits{},
                                   TupleClass tuples = TupleClass::WeaklyIncreasing);

}  // namespace sigkit
