#pragma once

#include <cstddef>
#include <vector>

#include "sigkit/kernels.hpp"

namespace sigkit {

/// Upstream gradient with respect to the flattened signature, shape (B, D).
struct SignatureCotangent {
    std::size_t batch = 0;
    int dim = 0;
    int depth = 0;
    std::vector<double> values;
};

/// Gradient of a scalar objective with respect to every path point,
/// shape (B, L, d).
struct PathGradient {
    std::size_t batch = 0;
    std::size_t len = 0;
    int dim = 0;
    std::vector<double> values;

    double at(std::size_t b, std::size_t t, int c) const {
        return values[(b * len + t) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)];
    }
};

/// Reverse-mode derivative: returns d<cotangent, Sig(X)>/dX. The
/// Sequential route runs the adjoint of the Chen fold over stored fold
/// states; the Parallel route runs the adjoint of the per-degree scan
/// passes (reverse scans). Both are exact adjoints of the same function.
PathGradient signature_vjp(const PathBatch& paths, int depth,
                           const SignatureCotangent& cotangent,
                           KernelKind kernel = KernelKind::Auto,
                           const ExecutionCaps& caps = ExecutionCaps::detect());

/// Central-difference approximation of the same quantity, perturbing each
/// coordinate of each path point by ±h. Test oracle; small instances only.
PathGradient finite_diff_grad(const PathBatch& paths, int depth,
                              const SignatureCotangent& cotangent, double h);

}  // namespace sigkit
