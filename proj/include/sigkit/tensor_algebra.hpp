#pragma once

#include <cstddef>
#include <vector>

namespace sigkit {

/// One element of the depth-N truncated tensor algebra over R^d.
///
/// levels[n-1] holds the degree-n coefficients, d^n values in row-major
/// multi-index order (last index varies fastest). The degree-0 scalar is
/// implicitly 1 and never stored.
struct TruncatedTensor {
    int dim = 0;
    int depth = 0;
    std::vector<std::vector<double>> levels;

    /// Identity element (all stored levels zero).
    static TruncatedTensor zero(int dim, int depth);

    std::vector<double>& level(int n) { return levels[static_cast<std::size_t>(n) - 1]; }
    const std::vector<double>& level(int n) const { return levels[static_cast<std::size_t>(n) - 1]; }
};

/// Flattened signature: levels 1..N concatenated degree-ascending,
/// row-major within each degree. coeffs.size() == sig_dim(dim, depth).
struct FlatSignature {
    int dim = 0;
    int depth = 0;
    std::vector<double> coeffs;
};

/// Total number of stored coefficients, sum of d^n for n = 1..N.
/// Rejects d == 0 or N == 0.
std::size_t sig_dim(int dim, int depth);

/// Sizes d^1..d^N of the individual degree blocks.
std::vector<std::size_t> level_sizes(int dim, int depth);

/// Byte-free offsets of each degree block inside a flat signature:
/// offsets[n-1] is where degree n starts, offsets[depth] == sig_dim.
std::vector<std::size_t> level_offsets(int dim, int depth);

/// Outer product of a degree-p block (d^p values) with a degree-q block
/// (d^q values): out[(i,j)] = a[i] * b[j], row-major (p+q indices).
std::vector<double> tensor_product(const std::vector<double>& a,
                                   const std::vector<double>& b);

/// exp^N(v) = (v, v⊗v/2!, ..., v^⊗N/N!), the signature of one linear
/// segment with increment v.
TruncatedTensor restricted_exp(const std::vector<double>& v, int depth);

/// Product of the truncated tensor algebra: level n of a ⊠ b is
/// a_n + b_n + sum over i+j = n, i,j >= 1 of a_i ⊗ b_j (implicit
/// scalar 1 at degree 0). Composes signatures of concatenated paths.
TruncatedTensor chen_product(const TruncatedTensor& a, const TruncatedTensor& b);

FlatSignature flatten(const TruncatedTensor& t);
TruncatedTensor unflatten(const FlatSignature& f);

}  // namespace sigkit
