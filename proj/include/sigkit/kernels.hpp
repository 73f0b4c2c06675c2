#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sigkit/tensor_algebra.hpp"

namespace sigkit {

/// Batched discretized paths, shape (B, L, d), row-major.
struct PathBatch {
    std::size_t batch = 0;
    std::size_t len = 0;
    int dim = 0;
    std::vector<double> values;

    double& at(std::size_t b, std::size_t t, int c) {
        return values[(b * len + t) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)];
    }
    double at(std::size_t b, std::size_t t, int c) const {
        return values[(b * len + t) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)];
    }
};

/// Increments ΔX_i = X_{i+1} - X_i, shape (B, L-1, d). Empty when L = 1.
struct IncrementBatch {
    std::size_t batch = 0;
    std::size_t segments = 0;
    int dim = 0;
    std::vector<double> diffs;
};

/// Pre-divided increments ΔX/n! for n = 2..depth, each shape (B, L-1, d).
/// per_degree[n-2] holds degree n.
struct ScaledIncrements {
    std::size_t batch = 0;
    std::size_t segments = 0;
    int dim = 0;
    int depth = 0;
    std::vector<std::vector<double>> per_degree;
};

/// Flattened signatures, one row of D = sig_dim(dim, depth) values per path.
struct SignatureBatch {
    std::size_t batch = 0;
    int dim = 0;
    int depth = 0;
    std::vector<double> flat;  // (B, D)

    std::size_t width() const { return batch == 0 ? flat.size() : flat.size() / batch; }
    std::vector<double> row(std::size_t b) const;
};

/// Per-prefix signatures, shape (B, L-1, D); entry (b, k) is the signature
/// of path b through point k+1. The last entry equals the full signature.
struct PrefixSignatureBatch {
    std::size_t batch = 0;
    std::size_t prefixes = 0;
    int dim = 0;
    int depth = 0;
    std::vector<double> flat;  // (B, L-1, D)

    std::size_t width() const;
    std::vector<double> row(std::size_t b, std::size_t k) const;
};

enum class KernelKind { Sequential, Parallel, Auto };

const char* kernel_name(KernelKind kind);

/// Inverse of kernel_name; throws DomainError on unknown names.
KernelKind kernel_from_name(const std::string& name);

/// What the execution environment offers. Injected rather than probed at
/// call sites so dispatch stays deterministic; detect() consults the
/// SIGKIT_ACCELERATED environment variable.
struct ExecutionCaps {
    bool accelerated = false;
    std::size_t parallel_min_len = 64;

    static ExecutionCaps detect();
};

/// Per-invocation structural counters: the number of inherently
/// sequential stages each kernel executed.
struct KernelStats {
    std::int64_t fold_steps = 0;
    std::int64_t scan_passes = 0;
};

inline constexpr std::size_t kDefaultParallelMemoryCap = std::size_t(1) << 31;

IncrementBatch increments(const PathBatch& paths);

ScaledIncrements scaled_increments(const IncrementBatch& inc, int depth);

/// Chen fold: exp(ΔX_1) ⊠ exp(ΔX_2) ⊠ ... per row, L-1 fold steps.
SignatureBatch signature_sequential(const PathBatch& paths, int depth,
                                    KernelStats* stats = nullptr);

/// Cumulative-sum reformulation: one scan pass per degree, independent of
/// L, plus batched per-position tensor products. Throws ResourceError when
/// the intermediate storage would exceed memory_cap scalars.
SignatureBatch signature_parallel(const PathBatch& paths, int depth,
                                  KernelStats* stats = nullptr,
                                  std::size_t memory_cap = kDefaultParallelMemoryCap);

/// Signatures of every prefix of every path. Requires L >= 2.
PrefixSignatureBatch signature_stream(const PathBatch& paths, int depth,
                                      KernelKind kernel = KernelKind::Auto,
                                      const ExecutionCaps& caps = ExecutionCaps::detect(),
                                      KernelStats* stats = nullptr);

/// Resolves Auto to a concrete kernel: Parallel when the environment is
/// accelerated and the sequence is long enough, Sequential otherwise.
KernelKind select_kernel(KernelKind hint, const ExecutionCaps& caps, std::size_t seq_len);

/// Public dispatcher over the two kernels.
SignatureBatch signature(const PathBatch& paths, int depth,
                         KernelKind kernel = KernelKind::Auto,
                         const ExecutionCaps& caps = ExecutionCaps::detect(),
                         KernelStats* stats = nullptr);

}  // namespace sigkit
