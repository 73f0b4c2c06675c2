#include "sigkit/kernels.hpp"

#include <cstdlib>
#include <string>

#include "sigkit/detail/sig_core.hpp"
#include "sigkit/errors.hpp"

namespace sigkit {

namespace {

void validate_paths(const PathBatch& paths) {
    if (paths.batch < 1 || paths.len < 1 || paths.dim < 1) {
        throw DomainError("paths: batch, len and dim must all be >= 1");
    }
    const std::size_t expected = paths.batch * paths.len * static_cast<std::size_t>(paths.dim);
    if (paths.values.size() != expected) {
        throw DomainError("paths: values has " + std::to_string(paths.values.size()) +
                          " entries, shape implies " + std::to_string(expected));
    }
}

void validate_depth(int depth) {
    if (depth < 1) throw DomainError("depth must be >= 1, got " + std::to_string(depth));
}

}  // namespace

std::vector<double> SignatureBatch::row(std::size_t b) const {
    const std::size_t w = width();
    return std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(b * w),
                               flat.begin() + static_cast<std::ptrdiff_t>((b + 1) * w));
}

std::size_t PrefixSignatureBatch::width() const {
    const std::size_t rows = batch * prefixes;
    return rows == 0 ? 0 : flat.size() / rows;
}

std::vector<double> PrefixSignatureBatch::row(std::size_t b, std::size_t k) const {
    const std::size_t w = width();
    const std::size_t start = (b * prefixes + k) * w;
    return std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(start),
                               flat.begin() + static_cast<std::ptrdiff_t>(start + w));
}

const char* kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Sequential: return "sequential";
        case KernelKind::Parallel: return "parallel";
        case KernelKind::Auto: return "auto";
    }
    return "unknown";
}

KernelKind kernel_from_name(const std::string& name) {
    if (name == "sequential") return KernelKind::Sequential;
    if (name == "parallel") return KernelKind::Parallel;
    if (name == "auto") return KernelKind::Auto;
    throw DomainError("unknown kernel '" + name + "', expected sequential, parallel or auto");
}

ExecutionCaps ExecutionCaps::detect() {
    ExecutionCaps caps;
    const char* env = std::getenv("SIGKIT_ACCELERATED");
    caps.accelerated = env != nullptr && std::string(env) != "0" && std::string(env) != "";
    return caps;
}

IncrementBatch increments(const PathBatch& paths) {
    validate_paths(paths);
    IncrementBatch inc;
    inc.batch = paths.batch;
    inc.segments = paths.len - 1;
    inc.dim = paths.dim;
    inc.diffs.resize(inc.batch * inc.segments * static_cast<std::size_t>(inc.dim));
    const std::size_t d = static_cast<std::size_t>(paths.dim);
    for (std::size_t b = 0; b < paths.batch; ++b) {
        for (std::size_t k = 0; k < inc.segments; ++k) {
            double* dst = inc.diffs.data() + (b * inc.segments + k) * d;
            const double* cur = paths.values.data() + (b * paths.len + k) * d;
            for (std::size_t c = 0; c < d; ++c) dst[c] = cur[d + c] - cur[c];
        }
    }
    return inc;
}

ScaledIncrements scaled_increments(const IncrementBatch& inc, int depth) {
    validate_depth(depth);
    ScaledIncrements scaled;
    scaled.batch = inc.batch;
    scaled.segments = inc.segments;
    scaled.dim = inc.dim;
    scaled.depth = depth;
    double factorial = 1.0;
    for (int n = 2; n <= depth; ++n) {
        factorial *= n;
        std::vector<double> arr(inc.diffs.size());
        for (std::size_t idx = 0; idx < arr.size(); ++idx) arr[idx] = inc.diffs[idx] / factorial;
        scaled.per_degree.push_back(std::move(arr));
    }
    return scaled;
}

SignatureBatch signature_sequential(const PathBatch& paths, int depth, KernelStats* stats) {
    validate_paths(paths);
    validate_depth(depth);
    SignatureBatch out;
    out.batch = paths.batch;
    out.dim = paths.dim;
    out.depth = depth;
    out.flat.resize(paths.batch * sig_dim(paths.dim, depth));
    const std::int64_t steps =
        detail::sequential_forward(paths.values.data(), paths.batch, paths.len, paths.dim, depth,
                                   out.flat.data(), static_cast<double*>(nullptr));
    if (stats != nullptr) {
        stats->fold_steps = steps;
        stats->scan_passes = 0;
    }
    return out;
}

SignatureBatch signature_parallel(const PathBatch& paths, int depth, KernelStats* stats,
                                  std::size_t memory_cap) {
    validate_paths(paths);
    validate_depth(depth);
    detail::ParallelState<double> state;
    detail::parallel_forward(paths.values.data(), paths.batch, paths.len, paths.dim, depth,
                             memory_cap, state);
    SignatureBatch out;
    out.batch = paths.batch;
    out.dim = paths.dim;
    out.depth = depth;
    out.flat.assign(paths.batch * sig_dim(paths.dim, depth), 0.0);
    if (state.segments > 0) {
        const std::size_t width = sig_dim(paths.dim, depth);
        for (std::size_t b = 0; b < paths.batch; ++b) {
            detail::gather_position(state, paths.dim, depth, b, state.segments - 1,
                                    out.flat.data() + b * width);
        }
    }
    if (stats != nullptr) {
        stats->fold_steps = 0;
        stats->scan_passes = state.scan_passes;
    }
    return out;
}

KernelKind select_kernel(KernelKind hint, const ExecutionCaps& caps, std::size_t seq_len) {
    if (hint != KernelKind::Auto) return hint;
    if (caps.accelerated && seq_len >= caps.parallel_min_len) return KernelKind::Parallel;
    return KernelKind::Sequential;
}

PrefixSignatureBatch signature_stream(const PathBatch& paths, int depth, KernelKind kernel,
                                      const ExecutionCaps& caps, KernelStats* stats) {
    validate_paths(paths);
    validate_depth(depth);
    if (paths.len < 2) {
        throw DomainError("signature_stream: need at least 2 points, got L = " +
                          std::to_string(paths.len));
    }
    const KernelKind kind = select_kernel(kernel, caps, paths.len);
    PrefixSignatureBatch out;
    out.batch = paths.batch;
    out.prefixes = paths.len - 1;
    out.dim = paths.dim;
    out.depth = depth;
    const std::size_t width = sig_dim(paths.dim, depth);
    out.flat.resize(paths.batch * out.prefixes * width);

    if (kind == KernelKind::Sequential) {
        std::vector<double> final_sig(paths.batch * width);
        const std::int64_t steps =
            detail::sequential_forward(paths.values.data(), paths.batch, paths.len, paths.dim,
                                       depth, final_sig.data(), out.flat.data());
        if (stats != nullptr) {
            stats->fold_steps = steps;
            stats->scan_passes = 0;
        }
    } else {
        detail::ParallelState<double> state;
        detail::parallel_forward(paths.values.data(), paths.batch, paths.len, paths.dim, depth,
                                 kDefaultParallelMemoryCap, state);
        for (std::size_t b = 0; b < paths.batch; ++b) {
            for (std::size_t k = 0; k < out.prefixes; ++k) {
                detail::gather_position(state, paths.dim, depth, b, k,
                                        out.flat.data() + (b * out.prefixes + k) * width);
            }
        }
        if (stats != nullptr) {
            stats->fold_steps = 0;
            stats->scan_passes = state.scan_passes;
        }
    }
    return out;
}

SignatureBatch signature(const PathBatch& paths, int depth, KernelKind kernel,
                         const ExecutionCaps& caps, KernelStats* stats) {
    validate_paths(paths);
    const KernelKind kind = select_kernel(kernel, caps, paths.len);
    if (kind == KernelKind::Parallel) return signature_parallel(paths, depth, stats);
    return signature_sequential(paths, depth, stats);
}

}  // namespace sigkit
