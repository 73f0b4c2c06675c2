#include "sigkit/oracle.hpp"

#include <string>

#include "sigkit/errors.hpp"

namespace sigkit {

namespace {

// 1 / product of (run length)! over runs of equal consecutive indices.
double run_weight(const std::vector<int>& tuple) {
    double denom = 1.0;
    int run = 1;
    for (std::size_t i = 1; i < tuple.size(); ++i) {
        if (tuple[i] == tuple[i - 1]) {
            ++run;
            denom *= run;
        } else {
            run = 1;
        }
    }
    return 1.0 / denom;
}

}  // namespace

FlatSignature signature_bruteforce(const std::vector<double>& path, std::size_t len, int dim,
                                   int depth, const OracleLimits& limits, TupleClass tuples) {
    if (len < 1 || dim < 1 || depth < 1) {
        throw DomainError("signature_bruteforce: len, dim and depth must be >= 1");
    }
    if (path.size() != len * static_cast<std::size_t>(dim)) {
        throw DomainError("signature_bruteforce: path size does not match (len, dim)");
    }
    const int segments = static_cast<int>(len) - 1;
    if (segments > limits.max_segments || depth > limits.max_depth || dim > limits.max_dim) {
        throw ResourceError("signature_bruteforce: instance exceeds limits (segments " +
                            std::to_string(segments) + "/" + std::to_string(limits.max_segments) +
                            ", depth " + std::to_string(depth) + "/" + std::to_string(limits.max_depth) +
                            ", dim " + std::to_string(dim) + "/" + std::to_string(limits.max_dim) + ")");
    }

    const std::size_t d = static_cast<std::size_t>(dim);
    std::vector<std::vector<double>> deltas(static_cast<std::size_t>(segments));
    for (int s = 0; s < segments; ++s) {
        auto& delta = deltas[static_cast<std::size_t>(s)];
        delta.resize(d);
        for (std::size_t c = 0; c < d; ++c) {
            delta[c] = path[(static_cast<std::size_t>(s) + 1) * d + c] -
                       path[static_cast<std::size_t>(s) * d + c];
        }
    }

    FlatSignature out;
    out.dim = dim;
    out.depth = depth;
    out.coeffs.assign(sig_dim(dim, depth), 0.0);
    if (segments == 0) return out;

    const auto offsets = level_offsets(dim, depth);
    const bool strict = tuples == TupleClass::StrictlyIncreasing;

    for (int n = 1; n <= depth; ++n) {
        double* block = out.coeffs.data() + offsets[static_cast<std::size_t>(n) - 1];
        // Lexicographic odometer over tuples 1 <= j_1 <= ... <= j_n <= M
        // (strictly increasing when requested).
        std::vector<int> tuple(static_cast<std::size_t>(n), 0);
        if (strict) {
            if (n > segments) continue;
            for (int i = 0; i < n; ++i) tuple[static_cast<std::size_t>(i)] = i;
        }
        while (true) {
            // Accumulate the outer product of this tuple's increments.
            std::vector<double> term = deltas[static_cast<std::size_t>(tuple[0])];
            for (int i = 1; i < n; ++i) {
                term = tensor_product(term, deltas[static_cast<std::size_t>(tuple[static_cast<std::size_t>(i)])]);
            }
            const double w = strict ? 1.0 : run_weight(tuple);
            for (std::size_t idx = 0; idx < term.size(); ++idx) block[idx] += w * term[idx];

            // Advance the odometer.
            int pos = n - 1;
            while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == segments - 1 - (strict ? (n - 1 - pos) : 0)) {
                --pos;
            }
            if (pos < 0) break;
            ++tuple[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < n; ++i) {
                tuple[static_cast<std::size_t>(i)] =
                    tuple[static_cast<std::size_t>(i) - 1] + (strict ? 1 : 0);
            }
        }
    }
    return out;
}

}  // namespace sigkit
