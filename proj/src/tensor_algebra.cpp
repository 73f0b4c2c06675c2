#include "sigkit/tensor_algebra.hpp"

#include <cmath>
#include <string>

#include "sigkit/errors.hpp"

namespace sigkit {

std::size_t sig_dim(int dim, int depth) {
    if (dim < 1) throw DomainError("sig_dim: dim must be >= 1, got " + std::to_string(dim));
    if (depth < 1) throw DomainError("sig_dim: depth must be >= 1, got " + std::to_string(depth));
    std::size_t total = 0;
    std::size_t pow = 1;
    for (int n = 1; n <= depth; ++n) {
        pow *= static_cast<std::size_t>(dim);
        total += pow;
    }
    return total;
}

std::vector<std::size_t> level_sizes(int dim, int depth) {
    sig_dim(dim, depth);  // validates
    std::vector<std::size_t> sizes(static_cast<std::size_t>(depth));
    std::size_t pow = 1;
    for (int n = 0; n < depth; ++n) {
        pow *= static_cast<std::size_t>(dim);
        sizes[static_cast<std::size_t>(n)] = pow;
    }
    return sizes;
}

std::vector<std::size_t> level_offsets(int dim, int depth) {
    auto sizes = level_sizes(dim, depth);
    std::vector<std::size_t> offsets(static_cast<std::size_t>(depth) + 1, 0);
    for (int n = 0; n < depth; ++n) {
        offsets[static_cast<std::size_t>(n) + 1] =
            offsets[static_cast<std::size_t>(n)] + sizes[static_cast<std::size_t>(n)];
    }
    return offsets;
}

TruncatedTensor TruncatedTensor::zero(int dim, int depth) {
    auto sizes = level_sizes(dim, depth);
    TruncatedTensor t;
    t.dim = dim;
    t.depth = depth;
    t.levels.reserve(sizes.size());
    for (std::size_t s : sizes) t.levels.emplace_back(s, 0.0);
    return t;
}

std::vector<double> tensor_product(const std::vector<double>& a,
                                   const std::vector<double>& b) {
    std::vector<double> out(a.size() * b.size());
    std::size_t pos = 0;
    for (double av : a) {
        for (double bv : b) out[pos++] = av * bv;
    }
    return out;
}

TruncatedTensor restricted_exp(const std::vector<double>& v, int depth) {
    const int dim = static_cast<int>(v.size());
    if (dim < 1) throw DomainError("restricted_exp: empty increment");
    TruncatedTensor t = TruncatedTensor::zero(dim, depth);
    t.level(1) = v;
    for (int n = 2; n <= depth; ++n) {
        const auto& prev = t.level(n - 1);
        auto& cur = t.level(n);
        const double inv = 1.0 / n;
        std::size_t pos = 0;
        for (double pv : prev) {
            for (double vv : v) cur[pos++] = pv * vv * inv;
        }
    }
    return t;
}

TruncatedTensor chen_product(const TruncatedTensor& a, const TruncatedTensor& b) {
    if (a.dim != b.dim || a.depth != b.depth) {
        throw DomainError("chen_product: operands must share dim and depth");
    }
    const int d = a.dim;
    TruncatedTensor c = TruncatedTensor::zero(d, a.depth);
    for (int n = 1; n <= a.depth; ++n) {
        auto& cn = c.level(n);
        const auto& an = a.level(n);
        const auto& bn = b.level(n);
        for (std::size_t idx = 0; idx < cn.size(); ++idx) cn[idx] = an[idx] + bn[idx];
        for (int i = 1; i < n; ++i) {
            const int j = n - i;
            const auto& ai = a.level(i);
            const auto& bj = b.level(j);
            std::size_t pos = 0;
            for (double av : ai) {
                for (double bv : bj) cn[pos++] += av * bv;
            }
        }
    }
    return c;
}

FlatSignature flatten(const TruncatedTensor& t) {
    FlatSignature f;
    f.dim = t.dim;
    f.depth = t.depth;
    f.coeffs.reserve(sig_dim(t.dim, t.depth));
    for (const auto& level : t.levels) {
        f.coeffs.insert(f.coeffs.end(), level.begin(), level.end());
    }
    return f;
}

TruncatedTensor unflatten(const FlatSignature& f) {
    if (f.coeffs.size() != sig_dim(f.dim, f.depth)) {
        throw DomainError("unflatten: coeffs length " + std::to_string(f.coeffs.size()) +
                          " does not match sig_dim(" + std::to_string(f.dim) + ", " +
                          std::to_string(f.depth) + ")");
    }
    TruncatedTensor t = TruncatedTensor::zero(f.dim, f.depth);
    std::size_t pos = 0;
    for (auto& level : t.levels) {
        for (double& x : level) x = f.coeffs[pos++];
    }
    return t;
}

}  // namespace sigkit
