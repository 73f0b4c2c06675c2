#include "sigkit/autodiff.hpp"

#include <string>

#include "sigkit/detail/sig_core.hpp"
#include "sigkit/errors.hpp"

namespace sigkit {

namespace {

void validate(const PathBatch& paths, int depth, const SignatureCotangent& cot) {
    if (paths.batch < 1 || paths.len < 1 || paths.dim < 1) {
        throw DomainError("signature_vjp: batch, len and dim must all be >= 1");
    }
    if (depth < 1) throw DomainError("signature_vjp: depth must be >= 1");
    if (cot.batch != paths.batch || cot.dim != paths.dim || cot.depth != depth) {
        throw DomainError("signature_vjp: cotangent shape does not match paths/depth");
    }
    const std::size_t width = sig_dim(paths.dim, depth);
    if (cot.values.size() != cot.batch * width) {
        throw DomainError("signature_vjp: cotangent has " + std::to_string(cot.values.size()) +
                          " values, expected " + std::to_string(cot.batch * width));
    }
}

// Adjoint of the sequential fold. Replays the forward pass storing every
// fold state, then walks the segments backwards, splitting each step's
// cotangent between the running state and the segment's restricted
// exponential, and finally through exp into the increment.
PathGradient vjp_sequential(const PathBatch& paths, int depth, const SignatureCotangent& cot) {
    const std::size_t B = paths.batch;
    const std::size_t L = paths.len;
    const std::size_t d = static_cast<std::size_t>(paths.dim);
    const std::size_t M = L - 1;
    const auto off = detail::block_offsets(paths.dim, depth);
    const std::size_t D = off.back();

    PathGradient grad;
    grad.batch = B;
    grad.len = L;
    grad.dim = paths.dim;
    grad.values.assign(B * L * d, 0.0);
    if (M == 0) return grad;

    std::vector<double> states(B * M * D);
    std::vector<double> final_sig(B * D);
    detail::sequential_forward(paths.values.data(), B, L, paths.dim, depth, final_sig.data(),
                               states.data());

    std::vector<double> delta(d), exp_levels(D), cbar(D), abar(D), ebar(D), deltabar(d);
    for (std::size_t b = 0; b < B; ++b) {
        const double* row = paths.values.data() + b * L * d;
        for (std::size_t idx = 0; idx < D; ++idx) cbar[idx] = cot.values[b * D + idx];

        for (std::size_t s = M; s-- > 0;) {
            for (std::size_t c = 0; c < d; ++c) delta[c] = row[(s + 1) * d + c] - row[s * d + c];
            detail::exp_into(delta.data(), paths.dim, depth, off, exp_levels.data());
            const double* before =
                s == 0 ? nullptr : states.data() + (b * M + s - 1) * D;

            // c_n = a_n + e_n + sum_{i,j>=1, i+j=n} a_i ⊗ e_j
            for (std::size_t idx = 0; idx < D; ++idx) {
                abar[idx] = cbar[idx];
                ebar[idx] = cbar[idx];
            }
            if (before != nullptr) {
                for (int n = 2; n <= depth; ++n) {
                    const double* cn = cbar.data() + off[static_cast<std::size_t>(n) - 1];
                    for (int j = 1; j < n; ++j) {
                        const int i = n - j;
                        const std::size_t isz = off[static_cast<std::size_t>(i)] - off[static_cast<std::size_t>(i) - 1];
                        const std::size_t jsz = off[static_cast<std::size_t>(j)] - off[static_cast<std::size_t>(j) - 1];
                        detail::contract_right(cn, isz, jsz,
                                               exp_levels.data() + off[static_cast<std::size_t>(j) - 1],
                                               abar.data() + off[static_cast<std::size_t>(i) - 1]);
                        detail::contract_left(cn, isz, jsz,
                                              before + off[static_cast<std::size_t>(i) - 1],
                                              ebar.data() + off[static_cast<std::size_t>(j) - 1]);
                    }
                }
            }

            // e_n = e_{n-1} ⊗ delta / n, reversed from the top degree down.
            for (std::size_t c = 0; c < d; ++c) deltabar[c] = 0.0;
            for (int n = depth; n >= 2; --n) {
                const std::size_t psz = off[static_cast<std::size_t>(n) - 1] - off[static_cast<std::size_t>(n) - 2];
                const double inv = 1.0 / n;
                detail::contract_right(ebar.data() + off[static_cast<std::size_t>(n) - 1], psz, d,
                                       delta.data(), ebar.data() + off[static_cast<std::size_t>(n) - 2],
                                       inv);
                detail::contract_left(ebar.data() + off[static_cast<std::size_t>(n) - 1], psz, d,
                                      exp_levels.data() + off[static_cast<std::size_t>(n) - 2],
                                      deltabar.data(), inv);
            }
            for (std::size_t c = 0; c < d; ++c) deltabar[c] += ebar[off[0] + c];

            double* g = grad.values.data() + b * L * d;
            for (std::size_t c = 0; c < d; ++c) {
                g[(s + 1) * d + c] += deltabar[c];
                g[s * d + c] -= deltabar[c];
            }
            if (before != nullptr) cbar.swap(abar);
        }
    }
    return grad;
}

// Adjoint of the per-degree scan passes. The adjoint of an inclusive
// cumulative sum is a suffix sum, so each degree costs one reverse scan;
// cross-term cotangents flow from high degrees into the stored lower-
// degree prefixes and diagonal terms, then through the diagonal power
// recursion into the increments.
PathGradient vjp_parallel(const PathBatch& paths, int depth, const SignatureCotangent& cot) {
    const std::size_t B = paths.batch;
    const std::size_t L = paths.len;
    const std::size_t d = static_cast<std::size_t>(paths.dim);
    const std::size_t M = L - 1;

    PathGradient grad;
    grad.batch = B;
    grad.len = L;
    grad.dim = paths.dim;
    grad.values.assign(B * L * d, 0.0);
    if (M == 0) return grad;

    detail::ParallelState<double> state;
    detail::parallel_forward(paths.values.data(), B, L, paths.dim, depth,
                             kDefaultParallelMemoryCap, state);
    const auto sizes = detail::block_sizes(paths.dim, depth);
    const auto off = detail::block_offsets(paths.dim, depth);
    const std::size_t positions = B * M;

    std::vector<std::vector<double>> tbar(static_cast<std::size_t>(depth));
    std::vector<std::vector<double>> diagbar(static_cast<std::size_t>(depth));
    for (int n = 0; n < depth; ++n) {
        tbar[static_cast<std::size_t>(n)].assign(positions * sizes[static_cast<std::size_t>(n)], 0.0);
        diagbar[static_cast<std::size_t>(n)].assign(positions * sizes[static_cast<std::size_t>(n)], 0.0);
    }

    // Seed the last position of every degree with the upstream cotangent.
    for (std::size_t b = 0; b < B; ++b) {
        for (int n = 1; n <= depth; ++n) {
            const std::size_t sz = sizes[static_cast<std::size_t>(n) - 1];
            double* dst = tbar[static_cast<std::size_t>(n) - 1].data() + (b * M + M - 1) * sz;
            const double* src = cot.values.data() + b * off.back() + off[static_cast<std::size_t>(n) - 1];
            for (std::size_t idx = 0; idx < sz; ++idx) dst[idx] = src[idx];
        }
    }

    for (int n = depth; n >= 1; --n) {
        const std::size_t nsz = sizes[static_cast<std::size_t>(n) - 1];
        std::vector<double>& ub = tbar[static_cast<std::size_t>(n) - 1];
        // Reverse scan: inclusive suffix sums along the sequence axis.
        for (std::size_t b = 0; b < B; ++b) {
            double* base = ub.data() + b * M * nsz;
            for (std::size_t k = M - 1; k-- > 0;) {
                double* cur = base + k * nsz;
                const double* next = base + (k + 1) * nsz;
                for (std::size_t idx = 0; idx < nsz; ++idx) cur[idx] += next[idx];
            }
        }
        // Distribute each position's contribution to its factors.
        for (int j = 1; j < n; ++j) {
            const int m = n - j;
            const std::size_t msz = sizes[static_cast<std::size_t>(m) - 1];
            const std::size_t jsz = sizes[static_cast<std::size_t>(j) - 1];
            const std::vector<double>& tm = state.levels[static_cast<std::size_t>(m) - 1];
            const std::vector<double>& dj = state.diag[static_cast<std::size_t>(j) - 1];
            for (std::size_t b = 0; b < B; ++b) {
                for (std::size_t k = 1; k < M; ++k) {
                    const std::size_t pos = b * M + k;
                    const double* u = ub.data() + pos * nsz;
                    detail::contract_right(u, msz, jsz, dj.data() + pos * jsz,
                                           tbar[static_cast<std::size_t>(m) - 1].data() + (pos - 1) * msz);
                    detail::contract_left(u, msz, jsz, tm.data() + (pos - 1) * msz,
                                          diagbar[static_cast<std::size_t>(j) - 1].data() + pos * jsz);
                }
            }
        }
        std::vector<double>& dn = diagbar[static_cast<std::size_t>(n) - 1];
        for (std::size_t idx = 0; idx < dn.size(); ++idx) dn[idx] += ub[idx];
    }

    // diag_n = diag_{n-1} ⊗ delta / n, reversed; then increments to points.
    std::vector<double> deltabar(positions * d, 0.0);
    for (int n = depth; n >= 2; --n) {
        const std::size_t psz = sizes[static_cast<std::size_t>(n) - 2];
        const double inv = 1.0 / n;
        const std::vector<double>& dbn = diagbar[static_cast<std::size_t>(n) - 1];
        std::vector<double>& dbp = diagbar[static_cast<std::size_t>(n) - 2];
        const std::vector<double>& dprev = state.diag[static_cast<std::size_t>(n) - 2];
        const std::vector<double>& inc = state.diag[0];
        for (std::size_t pos = 0; pos < positions; ++pos) {
            detail::contract_right(dbn.data() + pos * psz * d, psz, d, inc.data() + pos * d,
                                   dbp.data() + pos * psz, inv);
            detail::contract_left(dbn.data() + pos * psz * d, psz, d, dprev.data() + pos * psz,
                                  deltabar.data() + pos * d, inv);
        }
    }
    for (std::size_t idx = 0; idx < deltabar.size(); ++idx) deltabar[idx] += diagbar[0][idx];

    for (std::size_t b = 0; b < B; ++b) {
        double* g = grad.values.data() + b * L * d;
        for (std::size_t k = 0; k < M; ++k) {
            const double* db = deltabar.data() + (b * M + k) * d;
            for (std::size_t c = 0; c < d; ++c) {
                g[(k + 1) * d + c] += db[c];
                g[k * d + c] -= db[c];
            }
        }
    }
    return grad;
}

}  // namespace

PathGradient signature_vjp(const PathBatch& paths, int depth, const SignatureCotangent& cotangent,
                           KernelKind kernel, const ExecutionCaps& caps) {
    validate(paths, depth, cotangent);
    const KernelKind kind = select_kernel(kernel, caps, paths.len);
    if (kind == KernelKind::Parallel) return vjp_parallel(paths, depth, cotangent);
    return vjp_sequential(paths, depth, cotangent);
}

PathGradient finite_diff_grad(const PathBatch& paths, int depth,
                              const SignatureCotangent& cotangent, double h) {
    validate(paths, depth, cotangent);
    if (h <= 0.0) throw DomainError("finite_diff_grad: h must be positive");
    const std::size_t d = static_cast<std::size_t>(paths.dim);
    const std::size_t D = sig_dim(paths.dim, depth);

    PathGradient grad;
    grad.batch = paths.batch;
    grad.len = paths.len;
    grad.dim = paths.dim;
    grad.values.assign(paths.values.size(), 0.0);

    // Perturbing a point of path b only moves row b of the signature, so
    // each difference needs just that row.
    PathBatch single;
    single.batch = 1;
    single.len = paths.len;
    single.dim = paths.dim;
    single.values.resize(paths.len * d);
    std::vector<double> plus(D), minus(D);
    for (std::size_t b = 0; b < paths.batch; ++b) {
        const double* row = paths.values.data() + b * paths.len * d;
        const double* cot = cotangent.values.data() + b * D;
        for (std::size_t t = 0; t < paths.len; ++t) {
            for (std::size_t c = 0; c < d; ++c) {
                single.values.assign(row, row + paths.len * d);
                single.values[t * d + c] = row[t * d + c] + h;
                detail::sequential_forward(single.values.data(), 1, paths.len, paths.dim, depth,
                                           plus.data(), static_cast<double*>(nullptr));
                single.values[t * d + c] = row[t * d + c] - h;
                detail::sequential_forward(single.values.data(), 1, paths.len, paths.dim, depth,
                                           minus.data(), static_cast<double*>(nullptr));
                double acc = 0.0;
                for (std::size_t idx = 0; idx < D; ++idx) acc += cot[idx] * (plus[idx] - minus[idx]);
                grad.values[(b * paths.len + t) * d + c] = acc / (2.0 * h);
            }
        }
    }
    return grad;
}

}  // namespace sigkit
