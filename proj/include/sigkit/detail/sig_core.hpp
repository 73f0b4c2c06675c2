#pragma once

// Scalar-generic cores for the two signature kernels. The public API in
// kernels.hpp wraps the double instantiation; the bench harness also
// instantiates these for float.
//
// Flat layout conventions, shared across the library:
//   paths      (B, L, d)   row-major, index ((b*L + t)*d + c)
//   signatures (B, D)      degree blocks ascending, row-major per block
//   per-level  (B, M, d^n) row-major, index ((b*M + k)*d^n + idx)

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sigkit/errors.hpp"

namespace sigkit::detail {

inline std::vector<std::size_t> block_sizes(int dim, int depth) {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(depth));
    std::size_t pow = 1;
    for (int n = 0; n < depth; ++n) {
        pow *= static_cast<std::size_t>(dim);
        sizes[static_cast<std::size_t>(n)] = pow;
    }
    return sizes;
}

inline std::vector<std::size_t> block_offsets(int dim, int depth) {
    auto sizes = block_sizes(dim, depth);
    std::vector<std::size_t> off(sizes.size() + 1, 0);
    for (std::size_t n = 0; n < sizes.size(); ++n) off[n + 1] = off[n] + sizes[n];
    return off;
}

// out[i*nb + j] += scale * a[i] * b[j]
template <typename Real>
inline void outer_accum(const Real* a, std::size_t na, const Real* b, std::size_t nb,
                        Real* out, Real scale) {
    for (std::size_t i = 0; i < na; ++i) {
        const Real av = a[i] * scale;
        Real* row = out + i * nb;
        for (std::size_t j = 0; j < nb; ++j) row[j] += av * b[j];
    }
}

// out[i] += sum_j c[i*nb + j] * b[j]   (contract the trailing indices)
template <typename Real>
inline void contract_right(const Real* c, std::size_t na, std::size_t nb, const Real* b,
                           Real* out, Real scale = Real(1)) {
    for (std::size_t i = 0; i < na; ++i) {
        const Real* row = c + i * nb;
        Real acc = 0;
        for (std::size_t j = 0; j < nb; ++j) acc += row[j] * b[j];
        out[i] += scale * acc;
    }
}

// out[j] += sum_i c[i*nb + j] * a[i]   (contract the leading indices)
template <typename Real>
inline void contract_left(const Real* c, std::size_t na, std::size_t nb, const Real* a,
                          Real* out, Real scale = Real(1)) {
    for (std::size_t i = 0; i < na; ++i) {
        const Real* row = c + i * nb;
        const Real av = scale * a[i];
        for (std::size_t j = 0; j < nb; ++j) out[j] += av * row[j];
    }
}

// Restricted exponential of one increment, written into a flat D-buffer:
// level n = delta^{⊗n} / n!.
template <typename Real>
inline void exp_into(const Real* delta, int dim, int depth,
                     const std::vector<std::size_t>& off, Real* out) {
    const std::size_t d = static_cast<std::size_t>(dim);
    for (std::size_t c = 0; c < d; ++c) out[off[0] + c] = delta[c];
    for (int n = 2; n <= depth; ++n) {
        const Real* prev = out + off[static_cast<std::size_t>(n) - 2];
        Real* cur = out + off[static_cast<std::size_t>(n) - 1];
        const std::size_t prev_size = off[static_cast<std::size_t>(n) - 1] - off[static_cast<std::size_t>(n) - 2];
        const Real inv = Real(1) / Real(n);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < prev_size; ++i) {
            const Real pv = prev[i] * inv;
            for (std::size_t c = 0; c < d; ++c) cur[pos++] = pv * delta[c];
        }
    }
}

// One Chen fold step, in place: sig := sig ⊠ exp_levels. Level n is
// updated before any lower level is read from, so descending order keeps
// the update in place.
template <typename Real>
inline void fold_step(Real* sig, const Real* exp_levels, int dim,
                      const std::vector<std::size_t>& off) {
    const int depth = static_cast<int>(off.size()) - 1;
    (void)dim;
    for (int n = depth; n >= 1; --n) {
        Real* sn = sig + off[static_cast<std::size_t>(n) - 1];
        const std::size_t sn_size = off[static_cast<std::size_t>(n)] - off[static_cast<std::size_t>(n) - 1];
        for (int j = 1; j < n; ++j) {
            const int i = n - j;
            const Real* si = sig + off[static_cast<std::size_t>(i) - 1];
            const std::size_t si_size = off[static_cast<std::size_t>(i)] - off[static_cast<std::size_t>(i) - 1];
            const Real* ej = exp_levels + off[static_cast<std::size_t>(j) - 1];
            const std::size_t ej_size = off[static_cast<std::size_t>(j)] - off[static_cast<std::size_t>(j) - 1];
            outer_accum(si, si_size, ej, ej_size, sn, Real(1));
        }
        const Real* en = exp_levels + off[static_cast<std::size_t>(n) - 1];
        for (std::size_t idx = 0; idx < sn_size; ++idx) sn[idx] += en[idx];
    }
}

// Sequential kernel: left fold of restricted exponentials per batch row.
// Writes the final flat signature into out (B, D); when stream_out is
// non-null additionally emits every fold state ((B, L-1, D)).
// Returns the number of fold steps per row, L - 1.
template <typename Real>
inline std::int64_t sequential_forward(const Real* paths, std::size_t batch, std::size_t len,
                                       int dim, int depth, Real* out, Real* stream_out) {
    const auto off = block_offsets(dim, depth);
    const std::size_t sig_size = off.back();
    const std::size_t d = static_cast<std::size_t>(dim);
    const std::size_t segments = len - 1;

    std::vector<Real> delta(d);
    std::vector<Real> exp_levels(sig_size);
    for (std::size_t b = 0; b < batch; ++b) {
        Real* sig = out + b * sig_size;
        for (std::size_t idx = 0; idx < sig_size; ++idx) sig[idx] = 0;
        const Real* row = paths + b * len * d;
        for (std::size_t k = 0; k < segments; ++k) {
            for (std::size_t c = 0; c < d; ++c) {
                delta[c] = row[(k + 1) * d + c] - row[k * d + c];
            }
            exp_into(delta.data(), dim, depth, off, exp_levels.data());
            fold_step(sig, exp_levels.data(), dim, off);
            if (stream_out != nullptr) {
                Real* dst = stream_out + (b * segments + k) * sig_size;
                for (std::size_t idx = 0; idx < sig_size; ++idx) dst[idx] = sig[idx];
            }
        }
    }
    return static_cast<std::int64_t>(segments);
}

// Per-degree state of the parallel kernel. levels[n-1] holds the prefix
// signatures of degree n for every position, shape (B, M, d^n); diag[n-1]
// holds the repeated-segment terms delta^{⊗n}/n! at every position.
template <typename Real>
struct ParallelState {
    std::size_t batch = 0;
    std::size_t segments = 0;
    std::vector<std::vector<Real>> levels;
    std::vector<std::vector<Real>> diag;
    std::int64_t scan_passes = 0;
};

// Refuses grid points whose intermediates (~B*L*d^depth scalars) exceed
// the cap; the sequential kernel has no such limit.
inline void check_parallel_memory(std::size_t batch, std::size_t len, int dim, int depth,
                                  std::size_t memory_cap) {
    long double scalars = static_cast<long double>(batch) * static_cast<long double>(len);
    for (int n = 0; n < depth; ++n) scalars *= static_cast<long double>(dim);
    if (scalars > static_cast<long double>(memory_cap)) {
        throw ResourceError(
            "parallel kernel: intermediate storage of ~" + std::to_string(static_cast<double>(scalars)) +
            " scalars exceeds cap " + std::to_string(memory_cap) +
            "; use the sequential kernel for this shape");
    }
}

// Parallel kernel: per-degree passes, one inclusive cumulative sum along
// the sequence axis per degree plus batched per-position tensor products.
// Degree-n contribution of position k is
//   sum over j = 1..n of T_{n-j}[k-1] ⊗ delta_k^{⊗j}/j!
// with the exclusive lower-degree prefix on the left (earlier time first)
// and T_0 = 1, so the cumulative sums reproduce the Chen fold exactly and
// already contain every prefix signature.
template <typename Real>
inline void parallel_forward(const Real* paths, std::size_t batch, std::size_t len, int dim,
                             int depth, std::size_t memory_cap, ParallelState<Real>& state) {
    check_parallel_memory(batch, len, dim, depth, memory_cap);

    const std::size_t d = static_cast<std::size_t>(dim);
    const std::size_t segments = len - 1;
    const std::size_t positions = batch * segments;
    const auto sizes = block_sizes(dim, depth);

    state.batch = batch;
    state.segments = segments;
    state.scan_passes = 0;
    state.levels.assign(static_cast<std::size_t>(depth), {});
    state.diag.assign(static_cast<std::size_t>(depth), {});
    for (int n = 0; n < depth; ++n) {
        state.levels[static_cast<std::size_t>(n)].assign(positions * sizes[static_cast<std::size_t>(n)], 0);
        state.diag[static_cast<std::size_t>(n)].assign(positions * sizes[static_cast<std::size_t>(n)], 0);
    }
    if (segments == 0) {
        // Zero-segment paths have the identity signature; the scans would
        // traverse empty arrays, so only the counter is touched.
        state.scan_passes = depth;
        return;
    }

    // Increments double as the degree-1 diagonal terms.
    std::vector<Real>& inc = state.diag[0];
    for (std::size_t b = 0; b < batch; ++b) {
        const Real* row = paths + b * len * d;
        for (std::size_t k = 0; k < segments; ++k) {
            Real* dst = inc.data() + (b * segments + k) * d;
            for (std::size_t c = 0; c < d; ++c) dst[c] = row[(k + 1) * d + c] - row[k * d + c];
        }
    }

    // Pre-divided increments delta/n! for n = 2..depth, shape (B, M, d).
    std::vector<std::vector<Real>> scaled(static_cast<std::size_t>(depth) + 1);
    Real factorial = 1;
    for (int n = 2; n <= depth; ++n) {
        factorial *= Real(n);
        auto& arr = scaled[static_cast<std::size_t>(n)];
        arr.resize(positions * d);
        const Real inv = Real(1) / factorial;
        for (std::size_t idx = 0; idx < arr.size(); ++idx) arr[idx] = inc[idx] * inv;
    }

    // diag_n = diag_{n-1} ⊗ (delta/n!) * (n-1)!  ==  delta^{⊗n}/n!
    Real prev_factorial = 1;
    for (int n = 2; n <= depth; ++n) {
        const std::size_t prev_size = sizes[static_cast<std::size_t>(n) - 2];
        const std::size_t cur_size = sizes[static_cast<std::size_t>(n) - 1];
        const std::vector<Real>& prev = state.diag[static_cast<std::size_t>(n) - 2];
        std::vector<Real>& cur = state.diag[static_cast<std::size_t>(n) - 1];
        const std::vector<Real>& sc = scaled[static_cast<std::size_t>(n)];
        for (std::size_t pos = 0; pos < positions; ++pos) {
            const Real* a = prev.data() + pos * prev_size;
            const Real* s = sc.data() + pos * d;
            Real* o = cur.data() + pos * cur_size;
            std::size_t w = 0;
            for (std::size_t i = 0; i < prev_size; ++i) {
                const Real av = a[i] * prev_factorial;
                for (std::size_t c = 0; c < d; ++c) o[w++] = av * s[c];
            }
        }
        prev_factorial *= Real(n);  // becomes n! for the next degree
    }

    // Degree 1: inclusive cumulative sum of the increments.
    {
        std::vector<Real>& t1 = state.levels[0];
        for (std::size_t idx = 0; idx < t1.size(); ++idx) t1[idx] = inc[idx];
        for (std::size_t b = 0; b < batch; ++b) {
            Real* base = t1.data() + b * segments * d;
            for (std::size_t k = 1; k < segments; ++k) {
                Real* cur = base + k * d;
                const Real* prev = base + (k - 1) * d;
                for (std::size_t c = 0; c < d; ++c) cur[c] += prev[c];
            }
        }
        state.scan_passes += 1;
    }

    // Degrees 2..N: build the per-position contributions, then scan.
    for (int n = 2; n <= depth; ++n) {
        const std::size_t cur_size = sizes[static_cast<std::size_t>(n) - 1];
        std::vector<Real>& tn = state.levels[static_cast<std::size_t>(n) - 1];
        const std::vector<Real>& dn = state.diag[static_cast<std::size_t>(n) - 1];
        for (std::size_t idx = 0; idx < tn.size(); ++idx) tn[idx] = dn[idx];

        for (int j = 1; j < n; ++j) {
            const int m = n - j;
            const std::size_t m_size = sizes[static_cast<std::size_t>(m) - 1];
            const std::size_t j_size = sizes[static_cast<std::size_t>(j) - 1];
            const std::vector<Real>& tm = state.levels[static_cast<std::size_t>(m) - 1];
            const std::vector<Real>& dj = state.diag[static_cast<std::size_t>(j) - 1];
            for (std::size_t b = 0; b < batch; ++b) {
                for (std::size_t k = 1; k < segments; ++k) {
                    const std::size_t pos = b * segments + k;
                    outer_accum(tm.data() + (pos - 1) * m_size, m_size,
                                dj.data() + pos * j_size, j_size,
                                tn.data() + pos * cur_size, Real(1));
                }
            }
        }

        for (std::size_t b = 0; b < batch; ++b) {
            Real* base = tn.data() + b * segments * cur_size;
            for (std::size_t k = 1; k < segments; ++k) {
                Real* cur = base + k * cur_size;
                const Real* prev = base + (k - 1) * cur_size;
                for (std::size_t idx = 0; idx < cur_size; ++idx) cur[idx] += prev[idx];
            }
        }
        state.scan_passes += 1;
    }
}

// Copies position k of every degree into a flat (D) row.
template <typename Real>
inline void gather_position(const ParallelState<Real>& state, int dim, int depth,
                            std::size_t b, std::size_t k, Real* out) {
    const auto sizes = block_sizes(dim, depth);
    std::size_t w = 0;
    for (int n = 0; n < depth; ++n) {
        const std::size_t sz = sizes[static_cast<std::size_t>(n)];
        const Real* src = state.levels[static_cast<std::size_t>(n)].data() + (b * state.segments + k) * sz;
        for (std::size_t idx = 0; idx < sz; ++idx) out[w++] = src[idx];
    }
}

}  // namespace sigkit::detail
