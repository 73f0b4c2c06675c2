#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "sigkit/errors.hpp"
#include "sigkit/kernels.hpp"
#include "sigkit/tensor_algebra.hpp"

using namespace sigkit;
using testutil::random_paths;

namespace {

SignatureBatch run(const PathBatch& paths, int depth, KernelKind kind) {
    return kind == KernelKind::Sequential ? signature_sequential(paths, depth)
                                          : signature_parallel(paths, depth);
}

PathBatch single_row(const PathBatch& paths, std::size_t b) {
    PathBatch one;
    one.batch = 1;
    one.len = paths.len;
    one.dim = paths.dim;
    const std::size_t stride = paths.len * static_cast<std::size_t>(paths.dim);
    one.values.assign(paths.values.begin() + static_cast<std::ptrdiff_t>(b * stride),
                      paths.values.begin() + static_cast<std::ptrdiff_t>((b + 1) * stride));
    return one;
}

// RAII save/restore for SIGKIT_ACCELERATED.
struct EnvGuard {
    std::string saved;
    bool was_set;
    EnvGuard() {
        const char* v = std::getenv("SIGKIT_ACCELERATED");
        was_set = v != nullptr;
        if (was_set) saved = v;
    }
    ~EnvGuard() {
        if (was_set) {
            setenv("SIGKIT_ACCELERATED", saved.c_str(), 1);
        } else {
            unsetenv("SIGKIT_ACCELERATED");
        }
    }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("increments difference consecutive points") {
    PathBatch paths;
    paths.batch = 1;
    paths.len = 3;
    paths.dim = 2;
    paths.values = {0.0, 0.0, 1.0, 0.0, 1.0, 1.0};
    const IncrementBatch inc = increments(paths);
    CHECK(inc.segments == 2);
    CHECK(inc.diffs == std::vector<double>{1.0, 0.0, 0.0, 1.0});
}

TEST_CASE("single point path has zero segments and identity signature") {
    const PathBatch paths = random_paths(21, 2, 1, 3);
    const IncrementBatch inc = increments(paths);
    CHECK(inc.segments == 0);
    for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
        const SignatureBatch sig = run(paths, 3, kind);
        CHECK(sig.flat.size() == 2 * sig_dim(3, 3));
        CHECK(testutil::max_abs(sig.flat) == 0.0);
    }
}

TEST_CASE("scaled increments divide by the degree factorial") {
    const PathBatch paths = random_paths(22, 1, 4, 2);
    const IncrementBatch inc = increments(paths);
    const ScaledIncrements scaled = scaled_increments(inc, 4);
    REQUIRE(scaled.per_degree.size() == 3);  // degrees 2..4
    for (std::size_t i = 0; i < inc.diffs.size(); ++i) {
        CHECK(scaled.per_degree[0][i] == doctest::Approx(inc.diffs[i] / 2.0));
        CHECK(scaled.per_degree[1][i] == doctest::Approx(inc.diffs[i] / 6.0));
        CHECK(scaled.per_degree[2][i] == doctest::Approx(inc.diffs[i] / 24.0));
    }
    CHECK(scaled_increments(inc, 1).per_degree.empty());
}

TEST_CASE("two point path equals the restricted exponential") {
    const PathBatch paths = random_paths(23, 1, 2, 3);
    std::vector<double> v(3);
    for (int c = 0; c < 3; ++c) {
        v[static_cast<std::size_t>(c)] = paths.at(0, 1, c) - paths.at(0, 0, c);
    }
    const FlatSignature expected = flatten(restricted_exp(v, 4));
    for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
        const SignatureBatch sig = run(paths, 4, kind);
        CHECK(testutil::max_abs_diff(sig.flat, expected.coeffs) < 1e-14);
    }
}

TEST_CASE("structural counters: fold steps L-1, scan passes N") {
    const PathBatch paths = random_paths(24, 2, 17, 2);
    KernelStats stats;
    signature_sequential(paths, 3, &stats);
    CHECK(stats.fold_steps == 16);
    CHECK(stats.scan_passes == 0);
    signature_parallel(paths, 3, &stats);
    CHECK(stats.fold_steps == 0);
    CHECK(stats.scan_passes == 3);

    const PathBatch longer = random_paths(25, 1, 200, 2);
    signature_sequential(longer, 3, &stats);
    CHECK(stats.fold_steps == 199);
    signature_parallel(longer, 3, &stats);
    CHECK(stats.scan_passes == 3);  // unchanged by sequence length
}

TEST_CASE("ten channels at depth four give 11110 coefficients per row") {
    const PathBatch paths = random_paths(26, 1, 3, 10);
    for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
        const SignatureBatch sig = run(paths, 4, kind);
        CHECK(sig.flat.size() == 11110);
        CHECK(sig.width() == 11110);
    }
}

TEST_CASE("kernels agree across a shape grid") {
    std::uint64_t seed = 1000;
    for (std::size_t batch : {1, 3}) {
        for (std::size_t len : {2, 5, 17, 64}) {
            for (int dim : {1, 2, 3, 5}) {
                for (int depth = 1; depth <= 5; ++depth) {
                    const PathBatch paths = random_paths(seed++, batch, len, dim, 0.5);
                    const SignatureBatch a = signature_sequential(paths, depth);
                    const SignatureBatch b = signature_parallel(paths, depth);
                    CAPTURE(batch);
                    CAPTURE(len);
                    CAPTURE(dim);
                    CAPTURE(depth);
                    CHECK(testutil::rel_diff(a.flat, b.flat) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("concatenation composes through the chen product") {
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        const PathBatch paths = random_paths(seed, 1, 11, 3, 0.5);
        const std::size_t split = 4;  // paths share point `split`
        PathBatch head, tail;
        head.batch = tail.batch = 1;
        head.dim = tail.dim = 3;
        head.len = split + 1;
        tail.len = paths.len - split;
        head.values.assign(paths.values.begin(),
                           paths.values.begin() + static_cast<std::ptrdiff_t>((split + 1) * 3));
        tail.values.assign(paths.values.begin() + static_cast<std::ptrdiff_t>(split * 3),
                           paths.values.end());

        for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
            const SignatureBatch full = run(paths, 4, kind);
            const SignatureBatch a = run(head, 4, kind);
            const SignatureBatch b = run(tail, 4, kind);
            FlatSignature fa{3, 4, a.flat}, fb{3, 4, b.flat};
            const FlatSignature joined = flatten(chen_product(unflatten(fa), unflatten(fb)));
            CHECK(testutil::max_abs_diff(full.flat, joined.coeffs) < 1e-10);
        }
    }
}

TEST_CASE("repeating a point leaves the signature unchanged") {
    for (std::uint64_t seed = 60; seed < 70; ++seed) {
        const PathBatch paths = random_paths(seed, 1, 6, 2);
        PathBatch padded;
        padded.batch = 1;
        padded.len = paths.len + 1;
        padded.dim = 2;
        // Duplicate point 2.
        padded.values.assign(paths.values.begin(), paths.values.begin() + 3 * 2);
        padded.values.insert(padded.values.end(), paths.values.begin() + 2 * 2,
                             paths.values.end());
        for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
            const SignatureBatch a = run(paths, 4, kind);
            const SignatureBatch b = run(padded, 4, kind);
            CHECK(testutil::max_abs_diff(a.flat, b.flat) < 1e-12);
        }
    }
}

TEST_CASE("translation leaves the signature unchanged") {
    for (std::uint64_t seed = 80; seed < 90; ++seed) {
        const PathBatch paths = random_paths(seed, 2, 7, 3);
        PathBatch moved = paths;
        for (std::size_t i = 0; i < moved.values.size(); ++i) {
            moved.values[i] += (i % 3 == 0) ? 2.0 : -1.5;  // constant per channel
        }
        for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
            const SignatureBatch a = run(paths, 3, kind);
            const SignatureBatch b = run(moved, 3, kind);
            CHECK(testutil::max_abs_diff(a.flat, b.flat) < 1e-12);
        }
    }
}

TEST_CASE("scaling the path scales degree n by lambda^n") {
    for (double lambda : {-1.0, 0.5, 2.0}) {
        for (std::uint64_t seed = 100; seed < 110; ++seed) {
            const PathBatch paths = random_paths(seed, 1, 6, 2);
            PathBatch scaled = paths;
            for (double& x : scaled.values) x *= lambda;
            const auto off = level_offsets(2, 4);
            for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
                const SignatureBatch a = run(paths, 4, kind);
                const SignatureBatch b = run(scaled, 4, kind);
                double factor = 1.0;
                for (int n = 1; n <= 4; ++n) {
                    factor *= lambda;
                    for (std::size_t i = off[static_cast<std::size_t>(n) - 1];
                         i < off[static_cast<std::size_t>(n)]; ++i) {
                        CHECK(b.flat[i] == doctest::Approx(factor * a.flat[i]).epsilon(1e-10));
                    }
                }
            }
        }
    }
}

TEST_CASE("time reversal gives the chen inverse") {
    for (std::uint64_t seed = 120; seed < 130; ++seed) {
        const PathBatch paths = random_paths(seed, 1, 7, 2, 0.5);
        PathBatch rev = paths;
        for (std::size_t t = 0; t < paths.len; ++t) {
            for (int c = 0; c < 2; ++c) {
                rev.values[t * 2 + static_cast<std::size_t>(c)] =
                    paths.at(0, paths.len - 1 - t, c);
            }
        }
        for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
            const SignatureBatch a = run(paths, 4, kind);
            const SignatureBatch b = run(rev, 4, kind);
            FlatSignature fa{2, 4, a.flat}, fb{2, 4, b.flat};
            const TruncatedTensor prod = chen_product(unflatten(fa), unflatten(fb));
            double m = 0.0;
            for (const auto& level : prod.levels) m = std::max(m, testutil::max_abs(level));
            CHECK(m < 1e-10);
        }
    }
}

TEST_CASE("batched run matches row-by-row runs, partial-batch sized") {
    const PathBatch paths = random_paths(130, 65, 9, 2);
    for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
        const SignatureBatch all = run(paths, 3, kind);
        const std::size_t width = all.width();
        for (std::size_t b : {std::size_t{0}, std::size_t{17}, std::size_t{64}}) {
            const SignatureBatch one = run(single_row(paths, b), 3, kind);
            CHECK(testutil::max_abs_diff(one.flat, all.row(b)) == 0.0);
        }
        CHECK(all.flat.size() == 65 * width);
    }
}

TEST_CASE("parallel kernel refuses shapes over the memory cap") {
    const PathBatch paths = random_paths(140, 4, 32, 3);
    CHECK_THROWS_AS(signature_parallel(paths, 3, nullptr, /*memory_cap=*/1000), ResourceError);
    // Same shape passes under the default cap.
    CHECK_NOTHROW(signature_parallel(paths, 3));
}

TEST_CASE("stream prefixes match full signatures of truncated paths") {
    const PathBatch paths = random_paths(150, 2, 9, 2);
    for (KernelKind kind : {KernelKind::Sequential, KernelKind::Parallel}) {
        const PrefixSignatureBatch stream = signature_stream(paths, 3, kind);
        REQUIRE(stream.prefixes == paths.len - 1);
        for (std::size_t b = 0; b < paths.batch; ++b) {
            for (std::size_t k = 0; k < stream.prefixes; ++k) {
                PathBatch prefix;
                prefix.batch = 1;
                prefix.len = k + 2;
                prefix.dim = 2;
                const std::size_t stride = paths.len * 2;
                prefix.values.assign(
                    paths.values.begin() + static_cast<std::ptrdiff_t>(b * stride),
                    paths.values.begin() + static_cast<std::ptrdiff_t>(b * stride + (k + 2) * 2));
                const SignatureBatch direct = run(prefix, 3, kind);
                CHECK(testutil::max_abs_diff(stream.row(b, k), direct.flat) < 1e-12);
            }
        }
    }
}

TEST_CASE("stream needs at least two points") {
    const PathBatch paths = random_paths(151, 1, 1, 2);
    CHECK_THROWS_AS(signature_stream(paths, 2), DomainError);
}

TEST_CASE("kernel dispatch follows hint, capability and length") {
    ExecutionCaps plain;  // accelerated = false
    ExecutionCaps accel;
    accel.accelerated = true;

    CHECK(select_kernel(KernelKind::Sequential, accel, 1000) == KernelKind::Sequential);
    CHECK(select_kernel(KernelKind::Parallel, plain, 2) == KernelKind::Parallel);
    CHECK(select_kernel(KernelKind::Auto, accel, 64) == KernelKind::Parallel);
    CHECK(select_kernel(KernelKind::Auto, accel, 63) == KernelKind::Sequential);
    CHECK(select_kernel(KernelKind::Auto, plain, 1000) == KernelKind::Sequential);

    accel.parallel_min_len = 10;
    CHECK(select_kernel(KernelKind::Auto, accel, 10) == KernelKind::Parallel);
}

TEST_CASE("capability detection reads SIGKIT_ACCELERATED") {
    EnvGuard guard;
    unsetenv("SIGKIT_ACCELERATED");
    CHECK_FALSE(ExecutionCaps::detect().accelerated);
    setenv("SIGKIT_ACCELERATED", "1", 1);
    CHECK(ExecutionCaps::detect().accelerated);
    setenv("SIGKIT_ACCELERATED", "0", 1);
    CHECK_FALSE(ExecutionCaps::detect().accelerated);
}

TEST_CASE("kernel names round-trip") {
    CHECK(std::string(kernel_name(KernelKind::Sequential)) == "sequential");
    CHECK(std::string(kernel_name(KernelKind::Parallel)) == "parallel");
    CHECK(std::string(kernel_name(KernelKind::Auto)) == "auto");
    CHECK(kernel_from_name("sequential") == KernelKind::Sequential);
    CHECK(kernel_from_name("parallel") == KernelKind::Parallel);
    CHECK(kernel_from_name("auto") == KernelKind::Auto);
    CHECK_THROWS_AS(kernel_from_name("gpu"), DomainError);
}

TEST_CASE("invalid shapes and depths are rejected") {
    PathBatch paths;
    paths.batch = 1;
    paths.len = 3;
    paths.dim = 2;
    paths.values.assign(5, 0.0);  // should be 6
    CHECK_THROWS_AS(signature_sequential(paths, 2), DomainError);
    paths.values.assign(6, 0.0);
    CHECK_THROWS_AS(signature_sequential(paths, 0), DomainError);
    CHECK_THROWS_AS(signature_parallel(paths, -1), DomainError);
    paths.dim = 0;
    CHECK_THROWS_AS(signature_sequential(paths, 2), DomainError);
}

}  // TEST_SUITE
