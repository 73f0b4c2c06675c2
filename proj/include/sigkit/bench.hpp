#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sigkit/kernels.hpp"

namespace sigkit {

enum class Dtype { F64, F32 };

const char* dtype_name(Dtype dtype);

struct GridPoint {
    std::size_t batch = 0;
    std::size_t seq_len = 0;
    int dim = 0;
    int depth = 0;
};

struct BenchConfig {
    std::vector<std::size_t> batch_sizes{128};
    std::vector<std::size_t> seq_lens{100};
    std::vector<int> dims{3};
    std::vector<int> depths{4};
    std::vector<KernelKind> kernels{KernelKind::Sequential, KernelKind::Parallel};
    std::vector<GridPoint> points;  // when non-empty, overrides the cross product
    int repeats = 20;
    int warmup = 3;
    Dtype dtype = Dtype::F64;
    std::uint64_t seed = 42;
    std::size_t memory_cap = kDefaultParallelMemoryCap;
};

/// One timing measurement. counter carries the kernel's structural count:
/// fold steps (= L-1) for sequential, scan passes (= depth) for parallel.
/// Grid points the parallel kernel refused on memory grounds come back
/// with skipped set and empty statistics.
struct BenchRecord {
    KernelKind kernel = KernelKind::Sequential;
    std::size_t batch = 0;
    std::size_t seq_len = 0;
    int dim = 0;
    int depth = 0;
    Dtype dtype = Dtype::F64;
    int reps = 0;
    double mean_ms = 0.0;
    double std_ms = 0.0;
    double min_ms = 0.0;
    std::int64_t counter = 0;
    bool skipped = false;
    std::string skip_reason;
    double checksum = 0.0;  // sum of the first output row; seed-reproducible
    int threads = 1;        // kernels run single-threaded
};

enum class BenchFormat { Csv, Markdown };

/// The 15-configuration one-factor-at-a-time grid around
/// (batch 128, seq 100, depth 4), at the given channel count.
std::vector<GridPoint> paper_grid_points(int dim);

/// Seeded random-walk paths (increments scaled by 1/sqrt(L)).
PathBatch make_bench_paths(std::uint64_t seed, std::size_t batch, std::size_t seq_len, int dim);

/// Times every grid point for every configured kernel: warmup runs, then
/// `repeats` timed executions of the kernel call alone. Grid points run
/// serially.
std::vector<BenchRecord> run_grid(const BenchConfig& config);

void emit(const std::vector<BenchRecord>& records, BenchFormat format, std::ostream& out);

/// Writes to a file; unwritable paths raise std::ios_base::failure.
void emit(const std::vector<BenchRecord>& records, BenchFormat format, const std::string& path);

}  // namespace sigkit
