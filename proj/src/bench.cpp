#include "sigkit/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "sigkit/detail/rng.hpp"
#include "sigkit/detail/sig_core.hpp"
#include "sigkit/errors.hpp"
#include "sigkit/tensor_algebra.hpp"

namespace sigkit {

namespace {

struct RunOutcome {
    double ms = 0.0;
    std::int64_t counter = 0;
    double checksum = 0.0;
};

// One timed kernel execution on pre-built inputs. Only the kernel call
// sits between the clock reads; the f32 variant exercises the same cores
// at single precision.
template <typename Real>
RunOutcome run_once(const std::vector<Real>& values, std::size_t batch, std::size_t seq_len,
                    int dim, int depth, KernelKind kernel, std::size_t memory_cap) {
    const std::size_t width = sig_dim(dim, depth);
    RunOutcome outcome;
    if (kernel == KernelKind::Sequential) {
        std::vector<Real> out(batch * width);
        const auto start = std::chrono::steady_clock::now();
        outcome.counter = detail::sequential_forward(values.data(), batch, seq_len, dim, depth,
                                                     out.data(), static_cast<Real*>(nullptr));
        const auto stop = std::chrono::steady_clock::now();
        outcome.ms = std::chrono::duration<double, std::milli>(stop - start).count();
        for (std::size_t idx = 0; idx < width; ++idx) outcome.checksum += static_cast<double>(out[idx]);
    } else {
        detail::ParallelState<Real> state;
        const auto start = std::chrono::steady_clock::now();
        detail::parallel_forward(values.data(), batch, seq_len, dim, depth, memory_cap, state);
        const auto stop = std::chrono::steady_clock::now();
        outcome.ms = std::chrono::duration<double, std::milli>(stop - start).count();
        outcome.counter = state.scan_passes;
        if (state.segments > 0) {
            std::vector<Real> row(width);
            detail::gather_position(state, dim, depth, std::size_t{0}, state.segments - 1, row.data());
            for (std::size_t idx = 0; idx < width; ++idx) outcome.checksum += static_cast<double>(row[idx]);
        }
    }
    return outcome;
}

template <typename Real>
BenchRecord measure_point(const PathBatch& paths, const GridPoint& point, KernelKind kernel,
                          const BenchConfig& config) {
    BenchRecord rec;
    rec.kernel = kernel;
    rec.batch = point.batch;
    rec.seq_len = point.seq_len;
    rec.dim = point.dim;
    rec.depth = point.depth;
    rec.dtype = config.dtype;
    rec.reps = config.repeats;

    std::vector<Real> values(paths.values.size());
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        values[idx] = static_cast<Real>(paths.values[idx]);
    }

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(config.repeats));
    try {
        for (int w = 0; w < config.warmup; ++w) {
            run_once(values, point.batch, point.seq_len, point.dim, point.depth, kernel,
                     config.memory_cap);
        }
        for (int r = 0; r < config.repeats; ++r) {
            const RunOutcome outcome = run_once(values, point.batch, point.seq_len, point.dim,
                                                point.depth, kernel, config.memory_cap);
            samples.push_back(outcome.ms);
            rec.counter = outcome.counter;
            rec.checksum = outcome.checksum;
        }
    } catch (const ResourceError& err) {
        rec.skipped = true;
        rec.skip_reason = err.what();
        return rec;
    }

    double sum = 0.0;
    rec.min_ms = samples.empty() ? 0.0 : samples.front();
    for (double s : samples) {
        sum += s;
        if (s < rec.min_ms) rec.min_ms = s;
    }
    rec.mean_ms = samples.empty() ? 0.0 : sum / static_cast<double>(samples.size());
    double sq = 0.0;
    for (double s : samples) sq += (s - rec.mean_ms) * (s - rec.mean_ms);
    rec.std_ms = samples.size() > 1 ? std::sqrt(sq / static_cast<double>(samples.size() - 1)) : 0.0;
    return rec;
}

void write_csv_number(std::ostream& out, double v) {
    std::ostringstream ss;
    ss << std::setprecision(9) << v;
    out << ss.str();
}

}  // namespace

const char* dtype_name(Dtype dtype) {
    return dtype == Dtype::F32 ? "f32" : "f64";
}

std::vector<GridPoint> paper_grid_points(int dim) {
    std::vector<GridPoint> points;
    for (std::size_t batch : {32, 64, 128, 256, 512}) {
        points.push_back({batch, 100, dim, 4});
    }
    for (std::size_t seq : {50, 100, 200, 500, 1000}) {
        points.push_back({128, seq, dim, 4});
    }
    for (int depth = 2; depth <= 6; ++depth) {
        points.push_back({128, 100, dim, depth});
    }
    return points;
}

PathBatch make_bench_paths(std::uint64_t seed, std::size_t batch, std::size_t seq_len, int dim) {
    PathBatch paths;
    paths.batch = batch;
    paths.len = seq_len;
    paths.dim = dim;
    paths.values.assign(batch * seq_len * static_cast<std::size_t>(dim), 0.0);
    // Mix shape into the seed so each grid point gets its own walk, but
    // the same (seed, shape) always regenerates identical inputs.
    std::uint64_t mixed = detail::splitmix64(seed);
    mixed = detail::splitmix64(mixed ^ batch);
    mixed = detail::splitmix64(mixed ^ seq_len);
    mixed = detail::splitmix64(mixed ^ static_cast<std::uint64_t>(dim));
    std::mt19937_64 rng(mixed);
    std::normal_distribution<double> normal(0.0, 1.0);
    // Random walk with 1/sqrt(L) step scale keeps total displacement O(1)
    // so deep truncation levels stay in a sane numeric range.
    const double scale = seq_len > 1 ? 1.0 / std::sqrt(static_cast<double>(seq_len - 1)) : 1.0;
    const std::size_t d = static_cast<std::size_t>(dim);
    for (std::size_t b = 0; b < batch; ++b) {
        double* row = paths.values.data() + b * seq_len * d;
        for (std::size_t t = 1; t < seq_len; ++t) {
            for (std::size_t c = 0; c < d; ++c) {
                row[t * d + c] = row[(t - 1) * d + c] + scale * normal(rng);
            }
        }
    }
    return paths;
}

std::vector<BenchRecord> run_grid(const BenchConfig& config) {
    std::vector<GridPoint> points = config.points;
    if (points.empty()) {
        for (std::size_t batch : config.batch_sizes) {
            for (std::size_t seq : config.seq_lens) {
                for (int dim : config.dims) {
                    for (int depth : config.depths) {
                        points.push_back({batch, seq, dim, depth});
                    }
                }
            }
        }
    }

    std::vector<BenchRecord> records;
    records.reserve(points.size() * config.kernels.size());
    for (const GridPoint& point : points) {
        const PathBatch paths = make_bench_paths(config.seed, point.batch, point.seq_len, point.dim);
        for (KernelKind kernel : config.kernels) {
            if (config.dtype == Dtype::F32) {
                records.push_back(measure_point<float>(paths, point, kernel, config));
            } else {
                records.push_back(measure_point<double>(paths, point, kernel, config));
            }
        }
    }
    return records;
}

void emit(const std::vector<BenchRecord>& records, BenchFormat format, std::ostream& out) {
    if (format == BenchFormat::Csv) {
        out << "kernel,batch,seq_len,dim,depth,dtype,reps,mean_ms,std_ms,min_ms,counter\n";
        for (const BenchRecord& rec : records) {
            out << kernel_name(rec.kernel) << ',' << rec.batch << ',' << rec.seq_len << ','
                << rec.dim << ',' << rec.depth << ',' << dtype_name(rec.dtype) << ',' << rec.reps
                << ',';
            if (rec.skipped) {
                out << ",,,";  // mean, std, min and counter stay empty
            } else {
                write_csv_number(out, rec.mean_ms);
                out << ',';
                write_csv_number(out, rec.std_ms);
                out << ',';
                write_csv_number(out, rec.min_ms);
                out << ',' << rec.counter;
            }
            out << '\n';
        }
    } else {
        out << "| kernel | batch | seq_len | dim | depth | dtype | reps | mean_ms | std_ms | min_ms | counter |\n";
        out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
        for (const BenchRecord& rec : records) {
            out << "| " << kernel_name(rec.kernel) << " | " << rec.batch << " | " << rec.seq_len
                << " | " << rec.dim << " | " << rec.depth << " | " << dtype_name(rec.dtype)
                << " | " << rec.reps << " | ";
            if (rec.skipped) {
                out << "skipped | — | — | — |";
            } else {
                std::ostringstream ss;
                ss << std::fixed << std::setprecision(3) << rec.mean_ms << " | " << rec.std_ms
                   << " | " << rec.min_ms;
                out << ss.str() << " | " << rec.counter << " |";
            }
            out << '\n';
        }
    }
}

void emit(const std::vector<BenchRecord>& records, BenchFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::ios_base::failure("cannot open for writing: " + path);
    }
    emit(records, format, out);
    out.flush();
    if (!out) {
        throw std::ios_base::failure("write failed: " + path);
    }
}

}  // namespace sigkit
