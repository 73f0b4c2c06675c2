// One-shot signature computation over CSV path files.
//
// Input is a single CSV (rows = time steps, columns = channels) or a
// directory of such files, which are batched together and must share one
// shape. Prints the flattened signature, one line per path; --stream
// prints the L-1 prefix rows instead, --oracle swaps in the brute-force
// enumerator (small inputs only).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sigkit/errors.hpp"
#include "sigkit/kernels.hpp"
#include "sigkit/oracle.hpp"
#include "sigkit/path_io.hpp"

namespace {

sigkit::PathBatch load_input(const std::string& input) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    if (fs::is_directory(input)) {
        for (const auto& entry : fs::directory_iterator(input)) {
            if (entry.is_regular_file()) files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw sigkit::ParseError("directory has no files: " + input);
    } else {
        files.push_back(input);
    }

    sigkit::PathBatch batch;
    for (const std::string& file : files) {
        const sigkit::PathData data = sigkit::read_path_csv_file(file);
        if (batch.batch == 0) {
            batch.len = data.len;
            batch.dim = data.dim;
        } else if (data.len != batch.len || data.dim != batch.dim) {
            throw sigkit::ParseError(file + ": shape (" + std::to_string(data.len) + ", " +
                                     std::to_string(data.dim) + ") differs from first file (" +
                                     std::to_string(batch.len) + ", " + std::to_string(batch.dim) +
                                     "); batched files must agree");
        }
        batch.values.insert(batch.values.end(), data.values.begin(), data.values.end());
        batch.batch += 1;
    }
    return batch;
}

void print_row(std::ostream& out, const double* row, std::size_t width) {
    out << std::setprecision(12);
    for (std::size_t i = 0; i < width; ++i) {
        if (i > 0) out << ',';
        out << row[i];
    }
    out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"signature of CSV paths"};
    std::string input;
    int depth = 0;
    std::string kernel_name = "auto";
    bool stream = false;
    bool oracle = false;
    std::string out_path;
    app.add_option("--input", input, "CSV file or directory of CSV files")->required();
    app.add_option("--depth", depth, "truncation depth (>= 1)")
        ->required()
        ->check(CLI::Range(1, 1 << 30));
    app.add_option("--kernel", kernel_name, "sequential, parallel or auto")
        ->check(CLI::IsMember({"sequential", "parallel", "auto"}));
    app.add_flag("--stream", stream, "print all L-1 prefix signatures per path");
    app.add_flag("--oracle", oracle, "use the brute-force enumerator (small inputs)");
    app.add_option("--out", out_path, "write to file instead of stdout");
    CLI11_PARSE(app, argc, argv);

    if (stream && oracle) {
        std::cerr << "error: --oracle has no streaming mode\n";
        return 1;
    }

    try {
        const sigkit::PathBatch paths = load_input(input);
        const sigkit::KernelKind kernel = sigkit::kernel_from_name(kernel_name);

        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) {
                std::cerr << "error: cannot open for writing: " << out_path << '\n';
                return 1;
            }
        }
        std::ostream& out = out_path.empty() ? std::cout : file;

        if (oracle) {
            const std::size_t d = static_cast<std::size_t>(paths.dim);
            for (std::size_t b = 0; b < paths.batch; ++b) {
                std::vector<double> one(paths.values.begin() + static_cast<std::ptrdiff_t>(b * paths.len * d),
                                        paths.values.begin() + static_cast<std::ptrdiff_t>((b + 1) * paths.len * d));
                const sigkit::FlatSignature sig =
                    sigkit::signature_bruteforce(one, paths.len, paths.dim, depth);
                print_row(out, sig.coeffs.data(), sig.coeffs.size());
            }
        } else if (stream) {
            const sigkit::PrefixSignatureBatch prefixes =
                sigkit::signature_stream(paths, depth, kernel);
            const std::size_t width = prefixes.width();
            for (std::size_t b = 0; b < prefixes.batch; ++b) {
                for (std::size_t k = 0; k < prefixes.prefixes; ++k) {
                    print_row(out, prefixes.flat.data() + (b * prefixes.prefixes + k) * width, width);
                }
            }
        } else {
            const sigkit::SignatureBatch sig = sigkit::signature(paths, depth, kernel);
            const std::size_t width = sig.width();
            for (std::size_t b = 0; b < sig.batch; ++b) {
                print_row(out, sig.flat.data() + b * width, width);
            }
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
