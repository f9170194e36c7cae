#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace hpdet {

inline constexpr const char* kVersion = "hpdet 0.1.0";

enum class Command {
    kEvalKernel,
    kSample,
    kEstimateCorr,
    kConverge,
    kDisjointness,
    kGamma2,
    kPainleve,
    kSelftest,
};

struct RunConfig {
    Command command = Command::kSelftest;
    double s_re = 0.0, s_im = 0.0;
    double s2_re = 1.0, s2_im = 0.0;  // disjointness partner
    int n = 10;
    std::vector<int> n_list;
    std::uint64_t seed = 1;
    std::size_t sample_count = 1000;
    int threads = 0;  // 0: hardware concurrency
    std::string mode = "limit";  // eval-kernel: finite|limit|sine
    double grid_lo = 0.1, grid_hi = 2.0;
    int grid_count = 20;
    int corr_k = 1;
    std::string boxes;     // "lo:hi[:lo:hi...][;box2...]"
    std::string in_path;   // estimate-corr input archive
    std::vector<double> t_list;
    std::vector<double> eps_list;
    int n_max = 10000;     // disjointness
    int order = 140;       // Nystrom order
    std::string out = "hpdet_out.csv";
};

// Parse argv-style arguments (argv[0] excluded). Throws UsageError on any
// violated invariant; supports an INI config file via --config with
// command-line flags taking precedence.
RunConfig parse_config(const std::vector<std::string>& args);

// Execute; returns the process exit status (0 on success). Writes result
// files plus a key=value manifest with a content hash next to each output.
int run(const RunConfig& config);

// Exit-code mapping used by the binary: 0 ok, 1 selftest failure, 2 usage,
// 3 domain, 4 numerical, 5 i/o.
int main_entry(const std::vector<std::string>& args);

}  // namespace hpdet
