#include "hpdet/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hpdet/ergodic.hpp"
#include "hpdet/hua_pickrell.hpp"
#include "hpdet/limit_kernel.hpp"
#include "hpdet/pseudo_jacobi.hpp"
#include "hpdet/specialfns.hpp"
#include "hpdet/stats.hpp"

namespace hpdet {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::strtod(item.c_str(), nullptr));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_double_list(text)) out.push_back(int(v));
    return out;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= std::uint64_t(static_cast<unsigned char>(c));
        h *= 1099511628211ULL;
    }
    return h;
}

std::string resolved_out(const std::string& out) {
    const char* dir = std::getenv("HPDET_OUTPUT_DIR");
    if (dir != nullptr && *dir != '\0' && !std::filesystem::path(out).is_absolute()) {
        return (std::filesystem::path(dir) / out).string();
    }
    return out;
}

void write_manifest(const std::string& out_path, const RunConfig& c,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ofstream m(out_path + ".manifest");
    m << "version=" << kVersion << '\n';
    m << "s_re=" << fmt(c.s_re) << '\n';
    m << "s_im=" << fmt(c.s_im) << '\n';
    m << "n=" << c.n << '\n';
    m << "seed=" << c.seed << '\n';
    m << "sample_count=" << c.sample_count << '\n';
    m << "output=" << out_path << '\n';
    for (const auto& [k, v] : extra) m << k << '=' << v << '\n';
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(out_path)));
    m << "content_hash=fnv1a64:" << hash << '\n';
}

void parallel_indexed(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min<std::size_t>(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<Box> parse_boxes(const std::string& text, int k) {
    std::vector<Box> boxes;
    std::stringstream ss(text);
    std::string one;
    while (std::getline(ss, one, ';')) {
        if (one.empty()) continue;
        std::vector<double> vals;
        std::stringstream bs(one);
        std::string num;
        while (std::getline(bs, num, ':')) vals.push_back(std::strtod(num.c_str(), nullptr));
        if (int(vals.size()) != 2 * k) {
            throw UsageError("boxes: each box needs 2k colon-separated bounds");
        }
        Box b;
        for (int i = 0; i < k; ++i) b.sides.push_back({vals[2 * i], vals[2 * i + 1]});
        boxes.push_back(std::move(b));
    }
    if (boxes.empty()) throw UsageError("boxes: at least one box required");
    return boxes;
}

int cmd_eval_kernel(const RunConfig& c) {
    const std::string out = resolved_out(c.out);
    std::ofstream f(out);
    if (!f) throw Error("cannot open output " + out);
    cplx s{c.s_re, c.s_im};
    f << "# " << kVersion << " eval-kernel mode=" << c.mode << "\n";
    f << "# x1,x2,K\n";
    std::vector<double> grid(c.grid_count);
    for (int i = 0; i < c.grid_count; ++i) {
        grid[i] = c.grid_lo + (c.grid_hi - c.grid_lo) * i / std::max(1, c.grid_count - 1);
    }
    LimitKernelParams lp(s);
    for (double x1 : grid) {
        for (double x2 : grid) {
            double k;
            if (c.mode == "finite") {
                EnsembleParams ep(s, c.n);
                k = cd_kernel(x1, x2, ep);
            } else if (c.mode == "sine") {
                k = sine_kernel_from_limit(x1, x2, lp);
            } else {
                k = kernel_inf(x1, x2, lp);
            }
            f << fmt(x1) << ',' << fmt(x2) << ',' << fmt(k) << '\n';
        }
    }
    f.close();
    write_manifest(out, c, {{"command", "eval-kernel"}, {"mode", c.mode}});
    return 0;
}

int cmd_sample(const RunConfig& c) {
    const std::string out = resolved_out(c.out);
    cplx s{c.s_re, c.s_im};
    std::vector<SampleRecord> recs(c.sample_count);
    parallel_indexed(c.sample_count, c.threads, [&](std::size_t i) {
        SeededRng rng = SeededRng::derive(c.seed, i);
        auto chain = sample_spectrum_chain(c.n, s, rng);
        recs[i] = SampleRecord{c.seed + i, c.n, s, chain.back()};
    });
    write_sample_archive(out, recs);
    write_manifest(out, c, {{"command", "sample"}});
    return 0;
}

int cmd_estimate_corr(const RunConfig& c) {
    const std::string out = resolved_out(c.out);
    auto recs = read_sample_archive(c.in_path);
    if (recs.empty()) throw Error("estimate-corr: empty archive");
    std::vector<PointConfiguration> configs;
    configs.reserve(recs.size());
    for (const auto& r : recs) {
        std::vector<double> pts;
        for (double lam : r.eigenvalues) {
            double x = lam / r.n;
            if (x != 0.0) pts.push_back(x);
        }
        configs.push_back(PointConfiguration::from(std::move(pts)));
    }
    auto boxes = parse_boxes(c.boxes, c.corr_k);
    auto est = estimate_correlation(configs, boxes, c.corr_k);
    std::ofstream f(out);
    if (!f) throw Error("cannot open output " + out);
    f << "# " << kVersion << " estimate-corr k=" << c.corr_k << "\n";
    f << "# box_bounds...,count,stderr\n";
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        for (auto [lo, hi] : boxes[b].sides) f << fmt(lo) << ',' << fmt(hi) << ',';
        f << fmt(est.mean[b]) << ',' << fmt(est.stderr_[b]) << '\n';
    }
    f.close();
    write_manifest(out, c, {{"command", "estimate-corr"}, {"input", c.in_path}});
    return 0;
}

int cmd_converge(const RunConfig& c) {
    const std::string out = resolved_out(c.out);
    std::ofstream f(out);
    if (!f) throw Error("cannot open output " + out);
    cplx s{c.s_re, c.s_im};
    LimitKernelParams lp(s);
    std::vector<int> ns = c.n_list.empty() ? std::vector<int>{25, 50, 100, 200} : c.n_list;
    f << "# " << kVersion << " converge\n";
    f << "# N,x1,x2,gap,gap_sine_gauge\n";
    std::vector<double> grid(c.grid_count);
    for (int i = 0; i < c.grid_count; ++i) {
        grid[i] = c.grid_lo + (c.grid_hi - c.grid_lo) * i / std::max(1, c.grid_count - 1);
    }
    for (int n : ns) {
        for (double x1 : grid) {
            for (double x2 : grid) {
                double g = kernel_convergence_gap(x1, x2, lp, n);
                double gs = M_PI * std::abs(x1 * x2) * g;
                f << n << ',' << fmt(x1) << ',' << fmt(x2) << ',' << fmt(g) << ',' << fmt(gs)
                  << '\n';
            }
        }
    }
    f.close();
    write_manifest(out, c, {{"command", "converge"}});
    return 0;
}

int cmd_disjointness(const RunConfig& c) {
    const std::string out = resolved_out(c.out);
    cplx s1{c.s_re, c.s_im}, s2{c.s2_re, c.s2_im};
    auto rep = kakutani_divergence_report(s1, s2, c.n_max);
    std::ofstream f(out);
    if (!f) throw Error("cannot open output " + out);
    f << "# " << kVersion << " disjointness\n";
    f << "# M,log_partial_product\n";
    for (std::size_t i = 0; i < rep.log_partial_products.size(); ++i) {
        f << (i + 2) << ',' << fmt(rep.log_partial_products[i]) << '\n';
    }
    f.close();
    std::cout << "fitted_slope=" << fmt(rep.fitted_slope)
              << " limit_rate=" << fmt(-rep.limit_rate) << "\n";
    write_manifest(out, c,
                   {{"command", "disjointness"},
                    {"fitted_slope", fmt(rep.fitted_slope)},
                    {"s2_re", fmt(c.s2_re)},
                    {"s2_im", fmt(c.s2_im)}});
    return 0;
}

int cmd_gamma2(const RunConfig& c) {
    const std::string out = resolved_out(c.out);
    cplx s{c.s_re, c.s_im};
    std::vector<int> ns = c.n_list.empty() ? std::vector<int>{50, 100} : c.n_list;
    std::vector<double> eps = c.eps_list.empty() ? std::vector<double>{0.2, 0.1, 0.05} : c.eps_list;
    int n_top = *std::max_element(ns.begin(), ns.end());
    std::vector<std::vector<std::vector<double>>> spectra(c.sample_count);
    parallel_indexed(c.sample_count, c.threads, [&](std::size_t i) {
        SeededRng rng = SeededRng::derive(c.seed, i);
        auto chain = sample_spectrum_chain(n_top, s, rng);
        std::vector<std::vector<double>> per_n;
        per_n.reserve(ns.size());
        for (int n : ns) per_n.push_back(chain[n - 1]);
        spectra[i] = std::move(per_n);
    });
    auto rep = gamma2_diagnostic(spectra, ns, eps, s);
    std::ofstream f(out);
    if (!f) throw Error("cannot open output " + out);
    f << "# " << kVersion << " gamma2\n";
    f << "# N,eps,mc_mean,mc_stderr,closed_form_s0\n";
    for (const auto& cell : rep.cells) {
        f << cell.n << ',' << fmt(cell.eps) << ',' << fmt(cell.mc_mean) << ','
          << fmt(cell.mc_stderr) << ',' << fmt(cell.closed_form) << '\n';
    }
    f.close();
    write_manifest(out, c, {{"command", "gamma2"}});
    return 0;
}

int cmd_painleve(const RunConfig& c) {
    const std::string out = resolved_out(c.out);
    cplx s{c.s_re, c.s_im};
    LimitKernelParams lp(s);
    std::vector<double> ts = c.t_list.empty() ? std::vector<double>{0.8, 1.0, 2.0} : c.t_list;
    std::ofstream f(out);
    if (!f) throw Error("cannot open output " + out);
    f << "# " << kVersion << " painleve\n";
    f << "# t,residual\n";
    for (double t : ts) f << fmt(t) << ',' << fmt(painleve_residual(t, lp)) << '\n';
    f.close();
    write_manifest(out, c, {{"command", "painleve"}});
    return 0;
}

int cmd_selftest(const RunConfig& c) {
    int fails = 0;
    auto report = [&](const char* name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++fails;
    };
    SeededRng rng(c.seed);

    {  // contiguous relation of the terminating Gauss series
        bool ok = true;
        for (int rep = 0; rep < 50 && ok; ++rep) {
            int m = 1 + int(rng.uniform() * 9);
            cplx b{rng.uniform() * 4 - 2, rng.uniform() * 4 - 2};
            cplx cc{1.0 + rng.uniform() * 3, rng.uniform() * 2 - 1};
            cplx z{rng.uniform() * 2 - 1, rng.uniform() * 2 - 1};
            cplx lhs = hyp2f1_terminating(m, b, cc, z);
            cplx rhs = hyp2f1_terminating(m, b, cc + 1.0, z) +
                       (double(-m) * b * z / (cc * (cc + 1.0))) *
                           hyp2f1_terminating(m - 1, b + 1.0, cc + 2.0, z);
            ok = std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + 1.0);
        }
        report("hyp2f1 contiguous relation", ok);
    }
    {  // log-gamma recursion
        bool ok = true;
        for (int rep = 0; rep < 50 && ok; ++rep) {
            cplx z{0.1 + rng.uniform() * 20, rng.uniform() * 40 - 20};
            cplx diff = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
            double residue = std::abs(diff.real()) +
                             std::abs(std::remainder(diff.imag(), 2.0 * M_PI));
            ok = residue <= 1e-12 * (1.0 + std::abs(log_gamma(z)));
        }
        report("log_gamma recursion", ok);
    }
    {  // Kummer transform self-consistency
        bool ok = true;
        for (int rep = 0; rep < 25 && ok; ++rep) {
            cplx a{rng.uniform() * 2, rng.uniform() * 2 - 1};
            cplx cc{1.0 + rng.uniform() * 2, rng.uniform()};
            cplx z{rng.uniform() * 40 - 20, rng.uniform() * 40 - 20};
            cplx lhs = hyp1f1(a, cc, z);
            cplx rhs = std::exp(z) * hyp1f1(cc - a, cc, -z);
            ok = std::abs(lhs - rhs) <= 1e-11 * (std::abs(lhs) + std::abs(rhs) + 1e-30);
        }
        report("hyp1f1 Kummer self-consistency", ok);
    }
    {  // reflection symmetry of the ensemble polynomials
        bool ok = true;
        EnsembleParams p({0.6, 0.8}, 6);
        EnsembleParams pbar({0.6, -0.8}, 6);
        for (int m = 0; m <= 4 && ok; ++m) {
            for (double x : {0.3, 1.7, -2.4}) {
                double lhs = poly_p(m, -x, p).value;
                double rhs = ((m % 2) ? -1.0 : 1.0) * poly_p(m, x, pbar).value;
                ok = ok && std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0);
            }
        }
        report("pseudo-jacobi reflection symmetry", ok);
    }
    {  // kernel swap symmetry and the sine degeneration
        EnsembleParams p({0.7, 0.0}, 8);
        bool ok = cd_kernel(0.5, -0.3, p) == cd_kernel(-0.3, 0.5, p);
        LimitKernelParams lp(cplx{0.0, 0.0});
        for (double x1 : {0.4, 0.9, 1.7}) {
            for (double x2 : {0.25, 1.1}) {
                double closed = std::sin(1.0 / x2 - 1.0 / x1) / (M_PI * (x1 - x2));
                ok = ok && std::abs(kernel_inf(x1, x2, lp) - closed) <= 1e-12;
            }
        }
        report("kernel symmetry and sine degeneration", ok);
    }
    {  // Fredholm determinant range and monotonicity
        LimitKernelParams lp(cplx{0.0, 0.0});
        auto d1 = fredholm_det(lp, 0.5, 1.0, 80);
        auto d2 = fredholm_det(lp, 0.5, 1.5, 80);
        report("fredholm det in (0,1] and decreasing",
               d1.value > 0 && d1.value <= 1.0 && d2.value < d1.value);
    }
    {  // Cauchy law of the first coordinate at s = 0
        std::vector<double> draws(2000);
        for (auto& t : draws) t = sample_mu1(0.0, rng);
        double d = ks_statistic(draws, [](double t) { return 0.5 + std::atan(t) / M_PI; });
        report("mu1 Cauchy law (KS)", d < ks_critical(draws.size(), 0.01));
    }
    {  // interlacing of corner chains
        bool ok = true;
        for (int rep = 0; rep < 300 && ok; ++rep) {
            auto chain = sample_spectrum_chain(8, {0.3, 0.2}, rng);
            for (std::size_t k = 1; k < chain.size() && ok; ++k) {
                const auto& lam = chain[k];
                const auto& mu = chain[k - 1];
                double scale = std::abs(lam.front()) + std::abs(lam.back()) + 1.0;
                for (std::size_t i = 0; i + 1 < lam.size(); ++i) {
                    ok = ok && lam[i] >= mu[i] - 1e-12 * scale &&
                         mu[i] >= lam[i + 1] - 1e-12 * scale;
                }
            }
        }
        report("corner chain interlacing", ok);
    }
    {  // summary identity and configuration round trip
        std::vector<double> lam{2.0, 0.5, 0.0, -1.0};
        auto sum = spectral_summary(lam, 4);
        double asq = 0.0;
        for (double a : sum.a_plus) asq += a * a;
        for (double a : sum.a_minus) asq += a * a;
        bool ok = std::abs(sum.d - asq) <= 1e-15;
        auto cfg = point_configuration(sum);
        auto twice = to_sine_coordinates(to_sine_coordinates(cfg));
        ok = ok && twice.points.size() == cfg.points.size();
        for (std::size_t i = 0; i < cfg.points.size() && ok; ++i) {
            ok = std::abs(twice.points[i] - cfg.points[i]) <= 1e-15 * std::abs(cfg.points[i]);
        }
        report("spectral summary identity and sine-map involution", ok);
    }
    {  // block determinant identity at z = 1
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(4, 4);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                a(i, j) += 0.2 * cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
            }
        }
        report("block determinant identity",
               block_det_identity_gap(a, cplx{1.0, 0.0}, 2) < 1e-13);
    }
    std::cout << (fails == 0 ? "selftest: all properties passed\n"
                             : "selftest: failures detected\n");
    return fails == 0 ? 0 : 1;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig c;
    CLI::App app{kVersion};
    app.fallthrough();
    app.set_config("--config");
    app.add_option("--s-re", c.s_re, "Re s (must exceed -1/2)");
    app.add_option("--s-im", c.s_im, "Im s");
    app.add_option("--N", c.n, "matrix size / particle number");
    app.add_option("--seed", c.seed, "RNG seed");
    app.add_option("--count", c.sample_count, "Monte Carlo sample count");
    app.add_option("--threads", c.threads, "worker threads (0 = all cores)");
    app.add_option("--out", c.out, "output path");
    app.add_option("--order", c.order, "Nystrom order");
    std::string n_list_text, t_list_text, eps_list_text;

    auto* eval = app.add_subcommand("eval-kernel", "kernel value table over a grid");
    eval->add_option("--mode", c.mode, "finite|limit|sine");
    eval->add_option("--grid-lo", c.grid_lo);
    eval->add_option("--grid-hi", c.grid_hi);
    eval->add_option("--grid-count", c.grid_count);

    auto* sample = app.add_subcommand("sample", "draw eigenvalue samples");

    auto* corr = app.add_subcommand("estimate-corr", "correlation estimates from an archive");
    corr->add_option("--in", c.in_path, "sample archive")->required();
    corr->add_option("--k", c.corr_k, "correlation order (1..3)");
    corr->add_option("--boxes", c.boxes, "boxes lo:hi[:lo:hi...][;box2...]")->required();

    auto* conv = app.add_subcommand("converge", "finite-N to limit kernel gap study");
    conv->add_option("--N-list", n_list_text, "comma-separated N values");
    conv->add_option("--grid-lo", c.grid_lo);
    conv->add_option("--grid-hi", c.grid_hi);
    conv->add_option("--grid-count", c.grid_count);

    auto* dis = app.add_subcommand("disjointness", "Kakutani product decay report");
    dis->add_option("--s1-re", c.s_re);
    dis->add_option("--s1-im", c.s_im);
    dis->add_option("--s2-re", c.s2_re);
    dis->add_option("--s2-im", c.s2_im);
    dis->add_option("--n-max", c.n_max);

    auto* g2 = app.add_subcommand("gamma2", "small-ball second moment diagnostic");
    g2->add_option("--N-list", n_list_text);
    g2->add_option("--eps-list", eps_list_text);

    auto* pv = app.add_subcommand("painleve", "sigma-Painleve V residual scan");
    pv->add_option("--t-list", t_list_text);

    app.add_subcommand("selftest", "run the invariant battery");

    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        sub->configurable();
    }
    app.require_subcommand(1);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    if (eval->parsed()) c.command = Command::kEvalKernel;
    if (sample->parsed()) c.command = Command::kSample;
    if (corr->parsed()) c.command = Command::kEstimateCorr;
    if (conv->parsed()) c.command = Command::kConverge;
    if (dis->parsed()) c.command = Command::kDisjointness;
    if (g2->parsed()) c.command = Command::kGamma2;
    if (pv->parsed()) c.command = Command::kPainleve;
    if (!n_list_text.empty()) c.n_list = parse_int_list(n_list_text);
    if (!t_list_text.empty()) c.t_list = parse_double_list(t_list_text);
    if (!eps_list_text.empty()) c.eps_list = parse_double_list(eps_list_text);

    if (!(c.s_re > -0.5)) throw UsageError("Re s must exceed -1/2");
    if (c.command == Command::kDisjointness && !(c.s2_re > -0.5)) {
        throw UsageError("Re s must exceed -1/2");
    }
    if (c.sample_count < 1) throw UsageError("sample count must be >= 1");
    if (c.grid_count < 1) throw UsageError("grid must be nonempty");
    for (int n : c.n_list) {
        if (n < 1) throw UsageError("N values must be positive");
    }
    return c;
}

int run(const RunConfig& c) {
    switch (c.command) {
        case Command::kEvalKernel: return cmd_eval_kernel(c);
        case Command::kSample: return cmd_sample(c);
        case Command::kEstimateCorr: return cmd_estimate_corr(c);
        case Command::kConverge: return cmd_converge(c);
        case Command::kDisjointness: return cmd_disjointness(c);
        case Command::kGamma2: return cmd_gamma2(c);
        case Command::kPainleve: return cmd_painleve(c);
        case Command::kSelftest: return cmd_selftest(c);
    }
    return 1;
}

int main_entry(const std::vector<std::string>& args) {
    try {
        RunConfig c = parse_config(args);
        return run(c);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const PolePassed& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const NoConvergence& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const ImaginaryLeak& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const NonPositive& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const NegativeDeterminant& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const Underflow& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const EigenFailure& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hpdet
