#include "nlpw/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlpw/emit.hpp"
#include "nlpw/gtrig.hpp"
#include "nlpw/hfun.hpp"
#include "nlpw/saturation.hpp"
#include "nlpw/verify.hpp"

namespace nlpw::cli {

namespace {

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
        std::fwrite(bytes.data(), 1, bytes.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Format parse_format(const std::string& f) {
    if (f == "json") return Format::json;
    if (f == "csv") return Format::csv;
    throw CLI::ValidationError("--format", "expected 'json' or 'csv'");
}

// Optional JSON config file; command-line flags override its values.
class FileConfig {
  public:
    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        in >> data_;
    }

    template <typename T>
    void fallback(const CLI::Option* opt, const char* key, T& var) const {
        if (opt != nullptr && opt->count() > 0) return;
        if (!data_.is_object() || !data_.contains(key)) return;
        var = data_.at(key).get<T>();
    }

  private:
    nlohmann::json data_ = nlohmann::json::object();
};

struct CommonParams {
    double p = 2.0, q = 2.0, r = 2.0;
};

void run_parallel(int count, const std::function<void(int)>& body) {
    const int workers = std::min(thread_cap(), std::max(1, count));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

int thread_cap() {
    const char* env = std::getenv("NLPW_THREADS");
    if (env != nullptr) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int run(int argc, const char* const* argv) {
    CLI::App app{"nonlocal Poincare-Wirtinger eigenvalue toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, output = "-", format_name = "json";
    app.add_option("--config", config_path, "JSON file with defaults; flags override")
        ->expected(1);
    FileConfig file_cfg;

    CommonParams pp;
    int n = 512;
    std::uint64_t seed = 0;

    // ---- gtrig eval ----
    auto* gtrig_cmd = app.add_subcommand("gtrig", "generalized trigonometric functions");
    auto* gtrig_eval = gtrig_cmd->add_subcommand("eval", "evaluate pi_pq, sin_pq, cos_pq");
    gtrig_cmd->fallthrough();
    gtrig_eval->fallthrough();
    double gt_t = 0.0;
    auto* gt_p = gtrig_eval->add_option("--p", pp.p, "exponent p (> 1)");
    auto* gt_q = gtrig_eval->add_option("--q", pp.q, "exponent q (> 1)");
    auto* gt_tt = gtrig_eval->add_option("--t", gt_t, "argument");
    auto* gt_out = gtrig_eval->add_option("--output", output, "output path or '-'");
    auto* gt_fmt = gtrig_eval->add_option("--format", format_name, "json or csv");

    // ---- hfun eval ----
    auto* hfun_cmd = app.add_subcommand("hfun", "the auxiliary integral H(m,p,q,r)");
    auto* hfun_eval = hfun_cmd->add_subcommand("eval", "evaluate H over an m-grid");
    hfun_cmd->fallthrough();
    hfun_eval->fallthrough();
    int m_grid = 21;
    double single_m = -1.0;
    auto* hf_p = hfun_eval->add_option("--p", pp.p, "exponent p (> 1)");
    auto* hf_q = hfun_eval->add_option("--q", pp.q, "exponent q (> 1)");
    auto* hf_r = hfun_eval->add_option("--r", pp.r, "exponent r (> 1)");
    auto* hf_grid = hfun_eval->add_option("--m-grid", m_grid, "uniform m samples in [0,1]");
    auto* hf_m = hfun_eval->add_option("--m", single_m, "single m value instead of a grid");
    auto* hf_out = hfun_eval->add_option("--output", output, "output path or '-'");
    auto* hf_fmt = hfun_eval->add_option("--format", format_name, "json or csv");
    hf_fmt->default_str("csv");

    // ---- lambda ----
    auto* lambda_cmd = app.add_subcommand("lambda", "minimize the nonlocal Rayleigh quotient");
    lambda_cmd->fallthrough();
    double alpha = 0.0, grad_tol = 1e-8;
    int starts = 4;
    std::string minimizer_path;
    auto* la_p = lambda_cmd->add_option("--p", pp.p, "exponent p (> 1)");
    auto* la_q = lambda_cmd->add_option("--q", pp.q, "exponent q (> 1)");
    auto* la_r = lambda_cmd->add_option("--r", pp.r, "exponent r (> 1)");
    auto* la_a = lambda_cmd->add_option("--alpha", alpha, "nonlocal coupling");
    auto* la_n = lambda_cmd->add_option("--n", n, "mesh elements (even, >= 16)");
    auto* la_s = lambda_cmd->add_option("--starts", starts, "2 or 4 solver starts");
    auto* la_t = lambda_cmd->add_option("--tol", grad_tol, "gradient stopping tolerance");
    auto* la_seed = lambda_cmd->add_option("--seed", seed, "seed for the randomized starts");
    auto* la_min = lambda_cmd->add_option("--minimizer", minimizer_path,
                                          "also write the minimizer as CSV (x,u)");
    auto* la_out = lambda_cmd->add_option("--output", output, "output path or '-'");

    // ---- saturate ----
    auto* sat_cmd = app.add_subcommand("saturate", "sweep alpha and locate the critical value");
    sat_cmd->fallthrough();
    double alpha_min = 0.0, alpha_max = 12.0, tol_alpha = 1e-2;
    int steps = 13;
    std::string csv_path;
    auto* sa_p = sat_cmd->add_option("--p", pp.p, "exponent p (> 1)");
    auto* sa_q = sat_cmd->add_option("--q", pp.q, "exponent q (> 1)");
    auto* sa_r = sat_cmd->add_option("--r", pp.r, "exponent r (> 1)");
    auto* sa_lo = sat_cmd->add_option("--alpha-min", alpha_min, "sweep start");
    auto* sa_hi = sat_cmd->add_option("--alpha-max", alpha_max, "sweep end");
    auto* sa_st = sat_cmd->add_option("--steps", steps, "sweep samples");
    auto* sa_n = sat_cmd->add_option("--n", n, "mesh elements");
    auto* sa_ta = sat_cmd->add_option("--tol-alpha", tol_alpha, "bisection bracket width");
    auto* sa_seed = sat_cmd->add_option("--seed", seed, "seed for the randomized starts");
    auto* sa_csv = sat_cmd->add_option("--csv", csv_path, "also write the plotting CSV here");
    auto* sa_out = sat_cmd->add_option("--output", output, "output path or '-'");
    auto* sa_fmt = sat_cmd->add_option("--format", format_name, "json or csv");

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "run the cross-check suite");
    verify_cmd->fallthrough();
    bool quick = false;
    int verify_n = 1024;
    verify_cmd->add_flag("--quick", quick, "smaller grids and meshes");
    auto* ve_n = verify_cmd->add_option("--n", verify_n, "mesh for the solver checks");
    auto* ve_seed = verify_cmd->add_option("--seed", seed, "seed for randomized checks");
    auto* ve_out = verify_cmd->add_option("--output", output, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) file_cfg.load(config_path);

        if (gtrig_eval->parsed()) {
            file_cfg.fallback(gt_p, "p", pp.p);
            file_cfg.fallback(gt_q, "q", pp.q);
            file_cfg.fallback(gt_tt, "t", gt_t);
            file_cfg.fallback(gt_out, "output", output);
            file_cfg.fallback(gt_fmt, "format", format_name);
            GtrigEval rec;
            rec.p = pp.p;
            rec.q = pp.q;
            rec.t = gt_t;
            rec.pi = gtrig::pi_pq(pp.p, pp.q);
            rec.sin = gtrig::sin_pq(pp.p, pp.q, gt_t);
            rec.cos = gtrig::cos_pq(pp.p, pp.q, gt_t);
            write_output(output, emit(rec, parse_format(format_name)));
            return 0;
        }

        if (hfun_eval->parsed()) {
            file_cfg.fallback(hf_p, "p", pp.p);
            file_cfg.fallback(hf_q, "q", pp.q);
            file_cfg.fallback(hf_r, "r", pp.r);
            file_cfg.fallback(hf_grid, "m_grid", m_grid);
            file_cfg.fallback(hf_m, "m", single_m);
            file_cfg.fallback(hf_out, "output", output);
            file_cfg.fallback(hf_fmt, "format", format_name);
            if (hf_fmt->count() == 0 && format_name == "json") format_name = "csv";
            const Params params(pp.p, pp.q, pp.r);
            std::vector<double> ms;
            if (hf_m->count() > 0 || single_m >= 0.0) {
                ms.push_back(single_m);
            } else {
                for (int i = 0; i < m_grid; ++i) {
                    ms.push_back(m_grid == 1 ? 0.0 : i / (m_grid - 1.0));
                }
            }
            std::vector<HRow> rows(ms.size());
            run_parallel(static_cast<int>(ms.size()), [&](int i) {
                const auto h = hfun::h_integral(ms[static_cast<size_t>(i)], params);
                HRow row;
                row.m = ms[static_cast<size_t>(i)];
                row.p = pp.p;
                row.q = pp.q;
                row.r = pp.r;
                row.h = h.value;
                row.error = h.error_estimate;
                row.divergent = h.divergent;
                rows[static_cast<size_t>(i)] = row;
            });
            write_output(output, emit(rows, parse_format(format_name)));
            return 0;
        }

        if (lambda_cmd->parsed()) {
            file_cfg.fallback(la_p, "p", pp.p);
            file_cfg.fallback(la_q, "q", pp.q);
            file_cfg.fallback(la_r, "r", pp.r);
            file_cfg.fallback(la_a, "alpha", alpha);
            file_cfg.fallback(la_n, "n", n);
            file_cfg.fallback(la_s, "starts", starts);
            file_cfg.fallback(la_t, "tol", grad_tol);
            file_cfg.fallback(la_seed, "seed", seed);
            file_cfg.fallback(la_min, "minimizer", minimizer_path);
            file_cfg.fallback(la_out, "output", output);
            const Params params(pp.p, pp.q, pp.r);
            eigen::SolverConfig cfg;
            cfg.seed = seed;
            cfg.starts = starts;
            cfg.grad_tol = grad_tol;
            LambdaRecord rec;
            try {
                rec.result = eigen::minimize_lambda_alpha(params, alpha, n, cfg);
            } catch (const eigen::no_convergence& e) {
                std::cerr << "warning: solver did not converge; reporting the best iterate\n";
                rec.result = e.best;
            }
            rec.diagnostics = eigen::symmetry_diagnostics(rec.result.minimizer, params.r);
            write_output(output, emit(rec, Format::json));
            if (!minimizer_path.empty()) {
                write_output(minimizer_path, emit(rec.result.minimizer, Format::csv));
            }
            return rec.result.converged ? 0 : 1;
        }

        if (sat_cmd->parsed()) {
            file_cfg.fallback(sa_p, "p", pp.p);
            file_cfg.fallback(sa_q, "q", pp.q);
            file_cfg.fallback(sa_r, "r", pp.r);
            file_cfg.fallback(sa_lo, "alpha_min", alpha_min);
            file_cfg.fallback(sa_hi, "alpha_max", alpha_max);
            file_cfg.fallback(sa_st, "steps", steps);
            file_cfg.fallback(sa_n, "n", n);
            file_cfg.fallback(sa_ta, "tol_alpha", tol_alpha);
            file_cfg.fallback(sa_seed, "seed", seed);
            file_cfg.fallback(sa_csv, "csv", csv_path);
            file_cfg.fallback(sa_out, "output", output);
            file_cfg.fallback(sa_fmt, "format", format_name);
            const Params params(pp.p, pp.q, pp.r);
            eigen::SolverConfig cfg;
            cfg.seed = seed;
            const auto rep = saturation::saturate(params, alpha_min, alpha_max, steps, n,
                                                  tol_alpha, cfg);
            write_output(output, emit(rep, parse_format(format_name)));
            if (!csv_path.empty()) write_output(csv_path, emit(rep, Format::csv));
            return 0;
        }

        if (verify_cmd->parsed()) {
            VerifyConfig cfg;
            file_cfg.fallback(ve_n, "n", verify_n);
            file_cfg.fallback(ve_seed, "seed", seed);
            file_cfg.fallback(ve_out, "output", output);
            cfg.quick = quick;
            cfg.n = quick && ve_n->count() == 0 ? 512 : verify_n;
            cfg.seed = seed;
            const auto rep = run_verify_suite(cfg);
            for (const auto& c : rep.checks) {
                std::printf("[%s] %-40s residual=%s threshold=%s%s%s\n",
                            c.pass ? "PASS" : "FAIL", c.name.c_str(),
                            format_double(c.residual).c_str(), format_double(c.threshold).c_str(),
                            c.detail.empty() ? "" : "  -- ", c.detail.c_str());
            }
            std::printf("%s: %zu checks\n", rep.all_pass ? "ALL PASS" : "FAILURES PRESENT",
                        rep.checks.size());
            if (!output.empty() && output != "-") {
                write_output(output, emit(rep, Format::json));
            }
            return rep.all_pass ? 0 : 1;
        }

        // a bare group command like `gtrig` without `eval`
        std::cerr << "missing subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace nlpw::cli
