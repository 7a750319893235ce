#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nlpw/cli.hpp"
#include "nlpw/emit.hpp"
#include "nlpw/verify.hpp"

using namespace nlpw;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv = {"nlpw"};
    argv.insert(argv.end(), args);
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_CASE("float formatting is 17-significant-digit and locale independent") {
    CHECK(cli::format_double(1.0) == "1");
    CHECK(cli::format_double(M_PI) == "3.1415926535897931");
    CHECK(cli::format_double(std::nan("")) == "nan");
    CHECK(cli::format_double(INFINITY) == "inf");
}

TEST_CASE("EigenResult JSON has the fixed key order; CSV is unsupported") {
    eigen::EigenResult r;
    r.lambda = 1.5;
    r.gamma = 0.25;
    r.grad_norm = 1e-9;
    r.start_label = "even";
    r.iterations = 12;
    const std::string s = emit(r, cli::Format::json);
    const auto i1 = s.find("\"lambda\"");
    const auto i2 = s.find("\"gamma\"");
    const auto i3 = s.find("\"grad_norm\"");
    const auto i4 = s.find("\"start_label\"");
    const auto i5 = s.find("\"iterations\"");
    CHECK(i1 < i2);
    CHECK(i2 < i3);
    CHECK(i3 < i4);
    CHECK(i4 < i5);
    CHECK_THROWS_AS(emit(r, cli::Format::csv), cli::emit_error);
}

TEST_CASE("emission is deterministic and JSON re-parses to equal values") {
    saturation::SaturationReport rep;
    rep.params = Params(2.0, 2.0, 3.0);
    rep.alpha_grid = {0.0, 1.0};
    rep.lambda_samples = {2.4674011002723395, 3.4674011002723395};
    rep.samples.resize(2);
    rep.samples[0].alpha = 0.0;
    rep.samples[0].lambda = rep.lambda_samples[0];
    rep.samples[1].alpha = 1.0;
    rep.samples[1].lambda = rep.lambda_samples[1];
    rep.alpha_c = 7.4022033008170185;
    rep.alpha_c_bracket = {7.4, 7.41};
    rep.lower_bound = 3.7011016504085092;
    rep.closed_form = 7.4022033008170185;

    const std::string a = emit(rep, cli::Format::json);
    const std::string b = emit(rep, cli::Format::json);
    CHECK(a == b);

    const auto parsed = nlohmann::json::parse(a);
    CHECK(parsed.at("alpha_c").get<double>() == rep.alpha_c);
    CHECK(parsed.at("lambda_samples")[1].get<double>() == rep.lambda_samples[1]);
    CHECK(parsed.at("closed_form").get<double>() == *rep.closed_form);
    CHECK(parsed.at("params").at("p").get<double>() == 2.0);
    CHECK(parsed.at("alpha_c_bracket")[0].get<double>() == 7.4);

    // non-finite values serialize as JSON null
    rep.alpha_c = std::numeric_limits<double>::quiet_NaN();
    const auto reparsed = nlohmann::json::parse(emit(rep, cli::Format::json));
    CHECK(reparsed.at("alpha_c").is_null());
}

TEST_CASE("empty saturation report gives a header-only CSV") {
    saturation::SaturationReport rep;
    CHECK(emit(rep, cli::Format::csv) ==
          "alpha,lambda,even_defect,odd_defect,r_average,zero_count\n");
}

TEST_CASE("grid function CSV") {
    eigen::GridFunction u(16);
    u.values[7] = 1.0; // node at x = 0
    const std::string s = emit(u, cli::Format::csv);
    CHECK(s.substr(0, 4) == "x,u\n");
    CHECK(s.find("\n0,1\n") != std::string::npos);
    CHECK(s.find("-1,0\n") != std::string::npos);
}

TEST_CASE("unknown command exits with code 2") {
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({"lambda", "--bogus-flag", "3"}) == 2);
}

TEST_CASE("gtrig eval writes deterministic bytes") {
    const char* f1 = "/tmp/nlpw_t1.json";
    const char* f2 = "/tmp/nlpw_t2.json";
    CHECK(run_cli({"gtrig", "eval", "--p", "2.5", "--q", "2", "--t", "0.7", "--output", f1}) == 0);
    CHECK(run_cli({"gtrig", "eval", "--p", "2.5", "--q", "2", "--t", "0.7", "--output", f2}) == 0);
    const std::string a = slurp(f1), b = slurp(f2);
    CHECK(!a.empty());
    CHECK(a == b);
    const auto parsed = nlohmann::json::parse(a);
    CHECK(parsed.at("p").get<double>() == 2.5);
    std::remove(f1);
    std::remove(f2);
}

TEST_CASE("config file provides defaults and flags override") {
    const char* cfg = "/tmp/nlpw_cfg.json";
    {
        std::ofstream out(cfg);
        out << R"({"p": 3.0, "q": 2.0, "t": 0.25})";
    }
    const char* f1 = "/tmp/nlpw_c1.json";
    CHECK(run_cli({"gtrig", "eval", "--config", cfg, "--output", f1}) == 0);
    auto parsed = nlohmann::json::parse(slurp(f1));
    CHECK(parsed.at("p").get<double>() == 3.0);
    CHECK(parsed.at("t").get<double>() == 0.25);

    CHECK(run_cli({"gtrig", "eval", "--config", cfg, "--p", "2.0", "--output", f1}) == 0);
    parsed = nlohmann::json::parse(slurp(f1));
    CHECK(parsed.at("p").get<double>() == 2.0); // flag wins
    CHECK(parsed.at("q").get<double>() == 2.0);
    std::remove(cfg);
    std::remove(f1);
}

TEST_CASE("lambda command emits the documented record shape") {
    const char* f1 = "/tmp/nlpw_lambda.json";
    const char* fm = "/tmp/nlpw_min.csv";
    CHECK(run_cli({"lambda", "--p", "2", "--q", "2", "--r", "3", "--alpha", "50", "--n", "64",
                   "--output", f1, "--minimizer", fm}) == 0);
    const auto parsed = nlohmann::json::parse(slurp(f1));
    CHECK(parsed.contains("lambda"));
    CHECK(parsed.contains("gamma"));
    CHECK(parsed.contains("grad_norm"));
    CHECK(parsed.contains("start_label"));
    CHECK(parsed.contains("diagnostics"));
    CHECK(parsed.at("diagnostics").contains("zero_count"));
    const std::string mincsv = slurp(fm);
    CHECK(mincsv.substr(0, 4) == "x,u\n");
    // n+1 node rows plus header
    CHECK(std::count(mincsv.begin(), mincsv.end(), '\n') == 66);
    std::remove(f1);
    std::remove(fm);
}

TEST_CASE("repeated solver runs with one seed are byte-identical") {
    const char* f1 = "/tmp/nlpw_det1.json";
    const char* f2 = "/tmp/nlpw_det2.json";
    for (const char* f : {f1, f2}) {
        CHECK(run_cli({"lambda", "--p", "2.2", "--q", "2", "--r", "2.4", "--alpha", "1.5", "--n",
                       "64", "--seed", "7", "--output", f}) == 0);
    }
    CHECK(slurp(f1) == slurp(f2));
    std::remove(f1);
    std::remove(f2);
}

TEST_CASE("two symmetric starts only") {
    const char* f1 = "/tmp/nlpw_s2.json";
    CHECK(run_cli({"lambda", "--p", "2", "--q", "2", "--r", "2", "--alpha", "0", "--n", "64",
                   "--starts", "2", "--output", f1}) == 0);
    const auto parsed = nlohmann::json::parse(slurp(f1));
    CHECK(parsed.at("start_label").get<std::string>() == "even");
    std::remove(f1);
}

TEST_CASE("NLPW_THREADS does not change the bytes") {
    const char* f1 = "/tmp/nlpw_th1.csv";
    const char* f2 = "/tmp/nlpw_th2.csv";
    setenv("NLPW_THREADS", "1", 1);
    CHECK(run_cli({"hfun", "eval", "--p", "2.5", "--q", "2", "--r", "2.4", "--m-grid", "9",
                   "--output", f1}) == 0);
    setenv("NLPW_THREADS", "2", 1);
    CHECK(run_cli({"hfun", "eval", "--p", "2.5", "--q", "2", "--r", "2.4", "--m-grid", "9",
                   "--output", f2}) == 0);
    unsetenv("NLPW_THREADS");
    CHECK(slurp(f1) == slurp(f2));
    CHECK(cli::thread_cap() >= 1);
    std::remove(f1);
    std::remove(f2);
}

TEST_CASE("under-resolved verify config fails the solver oracle with a measured gap") {
    cli::VerifyConfig cfg;
    cfg.quick = true;
    cfg.n = 16;
    const auto rep = cli::run_verify_suite(cfg);
    CHECK_FALSE(rep.all_pass);
    bool found = false;
    for (const auto& c : rep.checks) {
        if (c.name == "eigen.dirichlet_oracle") {
            found = true;
            CHECK_FALSE(c.pass);
            CHECK(c.residual > c.threshold);
            CHECK(std::isfinite(c.residual));
        }
    }
    CHECK(found);
}

TEST_CASE("hfun eval emits the documented CSV schema") {
    const char* f1 = "/tmp/nlpw_h.csv";
    CHECK(run_cli({"hfun", "eval", "--p", "2", "--q", "2", "--r", "2", "--m-grid", "3",
                   "--output", f1}) == 0);
    const std::string s = slurp(f1);
    CHECK(s.substr(0, 26) == "m,p,q,r,H,error,divergent\n");
    CHECK(std::count(s.begin(), s.end(), '\n') == 4);
    std::remove(f1);
}
