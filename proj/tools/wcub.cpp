// Command-line front end: construct, verify, expand, solve, converge.
//
// Exit codes: 0 success, 1 verification or numerical failure, 2 usage or
// input error, 3 resource budget exceeded.

#include "wcub/pbw.hpp"
#include "wcub/problem.hpp"
#include "wcub/sde.hpp"
#include "wcub/wiener.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace wcub;

enum ExitCode { ok = 0, failed = 1, usage = 2, budget = 3 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Globals {
    double tol = 1e-10;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
    std::string format = "text";
};

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << content;
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

std::string num(double x) { return fmt::format("{}", x); }

// ---------------------------------------------------------------- construct

struct ConstructArgs {
    int degree = 3;
    int dim = 1;
    std::string rule = "auto";
    double x = 0.5;
};

int cmd_construct(const ConstructArgs& a, const Globals& g)
{
    if (a.degree == 7 && a.dim != 3) throw UsageError("degree 7 is available for --dim 3 only");
    if (a.degree != 3 && a.degree != 5 && a.degree != 7) throw UsageError("--degree must be 3, 5 or 7");
    if (a.dim < 1) throw UsageError("--dim must be >= 1");

    GaussianRule rule = parse_gaussian_rule(a.rule);
    WienerCubatureFormula f;
    switch (a.degree) {
    case 3: f = construct_degree3(gaussian_cubature(a.dim, 3, rule)); break;
    case 5: f = construct_degree5(gaussian_cubature(a.dim, 5, rule), a.x); break;
    default:
        if (rule == GaussianRule::compact) throw UsageError("degree 7 has no compact Gaussian rule");
        f = construct_degree7();
    }
    const std::string path = g.out.empty() ? fmt::format("cubature_m{}_d{}.json", a.degree, a.dim) : g.out;
    save_formula(f, path);
    if (g.format == "json") {
        std::cout << json{{"path", path}, {"size", f.size()}, {"size_formula", size_formula(f)}}.dump(1) << '\n';
    } else if (g.format == "csv") {
        std::cout << "path,size,size_formula\n" << fmt::format("{},{},{}\n", path, f.size(), size_formula(f));
    } else {
        std::cout << fmt::format("wrote {}\nentries: {}\n{}\n", path, f.size(), size_formula(f));
    }
    return ok;
}

// ------------------------------------------------------------------- verify

struct VerifyArgs {
    std::string file;
    double T = 1.0;
    std::optional<int> depth;
    std::size_t worst = 10;
};

int cmd_verify(const VerifyArgs& a, const Globals& g)
{
    WienerCubatureFormula f = load_formula(a.file);
    if (!(a.T > 0.0)) throw UsageError("--T must be positive");
    if (a.T != 1.0) f = scale_formula(f, a.T);
    VerifyOptions opts;
    opts.T = a.T;
    opts.depth = a.depth;
    opts.worst_count = a.worst;
    opts.threads = g.threads;
    const VerificationReport r = verify_formula(f, opts);
    const bool pass = r.max_residual <= g.tol;
    const std::string csv = residual_csv(r);

    if (!g.out.empty()) write_file(g.out, csv);
    if (g.format == "json") {
        json worst = json::array();
        for (const auto& e : r.worst)
            worst.push_back({{"word", e.word.to_string()}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"abs_error", e.abs_error}});
        std::cout << json{{"file", a.file}, {"degree", f.degree}, {"dim", f.dim}, {"depth", r.depth}, {"T", r.T},
                          {"max_residual", r.max_residual}, {"tol", g.tol}, {"passed", pass}, {"worst", worst}}
                         .dump(1)
                  << '\n';
    } else if (g.format == "csv") {
        if (g.out.empty()) std::cout << csv;
    } else {
        std::cout << fmt::format("formula: degree {} dim {} entries {}\n", f.degree, f.dim, f.size());
        std::cout << fmt::format("depth {} T {}: max residual {:.3e} (tol {:.1e}) {}\n", r.depth, r.T, r.max_residual, g.tol,
                                 pass ? "PASS" : "FAIL");
        if (g.out.empty()) std::cout << csv;
    }
    return pass ? ok : failed;
}

// ------------------------------------------------------------------- expand

struct ExpandArgs {
    int dim = 1;
    int degree = 3;
    std::string basis = "word";
    std::string T = "1";
};

int cmd_expand(const ExpandArgs& a, const Globals& g)
{
    if (a.dim < 1) throw UsageError("--dim must be >= 1");
    if (a.degree < 0 || a.degree > 8) throw UsageError("--degree must lie in [0, 8]");
    if (a.basis != "word" && a.basis != "pbw") throw UsageError("--basis must be word or pbw");
    if (a.basis == "pbw" && a.dim > 3) throw UsageError("pbw expansion is limited to --dim <= 3");
    if (a.dim > 6) throw UsageError("word expansion is limited to --dim <= 6");
    Rational T;
    try {
        T = parse_rational(a.T);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--T: ") + e.what());
    }
    if (T <= 0) throw UsageError("--T must be positive");

    const ExactTensor es = expected_signature<Rational>(a.dim, a.degree, T);
    std::vector<std::pair<std::string, Rational>> rows;
    if (a.basis == "word") {
        // graded degree first, then lexicographic
        for (std::size_t i = 0; i < es.data().size(); ++i)
            if (es.data()[i] != 0) rows.emplace_back(es.basis().word(i).to_string(), es.data()[i]);
    } else {
        for (const auto& [key, c] : pbw_coordinates(es)) rows.emplace_back(pbw_key_to_string(key), c);
    }

    std::ostringstream s;
    if (g.format == "json") {
        json items = json::array();
        for (const auto& [k, c] : rows) items.push_back({{"key", k}, {"coeff", to_string(c)}, {"value", to_double(c)}});
        s << json{{"dim", a.dim}, {"degree", a.degree}, {"basis", a.basis}, {"T", to_string(T)}, {"coefficients", items}}.dump(1)
          << '\n';
    } else if (g.format == "csv") {
        s << "key,coeff,value\n";
        for (const auto& [k, c] : rows) s << fmt::format("\"{}\",{},{}\n", k, to_string(c), to_double(c));
    } else {
        for (const auto& [k, c] : rows) s << k << ": " << to_string(c) << '\n';
    }
    if (g.out.empty())
        std::cout << s.str();
    else
        write_file(g.out, s.str());
    return ok;
}

// -------------------------------------------------------------------- solve

struct SolveArgs {
    std::string problem;
    std::vector<std::string> formulas;
    std::string method = "taylor";
    int steps = 1;
    std::size_t paths = 10000;
    int ode_steps = 8;
    std::size_t budget = 1'000'000;
    std::vector<double> times;
    std::vector<int> step_list{1};
};

json report_json(const SolverReport& r)
{
    json j{{"method", to_string(r.method)}, {"estimate", r.estimate}, {"mean_state", r.mean_state},
           {"leaf_count", r.leaf_count}, {"step_count", r.step_count}};
    if (r.method != Method::montecarlo) j["weight_sum"] = r.weight_sum;
    j["abs_error"] = r.abs_error ? json(*r.abs_error) : json(nullptr);
    if (r.std_error) j["std_error"] = *r.std_error;
    return j;
}

int cmd_solve(const SolveArgs& a, const Globals& g)
{
    const SDEProblem problem = load_problem(a.problem);
    const Method method = parse_method(a.method);
    SolverReport r;
    std::optional<WienerCubatureFormula> f;
    if (method == Method::montecarlo) {
        MonteCarloOptions opts{a.paths, a.steps, g.seed, g.threads};
        r = monte_carlo(problem, opts);
    } else {
        if (a.formulas.size() != 1) throw UsageError("solve needs exactly one --formula for cubature methods");
        f = load_formula(a.formulas[0]);
        TreeOptions opts{method, a.ode_steps, a.budget, g.threads};
        r = cubature_tree(problem, *f, a.steps, opts);
    }

    std::ostringstream s;
    if (g.format == "json") {
        json j = report_json(r);
        j["T"] = problem.T;
        j["payoff"] = problem.payoff.to_string();
        if (f) j["degree"] = f->degree;
        s << j.dump(1) << '\n';
    } else if (g.format == "csv") {
        s << "degree,T,steps,method,estimate,abs_error\n";
        s << fmt::format("{},{},{},{},{},{}\n", f ? std::to_string(f->degree) : "", problem.T, r.step_count,
                         to_string(r.method), r.estimate, r.abs_error ? num(*r.abs_error) : "");
    } else {
        s << fmt::format("method {} T {} steps {}\n", to_string(r.method), problem.T, r.step_count);
        s << fmt::format("estimate {}\n", r.estimate);
        if (r.std_error) s << fmt::format("std_error {}\n", *r.std_error);
        if (auto ref = problem.reference_for(problem.T)) s << fmt::format("reference {}\nabs_error {}\n", *ref, *r.abs_error);
        s << fmt::format("leaves {}\n", r.leaf_count);
    }
    if (g.out.empty())
        std::cout << s.str();
    else
        write_file(g.out, s.str());
    return ok;
}

int cmd_converge(const SolveArgs& a, const Globals& g)
{
    const SDEProblem problem = load_problem(a.problem);
    const Method method = parse_method(a.method);
    if (method == Method::montecarlo) throw UsageError("converge supports the taylor and logode methods");
    if (a.formulas.empty()) throw UsageError("converge needs at least one --formula");
    for (double t : a.times)
        if (!(t > 0.0)) throw UsageError("--times must be positive");
    for (int k : a.step_list)
        if (k < 1) throw UsageError("--step-list entries must be >= 1");

    std::vector<WienerCubatureFormula> formulas;
    for (const auto& path : a.formulas) formulas.push_back(load_formula(path));
    ConvergenceOptions opts;
    opts.times = a.times;
    opts.steps = a.step_list;
    opts.tree = TreeOptions{method, a.ode_steps, a.budget, g.threads};
    for (double t : opts.times.empty() ? std::vector<double>{problem.T} : opts.times)
        if (!problem.reference_for(t)) throw UsageError(fmt::format("problem has no reference value for T = {}", t));
    const ConvergenceResult res = convergence_experiment(problem, formulas, opts);

    const std::string csv = convergence_csv(res);
    std::ostringstream fits;
    json jfits = json::array();
    for (const auto& fit : res.fits) {
        fits << fmt::format("degree {}: slope {} ({} points above floor)\n", fit.degree,
                            fit.slope ? fmt::format("{:.4f}", *fit.slope) : std::string("n/a"), fit.points_used);
        jfits.push_back({{"degree", fit.degree}, {"slope", fit.slope ? json(*fit.slope) : json(nullptr)},
                         {"points", fit.points_used}});
    }
    if (!g.out.empty()) write_file(g.out, csv);
    if (g.format == "json") {
        json rows = json::array();
        for (const auto& r : res.rows)
            rows.push_back({{"degree", r.degree}, {"T", r.T}, {"steps", r.steps}, {"method", to_string(r.method)},
                            {"estimate", r.estimate}, {"abs_error", r.abs_error}});
        std::cout << json{{"rows", rows}, {"fits", jfits}}.dump(1) << '\n';
    } else {
        if (g.out.empty()) {
            std::cout << csv;
            std::cerr << fits.str();
        } else {
            std::cout << fits.str();
        }
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cubature on Wiener space: construction, verification and weak SDE solvers"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--tol", g.tol, "Verification tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Monte Carlo seed");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 256));
    app.add_option("--out", g.out, "Output path");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "Build a degree 3, 5 or 7 cubature formula");
    construct->add_option("--degree", ca.degree, "3, 5 or 7")->required()->check(CLI::IsMember({3, 5, 7}));
    construct->add_option("--dim", ca.dim, "Brownian dimension")->required();
    construct->add_option("--rule", ca.rule, "Gaussian rule")->check(CLI::IsMember({"auto", "product", "compact"}));
    construct->add_option("--x", ca.x, "Degree-5 parameter")->check(CLI::Range(0.0, 1.0));

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Compare a formula with the expected signature");
    verify->add_option("formula", va.file, "Formula JSON")->required();
    verify->add_option("--T", va.T, "Horizon; the formula is rescaled from unit time");
    verify->add_option("--depth", va.depth, "Graded degree to check (default: formula degree)");
    verify->add_option("--worst", va.worst, "Rows in the residual report");

    ExpandArgs ea;
    auto* expand = app.add_subcommand("expand", "List expected-signature coefficients");
    expand->add_option("--dim", ea.dim)->required();
    expand->add_option("--degree", ea.degree)->required();
    expand->add_option("--basis", ea.basis)->check(CLI::IsMember({"word", "pbw"}));
    expand->add_option("--T", ea.T, "Horizon, exact (e.g. 1/4)");

    SolveArgs sa;
    auto add_solver_options = [&sa](CLI::App* cmd) {
        cmd->add_option("--problem", sa.problem, "Problem JSON")->required();
        cmd->add_option("--formula", sa.formulas, "Formula JSON");
        cmd->add_option("--method", sa.method)->check(CLI::IsMember({"taylor", "logode", "mc"}));
        cmd->add_option("--ode-steps", sa.ode_steps, "RK4 steps per Log-ODE solve")->check(CLI::PositiveNumber);
        cmd->add_option("--budget", sa.budget, "Leaf budget")->check(CLI::PositiveNumber);
    };
    auto* solve = app.add_subcommand("solve", "Estimate E[phi(X_T)]");
    add_solver_options(solve);
    solve->add_option("--steps", sa.steps, "Uniform steps")->check(CLI::PositiveNumber);
    solve->add_option("--paths", sa.paths, "Monte Carlo paths")->check(CLI::PositiveNumber);

    auto* converge = app.add_subcommand("converge", "Error table and fitted orders");
    add_solver_options(converge);
    converge->add_option("--times", sa.times, "Horizons")->delimiter(',');
    converge->add_option("--step-list", sa.step_list, "Step counts")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return usage;
    }

    try {
        if (*construct) return cmd_construct(ca, g);
        if (*verify) return cmd_verify(va, g);
        if (*expand) return cmd_expand(ea, g);
        if (*solve) return cmd_solve(sa, g);
        if (*converge) return cmd_converge(sa, g);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return budget;
    } catch (const NonFiniteState& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failed;
    }
    return usage;
}
