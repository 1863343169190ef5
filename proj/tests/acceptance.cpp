// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include "wcub/measures.hpp"
#include "wcub/pbw.hpp"
#include "wcub/sde.hpp"
#include "wcub/wiener.hpp"
#include "wcub/word_basis.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace wcub;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome degree3()
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int d = 1; d <= 5; ++d) worst = std::max(worst, verify_formula(construct_degree3(gaussian_cubature(d, 3))).max_residual);
    const double t = seconds_since(t0);
    return {worst <= 1e-12 && t < 1.0, fmt::format("max residual {:.2e} over d=1..5 (limit 1e-12), {:.2f} s (limit 1 s)", worst, t)};
}

Outcome degree5()
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::string failures;
    for (int d = 1; d <= 3; ++d)
        for (double x : {0.0, 0.25, 0.5, 1.0}) {
            const auto r = verify_formula(construct_degree5(gaussian_cubature(d, 5), x));
            worst = std::max(worst, r.max_residual);
            if (r.max_residual > 1e-10)
                failures += fmt::format(" [d={} x={} residual {:.4g} at {}]", d, x, r.max_residual, r.worst.front().word.to_string());
        }
    const double t = seconds_since(t0);
    const bool pass = failures.empty() && t < 5.0;
    return {pass, fmt::format("max residual {:.2e} (limit 1e-10), {:.2f} s (limit 5 s){}", worst, t, failures)};
}

Outcome degree7()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto f = construct_degree7();
    const auto r = verify_formula(f);
    const double t = seconds_since(t0);
    const bool pass = r.max_residual <= 1e-9 && t < 60.0;
    std::string detail = fmt::format("{} entries, max residual {:.2e} over {} words (limit 1e-9), {:.2f} s (limit 60 s)", f.size(),
                                     r.max_residual, WordBasis::get(3, 7)->size(), t);
    if (r.max_residual > 1e-9)
        for (const auto& e : r.worst) detail += fmt::format(" [{} lhs {} rhs {}]", e.word.to_string(), e.lhs, e.rhs);
    return {pass, detail};
}

// blocks of a single 0 or a pair (i,i): (1/2)^pairs / blocks!
Rational block_oracle(const Word& w, const Rational& T)
{
    int blocks = 0, pairs = 0;
    for (std::size_t i = 0; i < w.size(); ++blocks) {
        if (w[i] == 0) {
            ++i;
        } else if (i + 1 < w.size() && w[i + 1] == w[i]) {
            ++pairs;
            i += 2;
        } else {
            return 0;
        }
    }
    Rational c = 1;
    for (int k = 2; k <= blocks; ++k) c /= k;
    for (int p = 0; p < pairs; ++p) c /= 2;
    for (int g = 0; g < graded_degree(w) / 2; ++g) c *= T;
    return c;
}

Outcome oracle()
{
    std::size_t checked = 0, mismatches = 0;
    for (int d = 1; d <= 3; ++d)
        for (const Rational& T : {Rational(1), Rational(1, 3)}) {
            const auto e = expected_signature<Rational>(d, 8, T);
            for (std::size_t i = 0; i < e.data().size(); ++i, ++checked)
                if (e.data()[i] != block_oracle(e.basis().word(i), T)) ++mismatches;
        }
    return {mismatches == 0, fmt::format("{} exact coefficients compared (d<=3, degree<=8, T in {{1, 1/3}}), {} mismatches", checked, mismatches)};
}

Outcome moments()
{
    double worst = 0.0;
    int rules = 0;
    bool positive = true;
    for (int degree : {3, 5, 7})
        for (int d = 1; d <= (degree == 7 ? 3 : 10); ++d)
            for (auto rule : {GaussianRule::automatic, GaussianRule::product, GaussianRule::compact}) {
                if (rule == GaussianRule::compact && (degree == 7 || (degree == 5 && d > 4))) continue;
                if (rule == GaussianRule::product && std::pow((degree + 1) / 2, d) > 2e5) continue;
                const auto g = gaussian_cubature(d, degree, rule);
                worst = std::max(worst, verify_moments(g, degree, Measure::gaussian));
                for (double w : g.weights) positive = positive && w > 0.0;
                ++rules;
            }
    double bernoulli = 0.0;
    for (int d = 1; d <= 8; ++d) bernoulli = std::max(bernoulli, verify_moments(bernoulli_full(d), 9, Measure::bernoulli));
    return {worst <= 1e-10 && bernoulli == 0.0 && positive,
            fmt::format("{} Gaussian rules, max moment error {:.2e} (limit 1e-10); Bernoulli d=1..8 at degree 9 error {}", rules, worst,
                        bernoulli)};
}

Outcome pbw()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const int d = 3, depth = 6;
    const auto basis = WordBasis::get(d, depth);
    std::uniform_int_distribution<std::size_t> slot(1, basis->size() - 1);
    double worst = 0.0;

    std::vector<Tensor> samples;
    // the symmetrised product of three squares
    for (Letter i = 1; i <= 3; ++i)
        for (Letter j = i; j <= 3; ++j)
            for (Letter k = j; k <= 3; ++k) {
                auto sq = [&](Letter l) { return Tensor::from_word(d, depth, Word{l, l}); };
                samples.push_back(symmetrised_product(std::vector<Tensor>{sq(i), sq(j), sq(k)}, d, depth));
            }
    while (samples.size() < 100) {
        Tensor t(d, depth);
        for (int k = 0; k < 40; ++k) t.data()[slot(rng)] = coeff(rng);
        samples.push_back(samples.size() % 2 ? t : exp_series(t));
    }
    for (const auto& t : samples) worst = std::max(worst, max_abs_diff(pbw_expand(pbw_coordinates(t), d, depth), t));

    // log of a product of two group-like elements
    bool lie = true;
    for (int trial = 0; trial < 5; ++trial) {
        auto random_lie = [&] {
            LiePolynomial p(d);
            for (const auto& w : lyndon_words(d + 1, 4))
                if (graded_degree(w) <= depth) p.add(coeff(rng), standard_bracketing(w));
            return p.to_tensor(depth);
        };
        const auto g = exp_series(random_lie()) * exp_series(random_lie());
        lie = lie && is_lie_element(log_series(g), 1e-10);
    }
    return {worst <= 1e-10 && lie,
            fmt::format("{} round trips at d=3, degree 6, max error {:.2e} (limit 1e-10); BCH logs Lie: {}", samples.size(), worst,
                        lie ? "yes" : "no")};
}

std::optional<double> single_step_slope(const SDEProblem& base, const WienerCubatureFormula& f)
{
    ConvergenceOptions o;
    for (int k = 1; k <= 6; ++k) o.times.push_back(std::ldexp(1.0, -k));
    o.tree.threads = 4;
    return convergence_experiment(base, {f}, o).fits.front().slope;
}

Outcome convergence()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto gbm = linear_scalar_problem(0.05, {0.2}, 1.0, 1.0);
    const auto s3 = single_step_slope(gbm, construct_degree3(gaussian_cubature(1, 3)));
    const auto s5 = single_step_slope(gbm, construct_degree5(gaussian_cubature(1, 5)));
    // commuting drivers: dX = a X dt + sum_i b_i X o dB^i
    const auto lin3 = linear_scalar_problem(0.05, {0.3, 0.4, 0.5}, 1.0, 1.0);
    const auto s7 = single_step_slope(lin3, construct_degree7());
    const double t = seconds_since(t0);
    auto show = [](const std::optional<double>& s) { return s ? fmt::format("{:.3f}", *s) : std::string("none"); };
    const bool pass = s3 && *s3 >= 1.6 && *s3 <= 2.6 && s5 && *s5 >= 2.5 && *s5 <= 3.6 && s7 && *s7 >= 3.4 && t < 300.0;
    return {pass, fmt::format("slopes: degree 3 {} in [1.6, 2.6], degree 5 {} in [2.5, 3.6], degree 7 {} >= 3.4; {:.1f} s (limit 300 s)",
                              show(s3), show(s5), show(s7), t)};
}

Outcome multistep()
{
    const auto gbm = linear_scalar_problem(0.05, {0.2}, 1.0, 1.0);
    const auto f = construct_degree3(gaussian_cubature(1, 3));
    bool monotone = true, leaves = true;
    double previous = INFINITY;
    std::string errors;
    std::size_t expected_leaves = 1;
    for (int k = 1; k <= 5; ++k) {
        const auto r = cubature_tree(gbm, f, k);
        expected_leaves *= f.size();
        leaves = leaves && r.leaf_count == expected_leaves;
        monotone = monotone && *r.abs_error < previous;
        previous = *r.abs_error;
        errors += fmt::format("{}{:.3e}", k == 1 ? "" : ", ", *r.abs_error);
    }
    const double ta = cubature_tree(gbm, f, 4, {Method::taylor}).estimate;
    const double lo = cubature_tree(gbm, f, 4, {Method::logode}).estimate;
    const double gap = std::abs(ta - lo);
    return {monotone && leaves && gap <= 1e-3,
            fmt::format("errors k=1..5: {} ({}decreasing); Taylor vs Log-ODE at k=4 differ by {:.2e} (limit 1e-3); leaf counts n^k: {}",
                        errors, monotone ? "" : "not ", gap, leaves ? "yes" : "no")};
}

Outcome determinism()
{
    const auto gbm = linear_scalar_problem(0.05, {0.2}, 1.0, 1.0, 2);
    bool tree = true;
    for (auto method : {Method::taylor, Method::logode})
        for (const auto& f : {construct_degree3(gaussian_cubature(1, 3)), construct_degree5(gaussian_cubature(1, 5))}) {
            double reference = 0.0;
            for (int threads : {1, 2, 3, 8}) {
                TreeOptions o{method};
                o.threads = threads;
                const double e = cubature_tree(gbm, f, 4, o).estimate;
                if (threads == 1)
                    reference = e;
                else
                    tree = tree && e == reference;
            }
        }
    const auto f7 = construct_degree7();
    const auto v1 = formula_expectation(f7, 7, 1), v8 = formula_expectation(f7, 7, 8);
    const bool verify = v1.data() == v8.data();

    MonteCarloOptions o;
    o.paths = 5000;
    o.steps = 20;
    o.seed = 7;
    const auto a = monte_carlo(gbm, o), b = monte_carlo(gbm, o);
    const bool mc = a.estimate == b.estimate && a.std_error == b.std_error;
    return {tree && verify && mc, fmt::format("tree estimates across 1/2/3/8 threads identical: {}; degree-7 verification sums identical: {}; "
                                              "Monte Carlo repeat with seed 7 identical: {}",
                                              tree ? "yes" : "no", verify ? "yes" : "no", mc ? "yes" : "no")};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"degree-3 verification", degree3},
        {"degree-5 verification", degree5},
        {"degree-7 verification", degree7},
        {"oracle equivalence", oracle},
        {"Gaussian moment checks", moments},
        {"PBW machinery", pbw},
        {"convergence orders", convergence},
        {"multi-step sanity", multistep},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << fmt::format("criterion {}: {} {}: {}", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail) << std::endl;
    }
    std::cout << fmt::format("{} of {} criteria passed", criteria.size() - static_cast<std::size_t>(failed), criteria.size()) << std::endl;
    return failed == 0 ? 0 : 1;
}
