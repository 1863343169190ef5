#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wcub/measures.hpp"
#include "wcub/polynomial.hpp"
#include "wcub/problem.hpp"
#include "wcub/sde.hpp"
#include "wcub/vector_field.hpp"
#include "wcub/wiener.hpp"

#include <cmath>

using namespace wcub;

namespace {

using Matrix = VectorField::Matrix;

std::vector<double> mat_vec(const Matrix& A, const std::vector<double>& x)
{
    std::vector<double> y(A.size(), 0.0);
    for (std::size_t r = 0; r < A.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) y[r] += A[r][c] * x[c];
    return y;
}

Matrix zeros(std::size_t n) { return Matrix(n, std::vector<double>(n, 0.0)); }

// dX = c dt + 0 dB, solved exactly by the Taylor expansion
SDEProblem constant_drift(double c, double x0, double T)
{
    SDEProblem p{VectorField::affine({zeros(1), zeros(1)}, {{c}, {0.0}}), {x0}, {}, T, {}, {}};
    p.reference_at = [c, x0](double t) { return x0 + c * t; };
    return p;
}

// The same field as VectorField::linear_scalar, seen through an evaluator.
VectorField generic_linear(double a, double b, int max_order)
{
    return VectorField::generic(
        1, 1, [a, b](int j, std::span<const double> x) { return std::vector<double>{(j == 0 ? a : b) * x[0]}; }, max_order);
}

WienerCubatureFormula degree(int m, int d = 1) { return m == 3 ? construct_degree3(gaussian_cubature(d, 3)) : construct_degree5(gaussian_cubature(d, 5)); }

} // namespace

TEST_CASE("polynomials")
{
    const auto x = Polynomial::variable(2, 0);
    const auto y = Polynomial::variable(2, 1);
    auto p = x * x * y * 2.0;
    p -= Polynomial::constant(2, 0.5);
    CHECK(p.total_degree() == 3);
    CHECK(p.to_string() == "-0.5 + 2*x0^2*x1");
    const std::vector<double> pt{3.0, -1.0};
    CHECK(p.evaluate(pt) == -18.5);
    CHECK(p.derivative(0) == x * y * 4.0);
    CHECK(p.derivative(1).derivative(1).is_zero());
    CHECK((p - p).is_zero());
}

TEST_CASE("derivative tower")
{
    const Matrix A{{1, 2}, {0, -1}};
    const auto v = VectorField::affine({A, zeros(2)});
    const std::vector<double> x{0.5, -2.0};
    const auto tower = derivative_tower(v, x, 4);
    CHECK(tower.at(Word{}) == x);
    std::vector<double> Ak = x;
    Word zeros_word;
    for (int k = 1; k <= 4; ++k) {
        Ak = mat_vec(A, Ak);
        zeros_word.push_back(0);
        CHECK(tower.at(zeros_word) == Ak);
    }
    CHECK(tower.at(Word{1, 0}) == std::vector<double>{0.0, 0.0});

    // constant field: everything beyond first order vanishes
    const auto c = VectorField::affine({zeros(1), zeros(1)}, {{2.0}, {3.0}});
    const auto ct = derivative_tower(c, std::vector<double>{1.0}, 3);
    CHECK(ct.at(Word{1}) == std::vector<double>{3.0});
    for (const auto& [w, val] : ct)
        if (w.size() >= 2) CHECK(val == std::vector<double>{0.0});

    // dependence order: the first letter acts last
    const auto q = VectorField::polynomial(1, {{Polynomial::constant(1, 1.0)}, {Polynomial::variable(1, 0) * Polynomial::variable(1, 0)}});
    const std::vector<double> x1{2.0};
    const DerivativeTower qt(q, 4);
    CHECK(qt.evaluate(Word{1, 0}, x1) == std::vector<double>{0.0});
    CHECK(qt.evaluate(Word{0, 1}, x1) == std::vector<double>{4.0});
    CHECK(qt.evaluate(Word{1, 1}, x1) == std::vector<double>{16.0});
}

TEST_CASE("numeric towers of generic fields")
{
    const auto exact = VectorField::linear_scalar(0.3, {0.7});
    const auto numeric = generic_linear(0.3, 0.7, 4);
    const std::vector<double> x{1.3};
    const auto te = derivative_tower(exact, x, 4);
    const auto tn = derivative_tower(numeric, x, 4);
    for (const auto& [w, val] : te) {
        CAPTURE(w.to_string());
        const double tol = w.size() <= 1 ? 0.0 : std::pow(10.0, -10.0 + 2.0 * static_cast<double>(w.size()));
        CHECK(std::abs(tn.at(w)[0] - val[0]) <= tol);
    }
    CHECK_THROWS_AS((void)derivative_tower(numeric, x, 5), std::domain_error);
    CHECK_THROWS_AS((void)taylor_step(x, exp_series(Tensor::letter(1, 7, 1)), generic_linear(0.3, 0.7, 2), 7), std::domain_error);
}

TEST_CASE("Taylor step")
{
    const auto gbm = VectorField::linear_scalar(0.05, {0.2});
    const std::vector<double> x{1.5};
    CHECK(taylor_step(x, Tensor::unit(1, 5), gbm, 5) == x);

    // drift only: exp(T e0) at graded depth 10 holds the powers up to 5
    const double a = 0.7, T = 0.4;
    const auto drift = VectorField::linear_scalar(a, {0.0});
    const auto L = exp_series(Tensor::letter(1, 10, 0, T));
    double series = 0.0, term = 1.0;
    for (int k = 0; k <= 5; ++k) {
        series += term;
        term *= a * T / (k + 1);
    }
    CHECK(taylor_step(x, L, drift, 10)[0] == doctest::Approx(x[0] * series).epsilon(1e-15));

    // contracting against the expected signature at degree 3
    const double b = 0.2;
    const auto es = expected_signature<double>(1, 3, T);
    CHECK(taylor_step(x, es, VectorField::linear_scalar(a, {b}), 3)[0] ==
          doctest::Approx(x[0] * (1 + (a + b * b / 2) * T)).epsilon(1e-15));

    // integer matrices, no diffusion: the truncated matrix exponential
    const Matrix A{{1, 2, 0}, {0, 1, -1}, {3, 0, 2}};
    const auto aff = VectorField::affine({A, zeros(3)});
    const std::vector<double> y{1, -1, 2};
    for (int m : {2, 4, 6, 8}) {
        std::vector<double> expected = y, power = y;
        double fact = 1.0;
        for (int k = 1; 2 * k <= m; ++k) {
            power = mat_vec(A, power);
            fact *= k;
            for (std::size_t i = 0; i < 3; ++i) expected[i] += power[i] / fact;
        }
        const auto got = taylor_step(y, exp_series(Tensor::letter(1, m, 0)), aff, m);
        for (std::size_t i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-14));
    }
}

TEST_CASE("Log-ODE step")
{
    const double x0 = 1.2;
    for (double aT : {0.05, 0.1}) {
        LiePolynomial l(1);
        l.add(aT, "0");
        const auto z = logode_step(std::vector<double>{x0}, l, VectorField::linear_scalar(1.0, {0.0}), 3);
        CHECK(std::abs(z[0] - x0 * std::exp(aT)) <= 1e-10);
    }
    LiePolynomial one(1);
    one.add(1.0, "0");
    const auto z = logode_step(std::vector<double>{x0}, one, VectorField::linear_scalar(1.0, {0.0}), 3, 256);
    CHECK(std::abs(z[0] - x0 * std::exp(1.0)) <= 1e-10);

    const auto gbm = VectorField::linear_scalar(0.05, {0.2});
    CHECK(logode_step(std::vector<double>{x0}, LiePolynomial(1), gbm, 3) == std::vector<double>{x0});

    // the two degree-3 entries reproduce the Taylor estimate to O(T^2)
    for (double T : {0.1, 0.01}) {
        const auto f = scale_formula(construct_degree3(gaussian_cubature(1, 3)), T);
        double lo = 0.0, ta = 0.0;
        for (const auto& e : f.entries) {
            lo += e.weight * logode_step(std::vector<double>{x0}, e.poly, gbm, 3)[0];
            ta += e.weight * taylor_step(std::vector<double>{x0}, exp_series(e.poly.to_tensor(3)), gbm, 3)[0];
        }
        CHECK(std::abs(lo - ta) <= 0.05 * T * T);
    }
}

TEST_CASE("cubature tree")
{
    const auto problem = linear_scalar_problem(0.05, {0.2}, 1.0, 1.0);
    const auto f3 = degree(3), f5 = degree(5);
    CHECK(cubature_tree(problem, f3, 1).leaf_count == f3.size());
    CHECK(f5.size() == 6);
    CHECK(cubature_tree(problem, f5, 3).leaf_count == 216);

    for (int k = 1; k <= 6; ++k) {
        CHECK(std::abs(cubature_tree(problem, f3, k).weight_sum - 1.0) <= 1e-12);
        CHECK(std::abs(cubature_tree(problem, f5, k).weight_sum - 1.0) <= 1e-12);
    }

    const SDEProblem still{VectorField::affine({zeros(2), zeros(2)}), {0.25, -3.0}, Payoff::parse("coordinate:1"), 2.0, {}, {}};
    for (auto method : {Method::taylor, Method::logode}) {
        const auto r = cubature_tree(still, construct_degree3(gaussian_cubature(1, 3)), 3, {method});
        CHECK(r.estimate == -3.0);
    }

    TreeOptions small;
    small.leaf_budget = 100;
    CHECK_THROWS_AS((void)cubature_tree(problem, f5, 3, small), BudgetExceeded);
    CHECK_THROWS_AS((void)cubature_tree(problem, degree(3, 2), 1), std::invalid_argument);
    CHECK_THROWS_AS((void)cubature_tree(problem, f3, 1, {Method::montecarlo}), std::invalid_argument);
}

TEST_CASE("tree estimates do not depend on the thread count")
{
    const auto problem = linear_scalar_problem(0.05, {0.2}, 1.0, 1.0, 2);
    for (auto method : {Method::taylor, Method::logode}) {
        TreeOptions one{method}, many{method};
        many.threads = 5;
        const auto a = cubature_tree(problem, degree(5), 4, one);
        const auto b = cubature_tree(problem, degree(5), 4, many);
        CHECK(a.estimate == b.estimate);
        CHECK(a.mean_state == b.mean_state);
        CHECK(a.weight_sum == b.weight_sum);
    }
}

TEST_CASE("multi-step errors")
{
    const auto problem = linear_scalar_problem(0.05, {0.2}, 1.0, 1.0);
    double previous = INFINITY;
    for (int k = 1; k <= 5; ++k) {
        const auto r = cubature_tree(problem, degree(3), k);
        REQUIRE(r.abs_error);
        CHECK(*r.abs_error < previous);
        previous = *r.abs_error;
    }
    const auto ta = cubature_tree(problem, degree(3), 4, {Method::taylor});
    const auto lo = cubature_tree(problem, degree(3), 4, {Method::logode});
    CHECK(std::abs(ta.estimate - lo.estimate) <= 1e-3);
}

TEST_CASE("Monte Carlo")
{
    const auto problem = linear_scalar_problem(0.05, {0.2}, 1.0, 1.0);
    MonteCarloOptions o;
    o.paths = 2000;
    o.steps = 20;
    o.seed = 7;
    const auto a = monte_carlo(problem, o);
    const auto b = monte_carlo(problem, o);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    o.threads = 3;
    CHECK(monte_carlo(problem, o).estimate == a.estimate);
    o.seed = 8;
    CHECK(monte_carlo(problem, o).estimate != a.estimate);

    MonteCarloOptions big;
    big.paths = 100'000;
    big.steps = 50;
    big.threads = 4;
    const auto r = monte_carlo(problem, big);
    REQUIRE(r.std_error);
    CHECK(std::abs(r.estimate - *problem.reference) <= 4 * *r.std_error);

    const auto ode = linear_scalar_problem(0.3, {0.0}, 2.0, 1.0);
    MonteCarloOptions few;
    few.paths = 3;
    few.steps = 200;
    CHECK(monte_carlo(ode, few).estimate == doctest::Approx(2.0 * std::exp(0.3)).epsilon(1e-6));
    CHECK(*monte_carlo(ode, few).std_error <= 1e-12);
}

TEST_CASE("slope fitting")
{
    const std::vector<double> h{1, 0.5, 0.25, 0.125};
    std::vector<double> e;
    for (double x : h) e.push_back(3 * x * x);
    std::size_t used = 0;
    CHECK(*fit_slope(h, e, 1e-12, &used) == doctest::Approx(2.0));
    CHECK(used == 4);
    e[3] = 1e-14;
    e[2] = 0.0;
    CHECK_FALSE(fit_slope(h, e).has_value());
}

TEST_CASE("convergence experiment")
{
    const auto problem = linear_scalar_problem(0.05, {0.2}, 1.0, 1.0);
    ConvergenceOptions o;
    for (int k = 1; k <= 6; ++k) o.times.push_back(std::ldexp(1.0, -k));
    const auto res = convergence_experiment(problem, {degree(3), degree(5)}, o);
    CHECK(res.rows.size() == 12);
    REQUIRE(res.fits.size() == 2);
    CHECK(*res.fits[0].slope == doctest::Approx(2.0).epsilon(0.1));
    CHECK(*res.fits[1].slope == doctest::Approx(3.0).epsilon(0.1));
    CHECK(convergence_csv(res).rfind("degree,T,steps,method,estimate,abs_error\n3,0.5,1,taylor,", 0) == 0);

    // the expansion is exact for a constant drift: nothing to fit
    const auto exact = convergence_experiment(constant_drift(0.5, 1.0, 1.0), {degree(3)}, o);
    for (const auto& row : exact.rows) CHECK(row.abs_error <= 1e-15);
    CHECK_FALSE(exact.fits[0].slope.has_value());

    SDEProblem unknown{VectorField::linear_scalar(0.1, {0.1}), {1.0}, {}, 1.0, {}, {}};
    CHECK_THROWS_AS((void)convergence_experiment(unknown, {degree(3)}, o), std::invalid_argument);
}

TEST_CASE("signature-level system")
{
    // X = B in two dimensions
    const auto brownian = VectorField::affine({zeros(2), zeros(2), zeros(2)}, {{0, 0}, {1, 0}, {0, 1}});
    const auto sys1 = signature_level_system(brownian, 1);
    CHECK(sys1.words == std::vector<Word>{Word{0}, Word{1}});
    const std::vector<double> x0{0.3, -0.2};
    const auto s0 = sys1.initial_state(x0);
    CHECK(s0 == std::vector<double>{0.3, -0.2, 0.0, 0.0});

    // level one is the increment: along a deterministic path it is X_T - X_0
    const auto drift = VectorField::affine({Matrix{{0.5, 0}, {0, -1}}, zeros(2)});
    const auto sysd = signature_level_system(drift, 1);
    LiePolynomial l(1);
    l.add(0.8, "0");
    const auto z = logode_step(sysd.initial_state(x0), l, sysd.field, 3, 64);
    CHECK(z[2] == doctest::Approx(z[0] - x0[0]).epsilon(1e-12));
    CHECK(z[3] == doctest::Approx(z[1] - x0[1]).epsilon(1e-12));

    const double T = 0.5;
    const auto sys2 = signature_level_system(brownian, 2);
    CHECK(sys2.words.size() == 6);
    const auto f5 = construct_degree5(gaussian_cubature(2, 5));
    for (Letter a = 0; a < 2; ++a)
        for (Letter b = 0; b < 2; ++b) {
            const int idx = static_cast<int>(sys2.index_of(Word{a, b}));
            SDEProblem p{sys2.field, sys2.initial_state(x0), Payoff{idx, 1}, T, {}, {}};
            const double est = cubature_tree(p, f5, 1, {Method::logode}).estimate;
            const double expected = expected_signature_coefficient<double>(Word{a + 1, b + 1}, T);
            CHECK(std::abs(est - expected) <= 1e-3);
        }

    // level-L dynamics only read the state and lower levels
    const auto sys3 = signature_level_system(VectorField::linear_scalar(0.1, {0.3}), 3);
    for (std::size_t i = 0; i < sys3.words.size(); ++i) {
        const std::size_t len = sys3.words[i].size();
        for (const auto& direction : sys3.field.polynomials())
            for (const auto& [e, c] : direction[1 + i].terms())
                for (std::size_t var = 1; var < e.size(); ++var)
                    if (e[var] > 0) CHECK(sys3.words[var - 1].size() < len);
    }
    CHECK_THROWS_AS((void)signature_level_system(brownian, 5), std::invalid_argument);
    CHECK_THROWS_AS((void)signature_level_system(brownian, 4, 16), std::length_error);

    const auto sysg = signature_level_system(generic_linear(0.1, 0.3, 6), 2);
    CHECK(sysg.field.kind() == FieldKind::generic);
    CHECK(sysg.field.evaluate(1, std::vector<double>{2.0, 0.5, 0.25})[2] == doctest::Approx(0.5 * 0.6));
}

TEST_CASE("payoffs and problem files")
{
    CHECK(Payoff::parse("identity").index == 0);
    CHECK(Payoff::parse("coordinate:2").index == 2);
    const auto sq = Payoff::parse("power:1:2");
    CHECK(sq(std::vector<double>{5.0, 3.0}) == 9.0);
    CHECK(sq.to_string() == "power:1:2");
    CHECK_THROWS_AS((void)Payoff::parse("max(x,0)"), std::invalid_argument);

    auto gbm = problem_from_json(nlohmann::json::parse(
        R"({"state_dim":1,"driving_dim":2,"kind":"gbm","params":{"a":0.05,"b":[0.2,0.1]},"x0":[2.0],"payoff":"power:0:2","T":0.5,"reference":null})"));
    CHECK(*gbm.reference == doctest::Approx(4.0 * std::exp(2 * 0.05 * 0.5 + 2 * 0.05 * 0.5)));
    CHECK(*gbm.reference_for(1.0) == doctest::Approx(4.0 * std::exp(0.1 + 0.1)));

    auto affine = problem_from_json(nlohmann::json::parse(
        R"({"state_dim":2,"driving_dim":1,"kind":"affine","params":{"A":[[[0,1],[-1,0]],[[0,0],[0,0]]],"b":[[0,0],[1,0]]},"x0":[1,0],"payoff":"coordinate:1","T":1.0,"reference":0.5})"));
    CHECK(affine.field.state_dim() == 2);
    CHECK(*affine.reference == 0.5);
    CHECK_FALSE(affine.reference_for(2.0).has_value());

    auto poly = problem_from_json(nlohmann::json::parse(
        R"({"state_dim":1,"driving_dim":1,"kind":"polynomial","params":{"fields":[[[{"coeff":-0.5,"powers":[1]}]],[[{"coeff":1.0,"powers":[0]},{"coeff":0.1,"powers":[2]}]]]},"x0":[0.0],"T":1.0})"));
    CHECK(poly.field.evaluate(1, std::vector<double>{2.0})[0] == doctest::Approx(1.4));
    CHECK_FALSE(poly.reference.has_value());

    for (const char* bad : {
             R"({"state_dim":1,"driving_dim":2,"kind":"gbm","params":{"a":0.05,"b":0.2},"x0":[1.0],"T":1.0})",
             R"({"state_dim":1,"driving_dim":1,"kind":"heston","params":{},"x0":[1.0],"T":1.0})",
             R"({"state_dim":1,"driving_dim":1,"kind":"gbm","params":{"a":0.05,"b":0.2},"x0":[1.0],"T":-1.0})",
             R"({"state_dim":1,"driving_dim":1,"kind":"gbm","params":{"a":0.05},"x0":[1.0],"T":1.0})",
         })
        CHECK_THROWS_AS((void)problem_from_json(nlohmann::json::parse(bad)), std::invalid_argument);
}

TEST_CASE("Taylor and Log-ODE steps agree to the order of the formula")
{
    const auto problem = linear_scalar_problem(0.05, {0.2}, 1.0, 1.0);
    for (int m : {3, 5}) {
        std::vector<double> h, diff;
        for (int k = 1; k <= 6; ++k) {
            auto p = problem;
            p.T = std::ldexp(1.0, -k);
            const double ta = cubature_tree(p, degree(m), 1, {Method::taylor}).estimate;
            const double lo = cubature_tree(p, degree(m), 1, {Method::logode}).estimate;
            h.push_back(p.T);
            diff.push_back(std::abs(ta - lo));
        }
        const auto slope = fit_slope(h, diff);
        REQUIRE(slope);
        CAPTURE(m);
        CHECK(*slope >= (m + 1) / 2.0 - 0.5);
    }
}
