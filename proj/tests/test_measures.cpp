#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wcub/measures.hpp"

#include <cmath>
#include <functional>
#include <map>

using namespace wcub;

namespace {

double integrate(const PointCubature& c, const std::function<double(const std::vector<double>&)>& f)
{
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c.weights[k] * f(c.points[k]);
    return s;
}

// visit all exponent vectors with total degree <= max_degree
void for_each_multi_index(int dim, int max_degree, const std::function<void(const std::vector<int>&)>& f)
{
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == dim) {
            f(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[static_cast<std::size_t>(i)] = k;
            rec(i + 1, left - k);
        }
        e[static_cast<std::size_t>(i)] = 0;
    };
    rec(0, max_degree);
}

double monomial(const std::vector<double>& x, const std::vector<int>& e)
{
    double v = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) v *= std::pow(x[i], e[i]);
    return v;
}

} // namespace

TEST_CASE("Bernoulli full rule")
{
    const auto b1 = bernoulli_full(1);
    REQUIRE(b1.size() == 2);
    CHECK(b1.weights == std::vector<double>{0.5, 0.5});
    CHECK(bernoulli_full(4).size() == 16);
    CHECK(integrate(bernoulli_full(2), [](const auto& x) { return x[0] * x[1]; }) == 0.0);
    CHECK(verify_moments(bernoulli_full(3), 9, Measure::bernoulli) == 0.0);
    CHECK_THROWS_AS((void)bernoulli_full(0), std::invalid_argument);
    CHECK_THROWS_AS((void)bernoulli_full(17), std::invalid_argument);

    // even multi-degree -> exactly 1, anything else exactly 0
    for (int d = 1; d <= 4; ++d)
        for_each_multi_index(d, 6, [&](const std::vector<int>& e) {
            bool even = true;
            for (int k : e) even = even && k % 2 == 0;
            CHECK(integrate(bernoulli_full(d), [&](const auto& x) { return monomial(x, e); }) == (even ? 1.0 : 0.0));
        });
}

TEST_CASE("Gaussian rules")
{
    const auto g23 = gaussian_cubature(2, 3);
    REQUIRE(g23.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(g23.weights[k] == doctest::Approx(0.25));
        CHECK(g23.points[k][0] * g23.points[k][0] + g23.points[k][1] * g23.points[k][1] == doctest::Approx(2.0));
    }

    const auto g15 = gaussian_cubature(1, 5);
    REQUIRE(g15.size() == 3);
    std::map<double, double> by_point;
    for (std::size_t k = 0; k < 3; ++k) by_point[g15.points[k][0]] = g15.weights[k];
    const std::vector<std::pair<double, double>> expected{{-std::sqrt(3.0), 1.0 / 6}, {0.0, 2.0 / 3}, {std::sqrt(3.0), 1.0 / 6}};
    auto it = by_point.begin();
    for (const auto& [z, w] : expected) {
        CHECK(it->first == doctest::Approx(z));
        CHECK(it->second == doctest::Approx(w));
        ++it;
    }

    CHECK(gaussian_cubature(3, 7).size() == 64);
    CHECK(gaussian_cubature(3, 5, GaussianRule::product).size() == 27);
    CHECK(gaussian_cubature(3, 5, GaussianRule::compact).size() == 19);
    CHECK_THROWS_AS((void)gaussian_cubature(2, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)gaussian_cubature(11, 3), std::invalid_argument);
}

TEST_CASE("every shipped Gaussian rule passes its moment check")
{
    for (int degree : {3, 5, 7})
        for (int d = 1; d <= (degree == 7 ? 4 : 10); ++d)
            for (auto rule : {GaussianRule::automatic, GaussianRule::product, GaussianRule::compact}) {
                if (rule == GaussianRule::product && std::pow((degree + 1) / 2, d) > 2e5) continue;
                if (rule == GaussianRule::compact && (degree == 7 || (degree == 5 && d > 4))) {
                    CHECK_THROWS((void)gaussian_cubature(d, degree, rule));
                    continue;
                }
                CAPTURE(d);
                CAPTURE(degree);
                const auto g = gaussian_cubature(d, degree, rule);
                CHECK(verify_moments(g, degree, Measure::gaussian) <= 1e-10);
                CHECK(std::abs(g.weight_sum() - 1.0) <= 1e-12);
                for (double w : g.weights) CHECK(w > 0.0);
                // odd total degrees vanish by symmetry
                for_each_multi_index(d > 3 ? 3 : d, degree, [&](const std::vector<int>& e) {
                    int total = 0;
                    for (int k : e) total += k;
                    if (total % 2 == 0) return;
                    std::vector<int> full(static_cast<std::size_t>(d), 0);
                    std::copy(e.begin(), e.end(), full.begin());
                    CHECK(std::abs(integrate(g, [&](const auto& x) { return monomial(x, full); })) <= 1e-12);
                });
            }
}

TEST_CASE("moment check reports failures")
{
    // the axis rule integrates z1^4 to d, not 3
    for (int d : {1, 2, 4, 5}) {
        const auto g = gaussian_cubature(d, 3, GaussianRule::compact);
        CHECK(verify_moments(g, 4, Measure::gaussian) >= std::abs(d - 3.0) - 1e-12);
    }
    const auto g = gaussian_cubature(2, 3);
    CHECK(verify_moments(g, 1, Measure::gaussian) <= 1e-15);
    CHECK(gaussian_moment(4) == 3.0);
    CHECK(gaussian_moment(6) == 15.0);
    CHECK(gaussian_moment(5) == 0.0);
}

TEST_CASE("Gauss-Hermite nodes")
{
    for (int n = 1; n <= 12; ++n) {
        const auto g = gauss_hermite(n);
        CHECK(verify_moments(g, 2 * n - 1, Measure::gaussian) <= 1e-10 * std::max(1.0, gaussian_moment(2 * n - 2)));
        for (std::size_t k = 1; k < g.size(); ++k) CHECK(g.points[k - 1][0] < g.points[k][0]);
    }
}

TEST_CASE("rule names")
{
    CHECK(parse_gaussian_rule("product") == GaussianRule::product);
    CHECK(to_string(GaussianRule::compact) == "compact");
    CHECK_THROWS_AS((void)parse_gaussian_rule("minimal"), std::invalid_argument);
}
