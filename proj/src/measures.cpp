#include "wcub/measures.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wcub {

double PointCubature::weight_sum() const
{
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

PointCubature bernoulli_full(int dim)
{
    if (dim < 1 || dim > 16) throw std::invalid_argument("bernoulli_full: dimension must be in [1, 16]");
    PointCubature rule;
    rule.dim = dim;
    rule.degree = 1 << 30;
    rule.name = "bernoulli-full";
    const std::size_t n = std::size_t{1} << dim;
    const double w = std::ldexp(1.0, -dim);
    for (std::size_t mask = 0; mask < n; ++mask) {
        std::vector<double> p(static_cast<std::size_t>(dim));
        // first coordinate varies slowest, matching nested sign loops
        for (int i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = (mask >> (dim - 1 - i)) & 1u ? 1.0 : -1.0;
        rule.points.push_back(std::move(p));
        rule.weights.push_back(w);
    }
    return rule;
}

std::string to_string(GaussianRule rule)
{
    switch (rule) {
    case GaussianRule::automatic: return "auto";
    case GaussianRule::product: return "product";
    case GaussianRule::compact: return "compact";
    }
    return "auto";
}

GaussianRule parse_gaussian_rule(const std::string& name)
{
    if (name == "auto") return GaussianRule::automatic;
    if (name == "product") return GaussianRule::product;
    if (name == "compact") return GaussianRule::compact;
    throw std::invalid_argument("unknown Gaussian rule '" + name + "' (expected auto, product or compact)");
}

double gaussian_moment(int k)
{
    if (k < 0) throw std::invalid_argument("gaussian_moment: negative order");
    if (k % 2) return 0.0;
    double m = 1.0;
    for (int j = k - 1; j > 1; j -= 2) m *= j;
    return m;
}

PointCubature gauss_hermite(int n)
{
    if (n < 1 || n > 64) throw std::invalid_argument("gauss_hermite: node count must be in [1, 64]");
    // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigen solver failed");

    PointCubature rule;
    rule.dim = 1;
    rule.degree = 2 * n - 1;
    rule.name = "gauss-hermite-" + std::to_string(n);
    // (He_n(x), He_{n-1}(x)) by the three-term recurrence
    auto hermite = [n](double x) {
        double prev = 1.0, cur = x;
        if (n == 1) return std::pair{cur, prev};
        for (int k = 1; k < n; ++k) {
            double next = x * cur - k * prev;
            prev = cur;
            cur = next;
        }
        return std::pair{cur, prev};
    };
    const double factorial = std::tgamma(static_cast<double>(n) + 1.0);
    for (int i = 0; i < n; ++i) {
        double x = solver.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            auto [hn, hnm1] = hermite(x);
            x -= hn / (n * hnm1); // He_n' = n He_{n-1}
        }
        auto [hn, hnm1] = hermite(x);
        (void)hn;
        rule.points.push_back({x});
        rule.weights.push_back(factorial / (static_cast<double>(n) * n * hnm1 * hnm1));
    }
    // symmetrize to remove last-bit asymmetry of the eigen solver
    for (int i = 0; i < n / 2; ++i) {
        auto j = static_cast<std::size_t>(n - 1 - i);
        auto ii = static_cast<std::size_t>(i);
        double x = 0.5 * (rule.points[j][0] - rule.points[ii][0]);
        double w = 0.5 * (rule.weights[ii] + rule.weights[j]);
        rule.points[ii][0] = -x;
        rule.points[j][0] = x;
        rule.weights[ii] = rule.weights[j] = w;
    }
    if (n % 2) rule.points[static_cast<std::size_t>(n / 2)][0] = 0.0;
    double total = rule.weight_sum();
    for (auto& w : rule.weights) w /= total;
    return rule;
}

namespace {

PointCubature product_rule(int dim, int degree)
{
    const int n = (degree + 2) / 2;
    const PointCubature one = gauss_hermite(n);
    PointCubature rule;
    rule.dim = dim;
    rule.degree = degree;
    rule.name = "product-gauss-hermite-" + std::to_string(n);
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<double> p(static_cast<std::size_t>(dim));
        double w = 1.0;
        std::size_t rest = idx;
        for (int i = dim - 1; i >= 0; --i) {
            auto k = rest % static_cast<std::size_t>(n);
            rest /= static_cast<std::size_t>(n);
            p[static_cast<std::size_t>(i)] = one.points[k][0];
            w *= one.weights[k];
        }
        rule.points.push_back(std::move(p));
        rule.weights.push_back(w);
    }
    return rule;
}

PointCubature axis_rule_degree3(int dim)
{
    PointCubature rule;
    rule.dim = dim;
    rule.degree = 3;
    rule.name = "axis-2d";
    const double r = std::sqrt(static_cast<double>(dim));
    const double w = 1.0 / (2.0 * dim);
    for (int i = 0; i < dim; ++i) {
        for (double sign : {1.0, -1.0}) {
            std::vector<double> p(static_cast<std::size_t>(dim), 0.0);
            p[static_cast<std::size_t>(i)] = sign * r;
            rule.points.push_back(std::move(p));
            rule.weights.push_back(w);
        }
    }
    return rule;
}

// Origin, 2d axis points at radius sqrt(d+2) and 2d(d-1) points
// (+-s, +-s) in each coordinate plane, s^2 = (d+2)/2.
PointCubature compact_rule_degree5(int dim)
{
    if (dim > 4) throw std::invalid_argument("compact degree-5 rule has negative weights for d > 4");
    const double d = dim;
    const double w0 = 2.0 / (d + 2.0);
    const double w1 = (4.0 - d) / (2.0 * (d + 2.0) * (d + 2.0));
    const double w2 = 1.0 / ((d + 2.0) * (d + 2.0));
    const double r = std::sqrt(d + 2.0);
    const double s = std::sqrt((d + 2.0) / 2.0);

    PointCubature rule;
    rule.dim = dim;
    rule.degree = 5;
    rule.name = "compact-2d2+1";
    const auto n = static_cast<std::size_t>(dim);
    rule.points.emplace_back(n, 0.0);
    rule.weights.push_back(w0);
    if (w1 > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            for (double sign : {1.0, -1.0}) {
                std::vector<double> p(n, 0.0);
                p[i] = sign * r;
                rule.points.push_back(std::move(p));
                rule.weights.push_back(w1);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (double si : {1.0, -1.0}) {
                for (double sj : {1.0, -1.0}) {
                    std::vector<double> p(n, 0.0);
                    p[i] = si * s;
                    p[j] = sj * s;
                    rule.points.push_back(std::move(p));
                    rule.weights.push_back(w2);
                }
            }
        }
    }
    return rule;
}

} // namespace

PointCubature gaussian_cubature(int dim, int degree, GaussianRule rule)
{
    if (dim < 1) throw std::invalid_argument("gaussian_cubature: dimension must be >= 1");
    if (degree != 3 && degree != 5 && degree != 7)
        throw std::invalid_argument("gaussian_cubature: degree must be 3, 5 or 7");
    if (degree == 7 && dim > 6) throw std::invalid_argument("gaussian_cubature: degree 7 supported for d <= 6");
    if (degree != 7 && dim > 10) throw std::invalid_argument("gaussian_cubature: degree 3/5 supported for d <= 10");

    if (rule == GaussianRule::product) return product_rule(dim, degree);
    if (degree == 3) return dim == 1 ? product_rule(1, 3) : axis_rule_degree3(dim);
    if (degree == 5) {
        if (dim <= 4) return compact_rule_degree5(dim);
        if (rule == GaussianRule::compact)
            throw std::invalid_argument("gaussian_cubature: no compact positive degree-5 rule for d > 4");
        return product_rule(dim, 5);
    }
    if (rule == GaussianRule::compact) throw std::invalid_argument("gaussian_cubature: no compact degree-7 rule");
    return product_rule(dim, 7);
}

namespace {

struct MomentChecker {
    const PointCubature& rule;
    Measure measure;
    int degree;
    std::vector<int> exponents;
    double worst = 0.0;

    double oracle() const
    {
        double e = 1.0;
        for (int k : exponents) {
            if (measure == Measure::bernoulli)
                e *= (k % 2 == 0) ? 1.0 : 0.0;
            else
                e *= gaussian_moment(k);
        }
        return e;
    }

    void visit(int first_var, int remaining, const std::vector<double>& values)
    {
        double sum = 0.0;
        for (std::size_t p = 0; p < values.size(); ++p) sum += rule.weights[p] * values[p];
        worst = std::max(worst, std::abs(sum - oracle()));
        if (remaining == 0) return;
        std::vector<double> next(values.size());
        for (int v = first_var; v < rule.dim; ++v) {
            for (std::size_t p = 0; p < values.size(); ++p) next[p] = values[p] * rule.points[p][static_cast<std::size_t>(v)];
            ++exponents[static_cast<std::size_t>(v)];
            visit(v, remaining - 1, next);
            --exponents[static_cast<std::size_t>(v)];
        }
    }
};

} // namespace

double verify_moments(const PointCubature& rule, int degree, Measure measure)
{
    if (degree < 1) throw std::invalid_argument("verify_moments: degree must be >= 1");
    if (rule.points.size() != rule.weights.size()) throw std::invalid_argument("verify_moments: size mismatch");
    MomentChecker checker{rule, measure, degree, std::vector<int>(static_cast<std::size_t>(rule.dim), 0)};
    checker.visit(0, degree, std::vector<double>(rule.size(), 1.0));
    return checker.worst;
}

} // namespace wcub
