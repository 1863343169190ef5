#pragma once

#include <string>
#include <vector>

namespace wcub {

enum class Measure { gaussian, bernoulli };

// Weighted point set in R^d.
struct PointCubature {
    int dim = 0;
    std::vector<std::vector<double>> points;
    std::vector<double> weights;
    int degree = 0;
    std::string name;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] double weight_sum() const;
};

// All 2^d sign vectors with weight 2^-d; exact for every polynomial degree.
[[nodiscard]] PointCubature bernoulli_full(int dim);

enum class GaussianRule {
    automatic, // compact rule when one with positive weights exists, else product
    product,   // tensor product Gauss-Hermite
    compact,   // 2d points for degree 3, 2d^2+1 points for degree 5 (d <= 4)
};

[[nodiscard]] std::string to_string(GaussianRule rule);
[[nodiscard]] GaussianRule parse_gaussian_rule(const std::string& name);

// Cubature for the standard normal measure N(0, I_d).
[[nodiscard]] PointCubature gaussian_cubature(int dim, int degree, GaussianRule rule = GaussianRule::automatic);

// n-point Gauss-Hermite rule for the unit-variance normal (nodes ascending).
[[nodiscard]] PointCubature gauss_hermite(int n);

// Largest |sum_k w_k P(x_k) - E[P]| over all monomials of total degree <= degree.
[[nodiscard]] double verify_moments(const PointCubature& rule, int degree, Measure measure);

// E[Z^k] for a standard normal: (k-1)!! for even k, 0 for odd k.
[[nodiscard]] double gaussian_moment(int k);

} // namespace wcub
