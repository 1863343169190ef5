#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace wcub {

// Sparse real polynomial in `vars` variables. A monomial is its exponent
// vector; zero coefficients are never stored.
class Polynomial {
public:
    using Exponents = std::vector<int>;

    explicit Polynomial(int vars = 0) : vars_(vars) {}

    static Polynomial constant(int vars, double c);
    static Polynomial variable(int vars, int index, double c = 1.0);
    static Polynomial monomial(Exponents exps, double c);

    [[nodiscard]] int vars() const { return vars_; }
    [[nodiscard]] const std::map<Exponents, double>& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] int total_degree() const;

    void add_term(const Exponents& exps, double c);

    [[nodiscard]] double evaluate(std::span<const double> x) const;
    [[nodiscard]] Polynomial derivative(int index) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(double s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

    // e.g. "2*x0^2*x1 - 0.5"
    [[nodiscard]] std::string to_string() const;

private:
    int vars_;
    std::map<Exponents, double> terms_;
};

} // namespace wcub
