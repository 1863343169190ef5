#include "wcub/polynomial.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wcub {

Polynomial Polynomial::constant(int vars, double c)
{
    Polynomial p(vars);
    p.add_term(Exponents(static_cast<std::size_t>(vars), 0), c);
    return p;
}

Polynomial Polynomial::variable(int vars, int index, double c)
{
    if (index < 0 || index >= vars) throw std::out_of_range("Polynomial::variable: index out of range");
    Exponents e(static_cast<std::size_t>(vars), 0);
    e[static_cast<std::size_t>(index)] = 1;
    Polynomial p(vars);
    p.add_term(e, c);
    return p;
}

Polynomial Polynomial::monomial(Exponents exps, double c)
{
    Polynomial p(static_cast<int>(exps.size()));
    p.add_term(exps, c);
    return p;
}

int Polynomial::total_degree() const
{
    int deg = 0;
    for (const auto& [e, c] : terms_) deg = std::max(deg, std::accumulate(e.begin(), e.end(), 0));
    return deg;
}

void Polynomial::add_term(const Exponents& exps, double c)
{
    if (static_cast<int>(exps.size()) != vars_) throw std::invalid_argument("Polynomial: exponent vector size mismatch");
    for (int e : exps)
        if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.emplace(exps, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double Polynomial::evaluate(std::span<const double> x) const
{
    if (static_cast<int>(x.size()) != vars_) throw std::invalid_argument("Polynomial::evaluate: wrong point dimension");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) m *= x[i];
        sum += m;
    }
    return sum;
}

Polynomial Polynomial::derivative(int index) const
{
    if (index < 0 || index >= vars_) throw std::out_of_range("Polynomial::derivative: index out of range");
    const auto i = static_cast<std::size_t>(index);
    Polynomial out(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exponents d = e;
        --d[i];
        out.add_term(d, c * e[i]);
    }
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o)
{
    if (o.vars_ != vars_) throw std::invalid_argument("Polynomial: variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o)
{
    if (o.vars_ != vars_) throw std::invalid_argument("Polynomial: variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(double s)
{
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    if (a.vars_ != b.vars_) throw std::invalid_argument("Polynomial: variable count mismatch");
    Polynomial out(a.vars_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            Polynomial::Exponents e = ea;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

std::string Polynomial::to_string() const
{
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += e[i] == 1 ? fmt::format("x{}", i) : fmt::format("x{}^{}", i, e[i]);
        }
        const double mag = std::abs(c);
        std::string term = mono.empty() ? fmt::format("{}", mag) : (mag == 1.0 ? mono : fmt::format("{}*{}", mag, mono));
        if (s.empty())
            s = c < 0 ? "-" + term : term;
        else
            s += (c < 0 ? " - " : " + ") + term;
    }
    return s;
}

} // namespace wcub
