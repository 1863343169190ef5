#pragma once

#include "wcub/rational.hpp"
#include "wcub/word.hpp"
#include "wcub/word_basis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace wcub {

// Element of the tensor algebra over {0, ..., dim}, truncated at graded
// degree `depth`. Coefficients are stored densely per graded level (see
// WordBasis); `terms()` gives the sparse, lexicographically ordered view.
//
// Scalar is double (floating mode) or Rational (exact mode).
template <class Scalar>
class TensorElement {
public:
    using scalar_type = Scalar;

    TensorElement(int dim, int depth)
        : basis_(WordBasis::get(dim, depth)), coeffs_(basis_->size(), Scalar(0))
    {
    }

    static TensorElement unit(int dim, int depth)
    {
        TensorElement t(dim, depth);
        t.coeffs_[0] = Scalar(1);
        return t;
    }

    static TensorElement letter(int dim, int depth, Letter l, Scalar coeff = Scalar(1))
    {
        return from_word(dim, depth, Word{l}, std::move(coeff));
    }

    // Words beyond the truncation are dropped.
    static TensorElement from_word(int dim, int depth, const Word& w, Scalar coeff = Scalar(1))
    {
        TensorElement t(dim, depth);
        t.add(w, std::move(coeff));
        return t;
    }

    [[nodiscard]] int dim() const { return basis_->dim(); }
    [[nodiscard]] int depth() const { return basis_->depth(); }
    [[nodiscard]] const WordBasis& basis() const { return *basis_; }

    [[nodiscard]] Scalar coeff(const Word& w) const
    {
        if (!is_valid_word(w, dim())) throw std::out_of_range("TensorElement: letter outside alphabet");
        if (graded_degree(w) > depth()) return Scalar(0);
        return coeffs_[basis_->index(w)];
    }

    void set(const Word& w, Scalar c)
    {
        if (graded_degree(w) > depth()) {
            if (c != Scalar(0)) throw std::out_of_range("TensorElement: word " + w.to_string() + " exceeds truncation");
            return;
        }
        coeffs_[basis_->index(w)] = std::move(c);
    }

    void add(const Word& w, const Scalar& c)
    {
        if (!is_valid_word(w, dim())) throw std::out_of_range("TensorElement: letter outside alphabet");
        if (graded_degree(w) > depth()) return;
        coeffs_[basis_->index(w)] += c;
    }

    [[nodiscard]] const Scalar& constant() const { return coeffs_[0]; }
    [[nodiscard]] const std::vector<Scalar>& data() const { return coeffs_; }
    [[nodiscard]] std::vector<Scalar>& data() { return coeffs_; }

    // Nonzero coefficients, lexicographic in the word.
    [[nodiscard]] std::vector<std::pair<Word, Scalar>> terms() const
    {
        std::vector<std::pair<Word, Scalar>> out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i] != Scalar(0)) out.emplace_back(basis_->word(i), coeffs_[i]);
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    [[nodiscard]] std::size_t nonzero_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(coeffs_.begin(), coeffs_.end(), [](const Scalar& c) { return c != Scalar(0); }));
    }

    [[nodiscard]] bool is_zero() const { return nonzero_count() == 0; }

    TensorElement& operator+=(const TensorElement& o)
    {
        check_compatible(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }

    TensorElement& operator-=(const TensorElement& o)
    {
        check_compatible(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }

    TensorElement& operator*=(const Scalar& s)
    {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }

    TensorElement& operator/=(const Scalar& s)
    {
        for (auto& c : coeffs_) c /= s;
        return *this;
    }

    // this += s * o
    void add_scaled(const TensorElement& o, const Scalar& s)
    {
        check_compatible(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (o.coeffs_[i] != Scalar(0)) coeffs_[i] += s * o.coeffs_[i];
    }

    friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
    friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
    friend TensorElement operator-(TensorElement a)
    {
        for (auto& c : a.coeffs_) c = -c;
        return a;
    }
    friend TensorElement operator*(TensorElement a, const Scalar& s) { return a *= s; }
    friend TensorElement operator*(const Scalar& s, TensorElement a) { return a *= s; }
    friend TensorElement operator/(TensorElement a, const Scalar& s) { return a /= s; }

    // Concatenation product, truncated at the common depth.
    friend TensorElement operator*(const TensorElement& a, const TensorElement& b)
    {
        a.check_compatible(b);
        const WordBasis& basis = *a.basis_;
        const int m = basis.depth();
        TensorElement out(a.dim(), m);
        for (int g1 = 0; g1 <= m; ++g1) {
            const std::size_t off1 = basis.level_offset(g1);
            const std::size_t n1 = basis.level_size(g1);
            for (std::size_t i = 0; i < n1; ++i) {
                const Scalar& ai = a.coeffs_[off1 + i];
                if (ai == Scalar(0)) continue;
                for (int g2 = 0; g1 + g2 <= m; ++g2) {
                    const std::size_t n2 = basis.level_size(g2);
                    const Scalar* src = b.coeffs_.data() + basis.level_offset(g2);
                    Scalar* dst = out.coeffs_.data() + basis.level_offset(g1 + g2) + basis.prefix_offset(g1, i, g2);
                    if constexpr (std::is_floating_point_v<Scalar>) {
                        for (std::size_t j = 0; j < n2; ++j) dst[j] += ai * src[j];
                    } else {
                        for (std::size_t j = 0; j < n2; ++j)
                            if (src[j] != Scalar(0)) dst[j] += ai * src[j];
                    }
                }
            }
        }
        return out;
    }

    friend bool operator==(const TensorElement& a, const TensorElement& b)
    {
        return a.dim() == b.dim() && a.depth() == b.depth() && a.coeffs_ == b.coeffs_;
    }

    void check_compatible(const TensorElement& o) const
    {
        if (dim() != o.dim() || depth() != o.depth())
            throw std::invalid_argument("TensorElement: dimension/truncation mismatch (" + std::to_string(dim()) + "," +
                                        std::to_string(depth()) + ") vs (" + std::to_string(o.dim()) + "," +
                                        std::to_string(o.depth()) + ")");
    }

private:
    std::shared_ptr<const WordBasis> basis_;
    std::vector<Scalar> coeffs_;
};

template <class Scalar>
[[nodiscard]] TensorElement<Scalar> tensor_product(const TensorElement<Scalar>& a, const TensorElement<Scalar>& b)
{
    return a * b;
}

// Keeps exactly the words of graded degree <= m; the result has depth
// min(m, a.depth()).
template <class Scalar>
[[nodiscard]] TensorElement<Scalar> graded_project(const TensorElement<Scalar>& a, int m)
{
    if (m < 0) throw std::invalid_argument("graded_project: negative truncation");
    const int depth = std::min(m, a.depth());
    TensorElement<Scalar> out(a.dim(), depth);
    std::copy_n(a.data().begin(), out.data().size(), out.data().begin());
    return out;
}

// Re-embeds `a` at a larger (or smaller) graded depth.
template <class Scalar>
[[nodiscard]] TensorElement<Scalar> with_depth(const TensorElement<Scalar>& a, int depth)
{
    TensorElement<Scalar> out(a.dim(), depth);
    const std::size_t n = std::min(out.data().size(), a.data().size());
    std::copy_n(a.data().begin(), n, out.data().begin());
    return out;
}

// Plain level truncation: keeps words of length <= k, regardless of how
// many time letters they contain.
template <class Scalar>
[[nodiscard]] TensorElement<Scalar> level_project(const TensorElement<Scalar>& a, int k)
{
    if (k < 0) throw std::invalid_argument("level_project: negative level");
    TensorElement<Scalar> out = a;
    const WordBasis& basis = a.basis();
    for (std::size_t i = 0; i < out.data().size(); ++i)
        if (out.data()[i] != Scalar(0) && basis.word(i).size() > static_cast<std::size_t>(k)) out.data()[i] = Scalar(0);
    return out;
}

template <class Scalar>
[[nodiscard]] TensorElement<Scalar> exp_series(const TensorElement<Scalar>& a)
{
    if (a.constant() != Scalar(0)) throw std::domain_error("exp_series: constant term must be zero");
    const auto one = TensorElement<Scalar>::unit(a.dim(), a.depth());
    // every word of `a` has degree >= 1, so a^k vanishes for k > depth
    TensorElement<Scalar> result = one;
    for (int k = a.depth(); k >= 1; --k) {
        result = a * result;
        result /= Scalar(k);
        result += one;
    }
    return result;
}

template <class Scalar>
[[nodiscard]] TensorElement<Scalar> log_series(const TensorElement<Scalar>& g)
{
    if (g.constant() != Scalar(1)) throw std::domain_error("log_series: constant term must be one");
    TensorElement<Scalar> x = g;
    x.data()[0] = Scalar(0);
    TensorElement<Scalar> result(g.dim(), g.depth());
    TensorElement<Scalar> power = x;
    for (int k = 1; k <= g.depth(); ++k) {
        if (k % 2 == 1)
            result.add_scaled(power, Scalar(1) / Scalar(k));
        else
            result.add_scaled(power, Scalar(-1) / Scalar(k));
        power = power * x;
    }
    return result;
}

template <class Scalar>
[[nodiscard]] double max_abs_diff(const TensorElement<Scalar>& a, const TensorElement<Scalar>& b)
{
    a.check_compatible(b);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        worst = std::max(worst, std::abs(to_double(Scalar(a.data()[i] - b.data()[i]))));
    return worst;
}

[[nodiscard]] inline TensorElement<double> to_floating(const TensorElement<Rational>& a)
{
    TensorElement<double> out(a.dim(), a.depth());
    for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = to_double(a.data()[i]);
    return out;
}

using Tensor = TensorElement<double>;
using ExactTensor = TensorElement<Rational>;

} // namespace wcub
