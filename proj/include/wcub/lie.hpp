#pragma once

#include "wcub/tensor.hpp"
#include "wcub/word.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wcub {

// Iterated Lie bracket of letters, e.g. [[1,2],2]. Immutable; subtrees are
// shared between copies.
class BracketTerm {
public:
    static BracketTerm leaf(Letter l);
    static BracketTerm bracket(BracketTerm left, BracketTerm right);

    [[nodiscard]] bool is_leaf() const { return !left_; }
    [[nodiscard]] Letter letter() const { return letter_; }
    [[nodiscard]] const BracketTerm& left() const { return *left_; }
    [[nodiscard]] const BracketTerm& right() const { return *right_; }

    [[nodiscard]] int leaf_count() const;
    [[nodiscard]] int zero_count() const;
    [[nodiscard]] int graded_degree() const { return leaf_count() + zero_count(); }
    [[nodiscard]] Letter max_letter() const;

    // Leaves read from left to right.
    [[nodiscard]] Word foliage() const;

    // "1" for a leaf, "[[1,2],2]" for nested brackets.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const BracketTerm& a, const BracketTerm& b);

private:
    BracketTerm() = default;
    Letter letter_ = -1;
    std::shared_ptr<const BracketTerm> left_;
    std::shared_ptr<const BracketTerm> right_;
};

// Inverse of BracketTerm::to_string; whitespace is ignored.
[[nodiscard]] BracketTerm parse_bracket(std::string_view text);

// Tensor expansion of a nested commutator, [p,q] = pq - qp.
template <class Scalar>
[[nodiscard]] TensorElement<Scalar> bracket_expand(const BracketTerm& t, int dim, int depth)
{
    if (t.graded_degree() > depth)
        throw std::out_of_range("bracket_expand: " + t.to_string() + " exceeds truncation " + std::to_string(depth));
    if (t.is_leaf()) {
        if (t.letter() < 0 || t.letter() > dim) throw std::out_of_range("bracket_expand: letter outside alphabet");
        return TensorElement<Scalar>::letter(dim, depth, t.letter());
    }
    auto p = bracket_expand<Scalar>(t.left(), dim, depth);
    auto q = bracket_expand<Scalar>(t.right(), dim, depth);
    return p * q - q * p;
}

// Right standard factorization: w = uv with v the longest proper Lyndon
// suffix, bracketed recursively as [b(u), b(v)].
[[nodiscard]] BracketTerm standard_bracketing(const Word& lyndon);

struct LieTerm {
    double coeff;
    BracketTerm term;
};

// Memoized expansions of bracket terms for one (dim, depth); safe to share
// between threads.
class ExpansionCache {
public:
    ExpansionCache(int dim, int depth) : dim_(dim), depth_(depth) {}
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int depth() const { return depth_; }
    [[nodiscard]] std::shared_ptr<const Tensor> expand(const BracketTerm& t);

private:
    int dim_;
    int depth_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const Tensor>> cache_;
};

// Finite linear combination of bracket terms over the alphabet {0, ..., dim}.
// May additionally carry coordinates in the Lyndon basis.
class LiePolynomial {
public:
    explicit LiePolynomial(int dim) : dim_(dim) {}

    static LiePolynomial from_lyndon_coordinates(int dim, const std::map<Word, double>& coords);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const std::vector<LieTerm>& terms() const { return terms_; }
    [[nodiscard]] const std::optional<std::map<Word, double>>& lyndon_coords() const { return lyndon_coords_; }

    void add(double coeff, BracketTerm term);
    void add(double coeff, std::string_view bracket) { add(coeff, parse_bracket(bracket)); }

    // Highest graded degree among terms with nonzero coefficient (0 if none).
    [[nodiscard]] int graded_degree() const;

    // Every term multiplied by factor^(graded degree / 2).
    [[nodiscard]] LiePolynomial scaled_by_time(double factor) const;

    [[nodiscard]] Tensor to_tensor(int depth) const;
    [[nodiscard]] Tensor to_tensor(ExpansionCache& cache) const;

    // Term expansion and Lyndon-coordinate expansion agree within tol.
    [[nodiscard]] bool is_consistent(int depth, double tol = 1e-12) const;

    [[nodiscard]] std::string to_string() const;

private:
    int dim_;
    std::vector<LieTerm> terms_;
    std::optional<std::map<Word, double>> lyndon_coords_;
};

// (1/n!) sum over permutations of the tensor products, truncated at the
// common depth. An empty list gives the unit.
template <class Scalar>
[[nodiscard]] TensorElement<Scalar> symmetrised_product(const std::vector<TensorElement<Scalar>>& factors, int dim,
                                                        int depth);

[[nodiscard]] Tensor symmetrised_product(const std::vector<LiePolynomial>& factors, int dim, int depth);

extern template TensorElement<double> symmetrised_product(const std::vector<TensorElement<double>>&, int, int);
extern template TensorElement<Rational> symmetrised_product(const std::vector<TensorElement<Rational>>&, int, int);

} // namespace wcub
