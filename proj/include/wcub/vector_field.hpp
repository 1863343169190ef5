#pragma once

#include "wcub/polynomial.hpp"
#include "wcub/tensor.hpp"
#include "wcub/word.hpp"

#include <climits>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

namespace wcub {

enum class FieldKind { polynomial, generic };

// Driving vector fields V_0, ..., V_d of dX = V_0(X) dt + sum_j V_j(X) o dB^j
// on R^n. Direction 0 is time.
class VectorField {
public:
    using Evaluator = std::function<std::vector<double>(int direction, std::span<const double> x)>;
    using Matrix = std::vector<std::vector<double>>; // row-major, n rows

    // V_j(x) = A_j x + b_j. An empty `b` means no constant part.
    static VectorField affine(const std::vector<Matrix>& A, const std::vector<std::vector<double>>& b = {});

    // fields[j][a] is the a-th component of V_j.
    static VectorField polynomial(int state_dim, std::vector<std::vector<Polynomial>> fields);

    // Black box; derivatives by nested central differences up to max_order.
    static VectorField generic(int state_dim, int driving_dim, Evaluator f, int max_order);

    // Scalar dX = a X dt + sum_i b_i X o dB^i.
    static VectorField linear_scalar(double a, const std::vector<double>& b);

    [[nodiscard]] int state_dim() const { return state_dim_; }
    [[nodiscard]] int driving_dim() const { return driving_dim_; } // Brownian directions, d
    [[nodiscard]] FieldKind kind() const { return kind_; }
    [[nodiscard]] int max_order() const { return max_order_; }

    [[nodiscard]] std::vector<double> evaluate(int direction, std::span<const double> x) const;

    // Polynomial kind only.
    [[nodiscard]] const std::vector<std::vector<Polynomial>>& polynomials() const;
    [[nodiscard]] const Evaluator& evaluator() const { return evaluator_; }

private:
    VectorField() = default;
    int state_dim_ = 0;
    int driving_dim_ = 0;
    FieldKind kind_ = FieldKind::polynomial;
    int max_order_ = INT_MAX;
    std::vector<std::vector<Polynomial>> fields_;
    Evaluator evaluator_;
};

// f^{o0}(x) = x, f^{o(j).w} = D f^{ow} . V_j: the map contracted against the
// signature coefficient of the word (j).w. The first letter of a word is the
// earliest integration variable.
//
// Values for every word of length <= k_max at x. Exact for polynomial fields.
[[nodiscard]] std::map<Word, std::vector<double>> derivative_tower(const VectorField& v, std::span<const double> x,
                                                                   int k_max);

// x -> sum_w L_w f^{ow}(x) for a fixed tensor L.
class ContractedField {
public:
    [[nodiscard]] int state_dim() const { return state_dim_; }
    [[nodiscard]] std::vector<double> operator()(std::span<const double> x) const;
    void apply(std::span<const double> x, std::span<double> out) const;

private:
    friend class DerivativeTower;
    int state_dim_ = 0;
    // polynomial kind: distinct monomials and a coefficient row per component
    std::vector<Polynomial::Exponents> monomials_;
    std::vector<std::vector<double>> coeffs_;
    // generic kind
    std::shared_ptr<const VectorField> field_;
    std::vector<std::pair<Word, double>> words_;
};

// Symbolic tower for every word of graded degree <= depth (polynomial kind)
// or a handle for numeric evaluation (generic kind).
class DerivativeTower {
public:
    DerivativeTower(const VectorField& v, int depth);

    [[nodiscard]] int depth() const { return depth_; }
    [[nodiscard]] const VectorField& field() const { return *field_; }

    // Polynomial kind only.
    [[nodiscard]] const std::vector<Polynomial>& components(const Word& w) const;

    [[nodiscard]] std::vector<double> evaluate(const Word& w, std::span<const double> x) const;

    // The empty word contributes L_() x. L.depth() must not exceed depth().
    [[nodiscard]] ContractedField contract(const Tensor& L) const;

private:
    std::shared_ptr<const VectorField> field_;
    int depth_;
    std::shared_ptr<const WordBasis> basis_;
    std::vector<std::vector<Polynomial>> tower_; // by flat word index
};

// Numeric g_w(x) for a generic field.
[[nodiscard]] std::vector<double> numeric_tower_value(const VectorField& v, const Word& w, std::span<const double> x);

} // namespace wcub
