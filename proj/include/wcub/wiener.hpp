#pragma once

#include "wcub/lie.hpp"
#include "wcub/measures.hpp"
#include "wcub/tensor.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace wcub {

// E[S(B)_{0,T}] for time-augmented Brownian motion, coefficient of one word.
//
// A word has at most one factorization into blocks that are either the time
// letter (0) or a repeated Brownian pair (i,i). With k blocks, p of them
// pairs, the coefficient is (1/2)^p / k! * T^(graded degree / 2); words
// without such a factorization have coefficient zero.
template <class Scalar>
[[nodiscard]] Scalar expected_signature_coefficient(const Word& w, const Scalar& T);

// graded_project(exp(T e0 + T/2 sum_i e_i e_i), depth).
template <class Scalar>
[[nodiscard]] TensorElement<Scalar> expected_signature(int dim, int depth, const Scalar& T);

extern template double expected_signature_coefficient(const Word&, const double&);
extern template Rational expected_signature_coefficient(const Word&, const Rational&);
extern template TensorElement<double> expected_signature(int, int, const double&);
extern template TensorElement<Rational> expected_signature(int, int, const Rational&);

struct FormulaEntry {
    double weight;
    LiePolynomial poly;
};

// Weighted Lie polynomials whose weighted exponentials match the expected
// signature up to graded degree `degree`.
struct WienerCubatureFormula {
    int dim = 0;
    int degree = 0;
    std::vector<FormulaEntry> entries;
    nlohmann::json metadata = nlohmann::json::object();

    [[nodiscard]] std::size_t size() const { return entries.size(); }
    [[nodiscard]] double weight_sum() const;

    // Positive weights, letters within the alphabet, bracket terms within the
    // degree. The weight sum is checked only when check_weight_sum is set.
    void validate(bool check_weight_sum = true) const;
};

[[nodiscard]] WienerCubatureFormula construct_degree3(const PointCubature& gaussian);
[[nodiscard]] WienerCubatureFormula construct_degree5(const PointCubature& gaussian, double x = 0.5);

// Dimension 3 only. Defaults: 64-point product Gauss-Hermite rule and the
// full 16-point sign set on {-1,1}^4, ordered (eta1, eta2, eta3, eta0).
[[nodiscard]] WienerCubatureFormula construct_degree7();
[[nodiscard]] WienerCubatureFormula construct_degree7(const PointCubature& gaussian, const PointCubature& signs);

// One row of the degree-7 term table after index expansion, before the
// point/sign multipliers are applied.
struct Degree7Term {
    double coeff;
    int z_index;             // 0 = no Gaussian factor, else z^i
    std::vector<int> etas;   // sign factors; 0 stands for eta^0
    BracketTerm term;
};

[[nodiscard]] const std::vector<Degree7Term>& degree7_terms();

// "S_3(7)=N_3(7)B_4(5)" and friends.
[[nodiscard]] std::string size_formula(const WienerCubatureFormula& f);

struct ResidualEntry {
    Word word;
    double lhs;
    double rhs;
    double abs_error;
};

struct VerificationReport {
    int depth = 0;
    double T = 1.0;
    double max_residual = 0.0;
    std::vector<ResidualEntry> worst; // descending error, ties by word
};

struct VerifyOptions {
    double T = 1.0;
    std::optional<int> depth; // defaults to the formula degree
    std::size_t worst_count = 10;
    int threads = 1;
};

// Compares sum_k w_k exp(l_k) with the expected signature at time T on every
// word of graded degree <= depth. Deterministic for any thread count.
[[nodiscard]] VerificationReport verify_formula(const WienerCubatureFormula& f, const VerifyOptions& options = {});

// sum_k w_k exp(l_k), truncated at depth.
[[nodiscard]] Tensor formula_expectation(const WienerCubatureFormula& f, int depth, int threads = 1);

// Brownian scaling: each bracket term times T^(graded degree / 2).
[[nodiscard]] WienerCubatureFormula scale_formula(const WienerCubatureFormula& f, double T);

[[nodiscard]] nlohmann::json bracket_to_json(const BracketTerm& t);
[[nodiscard]] BracketTerm bracket_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json formula_to_json(const WienerCubatureFormula& f);
[[nodiscard]] WienerCubatureFormula formula_from_json(const nlohmann::json& j);

void save_formula(const WienerCubatureFormula& f, const std::string& path);
[[nodiscard]] WienerCubatureFormula load_formula(const std::string& path);

// "word,lhs,rhs,abs_error" rows.
[[nodiscard]] std::string residual_csv(const VerificationReport& report);

} // namespace wcub
