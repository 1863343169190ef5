#pragma once

#include "wcub/lie.hpp"
#include "wcub/vector_field.hpp"
#include "wcub/wiener.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wcub {

// phi(x) = x_index^power; "identity" is coordinate 0.
struct Payoff {
    int index = 0;
    int power = 1;

    [[nodiscard]] double operator()(std::span<const double> x) const;
    [[nodiscard]] std::string to_string() const;

    // "identity", "coordinate:i" or "power:i:p".
    static Payoff parse(const std::string& text);
};

struct SDEProblem {
    VectorField field;
    std::vector<double> x0;
    Payoff payoff;
    double T = 1.0;
    std::optional<double> reference;
    // Exact E[phi(X_t)] as a function of the horizon, when known.
    std::function<double(double)> reference_at;

    void validate() const;
    [[nodiscard]] std::optional<double> reference_for(double t) const;
};

// Stratonovich GBM-type scalar problem dX = a X dt + sum_i b_i X o dB^i with
// payoff x^p; the reference is X0^p exp(p a T + p^2 |b|^2 T / 2).
[[nodiscard]] SDEProblem linear_scalar_problem(double a, const std::vector<double>& b, double x0, double T, int power = 1);

enum class Method { taylor, logode, montecarlo };
[[nodiscard]] std::string to_string(Method m);
[[nodiscard]] Method parse_method(const std::string& name);

struct SolverReport {
    Method method = Method::taylor;
    double estimate = 0.0;
    std::vector<double> mean_state;
    std::size_t leaf_count = 0;
    int step_count = 0;
    double weight_sum = 0.0;
    std::optional<double> abs_error;
    std::optional<double> std_error; // Monte Carlo only
    double wall_seconds = 0.0;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonFiniteState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Truncated stochastic Taylor image sum_w L_w f^{ow}(x), words of graded
// degree <= m.
[[nodiscard]] std::vector<double> taylor_step(std::span<const double> x, const Tensor& L, const VectorField& v, int m);

// z(1) for dz/du = sum_w l_w f^{ow}(z), z(0) = x, by fixed-step RK4.
[[nodiscard]] std::vector<double> logode_step(std::span<const double> x, const LiePolynomial& l, const VectorField& v, int m,
                                              int ode_steps = 8);

struct TreeOptions {
    Method method = Method::taylor;
    int ode_steps = 8;
    std::size_t leaf_budget = 1'000'000;
    int threads = 1;
};

// k uniform steps of the formula scaled to T/k; n^k weighted leaves,
// traversed depth first without materializing the tree. The reduction order
// is fixed, so the estimate does not depend on the thread count.
[[nodiscard]] SolverReport cubature_tree(const SDEProblem& problem, const WienerCubatureFormula& f, int steps,
                                         const TreeOptions& options = {});

struct MonteCarloOptions {
    std::size_t paths = 10'000;
    int steps = 100;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Heun (Stratonovich) stepping. Each path draws from its own generator
// seeded by (seed, path index), and paths are summed in fixed blocks.
[[nodiscard]] SolverReport monte_carlo(const SDEProblem& problem, const MonteCarloOptions& options = {});

struct ConvergenceRow {
    int degree;
    double T;
    int steps;
    Method method;
    double estimate;
    double abs_error;
};

struct ConvergenceFit {
    int degree;
    std::optional<double> slope; // empty when fewer than 3 points clear the floor
    std::size_t points_used = 0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    std::vector<ConvergenceFit> fits;
};

struct ConvergenceOptions {
    std::vector<double> times;    // horizons; empty means the problem's T
    std::vector<int> steps{1};    // uniform step counts
    TreeOptions tree;
    double error_floor = 1e-12;
};

// Runs every (formula, T, k) combination and fits log(error) against
// log(T/k) per formula degree.
[[nodiscard]] ConvergenceResult convergence_experiment(const SDEProblem& problem,
                                                       const std::vector<WienerCubatureFormula>& formulas,
                                                       const ConvergenceOptions& options);

// Least-squares slope of log(error) on log(h) over points with
// error > floor; empty when fewer than 3 remain.
[[nodiscard]] std::optional<double> fit_slope(const std::vector<double>& h, const std::vector<double>& error,
                                              double floor = 1e-12, std::size_t* used = nullptr);

[[nodiscard]] std::string convergence_csv(const ConvergenceResult& result);

// State (X, S^I) with S^I the signature of X over words I in {0..n-1} of
// length 1..L, listed by length then lexicographically:
// dS^{I.a} = S^I dX^a, S^() = 1.
struct SignatureSystem {
    VectorField field;
    int base_dim = 0;
    int level = 0;
    std::vector<Word> words; // state index base_dim + i holds S^{words[i]}

    [[nodiscard]] std::vector<double> initial_state(std::span<const double> x0) const;
    [[nodiscard]] std::size_t index_of(const Word& w) const;
};

[[nodiscard]] SignatureSystem signature_level_system(const VectorField& v, int level, std::size_t state_budget = 4096);

} // namespace wcub
