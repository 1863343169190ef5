#include "wcub/problem.hpp"

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>

namespace wcub {

namespace {

VectorField gbm_field(const nlohmann::json& params, int state_dim, int driving_dim, std::vector<double>& b)
{
    if (state_dim != 1) throw std::invalid_argument("problem: gbm requires state_dim 1");
    const double a = params.at("a").get<double>();
    const auto& jb = params.at("b");
    b = jb.is_array() ? jb.get<std::vector<double>>() : std::vector<double>{jb.get<double>()};
    if (static_cast<int>(b.size()) != driving_dim)
        throw std::invalid_argument(fmt::format("problem: gbm lists {} volatilities for driving_dim {}", b.size(), driving_dim));
    return VectorField::linear_scalar(a, b);
}

VectorField polynomial_field(const nlohmann::json& params, int state_dim)
{
    std::vector<std::vector<Polynomial>> fields;
    for (const auto& direction : params.at("fields")) {
        std::vector<Polynomial> comps;
        for (const auto& component : direction) {
            Polynomial p(state_dim);
            for (const auto& term : component) p.add_term(term.at("powers").get<std::vector<int>>(), term.at("coeff").get<double>());
            comps.push_back(std::move(p));
        }
        fields.push_back(std::move(comps));
    }
    return VectorField::polynomial(state_dim, std::move(fields));
}

} // namespace

SDEProblem problem_from_json(const nlohmann::json& j)
{
    try {
        const int n = j.at("state_dim").get<int>();
        const int d = j.at("driving_dim").get<int>();
        if (n < 1 || d < 1) throw std::invalid_argument("problem: state_dim and driving_dim must be >= 1");
        const std::string kind = j.at("kind").get<std::string>();
        const auto& params = j.at("params");
        const auto x0 = j.at("x0").get<std::vector<double>>();
        const double T = j.at("T").get<double>();
        const Payoff payoff = Payoff::parse(j.value("payoff", std::string("identity")));
        std::optional<double> reference;
        if (j.contains("reference") && !j["reference"].is_null()) reference = j["reference"].get<double>();

        auto build = [&]() -> SDEProblem {
            if (kind == "gbm") {
                std::vector<double> b;
                (void)gbm_field(params, n, d, b);
                if (x0.size() != 1) throw std::invalid_argument("problem: gbm requires a single initial value");
                if (payoff.index != 0) throw std::invalid_argument("problem: gbm payoff must use coordinate 0");
                SDEProblem p = linear_scalar_problem(params.at("a").get<double>(), b, x0[0], T, payoff.power);
                if (reference) {
                    p.reference = reference;
                    p.reference_at = nullptr;
                }
                return p;
            }
            if (kind == "affine") {
                const auto A = params.at("A").get<std::vector<VectorField::Matrix>>();
                const auto b = params.contains("b") ? params["b"].get<std::vector<std::vector<double>>>()
                                                    : std::vector<std::vector<double>>{};
                return {VectorField::affine(A, b), x0, payoff, T, reference, {}};
            }
            if (kind == "polynomial") return {polynomial_field(params, n), x0, payoff, T, reference, {}};
            throw std::invalid_argument("problem: unknown kind '" + kind + "' (expected affine, polynomial or gbm)");
        };
        SDEProblem problem = build();
        if (problem.field.state_dim() != n)
            throw std::invalid_argument(fmt::format("problem: field has state dimension {}, state_dim says {}", problem.field.state_dim(), n));
        if (problem.field.driving_dim() != d)
            throw std::invalid_argument(fmt::format("problem: field has {} drivers, driving_dim says {}", problem.field.driving_dim(), d));
        problem.validate();
        return problem;
    } catch (const nlohmann::json::exception& err) {
        throw std::invalid_argument(std::string("problem: malformed JSON: ") + err.what());
    }
}

SDEProblem load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& err) {
        throw std::invalid_argument(path + ": " + err.what());
    }
    return problem_from_json(j);
}

} // namespace wcub
