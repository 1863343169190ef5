#include "wcub/sde.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace wcub {

namespace {

int parse_int(std::string_view s, const std::string& context)
{
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("invalid integer in " + context);
    return v;
}

bool all_finite(std::span<const double> x)
{
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

// Runs `work(i)` for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& work)
{
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto loop = [&] {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) work(i);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

double Payoff::operator()(std::span<const double> x) const
{
    if (index < 0 || static_cast<std::size_t>(index) >= x.size()) throw std::out_of_range("payoff: coordinate out of range");
    const double v = x[static_cast<std::size_t>(index)];
    return power == 1 ? v : std::pow(v, power);
}

std::string Payoff::to_string() const
{
    if (power != 1) return fmt::format("power:{}:{}", index, power);
    return index == 0 ? "identity" : fmt::format("coordinate:{}", index);
}

Payoff Payoff::parse(const std::string& text)
{
    if (text == "identity") return {};
    const std::string ctx = "payoff '" + text + "'";
    if (text.rfind("coordinate:", 0) == 0) {
        Payoff p{parse_int(std::string_view(text).substr(11), ctx), 1};
        if (p.index < 0) throw std::invalid_argument(ctx + ": negative coordinate");
        return p;
    }
    if (text.rfind("power:", 0) == 0) {
        std::string_view rest = std::string_view(text).substr(6);
        auto colon = rest.find(':');
        if (colon == std::string_view::npos) throw std::invalid_argument(ctx + ": expected power:i:p");
        Payoff p{parse_int(rest.substr(0, colon), ctx), parse_int(rest.substr(colon + 1), ctx)};
        if (p.index < 0 || p.power < 0) throw std::invalid_argument(ctx + ": negative index or power");
        return p;
    }
    throw std::invalid_argument("unknown payoff '" + text + "' (expected identity, coordinate:i or power:i:p)");
}

void SDEProblem::validate() const
{
    if (static_cast<int>(x0.size()) != field.state_dim())
        throw std::invalid_argument(fmt::format("problem: x0 has {} entries, state dimension is {}", x0.size(), field.state_dim()));
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("problem: T must be positive");
    if (payoff.index >= field.state_dim()) throw std::invalid_argument("problem: payoff coordinate out of range");
    if (!all_finite(x0)) throw std::invalid_argument("problem: x0 must be finite");
}

std::optional<double> SDEProblem::reference_for(double t) const
{
    if (reference_at) return reference_at(t);
    if (reference && t == T) return reference;
    return std::nullopt;
}

SDEProblem linear_scalar_problem(double a, const std::vector<double>& b, double x0, double T, int power)
{
    SDEProblem p{VectorField::linear_scalar(a, b), {x0}, Payoff{0, power}, T, std::nullopt, {}};
    double b2 = 0.0;
    for (double bi : b) b2 += bi * bi;
    const double q = power;
    p.reference_at = [=](double t) { return std::pow(x0, q) * std::exp(q * a * t + 0.5 * q * q * b2 * t); };
    p.reference = p.reference_at(T);
    return p;
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::taylor: return "taylor";
    case Method::logode: return "logode";
    case Method::montecarlo: return "mc";
    }
    return "taylor";
}

Method parse_method(const std::string& name)
{
    if (name == "taylor") return Method::taylor;
    if (name == "logode") return Method::logode;
    if (name == "mc" || name == "montecarlo") return Method::montecarlo;
    throw std::invalid_argument("unknown method '" + name + "' (expected taylor, logode or mc)");
}

std::vector<double> taylor_step(std::span<const double> x, const Tensor& L, const VectorField& v, int m)
{
    if (static_cast<int>(x.size()) != v.state_dim()) throw std::invalid_argument("taylor_step: wrong state dimension");
    const Tensor Lm = graded_project(L, m);
    DerivativeTower tower(v, Lm.depth());
    auto out = tower.contract(Lm)(x);
    if (!all_finite(out)) throw NonFiniteState("taylor_step: non-finite state");
    return out;
}

namespace {

void rk4(const ContractedField& rhs, std::span<double> z, int steps)
{
    const std::size_t n = z.size();
    const double h = 1.0 / steps;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (int s = 0; s < steps; ++s) {
        rhs.apply(z, k1);
        for (std::size_t a = 0; a < n; ++a) tmp[a] = z[a] + 0.5 * h * k1[a];
        rhs.apply(tmp, k2);
        for (std::size_t a = 0; a < n; ++a) tmp[a] = z[a] + 0.5 * h * k2[a];
        rhs.apply(tmp, k3);
        for (std::size_t a = 0; a < n; ++a) tmp[a] = z[a] + h * k3[a];
        rhs.apply(tmp, k4);
        for (std::size_t a = 0; a < n; ++a) z[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        if (!all_finite(z)) throw NonFiniteState("logode_step: non-finite state");
    }
}

} // namespace

std::vector<double> logode_step(std::span<const double> x, const LiePolynomial& l, const VectorField& v, int m, int ode_steps)
{
    if (static_cast<int>(x.size()) != v.state_dim()) throw std::invalid_argument("logode_step: wrong state dimension");
    if (ode_steps < 1) throw std::invalid_argument("logode_step: ode_steps must be >= 1");
    if (l.graded_degree() > m) throw std::invalid_argument("logode_step: Lie polynomial exceeds degree m");
    DerivativeTower tower(v, m);
    const ContractedField rhs = tower.contract(l.to_tensor(m));
    std::vector<double> z(x.begin(), x.end());
    rk4(rhs, z, ode_steps);
    return z;
}

namespace {

struct Accumulator {
    double payoff = 0.0;
    double weight = 0.0;
    std::vector<double> state;
};

struct TreeWalker {
    const std::vector<ContractedField>& maps;
    const std::vector<double>& weights;
    const Payoff& payoff;
    Method method;
    int ode_steps;
    int steps;

    void advance(std::size_t entry, std::span<const double> x, std::span<double> out) const
    {
        if (method == Method::taylor) {
            maps[entry].apply(x, out);
            if (!all_finite(out)) throw NonFiniteState("cubature_tree: non-finite state");
        } else {
            std::copy(x.begin(), x.end(), out.begin());
            rk4(maps[entry], out, ode_steps);
        }
    }

    // `states` holds one scratch vector per level
    void visit(int level, double weight, std::vector<std::vector<double>>& states, Accumulator& acc) const
    {
        const auto& x = states[static_cast<std::size_t>(level)];
        if (level == steps) {
            acc.payoff += weight * payoff(x);
            acc.weight += weight;
            for (std::size_t a = 0; a < x.size(); ++a) acc.state[a] += weight * x[a];
            return;
        }
        for (std::size_t e = 0; e < maps.size(); ++e) {
            advance(e, x, states[static_cast<std::size_t>(level + 1)]);
            visit(level + 1, weight * weights[e], states, acc);
        }
    }
};

} // namespace

SolverReport cubature_tree(const SDEProblem& problem, const WienerCubatureFormula& f, int steps, const TreeOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    problem.validate();
    if (steps < 1) throw std::invalid_argument("cubature_tree: steps must be >= 1");
    if (options.method == Method::montecarlo) throw std::invalid_argument("cubature_tree: method must be taylor or logode");
    if (f.dim != problem.field.driving_dim())
        throw std::invalid_argument(fmt::format("cubature_tree: formula dimension {} but the problem has {} drivers", f.dim,
                                                problem.field.driving_dim()));
    if (f.entries.empty()) throw std::invalid_argument("cubature_tree: empty formula");

    const std::size_t n = f.size();
    std::size_t leaves = 1;
    for (int k = 0; k < steps; ++k) {
        if (leaves > options.leaf_budget / n)
            throw BudgetExceeded(fmt::format("cubature tree with {}^{} leaves exceeds the budget of {}", n, steps, options.leaf_budget));
        leaves *= n;
    }

    const WienerCubatureFormula step = scale_formula(f, problem.T / steps);
    const int m = f.degree;
    DerivativeTower tower(problem.field, m);
    ExpansionCache cache(f.dim, m);
    std::vector<ContractedField> maps(n);
    std::vector<double> weights(n);
    parallel_for(n, options.threads, [&](std::size_t k) {
        const auto& e = step.entries[k];
        Tensor l = e.poly.to_tensor(cache);
        maps[k] = tower.contract(options.method == Method::taylor ? exp_series(l) : l);
        weights[k] = e.weight;
    });

    const std::size_t dim = problem.x0.size();
    TreeWalker walker{maps, weights, problem.payoff, options.method, options.ode_steps, steps};
    std::vector<Accumulator> partial(n, Accumulator{0.0, 0.0, std::vector<double>(dim, 0.0)});
    parallel_for(n, options.threads, [&](std::size_t first) {
        std::vector<std::vector<double>> states(static_cast<std::size_t>(steps) + 1, std::vector<double>(dim));
        states[0] = problem.x0;
        walker.advance(first, states[0], states[1]);
        walker.visit(1, weights[first], states, partial[first]);
    });

    SolverReport report;
    report.method = options.method;
    report.step_count = steps;
    report.leaf_count = leaves;
    report.mean_state.assign(dim, 0.0);
    for (const auto& p : partial) {
        report.estimate += p.payoff;
        report.weight_sum += p.weight;
        for (std::size_t a = 0; a < dim; ++a) report.mean_state[a] += p.state[a];
    }
    if (auto ref = problem.reference_for(problem.T)) report.abs_error = std::abs(report.estimate - *ref);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

SolverReport monte_carlo(const SDEProblem& problem, const MonteCarloOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    problem.validate();
    if (options.paths < 1 || options.steps < 1) throw std::invalid_argument("monte_carlo: paths and steps must be >= 1");

    const VectorField& v = problem.field;
    const int d = v.driving_dim();
    const std::size_t dim = problem.x0.size();
    std::vector<ContractedField> compiled;
    if (v.kind() == FieldKind::polynomial) {
        DerivativeTower tower(v, 2);
        for (Letter j = 0; j <= d; ++j) compiled.push_back(tower.contract(Tensor::letter(d, 2, j)));
    }
    auto field = [&](int j, std::span<const double> x, std::span<double> out) {
        if (!compiled.empty()) {
            compiled[static_cast<std::size_t>(j)].apply(x, out);
        } else {
            auto r = v.evaluate(j, x);
            std::copy(r.begin(), r.end(), out.begin());
        }
    };

    const double dt = problem.T / options.steps;
    const double sqdt = std::sqrt(dt);
    constexpr std::size_t block = 256;
    const std::size_t blocks = (options.paths + block - 1) / block;
    std::vector<Accumulator> sums(blocks, Accumulator{0.0, 0.0, std::vector<double>(dim, 0.0)});
    std::vector<double> squares(blocks, 0.0);

    parallel_for(blocks, options.threads, [&](std::size_t b) {
        std::vector<double> x(dim), pred(dim), incr(static_cast<std::size_t>(d) + 1);
        std::vector<std::vector<double>> f0(static_cast<std::size_t>(d) + 1, std::vector<double>(dim)), f1 = f0;
        for (std::size_t path = b * block; path < std::min(options.paths, (b + 1) * block); ++path) {
            std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                              static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> normal;
            x = problem.x0;
            for (int s = 0; s < options.steps; ++s) {
                incr[0] = dt;
                for (int j = 1; j <= d; ++j) incr[static_cast<std::size_t>(j)] = sqdt * normal(rng);
                pred = x;
                for (int j = 0; j <= d; ++j) {
                    auto ju = static_cast<std::size_t>(j);
                    field(j, x, f0[ju]);
                    for (std::size_t a = 0; a < dim; ++a) pred[a] += f0[ju][a] * incr[ju];
                }
                for (int j = 0; j <= d; ++j) {
                    auto ju = static_cast<std::size_t>(j);
                    field(j, pred, f1[ju]);
                    for (std::size_t a = 0; a < dim; ++a) x[a] += 0.5 * (f0[ju][a] + f1[ju][a]) * incr[ju];
                }
            }
            if (!all_finite(x)) throw NonFiniteState("monte_carlo: non-finite state");
            const double y = problem.payoff(x);
            sums[b].payoff += y;
            squares[b] += y * y;
            for (std::size_t a = 0; a < dim; ++a) sums[b].state[a] += x[a];
        }
    });

    SolverReport report;
    report.method = Method::montecarlo;
    report.step_count = options.steps;
    report.leaf_count = options.paths;
    report.weight_sum = 1.0;
    report.mean_state.assign(dim, 0.0);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        sum += sums[b].payoff;
        sum_sq += squares[b];
        for (std::size_t a = 0; a < dim; ++a) report.mean_state[a] += sums[b].state[a];
    }
    const auto N = static_cast<double>(options.paths);
    report.estimate = sum / N;
    for (auto& s : report.mean_state) s /= N;
    const double var = options.paths > 1 ? std::max(0.0, (sum_sq - N * report.estimate * report.estimate) / (N - 1.0)) : 0.0;
    report.std_error = std::sqrt(var / N);
    if (auto ref = problem.reference_for(problem.T)) report.abs_error = std::abs(report.estimate - *ref);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::optional<double> fit_slope(const std::vector<double>& h, const std::vector<double>& error, double floor, std::size_t* used)
{
    if (h.size() != error.size()) throw std::invalid_argument("fit_slope: size mismatch");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (error[i] > floor && h[i] > 0.0 && std::isfinite(error[i])) pts.emplace_back(std::log(h[i]), std::log(error[i]));
    if (used) *used = pts.size();
    if (pts.size() < 3) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

ConvergenceResult convergence_experiment(const SDEProblem& problem, const std::vector<WienerCubatureFormula>& formulas,
                                         const ConvergenceOptions& options)
{
    if (formulas.empty()) throw std::invalid_argument("convergence_experiment: no formulas");
    if (options.steps.empty()) throw std::invalid_argument("convergence_experiment: no step counts");
    const std::vector<double> times = options.times.empty() ? std::vector<double>{problem.T} : options.times;
    for (double t : times)
        if (!problem.reference_for(t))
            throw std::invalid_argument(fmt::format("convergence_experiment: no reference value for T = {}", t));

    ConvergenceResult result;
    for (const auto& f : formulas) {
        std::vector<double> h, err;
        for (double t : times) {
            SDEProblem p = problem;
            p.T = t;
            const double ref = *problem.reference_for(t);
            for (int k : options.steps) {
                const SolverReport r = cubature_tree(p, f, k, options.tree);
                const double e = std::abs(r.estimate - ref);
                result.rows.push_back({f.degree, t, k, options.tree.method, r.estimate, e});
                h.push_back(t / k);
                err.push_back(e);
            }
        }
        ConvergenceFit fit{f.degree, std::nullopt, 0};
        fit.slope = fit_slope(h, err, options.error_floor, &fit.points_used);
        result.fits.push_back(fit);
    }
    return result;
}

std::string convergence_csv(const ConvergenceResult& result)
{
    std::string out = "degree,T,steps,method,estimate,abs_error\n";
    for (const auto& r : result.rows)
        out += fmt::format("{},{},{},{},{},{}\n", r.degree, r.T, r.steps, to_string(r.method), r.estimate, r.abs_error);
    return out;
}

std::vector<double> SignatureSystem::initial_state(std::span<const double> x0) const
{
    if (static_cast<int>(x0.size()) != base_dim) throw std::invalid_argument("SignatureSystem: wrong initial state size");
    std::vector<double> s(x0.begin(), x0.end());
    s.resize(static_cast<std::size_t>(base_dim) + words.size(), 0.0);
    return s;
}

std::size_t SignatureSystem::index_of(const Word& w) const
{
    auto it = std::find(words.begin(), words.end(), w);
    if (it == words.end()) throw std::out_of_range("SignatureSystem: no coordinate for word " + w.to_string());
    return static_cast<std::size_t>(base_dim) + static_cast<std::size_t>(it - words.begin());
}

SignatureSystem signature_level_system(const VectorField& v, int level, std::size_t state_budget)
{
    if (level < 1 || level > 4) throw std::invalid_argument("signature_level_system: level must be in [1, 4]");
    const int n = v.state_dim();
    SignatureSystem sys{v, n, level, {}};
    std::vector<Word> current{Word{}};
    std::size_t total = static_cast<std::size_t>(n);
    for (int l = 1; l <= level; ++l) {
        std::vector<Word> next;
        for (const auto& w : current)
            for (Letter a = 0; a < n; ++a) next.push_back(w.concat(Word{a}));
        total += next.size();
        if (total > state_budget)
            throw std::length_error(fmt::format("signature_level_system: {} states exceed the budget of {}", total, state_budget));
        sys.words.insert(sys.words.end(), next.begin(), next.end());
        current = std::move(next);
    }
    const int N = static_cast<int>(total);
    // parent[i]: state index of S^I for words[i] = I.a (-1 for the empty word)
    std::vector<int> parent, last;
    for (const auto& w : sys.words) {
        last.push_back(w[w.size() - 1]);
        parent.push_back(w.size() == 1 ? -1 : static_cast<int>(sys.index_of(w.slice(0, w.size() - 1))));
    }

    if (v.kind() == FieldKind::polynomial) {
        auto embed = [N](const Polynomial& p) {
            Polynomial out(N);
            for (const auto& [e, c] : p.terms()) {
                Polynomial::Exponents big(e);
                big.resize(static_cast<std::size_t>(N), 0);
                out.add_term(big, c);
            }
            return out;
        };
        std::vector<std::vector<Polynomial>> fields;
        for (const auto& comps : v.polynomials()) {
            std::vector<Polynomial> big;
            for (const auto& p : comps) big.push_back(embed(p));
            for (std::size_t i = 0; i < sys.words.size(); ++i) {
                const Polynomial& base = big[static_cast<std::size_t>(last[i])];
                big.push_back(parent[i] < 0 ? base : Polynomial::variable(N, parent[i]) * base);
            }
            fields.push_back(std::move(big));
        }
        sys.field = VectorField::polynomial(N, std::move(fields));
        return sys;
    }

    auto inner = v;
    sys.field = VectorField::generic(
        N, v.driving_dim(),
        [inner, n, N, parent, last](int j, std::span<const double> x) {
            std::vector<double> out(static_cast<std::size_t>(N));
            auto base = inner.evaluate(j, x.first(static_cast<std::size_t>(n)));
            std::copy(base.begin(), base.end(), out.begin());
            for (std::size_t i = 0; i < parent.size(); ++i) {
                const double vj = base[static_cast<std::size_t>(last[i])];
                out[static_cast<std::size_t>(n) + i] = parent[i] < 0 ? vj : x[static_cast<std::size_t>(parent[i])] * vj;
            }
            return out;
        },
        v.max_order());
    return sys;
}

} // namespace wcub
