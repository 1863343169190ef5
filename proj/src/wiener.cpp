#include "wcub/wiener.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>

namespace wcub {

template <class Scalar>
Scalar expected_signature_coefficient(const Word& w, const Scalar& T)
{
    // the factorization is forced: a 0 is its own block, any other letter
    // must be followed by a copy of itself
    int blocks = 0;
    int pairs = 0;
    for (std::size_t p = 0; p < w.size();) {
        if (w[p] == 0) {
            ++p;
        } else if (p + 1 < w.size() && w[p + 1] == w[p]) {
            p += 2;
            ++pairs;
        } else {
            return Scalar(0);
        }
        ++blocks;
    }
    Scalar c(1);
    for (int i = 0; i < pairs; ++i) c /= Scalar(2);
    for (int i = 2; i <= blocks; ++i) c /= Scalar(i);
    for (int i = 0; i < blocks; ++i) c *= T; // graded degree is 2 * blocks
    return c;
}

template <class Scalar>
TensorElement<Scalar> expected_signature(int dim, int depth, const Scalar& T)
{
    TensorElement<Scalar> gen(dim, depth);
    gen.add(Word{0}, T);
    for (Letter i = 1; i <= dim; ++i) gen.add(Word{i, i}, T / Scalar(2));
    return exp_series(gen);
}

template double expected_signature_coefficient(const Word&, const double&);
template Rational expected_signature_coefficient(const Word&, const Rational&);
template TensorElement<double> expected_signature(int, int, const double&);
template TensorElement<Rational> expected_signature(int, int, const Rational&);

double WienerCubatureFormula::weight_sum() const
{
    double s = 0.0;
    for (const auto& e : entries) s += e.weight;
    return s;
}

void WienerCubatureFormula::validate(bool check_weight_sum) const
{
    if (dim < 1) throw std::invalid_argument("formula: dimension must be >= 1");
    if (degree < 1) throw std::invalid_argument("formula: degree must be >= 1");
    if (entries.empty()) throw std::invalid_argument("formula: no entries");
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw std::invalid_argument(fmt::format("formula: entry {} has non-positive weight {}", k, e.weight));
        if (e.poly.dim() != dim) throw std::invalid_argument(fmt::format("formula: entry {} dimension mismatch", k));
        for (const auto& t : e.poly.terms()) {
            if (!std::isfinite(t.coeff)) throw std::invalid_argument(fmt::format("formula: entry {} non-finite coefficient", k));
            if (t.term.max_letter() > dim)
                throw std::invalid_argument(fmt::format("formula: entry {} letter outside alphabet in {}", k, t.term.to_string()));
            if (t.term.graded_degree() > degree)
                throw std::invalid_argument(fmt::format("formula: entry {} term {} exceeds degree {}", k, t.term.to_string(), degree));
        }
    }
    if (check_weight_sum && std::abs(weight_sum() - 1.0) > 1e-12)
        throw std::invalid_argument(fmt::format("formula: weights sum to {}", weight_sum()));
}

namespace {

void require_moments(const PointCubature& g, int degree, int dim_min = 1)
{
    if (g.dim < dim_min) throw std::invalid_argument("construct: Gaussian rule has wrong dimension");
    if (g.points.size() != g.weights.size()) throw std::invalid_argument("construct: point/weight count mismatch");
    for (double w : g.weights)
        if (!(w > 0.0)) throw std::invalid_argument("construct: Gaussian rule has non-positive weights");
    const double err = verify_moments(g, degree, Measure::gaussian);
    if (err > 1e-10)
        throw std::invalid_argument(fmt::format("construct: Gaussian rule fails degree-{} moments (error {:.3g})", degree, err));
}

BracketTerm leaf(Letter l) { return BracketTerm::leaf(l); }
BracketTerm br(BracketTerm a, BracketTerm b) { return BracketTerm::bracket(std::move(a), std::move(b)); }

// Adds c * term unless c is exactly zero.
void add_nonzero(LiePolynomial& p, double c, BracketTerm term)
{
    if (c != 0.0) p.add(c, std::move(term));
}

nlohmann::json rule_metadata(const PointCubature& g)
{
    return {{"name", g.name}, {"points", g.size()}, {"degree", g.degree}};
}

} // namespace

WienerCubatureFormula construct_degree3(const PointCubature& gaussian)
{
    require_moments(gaussian, 3);
    WienerCubatureFormula f;
    f.dim = gaussian.dim;
    f.degree = 3;
    for (std::size_t k = 0; k < gaussian.size(); ++k) {
        const auto& z = gaussian.points[k];
        LiePolynomial p(f.dim);
        p.add(1.0, leaf(0));
        for (int i = 1; i <= f.dim; ++i) add_nonzero(p, z[static_cast<std::size_t>(i - 1)], leaf(i));
        f.entries.push_back({gaussian.weights[k], std::move(p)});
    }
    f.metadata = {{"construction", "degree3"}, {"gaussian", rule_metadata(gaussian)}};
    return f;
}

WienerCubatureFormula construct_degree5(const PointCubature& gaussian, double x)
{
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("construct_degree5: x must lie in [0, 1]");
    require_moments(gaussian, 5);
    WienerCubatureFormula f;
    f.dim = gaussian.dim;
    f.degree = 5;
    const int d = f.dim;
    for (std::size_t k = 0; k < gaussian.size(); ++k) {
        const auto& zp = gaussian.points[k];
        auto z = [&](int i) { return zp[static_cast<std::size_t>(i - 1)]; };
        for (double eta : {1.0, -1.0}) {
            LiePolynomial p(d);
            p.add(1.0, leaf(0));
            for (int i = 1; i <= d; ++i) add_nonzero(p, z(i), leaf(i));
            for (int i = 1; i <= d; ++i) add_nonzero(p, z(i) * z(i) / 12.0, br(br(leaf(0), leaf(i)), leaf(i)));
            for (int i = 1; i <= d; ++i)
                for (int j = i + 1; j <= d; ++j) add_nonzero(p, eta * 0.5 * z(i) * z(j), br(leaf(i), leaf(j)));
            for (int i = 1; i <= d; ++i) {
                for (int j = i + 1; j <= d; ++j) {
                    add_nonzero(p, x * z(i) * z(j) * z(j) / 6.0, br(br(leaf(i), leaf(j)), leaf(j)));
                    add_nonzero(p, -(1.0 - x) * z(i) * z(i) * z(j) / 6.0, br(br(leaf(i), leaf(j)), leaf(i)));
                }
            }
            f.entries.push_back({0.5 * gaussian.weights[k], std::move(p)});
        }
    }
    f.metadata = {{"construction", "degree5"}, {"x", x}, {"gaussian", rule_metadata(gaussian)}};
    return f;
}

WienerCubatureFormula construct_degree7()
{
    return construct_degree7(gaussian_cubature(3, 7, GaussianRule::product), bernoulli_full(4));
}

WienerCubatureFormula construct_degree7(const PointCubature& gaussian, const PointCubature& signs)
{
    if (gaussian.dim != 3) throw std::invalid_argument("construct_degree7: Gaussian rule must be 3-dimensional");
    require_moments(gaussian, 7);
    if (signs.dim != 4) throw std::invalid_argument("construct_degree7: sign rule must be 4-dimensional");
    if (verify_moments(signs, 5, Measure::bernoulli) > 1e-12)
        throw std::invalid_argument("construct_degree7: sign rule fails degree-5 Bernoulli moments");

    const auto& table = degree7_terms();
    WienerCubatureFormula f;
    f.dim = 3;
    f.degree = 7;
    for (std::size_t r = 0; r < gaussian.size(); ++r) {
        const auto& z = gaussian.points[r];
        for (std::size_t s = 0; s < signs.size(); ++s) {
            const auto& eta = signs.points[s];
            // merge repeated brackets, keeping first-appearance order
            std::vector<std::pair<BracketTerm, double>> merged;
            std::map<std::string, std::size_t> slot;
            for (const auto& t : table) {
                double c = t.coeff;
                if (t.z_index) c *= z[static_cast<std::size_t>(t.z_index - 1)];
                for (int e : t.etas) c *= eta[static_cast<std::size_t>(e == 0 ? 3 : e - 1)];
                auto [it, inserted] = slot.emplace(t.term.to_string(), merged.size());
                if (inserted)
                    merged.emplace_back(t.term, c);
                else
                    merged[it->second].second += c;
            }
            LiePolynomial p(3);
            for (auto& [term, c] : merged) add_nonzero(p, c, term);
            f.entries.push_back({gaussian.weights[r] * signs.weights[s], std::move(p)});
        }
    }
    f.metadata = {{"construction", "degree7"}, {"gaussian", rule_metadata(gaussian)}, {"signs", rule_metadata(signs)}};
    return f;
}

std::string size_formula(const WienerCubatureFormula& f)
{
    const std::size_t n = f.size();
    const auto& meta = f.metadata;
    auto points = [&](const char* key) -> std::size_t {
        if (meta.contains(key) && meta[key].contains("points")) return meta[key]["points"].get<std::size_t>();
        return 0;
    };
    switch (f.degree) {
    case 3: return fmt::format("S_{0}(3)=N_{0}(3)={1}", f.dim, n);
    case 5: return fmt::format("S_{0}(5)=2N_{0}(5)=2*{1}={2}", f.dim, n / 2, n);
    case 7:
        if (std::size_t g = points("gaussian"), b = points("signs"); g && b)
            return fmt::format("S_{0}(7)=N_{0}(7)B_4(5)={1}*{2}={3}", f.dim, g, b, n);
        return fmt::format("S_{0}(7)=N_{0}(7)B_4(5)={1}", f.dim, n);
    default: return fmt::format("S_{}({})={}", f.dim, f.degree, n);
    }
}

Tensor formula_expectation(const WienerCubatureFormula& f, int depth, int threads)
{
    // Entries are summed in fixed chunks and the chunk sums are added in
    // order, so the result does not depend on the thread count.
    constexpr std::size_t chunk = 16;
    const std::size_t n = f.entries.size();
    const std::size_t chunks = (n + chunk - 1) / chunk;
    ExpansionCache cache(f.dim, depth);
    std::vector<Tensor> partial(chunks, Tensor(f.dim, depth));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < chunks;) {
            Tensor& acc = partial[c];
            for (std::size_t k = c * chunk; k < std::min(n, (c + 1) * chunk); ++k) {
                Tensor l = f.entries[k].poly.to_tensor(cache);
                l.data()[0] = 0.0;
                acc.add_scaled(exp_series(l), f.entries[k].weight);
            }
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(workers, chunks); ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    Tensor total(f.dim, depth);
    for (const auto& p : partial) total += p;
    return total;
}

VerificationReport verify_formula(const WienerCubatureFormula& f, const VerifyOptions& options)
{
    VerificationReport report;
    report.depth = options.depth.value_or(f.degree);
    report.T = options.T;
    if (report.depth < 0) throw std::invalid_argument("verify_formula: negative depth");
    if (!(options.T > 0.0)) throw std::invalid_argument("verify_formula: T must be positive");

    const Tensor lhs = formula_expectation(f, report.depth, options.threads);
    const Tensor rhs = expected_signature<double>(f.dim, report.depth, options.T);
    const WordBasis& basis = lhs.basis();

    std::vector<std::pair<double, std::size_t>> errors;
    errors.reserve(lhs.data().size());
    for (std::size_t i = 0; i < lhs.data().size(); ++i) {
        const double e = std::abs(lhs.data()[i] - rhs.data()[i]);
        report.max_residual = std::max(report.max_residual, e);
        errors.emplace_back(e, i);
    }
    const std::size_t keep = std::min(options.worst_count, errors.size());
    std::vector<ResidualEntry> all;
    all.reserve(errors.size());
    for (const auto& [e, i] : errors) all.push_back({basis.word(i), lhs.data()[i], rhs.data()[i], e});
    // errors equal to 10 significant digits count as ties, broken by word
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        const double e = all[i].abs_error;
        order.emplace_back(e == 0.0 ? 0.0 : std::stod(fmt::format("{:.9e}", e)), i);
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return all[a.second].word < all[b.second].word;
                      });
    std::vector<ResidualEntry> worst;
    for (std::size_t k = 0; k < keep; ++k) worst.push_back(all[order[k].second]);
    all = std::move(worst);
    all.resize(keep);
    report.worst = std::move(all);
    return report;
}

WienerCubatureFormula scale_formula(const WienerCubatureFormula& f, double T)
{
    if (!(T > 0.0)) throw std::invalid_argument("scale_formula: T must be positive");
    WienerCubatureFormula out = f;
    if (T == 1.0) return out;
    for (auto& e : out.entries) e.poly = e.poly.scaled_by_time(T);
    out.metadata["T"] = T * f.metadata.value("T", 1.0);
    return out;
}

nlohmann::json bracket_to_json(const BracketTerm& t)
{
    if (t.is_leaf()) return t.letter();
    return nlohmann::json::array({bracket_to_json(t.left()), bracket_to_json(t.right())});
}

BracketTerm bracket_from_json(const nlohmann::json& j)
{
    if (j.is_number_integer()) {
        const auto l = j.get<long long>();
        if (l < 0 || l > 1'000'000) throw std::invalid_argument(fmt::format("bracket: invalid letter {}", l));
        return BracketTerm::leaf(static_cast<Letter>(l));
    }
    if (j.is_array() && j.size() == 2) return BracketTerm::bracket(bracket_from_json(j[0]), bracket_from_json(j[1]));
    throw std::invalid_argument("bracket: expected an integer or a two-element array, got " + j.dump());
}

nlohmann::json formula_to_json(const WienerCubatureFormula& f)
{
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : f.entries) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : e.poly.terms()) terms.push_back({{"coeff", t.coeff}, {"bracket", bracket_to_json(t.term)}});
        entries.push_back({{"weight", e.weight}, {"terms", std::move(terms)}});
    }
    return {{"dim", f.dim}, {"degree", f.degree}, {"entries", std::move(entries)}, {"metadata", f.metadata}};
}

WienerCubatureFormula formula_from_json(const nlohmann::json& j)
{
    WienerCubatureFormula f;
    try {
        f.dim = j.at("dim").get<int>();
        f.degree = j.at("degree").get<int>();
        if (f.dim < 1) throw std::invalid_argument("formula: dimension must be >= 1");
        for (const auto& e : j.at("entries")) {
            LiePolynomial p(f.dim);
            for (const auto& t : e.at("terms")) p.add(t.at("coeff").get<double>(), bracket_from_json(t.at("bracket")));
            f.entries.push_back({e.at("weight").get<double>(), std::move(p)});
        }
        if (j.contains("metadata")) f.metadata = j["metadata"];
    } catch (const nlohmann::json::exception& err) {
        throw std::invalid_argument(std::string("formula: malformed JSON: ") + err.what());
    }
    // a perturbed weight sum is a verification failure, not a load error
    f.validate(false);
    return f;
}

void save_formula(const WienerCubatureFormula& f, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    // one entry per line keeps large formulas diffable
    const nlohmann::json j = formula_to_json(f);
    out << "{\n \"dim\": " << f.dim << ",\n \"degree\": " << f.degree << ",\n \"metadata\": " << j["metadata"].dump()
        << ",\n \"entries\": [";
    const auto& entries = j["entries"];
    for (std::size_t k = 0; k < entries.size(); ++k) out << (k ? ",\n  " : "\n  ") << entries[k].dump();
    out << "\n ]\n}\n";
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

WienerCubatureFormula load_formula(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& err) {
        throw std::invalid_argument(path + ": " + err.what());
    }
    return formula_from_json(j);
}

std::string residual_csv(const VerificationReport& report)
{
    std::string out = "word,lhs,rhs,abs_error\n";
    for (const auto& r : report.worst)
        out += fmt::format("\"{}\",{},{},{}\n", r.word.to_string(), r.lhs, r.rhs, r.abs_error);
    return out;
}

} // namespace wcub
