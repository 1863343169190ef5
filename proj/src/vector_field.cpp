#include "wcub/vector_field.hpp"

#include "wcub/word_basis.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wcub {

VectorField VectorField::affine(const std::vector<Matrix>& A, const std::vector<std::vector<double>>& b)
{
    if (A.size() < 2) throw std::invalid_argument("affine field: need matrices for the drift and at least one driver");
    const auto n = A[0].size();
    if (n == 0) throw std::invalid_argument("affine field: empty state");
    if (!b.empty() && b.size() != A.size()) throw std::invalid_argument("affine field: b must list one vector per direction");
    const int vars = static_cast<int>(n);
    std::vector<std::vector<Polynomial>> fields;
    for (std::size_t j = 0; j < A.size(); ++j) {
        if (A[j].size() != n) throw std::invalid_argument(fmt::format("affine field: A[{}] must have {} rows", j, n));
        if (!b.empty() && b[j].size() != n) throw std::invalid_argument(fmt::format("affine field: b[{}] must have {} entries", j, n));
        std::vector<Polynomial> comps;
        for (std::size_t a = 0; a < n; ++a) {
            if (A[j][a].size() != n) throw std::invalid_argument(fmt::format("affine field: A[{}] must be square", j));
            Polynomial p = b.empty() ? Polynomial(vars) : Polynomial::constant(vars, b[j][a]);
            for (std::size_t c = 0; c < n; ++c) p += Polynomial::variable(vars, static_cast<int>(c), A[j][a][c]);
            comps.push_back(std::move(p));
        }
        fields.push_back(std::move(comps));
    }
    return polynomial(vars, std::move(fields));
}

VectorField VectorField::polynomial(int state_dim, std::vector<std::vector<Polynomial>> fields)
{
    if (state_dim < 1) throw std::invalid_argument("polynomial field: state dimension must be >= 1");
    if (fields.size() < 2) throw std::invalid_argument("polynomial field: need the drift and at least one driver");
    for (const auto& comps : fields) {
        if (static_cast<int>(comps.size()) != state_dim)
            throw std::invalid_argument("polynomial field: each direction needs one polynomial per state component");
        for (const auto& p : comps)
            if (p.vars() != state_dim) throw std::invalid_argument("polynomial field: polynomial has wrong variable count");
    }
    VectorField v;
    v.state_dim_ = state_dim;
    v.driving_dim_ = static_cast<int>(fields.size()) - 1;
    v.kind_ = FieldKind::polynomial;
    v.fields_ = std::move(fields);
    return v;
}

VectorField VectorField::generic(int state_dim, int driving_dim, Evaluator f, int max_order)
{
    if (state_dim < 1 || driving_dim < 1) throw std::invalid_argument("generic field: dimensions must be >= 1");
    if (!f) throw std::invalid_argument("generic field: missing evaluator");
    if (max_order < 0) throw std::invalid_argument("generic field: negative derivative order");
    VectorField v;
    v.state_dim_ = state_dim;
    v.driving_dim_ = driving_dim;
    v.kind_ = FieldKind::generic;
    v.max_order_ = max_order;
    v.evaluator_ = std::move(f);
    return v;
}

VectorField VectorField::linear_scalar(double a, const std::vector<double>& b)
{
    std::vector<Matrix> A{{{a}}};
    for (double bi : b) A.push_back({{bi}});
    return affine(A);
}

std::vector<double> VectorField::evaluate(int direction, std::span<const double> x) const
{
    if (direction < 0 || direction > driving_dim_) throw std::out_of_range("VectorField: direction out of range");
    if (static_cast<int>(x.size()) != state_dim_) throw std::invalid_argument("VectorField: wrong state dimension");
    if (kind_ == FieldKind::generic) {
        auto out = evaluator_(direction, x);
        if (static_cast<int>(out.size()) != state_dim_) throw std::runtime_error("VectorField: evaluator returned wrong size");
        return out;
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(state_dim_));
    for (const auto& p : fields_[static_cast<std::size_t>(direction)]) out.push_back(p.evaluate(x));
    return out;
}

const std::vector<std::vector<Polynomial>>& VectorField::polynomials() const
{
    if (kind_ != FieldKind::polynomial) throw std::logic_error("VectorField: not a polynomial field");
    return fields_;
}

namespace {

// D g . V_j, componentwise.
std::vector<Polynomial> lie_derivative(const std::vector<Polynomial>& g, const std::vector<Polynomial>& field)
{
    const int n = static_cast<int>(field.size());
    std::vector<Polynomial> out;
    out.reserve(g.size());
    for (const auto& ga : g) {
        Polynomial acc(n);
        for (int b = 0; b < n; ++b) {
            Polynomial d = ga.derivative(b);
            if (!d.is_zero()) acc += d * field[static_cast<std::size_t>(b)];
        }
        out.push_back(std::move(acc));
    }
    return out;
}

std::vector<Polynomial> identity_map(int n)
{
    std::vector<Polynomial> id;
    for (int a = 0; a < n; ++a) id.push_back(Polynomial::variable(n, a));
    return id;
}

std::vector<double> evaluate_all(const std::vector<Polynomial>& g, std::span<const double> x)
{
    std::vector<double> out;
    out.reserve(g.size());
    for (const auto& p : g) out.push_back(p.evaluate(x));
    return out;
}

void check_order(const VectorField& v, std::size_t order)
{
    if (static_cast<long>(order) > static_cast<long>(v.max_order()))
        throw std::domain_error(fmt::format("vector field supports derivatives up to order {}, {} requested", v.max_order(), order));
}

} // namespace

std::vector<double> numeric_tower_value(const VectorField& v, const Word& w, std::span<const double> x)
{
    if (w.empty()) return {x.begin(), x.end()};
    check_order(v, w.size());
    const std::vector<double> dir = v.evaluate(w[0], x);
    if (w.size() == 1) return dir;
    const Word rest = w.slice(1, w.size());
    // the remaining tower is differentiated |w|-1 times in total
    const double order = static_cast<double>(w.size()) - 1.0;
    const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (order + 2.0));
    std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
    for (std::size_t a = 0; a < xp.size(); ++a) {
        xp[a] += h * dir[a];
        xm[a] -= h * dir[a];
    }
    auto gp = numeric_tower_value(v, rest, xp);
    const auto gm = numeric_tower_value(v, rest, xm);
    for (std::size_t a = 0; a < gp.size(); ++a) gp[a] = (gp[a] - gm[a]) / (2.0 * h);
    return gp;
}

std::map<Word, std::vector<double>> derivative_tower(const VectorField& v, std::span<const double> x, int k_max)
{
    if (k_max < 0) throw std::invalid_argument("derivative_tower: negative order");
    check_order(v, static_cast<std::size_t>(k_max));
    if (static_cast<int>(x.size()) != v.state_dim()) throw std::invalid_argument("derivative_tower: wrong state dimension");
    std::map<Word, std::vector<double>> out;
    if (v.kind() == FieldKind::generic) {
        std::vector<Word> level{Word{}};
        for (int k = 0; k <= k_max; ++k) {
            std::vector<Word> next;
            for (const auto& w : level) {
                out[w] = numeric_tower_value(v, w, x);
                for (Letter j = 0; j <= v.driving_dim(); ++j) next.push_back(Word{j}.concat(w));
            }
            level = std::move(next);
        }
        return out;
    }
    std::vector<std::pair<Word, std::vector<Polynomial>>> level{{Word{}, identity_map(v.state_dim())}};
    for (int k = 0; k <= k_max; ++k) {
        std::vector<std::pair<Word, std::vector<Polynomial>>> next;
        for (const auto& [w, g] : level) {
            out[w] = evaluate_all(g, x);
            if (k == k_max) continue;
            for (Letter j = 0; j <= v.driving_dim(); ++j)
                next.emplace_back(Word{j}.concat(w), lie_derivative(g, v.polynomials()[static_cast<std::size_t>(j)]));
        }
        level = std::move(next);
    }
    return out;
}

DerivativeTower::DerivativeTower(const VectorField& v, int depth)
    : field_(std::make_shared<const VectorField>(v)), depth_(depth), basis_(WordBasis::get(v.driving_dim(), depth))
{
    if (depth < 0) throw std::invalid_argument("DerivativeTower: negative depth");
    if (v.kind() != FieldKind::polynomial) return;
    const WordBasis& basis = *basis_;
    tower_.resize(basis.size());
    tower_[0] = identity_map(v.state_dim());
    for (std::size_t i = 1; i < basis.size(); ++i) {
        const Word u = basis.word(i);
        const Word rest = u.slice(1, u.size());
        tower_[i] = lie_derivative(tower_[basis.index(rest)], v.polynomials()[static_cast<std::size_t>(u[0])]);
    }
}

const std::vector<Polynomial>& DerivativeTower::components(const Word& w) const
{
    if (field_->kind() != FieldKind::polynomial) throw std::logic_error("DerivativeTower: symbolic tower needs a polynomial field");
    if (!is_valid_word(w, field_->driving_dim()) || graded_degree(w) > depth_)
        throw std::out_of_range("DerivativeTower: word " + w.to_string() + " outside the tower");
    return tower_[basis_->index(w)];
}

std::vector<double> DerivativeTower::evaluate(const Word& w, std::span<const double> x) const
{
    if (field_->kind() == FieldKind::generic) return numeric_tower_value(*field_, w, x);
    return evaluate_all(components(w), x);
}

ContractedField DerivativeTower::contract(const Tensor& L) const
{
    if (L.dim() != field_->driving_dim()) throw std::invalid_argument("DerivativeTower::contract: alphabet mismatch");
    if (L.depth() > depth_) throw std::invalid_argument("DerivativeTower::contract: tensor deeper than the tower");
    ContractedField out;
    out.state_dim_ = field_->state_dim();
    const auto& data = L.data();
    if (field_->kind() == FieldKind::generic) {
        out.field_ = field_;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data[i] != 0.0) out.words_.emplace_back(L.basis().word(i), data[i]);
        return out;
    }
    std::map<Polynomial::Exponents, std::size_t> slot;
    out.coeffs_.resize(static_cast<std::size_t>(out.state_dim_));
    // L's basis is a prefix of the tower's basis
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i] == 0.0) continue;
        const auto& g = tower_[i];
        for (std::size_t a = 0; a < g.size(); ++a) {
            for (const auto& [e, c] : g[a].terms()) {
                auto [it, inserted] = slot.emplace(e, out.monomials_.size());
                if (inserted) {
                    out.monomials_.push_back(e);
                    for (auto& row : out.coeffs_) row.push_back(0.0);
                }
                out.coeffs_[a][it->second] += data[i] * c;
            }
        }
    }
    return out;
}

void ContractedField::apply(std::span<const double> x, std::span<double> out) const
{
    if (field_) {
        std::fill(out.begin(), out.end(), 0.0);
        for (const auto& [w, c] : words_) {
            const auto g = numeric_tower_value(*field_, w, x);
            for (std::size_t a = 0; a < out.size(); ++a) out[a] += c * g[a];
        }
        return;
    }
    thread_local std::vector<double> values;
    values.resize(monomials_.size());
    for (std::size_t m = 0; m < monomials_.size(); ++m) {
        double v = 1.0;
        const auto& e = monomials_[m];
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) v *= x[i];
        values[m] = v;
    }
    for (std::size_t a = 0; a < coeffs_.size(); ++a) {
        double s = 0.0;
        for (std::size_t m = 0; m < values.size(); ++m) s += coeffs_[a][m] * values[m];
        out[a] = s;
    }
}

std::vector<double> ContractedField::operator()(std::span<const double> x) const
{
    std::vector<double> out(static_cast<std::size_t>(state_dim_));
    apply(x, out);
    return out;
}

} // namespace wcub
