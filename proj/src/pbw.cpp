#include "wcub/pbw.hpp"

#include "wcub/lie.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <type_traits>

namespace wcub {

namespace {

template <class S>
using Sparse = std::map<Word, S>;

template <class S>
Sparse<S> sparse_product(const Sparse<S>& a, const Sparse<S>& b)
{
    Sparse<S> out;
    for (const auto& [u, x] : a)
        for (const auto& [v, y] : b) out[u.concat(v)] += x * y;
    return out;
}

template <class S>
void sparse_axpy(Sparse<S>& y, const S& s, const Sparse<S>& x)
{
    for (const auto& [w, c] : x) y[w] += s * c;
}

Word content_of(const Word& w)
{
    auto letters = w.letters();
    std::sort(letters.begin(), letters.end());
    return Word(std::move(letters));
}

template <class S>
bool is_nonzero(const S& x)
{
    return x != S(0);
}

// Square block of the change of basis between words and symmetrised Lyndon
// elements sharing one multiset of letters, held as an LU factorization.
template <class S>
struct Block {
    std::vector<Word> words;
    std::vector<PBWKey> keys;
    std::map<Word, std::size_t> row_of;
    std::vector<S> lu;
    std::vector<std::size_t> perm;

    [[nodiscard]] std::size_t size() const { return words.size(); }

    void factorize()
    {
        const std::size_t n = size();
        perm.resize(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t pivot = n;
            if constexpr (std::is_floating_point_v<S>) {
                double best = 0.0;
                for (std::size_t r = k; r < n; ++r) {
                    double v = std::abs(lu[r * n + k]);
                    if (v > best) {
                        best = v;
                        pivot = r;
                    }
                }
            } else {
                for (std::size_t r = k; r < n && pivot == n; ++r)
                    if (is_nonzero(lu[r * n + k])) pivot = r;
            }
            if (pivot == n) throw std::logic_error("pbw: singular basis block (content " + words[0].to_string() + ")");
            if (pivot != k) {
                for (std::size_t c = 0; c < n; ++c) std::swap(lu[k * n + c], lu[pivot * n + c]);
                std::swap(perm[k], perm[pivot]);
            }
            const S diag = lu[k * n + k];
            for (std::size_t r = k + 1; r < n; ++r) {
                if (!is_nonzero(lu[r * n + k])) continue;
                const S factor = lu[r * n + k] / diag;
                lu[r * n + k] = factor;
                for (std::size_t c = k + 1; c < n; ++c)
                    if (is_nonzero(lu[k * n + c])) lu[r * n + c] -= factor * lu[k * n + c];
            }
        }
    }

    [[nodiscard]] std::vector<S> solve(const std::vector<S>& rhs) const
    {
        const std::size_t n = size();
        std::vector<S> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm[i]];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (is_nonzero(lu[i * n + j])) x[i] -= lu[i * n + j] * x[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j)
                if (is_nonzero(lu[i * n + j])) x[i] -= lu[i * n + j] * x[j];
            x[i] /= lu[i * n + i];
        }
        return x;
    }
};

template <class S>
class PBWTables {
public:
    static PBWTables& instance()
    {
        static PBWTables tables;
        return tables;
    }

    std::shared_ptr<const Sparse<S>> lyndon(const Word& w)
    {
        if (auto hit = find(lyndon_, w)) return hit;
        Sparse<S> value;
        if (w.size() == 1) {
            value[w] = S(1);
        } else {
            Word v = longest_lyndon_suffix(w);
            Word u = w.slice(0, w.size() - v.size());
            auto pu = lyndon(u);
            auto pv = lyndon(v);
            value = sparse_product(*pu, *pv);
            sparse_axpy(value, S(-1), sparse_product(*pv, *pu));
            std::erase_if(value, [](const auto& kv) { return !is_nonzero(kv.second); });
        }
        return insert(lyndon_, w, std::move(value));
    }

    std::shared_ptr<const Sparse<S>> sym(const PBWKey& key)
    {
        if (auto hit = find(sym_, key)) return hit;
        Sparse<S> value;
        if (key.empty()) {
            value[Word{}] = S(1);
        } else if (key.size() == 1) {
            value = *lyndon(key[0]);
        } else {
            // (1/n) sum_i l_i (x) sym(key without i); equal factors share a term
            for (std::size_t i = 0; i < key.size(); ++i) {
                if (i > 0 && key[i] == key[i - 1]) continue;
                std::size_t multiplicity = static_cast<std::size_t>(std::count(key.begin(), key.end(), key[i]));
                PBWKey rest = key;
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
                sparse_axpy(value, S(static_cast<long>(multiplicity)), sparse_product(*lyndon(key[i]), *sym(rest)));
            }
            const S n = S(static_cast<long>(key.size()));
            for (auto& [w, c] : value) c /= n;
            std::erase_if(value, [](const auto& kv) { return !is_nonzero(kv.second); });
        }
        return insert(sym_, key, std::move(value));
    }

    std::shared_ptr<const Block<S>> block(const Word& content)
    {
        if (auto hit = find(blocks_, content)) return hit;
        Block<S> b;
        auto letters = content.letters();
        do {
            b.words.emplace_back(letters);
        } while (std::next_permutation(letters.begin(), letters.end()));
        for (std::size_t r = 0; r < b.words.size(); ++r) {
            b.row_of[b.words[r]] = r;
            auto factors = lyndon_factorization(b.words[r]);
            std::sort(factors.begin(), factors.end());
            b.keys.push_back(std::move(factors));
        }
        const std::size_t n = b.size();
        b.lu.assign(n * n, S(0));
        for (std::size_t c = 0; c < n; ++c)
            for (const auto& [w, v] : *sym(b.keys[c])) b.lu[b.row_of.at(w) * n + c] = v;
        b.factorize();
        return insert(blocks_, content, std::move(b));
    }

private:
    template <class Map, class Key>
    typename Map::mapped_type find(Map& map, const Key& key)
    {
        std::lock_guard lock(mutex_);
        auto it = map.find(key);
        return it == map.end() ? nullptr : it->second;
    }

    template <class Map, class Key, class Value>
    typename Map::mapped_type insert(Map& map, const Key& key, Value value)
    {
        auto ptr = std::make_shared<const Value>(std::move(value));
        std::lock_guard lock(mutex_);
        return map.emplace(key, std::move(ptr)).first->second;
    }

    std::mutex mutex_;
    std::map<Word, std::shared_ptr<const Sparse<S>>> lyndon_;
    std::map<PBWKey, std::shared_ptr<const Sparse<S>>> sym_;
    std::map<Word, std::shared_ptr<const Block<S>>> blocks_;
};

} // namespace

bool is_valid_pbw_key(const PBWKey& key, int dim)
{
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (!is_valid_word(key[i], dim) || !is_lyndon(key[i])) return false;
        if (i > 0 && key[i] < key[i - 1]) return false;
    }
    return true;
}

int graded_degree(const PBWKey& key)
{
    int deg = 0;
    for (const auto& w : key) deg += graded_degree(w);
    return deg;
}

std::string pbw_key_to_string(const PBWKey& key)
{
    if (key.empty()) return "()";
    std::string s = "(";
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) s += ", ";
        s += standard_bracketing(key[i]).to_string();
    }
    return s + ")";
}

template <class Scalar>
PBWCoordinates<Scalar> pbw_coordinates(const TensorElement<Scalar>& a)
{
    std::map<Word, std::vector<std::pair<Word, Scalar>>> by_content;
    const WordBasis& basis = a.basis();
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        if (!is_nonzero(a.data()[i])) continue;
        Word w = basis.word(i);
        by_content[content_of(w)].emplace_back(std::move(w), a.data()[i]);
    }

    auto& tables = PBWTables<Scalar>::instance();
    PBWCoordinates<Scalar> out;
    for (const auto& [content, entries] : by_content) {
        auto block = tables.block(content);
        std::vector<Scalar> rhs(block->size(), Scalar(0));
        for (const auto& [w, c] : entries) rhs[block->row_of.at(w)] = c;
        auto x = block->solve(rhs);
        for (std::size_t k = 0; k < x.size(); ++k)
            if (is_nonzero(x[k])) out[block->keys[k]] = x[k];
    }
    return out;
}

template <class Scalar>
TensorElement<Scalar> pbw_basis_element(const PBWKey& key, int dim, int depth)
{
    if (!is_valid_pbw_key(key, dim)) throw std::invalid_argument("pbw: invalid key " + pbw_key_to_string(key));
    if (graded_degree(key) > depth) throw std::out_of_range("pbw: key exceeds truncation");
    TensorElement<Scalar> out(dim, depth);
    for (const auto& [w, c] : *PBWTables<Scalar>::instance().sym(key)) out.add(w, c);
    return out;
}

template <class Scalar>
TensorElement<Scalar> pbw_expand(const PBWCoordinates<Scalar>& coords, int dim, int depth)
{
    TensorElement<Scalar> out(dim, depth);
    auto& tables = PBWTables<Scalar>::instance();
    for (const auto& [key, c] : coords) {
        if (!is_valid_pbw_key(key, dim)) throw std::invalid_argument("pbw: invalid key " + pbw_key_to_string(key));
        if (graded_degree(key) > depth) throw std::out_of_range("pbw: key exceeds truncation");
        for (const auto& [w, v] : *tables.sym(key)) out.add(w, c * v);
    }
    return out;
}

bool is_lie_element(const TensorElement<double>& a, double tol)
{
    for (const auto& [key, c] : pbw_coordinates(a))
        if (key.size() != 1 && std::abs(c) > tol) return false;
    return true;
}

template PBWCoordinates<double> pbw_coordinates(const TensorElement<double>&);
template PBWCoordinates<Rational> pbw_coordinates(const TensorElement<Rational>&);
template TensorElement<double> pbw_expand(const PBWCoordinates<double>&, int, int);
template TensorElement<Rational> pbw_expand(const PBWCoordinates<Rational>&, int, int);
template TensorElement<double> pbw_basis_element(const PBWKey&, int, int);
template TensorElement<Rational> pbw_basis_element(const PBWKey&, int, int);

} // namespace wcub
