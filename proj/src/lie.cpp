#include "wcub/lie.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace wcub {

BracketTerm BracketTerm::leaf(Letter l)
{
    if (l < 0) throw std::invalid_argument("BracketTerm: negative letter");
    BracketTerm t;
    t.letter_ = l;
    return t;
}

BracketTerm BracketTerm::bracket(BracketTerm left, BracketTerm right)
{
    BracketTerm t;
    t.left_ = std::make_shared<const BracketTerm>(std::move(left));
    t.right_ = std::make_shared<const BracketTerm>(std::move(right));
    return t;
}

int BracketTerm::leaf_count() const
{
    return is_leaf() ? 1 : left_->leaf_count() + right_->leaf_count();
}

int BracketTerm::zero_count() const
{
    if (is_leaf()) return letter_ == 0 ? 1 : 0;
    return left_->zero_count() + right_->zero_count();
}

Letter BracketTerm::max_letter() const
{
    return is_leaf() ? letter_ : std::max(left_->max_letter(), right_->max_letter());
}

Word BracketTerm::foliage() const
{
    if (is_leaf()) return Word{letter_};
    return left_->foliage().concat(right_->foliage());
}

std::string BracketTerm::to_string() const
{
    if (is_leaf()) return std::to_string(letter_);
    return "[" + left_->to_string() + "," + right_->to_string() + "]";
}

bool operator==(const BracketTerm& a, const BracketTerm& b)
{
    if (a.is_leaf() || b.is_leaf()) return a.is_leaf() && b.is_leaf() && a.letter_ == b.letter_;
    return *a.left_ == *b.left_ && *a.right_ == *b.right_;
}

namespace {

class BracketParser {
public:
    explicit BracketParser(std::string_view text) : text_(text) {}

    BracketTerm parse()
    {
        BracketTerm t = term();
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters");
        return t;
    }

private:
    BracketTerm term()
    {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end");
        if (text_[pos_] == '[') {
            ++pos_;
            BracketTerm left = term();
            expect(',');
            BracketTerm right = term();
            expect(']');
            return BracketTerm::bracket(std::move(left), std::move(right));
        }
        if (!std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected letter or '['");
        int value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            value = value * 10 + (text_[pos_++] - '0');
        return BracketTerm::leaf(value);
    }

    void expect(char c)
    {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("parse_bracket: " + what + " at position " + std::to_string(pos_) + " in '" +
                                    std::string(text_) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

BracketTerm parse_bracket(std::string_view text)
{
    return BracketParser(text).parse();
}

BracketTerm standard_bracketing(const Word& w)
{
    if (!is_lyndon(w)) throw std::invalid_argument("standard_bracketing: " + w.to_string() + " is not Lyndon");
    if (w.size() == 1) return BracketTerm::leaf(w[0]);
    Word v = longest_lyndon_suffix(w);
    Word u = w.slice(0, w.size() - v.size());
    return BracketTerm::bracket(standard_bracketing(u), standard_bracketing(v));
}

std::shared_ptr<const Tensor> ExpansionCache::expand(const BracketTerm& t)
{
    const std::string key = t.to_string();
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto value = std::make_shared<const Tensor>(bracket_expand<double>(t, dim_, depth_));
    std::lock_guard lock(mutex_);
    return cache_.emplace(key, std::move(value)).first->second;
}

LiePolynomial LiePolynomial::from_lyndon_coordinates(int dim, const std::map<Word, double>& coords)
{
    LiePolynomial p(dim);
    for (const auto& [w, c] : coords) p.add(c, standard_bracketing(w));
    p.lyndon_coords_ = coords;
    return p;
}

void LiePolynomial::add(double coeff, BracketTerm term)
{
    if (term.max_letter() > dim_) throw std::out_of_range("LiePolynomial: letter outside alphabet");
    terms_.push_back({coeff, std::move(term)});
}

int LiePolynomial::graded_degree() const
{
    int deg = 0;
    for (const auto& t : terms_)
        if (t.coeff != 0.0) deg = std::max(deg, t.term.graded_degree());
    return deg;
}

LiePolynomial LiePolynomial::scaled_by_time(double factor) const
{
    LiePolynomial out(dim_);
    for (const auto& t : terms_) out.terms_.push_back({t.coeff * std::pow(factor, 0.5 * t.term.graded_degree()), t.term});
    if (lyndon_coords_) {
        std::map<Word, double> coords;
        for (const auto& [w, c] : *lyndon_coords_) coords[w] = c * std::pow(factor, 0.5 * wcub::graded_degree(w));
        out.lyndon_coords_ = std::move(coords);
    }
    return out;
}

Tensor LiePolynomial::to_tensor(int depth) const
{
    ExpansionCache cache(dim_, depth);
    return to_tensor(cache);
}

Tensor LiePolynomial::to_tensor(ExpansionCache& cache) const
{
    if (cache.dim() != dim_) throw std::invalid_argument("LiePolynomial: cache dimension mismatch");
    Tensor out(dim_, cache.depth());
    for (const auto& t : terms_) {
        // homogeneous terms above the truncation contribute nothing
        if (t.coeff == 0.0 || t.term.graded_degree() > cache.depth()) continue;
        out.add_scaled(*cache.expand(t.term), t.coeff);
    }
    return out;
}

bool LiePolynomial::is_consistent(int depth, double tol) const
{
    if (!lyndon_coords_) return true;
    Tensor from_coords(dim_, depth);
    for (const auto& [w, c] : *lyndon_coords_)
        from_coords.add_scaled(bracket_expand<double>(standard_bracketing(w), dim_, depth), c);
    return max_abs_diff(from_coords, to_tensor(depth)) <= tol;
}

std::string LiePolynomial::to_string() const
{
    std::string s;
    for (const auto& t : terms_) {
        if (!s.empty()) s += " + ";
        s += std::to_string(t.coeff) + "*" + t.term.to_string();
    }
    return s.empty() ? "0" : s;
}

template <class Scalar>
TensorElement<Scalar> symmetrised_product(const std::vector<TensorElement<Scalar>>& factors, int dim, int depth)
{
    const std::size_t n = factors.size();
    if (n == 0) return TensorElement<Scalar>::unit(dim, depth);
    if (n > 16) throw std::length_error("symmetrised_product: too many factors");
    for (const auto& f : factors)
        if (f.dim() != dim || f.depth() != depth) throw std::invalid_argument("symmetrised_product: mismatch");

    // sym(S) = (1/|S|) sum_{i in S} f_i (x) sym(S \ {i}), over subsets S
    std::unordered_map<unsigned, TensorElement<Scalar>> memo;
    auto sym = [&](auto&& self, unsigned mask) -> const TensorElement<Scalar>& {
        if (auto it = memo.find(mask); it != memo.end()) return it->second;
        TensorElement<Scalar> acc(dim, depth);
        int count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            ++count;
            unsigned rest = mask & ~(1u << i);
            if (rest == 0)
                acc += factors[i];
            else
                acc += factors[i] * self(self, rest);
        }
        acc /= Scalar(count);
        return memo.emplace(mask, std::move(acc)).first->second;
    };
    return sym(sym, (1u << n) - 1);
}

template TensorElement<double> symmetrised_product(const std::vector<TensorElement<double>>&, int, int);
template TensorElement<Rational> symmetrised_product(const std::vector<TensorElement<Rational>>&, int, int);

Tensor symmetrised_product(const std::vector<LiePolynomial>& factors, int dim, int depth)
{
    std::vector<Tensor> tensors;
    tensors.reserve(factors.size());
    for (const auto& f : factors) {
        if (f.dim() != dim) throw std::invalid_argument("symmetrised_product: dimension mismatch");
        tensors.push_back(f.to_tensor(depth));
    }
    return symmetrised_product(tensors, dim, depth);
}

} // namespace wcub
