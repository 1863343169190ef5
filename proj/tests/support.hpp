#pragma once

#include "wcub/lie.hpp"
#include "wcub/tensor.hpp"
#include "wcub/word.hpp"

#include <random>
#include <vector>

namespace wcub::testing {

// Small hand-rolled generators for the property tests.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    // Integer-valued rationals keep exact tests exact.
    Rational small_rational() { return Rational(uniform_int(-6, 6), uniform_int(1, 4)); }

    Word word(int dim, int max_len)
    {
        Word w;
        const int len = uniform_int(0, max_len);
        for (int i = 0; i < len; ++i) w.push_back(uniform_int(0, dim));
        return w;
    }

    // Random element with `nonzero` terms and zero constant term unless asked.
    Tensor tensor(int dim, int depth, int nonzero, bool with_constant = false)
    {
        Tensor t(dim, depth);
        const auto& basis = t.basis();
        for (int k = 0; k < nonzero && basis.size() > 1; ++k) {
            const auto i = static_cast<std::size_t>(uniform_int(1, static_cast<int>(basis.size()) - 1));
            t.data()[i] = uniform();
        }
        if (with_constant) t.data()[0] = 1.0;
        return t;
    }

    ExactTensor exact_tensor(int dim, int depth, int nonzero)
    {
        ExactTensor t(dim, depth);
        const auto& basis = t.basis();
        for (int k = 0; k < nonzero && basis.size() > 1; ++k) {
            const auto i = static_cast<std::size_t>(uniform_int(1, static_cast<int>(basis.size()) - 1));
            t.data()[i] = small_rational();
        }
        return t;
    }

    BracketTerm bracket(int dim, int max_degree)
    {
        const Letter l = uniform_int(0, dim);
        BracketTerm t = BracketTerm::leaf(l);
        while (true) {
            const BracketTerm other = BracketTerm::leaf(uniform_int(1, dim));
            if (t.graded_degree() + other.graded_degree() > max_degree || uniform() < -0.6) return t;
            t = uniform() < 0 ? BracketTerm::bracket(t, other) : BracketTerm::bracket(other, t);
        }
    }

    LiePolynomial lie_polynomial(int dim, int max_degree, int terms)
    {
        LiePolynomial p(dim);
        for (int k = 0; k < terms; ++k) p.add(uniform(), bracket(dim, max_degree));
        return p;
    }
};

} // namespace wcub::testing
