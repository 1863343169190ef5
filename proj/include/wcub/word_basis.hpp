#pragma once

#include "wcub/word.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace wcub {

// Enumeration of every word over {0, ..., dim} of graded degree <= depth.
//
// Words are grouped by graded degree; inside one degree they are listed in
// lexicographic order, so words of degree g starting with 0 come first
// (a[g-2] of them), then those starting with 1 (a[g-1] of them), and so on,
// where a[g] = dim * a[g-1] + a[g-2] counts the words of degree exactly g.
// With this layout the words u.v for fixed u and all v of a given degree
// occupy one contiguous range, which is what makes the dense product cheap.
class WordBasis {
public:
    WordBasis(int dim, int depth);

    // Shared, immutable instance per (dim, depth).
    static std::shared_ptr<const WordBasis> get(int dim, int depth);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int depth() const { return depth_; }
    [[nodiscard]] std::size_t size() const { return offsets_.back(); }
    [[nodiscard]] std::size_t level_size(int g) const
    {
        return (g < 0 || g > depth_) ? 0 : sizes_[static_cast<std::size_t>(g)];
    }
    [[nodiscard]] std::size_t level_offset(int g) const { return offsets_[static_cast<std::size_t>(g)]; }

    // Flat index of a word; the word must be valid and of graded degree <= depth.
    [[nodiscard]] std::size_t index(const Word& w) const;
    [[nodiscard]] Word word(std::size_t flat) const;
    [[nodiscard]] Word word_in_level(int g, std::size_t rank) const;
    [[nodiscard]] int level_of(std::size_t flat) const;

    // Rank inside level g1+g2 of the concatenation of the i-th word of
    // level g1 with the first word of level g2.
    [[nodiscard]] std::size_t prefix_offset(int g1, std::size_t i, int g2) const
    {
        return prefix_[static_cast<std::size_t>(g1 * (depth_ + 1) + g2)][i];
    }

    static constexpr std::size_t max_size = std::size_t{1} << 23;

private:
    [[nodiscard]] std::size_t count(int g) const;
    [[nodiscard]] std::size_t contribution(Letter l, int suffix_degree) const;

    int dim_;
    int depth_;
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<std::uint32_t>> prefix_;
};

} // namespace wcub
