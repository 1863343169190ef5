#include "wcub/word_basis.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace wcub {

WordBasis::WordBasis(int dim, int depth) : dim_(dim), depth_(depth)
{
    if (dim < 1) throw std::invalid_argument("WordBasis: dimension must be >= 1");
    if (depth < 0) throw std::invalid_argument("WordBasis: depth must be >= 0");

    sizes_.resize(static_cast<std::size_t>(depth) + 1);
    offsets_.assign(1, 0);
    for (int g = 0; g <= depth; ++g) {
        std::size_t a = (g == 0) ? 1 : static_cast<std::size_t>(dim) * count(g - 1) + count(g - 2);
        sizes_[static_cast<std::size_t>(g)] = a;
        offsets_.push_back(offsets_.back() + a);
        if (offsets_.back() > max_size)
            throw std::length_error("WordBasis: " + std::to_string(offsets_.back()) +
                                    " words exceed the supported basis size");
    }

    prefix_.resize(static_cast<std::size_t>((depth + 1) * (depth + 1)));
    for (int g1 = 0; g1 <= depth; ++g1) {
        for (int g2 = 0; g1 + g2 <= depth; ++g2) {
            auto& table = prefix_[static_cast<std::size_t>(g1 * (depth + 1) + g2)];
            table.resize(level_size(g1));
            for (std::size_t i = 0; i < table.size(); ++i) {
                Word u = word_in_level(g1, i);
                int h = g1 + g2;
                std::size_t p = 0;
                for (Letter l : u) {
                    p += contribution(l, h);
                    h -= letter_degree(l);
                }
                table[i] = static_cast<std::uint32_t>(p);
            }
        }
    }
}

std::shared_ptr<const WordBasis> WordBasis::get(int dim, int depth)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const WordBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, depth}];
    if (!slot) slot = std::make_shared<const WordBasis>(dim, depth);
    return slot;
}

std::size_t WordBasis::count(int g) const
{
    if (g < 0) return 0;
    return sizes_[static_cast<std::size_t>(g)];
}

std::size_t WordBasis::contribution(Letter l, int suffix_degree) const
{
    if (l == 0) return 0;
    return count(suffix_degree - 2) + static_cast<std::size_t>(l - 1) * count(suffix_degree - 1);
}

std::size_t WordBasis::index(const Word& w) const
{
    if (!is_valid_word(w, dim_)) throw std::out_of_range("WordBasis: letter outside alphabet");
    int g = graded_degree(w);
    if (g > depth_) throw std::out_of_range("WordBasis: word exceeds truncation depth");
    std::size_t rank = 0;
    int h = g;
    for (Letter l : w) {
        rank += contribution(l, h);
        h -= letter_degree(l);
    }
    return offsets_[static_cast<std::size_t>(g)] + rank;
}

Word WordBasis::word_in_level(int g, std::size_t rank) const
{
    std::vector<Letter> letters;
    while (g > 0) {
        std::size_t zeros = count(g - 2);
        if (rank < zeros) {
            letters.push_back(0);
            g -= 2;
            continue;
        }
        rank -= zeros;
        std::size_t block = count(g - 1);
        letters.push_back(static_cast<Letter>(1 + rank / block));
        rank %= block;
        g -= 1;
    }
    return Word(std::move(letters));
}

int WordBasis::level_of(std::size_t flat) const
{
    int g = 0;
    while (flat >= offsets_[static_cast<std::size_t>(g) + 1]) ++g;
    return g;
}

Word WordBasis::word(std::size_t flat) const
{
    int g = level_of(flat);
    return word_in_level(g, flat - offsets_[static_cast<std::size_t>(g)]);
}

} // namespace wcub
