#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace wcub {

using Letter = int;

// A word over the time-augmented alphabet {0, ..., d}. Letter 0 is the time
// direction, letters 1..d are Brownian directions. The empty word is the unit.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<Letter> letters) : letters_(letters) {}
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    [[nodiscard]] std::size_t size() const { return letters_.size(); }
    [[nodiscard]] bool empty() const { return letters_.empty(); }
    [[nodiscard]] Letter operator[](std::size_t i) const { return letters_[i]; }
    [[nodiscard]] const std::vector<Letter>& letters() const { return letters_; }

    auto begin() const { return letters_.begin(); }
    auto end() const { return letters_.end(); }

    void push_back(Letter l) { letters_.push_back(l); }

    [[nodiscard]] Word concat(const Word& other) const;
    [[nodiscard]] Word slice(std::size_t from, std::size_t to) const;

    // Dictionary order: a proper prefix is smaller than its extensions,
    // otherwise the first differing letter decides.
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) = default;
    friend bool operator==(const Word& a, const Word& b) = default;

    // "(0,1,1)"; the empty word renders as "()".
    [[nodiscard]] std::string to_string() const;

private:
    std::vector<Letter> letters_;
};

// Length plus the number of time letters: time scales like T, Brownian
// letters like sqrt(T).
[[nodiscard]] int graded_degree(const Word& w);
[[nodiscard]] inline int letter_degree(Letter l) { return l == 0 ? 2 : 1; }

enum class Ordering { less, equal, greater };
[[nodiscard]] Ordering lex_compare(const Word& a, const Word& b);

[[nodiscard]] bool is_valid_word(const Word& w, int dim);
[[nodiscard]] bool is_lyndon(const Word& w);

// All Lyndon words over {0, ..., alphabet_size-1} of length <= max_len,
// in lexicographic order (Duval's generation algorithm).
[[nodiscard]] std::vector<Word> lyndon_words(int alphabet_size, int max_len);

// Chen-Fox-Lyndon factorization w = l1 l2 ... lk with l1 >= l2 >= ... >= lk.
[[nodiscard]] std::vector<Word> lyndon_factorization(const Word& w);

// Longest proper suffix of a Lyndon word that is itself Lyndon.
[[nodiscard]] Word longest_lyndon_suffix(const Word& w);

} // namespace wcub
