#include "wcub/word.hpp"

#include <algorithm>
#include <stdexcept>

namespace wcub {

Word Word::concat(const Word& other) const
{
    std::vector<Letter> out;
    out.reserve(letters_.size() + other.letters_.size());
    out.insert(out.end(), letters_.begin(), letters_.end());
    out.insert(out.end(), other.letters_.begin(), other.letters_.end());
    return Word(std::move(out));
}

Word Word::slice(std::size_t from, std::size_t to) const
{
    return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                                    letters_.begin() + static_cast<std::ptrdiff_t>(to)));
}

std::string Word::to_string() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(letters_[i]);
    }
    s += ')';
    return s;
}

int graded_degree(const Word& w)
{
    int deg = 0;
    for (Letter l : w) deg += letter_degree(l);
    return deg;
}

Ordering lex_compare(const Word& a, const Word& b)
{
    auto c = a <=> b;
    if (c < 0) return Ordering::less;
    if (c > 0) return Ordering::greater;
    return Ordering::equal;
}

bool is_valid_word(const Word& w, int dim)
{
    return std::all_of(w.begin(), w.end(), [dim](Letter l) { return l >= 0 && l <= dim; });
}

bool is_lyndon(const Word& w)
{
    if (w.empty()) return false;
    const auto& s = w.letters();
    const std::size_t n = s.size();
    for (std::size_t r = 1; r < n; ++r) {
        std::vector<Letter> rot(s.begin() + static_cast<std::ptrdiff_t>(r), s.end());
        rot.insert(rot.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(r));
        if (!(s < rot)) return false;
    }
    return true;
}

std::vector<Word> lyndon_words(int alphabet_size, int max_len)
{
    std::vector<Word> out;
    if (alphabet_size < 1 || max_len < 1) return out;
    std::vector<Letter> w{0};
    while (!w.empty()) {
        out.emplace_back(w);
        const std::size_t m = w.size();
        while (w.size() < static_cast<std::size_t>(max_len))
            w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == alphabet_size - 1)
            w.pop_back();
        if (!w.empty()) ++w.back();
    }
    return out;
}

std::vector<Word> lyndon_factorization(const Word& w)
{
    const auto& s = w.letters();
    const std::size_t n = s.size();
    std::vector<Word> out;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1, k = i;
        while (j < n && s[k] <= s[j]) {
            k = (s[k] < s[j]) ? i : k + 1;
            ++j;
        }
        while (i <= k) {
            out.push_back(w.slice(i, i + j - k));
            i += j - k;
        }
    }
    return out;
}

Word longest_lyndon_suffix(const Word& w)
{
    if (w.size() < 2) throw std::invalid_argument("longest_lyndon_suffix: word too short");
    for (std::size_t start = 1; start < w.size(); ++start) {
        Word suffix = w.slice(start, w.size());
        if (is_lyndon(suffix)) return suffix;
    }
    // a single letter is always Lyndon, so the loop returns
    return w.slice(w.size() - 1, w.size());
}

} // namespace wcub
