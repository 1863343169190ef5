// Term table of the degree-7 cubature formula on Wiener space in R^3.
//
// Each row is a pattern: a bracket with symbolic indices i, j, k (or literal
// letters), a summation domain for those indices, an optional Gaussian
// multiplier z^i and a product of sign variables eta^a. The entry for
// Gaussian point z_r and sign vector eta_s is
//
//     l_{r,s} = sum over rows and index assignments of
//               coeff * z_r^{z} * prod eta_s^{a} * bracket
//
// with weight lambda_r * mu_s.

#include "wcub/wiener.hpp"

#include <cmath>
#include <string>

namespace wcub {

namespace {

enum class Domain {
    none,            // literal letters only
    i,               // i = 1..3
    i_ne_j,          // ordered pairs, i != j
    i_lt_j,          // i < j
    i_lt_j_lt_k,     // i < j < k
    distinct,        // ordered triples of distinct indices
    i_lt_j_k_other,  // i < j, k the remaining index
};

struct Row {
    double coeff;
    Domain domain;
    const char* z;   // "" for none, else one symbol
    const char* eta; // symbols; '0' is eta^0
    const char* bracket;
};

const double r3 = std::sqrt(3.0);

// clang-format off
const Row rows[] = {
    // level one
    {1.0,                Domain::none,        "",  "",    "0"},
    {1.0,                Domain::i,           "i", "",    "i"},

    // single brackets
    {1.0 / (2.0 * r3),   Domain::none,        "",  "120", "[1,2]"},
    {-1.0 / (2.0 * r3),  Domain::none,        "1", "2",   "[1,2]"},
    {1.0 / (2.0 * r3),   Domain::none,        "2", "1",   "[1,2]"},
    {1.0 / (2.0 * r3),   Domain::none,        "",  "130", "[1,3]"},
    {1.0 / (2.0 * r3),   Domain::none,        "1", "3",   "[1,3]"},
    {1.0 / (2.0 * r3),   Domain::none,        "3", "1",   "[1,3]"},
    {1.0 / (2.0 * r3),   Domain::none,        "",  "230", "[2,3]"},
    {1.0 / (2.0 * r3),   Domain::none,        "2", "3",   "[2,3]"},
    {1.0 / (2.0 * r3),   Domain::none,        "3", "2",   "[2,3]"},
    {1.0 / (2.0 * r3),   Domain::none,        "",  "3",   "[0,3]"},
    {-1.0 / (2.0 * r3),  Domain::none,        "",  "2",   "[0,2]"},
    {-1.0 / (2.0 * r3),  Domain::none,        "",  "1",   "[0,1]"},

    // degree three
    {1.0 / 12.0,         Domain::i_ne_j,      "i", "",    "[[i,j],j]"},
    {1.0 / 6.0,          Domain::none,        "1", "12",  "[[1,2],2]"},
    {1.0 / 6.0,          Domain::none,        "2", "12",  "[[2,3],3]"},
    {1.0 / 6.0,          Domain::none,        "3", "12",  "[[3,1],1]"},
    {1.0 / 6.0,          Domain::none,        "1", "13",  "[[1,3],3]"},
    {1.0 / 6.0,          Domain::none,        "2", "13",  "[[2,1],1]"},
    {1.0 / 6.0,          Domain::none,        "3", "13",  "[[3,2],2]"},
    {1.0 / 6.0,          Domain::none,        "1", "23",  "[[1,2],3]"},
    {1.0 / 6.0,          Domain::none,        "2", "23",  "[[2,3],1]"},
    {1.0 / 6.0,          Domain::none,        "3", "23",  "[[3,1],2]"},
    {1.0 / 12.0,         Domain::i,           "",  "",    "[[0,i],i]"},

    // degree four
    {1.0 / (24.0 * r3),  Domain::i_lt_j_k_other, "", "ij0", "[[[k,j],k],i]"},
    {1.0 / (24.0 * r3),  Domain::i_lt_j_k_other, "", "ij0", "[[[i,j],k],k]"},
    {1.0 / (24.0 * r3),  Domain::i_lt_j_k_other, "", "ij0", "[[[i,k],k],j]"},
    {1.0 / (12.0 * r3),  Domain::i_lt_j,      "",  "ij0", "[[[i,j],j],j]"},
    {1.0 / (12.0 * r3),  Domain::i_lt_j,      "",  "ij0", "[[[i,j],i],i]"},

    // degree five, three distinct Brownian letters
    {1.0 / 360.0,        Domain::i_lt_j_lt_k, "i", "",    "[[[[j,k],k],j],i]"},
    {1.0 / 360.0,        Domain::i_lt_j_lt_k, "k", "",    "[[[[i,j],j],k],i]"},
    {1.0 / 360.0,        Domain::i_lt_j_lt_k, "i", "",    "[[[[k,i],j],j],k]"},
    {1.0 / 360.0,        Domain::i_lt_j_lt_k, "k", "",    "[[[[j,i],i],k],j]"},
    {1.0 / 360.0,        Domain::i_lt_j_lt_k, "j", "",    "[[[[k,j],i],i],k]"},
    {1.0 / 360.0,        Domain::i_lt_j_lt_k, "j", "",    "[[[[i,k],k],i],j]"},
    {1.0 / 180.0,        Domain::i_lt_j_lt_k, "j", "",    "[[[[k,i],i],j],k]"},
    {1.0 / 180.0,        Domain::i_lt_j_lt_k, "i", "",    "[[[[k,j],j],i],k]"},
    {1.0 / 180.0,        Domain::i_lt_j_lt_k, "k", "",    "[[[[j,k],i],i],j]"},
    {1.0 / 180.0,        Domain::i_lt_j_lt_k, "k", "",    "[[[[i,k],j],j],i]"},
    {1.0 / 120.0,        Domain::i_lt_j_lt_k, "i", "",    "[[[[j,i],k],k],j]"},
    {1.0 / 120.0,        Domain::i_lt_j_lt_k, "j", "",    "[[[[i,j],k],k],i]"},
    {1.0 / 120.0,        Domain::distinct,    "i", "",    "[[[[i,k],k],j],j]"},

    // degree five, two Brownian letters
    {1.0 / 360.0,        Domain::i_ne_j,      "i", "",    "[[[[i,j],j],j],j]"},
    {1.0 / 120.0,        Domain::i_ne_j,      "j", "",    "[[[[i,j],j],j],i]"},
    {1.0 / 90.0,         Domain::i_ne_j,      "i", "",    "[[[[i,j],i],j],i]"},

    // degree six, with the time letter
    {1.0 / 360.0,        Domain::i,           "",  "",    "[[[[0,i],i],i],i]"},
    {1.0 / 120.0,        Domain::i_ne_j,      "",  "",    "[[[[0,i],i],j],j]"},
    {1.0 / 180.0,        Domain::i_ne_j,      "",  "",    "[[[[j,0],i],i],j]"},
    {1.0 / 360.0,        Domain::i_ne_j,      "",  "",    "[[[[i,j],j],0],i]"},
};
// clang-format on

struct Assignment {
    int i = 0, j = 0, k = 0;
};

std::vector<Assignment> assignments(Domain d)
{
    std::vector<Assignment> out;
    switch (d) {
    case Domain::none: out.push_back({}); break;
    case Domain::i:
        for (int i = 1; i <= 3; ++i) out.push_back({i, 0, 0});
        break;
    case Domain::i_ne_j:
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j)
                if (i != j) out.push_back({i, j, 0});
        break;
    case Domain::i_lt_j:
        for (int i = 1; i <= 3; ++i)
            for (int j = i + 1; j <= 3; ++j) out.push_back({i, j, 0});
        break;
    case Domain::i_lt_j_lt_k: out.push_back({1, 2, 3}); break;
    case Domain::distinct:
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j)
                for (int k = 1; k <= 3; ++k)
                    if (i != j && j != k && i != k) out.push_back({i, j, k});
        break;
    case Domain::i_lt_j_k_other:
        for (int i = 1; i <= 3; ++i)
            for (int j = i + 1; j <= 3; ++j) out.push_back({i, j, 6 - i - j});
        break;
    }
    return out;
}

int resolve(char symbol, const Assignment& a)
{
    switch (symbol) {
    case 'i': return a.i;
    case 'j': return a.j;
    case 'k': return a.k;
    default: return symbol - '0';
    }
}

std::string substitute(const char* pattern, const Assignment& a)
{
    std::string out;
    for (const char* p = pattern; *p; ++p) {
        char c = *p;
        if (c == 'i' || c == 'j' || c == 'k')
            out += std::to_string(resolve(c, a));
        else
            out += c;
    }
    return out;
}

std::vector<Degree7Term> build_terms()
{
    std::vector<Degree7Term> out;
    for (const Row& row : rows) {
        for (const Assignment& a : assignments(row.domain)) {
            Degree7Term t{row.coeff, 0, {}, parse_bracket(substitute(row.bracket, a))};
            if (*row.z) t.z_index = resolve(row.z[0], a);
            for (const char* e = row.eta; *e; ++e) t.etas.push_back(resolve(*e, a));
            out.push_back(std::move(t));
        }
    }
    return out;
}

} // namespace

const std::vector<Degree7Term>& degree7_terms()
{
    static const std::vector<Degree7Term> terms = build_terms();
    return terms;
}

} // namespace wcub
