#pragma once

#include "wcub/tensor.hpp"
#include "wcub/word.hpp"

#include <map>
#include <string>
#include <vector>

namespace wcub {

// Key of a symmetrised Lyndon basis element: a non-decreasing list of
// Lyndon words, standing for the symmetrised product of their standard
// bracketings.
using PBWKey = std::vector<Word>;

template <class Scalar>
using PBWCoordinates = std::map<PBWKey, Scalar>;

[[nodiscard]] bool is_valid_pbw_key(const PBWKey& key, int dim);
[[nodiscard]] int graded_degree(const PBWKey& key);

// "([1,2], 3)"; each factor is rendered as its standard bracketing.
[[nodiscard]] std::string pbw_key_to_string(const PBWKey& key);

// Unique coordinates of `a` in the symmetrised Lyndon basis.
//
// The tensor algebra splits into blocks of words sharing the same multiset
// of letters; bracketing and symmetrisation preserve that multiset, so each
// block is solved independently. Block factorizations are cached.
template <class Scalar>
[[nodiscard]] PBWCoordinates<Scalar> pbw_coordinates(const TensorElement<Scalar>& a);

// sum over keys of coefficient * symmetrised product of standard bracketings.
template <class Scalar>
[[nodiscard]] TensorElement<Scalar> pbw_expand(const PBWCoordinates<Scalar>& coords, int dim, int depth);

// Tensor expansion of a single basis element.
template <class Scalar>
[[nodiscard]] TensorElement<Scalar> pbw_basis_element(const PBWKey& key, int dim, int depth);

// True iff every coordinate on a product of two or more Lyndon elements has
// magnitude <= tol.
[[nodiscard]] bool is_lie_element(const TensorElement<double>& a, double tol);

extern template PBWCoordinates<double> pbw_coordinates(const TensorElement<double>&);
extern template PBWCoordinates<Rational> pbw_coordinates(const TensorElement<Rational>&);
extern template TensorElement<double> pbw_expand(const PBWCoordinates<double>&, int, int);
extern template TensorElement<Rational> pbw_expand(const PBWCoordinates<Rational>&, int, int);
extern template TensorElement<double> pbw_basis_element(const PBWKey&, int, int);
extern template TensorElement<Rational> pbw_basis_element(const PBWKey&, int, int);

} // namespace wcub
