/*!
  \file npn.hpp
  \brief NPN canonization

  The canonical representative of a function is the lexicographically
  smallest table over all input permutations, input negations and output
  negation. It is exact up to four variables; five and six variables use a
  greedy sifting heuristic.
*/

#pragma once

#include <array>
#include <cstdint>

#include "mch/truth_table.hpp"

namespace mch
{

/*! \brief Input permutation, input negation and output negation.
 *
 * `apply_npn(f, t)` is the function g with
 * g(y) = output_neg XOR f(x), where x_i = y_{perm[i]} XOR bit i of input_neg.
 */
struct npn_transform
{
  std::array<uint8_t, 6> perm{ 0, 1, 2, 3, 4, 5 };
  uint8_t input_neg{ 0 };
  bool output_neg{ false };
  uint8_t num_vars{ 0 };

  static npn_transform identity( uint32_t num_vars );
  bool is_identity() const;
  bool operator==( npn_transform const& ) const = default;
};

truth_table apply_npn( truth_table const& tt, npn_transform const& t );

/*! \brief Transform u with apply_npn(apply_npn(f, t), u) == f. */
npn_transform inverse( npn_transform const& t );

struct npn_result
{
  truth_table canon;
  /*! \brief Maps the input table to `canon`. */
  npn_transform transform;
  /*! \brief False for the five- and six-variable heuristic. */
  bool exact{ true };
};

npn_result npn_canonize( truth_table const& tt );

/*! \brief Exhaustive canonization by trying every transform (testing aid; v <= 4). */
npn_result npn_canonize_exhaustive( truth_table const& tt );

} // namespace mch
