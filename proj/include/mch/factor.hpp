/*!
  \file factor.hpp
  \brief Algebraic factoring of SOP covers

  Quick-factor style: divide the cover by a kernel found by repeated
  literal division, and recurse on quotient and remainder.
*/

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mch/isop.hpp"
#include "mch/network.hpp"
#include "mch/truth_table.hpp"

namespace mch
{

/*! \brief AND/OR expression over literals; literal code is `2 * var + negated`. */
struct factored_form
{
  enum class op : uint8_t
  {
    const0,
    const1,
    literal,
    and_op,
    or_op
  };

  struct node
  {
    op kind{ op::const0 };
    uint8_t literal{ 0 };
    std::vector<uint32_t> children;
  };

  std::vector<node> nodes;
  uint32_t root{ 0 };

  uint32_t literal_count() const;
  truth_table evaluate( uint32_t num_vars ) const;
};

factored_form factor( cube_list const& cubes );

/*! \brief Builds the form with balanced AND trees, ORs via complemented ANDs; `leaves[i]` drives variable i. */
signal lower( factored_form const& form, logic_network& net, std::span<const signal> leaves );

} // namespace mch
