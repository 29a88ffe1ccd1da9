/*!
  \file isop.hpp
  \brief Irredundant sum-of-products covers (Minato-Morreale)
*/

#pragma once

#include <cstdint>
#include <vector>

#include "mch/truth_table.hpp"

namespace mch
{

/*! \brief Product term: bit i of `pos` (`neg`) selects literal x_i (!x_i). */
struct cube
{
  uint8_t pos{ 0 };
  uint8_t neg{ 0 };

  uint32_t num_literals() const;
  bool operator==( cube const& ) const = default;
};

using cube_list = std::vector<cube>;

/*! \brief Irredundant SOP cover of `tt`. The constant-0 function has the empty cover. */
cube_list isop( truth_table const& tt );

/*! \brief Irredundant cover of some function between `on` and `on | dc`. */
cube_list isop( truth_table const& on, truth_table const& dc );

truth_table evaluate( cube_list const& cubes, uint32_t num_vars );

truth_table evaluate( cube const& c, uint32_t num_vars );

uint32_t literal_count( cube_list const& cubes );

} // namespace mch
