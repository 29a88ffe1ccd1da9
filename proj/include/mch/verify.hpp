/*!
  \file verify.hpp
  \brief Combinational equivalence checking by simulation
*/

#pragma once

#include <cstdint>
#include <vector>

#include "mch/network.hpp"

namespace mch
{

struct equivalence_verdict
{
  enum class status : uint8_t
  {
    equivalent,
    not_equivalent,
    unknown
  };

  status result{ status::unknown };
  /*! \brief Input values (bit i drives PI i) for which an output differs. */
  std::vector<bool> counterexample;
  /*! \brief Index of the first differing output. */
  uint32_t output{ 0 };
  /*! \brief Patterns simulated. */
  uint64_t patterns{ 0 };

  bool equivalent() const { return result == status::equivalent; }
  bool not_equivalent() const { return result == status::not_equivalent; }
};

struct cec_params
{
  /*! \brief Inputs up to which the check is exhaustive (at most 16). */
  uint32_t exhaustive_limit{ 16 };
  /*! \brief Random patterns used above the exhaustive limit. */
  uint64_t budget{ 1u << 16 };
  uint64_t seed{ 0x5eed };
};

/*! \brief Exhaustive up to `exhaustive_limit` inputs, otherwise corner plus random patterns.
 *
 * Throws `interface_error` if the PI or PO counts differ. A simulation-only
 * run that finds no difference returns `unknown`, never `equivalent`.
 */
equivalence_verdict cec( logic_network const& a, logic_network const& b, cec_params const& ps = {} );

std::string_view to_string( equivalence_verdict::status s );

} // namespace mch
