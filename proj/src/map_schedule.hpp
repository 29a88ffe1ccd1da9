/* Round schedule shared by the LUT mapper and the graph mapper. */

#pragma once

#include <vector>

#include "mch/mapper.hpp"

namespace mch::detail
{

enum class round_kind
{
  delay,
  area_flow,
  exact_area
};

struct round_spec
{
  round_kind kind;
  /* whether required times derived from the first-round delay apply */
  bool constrained;
};

/* rounds after the first (delay) round */
std::vector<round_spec> recovery_schedule( map_params const& ps );

} // namespace mch::detail
