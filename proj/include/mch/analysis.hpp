/*!
  \file analysis.hpp
  \brief Levels, reference counts, MFFCs and critical-path collection
*/

#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "mch/network.hpp"

namespace mch
{

/*! \brief Set of node indices with deterministic (ascending) iteration. */
using node_set = std::set<uint32_t>;

struct level_map
{
  /*! \brief Unit-delay level per node; 0 for PIs and the constant. */
  std::vector<uint32_t> level;
  /*! \brief Maximum level over output drivers. */
  uint32_t depth{ 0 };
};

level_map compute_levels( logic_network const& net );

/*! \brief Marks nodes reachable from the outputs. */
std::vector<uint8_t> live_nodes( logic_network const& net );

uint32_t count_live_gates( logic_network const& net );

/*! \brief Fanout references from live gates and outputs. */
std::vector<uint32_t> reference_counts( logic_network const& net );

/*! \brief Transitive fanin of `root` (including `root`). */
node_set transitive_fanin( logic_network const& net, uint32_t root );

struct mffc_result
{
  /*! \brief Cone members; always contains the root. */
  node_set nodes;
  /*! \brief Sorted support of the cone. */
  std::vector<uint32_t> leaves;
  /*! \brief Root was a PI or the constant. */
  bool degenerate{ false };
};

/*! \brief Maximum fanout-free cone of `root` whose support has at most `max_leaves` nodes.
 *
 * The cone grows from the root by absorbing support nodes whose fanouts all
 * lie inside the cone, as long as the support stays within `max_leaves`.
 * Without the bound this yields the full MFFC.
 */
mffc_result mffc( logic_network const& net, uint32_t root, uint32_t max_leaves );

/*! \brief Same as above with precomputed `reference_counts`. */
mffc_result mffc( logic_network const& net, std::vector<uint32_t> const& refs, uint32_t root, uint32_t max_leaves );

/*! \brief Gates in the transitive fanin of every output whose driver level is at least ceil(ratio * depth). */
node_set critical_path_collection( logic_network const& net, double ratio );

} // namespace mch
