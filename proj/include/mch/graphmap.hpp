/*!
  \file graphmap.hpp
  \brief Graph mapping of choice networks onto a target representation

  Graph mapping is technology mapping whose "cells" are small structures
  over the primitives of a logic representation. Each selected cut is
  rebuilt from the best NPN4 template of its class in the target
  representation, so the result is again a logic network. Iterating
  embed, choice construction and graph mapping lets the structures of
  several representations meet in one network.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mch/choices.hpp"
#include "mch/mapper.hpp"
#include "mch/network.hpp"
#include "mch/strategies.hpp"

namespace mch
{

/*! \brief Templates over the primitives of `target`. */
struct graph_target_library
{
  repr_tag target{ repr_tag::aig };
  npn4_database const* db{ nullptr };

  /*! \brief Library over the shared NPN4 database. */
  static graph_target_library standard( repr_tag target );

  /*! \brief Whether every two-input function has a template in the target representation. */
  bool function_complete() const;
};

/*! \brief Cut cover of the choice network rebuilt from target templates.
 *
 * Uses `ps.cut_size` capped at 4 (the template classes have four inputs) and
 * at least 3. The mode selects the templates and the round schedule as in
 * `map_lut`: DELAY ranks by depth, AREA by size. The result is tagged
 * `tl.target`, has no dangling nodes and is equivalent to the base network.
 * Throws `std::invalid_argument` if the library is not function-complete.
 */
logic_network graph_map( choice_network const& cn, graph_target_library const& tl, map_params const& ps = {} );

struct optimize_params
{
  map_params map{ 4, 8, map_mode::area, 4 };
  uint32_t max_iters{ 10 };
  /*! \brief Build choices before each mapping; otherwise the working network is mapped directly. */
  bool use_choices{ true };
  /*! \brief Choice construction; `mix_target` is replaced by the iteration's arena tag. */
  mch_params mch{};
};

enum class loop_termination : uint8_t
{
  fixpoint,
  max_iters
};

struct opt_iteration
{
  uint32_t nodes{ 0 };
  uint32_t level{ 0 };
  bool accepted{ false };
};

struct opt_loop_report
{
  uint32_t initial_nodes{ 0 };
  uint32_t initial_level{ 0 };
  /*! \brief Metrics of every candidate, in iteration order. */
  std::vector<opt_iteration> iterations;
  loop_termination reason{ loop_termination::fixpoint };

  /*! \brief CSV with header `iteration,nodes,level,accepted`; row 0 is the input. */
  std::string to_csv() const;
};

struct optimize_result
{
  logic_network network;
  opt_loop_report report;
};

/*! \brief Representation mixed in by default when optimizing towards `target` (MIG for XMG, XMG otherwise). */
repr_tag default_mix( repr_tag target );

/*! \brief Iterates embed, `build_mch` and `graph_map` while the result improves.
 *
 * Each iteration embeds the working network into join(target, mix), builds
 * choices with level-oriented templates of both representations and graph
 * maps the choice network onto `target`. A candidate is accepted when it
 * improves (nodes, level) lexicographically, or (level, nodes) in DELAY
 * mode. The first candidate is always accepted if the input uses gates the
 * target does not permit. The loop stops at the first rejected candidate
 * or after `max_iters` iterations.
 */
optimize_result optimize_iterate( logic_network const& net, repr_tag target, repr_tag mix,
                                  optimize_params const& ps = {} );

} // namespace mch
