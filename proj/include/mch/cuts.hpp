/*!
  \file cuts.hpp
  \brief Priority cut enumeration with signatures and cut functions
*/

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mch/network.hpp"
#include "mch/truth_table.hpp"

namespace mch
{

/*! \brief Leaf set of at most six nodes with its signature and the root function over the leaves. */
struct cut
{
  std::array<uint32_t, 6> leaves{};
  uint8_t size{ 0 };
  uint64_t signature{ 0 };
  truth_table function;

  std::span<const uint32_t> leaf_span() const { return { leaves.data(), size }; }
  /*! \brief Whether this cut's leaves are a subset of `other`'s. */
  bool dominates( cut const& other ) const;
  bool same_leaves( cut const& other ) const;
};

inline uint64_t leaf_signature( uint32_t node ) { return 1ull << ( node % 64u ); }

cut trivial_cut( uint32_t node );

/*! \brief Structural priority: fewer leaves, then lower signature, then leaf order. */
bool cut_less( cut const& a, cut const& b );

struct cut_enumeration_params
{
  /*! \brief Maximum number of leaves (2 to 6). */
  uint32_t cut_size{ 4 };
  /*! \brief Non-trivial cuts kept per node. */
  uint32_t cut_limit{ 8 };
};

inline constexpr uint32_t unlimited_cuts = std::numeric_limits<uint32_t>::max();

/*! \brief Cut sets of all nodes; the trivial cut is the last entry of every set. */
using network_cuts = std::vector<std::vector<cut>>;

/*! \brief Merges two sorted leaf sets; false if the union exceeds `k`. */
bool merge_leaves( cut const& a, cut const& b, uint32_t k, cut& out );

/*! \brief Function of `gate` over `leaves` given one cut per fanin whose leaves are subsets of `leaves`. */
truth_table compose_function( logic_network const& net, uint32_t gate, cut const& merged,
                              std::span<cut const* const> fanin_cuts );

/*! \brief Inserts `c` unless a stored cut dominates it; drops stored cuts it dominates. */
void insert_cut( std::vector<cut>& set, cut const& c );

/*! \brief Sorts by `cut_less`, keeps `limit` cuts and appends the trivial cut of `node`. */
void finalize_cut_set( std::vector<cut>& set, uint32_t node, uint32_t limit );

/*! \brief Cut set of a gate from the cut sets of its fanins (trivial cut included). */
std::vector<cut> merge_fanin_cuts( logic_network const& net, uint32_t gate,
                                   std::span<std::vector<cut> const* const> fanin_sets,
                                   cut_enumeration_params const& ps );

network_cuts enumerate_cuts( logic_network const& net, cut_enumeration_params const& ps = {} );

/*! \brief Whether every path from a PI or the constant to `root` passes through a leaf. */
bool is_cut( logic_network const& net, uint32_t root, std::span<const uint32_t> leaves );

/*! \brief Function of `root` over the sorted `leaves`. Throws `invalid_cut` if they are not a cut. */
truth_table cut_truth( logic_network const& net, uint32_t root, std::span<const uint32_t> leaves );

} // namespace mch
