/*!
  \file strategies.hpp
  \brief Synthesis strategies producing candidate structures for cut functions

  Level-oriented candidates come from a database of small structures for
  the 222 NPN classes of four-input functions. Area-oriented candidates are
  synthesized procedurally from an ISOP cover (algebraically factored) and
  from a disjoint-support decomposition.
*/

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mch/network.hpp"
#include "mch/truth_table.hpp"

namespace mch
{

/*! \brief Gate of a template. Literals are `2 * index + complemented`, where
 * index 0 is the constant, 1 to 4 are the inputs t0 to t3 and 5 + i is gate i. */
struct template_gate
{
  gate_kind kind{ gate_kind::and2 };
  std::array<uint8_t, 3> fanins{};
};

struct structure_template
{
  repr_tag repr{ repr_tag::aig };
  std::vector<template_gate> gates;
  uint8_t output{ 0 };
  uint32_t size{ 0 };
  uint32_t depth{ 0 };

  /*! \brief Function over t0..t3. */
  truth_table evaluate() const;
  /*! \brief Instantiates into `net` with inputs driven by `inputs[0..3]`. */
  signal instantiate( logic_network& net, std::span<const signal> inputs ) const;

  std::string to_string() const;
  static structure_template parse( std::string_view gates, repr_tag repr );
};

struct npn4_build_params
{
  /*! \brief Gate bound for the enumeration. */
  uint32_t max_size{ 7 };
  /*! \brief Bound on the summed child sizes under a majority gate. */
  uint32_t max_majority_children{ 4 };
};

struct npn4_build_stats
{
  /*! \brief Classes for which the enumeration over the representation itself found nothing within the bound. */
  std::map<repr_tag, uint32_t> filled_by_synthesis;
  double seconds{ 0.0 };
};

/*! \brief Pareto-optimal (depth, size) templates for every four-input NPN class and representation. */
class npn4_database
{
public:
  static npn4_database build( std::span<const repr_tag> reprs, npn4_build_params const& ps = {},
                              npn4_build_stats* stats = nullptr );

  /*! \brief Process-wide database for all four representations, built on first use. */
  static npn4_database const& shared();

  /*! \brief Templates of class `canon` (a canonical table) sorted by (depth, size); empty when unknown. */
  std::span<const structure_template> lookup( truth_table const& canon, repr_tag repr ) const;

  std::vector<uint16_t> classes() const;
  bool has( repr_tag repr ) const;

  void save( std::ostream& os ) const;
  /*! \brief Reads the text format; every template is re-verified. Throws `parse_error`. */
  static npn4_database load( std::istream& is );

private:
  std::map<std::pair<uint16_t, repr_tag>, std::vector<structure_template>> entries_;
  std::vector<repr_tag> reprs_;
};

enum class strategy_kind : uint8_t
{
  npn4_level,
  isop_factor,
  dsd_struct
};

std::string_view to_string( strategy_kind kind );

struct strategy_library
{
  npn4_database const* db{ nullptr };
  /*! \brief Representations whose templates the level-oriented strategy may use. */
  std::vector<repr_tag> level_reprs;
  bool isop_factor{ true };
  bool dsd{ true };

  /*! \brief Library using the shared database with the given representations and both area procedures. */
  static strategy_library standard( std::vector<repr_tag> reprs );
  /*! \brief Library without any strategy. */
  static strategy_library none();

  bool empty() const { return level_reprs.empty() && !isop_factor && !dsd; }
};

struct candidate
{
  signal root;
  strategy_kind source{ strategy_kind::npn4_level };
  /*! \brief Gates above the leaves. */
  uint32_t size{ 0 };
  /*! \brief Levels above the leaves. */
  uint32_t depth{ 0 };
};

/*! \brief Candidates together with the scratch network holding them (PI i is variable i). */
struct candidate_set
{
  logic_network scratch;
  std::vector<candidate> items;
};

/*! \brief A function with at most four support variables bound to its NPN4 class.
 *
 * Instantiating any template of `canon` on `inputs` and complementing the
 * result by `output_neg` yields the function over the original leaves.
 */
struct npn4_binding
{
  truth_table canon;
  std::array<signal, 4> inputs{};
  bool output_neg{ false };
};

/*! \brief Binding of `tt` over `leaves`; empty if the support exceeds four variables. */
std::optional<npn4_binding> bind_npn4( truth_table const& tt, std::span<const signal> leaves );

/*! \brief Gate count and depth of the cone of `root` above `leaves`. */
std::pair<uint32_t, uint32_t> cone_size_depth( logic_network const& net, signal root, std::span<const signal> leaves );

/*! \brief NPN4-template candidates sorted by (depth, size); empty if the support exceeds four variables. */
std::vector<candidate> level_oriented_candidates( strategy_library const& lib, truth_table const& tt,
                                                  logic_network& scratch, std::span<const signal> leaves );

/*! \brief ISOP-factor and DSD candidates sorted by (size, depth). */
std::vector<candidate> area_oriented_candidates( strategy_library const& lib, truth_table const& tt,
                                                 logic_network& scratch, std::span<const signal> leaves );

candidate_set level_oriented_candidates( strategy_library const& lib, truth_table const& tt,
                                         repr_tag scratch_repr = repr_tag::xmg );
candidate_set area_oriented_candidates( strategy_library const& lib, truth_table const& tt,
                                        repr_tag scratch_repr = repr_tag::xmg );

/*! \brief Structure of the ISOP-factor strategy alone (cover of f or of its complement, whichever is smaller). */
signal synthesize_isop_factor( truth_table const& tt, logic_network& net, std::span<const signal> leaves );

/*! \brief Structure of the DSD strategy alone; primes with at most four inputs use `db` when given. */
signal synthesize_dsd( truth_table const& tt, logic_network& net, std::span<const signal> leaves,
                       npn4_database const* db );

} // namespace mch
