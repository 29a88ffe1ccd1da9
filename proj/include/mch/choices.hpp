/*!
  \file choices.hpp
  \brief Choice networks and mixed structural choice construction

  A choice network keeps the original network intact and adds alternative
  structures for some of its nodes. Every original node heading a class is
  its representative; the alternatives (choice nodes) are linked behind it,
  each with a phase bit stating whether it computes the representative's
  function or its complement.
*/

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mch/analysis.hpp"
#include "mch/cuts.hpp"
#include "mch/network.hpp"
#include "mch/strategies.hpp"

namespace mch
{

enum class choice_status : uint8_t
{
  added,
  not_representative,
  already_classified,
  invalid_member,
  class_full,
  cycle
};

std::string_view to_string( choice_status s );

class choice_network
{
public:
  static constexpr uint32_t none = UINT32_MAX;

  choice_network() = default;
  explicit choice_network( logic_network base );

  /*! \brief Arena holding the base network followed by the choice structures. */
  logic_network const& network() const { return net_; }
  logic_network& network() { return net_; }

  /*! \brief Nodes below this index form the base network. */
  uint32_t base_size() const { return base_size_; }
  void set_base_size( uint32_t n ) { base_size_ = n; }

  uint32_t repr( uint32_t n ) const { return n < repr_.size() ? repr_[n] : n; }
  bool phase( uint32_t n ) const { return n < phase_.size() && phase_[n]; }
  uint32_t next( uint32_t n ) const { return n < next_.size() ? next_[n] : none; }
  bool is_representative( uint32_t n ) const { return repr( n ) == n; }
  bool has_choices( uint32_t n ) const { return is_representative( n ) && next( n ) != none; }
  bool in_class( uint32_t n ) const { return !is_representative( n ) || has_choices( n ); }

  /*! \brief Representative followed by its choices. */
  std::vector<uint32_t> class_members( uint32_t rep ) const;
  std::vector<uint32_t> representatives_with_choices() const;
  uint32_t num_classes() const;
  uint32_t num_choices() const;

  /*! \brief Whether `rep` is reachable from `node` through fanins and representative-to-choice edges. */
  bool reaches( uint32_t node, uint32_t rep ) const;

  /*! \brief Appends `choice.index()` to the class of `rep`; `choice` must compute the function of `rep`.
   *
   * Refused when `rep` is not a representative gate, the node is already
   * classified, is a PI or constant, belongs to the base, would exceed
   * `max_class_size` members, or would close a cycle.
   */
  choice_status add_choice( uint32_t rep, signal choice, uint32_t max_class_size = 8 );

  /*! \brief Drops a choice node from its class. */
  void remove_choice( uint32_t node );

  /*! \brief Removes choices that close a cycle through representative-to-choice edges; returns how many. */
  uint32_t remove_cyclic_choices();

  /*! \brief Order in which every node follows its fanins and every representative follows its choices. */
  std::vector<uint32_t> topological_order() const;

  /*! \brief Network with choice `member` substituted for its representative (phase corrected). */
  logic_network substitute( uint32_t member ) const;

private:
  void ensure( uint32_t n );

  logic_network net_;
  uint32_t base_size_{ 0 };
  std::vector<uint32_t> repr_;
  std::vector<uint32_t> next_;
  std::vector<uint8_t> phase_;
};

struct mch_params
{
  /*! \brief Cut size k. */
  uint32_t cut_size{ 4 };
  /*! \brief Cut limit l. */
  uint32_t cut_limit{ 8 };
  /*! \brief Leaf bound K of the MFFC used by the area strategies. */
  uint32_t mffc_leaves{ 8 };
  /*! \brief Critical-path ratio r. */
  double critical_ratio{ 0.8 };
  /*! \brief Representation the input is embedded into; the input's own if absent. */
  std::optional<repr_tag> mix_target;
  uint32_t max_class_size{ 8 };
  uint64_t seed{ 1 };
};

struct mch_stats
{
  uint32_t critical{ 0 };
  uint32_t non_critical{ 0 };
  uint32_t generated{ 0 };
  /*! \brief Candidates whose root is an existing node or a wire. */
  uint32_t deduplicated{ 0 };
  uint32_t verified{ 0 };
  uint32_t failed{ 0 };
  uint32_t rejected_cycle{ 0 };
  uint32_t rejected_full{ 0 };
  uint32_t skipped_mffc{ 0 };
  uint32_t classes{ 0 };
  uint32_t choices{ 0 };
  /*! \brief Class size (members including the representative) to number of classes. */
  std::map<uint32_t, uint32_t> class_sizes;
  double seconds{ 0.0 };

  std::string report() const;
};

struct choice_pair
{
  uint32_t repr;
  signal choice;
  strategy_kind source;
};

/*! \brief Candidate structures and the pairs to mark, all living in `scratch`. */
struct choice_info
{
  logic_network scratch;
  uint32_t base_size{ 0 };
  std::vector<choice_pair> pairs;
};

/*! \brief Candidate generation and marking over the embedded network. */
choice_info multi_strategy_choices( logic_network const& net, node_set const& critical, network_cuts const& cuts,
                                    uint32_t mffc_leaves, strategy_library const& lib, mch_stats* stats = nullptr );

/*! \brief Marks verified pairs into a choice network. */
choice_network assemble_choices( choice_info info, mch_params const& ps, mch_stats* stats = nullptr );

/*! \brief Embeds, collects critical nodes, enumerates cuts, generates candidates and assembles the choice network. */
choice_network build_mch( logic_network const& net, strategy_library const& lib, mch_params const& ps = {},
                          mch_stats* stats = nullptr );

/*! \brief Adds the structure of an equivalent network and joins the output drivers into classes.
 *
 * Throws `interface_error` for PI/PO count mismatches and
 * `equivalence_error` if the networks differ.
 */
choice_network add_external_choices( choice_network cn, logic_network const& other, uint32_t max_class_size = 8 );

/*! \brief Checks every class member against its representative and removes failures.
 *
 * Exhaustive up to 12 inputs, otherwise 10,048 random patterns. Returns the
 * number of removed members.
 */
uint32_t check_choices( choice_network& cn, uint64_t seed = 1 );

/*! \brief Violations of the structural class invariants (empty when consistent). */
std::vector<std::string> choice_invariant_violations( choice_network const& cn );

} // namespace mch
