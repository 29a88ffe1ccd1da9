/*!
  \file mapper.hpp
  \brief Choice-aware cut-based technology mapping to K-LUTs and standard cells

  Cut sets are enumerated over the whole choice network. The cut set of a
  representative is the union of its own cuts and those of its choices
  (with the phase folded into the cut function), so every node above a
  class sees cuts that mix the structures of all class members. Mapping is
  a dynamic program over these cut sets: a delay-optimal round followed by
  area-flow and exact-area recovery rounds under required times.
*/

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mch/choices.hpp"
#include "mch/cuts.hpp"
#include "mch/network.hpp"
#include "mch/truth_table.hpp"

namespace mch
{

struct cell
{
  std::string name;
  double area{ 0.0 };
  truth_table function;
  std::vector<double> pin_delays;

  uint32_t num_inputs() const { return function.num_vars(); }
};

/*! \brief Combinational cell library.
 *
 * Text format, one cell per line, `#` starts a comment:
 *
 *     cell <name> <area> <hex-tt> <num-inputs> <pin-delay>...
 *
 * Every non-constant cell must depend on all of its inputs; at most six
 * inputs are supported.
 */
class cell_library
{
public:
  cell_library() = default;
  explicit cell_library( std::vector<cell> cells );

  static cell_library parse( std::istream& is );
  static cell_library parse( std::string_view text );
  /*! \brief Small generic library with inverter, NAND/NOR/AND/OR, XOR/XNOR, AOI/OAI, MUX and MAJ cells. */
  static cell_library generic();

  std::vector<cell> const& cells() const { return cells_; }
  /*! \brief Cheapest inverter; throws `library_incomplete` if the library has none. */
  uint32_t inverter() const;
  uint32_t max_inputs() const;

  std::string to_text() const;

private:
  std::vector<cell> cells_;
};

enum class map_mode : uint8_t
{
  delay,
  area,
  balanced
};

std::string_view to_string( map_mode m );
map_mode parse_map_mode( std::string_view text );

struct map_params
{
  /*! \brief Cut size k (at most 6). */
  uint32_t cut_size{ 6 };
  /*! \brief Cut limit l per node after merging the class members' cuts. */
  uint32_t cut_limit{ 8 };
  map_mode mode{ map_mode::balanced };
  /*! \brief Rounds including the delay round (BALANCED always runs 1 + 2 area-flow + 1 exact-area). */
  uint32_t rounds{ 4 };
};

/*! \brief Gate of a mapped netlist: a LUT or a library cell.
 *
 * `root` and `phase` name the node value it produces (complemented if
 * `phase` is set). Inputs are (node, phase) values produced by earlier
 * gates or PIs in positive phase. `function` is over the inputs in order.
 */
struct mapped_gate
{
  uint32_t root{ 0 };
  bool phase{ false };
  std::vector<std::pair<uint32_t, bool>> inputs;
  truth_table function;
  /*! \brief Library cell index, or -1 for a LUT. */
  int32_t cell{ -1 };
  double area{ 1.0 };
  std::vector<double> pin_delays;
};

struct mapped_netlist
{
  bool luts{ true };
  /*! \brief Node index of every PI in the source arena, in PI order. */
  std::vector<uint32_t> pis;
  /*! \brief Gates in topological order. */
  std::vector<mapped_gate> gates;
  /*! \brief Output values; LUT netlists may complement a produced value at an output. */
  std::vector<std::pair<uint32_t, bool>> outputs;

  /*! \brief LUT count or summed cell area. */
  double area{ 0.0 };
  /*! \brief LUT levels or maximum output arrival. */
  double delay{ 0.0 };
  uint32_t edges{ 0 };
  /*! \brief Area after each round (rejected rounds repeat the previous value). */
  std::vector<double> round_area;
  std::vector<double> round_delay;

  uint32_t num_gates() const { return static_cast<uint32_t>( gates.size() ); }
  /*! \brief Recomputes area, delay and edges from the gates. */
  void compute_stats();
  /*! \brief Legality violations (empty for a legal cover). */
  std::vector<std::string> legality_violations() const;
  /*! \brief AIG implementing the netlist (each gate synthesized from its function). */
  logic_network to_network() const;
};

/*! \brief Dominance-filtered union of a gate's own cuts and its class members' cuts (phase folded).
 *
 * `cuts` must hold the final sets of the gate's fanins and class members.
 * The result is not truncated and has no trivial cut.
 */
std::vector<cut> merged_node_cuts( choice_network const& cn, uint32_t n, network_cuts const& cuts, uint32_t cut_size );

/*! \brief Cut sets over the whole choice network with class members' cuts merged into their representative.
 *
 * Sets are truncated structurally (`cut_less`) to `cut_limit` cuts plus the trivial cut.
 */
network_cuts propagate_choice_cuts( choice_network const& cn, cut_enumeration_params const& ps );

/*! \brief Like `propagate_choice_cuts`, but truncation keeps the cheapest cuts under unit delay and area flow.
 *
 * The kept cuts alternate between the best by (arrival, area flow) and the
 * best by (area flow, arrival). Cuts rejected by `usable` (when given) are
 * dropped before ranking. These are the sets both mappers work on.
 */
network_cuts cost_ranked_choice_cuts( choice_network const& cn, cut_enumeration_params const& ps,
                                      std::function<bool( cut const& )> const& usable = {} );

mapped_netlist map_lut( choice_network const& cn, map_params const& ps = {} );
mapped_netlist map_lut( logic_network const& net, map_params const& ps = {} );

/*! \brief Standard-cell mapping; throws `library_incomplete` if a needed function has no match. */
mapped_netlist map_cells( choice_network const& cn, cell_library const& lib, map_params const& ps = {} );
mapped_netlist map_cells( logic_network const& net, cell_library const& lib, map_params const& ps = {} );

/*! \brief Legal cover whose network is not shown different from `src` by `cec`. */
bool cover_check( mapped_netlist const& m, logic_network const& src );

} // namespace mch
