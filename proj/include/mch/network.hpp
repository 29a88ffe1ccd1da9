/*!
  \file network.hpp
  \brief Homogeneous multi-primitive logic network with structural hashing

  One node universe {CONST0, PI, AND2, XOR2, MAJ3} hosts the AIG, XAG, MIG
  and XMG representations; the representation tag restricts which gate
  kinds a network may contain.
*/

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mch
{

enum class gate_kind : uint8_t
{
  const0,
  pi,
  and2,
  xor2,
  maj3
};

enum class repr_tag : uint8_t
{
  aig,
  xag,
  mig,
  xmg
};

std::string_view to_string( gate_kind kind );
std::string_view to_string( repr_tag tag );

/*! \brief Parses `aig`, `xag`, `mig` or `xmg` (case-insensitive). Throws on anything else. */
repr_tag parse_repr( std::string_view name );

uint32_t arity( gate_kind kind );

/*! \brief Whether networks tagged `tag` may contain gates of `kind`. */
bool permits( repr_tag tag, gate_kind kind );

/*! \brief Whether every gate kind of `from` is permitted in `to`. */
bool embeds_into( repr_tag from, repr_tag to );

/*! \brief Smallest representation permitting the gate kinds of both arguments. */
repr_tag join( repr_tag a, repr_tag b );

/*! \brief Edge into a node, possibly complemented.
 *
 * Packed as `2 * node + complemented`, which is also the AIGER literal of
 * the edge.
 */
class signal
{
public:
  constexpr signal() = default;
  constexpr signal( uint32_t node, bool complemented ) : data_( ( node << 1 ) | ( complemented ? 1u : 0u ) ) {}

  static constexpr signal from_literal( uint32_t literal )
  {
    signal s;
    s.data_ = literal;
    return s;
  }

  constexpr uint32_t index() const { return data_ >> 1; }
  constexpr bool complemented() const { return ( data_ & 1u ) != 0; }
  constexpr uint32_t literal() const { return data_; }

  constexpr signal operator!() const { return from_literal( data_ ^ 1u ); }
  constexpr signal operator^( bool c ) const { return from_literal( data_ ^ ( c ? 1u : 0u ) ); }
  constexpr signal regular() const { return from_literal( data_ & ~1u ); }

  constexpr auto operator<=>( signal const& ) const = default;

private:
  uint32_t data_{ 0 };
};

struct node_record
{
  gate_kind kind{ gate_kind::const0 };
  uint8_t num_fanins{ 0 };
  std::array<signal, 3> fanins{};

  std::span<const signal> fanin_span() const { return { fanins.data(), num_fanins }; }
};

/*! \brief Logic network over {CONST0, PI, AND2, XOR2, MAJ3} with complemented edges.
 *
 * Node 0 is the constant-0 node. Nodes are appended in topological order, so
 * every fanin index is smaller than the node index. Gates are structurally
 * hashed on creation. Nodes that become unreachable stay in the arena;
 * `cleanup` produces a compacted copy.
 */
class logic_network
{
public:
  explicit logic_network( repr_tag tag = repr_tag::aig );

  repr_tag tag() const { return tag_; }

  /*! \brief Retags the network. Throws `unsupported_conversion` if a live gate is not permitted. */
  void retag( repr_tag tag );

  signal get_constant( bool value ) const { return signal( 0, value ); }

  signal create_pi();
  uint32_t create_po( signal s );
  void set_po( uint32_t index, signal s );

  /*! \brief Adds a gate after constant propagation and canonical ordering.
   *
   * Returns the existing signal when an identical gate is already present.
   * Throws `std::invalid_argument` on arity mismatch, dangling fanins, or a
   * kind the representation does not permit.
   */
  signal strash_add( gate_kind kind, std::span<const signal> fanins );

  /*! \brief Like `strash_add`, but never creates a node. */
  std::optional<signal> strash_find( gate_kind kind, std::span<const signal> fanins ) const;

  signal create_and( signal a, signal b );
  signal create_nand( signal a, signal b ) { return !create_and( a, b ); }
  signal create_or( signal a, signal b ) { return !create_and( !a, !b ); }
  signal create_nor( signal a, signal b ) { return create_and( !a, !b ); }

  /* XOR and MAJ fall back to AND decompositions when the tag does not permit them. */
  signal create_xor( signal a, signal b );
  signal create_xnor( signal a, signal b ) { return !create_xor( a, b ); }
  signal create_maj( signal a, signal b, signal c );
  signal create_ite( signal cond, signal then_s, signal else_s );

  uint32_t size() const { return static_cast<uint32_t>( nodes_.size() ); }
  uint32_t num_pis() const { return static_cast<uint32_t>( pis_.size() ); }
  uint32_t num_pos() const { return static_cast<uint32_t>( outputs_.size() ); }
  /*! \brief Number of gate nodes in the arena (including dead ones). */
  uint32_t num_gates() const { return size() - 1u - num_pis(); }

  gate_kind kind( uint32_t n ) const { return nodes_[n].kind; }
  node_record const& node( uint32_t n ) const { return nodes_[n]; }
  std::span<const signal> fanins( uint32_t n ) const { return nodes_[n].fanin_span(); }

  bool is_constant( uint32_t n ) const { return nodes_[n].kind == gate_kind::const0; }
  bool is_pi( uint32_t n ) const { return nodes_[n].kind == gate_kind::pi; }
  bool is_gate( uint32_t n ) const { return nodes_[n].kind > gate_kind::pi; }

  std::span<const uint32_t> pis() const { return pis_; }
  uint32_t pi_at( uint32_t i ) const { return pis_[i]; }
  /*! \brief Position of a PI node among the inputs. */
  uint32_t pi_index( uint32_t n ) const { return pi_position_[n]; }
  std::span<const signal> outputs() const { return outputs_; }
  signal po_at( uint32_t i ) const { return outputs_[i]; }

  template<typename Fn>
  void foreach_gate( Fn&& fn ) const
  {
    for ( uint32_t n = 1; n < nodes_.size(); ++n )
    {
      if ( is_gate( n ) )
        fn( n );
    }
  }

private:
  struct key
  {
    gate_kind kind;
    std::array<uint32_t, 3> literals;
    bool operator==( key const& ) const = default;
  };
  struct key_hash
  {
    std::size_t operator()( key const& k ) const noexcept;
  };

  struct normalized
  {
    bool trivial{ false };
    signal result{};
    gate_kind kind{};
    std::array<signal, 3> fanins{};
    bool complement_output{ false };
  };

  normalized normalize( gate_kind kind, std::span<const signal> fanins ) const;
  signal insert( normalized const& norm );

  repr_tag tag_;
  std::vector<node_record> nodes_;
  std::vector<uint32_t> pis_;
  std::vector<uint32_t> pi_position_;
  std::vector<signal> outputs_;
  std::unordered_map<key, uint32_t, key_hash> strash_;
};

/*! \brief Node-for-node copy of `net` retagged as `target`.
 *
 * Throws `unsupported_conversion` when a gate of `net` is not permitted in
 * `target` (for instance a MIG with majority gates into an AIG).
 */
logic_network one_to_one_map( logic_network const& net, repr_tag target );

/*! \brief Copy containing only nodes reachable from the outputs (all PIs kept). */
logic_network cleanup( logic_network const& net );

/*! \brief Copies the cone of `roots` from `src` into `dst`, replacing source PI i by `pi_map[i]`. */
std::vector<signal> copy_cone( logic_network const& src, std::span<const signal> roots, logic_network& dst,
                               std::span<const signal> pi_map );

/*! \brief Appends a copy of `src` into `dst` (PIs mapped by `pi_map`); returns the output signals. */
std::vector<signal> append_network( logic_network const& src, logic_network& dst, std::span<const signal> pi_map );

} // namespace mch

template<>
struct std::hash<mch::signal>
{
  std::size_t operator()( mch::signal s ) const noexcept { return std::hash<uint32_t>{}( s.literal() ); }
};
