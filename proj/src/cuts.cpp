#include "mch/cuts.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mch/errors.hpp"

namespace mch
{

bool cut::dominates( cut const& other ) const
{
  if ( size > other.size || ( signature & other.signature ) != signature )
    return false;
  return std::includes( other.leaves.begin(), other.leaves.begin() + other.size, leaves.begin(),
                        leaves.begin() + size );
}

bool cut::same_leaves( cut const& other ) const
{
  return size == other.size && std::equal( leaves.begin(), leaves.begin() + size, other.leaves.begin() );
}

cut trivial_cut( uint32_t node )
{
  cut c;
  if ( node == 0u )
  {
    c.function = truth_table::constant( 0, false );
    return c;
  }
  c.leaves[0] = node;
  c.size = 1;
  c.signature = leaf_signature( node );
  c.function = truth_table::nth_var( 1, 0 );
  return c;
}

bool cut_less( cut const& a, cut const& b )
{
  if ( a.size != b.size )
    return a.size < b.size;
  if ( a.signature != b.signature )
    return a.signature < b.signature;
  return std::lexicographical_compare( a.leaves.begin(), a.leaves.begin() + a.size, b.leaves.begin(),
                                       b.leaves.begin() + b.size );
}

bool merge_leaves( cut const& a, cut const& b, uint32_t k, cut& out )
{
  if ( static_cast<uint32_t>( std::popcount( a.signature | b.signature ) ) > k )
    return false;
  uint32_t i = 0, j = 0, n = 0;
  while ( i < a.size || j < b.size )
  {
    uint32_t next;
    if ( j == b.size || ( i < a.size && a.leaves[i] < b.leaves[j] ) )
      next = a.leaves[i++];
    else if ( i == a.size || b.leaves[j] < a.leaves[i] )
      next = b.leaves[j++];
    else
    {
      next = a.leaves[i++];
      ++j;
    }
    if ( n == k )
      return false;
    out.leaves[n++] = next;
  }
  out.size = static_cast<uint8_t>( n );
  out.signature = a.signature | b.signature;
  return true;
}

namespace
{

uint64_t function_over( cut const& merged, cut const& sub )
{
  std::array<uint8_t, 6> pos{};
  uint32_t p = 0;
  for ( uint32_t i = 0; i < sub.size; ++i )
  {
    while ( merged.leaves[p] != sub.leaves[i] )
      ++p;
    pos[i] = static_cast<uint8_t>( p );
  }
  return expand_word( sub.function.word(), sub.size, pos.data() );
}

} // namespace

truth_table compose_function( logic_network const& net, uint32_t gate, cut const& merged,
                              std::span<cut const* const> fanin_cuts )
{
  auto const fanins = net.fanins( gate );
  std::array<uint64_t, 3> in{};
  for ( std::size_t i = 0; i < fanins.size(); ++i )
  {
    in[i] = function_over( merged, *fanin_cuts[i] );
    if ( fanins[i].complemented() )
      in[i] = ~in[i];
  }
  uint64_t w = 0;
  switch ( net.kind( gate ) )
  {
  case gate_kind::and2:
    w = in[0] & in[1];
    break;
  case gate_kind::xor2:
    w = in[0] ^ in[1];
    break;
  case gate_kind::maj3:
    w = ( in[0] & in[1] ) | ( in[0] & in[2] ) | ( in[1] & in[2] );
    break;
  default:
    throw std::invalid_argument( "compose_function: node is not a gate" );
  }
  return truth_table( merged.size, w );
}

void insert_cut( std::vector<cut>& set, cut const& c )
{
  for ( auto const& e : set )
  {
    if ( e.dominates( c ) )
      return;
  }
  std::erase_if( set, [&]( cut const& e ) { return c.dominates( e ); } );
  set.push_back( c );
}

void finalize_cut_set( std::vector<cut>& set, uint32_t node, uint32_t limit )
{
  std::erase_if( set, [node]( cut const& c ) { return c.size == 1u && c.leaves[0] == node; } );
  std::sort( set.begin(), set.end(), cut_less );
  if ( set.size() > limit )
    set.resize( limit );
  set.push_back( trivial_cut( node ) );
}

std::vector<cut> merge_fanin_cuts( logic_network const& net, uint32_t gate,
                                   std::span<std::vector<cut> const* const> fanin_sets,
                                   cut_enumeration_params const& ps )
{
  std::vector<cut> result;
  cut merged;
  std::array<cut const*, 3> chosen{};
  if ( fanin_sets.size() == 2u )
  {
    for ( auto const& a : *fanin_sets[0] )
    {
      for ( auto const& b : *fanin_sets[1] )
      {
        if ( !merge_leaves( a, b, ps.cut_size, merged ) )
          continue;
        chosen = { &a, &b, nullptr };
        merged.function = compose_function( net, gate, merged, std::span<cut const* const>( chosen.data(), 2 ) );
        insert_cut( result, merged );
      }
    }
  }
  else
  {
    cut ab;
    for ( auto const& a : *fanin_sets[0] )
    {
      for ( auto const& b : *fanin_sets[1] )
      {
        if ( !merge_leaves( a, b, ps.cut_size, ab ) )
          continue;
        for ( auto const& c : *fanin_sets[2] )
        {
          if ( !merge_leaves( ab, c, ps.cut_size, merged ) )
            continue;
          chosen = { &a, &b, &c };
          merged.function = compose_function( net, gate, merged, chosen );
          insert_cut( result, merged );
        }
      }
    }
  }
  finalize_cut_set( result, gate, ps.cut_limit );
  return result;
}

network_cuts enumerate_cuts( logic_network const& net, cut_enumeration_params const& ps )
{
  if ( ps.cut_size < 2u || ps.cut_size > 6u )
    throw std::invalid_argument( "cut size must lie in [2, 6]" );
  if ( ps.cut_limit < 1u )
    throw std::invalid_argument( "cut limit must be at least 1" );
  network_cuts cuts( net.size() );
  cuts[0].push_back( trivial_cut( 0 ) );
  for ( uint32_t n = 1; n < net.size(); ++n )
  {
    if ( !net.is_gate( n ) )
    {
      cuts[n].push_back( trivial_cut( n ) );
      continue;
    }
    auto const fanins = net.fanins( n );
    std::array<std::vector<cut> const*, 3> sets{};
    for ( std::size_t i = 0; i < fanins.size(); ++i )
      sets[i] = &cuts[fanins[i].index()];
    cuts[n] = merge_fanin_cuts( net, n, std::span<std::vector<cut> const* const>( sets.data(), fanins.size() ), ps );
  }
  return cuts;
}

namespace
{

/* cone of `root` above `leaves` in topological order; false if a PI outside the leaves is reached */
bool collect_cone( logic_network const& net, uint32_t root, std::span<const uint32_t> leaves,
                   std::vector<uint32_t>& cone )
{
  std::vector<uint32_t> stack{ root };
  std::unordered_set<uint32_t> seen;
  bool ok = true;
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    if ( !seen.insert( n ).second )
      continue;
    if ( n == 0u || std::find( leaves.begin(), leaves.end(), n ) != leaves.end() )
      continue;
    if ( !net.is_gate( n ) )
    {
      ok = false;
      continue;
    }
    cone.push_back( n );
    for ( auto f : net.fanins( n ) )
      stack.push_back( f.index() );
  }
  std::sort( cone.begin(), cone.end() );
  return ok;
}

} // namespace

bool is_cut( logic_network const& net, uint32_t root, std::span<const uint32_t> leaves )
{
  std::vector<uint32_t> cone;
  return collect_cone( net, root, leaves, cone );
}

truth_table cut_truth( logic_network const& net, uint32_t root, std::span<const uint32_t> leaves )
{
  if ( leaves.size() > 6u )
    throw invalid_cut( "cut_truth: more than six leaves" );
  if ( !std::is_sorted( leaves.begin(), leaves.end() ) ||
       std::adjacent_find( leaves.begin(), leaves.end() ) != leaves.end() )
    throw invalid_cut( "cut_truth: leaves must be strictly ascending" );
  std::vector<uint32_t> cone;
  if ( !collect_cone( net, root, leaves, cone ) )
    throw invalid_cut( "cut_truth: leaves do not form a cut of the root" );

  auto const v = static_cast<uint32_t>( leaves.size() );
  std::unordered_map<uint32_t, uint64_t> value;
  value[0] = 0u;
  for ( uint32_t i = 0; i < v; ++i )
    value[leaves[i]] = tt_detail::projections[i];
  for ( auto n : cone )
  {
    auto const f = net.fanins( n );
    auto in = [&]( std::size_t i ) {
      auto const w = value.at( f[i].index() );
      return f[i].complemented() ? ~w : w;
    };
    uint64_t w = 0;
    switch ( net.kind( n ) )
    {
    case gate_kind::and2:
      w = in( 0 ) & in( 1 );
      break;
    case gate_kind::xor2:
      w = in( 0 ) ^ in( 1 );
      break;
    case gate_kind::maj3:
      w = ( in( 0 ) & in( 1 ) ) | ( in( 0 ) & in( 2 ) ) | ( in( 1 ) & in( 2 ) );
      break;
    default:
      break;
    }
    value[n] = w;
  }
  return truth_table( v, value.at( root ) );
}

} // namespace mch
