#include "mch/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mch
{

level_map compute_levels( logic_network const& net )
{
  level_map lm;
  lm.level.assign( net.size(), 0u );
  for ( uint32_t n = 1; n < net.size(); ++n )
  {
    if ( !net.is_gate( n ) )
      continue;
    uint32_t l = 0;
    for ( auto f : net.fanins( n ) )
      l = std::max( l, lm.level[f.index()] );
    lm.level[n] = l + 1u;
  }
  for ( auto po : net.outputs() )
    lm.depth = std::max( lm.depth, lm.level[po.index()] );
  return lm;
}

std::vector<uint8_t> live_nodes( logic_network const& net )
{
  std::vector<uint8_t> live( net.size(), 0u );
  for ( auto po : net.outputs() )
    live[po.index()] = 1u;
  for ( uint32_t n = net.size(); n-- > 1u; )
  {
    if ( live[n] && net.is_gate( n ) )
    {
      for ( auto f : net.fanins( n ) )
        live[f.index()] = 1u;
    }
  }
  return live;
}

uint32_t count_live_gates( logic_network const& net )
{
  auto const live = live_nodes( net );
  uint32_t count = 0;
  net.foreach_gate( [&]( uint32_t n ) { count += live[n]; } );
  return count;
}

std::vector<uint32_t> reference_counts( logic_network const& net )
{
  auto const live = live_nodes( net );
  std::vector<uint32_t> refs( net.size(), 0u );
  net.foreach_gate( [&]( uint32_t n ) {
    if ( !live[n] )
      return;
    for ( auto f : net.fanins( n ) )
      ++refs[f.index()];
  } );
  for ( auto po : net.outputs() )
    ++refs[po.index()];
  return refs;
}

node_set transitive_fanin( logic_network const& net, uint32_t root )
{
  node_set result;
  std::vector<uint32_t> stack{ root };
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    if ( !result.insert( n ).second )
      continue;
    if ( net.is_gate( n ) )
    {
      for ( auto f : net.fanins( n ) )
        stack.push_back( f.index() );
    }
  }
  return result;
}

mffc_result mffc( logic_network const& net, uint32_t root, uint32_t max_leaves )
{
  return mffc( net, reference_counts( net ), root, max_leaves );
}

mffc_result mffc( logic_network const& net, std::vector<uint32_t> const& refs, uint32_t root, uint32_t max_leaves )
{
  mffc_result res;
  res.nodes.insert( root );
  if ( !net.is_gate( root ) )
  {
    res.degenerate = true;
    return res;
  }

  /* references from inside the cone, per support node */
  std::vector<std::pair<uint32_t, uint32_t>> support; // (node, internal refs)
  auto add_ref = [&]( uint32_t n ) {
    auto it = std::find_if( support.begin(), support.end(), [n]( auto const& p ) { return p.first == n; } );
    if ( it == support.end() )
      support.emplace_back( n, 1u );
    else
      ++it->second;
  };
  for ( auto f : net.fanins( root ) )
  {
    if ( f.index() != 0u )
      add_ref( f.index() );
  }

  bool changed = true;
  while ( changed )
  {
    changed = false;
    std::sort( support.begin(), support.end(), []( auto const& a, auto const& b ) { return a.first > b.first; } );
    for ( std::size_t i = 0; i < support.size(); ++i )
    {
      auto const [n, internal] = support[i];
      if ( !net.is_gate( n ) || internal != refs[n] )
        continue;
      /* absorbing n replaces it by its fanins that are not yet in the support */
      uint32_t added = 0;
      for ( auto f : net.fanins( n ) )
      {
        auto const fi = f.index();
        if ( fi == 0u )
          continue;
        bool const present = std::any_of( support.begin(), support.end(), [fi]( auto const& p ) { return p.first == fi; } );
        if ( !present )
          ++added;
      }
      /* duplicate fanins cannot occur after hashing, so the count is exact */
      if ( support.size() - 1u + added > max_leaves )
        continue;
      support.erase( support.begin() + static_cast<std::ptrdiff_t>( i ) );
      res.nodes.insert( n );
      for ( auto f : net.fanins( n ) )
      {
        if ( f.index() != 0u )
          add_ref( f.index() );
      }
      changed = true;
      break;
    }
  }

  for ( auto const& p : support )
    res.leaves.push_back( p.first );
  std::sort( res.leaves.begin(), res.leaves.end() );
  return res;
}

node_set critical_path_collection( logic_network const& net, double ratio )
{
  if ( ratio < 0.0 || ratio > 1.0 )
    throw std::invalid_argument( "critical path ratio must lie in [0, 1]" );
  auto const lm = compute_levels( net );
  /* the small epsilon keeps products such as 0.8 * 10 from rounding up */
  auto const threshold = static_cast<uint32_t>( std::ceil( ratio * static_cast<double>( lm.depth ) - 1e-9 ) );

  std::vector<uint8_t> mark( net.size(), 0u );
  for ( auto po : net.outputs() )
  {
    if ( lm.level[po.index()] >= threshold )
      mark[po.index()] = 1u;
  }
  node_set result;
  for ( uint32_t n = net.size(); n-- > 1u; )
  {
    if ( !mark[n] || !net.is_gate( n ) )
      continue;
    result.insert( n );
    for ( auto f : net.fanins( n ) )
      mark[f.index()] = 1u;
  }
  return result;
}

} // namespace mch
