#include "mch/mapper.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mch/analysis.hpp"
#include "map_schedule.hpp"

namespace mch
{

std::string_view to_string( map_mode m )
{
  switch ( m )
  {
  case map_mode::delay:
    return "delay";
  case map_mode::area:
    return "area";
  case map_mode::balanced:
    return "balanced";
  }
  return "?";
}

map_mode parse_map_mode( std::string_view text )
{
  std::string s( text );
  std::transform( s.begin(), s.end(), s.begin(), []( unsigned char c ) { return std::tolower( c ); } );
  if ( s == "delay" )
    return map_mode::delay;
  if ( s == "area" )
    return map_mode::area;
  if ( s == "balanced" )
    return map_mode::balanced;
  throw std::invalid_argument( "unknown mapping mode '" + std::string( text ) + "'" );
}

namespace
{

void check_cut_params( cut_enumeration_params const& ps )
{
  if ( ps.cut_size < 2u || ps.cut_size > 6u )
    throw std::invalid_argument( "cut size must lie in [2, 6]" );
  if ( ps.cut_limit < 1u )
    throw std::invalid_argument( "cut limit must be at least 1" );
}

} // namespace

std::vector<cut> merged_node_cuts( choice_network const& cn, uint32_t n, network_cuts const& cuts, uint32_t cut_size )
{
  auto const& net = cn.network();
  auto const fanins = net.fanins( n );
  std::array<std::vector<cut> const*, 3> sets{};
  for ( std::size_t i = 0; i < fanins.size(); ++i )
    sets[i] = &cuts[fanins[i].index()];
  auto set = merge_fanin_cuts( net, n, std::span<std::vector<cut> const* const>( sets.data(), fanins.size() ),
                               { cut_size, unlimited_cuts } );
  set.pop_back();
  if ( cn.repr( n ) != n )
    return set;
  for ( auto m = cn.next( n ); m != choice_network::none; m = cn.next( m ) )
  {
    auto const& member_set = cuts[m];
    for ( std::size_t i = 0; i + 1u < member_set.size(); ++i )
    {
      auto c = member_set[i];
      c.function = c.function ^ cn.phase( m );
      insert_cut( set, c );
    }
  }
  return set;
}

network_cuts propagate_choice_cuts( choice_network const& cn, cut_enumeration_params const& ps )
{
  check_cut_params( ps );
  auto const& net = cn.network();
  network_cuts cuts( net.size() );
  for ( auto n : cn.topological_order() )
  {
    if ( !net.is_gate( n ) )
    {
      cuts[n].push_back( trivial_cut( n ) );
      continue;
    }
    cuts[n] = merged_node_cuts( cn, n, cuts, ps.cut_size );
    finalize_cut_set( cuts[n], n, ps.cut_limit );
  }
  return cuts;
}

network_cuts cost_ranked_choice_cuts( choice_network const& cn, cut_enumeration_params const& ps,
                                      std::function<bool( cut const& )> const& usable )
{
  check_cut_params( ps );
  auto const& net = cn.network();
  network_cuts cuts( net.size() );
  std::vector<uint32_t> arrival( net.size(), 0u );
  std::vector<double> flow( net.size(), 0.0 );
  std::vector<double> est( net.size(), 0.0 );
  net.foreach_gate( [&]( uint32_t g ) {
    for ( auto f : net.fanins( g ) )
      est[f.index()] += 1.0;
  } );
  for ( auto po : net.outputs() )
    est[po.index()] += 1.0;
  for ( auto& e : est )
    e = std::max( e, 1.0 );

  struct cost
  {
    uint32_t arrival;
    double flow;
    uint32_t size;
  };
  std::vector<cost> costs;
  std::vector<uint32_t> by_delay, by_area, keep;
  std::vector<uint8_t> taken;
  for ( auto n : cn.topological_order() )
  {
    if ( !net.is_gate( n ) )
    {
      cuts[n].push_back( trivial_cut( n ) );
      continue;
    }
    auto set = merged_node_cuts( cn, n, cuts, ps.cut_size );
    if ( usable )
      std::erase_if( set, [&]( cut const& c ) { return !usable( c ); } );
    std::sort( set.begin(), set.end(), cut_less );
    if ( set.empty() )
    {
      cuts[n].push_back( trivial_cut( n ) );
      arrival[n] = std::numeric_limits<uint32_t>::max() / 2u;
      flow[n] = 1e12;
      continue;
    }
    costs.clear();
    for ( auto const& c : set )
    {
      cost x{ 0u, 1.0, c.size };
      for ( auto l : c.leaf_span() )
      {
        x.arrival = std::max( x.arrival, arrival[l] );
        x.flow += flow[l] / est[l];
      }
      x.arrival += 1u;
      costs.push_back( x );
    }
    by_delay.resize( set.size() );
    std::iota( by_delay.begin(), by_delay.end(), 0u );
    by_area = by_delay;
    auto delay_less = [&]( uint32_t a, uint32_t b ) {
      auto const &x = costs[a], &y = costs[b];
      if ( x.arrival != y.arrival )
        return x.arrival < y.arrival;
      if ( x.flow != y.flow )
        return x.flow < y.flow;
      return a < b;
    };
    auto area_less = [&]( uint32_t a, uint32_t b ) {
      auto const &x = costs[a], &y = costs[b];
      if ( x.flow != y.flow )
        return x.flow < y.flow;
      if ( x.arrival != y.arrival )
        return x.arrival < y.arrival;
      return a < b;
    };
    std::stable_sort( by_delay.begin(), by_delay.end(), delay_less );
    std::stable_sort( by_area.begin(), by_area.end(), area_less );

    /* alternate between the best cuts for delay and for area flow */
    keep.clear();
    taken.assign( set.size(), 0u );
    for ( std::size_t i = 0; i < set.size() && keep.size() < ps.cut_limit; ++i )
    {
      for ( auto idx : { by_delay[i], by_area[i] } )
      {
        if ( keep.size() < ps.cut_limit && !taken[idx] )
        {
          taken[idx] = 1u;
          keep.push_back( idx );
        }
      }
    }
    auto& out = cuts[n];
    for ( auto idx : keep )
      out.push_back( set[idx] );
    out.push_back( trivial_cut( n ) );
    arrival[n] = costs[by_delay[0]].arrival;
    flow[n] = costs[by_delay[0]].flow;
  }
  return cuts;
}

namespace detail
{

std::vector<round_spec> recovery_schedule( map_params const& ps )
{
  auto recovery = [&]( uint32_t rounds, bool constrained ) {
    std::vector<round_spec> s;
    for ( uint32_t r = 1; r < rounds; ++r )
    {
      bool const last = r + 1u == rounds && rounds >= 3u;
      s.push_back( { last ? round_kind::exact_area : round_kind::area_flow, constrained } );
    }
    return s;
  };
  switch ( ps.mode )
  {
  case map_mode::balanced:
    return recovery( 4u, true );
  case map_mode::delay:
    return recovery( ps.rounds, true );
  case map_mode::area:
  {
    /* start like DELAY, then relax the required times */
    auto s = recovery( ps.rounds, true );
    auto relaxed = recovery( std::max( ps.rounds, 2u ), false );
    s.insert( s.end(), relaxed.begin(), relaxed.end() );
    return s;
  }
  }
  return {};
}

} // namespace detail

namespace
{

using detail::round_kind;
using detail::round_spec;

constexpr uint32_t no_time = std::numeric_limits<uint32_t>::max();

class lut_mapper
{
public:
  lut_mapper( choice_network const& cn, map_params const& ps ) : cn_( cn ), net_( cn.network() ), ps_( ps ) {}

  mapped_netlist run()
  {
    if ( ps_.rounds < 1u )
      throw std::invalid_argument( "mapping needs at least one round" );
    cuts_ = cost_ranked_choice_cuts( cn_, { ps_.cut_size, ps_.cut_limit } );
    order_ = cn_.topological_order();
    init();

    mapped_netlist result;
    select_round( round_spec{ round_kind::delay, false } );
    auto [area, depth] = cover();
    uint32_t const target = depth;
    result.round_area.push_back( area );
    result.round_delay.push_back( depth );

    for ( auto const& r : detail::recovery_schedule( ps_ ) )
    {
      update_estimates();
      compute_required( r.constrained ? target : no_time );
      auto const saved_best = best_;
      auto const saved_arrival = arrival_;
      auto const saved_flow = flow_;
      select_round( r );
      auto const [new_area, new_depth] = cover();
      if ( new_area > area || ( r.constrained && new_depth > target ) )
      {
        best_ = saved_best;
        arrival_ = saved_arrival;
        flow_ = saved_flow;
        cover();
      }
      else
      {
        area = new_area;
        depth = new_depth;
      }
      result.round_area.push_back( area );
      result.round_delay.push_back( depth );
    }
    if ( ps_.mode == map_mode::area )
      area_restart( area, depth, result );
    extract( result );
    return result;
  }

private:
  /* Area-only rounds from fresh structural estimates; kept when smaller than the current cover. */
  void area_restart( uint32_t& area, uint32_t& depth, mapped_netlist& result )
  {
    auto const saved_best = best_;
    auto const saved_arrival = arrival_;
    auto const saved_flow = flow_;
    auto const saved_est = est_;
    init();
    std::fill( required_.begin(), required_.end(), no_time );
    uint32_t new_area = 0, new_depth = 0;
    uint32_t const rounds = std::max( ps_.rounds, 3u );
    for ( uint32_t r = 0; r < rounds; ++r )
    {
      if ( r > 0u )
        update_estimates();
      select_round( { r + 1u == rounds ? round_kind::exact_area : round_kind::area_flow, false } );
      std::tie( new_area, new_depth ) = cover();
    }
    if ( new_area < area || ( new_area == area && new_depth < depth ) )
    {
      area = new_area;
      depth = new_depth;
    }
    else
    {
      best_ = saved_best;
      arrival_ = saved_arrival;
      flow_ = saved_flow;
      est_ = saved_est;
      cover();
    }
    result.round_area.push_back( area );
    result.round_delay.push_back( depth );
  }

  void init()
  {
    uint32_t const n = net_.size();
    best_.assign( n, 0u );
    arrival_.assign( n, 0u );
    flow_.assign( n, 0.0 );
    refs_.assign( n, 0u );
    required_.assign( n, no_time );
    est_.assign( n, 0.0 );
    net_.foreach_gate( [&]( uint32_t g ) {
      for ( auto f : net_.fanins( g ) )
        est_[f.index()] += 1.0;
    } );
    for ( auto po : net_.outputs() )
      est_[po.index()] += 1.0;
    for ( auto& e : est_ )
      e = std::max( e, 1.0 );
  }

  uint32_t cut_arrival( cut const& c ) const
  {
    uint32_t a = 0;
    for ( auto l : c.leaf_span() )
      a = std::max( a, arrival_[l] );
    return a + 1u;
  }

  double cut_flow( cut const& c ) const
  {
    double f = 1.0;
    for ( auto l : c.leaf_span() )
      f += flow_[l] / est_[l];
    return f;
  }

  uint32_t cut_ref( cut const& c )
  {
    uint32_t area = 1;
    for ( auto l : c.leaf_span() )
    {
      if ( net_.is_gate( l ) && refs_[l]++ == 0u )
        area += cut_ref( cuts_[l][best_[l]] );
    }
    return area;
  }

  uint32_t cut_deref( cut const& c )
  {
    uint32_t area = 1;
    for ( auto l : c.leaf_span() )
    {
      if ( net_.is_gate( l ) && --refs_[l] == 0u )
        area += cut_deref( cuts_[l][best_[l]] );
    }
    return area;
  }

  void select_round( round_spec const& r )
  {
    for ( auto n : order_ )
    {
      if ( !net_.is_gate( n ) )
        continue;
      auto const& set = cuts_[n];
      std::size_t const count = set.size() - 1u; /* trivial cut last */
      if ( count == 0u )
        throw std::invalid_argument( "cut size too small for the gate arity" );
      bool const exact = r.kind == round_kind::exact_area && refs_[n] > 0u;
      if ( exact )
        cut_deref( set[best_[n]] );

      uint32_t const req = required_[n];
      std::size_t best = count;
      uint32_t best_arr = 0, best_area = 0;
      double best_flow = 0.0;
      std::size_t fastest = 0;
      uint32_t fastest_arr = no_time;
      for ( std::size_t i = 0; i < count; ++i )
      {
        auto const& c = set[i];
        uint32_t const arr = cut_arrival( c );
        double const fl = cut_flow( c );
        if ( arr < fastest_arr )
        {
          fastest_arr = arr;
          fastest = i;
        }
        if ( r.kind != round_kind::delay && req != no_time && arr > req )
          continue;
        uint32_t area = 0;
        if ( exact )
        {
          area = cut_ref( c );
          cut_deref( c );
        }
        bool better = false;
        if ( best == count )
          better = true;
        else if ( r.kind == round_kind::delay )
          better = arr < best_arr || ( arr == best_arr && ( fl < best_flow - 1e-9 || ( fl < best_flow + 1e-9 && c.size < set[best].size ) ) );
        else if ( exact )
          better = area < best_area || ( area == best_area && ( arr < best_arr || ( arr == best_arr && c.size < set[best].size ) ) );
        else
          better = fl < best_flow - 1e-9 || ( fl < best_flow + 1e-9 && ( arr < best_arr || ( arr == best_arr && c.size < set[best].size ) ) );
        if ( better )
        {
          best = i;
          best_arr = arr;
          best_flow = fl;
          best_area = area;
        }
      }
      if ( best == count )
        best = fastest;
      best_[n] = static_cast<uint32_t>( best );
      arrival_[n] = cut_arrival( set[best] );
      flow_[n] = cut_flow( set[best] );
      if ( exact )
        cut_ref( set[best] );
    }
  }

  /* references from the outputs; returns (LUT count, depth) */
  std::pair<uint32_t, uint32_t> cover()
  {
    std::fill( refs_.begin(), refs_.end(), 0u );
    uint32_t area = 0, depth = 0;
    for ( auto po : net_.outputs() )
    {
      auto const d = po.index();
      depth = std::max( depth, arrival_[d] );
      if ( net_.is_gate( d ) && refs_[d]++ == 0u )
        area += cut_ref( cuts_[d][best_[d]] );
    }
    return { area, depth };
  }

  void compute_required( uint32_t target )
  {
    std::fill( required_.begin(), required_.end(), no_time );
    if ( target == no_time )
      return;
    for ( auto po : net_.outputs() )
      required_[po.index()] = std::min( required_[po.index()], target );
    for ( auto it = order_.rbegin(); it != order_.rend(); ++it )
    {
      auto const n = *it;
      if ( !net_.is_gate( n ) || refs_[n] == 0u || required_[n] == no_time )
        continue;
      for ( auto l : cuts_[n][best_[n]].leaf_span() )
        required_[l] = std::min( required_[l], required_[n] == 0u ? 0u : required_[n] - 1u );
    }
  }

  void update_estimates()
  {
    for ( uint32_t n = 0; n < est_.size(); ++n )
      est_[n] = std::max( 1.0, ( 2.0 * est_[n] + refs_[n] ) / 3.0 );
  }

  void extract( mapped_netlist& m )
  {
    m.luts = true;
    m.pis.assign( net_.pis().begin(), net_.pis().end() );
    for ( auto n : order_ )
    {
      if ( !net_.is_gate( n ) || refs_[n] == 0u )
        continue;
      auto const& c = cuts_[n][best_[n]];
      mapped_gate g;
      g.root = n;
      for ( auto l : c.leaf_span() )
        g.inputs.emplace_back( l, false );
      g.function = c.function;
      g.area = 1.0;
      g.pin_delays.assign( c.size, 1.0 );
      m.gates.push_back( std::move( g ) );
    }
    for ( auto po : net_.outputs() )
      m.outputs.emplace_back( po.index(), po.complemented() );
    m.compute_stats();
  }

  choice_network const& cn_;
  logic_network const& net_;
  map_params ps_;
  network_cuts cuts_;
  std::vector<uint32_t> order_;
  std::vector<uint32_t> best_;
  std::vector<uint32_t> arrival_;
  std::vector<double> flow_;
  std::vector<double> est_;
  std::vector<uint32_t> refs_;
  std::vector<uint32_t> required_;
};

} // namespace

mapped_netlist map_lut( choice_network const& cn, map_params const& ps )
{
  return lut_mapper( cn, ps ).run();
}

mapped_netlist map_lut( logic_network const& net, map_params const& ps )
{
  return map_lut( choice_network( net ), ps );
}

} // namespace mch
