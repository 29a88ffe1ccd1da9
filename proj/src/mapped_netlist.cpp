#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "mch/mapper.hpp"
#include "mch/strategies.hpp"
#include "mch/verify.hpp"

namespace mch
{

namespace
{

uint64_t value_key( uint32_t node, bool phase )
{
  return ( static_cast<uint64_t>( node ) << 1 ) | ( phase ? 1u : 0u );
}

} // namespace

void mapped_netlist::compute_stats()
{
  std::unordered_map<uint64_t, double> arrival;
  for ( auto pi : pis )
    arrival[value_key( pi, false )] = 0.0;
  auto arrival_of = [&]( uint32_t node, bool phase ) {
    if ( node == 0u )
      return 0.0;
    auto it = arrival.find( value_key( node, phase ) );
    if ( it == arrival.end() && luts )
      it = arrival.find( value_key( node, !phase ) );
    return it == arrival.end() ? 0.0 : it->second;
  };
  area = 0.0;
  edges = 0;
  for ( auto const& g : gates )
  {
    double a = 0.0;
    for ( std::size_t i = 0; i < g.inputs.size(); ++i )
    {
      double const d = i < g.pin_delays.size() ? g.pin_delays[i] : 1.0;
      a = std::max( a, arrival_of( g.inputs[i].first, g.inputs[i].second ) + d );
    }
    arrival[value_key( g.root, g.phase )] = a;
    area += g.area;
    edges += static_cast<uint32_t>( g.inputs.size() );
  }
  delay = 0.0;
  for ( auto const& [node, phase] : outputs )
    delay = std::max( delay, arrival_of( node, phase ) );
}

std::vector<std::string> mapped_netlist::legality_violations() const
{
  std::vector<std::string> out;
  std::unordered_set<uint64_t> available;
  for ( auto pi : pis )
    available.insert( value_key( pi, false ) );
  auto is_available = [&]( uint32_t node, bool phase ) {
    return node == 0u || available.count( value_key( node, phase ) ) != 0u;
  };
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    auto const& g = gates[i];
    if ( g.function.num_vars() != g.inputs.size() )
      out.push_back( fmt::format( "gate {} has {} inputs but a {}-input function", i, g.inputs.size(),
                                  g.function.num_vars() ) );
    if ( !g.pin_delays.empty() && g.pin_delays.size() != g.inputs.size() )
      out.push_back( fmt::format( "gate {} has a pin delay count mismatch", i ) );
    for ( auto const& [node, phase] : g.inputs )
    {
      if ( !is_available( node, phase ) )
        out.push_back( fmt::format( "gate {} reads node {}{} which is not produced before it", i, phase ? "!" : "",
                                    node ) );
    }
    if ( !available.insert( value_key( g.root, g.phase ) ).second )
      out.push_back( fmt::format( "value {}{} produced twice", g.phase ? "!" : "", g.root ) );
  }
  for ( std::size_t o = 0; o < outputs.size(); ++o )
  {
    auto const [node, phase] = outputs[o];
    if ( !is_available( node, phase ) && !( luts && is_available( node, !phase ) ) )
      out.push_back( fmt::format( "output {} reads node {} which is not produced", o, node ) );
  }
  return out;
}

logic_network mapped_netlist::to_network() const
{
  logic_network net( repr_tag::aig );
  std::unordered_map<uint64_t, signal> value;
  for ( auto pi : pis )
    value[value_key( pi, false )] = net.create_pi();
  auto signal_of = [&]( uint32_t node, bool phase ) {
    if ( node == 0u )
      return net.get_constant( phase );
    if ( auto it = value.find( value_key( node, phase ) ); it != value.end() )
      return it->second;
    if ( auto it = value.find( value_key( node, !phase ) ); it != value.end() )
      return !it->second;
    throw std::invalid_argument( fmt::format( "mapped netlist reads unknown node {}", node ) );
  };
  std::vector<signal> ins;
  for ( auto const& g : gates )
  {
    ins.clear();
    for ( auto const& [node, phase] : g.inputs )
      ins.push_back( signal_of( node, phase ) );
    signal s;
    if ( g.function.is_const0() || g.function.is_const1() )
      s = net.get_constant( g.function.is_const1() );
    else
      s = synthesize_isop_factor( g.function, net, ins );
    value[value_key( g.root, g.phase )] = s;
  }
  for ( auto const& [node, phase] : outputs )
    net.create_po( signal_of( node, phase ) );
  return net;
}

bool cover_check( mapped_netlist const& m, logic_network const& src )
{
  if ( !m.legality_violations().empty() )
    return false;
  if ( m.pis.size() != src.num_pis() || m.outputs.size() != src.num_pos() )
    return false;
  return !cec( m.to_network(), src ).not_equivalent();
}

} // namespace mch
