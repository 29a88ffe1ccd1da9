#include "mch/strategies.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "mch/dsd.hpp"
#include "mch/factor.hpp"
#include "mch/isop.hpp"
#include "mch/npn.hpp"

namespace mch
{

std::string_view to_string( strategy_kind kind )
{
  switch ( kind )
  {
  case strategy_kind::npn4_level:
    return "npn4";
  case strategy_kind::isop_factor:
    return "isop";
  case strategy_kind::dsd_struct:
    return "dsd";
  }
  return "?";
}

strategy_library strategy_library::standard( std::vector<repr_tag> reprs )
{
  strategy_library lib;
  lib.db = &npn4_database::shared();
  lib.level_reprs = std::move( reprs );
  return lib;
}

strategy_library strategy_library::none()
{
  strategy_library lib;
  lib.isop_factor = false;
  lib.dsd = false;
  return lib;
}

std::pair<uint32_t, uint32_t> cone_size_depth( logic_network const& net, signal root, std::span<const signal> leaves )
{
  std::unordered_set<uint32_t> stop;
  for ( auto l : leaves )
    stop.insert( l.index() );
  std::vector<uint32_t> cone;
  std::unordered_set<uint32_t> seen;
  std::vector<uint32_t> stack{ root.index() };
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    if ( !seen.insert( n ).second || stop.count( n ) || !net.is_gate( n ) )
      continue;
    cone.push_back( n );
    for ( auto f : net.fanins( n ) )
      stack.push_back( f.index() );
  }
  std::sort( cone.begin(), cone.end() );
  std::unordered_map<uint32_t, uint32_t> level;
  for ( auto n : cone )
  {
    uint32_t l = 0;
    for ( auto f : net.fanins( n ) )
    {
      auto it = level.find( f.index() );
      if ( it != level.end() )
        l = std::max( l, it->second );
    }
    level[n] = l + 1u;
  }
  auto it = level.find( root.index() );
  return { static_cast<uint32_t>( cone.size() ), it == level.end() ? 0u : it->second };
}

signal synthesize_isop_factor( truth_table const& tt, logic_network& net, std::span<const signal> leaves )
{
  auto const on = isop( tt );
  auto const off = isop( ~tt );
  bool const use_off = literal_count( off ) < literal_count( on );
  auto const form = factor( use_off ? off : on );
  return lower( form, net, leaves ) ^ use_off;
}

namespace
{

signal balanced( logic_network& net, std::vector<signal> items, bool use_xor )
{
  while ( items.size() > 1u )
  {
    std::vector<signal> next;
    for ( std::size_t i = 0; i + 1 < items.size(); i += 2 )
      next.push_back( use_xor ? net.create_xor( items[i], items[i + 1] ) : net.create_and( items[i], items[i + 1] ) );
    if ( items.size() % 2u )
      next.push_back( items.back() );
    items = std::move( next );
  }
  return items[0];
}

/* smallest template over any representation the network can hold */
structure_template const* area_template( npn4_database const& db, truth_table const& canon, repr_tag tag )
{
  structure_template const* best = nullptr;
  for ( auto r : { repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg } )
  {
    if ( !embeds_into( r, tag ) || !db.has( r ) )
      continue;
    for ( auto const& t : db.lookup( canon, r ) )
    {
      if ( !best || std::pair{ t.size, t.depth } < std::pair{ best->size, best->depth } )
        best = &t;
    }
  }
  return best;
}

signal lower_dsd( dsd_tree const& tree, uint32_t n, logic_network& net, std::span<const signal> leaves,
                  npn4_database const* db )
{
  auto const& nd = tree.nodes[n];
  auto in = [&]( dsd_tree::child const& c ) { return lower_dsd( tree, c.node, net, leaves, db ) ^ c.complemented; };
  switch ( nd.kind )
  {
  case dsd_tree::op::const0:
    return net.get_constant( false );
  case dsd_tree::op::var:
    return leaves[nd.var];
  case dsd_tree::op::and_op:
  case dsd_tree::op::xor_op:
  {
    std::vector<signal> items;
    for ( auto const& c : nd.children )
      items.push_back( in( c ) );
    return balanced( net, std::move( items ), nd.kind == dsd_tree::op::xor_op );
  }
  case dsd_tree::op::maj:
    return net.create_maj( in( nd.children[0] ), in( nd.children[1] ), in( nd.children[2] ) );
  case dsd_tree::op::prime:
  {
    std::vector<signal> ins;
    for ( auto const& c : nd.children )
      ins.push_back( in( c ) );
    if ( db && ins.size() <= 4u )
    {
      auto const f = nd.function.extend_to( 4 );
      auto const r = npn_canonize( f );
      if ( auto const* t = area_template( *db, r.canon, net.tag() ) )
      {
        std::array<signal, 4> tin{};
        for ( uint32_t i = 0; i < 4; ++i )
          tin[r.transform.perm[i]] = i < ins.size() ? ins[i] ^ ( ( ( r.transform.input_neg >> i ) & 1u ) != 0u )
                                                    : net.get_constant( false );
        return t->instantiate( net, tin ) ^ r.transform.output_neg;
      }
    }
    return synthesize_isop_factor( nd.function, net, ins );
  }
  }
  return net.get_constant( false );
}

void sort_by_depth( std::vector<candidate>& c )
{
  std::stable_sort( c.begin(), c.end(), []( auto const& a, auto const& b ) {
    return std::pair{ a.depth, a.size } < std::pair{ b.depth, b.size };
  } );
}

void sort_by_size( std::vector<candidate>& c )
{
  std::stable_sort( c.begin(), c.end(), []( auto const& a, auto const& b ) {
    return std::pair{ a.size, a.depth } < std::pair{ b.size, b.depth };
  } );
}

void add_unique( std::vector<candidate>& out, candidate c )
{
  for ( auto const& e : out )
  {
    if ( e.root == c.root )
      return;
  }
  out.push_back( c );
}

} // namespace

signal synthesize_dsd( truth_table const& tt, logic_network& net, std::span<const signal> leaves,
                       npn4_database const* db )
{
  dsd_params ps;
  ps.detect_majority = permits( net.tag(), gate_kind::maj3 );
  auto const tree = dsd_decompose( tt, ps );
  return lower_dsd( tree, tree.root.node, net, leaves, db ) ^ tree.root.complemented;
}

std::optional<npn4_binding> bind_npn4( truth_table const& tt, std::span<const signal> leaves )
{
  std::array<uint8_t, 6> kept{};
  auto const shrunk = shrink_to_support( tt, kept );
  if ( shrunk.num_vars() > 4u )
    return std::nullopt;
  auto const r = npn_canonize( truth_table( 4, shrunk.word() ) );
  npn4_binding b{ r.canon, {}, r.transform.output_neg };
  for ( uint32_t i = 0; i < 4; ++i )
  {
    signal const x = i < shrunk.num_vars() ? leaves[kept[i]] : signal( 0, false );
    b.inputs[r.transform.perm[i]] = x ^ ( ( ( r.transform.input_neg >> i ) & 1u ) != 0u );
  }
  return b;
}

std::vector<candidate> level_oriented_candidates( strategy_library const& lib, truth_table const& tt,
                                                  logic_network& scratch, std::span<const signal> leaves )
{
  std::vector<candidate> out;
  if ( !lib.db || lib.level_reprs.empty() )
    return out;
  auto const b = bind_npn4( tt, leaves );
  if ( !b )
    return out;
  for ( auto repr : lib.level_reprs )
  {
    if ( !embeds_into( repr, scratch.tag() ) )
      continue;
    for ( auto const& t : lib.db->lookup( b->canon, repr ) )
    {
      auto const root = t.instantiate( scratch, b->inputs ) ^ b->output_neg;
      auto const [size, depth] = cone_size_depth( scratch, root, leaves );
      add_unique( out, { root, strategy_kind::npn4_level, size, depth } );
    }
  }
  sort_by_depth( out );
  return out;
}

std::vector<candidate> area_oriented_candidates( strategy_library const& lib, truth_table const& tt,
                                                 logic_network& scratch, std::span<const signal> leaves )
{
  std::vector<candidate> out;
  if ( lib.isop_factor )
  {
    auto const root = synthesize_isop_factor( tt, scratch, leaves );
    auto const [size, depth] = cone_size_depth( scratch, root, leaves );
    add_unique( out, { root, strategy_kind::isop_factor, size, depth } );
  }
  if ( lib.dsd )
  {
    auto const root = synthesize_dsd( tt, scratch, leaves, lib.db );
    auto const [size, depth] = cone_size_depth( scratch, root, leaves );
    add_unique( out, { root, strategy_kind::dsd_struct, size, depth } );
  }
  sort_by_size( out );
  return out;
}

namespace
{

candidate_set fresh_set( truth_table const& tt, repr_tag repr, std::vector<signal>& pis )
{
  candidate_set cs{ logic_network( repr ), {} };
  for ( uint32_t i = 0; i < tt.num_vars(); ++i )
    pis.push_back( cs.scratch.create_pi() );
  return cs;
}

} // namespace

candidate_set level_oriented_candidates( strategy_library const& lib, truth_table const& tt, repr_tag scratch_repr )
{
  std::vector<signal> pis;
  auto cs = fresh_set( tt, scratch_repr, pis );
  cs.items = level_oriented_candidates( lib, tt, cs.scratch, pis );
  return cs;
}

candidate_set area_oriented_candidates( strategy_library const& lib, truth_table const& tt, repr_tag scratch_repr )
{
  std::vector<signal> pis;
  auto cs = fresh_set( tt, scratch_repr, pis );
  cs.items = area_oriented_candidates( lib, tt, cs.scratch, pis );
  return cs;
}

} // namespace mch
