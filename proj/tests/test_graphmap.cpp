#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mch/analysis.hpp"
#include "mch/graphmap.hpp"
#include "test_util.hpp"

using namespace mch;

namespace
{

constexpr std::array all_reprs{ repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg };

bool only_permitted_gates( logic_network const& net, repr_tag tag )
{
  bool ok = true;
  net.foreach_gate( [&]( uint32_t g ) { ok = ok && permits( tag, net.kind( g ) ); } );
  return ok;
}

uint32_t count_kind( logic_network const& net, gate_kind kind )
{
  uint32_t c = 0;
  net.foreach_gate( [&]( uint32_t g ) { c += net.kind( g ) == kind ? 1u : 0u; } );
  return c;
}

logic_network parity4_aig()
{
  logic_network net( repr_tag::aig );
  std::vector<signal> x;
  for ( int i = 0; i < 4; ++i )
    x.push_back( net.create_pi() );
  auto xor_and = [&]( signal a, signal b ) { return net.create_or( net.create_and( a, !b ), net.create_and( !a, b ) ); };
  net.create_po( xor_and( xor_and( x[0], x[1] ), xor_and( x[2], x[3] ) ) );
  return net;
}

/* smallest number of gates from `kinds` (inputs and outputs freely complemented)
 * computing the 4-input function `target`, searched by iterative deepening */
uint32_t oracle_min_gates( uint16_t target, std::vector<gate_kind> const& kinds, uint32_t bound )
{
  auto normal = []( uint16_t t ) { return static_cast<uint16_t>( ( t & 1u ) ? ~t : t ); };
  std::vector<uint16_t> pool{ 0x0000, 0xaaaa, 0xcccc, 0xf0f0, 0xff00 };
  auto rec = [&]( auto&& self, uint32_t left ) -> bool {
    for ( auto t : pool )
    {
      if ( normal( t ) == normal( target ) )
        return true;
    }
    if ( left == 0u )
      return false;
    std::size_t const n = pool.size();
    for ( auto kind : kinds )
    {
      for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = i + 1u; j < n; ++j )
        {
          if ( kind == gate_kind::maj3 )
          {
            for ( std::size_t k = j + 1u; k < n; ++k )
              for ( uint32_t neg = 0; neg < 8u; ++neg )
              {
                uint16_t const a = pool[i] ^ ( neg & 1u ? 0xffff : 0 ), b = pool[j] ^ ( neg & 2u ? 0xffff : 0 ),
                               c = pool[k] ^ ( neg & 4u ? 0xffff : 0 );
                pool.push_back( static_cast<uint16_t>( ( a & b ) | ( a & c ) | ( b & c ) ) );
                bool const found = self( self, left - 1u );
                pool.pop_back();
                if ( found )
                  return true;
              }
            continue;
          }
          for ( uint32_t neg = 0; neg < ( kind == gate_kind::xor2 ? 1u : 4u ); ++neg )
          {
            uint16_t const a = pool[i] ^ ( neg & 1u ? 0xffff : 0 ), b = pool[j] ^ ( neg & 2u ? 0xffff : 0 );
            pool.push_back( static_cast<uint16_t>( kind == gate_kind::xor2 ? a ^ b : a & b ) );
            bool const found = self( self, left - 1u );
            pool.pop_back();
            if ( found )
              return true;
          }
        }
    }
    return false;
  };
  for ( uint32_t s = 0; s <= bound; ++s )
  {
    if ( rec( rec, s ) )
      return s;
  }
  return bound + 1u;
}

/* two outputs of random functions over `vars` inputs in sum-of-products form */
logic_network random_sop_network( uint32_t vars, std::mt19937_64& rng )
{
  logic_network net( repr_tag::aig );
  std::vector<signal> x;
  for ( uint32_t i = 0; i < vars; ++i )
    x.push_back( net.create_pi() );
  for ( int o = 0; o < 2; ++o )
  {
    uint64_t const word = rng();
    signal f = net.get_constant( false );
    for ( uint32_t m = 0; m < ( 1u << vars ); ++m )
    {
      if ( ( ( word >> m ) & 1u ) == 0u || rng() % 3u == 0u )
        continue;
      signal cube = net.get_constant( true );
      for ( uint32_t i = 0; i < vars; ++i )
        cube = net.create_and( cube, x[i] ^ ( ( ( m >> i ) & 1u ) == 0u ) );
      f = net.create_or( f, cube );
    }
    net.create_po( f );
  }
  return net;
}

} // namespace

TEST_CASE( "target libraries" )
{
  for ( auto tag : all_reprs )
    CHECK( graph_target_library::standard( tag ).function_complete() );
  graph_target_library const empty{ repr_tag::aig, nullptr };
  CHECK_FALSE( empty.function_complete() );
  logic_network net;
  net.create_po( net.create_and( net.create_pi(), net.create_pi() ) );
  CHECK_THROWS_AS( graph_map( choice_network( net ), empty ), std::invalid_argument );
}

TEST_CASE( "an AND chain keeps its structure in every target" )
{
  logic_network net( repr_tag::aig );
  signal acc = net.create_pi();
  for ( int i = 0; i < 5; ++i )
    acc = net.create_and( acc, net.create_pi() );
  net.create_po( acc );
  for ( auto tag : all_reprs )
  {
    CAPTURE( to_string( tag ) );
    auto const g = graph_map( choice_network( net ), graph_target_library::standard( tag ) );
    CHECK( g.tag() == tag );
    CHECK( count_live_gates( g ) == 5u );
    CHECK( count_kind( g, gate_kind::and2 ) == 5u );
    CHECK( test::oracle_equivalent( g, net ) );
  }
}

TEST_CASE( "parity of four inputs maps onto XOR gates" )
{
  auto const net = parity4_aig();
  REQUIRE( count_live_gates( net ) == 9u );
  uint32_t const xor_bound = oracle_min_gates( 0x6996, { gate_kind::and2, gate_kind::xor2, gate_kind::maj3 }, 3 );
  CHECK( xor_bound == 3u );
  for ( auto tag : { repr_tag::xag, repr_tag::xmg } )
  {
    auto const g = graph_map( choice_network( net ), graph_target_library::standard( tag ) );
    CHECK( count_live_gates( g ) == xor_bound );
    CHECK( count_kind( g, gate_kind::xor2 ) == 3u );
    CHECK( test::oracle_equivalent( g, net ) );
  }
  auto const g = graph_map( choice_network( net ), graph_target_library::standard( repr_tag::aig ) );
  CHECK( count_live_gates( g ) <= 9u );
  CHECK( test::oracle_equivalent( g, net ) );
}

TEST_CASE( "graph mapping preserves function" )
{
  std::mt19937_64 rng( 5 );
  auto const lib = strategy_library::standard( { repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg } );
  for ( int iter = 0; iter < 24; ++iter )
  {
    auto const net = iter % 2 ? test::random_network( 8 + iter % 5, 60, 3, rng, all_reprs[iter % 4] )
                              : random_sop_network( 4 + iter % 3, rng );
    mch_params mp;
    mp.mix_target = repr_tag::xmg;
    auto const cn = build_mch( net, lib, mp );
    for ( auto tag : all_reprs )
    {
      for ( auto mode : { map_mode::delay, map_mode::area, map_mode::balanced } )
      {
        CAPTURE( iter );
        CAPTURE( to_string( tag ) );
        CAPTURE( to_string( mode ) );
        map_params ps{ 4, 8, mode, 4 };
        auto const plain = graph_map( choice_network( net ), graph_target_library::standard( tag ), ps );
        auto const mixed = graph_map( cn, graph_target_library::standard( tag ), ps );
        CHECK( plain.tag() == tag );
        CHECK( mixed.tag() == tag );
        CHECK( only_permitted_gates( mixed, tag ) );
        CHECK( count_live_gates( mixed ) == mixed.num_gates() );
        CHECK( test::oracle_equivalent( plain, net ) );
        CHECK( test::oracle_equivalent( mixed, net ) );
      }
    }
  }
}

TEST_CASE( "iterative optimization" )
{
  SUBCASE( "a single gate is already a fixpoint" )
  {
    logic_network net;
    net.create_po( net.create_and( net.create_pi(), net.create_pi() ) );
    auto const r = optimize_iterate( net, repr_tag::xmg, default_mix( repr_tag::xmg ) );
    REQUIRE( r.report.iterations.size() == 1u );
    CHECK_FALSE( r.report.iterations[0].accepted );
    CHECK( r.report.reason == loop_termination::fixpoint );
    CHECK( count_live_gates( r.network ) == 1u );
    CHECK( r.network.tag() == repr_tag::xmg );
  }
  SUBCASE( "the unfactored a*b + a*c loses a gate in the first iteration" )
  {
    logic_network net;
    auto const a = net.create_pi(), b = net.create_pi(), c = net.create_pi();
    net.create_po( net.create_or( net.create_and( a, b ), net.create_and( a, c ) ) );
    REQUIRE( count_live_gates( net ) == 3u );
    auto const r = optimize_iterate( net, repr_tag::xmg, repr_tag::mig );
    REQUIRE_FALSE( r.report.iterations.empty() );
    CHECK( r.report.iterations[0].accepted );
    CHECK( r.report.iterations[0].nodes <= 2u );
    CHECK( test::oracle_equivalent( r.network, net ) );
  }
  SUBCASE( "a richer input is converted in the first iteration" )
  {
    logic_network net( repr_tag::xmg );
    auto const a = net.create_pi(), b = net.create_pi(), c = net.create_pi();
    net.create_po( net.create_maj( a, b, c ) );
    auto const r = optimize_iterate( net, repr_tag::aig, repr_tag::aig );
    CHECK( r.report.iterations[0].accepted );
    CHECK( r.network.tag() == repr_tag::aig );
    CHECK( only_permitted_gates( r.network, repr_tag::aig ) );
    CHECK( test::oracle_equivalent( r.network, net ) );
  }
  SUBCASE( "reports follow the acceptance rule" )
  {
    std::mt19937_64 rng( 17 );
    for ( int iter = 0; iter < 16; ++iter )
    {
      auto const net = random_sop_network( 5, rng );
      auto const target = all_reprs[iter % 4];
      optimize_params ps;
      ps.map.mode = iter % 3 == 0 ? map_mode::delay : map_mode::area;
      ps.max_iters = 3u + iter % 4;
      ps.use_choices = iter % 5 != 0;
      auto const r = optimize_iterate( net, target, default_mix( target ), ps );
      CAPTURE( iter );
      auto const& its = r.report.iterations;
      REQUIRE_FALSE( its.empty() );
      CHECK( its.size() <= ps.max_iters );
      /* every accepted candidate improves the key, only the last may be rejected */
      auto key = [&]( uint32_t nodes, uint32_t level ) {
        return ps.map.mode == map_mode::delay ? std::pair{ level, nodes } : std::pair{ nodes, level };
      };
      auto best = key( r.report.initial_nodes, r.report.initial_level );
      for ( std::size_t i = 0; i < its.size(); ++i )
      {
        auto const k = key( its[i].nodes, its[i].level );
        CHECK( its[i].accepted == ( k < best ) );
        if ( its[i].accepted )
          best = k;
        else
          CHECK( i + 1u == its.size() );
      }
      CHECK( ( r.report.reason == loop_termination::fixpoint ) == !its.back().accepted );
      CHECK( key( count_live_gates( r.network ), compute_levels( r.network ).depth ) == best );
      CHECK( r.network.tag() == target );
      CHECK( test::oracle_equivalent( r.network, net ) );
      auto const csv = r.report.to_csv();
      CHECK( static_cast<std::size_t>( std::count( csv.begin(), csv.end(), '\n' ) ) == its.size() + 2u );
    }
  }
  SUBCASE( "at least one iteration is required" )
  {
    logic_network net;
    net.create_po( net.create_pi() );
    optimize_params ps;
    ps.max_iters = 0;
    CHECK_THROWS_AS( optimize_iterate( net, repr_tag::aig, repr_tag::aig, ps ), std::invalid_argument );
  }
}

TEST_CASE( "default mixes" )
{
  CHECK( default_mix( repr_tag::xmg ) == repr_tag::mig );
  CHECK( default_mix( repr_tag::aig ) == repr_tag::xmg );
}
