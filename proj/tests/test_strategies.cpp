#include <doctest.h>

#include <random>
#include <sstream>

#include "mch/cuts.hpp"
#include "mch/errors.hpp"
#include "mch/npn.hpp"
#include "mch/strategies.hpp"

using namespace mch;

namespace
{

/* exhaustive DAG search: smallest gate count of a structure over 4 inputs computing f or !f */
uint32_t oracle_min_size( uint16_t target, bool use_and, bool use_xor, bool use_maj, uint32_t max_gates )
{
  std::vector<uint16_t> vals{ 0xaaaa, 0xcccc, 0xf0f0, 0xff00 };
  for ( auto v : vals )
  {
    if ( v == target || static_cast<uint16_t>( ~v ) == target )
      return 0;
  }
  uint32_t best = UINT32_MAX;
  auto rec = [&]( auto&& self, uint32_t gates ) -> void {
    if ( gates >= max_gates || gates + 1u >= best )
      return;
    std::size_t const n = vals.size();
    auto try_value = [&]( uint16_t v ) {
      if ( v == target || static_cast<uint16_t>( ~v ) == target )
      {
        best = std::min( best, gates + 1u );
        return;
      }
      vals.push_back( v );
      self( self, gates + 1u );
      vals.pop_back();
    };
    for ( std::size_t i = 0; i < n; ++i )
    {
      for ( std::size_t j = i + 1; j < n; ++j )
      {
        uint16_t const a = vals[i], b = vals[j];
        if ( use_and )
        {
          try_value( a & b );
          try_value( a & ~b );
          try_value( ~a & b );
          try_value( ~a & ~b );
        }
        if ( use_xor )
          try_value( a ^ b );
        if ( use_maj )
        {
          for ( std::size_t k = j + 1; k < n; ++k )
          {
            uint16_t const c = vals[k];
            for ( int neg : { 0, 1, 2, 4 } )
            {
              uint16_t const x = ( neg & 1 ) ? ~a : a, y = ( neg & 2 ) ? ~b : b, z = ( neg & 4 ) ? ~c : c;
              try_value( ( x & y ) | ( x & z ) | ( y & z ) );
            }
          }
        }
      }
    }
  };
  rec( rec, 0 );
  return best;
}

uint32_t db_min_size( truth_table const& f, repr_tag repr )
{
  auto const canon = npn_canonize( f ).canon;
  uint32_t best = UINT32_MAX;
  for ( auto const& t : npn4_database::shared().lookup( canon, repr ) )
    best = std::min( best, t.size );
  return best;
}

uint32_t db_min_depth( truth_table const& f, repr_tag repr )
{
  auto const canon = npn_canonize( f ).canon;
  uint32_t best = UINT32_MAX;
  for ( auto const& t : npn4_database::shared().lookup( canon, repr ) )
    best = std::min( best, t.depth );
  return best;
}

truth_table cone_function( logic_network const& scratch, signal root, uint32_t num_vars )
{
  std::vector<uint32_t> leaves( scratch.pis().begin(), scratch.pis().end() );
  if ( root.index() == 0u || scratch.is_pi( root.index() ) )
  {
    if ( root.index() == 0u )
      return truth_table::constant( num_vars, root.complemented() );
    return truth_table::nth_var( num_vars, scratch.pi_index( root.index() ) ) ^ root.complemented();
  }
  /* a cone over all PIs; restricted to the cone's support first */
  std::vector<uint32_t> used;
  for ( auto l : leaves )
    used.push_back( l );
  auto const t = cut_truth( scratch, root.index(), used );
  return truth_table( num_vars, t.word() ) ^ root.complemented();
}

} // namespace

TEST_CASE( "database optima agree with exhaustive DAG search" )
{
  truth_table const and4( 4, 0x8000 );
  CHECK( db_min_size( and4, repr_tag::aig ) == 3u );
  CHECK( db_min_depth( and4, repr_tag::aig ) == 2u );
  CHECK( oracle_min_size( 0x8000, true, false, false, 4 ) == 3u );

  truth_table const par4( 4, 0x6996 );
  CHECK( db_min_size( par4, repr_tag::xag ) == 3u );
  CHECK( db_min_depth( par4, repr_tag::xag ) == 2u );
  CHECK( db_min_size( par4, repr_tag::xmg ) == 3u );
  CHECK( oracle_min_size( 0x6996, true, true, false, 4 ) == 3u );

  truth_table const maj3( 4, 0xe8e8 );
  CHECK( db_min_size( maj3, repr_tag::mig ) == 1u );
  CHECK( db_min_depth( maj3, repr_tag::mig ) == 1u );
  CHECK( db_min_size( maj3, repr_tag::aig ) == 4u );
  CHECK( oracle_min_size( 0xe8e8, true, false, false, 5 ) == 4u );
  CHECK( oracle_min_size( 0xe8e8, true, false, true, 3 ) == 1u );

  /* sizes of the stored optimum never beat the oracle; on random classes with small optima they match */
  std::mt19937_64 rng( 31 );
  auto const classes = npn4_database::shared().classes();
  int compared = 0;
  for ( int it = 0; it < 40; ++it )
  {
    auto const c = classes[rng() % classes.size()];
    auto const oracle = oracle_min_size( c, true, true, false, 3 );
    auto const db = db_min_size( truth_table( 4, c ), repr_tag::xag );
    if ( oracle != UINT32_MAX )
    {
      CHECK( db == oracle );
      ++compared;
    }
    else
      CHECK( db > 3u );
  }
  CHECK( compared > 0 );
}

TEST_CASE( "database completeness and soundness" )
{
  auto const& db = npn4_database::shared();
  auto const classes = db.classes();
  CHECK( classes.size() == 222u );
  for ( auto repr : { repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg } )
  {
    for ( auto c : classes )
    {
      auto const set = db.lookup( truth_table( 4, c ), repr );
      REQUIRE( !set.empty() );
      for ( std::size_t i = 0; i < set.size(); ++i )
      {
        auto const& t = set[i];
        REQUIRE( t.evaluate().raw() == c );
        REQUIRE( t.size == t.gates.size() );
        for ( auto const& g : t.gates )
          REQUIRE( permits( repr, g.kind ) );
        if ( i > 0u )
        {
          /* sorted by depth, Pareto in size */
          REQUIRE( set[i - 1].depth < t.depth );
          REQUIRE( set[i - 1].size > t.size );
        }
      }
    }
  }
}

TEST_CASE( "database text round trip" )
{
  std::array<repr_tag, 2> reprs{ repr_tag::aig, repr_tag::xmg };
  npn4_build_stats stats;
  auto const db = npn4_database::build( reprs, {}, &stats );
  CHECK( stats.filled_by_synthesis.at( repr_tag::xmg ) == 0u );
  std::stringstream ss;
  db.save( ss );
  auto const text = ss.str();
  CHECK( text.rfind( "npn4-db v1\n", 0 ) == 0u );
  auto const loaded = npn4_database::load( ss );
  std::stringstream again;
  loaded.save( again );
  CHECK( again.str() == text );

  std::istringstream bad_header( "npn4 v2\n" );
  CHECK_THROWS_AS( npn4_database::load( bad_header ), parse_error );
  std::istringstream wrong( "npn4-db v1\n0x0001 aig 1 1 and(t0,t1)\n" );
  CHECK_THROWS_AS( npn4_database::load( wrong ), parse_error );
  std::istringstream ok( "npn4-db v1\n0x0001 aig 2 3 and(!t0,!t1),and(!t2,!t3),and(g0,g1)\n" );
  CHECK( npn4_database::load( ok ).lookup( truth_table( 4, 1 ), repr_tag::aig ).size() == 1u );

  auto const t = structure_template::parse( "and(t0,t1),!xor(g0,t2)", repr_tag::xag );
  CHECK( t.to_string() == "and(t0,t1),!xor(g0,t2)" );
  CHECK( structure_template::parse( "!t3", repr_tag::aig ).to_string() == "!t3" );
}

TEST_CASE( "level-oriented candidates" )
{
  auto const lib = strategy_library::standard( { repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg } );
  auto const a = truth_table::nth_var( 2, 0 ), b = truth_table::nth_var( 2, 1 );
  auto const cs = level_oriented_candidates( lib, a & b );
  REQUIRE( !cs.items.empty() );
  CHECK( cs.items[0].size == 1u );
  CHECK( cs.items[0].depth == 1u );

  auto const k = level_oriented_candidates( lib, truth_table::constant( 3, true ) );
  REQUIRE( !k.items.empty() );
  CHECK( k.items[0].size == 0u );
  CHECK( k.items[0].root == k.scratch.get_constant( true ) );

  CHECK( level_oriented_candidates( lib, truth_table( 5, 0x96696996u ) ).items.empty() );

  /* every candidate over the whole four-variable space */
  logic_network scratch( repr_tag::xmg );
  std::vector<signal> pis;
  for ( int i = 0; i < 4; ++i )
    pis.push_back( scratch.create_pi() );
  for ( uint32_t f = 0; f < ( 1u << 16 ); ++f )
  {
    truth_table const tt( 4, f );
    auto const items = level_oriented_candidates( lib, tt, scratch, pis );
    REQUIRE( !items.empty() );
    for ( std::size_t i = 0; i < items.size(); ++i )
    {
      REQUIRE( cone_function( scratch, items[i].root, 4 ) == tt );
      if ( i > 0u )
        REQUIRE( std::pair{ items[i - 1].depth, items[i - 1].size } <= std::pair{ items[i].depth, items[i].size } );
    }
  }

  auto const aig_only = strategy_library::standard( { repr_tag::aig } );
  logic_network aig;
  std::vector<signal> apis;
  for ( int i = 0; i < 4; ++i )
    apis.push_back( aig.create_pi() );
  auto const par = level_oriented_candidates( aig_only, truth_table( 4, 0x6996 ), aig, apis );
  REQUIRE( !par.empty() );
  aig.foreach_gate( [&]( uint32_t g ) { CHECK( aig.kind( g ) == gate_kind::and2 ); } );
}

TEST_CASE( "area-oriented candidates" )
{
  auto const lib = strategy_library::standard( { repr_tag::xmg } );
  auto const a = truth_table::nth_var( 3, 0 ), b = truth_table::nth_var( 3, 1 ), c = truth_table::nth_var( 3, 2 );
  auto const cs = area_oriented_candidates( lib, ( a & b ) | ( a & c ), repr_tag::aig );
  REQUIRE( !cs.items.empty() );
  CHECK( cs.items[0].size == 2u );

  auto const par = area_oriented_candidates( lib, truth_table( 4, 0x6996 ), repr_tag::xmg );
  REQUIRE( !par.items.empty() );
  CHECK( par.items[0].source == strategy_kind::dsd_struct );
  CHECK( par.items[0].size == 3u );

  std::mt19937_64 rng( 32 );
  uint32_t both = 0, level_not_deeper = 0;
  for ( int it = 0; it < 1000; ++it )
  {
    uint32_t const v = 5u + ( it & 1 );
    truth_table const tt( v, rng() );
    auto const set = area_oriented_candidates( lib, tt, repr_tag::xmg );
    REQUIRE( !set.items.empty() );
    for ( auto const& cand : set.items )
      REQUIRE( cone_function( set.scratch, cand.root, v ) == tt );

    truth_table const t4( 4, rng() );
    auto const lv = level_oriented_candidates( lib, t4, repr_tag::xmg );
    auto const ar = area_oriented_candidates( lib, t4, repr_tag::xmg );
    if ( !lv.items.empty() && !ar.items.empty() && lv.items[0].depth != ar.items[0].depth )
    {
      ++both;
      level_not_deeper += lv.items[0].depth <= ar.items[0].depth;
    }
  }
  MESSAGE( "level-oriented depth <= area-oriented depth in " << level_not_deeper << " of " << both
                                                              << " differing cases" );

  auto const empty = strategy_library::none();
  CHECK( empty.empty() );
  CHECK( area_oriented_candidates( empty, truth_table( 3, 0x80 ) ).items.empty() );
}
