#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "mch/analysis.hpp"
#include "mch/errors.hpp"
#include "mch/network.hpp"
#include "mch/simulate.hpp"
#include "test_util.hpp"

using namespace mch;

TEST_CASE( "structural hashing rules" )
{
  logic_network net;
  auto const a = net.create_pi(), b = net.create_pi();
  CHECK( net.create_and( a, !a ) == net.get_constant( false ) );
  CHECK( net.create_and( a, a ) == a );
  CHECK( net.create_and( a, net.get_constant( true ) ) == a );
  CHECK( net.create_and( a, net.get_constant( false ) ) == net.get_constant( false ) );
  auto const g1 = net.create_and( a, b );
  auto const g2 = net.create_and( b, a );
  CHECK( g1 == g2 );
  CHECK( net.num_gates() == 1u );
  std::array<signal, 3> bad{ a, b, a };
  CHECK_THROWS_AS( net.strash_add( gate_kind::and2, std::span<const signal>( bad.data(), 3 ) ), std::invalid_argument );
  CHECK_THROWS_AS( net.strash_add( gate_kind::maj3, bad ), std::invalid_argument );

  logic_network xmg( repr_tag::xmg );
  auto const x = xmg.create_pi(), y = xmg.create_pi(), z = xmg.create_pi();
  CHECK( xmg.create_maj( x, x, y ) == x );
  CHECK( xmg.create_maj( x, !x, y ) == y );
  CHECK( xmg.create_xor( x, x ) == xmg.get_constant( false ) );
  CHECK( xmg.create_xor( x, xmg.get_constant( false ) ) == x );
  CHECK( xmg.create_xor( !x, y ) == !xmg.create_xor( x, y ) );
  auto const m1 = xmg.create_maj( x, y, z );
  CHECK( xmg.create_maj( z, x, y ) == m1 );
  CHECK( xmg.create_maj( !x, !y, !z ) == !m1 );
  /* a majority with a constant fanin is an AND or OR */
  CHECK( xmg.kind( xmg.create_maj( x, y, xmg.get_constant( false ) ).index() ) == gate_kind::and2 );
}

TEST_CASE( "hashing matches a non-hashing reference construction" )
{
  std::mt19937_64 rng( 11 );
  for ( int it = 0; it < 100; ++it )
  {
    uint32_t const n = 3u + rng() % 8u;
    logic_network net( repr_tag::xmg );
    std::vector<signal> sig;
    std::vector<std::vector<bool>> ref; // per pool entry, function over 2^n minterms
    for ( uint32_t i = 0; i < n; ++i )
    {
      sig.push_back( net.create_pi() );
      std::vector<bool> t( 1u << n );
      for ( uint32_t m = 0; m < t.size(); ++m )
        t[m] = ( m >> i ) & 1u;
      ref.push_back( t );
    }
    for ( int g = 0; g < 40; ++g )
    {
      auto pick = [&] { return std::pair{ rng() % sig.size(), ( rng() & 1u ) != 0u }; };
      auto const [i, ci] = pick();
      auto const [j, cj] = pick();
      auto const [k, ck] = pick();
      std::vector<bool> t( 1u << n );
      signal s;
      switch ( rng() % 3u )
      {
      case 0:
        s = net.create_and( sig[i] ^ ci, sig[j] ^ cj );
        for ( uint32_t m = 0; m < t.size(); ++m )
          t[m] = ( ref[i][m] != ci ) && ( ref[j][m] != cj );
        break;
      case 1:
        s = net.create_xor( sig[i] ^ ci, sig[j] ^ cj );
        for ( uint32_t m = 0; m < t.size(); ++m )
          t[m] = ( ref[i][m] != ci ) != ( ref[j][m] != cj );
        break;
      default:
        s = net.create_maj( sig[i] ^ ci, sig[j] ^ cj, sig[k] ^ ck );
        for ( uint32_t m = 0; m < t.size(); ++m )
          t[m] = ( ( ref[i][m] != ci ) + ( ref[j][m] != cj ) + ( ref[k][m] != ck ) ) >= 2;
        break;
      }
      sig.push_back( s );
      ref.push_back( t );
      net.create_po( s );
    }
    auto const tables = test::output_tables( net );
    for ( uint32_t o = 0; o < net.num_pos(); ++o )
      REQUIRE( tables[o] == ref[n + o] );
    /* no two gates share a canonical key */
    std::set<std::tuple<int, uint32_t, uint32_t, uint32_t>> keys;
    net.foreach_gate( [&]( uint32_t g ) {
      auto const f = net.fanins( g );
      for ( std::size_t q = 0; q < f.size(); ++q )
        REQUIRE( f[q].index() < g );
      REQUIRE( keys.emplace( int( net.kind( g ) ), f[0].literal(), f[1].literal(), f.size() > 2 ? f[2].literal() : 0u ).second );
    } );
  }
}

TEST_CASE( "xor and majority fall back to ANDs in an AIG" )
{
  logic_network net;
  auto const a = net.create_pi(), b = net.create_pi(), c = net.create_pi();
  net.create_po( net.create_xor( a, b ) );
  net.create_po( net.create_maj( a, b, c ) );
  net.foreach_gate( [&]( uint32_t g ) { CHECK( net.kind( g ) == gate_kind::and2 ); } );
  auto const t = test::output_tables( net );
  for ( uint32_t m = 0; m < 8; ++m )
  {
    bool const x = m & 1u, y = ( m >> 1 ) & 1u, z = ( m >> 2 ) & 1u;
    CHECK( t[0][m] == ( x != y ) );
    CHECK( t[1][m] == ( x + y + z >= 2 ) );
  }
}

TEST_CASE( "one-to-one embedding" )
{
  std::mt19937_64 rng( 12 );
  for ( int it = 0; it < 50; ++it )
  {
    auto const net = test::random_network( 4u + rng() % 8u, 30, 3, rng );
    auto const lm = compute_levels( net );
    for ( auto target : { repr_tag::xag, repr_tag::mig, repr_tag::xmg } )
    {
      auto const e = one_to_one_map( net, target );
      CHECK( e.tag() == target );
      CHECK( count_live_gates( e ) == count_live_gates( net ) );
      CHECK( compute_levels( e ).depth == lm.depth );
      CHECK( test::oracle_equivalent( e, net ) );
    }
  }
  logic_network pis_only;
  pis_only.create_pi();
  pis_only.create_pi();
  CHECK( one_to_one_map( pis_only, repr_tag::mig ).num_gates() == 0u );

  logic_network mig( repr_tag::mig );
  auto const a = mig.create_pi(), b = mig.create_pi(), c = mig.create_pi();
  mig.create_po( mig.create_maj( a, b, c ) );
  CHECK_THROWS_AS( one_to_one_map( mig, repr_tag::aig ), unsupported_conversion );
  CHECK( join( repr_tag::xag, repr_tag::mig ) == repr_tag::xmg );
  CHECK( join( repr_tag::aig, repr_tag::mig ) == repr_tag::mig );
  CHECK( embeds_into( repr_tag::aig, repr_tag::mig ) );
  CHECK_FALSE( embeds_into( repr_tag::xag, repr_tag::mig ) );
}

TEST_CASE( "levels" )
{
  logic_network net( repr_tag::xag );
  std::vector<signal> x;
  for ( int i = 0; i < 8; ++i )
    x.push_back( net.create_pi() );
  auto const g = net.create_and( x[0], x[1] );
  net.create_po( g );
  CHECK( compute_levels( net ).level[g.index()] == 1u );
  CHECK( compute_levels( net ).depth == 1u );
  auto layer = x;
  while ( layer.size() > 1u )
  {
    std::vector<signal> next;
    for ( std::size_t i = 0; i < layer.size(); i += 2 )
      next.push_back( net.create_xor( layer[i], layer[i + 1] ) );
    layer = next;
  }
  net.create_po( layer[0] );
  CHECK( compute_levels( net ).depth == 3u );

  /* longest path by memoized DFS over fanins */
  std::mt19937_64 rng( 13 );
  for ( int it = 0; it < 20; ++it )
  {
    auto const r = test::random_network( 16, 200, 4, rng );
    std::vector<int> memo( r.size(), -1 );
    std::function<int( uint32_t )> longest = [&]( uint32_t n ) -> int {
      if ( !r.is_gate( n ) )
        return 0;
      if ( memo[n] >= 0 )
        return memo[n];
      int best = 0;
      for ( auto f : r.fanins( n ) )
        best = std::max( best, longest( f.index() ) );
      return memo[n] = best + 1;
    };
    int depth = 0;
    for ( auto po : r.outputs() )
      depth = std::max( depth, longest( po.index() ) );
    CHECK( compute_levels( r ).depth == uint32_t( depth ) );
  }
}

TEST_CASE( "mffc" )
{
  logic_network net;
  auto const a = net.create_pi(), b = net.create_pi(), c = net.create_pi(), d = net.create_pi();
  auto const g1 = net.create_and( a, b );
  auto const g2 = net.create_and( g1, c );
  auto const g3 = net.create_and( g2, d );
  net.create_po( g3 );
  auto const m = mffc( net, g3.index(), 16 );
  CHECK( m.nodes == node_set{ g1.index(), g2.index(), g3.index() } );
  CHECK_FALSE( m.degenerate );

  net.create_po( g1 );
  auto const m2 = mffc( net, g3.index(), 16 );
  CHECK( m2.nodes == node_set{ g2.index(), g3.index() } );

  auto const pi = mffc( net, a.index(), 8 );
  CHECK( pi.degenerate );
  CHECK( pi.nodes == node_set{ a.index() } );

  /* mark-and-sweep oracle: gates still reachable when traversal may not pass through the root */
  std::mt19937_64 rng( 14 );
  for ( int it = 0; it < 100; ++it )
  {
    auto const r = test::random_network( 8, 100, 4, rng );
    auto const live = live_nodes( r );
    auto const total = count_live_gates( r );
    auto const refs = reference_counts( r );
    r.foreach_gate( [&]( uint32_t root ) {
      if ( !live[root] )
        return;
      std::vector<uint8_t> reach( r.size(), 0u );
      for ( auto po : r.outputs() )
        reach[po.index()] = 1u;
      uint32_t remaining = 0;
      for ( uint32_t n = r.size(); n-- > 1u; )
      {
        if ( !reach[n] || !r.is_gate( n ) || n == root )
          continue;
        ++remaining;
        for ( auto f : r.fanins( n ) )
          reach[f.index()] = 1u;
      }
      auto const full = mffc( r, refs, root, 64 );
      REQUIRE( full.nodes.size() == total - remaining );

      for ( uint32_t K = 4; K <= 12; ++K )
      {
        auto const bounded = mffc( r, refs, root, K );
        REQUIRE( bounded.nodes.count( root ) == 1u );
        REQUIRE( bounded.leaves.size() <= std::max<std::size_t>( K, r.fanins( root ).size() ) );
        for ( auto n : bounded.nodes )
        {
          REQUIRE( std::includes( full.nodes.begin(), full.nodes.end(), bounded.nodes.begin(), bounded.nodes.end() ) );
          if ( n == root )
            continue;
          /* every fanout of a non-root member is inside the cone */
          uint32_t inside = 0;
          for ( auto g : bounded.nodes )
            for ( auto f : r.fanins( g ) )
              inside += f.index() == n;
          REQUIRE( inside == refs[n] );
        }
      }
    } );
  }
}

TEST_CASE( "critical path collection" )
{
  /* two cones: a chain of depth 10 and a chain of depth 7 */
  logic_network net;
  std::vector<signal> x;
  for ( int i = 0; i < 20; ++i )
    x.push_back( net.create_pi() );
  signal s1 = x[0];
  node_set cone1, cone2;
  for ( int i = 1; i <= 10; ++i )
  {
    s1 = net.create_and( s1, x[i] );
    cone1.insert( s1.index() );
  }
  signal s2 = x[11];
  for ( int i = 12; i <= 18; ++i )
  {
    s2 = net.create_and( s2, x[i] );
    cone2.insert( s2.index() );
  }
  net.create_po( s1 );
  net.create_po( !s2 );
  CHECK( compute_levels( net ).depth == 10u );
  CHECK( critical_path_collection( net, 0.8 ) == cone1 );
  CHECK( critical_path_collection( net, 1.0 ) == cone1 );
  node_set all = cone1;
  all.insert( cone2.begin(), cone2.end() );
  CHECK( critical_path_collection( net, 0.0 ) == all );
  CHECK( critical_path_collection( net, 0.7 ) == all );
  CHECK_THROWS( critical_path_collection( net, 1.5 ) );

  std::mt19937_64 rng( 15 );
  for ( int it = 0; it < 30; ++it )
  {
    auto const r = test::random_network( 10, 120, 6, rng );
    auto const live = live_nodes( r );
    node_set reachable;
    r.foreach_gate( [&]( uint32_t g ) {
      if ( live[g] )
        reachable.insert( g );
    } );
    CHECK( critical_path_collection( r, 0.0 ) == reachable );
    node_set prev = reachable;
    for ( double ratio = 0.1; ratio <= 1.0001; ratio += 0.1 )
    {
      auto const cur = critical_path_collection( r, std::min( ratio, 1.0 ) );
      CHECK( std::includes( prev.begin(), prev.end(), cur.begin(), cur.end() ) );
      prev = cur;
    }
  }
}

TEST_CASE( "simulation agrees with per-minterm evaluation" )
{
  std::mt19937_64 rng( 16 );
  for ( int it = 0; it < 30; ++it )
  {
    auto const net = test::random_network( 3u + rng() % 10u, 60, 3, rng, repr_tag::xmg );
    auto const tables = exhaustive_output_tables( net );
    auto const ref = test::output_tables( net );
    for ( uint32_t o = 0; o < net.num_pos(); ++o )
      for ( uint64_t m = 0; m < ref[o].size(); ++m )
        REQUIRE( ( ( tables[o][m / 64] >> ( m % 64 ) ) & 1u ) == ref[o][m] );
  }
}

TEST_CASE( "cleanup and cone copy" )
{
  std::mt19937_64 rng( 17 );
  for ( int it = 0; it < 30; ++it )
  {
    auto const net = test::random_network( 6, 50, 2, rng, repr_tag::xag );
    auto const c = cleanup( net );
    CHECK( c.num_gates() == count_live_gates( net ) );
    CHECK( test::oracle_equivalent( c, net ) );
  }
}
