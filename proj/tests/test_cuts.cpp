#include <doctest.h>

#include <random>

#include "mch/cuts.hpp"
#include "mch/errors.hpp"
#include "mch/simulate.hpp"
#include "test_util.hpp"

using namespace mch;

TEST_CASE( "cuts of small gates" )
{
  logic_network net;
  auto const a = net.create_pi(), b = net.create_pi(), c = net.create_pi();
  auto const g = net.create_and( a, b );
  auto const h = net.create_and( g, c );
  net.create_po( h );
  auto const cuts = enumerate_cuts( net, { 3, 8 } );
  CHECK( test::leaf_sets( cuts[g.index()] ) ==
         std::set<std::vector<uint32_t>>{ { g.index() }, { a.index(), b.index() } } );
  auto const hs = test::leaf_sets( cuts[h.index()] );
  CHECK( hs.count( { a.index(), b.index(), c.index() } ) == 1u );
  CHECK( cuts[h.index()].back().size == 1u );
  CHECK( cuts[h.index()].back().leaves[0] == h.index() );

  std::vector<uint32_t> ab{ a.index(), b.index() };
  CHECK( cut_truth( net, g.index(), ab ).raw() == 0x8u );
  std::vector<uint32_t> only_a{ a.index() };
  CHECK_THROWS_AS( cut_truth( net, g.index(), only_a ), invalid_cut );
  CHECK( is_cut( net, g.index(), std::vector<uint32_t>{ g.index() } ) );

  logic_network mig( repr_tag::mig );
  auto const x = mig.create_pi(), y = mig.create_pi(), z = mig.create_pi();
  auto const m = mig.create_maj( x, y, z );
  std::vector<uint32_t> xyz{ x.index(), y.index(), z.index() };
  CHECK( cut_truth( mig, m.index(), xyz ).raw() == 0xe8u );
}

TEST_CASE( "enumeration equals brute-force minimal cuts" )
{
  std::mt19937_64 rng( 21 );
  for ( int it = 0; it < 40; ++it )
  {
    auto const tag = static_cast<repr_tag>( it % 4 );
    auto const net = test::random_network( 4u + rng() % 4u, 22, 2, rng, tag );
    for ( uint32_t k = 2; k <= 4; ++k )
    {
      auto const cuts = enumerate_cuts( net, { k, unlimited_cuts } );
      for ( uint32_t n = 1; n < net.size(); ++n )
        REQUIRE( test::leaf_sets( cuts[n] ) == test::brute_force_cuts( net, n, k ) );
    }
  }
}

TEST_CASE( "cut functions and invariants" )
{
  std::mt19937_64 rng( 22 );
  for ( int it = 0; it < 40; ++it )
  {
    auto const net = test::random_network( 8, 80, 3, rng, static_cast<repr_tag>( it % 4 ) );
    for ( uint32_t k = 3; k <= 6; ++k )
    {
      auto const cuts = enumerate_cuts( net, { k, 6 } );
      for ( uint32_t n = 1; n < net.size(); ++n )
      {
        auto const& set = cuts[n];
        REQUIRE( set.size() <= 7u );
        for ( std::size_t i = 0; i < set.size(); ++i )
        {
          auto const& c = set[i];
          REQUIRE( c.size <= k );
          REQUIRE( std::is_sorted( c.leaves.begin(), c.leaves.begin() + c.size ) );
          uint64_t sig = 0;
          for ( auto l : c.leaf_span() )
            sig |= leaf_signature( l );
          REQUIRE( sig == c.signature );
          REQUIRE( test::oracle_is_cut( net, n, { c.leaves.begin(), c.leaves.begin() + c.size } ) );
          REQUIRE( cut_truth( net, n, c.leaf_span() ) == c.function );
          for ( std::size_t j = 0; j < set.size(); ++j )
          {
            if ( i != j )
              REQUIRE_FALSE( set[i].dominates( set[j] ) );
          }
        }
      }
    }
  }
}

TEST_CASE( "cut truth agrees with simulation on random cones" )
{
  std::mt19937_64 rng( 23 );
  for ( int it = 0; it < 50; ++it )
  {
    auto const net = test::random_network( 6, 20, 1, rng, repr_tag::xmg );
    auto const root = net.po_at( 0 ).index();
    if ( !net.is_gate( root ) )
      continue;
    std::vector<uint32_t> leaves( net.pis().begin(), net.pis().end() );
    auto const tt = cut_truth( net, root, leaves );
    for ( uint32_t m = 0; m < 64; ++m )
    {
      auto const out = test::eval_outputs( net, m );
      REQUIRE( tt.get_bit( m ) == ( out[0] != net.po_at( 0 ).complemented() ) );
    }
  }
}

TEST_CASE( "raising the limit keeps earlier cuts" )
{
  std::mt19937_64 rng( 24 );
  for ( int it = 0; it < 20; ++it )
  {
    auto const net = test::random_network( 8, 60, 2, rng );
    auto const base = enumerate_cuts( net, { 4, 3 } );
    for ( uint32_t n = 1; n < net.size(); ++n )
    {
      if ( !net.is_gate( n ) )
        continue;
      /* same fanin sets, larger limit */
      auto const fanins = net.fanins( n );
      std::array<std::vector<cut> const*, 3> sets{};
      for ( std::size_t i = 0; i < fanins.size(); ++i )
        sets[i] = &base[fanins[i].index()];
      std::span<std::vector<cut> const* const> fs( sets.data(), fanins.size() );
      auto const small = merge_fanin_cuts( net, n, fs, { 4, 3 } );
      auto const large = merge_fanin_cuts( net, n, fs, { 4, 6 } );
      REQUIRE( small.size() <= large.size() );
      for ( std::size_t i = 0; i + 1 < small.size(); ++i )
        REQUIRE( small[i].same_leaves( large[i] ) );
    }
  }
}
