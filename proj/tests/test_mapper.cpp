#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "mch/choices.hpp"
#include "mch/errors.hpp"
#include "mch/mapper.hpp"
#include "test_util.hpp"

using namespace mch;

namespace
{

/* every k-feasible cut of every gate (brute force, no dominance filtering) */
std::map<uint32_t, std::vector<std::vector<uint32_t>>> all_cuts( logic_network const& net, uint32_t k )
{
  std::map<uint32_t, std::vector<std::vector<uint32_t>>> out;
  net.foreach_gate( [&]( uint32_t n ) {
    for ( auto const& leaves : test::brute_force_cuts( net, n, k ) )
    {
      if ( leaves.size() == 1u && leaves[0] == n )
        continue;
      out[n].push_back( leaves );
    }
  } );
  return out;
}

/* optimal LUT depth by dynamic programming over all cuts */
uint32_t oracle_min_depth( logic_network const& net, uint32_t k )
{
  auto const cuts = all_cuts( net, k );
  std::vector<uint32_t> depth( net.size(), 0u );
  net.foreach_gate( [&]( uint32_t n ) {
    uint32_t best = UINT32_MAX;
    for ( auto const& leaves : cuts.at( n ) )
    {
      uint32_t d = 0;
      for ( auto l : leaves )
        d = std::max( d, depth[l] );
      best = std::min( best, d + 1u );
    }
    depth[n] = best;
  } );
  uint32_t d = 0;
  for ( auto po : net.outputs() )
    d = std::max( d, depth[po.index()] );
  return d;
}

/* minimum LUT count over all covers, by branch and bound */
uint32_t oracle_min_luts( logic_network const& net, uint32_t k )
{
  auto const cuts = all_cuts( net, k );
  std::set<uint32_t> todo;
  for ( auto po : net.outputs() )
  {
    if ( net.is_gate( po.index() ) )
      todo.insert( po.index() );
  }
  uint32_t best = UINT32_MAX;
  std::set<uint32_t> done;
  auto rec = [&]( auto&& self, std::set<uint32_t> pending ) -> void {
    if ( done.size() + ( pending.empty() ? 0u : 1u ) >= best )
      return;
    if ( pending.empty() )
    {
      best = static_cast<uint32_t>( done.size() );
      return;
    }
    auto const n = *pending.rbegin();
    pending.erase( n );
    done.insert( n );
    for ( auto const& leaves : cuts.at( n ) )
    {
      auto next = pending;
      for ( auto l : leaves )
      {
        if ( net.is_gate( l ) && !done.count( l ) )
          next.insert( l );
      }
      self( self, next );
    }
    done.erase( n );
  };
  rec( rec, todo );
  return best;
}

logic_network and_tree( uint32_t inputs )
{
  logic_network net;
  std::vector<signal> layer;
  for ( uint32_t i = 0; i < inputs; ++i )
    layer.push_back( net.create_pi() );
  while ( layer.size() > 1u )
  {
    std::vector<signal> next;
    for ( std::size_t i = 0; i + 1u < layer.size(); i += 2u )
      next.push_back( net.create_and( layer[i], layer[i + 1u] ) );
    if ( layer.size() % 2u )
      next.push_back( layer.back() );
    layer = next;
  }
  net.create_po( layer[0] );
  return net;
}

map_params lut_params( map_mode mode, uint32_t k = 6, uint32_t l = 8 )
{
  map_params ps;
  ps.mode = mode;
  ps.cut_size = k;
  ps.cut_limit = l;
  return ps;
}

/* smallest total area of a cell circuit computing `target` over `vars` inputs (DAG search, both input phases free
 * only through inverters) */
double oracle_min_cell_area( cell_library const& lib, uint16_t target, uint32_t vars, uint32_t max_cells )
{
  std::vector<uint16_t> vals;
  for ( uint32_t i = 0; i < vars; ++i )
    vals.push_back( static_cast<uint16_t>( truth_table::nth_var( 4, i ).raw() ) );
  double best = 1e9;
  auto rec = [&]( auto&& self, double area, uint32_t cells ) -> void {
    if ( area >= best )
      return;
    if ( std::find( vals.begin(), vals.end(), target ) != vals.end() )
    {
      best = area;
      return;
    }
    if ( cells == max_cells )
      return;
    for ( auto const& c : lib.cells() )
    {
      uint32_t const v = c.num_inputs();
      std::vector<uint32_t> pick( v, 0u );
      while ( true )
      {
        uint16_t out = 0;
        for ( uint32_t m = 0; m < 16u; ++m )
        {
          uint32_t idx = 0;
          for ( uint32_t i = 0; i < v; ++i )
            idx |= ( ( vals[pick[i]] >> m ) & 1u ) << i;
          out |= static_cast<uint16_t>( c.function.get_bit( idx ) << m );
        }
        if ( std::find( vals.begin(), vals.end(), out ) == vals.end() )
        {
          vals.push_back( out );
          self( self, area + c.area, cells + 1u );
          vals.pop_back();
        }
        uint32_t i = 0;
        while ( i < v && ++pick[i] == vals.size() )
          pick[i++] = 0u;
        if ( i == v )
          break;
      }
    }
  };
  rec( rec, 0.0, 0u );
  return best;
}

} // namespace

TEST_CASE( "single AND maps to one LUT" )
{
  logic_network net;
  auto const a = net.create_pi(), b = net.create_pi();
  net.create_po( net.create_and( a, b ) );
  auto const m = map_lut( net, lut_params( map_mode::balanced ) );
  CHECK( m.area == 1.0 );
  CHECK( m.delay == 1.0 );
  CHECK( cover_check( m, net ) );
}

TEST_CASE( "8-input AND tree maps to two 6-LUTs on two levels" )
{
  auto const net = and_tree( 8 );
  CHECK( oracle_min_luts( net, 6 ) == 2u );
  CHECK( oracle_min_depth( net, 6 ) == 2u );
  /* the root has 19 cuts of at most six leaves; the five-leaf ones needed here rank last structurally */
  for ( auto mode : { map_mode::delay, map_mode::area, map_mode::balanced } )
  {
    auto const m = map_lut( net, lut_params( mode, 6, 32 ) );
    CHECK( m.area == 2.0 );
    CHECK( m.delay == 2.0 );
    CHECK( cover_check( m, net ) );
  }
}

TEST_CASE( "LUT mapping against exhaustive cover oracles" )
{
  std::mt19937_64 rng( 21 );
  uint32_t optimal_area = 0, cases = 0;
  for ( int iter = 0; iter < 30; ++iter )
  {
    auto const net = test::random_network( 6, 14, 2, rng, iter % 2 ? repr_tag::aig : repr_tag::xag );
    for ( uint32_t k : { 3u, 4u } )
    {
      CAPTURE( iter );
      CAPTURE( k );
      auto const delay = map_lut( net, lut_params( map_mode::delay, k, 1000 ) );
      CHECK( cover_check( delay, net ) );
      /* the delay round is exact when no cut is truncated */
      CHECK( delay.delay == oracle_min_depth( net, k ) );
      auto const area = map_lut( net, lut_params( map_mode::area, k, 1000 ) );
      CHECK( cover_check( area, net ) );
      auto const min_luts = oracle_min_luts( net, k );
      CHECK( area.area >= min_luts );
      optimal_area += area.area == min_luts ? 1u : 0u;
      ++cases;
    }
  }
  MESSAGE( "area mode reached the exact minimum in " << optimal_area << " of " << cases << " cases" );
}

TEST_CASE( "mapping modes and rounds" )
{
  std::mt19937_64 rng( 4 );
  for ( int iter = 0; iter < 20; ++iter )
  {
    auto const net = test::random_network( 10, 100, 4, rng, iter % 3 ? repr_tag::aig : repr_tag::xmg );
    CAPTURE( iter );
    auto const d = map_lut( net, lut_params( map_mode::delay, 4 ) );
    auto const a = map_lut( net, lut_params( map_mode::area, 4 ) );
    auto const b = map_lut( net, lut_params( map_mode::balanced, 4 ) );
    for ( auto const* m : { &d, &a, &b } )
    {
      CHECK( cover_check( *m, net ) );
      for ( std::size_t r = 1; r < m->round_area.size(); ++r )
        CHECK( m->round_area[r] <= m->round_area[r - 1] );
    }
    CHECK( d.delay == d.round_delay.front() );
    CHECK( b.delay == b.round_delay.front() );
    CHECK( d.delay <= a.delay );
    CHECK( a.area <= d.area );
    CHECK( d.round_area.size() == 4u );
    CHECK( b.round_area.size() == 4u );
  }
}

TEST_CASE( "choice cuts" )
{
  SUBCASE( "without classes the cut sets equal plain enumeration" )
  {
    std::mt19937_64 rng( 9 );
    auto const net = test::random_network( 7, 50, 3, rng );
    auto const plain = enumerate_cuts( net, { 4, 6 } );
    auto const propagated = propagate_choice_cuts( choice_network( net ), { 4, 6 } );
    REQUIRE( plain.size() == propagated.size() );
    for ( uint32_t n = 0; n < net.size(); ++n )
    {
      REQUIRE( plain[n].size() == propagated[n].size() );
      for ( std::size_t i = 0; i < plain[n].size(); ++i )
      {
        CHECK( plain[n][i].same_leaves( propagated[n][i] ) );
        CHECK( plain[n][i].function == propagated[n][i].function );
      }
    }
  }
  SUBCASE( "a class of an AND-based and an XOR-based parity merges both structures" )
  {
    logic_network aig( repr_tag::aig );
    std::vector<signal> x;
    for ( int i = 0; i < 4; ++i )
      x.push_back( aig.create_pi() );
    aig.create_po( aig.create_xor( aig.create_xor( x[0], x[1] ), aig.create_xor( x[2], x[3] ) ) );
    auto xag = one_to_one_map( aig, repr_tag::xag );
    choice_network cn( xag );
    auto& arena = cn.network();
    auto const alt = arena.create_xor( arena.create_xor( x[0], x[2] ), arena.create_xor( x[1], x[3] ) );
    auto const rep = aig.po_at( 0 );
    REQUIRE( cn.add_choice( rep.index(), alt ^ rep.complemented() ) == choice_status::added );

    auto const cuts = propagate_choice_cuts( cn, { 4, 64 } );
    /* two-leaf cuts of the representative come from both structures */
    std::set<std::vector<uint32_t>> pairs;
    for ( auto const& c : cuts[rep.index()] )
    {
      if ( c.size == 2u )
        pairs.insert( { c.leaves[0], c.leaves[1] } );
      if ( is_cut( arena, rep.index(), c.leaf_span() ) )
        CHECK( c.function == cut_truth( arena, rep.index(), c.leaf_span() ) );
      else
        CHECK( ( cut_truth( arena, alt.index(), c.leaf_span() ) ^ alt.complemented() ^ rep.complemented() ) ==
               c.function );
    }
    CHECK( pairs.size() >= 2u );
    /* every cut is a cut of the representative or of the member */
    for ( auto const& c : cuts[rep.index()] )
      CHECK( ( is_cut( arena, rep.index(), c.leaf_span() ) || is_cut( arena, alt.index(), c.leaf_span() ) ) );
  }
  SUBCASE( "every cut function agrees with per-minterm evaluation" )
  {
    std::mt19937_64 rng( 23 );
    auto const lib = strategy_library::standard( { repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg } );
    constexpr std::array tags{ repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg };
    for ( int iter = 0; iter < 16; ++iter )
    {
      auto const net = test::random_network( 6 + iter % 4, 60, 3, rng, tags[iter % 4] );
      mch_params mp;
      mp.mix_target = iter % 2 ? repr_tag::xmg : join( net.tag(), repr_tag::xag );
      auto const cn = build_mch( net, lib, mp );
      auto const& arena = cn.network();
      std::vector<std::vector<bool>> values;
      for ( uint64_t m = 0; m < ( 1ull << arena.num_pis() ); ++m )
        values.push_back( test::eval_nodes( arena, m ) );
      for ( auto const& cuts : { propagate_choice_cuts( cn, { 4, 8 } ), cost_ranked_choice_cuts( cn, { 4, 8 } ) } )
      {
        uint32_t wrong = 0;
        for ( uint32_t n = 0; n < arena.size(); ++n )
        {
          for ( auto const& c : cuts[n] )
          {
            for ( auto const& val : values )
            {
              uint32_t index = 0;
              for ( uint32_t i = 0; i < c.size; ++i )
                index |= val[c.leaves[i]] ? 1u << i : 0u;
              if ( c.function.get_bit( index ) != val[n] )
              {
                ++wrong;
                break;
              }
            }
          }
        }
        CAPTURE( iter );
        CHECK( wrong == 0u );
      }
    }
  }
  SUBCASE( "merged sets respect the limit" )
  {
    std::mt19937_64 rng( 13 );
    auto const net = test::random_network( 7, 50, 3, rng );
    mch_params mp;
    mp.mix_target = repr_tag::xmg;
    auto const cn = build_mch( net, strategy_library::standard( { repr_tag::aig, repr_tag::xmg } ), mp );
    for ( uint32_t l : { 1u, 3u, 8u } )
    {
      auto const cuts = propagate_choice_cuts( cn, { 4, l } );
      for ( auto const& set : cuts )
        CHECK( set.size() <= l + 1u );
    }
  }
}

TEST_CASE( "mapping a choice network never loses function" )
{
  std::mt19937_64 rng( 17 );
  auto const lib = strategy_library::standard( { repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg } );
  for ( int iter = 0; iter < 15; ++iter )
  {
    auto const net = test::random_network( 8, 60, 3, rng );
    mch_params mp;
    mp.mix_target = iter % 2 ? repr_tag::xmg : repr_tag::xag;
    auto const cn = build_mch( net, lib, mp );
    for ( auto mode : { map_mode::delay, map_mode::area, map_mode::balanced } )
    {
      CAPTURE( iter );
      auto const m = map_lut( cn, lut_params( mode, 4 ) );
      CHECK( cover_check( m, net ) );
      CHECK( m.legality_violations().empty() );
      auto const c = map_cells( cn, cell_library::generic(), lut_params( mode, 4 ) );
      CHECK( cover_check( c, net ) );
    }
  }
}

TEST_CASE( "cover check rejects broken netlists" )
{
  std::mt19937_64 rng( 2 );
  auto const net = test::random_network( 6, 30, 2, rng );
  auto const m = map_lut( net, lut_params( map_mode::balanced, 4 ) );
  REQUIRE( cover_check( m, net ) );

  SUBCASE( "dangling leaf" )
  {
    auto bad = m;
    bad.gates.back().inputs.back().first = static_cast<uint32_t>( net.size() + 5u );
    CHECK_FALSE( bad.legality_violations().empty() );
    CHECK_FALSE( cover_check( bad, net ) );
  }
  SUBCASE( "gate placed before its input" )
  {
    auto bad = m;
    if ( bad.gates.size() >= 2u )
    {
      std::reverse( bad.gates.begin(), bad.gates.end() );
      bool reads_later = false;
      for ( auto const& [node, phase] : bad.gates.front().inputs )
        reads_later |= net.is_gate( node );
      if ( reads_later )
        CHECK_FALSE( cover_check( bad, net ) );
    }
  }
  SUBCASE( "mutated LUT function" )
  {
    /* flip one bit of a LUT that drives an output and confirm a differing input exists */
    auto bad = m;
    auto const driver = m.outputs[0].first;
    auto it = std::find_if( bad.gates.begin(), bad.gates.end(), [&]( auto const& g ) { return g.root == driver; } );
    REQUIRE( it != bad.gates.end() );
    it->function = truth_table( it->function.num_vars(), it->function.word() ^ 1u );
    CHECK( bad.legality_violations().empty() );
    CHECK_FALSE( cover_check( bad, net ) );
  }
}

TEST_CASE( "cell mapping" )
{
  auto const nand_inv = cell_library::parse( "cell INV 1 0x1 1 1\ncell NAND2 1.5 0x7 2 1 1\n" );

  SUBCASE( "AND2 with a NAND2 and inverter library" )
  {
    logic_network net;
    auto const a = net.create_pi(), b = net.create_pi();
    net.create_po( net.create_and( a, b ) );
    double const best = oracle_min_cell_area( nand_inv, 0x8888, 2, 4 );
    CHECK( best == doctest::Approx( 2.5 ) );
    for ( auto mode : { map_mode::delay, map_mode::area } )
    {
      auto const m = map_cells( net, nand_inv, lut_params( mode, 4 ) );
      CHECK( m.area == doctest::Approx( best ) );
      CHECK( cover_check( m, net ) );
    }
  }
  SUBCASE( "small functions against the cell-circuit oracle" )
  {
    auto const lib = cell_library::parse( "cell INV 1 0x1 1 1\ncell NAND2 1.5 0x7 2 1 1\ncell NOR2 1.5 0x1 2 1 1\n" );
    /* single-gate networks have one cut, so mapping is optimal for these two-input functions */
    for ( uint32_t f = 0; f < 8u; ++f )
    {
      logic_network net;
      auto const a = net.create_pi(), b = net.create_pi();
      net.create_po( net.create_and( a ^ ( ( f & 1u ) != 0u ), b ^ ( ( f & 2u ) != 0u ) ) ^ ( ( f & 4u ) != 0u ) );
      auto const tt = test::output_tables( net )[0];
      uint16_t target = 0;
      for ( uint32_t m = 0; m < 16u; ++m )
        target |= static_cast<uint16_t>( tt[m & 3u] << m );
      CAPTURE( f );
      double const best = oracle_min_cell_area( lib, target, 2, 4 );
      auto const m = map_cells( net, lib, lut_params( map_mode::area, 4 ) );
      CHECK( m.area == doctest::Approx( best ) );
      CHECK( cover_check( m, net ) );
    }
  }
  SUBCASE( "double inversion is a wire" )
  {
    logic_network net;
    auto const a = net.create_pi();
    net.create_po( !!a );
    net.create_po( !a );
    auto const m = map_cells( net, nand_inv );
    CHECK( m.num_gates() == 1u );
    CHECK( m.area == doctest::Approx( 1.0 ) );
    CHECK( cover_check( m, net ) );
  }
  SUBCASE( "gates that reduce to a leaf become wires" )
  {
    logic_network net( repr_tag::mig );
    auto const a = net.create_pi(), b = net.create_pi();
    auto const t = net.create_and( !a, b );
    auto const m = net.create_maj( a, b, !t ); /* equals a */
    net.create_po( m );
    net.create_po( !m );
    net.create_po( net.create_and( m, b ) );
    for ( auto mode : { map_mode::delay, map_mode::area } )
    {
      auto const mc = map_cells( net, nand_inv, lut_params( mode, 4 ) );
      CHECK( cover_check( mc, net ) );
      /* one inverter for !a plus a NAND2 and inverter for a & b */
      CHECK( mc.area == doctest::Approx( 3.5 ) );
    }
  }
  SUBCASE( "missing functions are reported" )
  {
    logic_network net( repr_tag::xag );
    auto const a = net.create_pi(), b = net.create_pi();
    net.create_po( net.create_xor( a, b ) );
    CHECK_THROWS_AS( map_cells( net, nand_inv, lut_params( map_mode::area, 2 ) ), library_incomplete );
    CHECK_THROWS_AS( map_cells( net, cell_library::parse( "cell NAND2 1.5 0x7 2 1 1\n" ) ), library_incomplete );
  }
  SUBCASE( "DELAY and AREA modes on random networks" )
  {
    std::mt19937_64 rng( 31 );
    auto const lib = cell_library::generic();
    for ( int iter = 0; iter < 50; ++iter )
    {
      auto const net = test::random_network( 10, 100, 4, rng, iter % 2 ? repr_tag::aig : repr_tag::xmg );
      auto const d = map_cells( net, lib, lut_params( map_mode::delay, 4 ) );
      auto const a = map_cells( net, lib, lut_params( map_mode::area, 4 ) );
      CAPTURE( iter );
      CHECK( d.delay <= a.delay + 1e-9 );
      CHECK( a.area <= d.area + 1e-9 );
      CHECK( d.delay == doctest::Approx( d.round_delay.front() ) );
      if ( iter < 10 )
      {
        CHECK( cover_check( d, net ) );
        CHECK( cover_check( a, net ) );
      }
    }
  }
}

TEST_CASE( "cell library text format" )
{
  auto const lib = cell_library::generic();
  CHECK( lib.cells()[lib.inverter()].name == "INV" );
  auto const again = cell_library::parse( lib.to_text() );
  REQUIRE( again.cells().size() == lib.cells().size() );
  for ( std::size_t i = 0; i < lib.cells().size(); ++i )
  {
    CHECK( again.cells()[i].name == lib.cells()[i].name );
    CHECK( again.cells()[i].function == lib.cells()[i].function );
    CHECK( again.cells()[i].area == lib.cells()[i].area );
  }
  CHECK_THROWS_AS( cell_library::parse( "gate X 1 0x1 1 1\n" ), parse_error );
  CHECK_THROWS_AS( cell_library::parse( "cell X 1 0x1 1\n" ), parse_error );
  CHECK_THROWS_AS( cell_library::parse( "cell X 1 0xc 2 1 1\n" ), parse_error );
  CHECK_THROWS_AS( cell_library::parse( "cell X 1 0xzz 2 1 1\n" ), parse_error );
  CHECK_THROWS_AS( cell_library::parse( "cell X 1 0x1 7 1 1 1 1 1 1 1\n" ), parse_error );
  CHECK( cell_library::parse( "# only a comment\n\n" ).cells().empty() );
}
