#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mch/analysis.hpp"
#include "mch/cli.hpp"
#include "mch/flows.hpp"
#include "mch/io.hpp"
#include "test_util.hpp"

using namespace mch;

namespace
{

struct run_result
{
  int code;
  std::string out;
  std::string err;
};

run_result run( std::vector<std::string> args )
{
  args.insert( args.begin(), "mch" );
  std::vector<char const*> argv;
  for ( auto const& a : args )
    argv.push_back( a.c_str() );
  std::ostringstream out, err;
  int const code = cli_run( static_cast<int>( argv.size() ), argv.data(), out, err );
  return { code, out.str(), err.str() };
}

/* fresh scratch directory removed on scope exit */
struct scratch_dir
{
  std::filesystem::path path;
  explicit scratch_dir( std::string const& name ) : path( std::filesystem::temp_directory_path() / name )
  {
    std::filesystem::remove_all( path );
    std::filesystem::create_directories( path );
  }
  ~scratch_dir() { std::filesystem::remove_all( path ); }
  std::string operator/( std::string const& f ) const { return ( path / f ).string(); }
};

/* value of `key` in the "key value" lines printed by the CLI */
std::string field( std::string const& text, std::string const& key )
{
  std::istringstream is( text );
  std::string line;
  while ( std::getline( is, line ) )
  {
    if ( line.rfind( key + " ", 0 ) == 0u )
      return line.substr( key.size() + 1u );
  }
  return {};
}

std::vector<std::vector<std::string>> parse_csv( std::string const& text )
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream is( text );
  std::string line;
  while ( std::getline( is, line ) )
  {
    std::vector<std::string> cells;
    std::stringstream ls( line );
    for ( std::string c; std::getline( ls, c, ',' ); )
      cells.push_back( c );
    rows.push_back( cells );
  }
  return rows;
}

logic_network ripple_adder( uint32_t bits, repr_tag tag = repr_tag::aig )
{
  logic_network net( tag );
  std::vector<signal> a, b;
  for ( uint32_t i = 0; i < bits; ++i )
    a.push_back( net.create_pi() );
  for ( uint32_t i = 0; i < bits; ++i )
    b.push_back( net.create_pi() );
  auto carry = net.get_constant( false );
  for ( uint32_t i = 0; i < bits; ++i )
  {
    net.create_po( net.create_xor( net.create_xor( a[i], b[i] ), carry ) );
    carry = net.create_maj( a[i], b[i], carry );
  }
  net.create_po( carry );
  return net;
}

} // namespace

TEST_CASE( "Presets" )
{
  auto const b = preset_named( "balanced" );
  CHECK( b.mch.critical_ratio == doctest::Approx( 0.8 ) );
  CHECK( b.mode == map_mode::balanced );
  CHECK( b.reprs.size() == 4u );
  auto const d = preset_named( "delay" );
  CHECK( d.mch.critical_ratio == doctest::Approx( 0.5 ) );
  CHECK( d.mch.mix_target == repr_tag::xag );
  CHECK( d.mode == map_mode::delay );
  auto const a = preset_named( "area" );
  CHECK( a.mch.mix_target == repr_tag::xmg );
  CHECK( a.mode == map_mode::area );
  CHECK( a.reprs == std::vector<repr_tag>{ repr_tag::aig, repr_tag::xmg } );
  CHECK_THROWS_AS( preset_named( "fast" ), std::invalid_argument );

  auto const net = ripple_adder( 3 );
  /* majority gates widen the delay preset's XAG arena to XMG */
  CHECK( build_preset( ripple_adder( 3, repr_tag::mig ), d ).network().tag() == repr_tag::xmg );
  for ( auto const* name : { "balanced", "delay", "area" } )
  {
    auto const cn = build_preset( net, preset_named( name ) );
    CHECK( cn.network().tag() == join( net.tag(), *preset_named( name ).mch.mix_target ) );
    CHECK( test::oracle_equivalent( cleanup( cn.network() ), net ) );
  }
}

TEST_CASE( "Flows preserve function" )
{
  auto const lib = cell_library::generic();
  std::mt19937_64 rng( 41 );
  for ( uint32_t i = 0; i < 6; ++i )
  {
    auto const net = test::random_network( 4u + i, 20u + 4u * i, 2u, rng, static_cast<repr_tag>( i % 4u ) );
    for ( auto const& flow : known_flows() )
    {
      auto const r = run_flow( flow, net, lib );
      CHECK_MESSAGE( r.verified == equivalence_verdict::status::equivalent, flow );
      CHECK( r.area >= 0.0 );
      CHECK( r.delay >= 0.0 );
      CHECK( r.seconds >= 0.0 );
    }
  }
  CHECK_THROWS_AS( run_flow( "abc", ripple_adder( 2 ), lib ), std::invalid_argument );
  CHECK_THROWS_AS( run_flow( "graphmap-bdd", ripple_adder( 2 ), lib ), std::invalid_argument );
}

TEST_CASE( "Benchmark harness" )
{
  auto const lib = cell_library::generic();

  SUBCASE( "empty suite gives a header-only CSV" )
  {
    scratch_dir dir( "mch_bench_empty" );
    auto const suite = load_suite( dir.path );
    CHECK( suite.empty() );
    CHECK( bench_csv( run_bench( suite, { "lut", "cell" }, lib ) ) == "benchmark,flow,area,delay,time_s,verified\n" );
  }

  SUBCASE( "rows, geomean rows and their recomputation" )
  {
    scratch_dir dir( "mch_bench_three" );
    std::mt19937_64 rng( 43 );
    write_network( ripple_adder( 2 ), dir / "add2.aig" );
    write_network( ripple_adder( 3 ), dir / "add3.aag" );
    write_network( test::random_network( 6, 40, 3, rng ), dir / "rand.aig" );
    { std::ofstream( dir / "notes.txt" ) << "ignored\n"; }

    auto const suite = load_suite( dir.path );
    REQUIRE( suite.size() == 3u );
    CHECK( suite[0].first == "add2" );
    CHECK( suite[2].first == "rand" );

    auto const rows = run_bench( suite, { "lut", "mch-area" }, lib );
    auto const csv = parse_csv( bench_csv( rows ) );
    REQUIRE( csv.size() == 1u + 6u + 2u );
    CHECK( csv[0] == std::vector<std::string>{ "benchmark", "flow", "area", "delay", "time_s", "verified" } );
    for ( std::size_t i = 1; i <= 6u; ++i )
      CHECK( csv[i][5] == "EQUIVALENT" );

    for ( std::size_t g = 0; g < 2u; ++g )
    {
      auto const& row = csv[7u + g];
      CHECK( row[0] == "geomean" );
      CHECK( row[5] == "3/3" );
      double prod_area = 1.0, prod_delay = 1.0;
      for ( std::size_t i = 1; i <= 6u; ++i )
      {
        if ( csv[i][1] != row[1] )
          continue;
        prod_area *= std::stod( csv[i][2] );
        prod_delay *= std::stod( csv[i][3] );
      }
      CHECK( std::stod( row[2] ) == doctest::Approx( std::cbrt( prod_area ) ).epsilon( 1e-9 ) );
      CHECK( std::stod( row[3] ) == doctest::Approx( std::cbrt( prod_delay ) ).epsilon( 1e-9 ) );
    }
  }

  SUBCASE( "failures are recorded and the run continues" )
  {
    bench_suite suite;
    suite.emplace_back( "adder", ripple_adder( 2 ) );
    auto const rows = run_bench( suite, { "nope", "lut" }, lib );
    REQUIRE( rows.size() == 2u );
    CHECK( rows[0].verified.rfind( "error: ", 0 ) == 0u );
    CHECK( rows[1].verified == "EQUIVALENT" );
    auto const g = geomean_rows( rows );
    REQUIRE( g.size() == 2u );
    CHECK( g[0].verified == "0/1" );
    CHECK( g[0].area == 0.0 );
    CHECK( g[1].area == doctest::Approx( rows[1].area ) );
  }
}

TEST_CASE( "Command line" )
{
  scratch_dir dir( "mch_cli" );
  auto const net = ripple_adder( 3 );
  write_network( net, dir / "add.aig" );

  SUBCASE( "stats matches the reader" )
  {
    auto const r = run( { "stats", dir / "add.aig" } );
    CHECK( r.code == exit_ok );
    auto const read = read_network( std::filesystem::path( dir / "add.aig" ) );
    CHECK( field( r.out, "pis" ) == std::to_string( read.num_pis() ) );
    CHECK( field( r.out, "pos" ) == std::to_string( read.num_pos() ) );
    CHECK( field( r.out, "gates" ) == std::to_string( count_live_gates( read ) ) );
    CHECK( field( r.out, "level" ) == std::to_string( compute_levels( read ).depth ) );
  }

  SUBCASE( "cec" )
  {
    CHECK( run( { "cec", dir / "add.aig", dir / "add.aig" } ).code == exit_ok );
    logic_network other = ripple_adder( 3 );
    other.set_po( 0, !other.po_at( 0 ) );
    write_network( other, dir / "bad.aig" );
    auto const r = run( { "cec", dir / "add.aig", dir / "bad.aig" } );
    CHECK( r.code == exit_failure );
    CHECK( r.out.rfind( "NOT_EQUIVALENT", 0 ) == 0u );
    write_network( ripple_adder( 2 ), dir / "small.aig" );
    CHECK( run( { "cec", dir / "add.aig", dir / "small.aig" } ).code == exit_usage );
    write_network( ripple_adder( 9 ), dir / "big.aig" );
    CHECK( run( { "cec", dir / "big.aig", dir / "big.aig" } ).code == exit_unknown );
  }

  SUBCASE( "mch then cell mapping" )
  {
    auto const r1 = run( { "mch", "--preset", "delay", dir / "add.aig", "-o", dir / "add.mch" } );
    REQUIRE( r1.code == exit_ok );
    CHECK( r1.out.rfind( "verified EQUIVALENT", 0 ) == 0u );
    auto const cn = read_choice_network( std::filesystem::path( dir / "add.mch" ) );
    CHECK( cn.num_classes() > 0u );

    auto const lib_path = std::filesystem::path( MCH_DATA_DIR ) / "tiny.lib";
    auto const r3 = run( { "map-cell", "--lib", lib_path.string(), dir / "add.mch", "-o", dir / "add.v" } );
    CHECK( r3.code == exit_ok );
    CHECK( r3.out.rfind( "verified EQUIVALENT", 0 ) == 0u );
    CHECK( !field( r3.out, "area" ).empty() );
    CHECK( std::filesystem::file_size( dir / "add.v" ) > 0u );
  }

  SUBCASE( "map-lut, convert and graphmap" )
  {
    auto const lut = run( { "map-lut", "-k", "4", dir / "add.aig", "-o", dir / "add.blif" } );
    CHECK( lut.code == exit_ok );
    CHECK( run( { "cec", dir / "add.aig", dir / "add.blif" } ).code == exit_ok );

    auto const conv = run( { "convert", dir / "add.aig", "--to", "XMG", "-o", dir / "add_x.mch" } );
    CHECK( conv.code == exit_ok );
    CHECK( field( conv.out, "tag" ) == "xmg" );

    auto const gm = run( { "graphmap", dir / "add.aig", "--target", "xmg", "--iters", "3", "-o", dir / "opt.aig",
                           "--report", dir / "opt.csv" } );
    CHECK( gm.code == exit_ok );
    CHECK( gm.out.find( "iteration,nodes,level,accepted\n0," ) != std::string::npos );
    CHECK( run( { "cec", dir / "add.aig", dir / "opt.aig" } ).code == exit_ok );
    std::ifstream report( dir / "opt.csv" );
    std::string header;
    std::getline( report, header );
    CHECK( header == "iteration,nodes,level,accepted" );
  }

  SUBCASE( "bench" )
  {
    std::filesystem::create_directories( dir / "suite" );
    write_network( net, dir / "suite/add.aig" );
    auto const r = run( { "bench", "--suite", dir / "suite", "--flows", "lut,cell", "--csv", dir / "b.csv" } );
    CHECK( r.code == exit_ok );
    std::ifstream in( dir / "b.csv" );
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK( parse_csv( ss.str() ).size() == 1u + 2u + 2u );
    CHECK( run( { "bench", "--suite", dir / "suite", "--flows", "lut,warp" } ).code == exit_usage );
    CHECK( run( { "bench", "--suite", dir / "missing" } ).code == exit_usage );
  }

  SUBCASE( "usage and input errors" )
  {
    CHECK( run( {} ).code == exit_usage );
    CHECK( run( { "frobnicate" } ).code == exit_usage );
    CHECK( run( { "map-lut", dir / "add.aig", "-k", "9" } ).code == exit_usage );
    CHECK( run( { "mch", dir / "add.aig", "--preset", "quick" } ).code == exit_usage );
    CHECK( run( { "stats", dir / "missing.aig" } ).code == exit_usage );
    { std::ofstream( dir / "broken.aag" ) << "aag 1 1 0 1 0\n2\n"; }
    auto const r = run( { "stats", dir / "broken.aag" } );
    CHECK( r.code == exit_usage );
    CHECK( r.err.find( "line 3" ) != std::string::npos );
    { std::ofstream( dir / "latch.aag" ) << "aag 1 0 1 0 0\n2 3\n"; }
    CHECK( run( { "stats", dir / "latch.aag" } ).code == exit_usage );
    CHECK( run( { "--help" } ).code == exit_ok );
  }
}
