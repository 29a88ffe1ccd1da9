#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mch/analysis.hpp"
#include "mch/cli.hpp"
#include "mch/errors.hpp"
#include "mch/flows.hpp"
#include "mch/graphmap.hpp"
#include "mch/io.hpp"
#include "mch/verify.hpp"

namespace mch
{

namespace
{

/* Errors that map to the usage exit status. */
struct usage_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

void write_text( std::string const& path, auto&& writer )
{
  std::ofstream os( path );
  if ( !os )
    throw usage_error( fmt::format( "cannot write '{}'", path ) );
  writer( os );
}

std::string join_counterexample( std::vector<bool> const& cex )
{
  std::string s;
  for ( bool b : cex )
    s += b ? '1' : '0';
  return s;
}

/* Checks `result` against `reference`; throws on a difference and returns the verdict line otherwise. */
std::string verify_or_throw( logic_network const& result, logic_network const& reference )
{
  auto const v = cec( result, reference );
  if ( v.not_equivalent() )
    throw equivalence_error( fmt::format( "result differs from the input at output {} for inputs {}", v.output,
                                          join_counterexample( v.counterexample ) ) );
  if ( v.equivalent() )
    return "verified EQUIVALENT (exhaustive)";
  return fmt::format( "verified UNKNOWN (no difference in {} simulated patterns, not a proof)", v.patterns );
}

void print_network_stats( std::ostream& out, logic_network const& net )
{
  out << fmt::format( "tag {}\npis {}\npos {}\ngates {}\nlevel {}\n", to_string( net.tag() ), net.num_pis(),
                      net.num_pos(), count_live_gates( net ), compute_levels( net ).depth );
}

/* Base network of a choice network: the cones of its outputs. */
logic_network base_of( choice_network const& cn )
{
  return cleanup( cn.network() );
}

struct options
{
  std::string input;
  std::string input_b;
  std::string output;
  std::string to;
  std::string mix;
  std::string preset;
  /* empty selects the command's default mode */
  std::string mode;
  std::string lib;
  std::string target;
  std::string report;
  std::string suite;
  std::string flows{ "lut,mch-lut" };
  std::string csv;
  uint32_t k{ 4 };
  uint32_t l{ 8 };
  uint32_t mffc_k{ 8 };
  double r{ 0.8 };
  uint32_t lut_k{ 6 };
  uint32_t iters{ 10 };
};

cell_library load_library( std::string const& path )
{
  if ( path.empty() )
    return cell_library::generic();
  return read_cell_library( path );
}

int cmd_stats( options const& o, std::ostream& out )
{
  auto const cn = read_choice_network( o.input );
  print_network_stats( out, base_of( cn ) );
  if ( cn.num_classes() > 0u || cn.base_size() < cn.network().size() )
    out << fmt::format( "arena {}\nclasses {}\nchoices {}\n", cn.network().size(), cn.num_classes(),
                        cn.num_choices() );
  return exit_ok;
}

int cmd_convert( options const& o, std::ostream& out )
{
  auto const net = read_network( o.input );
  auto const target = parse_repr( o.to );
  logic_network res( target );
  std::vector<signal> pis;
  for ( uint32_t i = 0; i < net.num_pis(); ++i )
    pis.push_back( res.create_pi() );
  for ( auto s : append_network( net, res, pis ) )
    res.create_po( s );
  res = cleanup( res );
  out << verify_or_throw( res, net ) << '\n';
  print_network_stats( out, res );
  if ( !o.output.empty() )
    write_network( res, o.output );
  return exit_ok;
}

int cmd_mch( options const& o, std::ostream& out, CLI::App const& app )
{
  auto const net = read_network( o.input );
  auto preset = preset_named( o.preset.empty() ? "balanced" : o.preset );
  if ( app.count( "-k" ) )
    preset.mch.cut_size = o.k;
  if ( app.count( "-l" ) )
    preset.mch.cut_limit = o.l;
  if ( app.count( "-K" ) )
    preset.mch.mffc_leaves = o.mffc_k;
  if ( app.count( "-r" ) )
    preset.mch.critical_ratio = o.r;
  if ( !o.mix.empty() )
  {
    preset.mch.mix_target = parse_repr( o.mix );
    preset.reprs = { repr_tag::aig, *preset.mch.mix_target };
  }
  mch_stats st;
  auto cn = build_preset( net, preset, &st );
  out << verify_or_throw( base_of( cn ), net ) << '\n';
  if ( auto const removed = check_choices( cn ); removed != 0u )
    throw equivalence_error( fmt::format( "{} choice node(s) differ from their representative", removed ) );
  if ( auto const bad = choice_invariant_violations( cn ); !bad.empty() )
    throw std::runtime_error( "inconsistent choice classes: " + bad.front() );
  out << st.report() << '\n';
  out << fmt::format( "arena {}\nclasses {}\nchoices {}\n", cn.network().size(), cn.num_classes(),
                      cn.num_choices() );
  if ( !o.output.empty() )
    write_text( o.output, [&]( std::ostream& os ) { write_choices( cn, os ); } );
  return exit_ok;
}

int cmd_map_lut( options const& o, std::ostream& out )
{
  auto const cn = read_choice_network( o.input );
  map_params ps;
  ps.cut_size = o.lut_k;
  ps.cut_limit = o.l;
  if ( !o.mode.empty() )
    ps.mode = parse_map_mode( o.mode );
  auto const m = map_lut( cn, ps );
  if ( auto const bad = m.legality_violations(); !bad.empty() )
    throw std::runtime_error( "illegal cover: " + bad.front() );
  out << verify_or_throw( m.to_network(), base_of( cn ) ) << '\n';
  out << fmt::format( "luts {}\nlevels {}\nedges {}\n", m.area, m.delay, m.edges );
  if ( !o.output.empty() )
    write_text( o.output, [&]( std::ostream& os ) { write_blif( m, os ); } );
  return exit_ok;
}

int cmd_map_cell( options const& o, std::ostream& out )
{
  auto const cn = read_choice_network( o.input );
  auto const lib = load_library( o.lib );
  map_params ps;
  ps.cut_size = std::min<uint32_t>( o.lut_k, lib.max_inputs() );
  ps.cut_limit = o.l;
  if ( !o.mode.empty() )
    ps.mode = parse_map_mode( o.mode );
  auto const m = map_cells( cn, lib, ps );
  if ( auto const bad = m.legality_violations(); !bad.empty() )
    throw std::runtime_error( "illegal cover: " + bad.front() );
  out << verify_or_throw( m.to_network(), base_of( cn ) ) << '\n';
  out << fmt::format( "cells {}\narea {}\ndelay {}\n", m.num_gates(), m.area, m.delay );
  if ( !o.output.empty() )
    write_text( o.output, [&]( std::ostream& os ) { write_verilog( m, lib, os ); } );
  return exit_ok;
}

int cmd_graphmap( options const& o, std::ostream& out )
{
  auto const net = read_network( o.input );
  auto const target = parse_repr( o.target );
  auto const mix = o.mix.empty() ? default_mix( target ) : parse_repr( o.mix );
  optimize_params ps;
  ps.max_iters = o.iters;
  if ( !o.mode.empty() )
    ps.map.mode = parse_map_mode( o.mode );
  auto const res = optimize_iterate( net, target, mix, ps );
  out << verify_or_throw( res.network, net ) << '\n';
  out << res.report.to_csv();
  out << fmt::format( "stopped {}\n",
                      res.report.reason == loop_termination::fixpoint ? "fixpoint" : "max-iterations" );
  print_network_stats( out, res.network );
  if ( !o.output.empty() )
    write_network( res.network, o.output );
  if ( !o.report.empty() )
    write_text( o.report, [&]( std::ostream& os ) { os << res.report.to_csv(); } );
  return exit_ok;
}

int cmd_cec( options const& o, std::ostream& out )
{
  auto const a = read_network( o.input );
  auto const b = read_network( o.input_b );
  auto const v = cec( a, b );
  out << to_string( v.result );
  if ( v.not_equivalent() )
    out << fmt::format( " output {} inputs {}", v.output, join_counterexample( v.counterexample ) );
  if ( v.result == equivalence_verdict::status::unknown )
    out << fmt::format( " ({} patterns)", v.patterns );
  out << '\n';
  if ( v.equivalent() )
    return exit_ok;
  return v.not_equivalent() ? exit_failure : exit_unknown;
}

int cmd_bench( options const& o, std::ostream& out )
{
  std::vector<std::string> flows;
  std::stringstream ss( o.flows );
  for ( std::string f; std::getline( ss, f, ',' ); )
  {
    if ( f.empty() )
      continue;
    auto const known = known_flows();
    if ( std::find( known.begin(), known.end(), f ) == known.end() )
      throw usage_error( fmt::format( "unknown flow '{}'", f ) );
    flows.push_back( f );
  }
  auto const lib = load_library( o.lib );
  auto const suite = load_suite( o.suite );
  auto const rows = run_bench( suite, flows, lib );
  auto const csv = bench_csv( rows );
  if ( o.csv.empty() )
    out << csv;
  else
    write_text( o.csv, [&]( std::ostream& os ) { os << csv; } );
  bool ok = true;
  for ( auto const& r : rows )
  {
    out << fmt::format( "{} {} {}\n", r.benchmark, r.flow, r.verified );
    ok = ok && !r.verified.starts_with( "error" ) && r.verified != to_string( equivalence_verdict::status::not_equivalent );
  }
  return ok ? exit_ok : exit_failure;
}

} // namespace

int cli_run( int argc, char const* const* argv, std::ostream& out, std::ostream& err )
{
  CLI::App app( "Mixed structural choice synthesis and mapping", "mch" );
  app.require_subcommand( 1 );
  options o;
  auto const repr_check = CLI::IsMember( { "aig", "xag", "mig", "xmg" }, CLI::ignore_case );
  auto const mode_check = CLI::IsMember( { "delay", "area", "balanced" } );

  auto* stats = app.add_subcommand( "stats", "Print interface size, gate count and level" );
  stats->add_option( "input", o.input, "Network (.aig, .aag, .blif, .mch)" )->required();

  auto* convert = app.add_subcommand( "convert", "Re-express a network in another representation" );
  convert->add_option( "input", o.input )->required();
  convert->add_option( "--to", o.to, "Target representation" )->required()->check( repr_check );
  convert->add_option( "-o,--output", o.output, "Output network (format by extension)" );

  auto* mch = app.add_subcommand( "mch", "Build a mixed structural choice network" );
  mch->add_option( "input", o.input )->required();
  mch->add_option( "-k", o.k, "Cut size" )->check( CLI::Range( 2u, 6u ) );
  mch->add_option( "-l", o.l, "Cut limit" )->check( CLI::Range( 1u, 1024u ) );
  mch->add_option( "-K", o.mffc_k, "MFFC leaf bound" )->check( CLI::Range( 1u, 16u ) );
  mch->add_option( "-r", o.r, "Critical path ratio" )->check( CLI::Range( 0.0, 1.0 ) );
  mch->add_option( "--mix", o.mix, "Representation to mix in" )->check( repr_check );
  mch->add_option( "--preset", o.preset, "balanced, delay or area" )
      ->check( CLI::IsMember( { "balanced", "delay", "area" } ) );
  mch->add_option( "-o,--output", o.output, "Choice network (.mch)" );

  auto* map_lut_cmd = app.add_subcommand( "map-lut", "Map to K-input LUTs" );
  map_lut_cmd->add_option( "input", o.input )->required();
  map_lut_cmd->add_option( "-k", o.lut_k, "LUT size" )->check( CLI::Range( 2u, 6u ) );
  map_lut_cmd->add_option( "-l", o.l, "Cut limit" )->check( CLI::Range( 1u, 1024u ) );
  map_lut_cmd->add_option( "--mode", o.mode )->check( mode_check );
  map_lut_cmd->add_option( "-o,--output", o.output, "LUT netlist (.blif)" );

  auto* map_cell_cmd = app.add_subcommand( "map-cell", "Map to library cells" );
  map_cell_cmd->add_option( "input", o.input )->required();
  map_cell_cmd->add_option( "--lib", o.lib, "Cell library (built-in generic library if omitted)" );
  map_cell_cmd->add_option( "-k", o.lut_k, "Cut size" )->check( CLI::Range( 2u, 6u ) );
  map_cell_cmd->add_option( "-l", o.l, "Cut limit" )->check( CLI::Range( 1u, 1024u ) );
  map_cell_cmd->add_option( "--mode", o.mode )->check( mode_check );
  map_cell_cmd->add_option( "-o,--output", o.output, "Gate-level netlist (.v)" );

  auto* graphmap = app.add_subcommand( "graphmap", "Iterated choice construction and graph mapping" );
  graphmap->add_option( "input", o.input )->required();
  graphmap->add_option( "--target", o.target )->required()->check( repr_check );
  graphmap->add_option( "--mix", o.mix )->check( repr_check );
  graphmap->add_option( "--iters", o.iters, "Iteration bound" )->check( CLI::Range( 1u, 1000u ) );
  graphmap->add_option( "--mode", o.mode )->check( mode_check );
  graphmap->add_option( "-o,--output", o.output );
  graphmap->add_option( "--report", o.report, "Iteration report (.csv)" );

  auto* cec_cmd = app.add_subcommand( "cec", "Check two networks for equivalence" );
  cec_cmd->add_option( "a", o.input )->required();
  cec_cmd->add_option( "b", o.input_b )->required();

  auto* bench = app.add_subcommand( "bench", "Run flows over a directory of AIGER files" );
  bench->add_option( "--suite", o.suite )->required();
  bench->add_option( "--flows", o.flows, "Comma-separated flow list" );
  bench->add_option( "--lib", o.lib );
  bench->add_option( "--csv", o.csv );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e, out, err );
  }
  catch ( CLI::ParseError const& e )
  {
    app.exit( e, out, err );
    return exit_usage;
  }

  try
  {
    if ( stats->parsed() )
      return cmd_stats( o, out );
    if ( convert->parsed() )
      return cmd_convert( o, out );
    if ( mch->parsed() )
      return cmd_mch( o, out, *mch );
    if ( map_lut_cmd->parsed() )
      return cmd_map_lut( o, out );
    if ( map_cell_cmd->parsed() )
      return cmd_map_cell( o, out );
    if ( graphmap->parsed() )
      return cmd_graphmap( o, out );
    if ( cec_cmd->parsed() )
      return cmd_cec( o, out );
    if ( bench->parsed() )
      return cmd_bench( o, out );
  }
  catch ( usage_error const& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( file_error const& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( parse_error const& e )
  {
    err << "parse error: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( unsupported_input const& e )
  {
    err << "unsupported: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( interface_error const& e )
  {
    err << "interface mismatch: " << e.what() << '\n';
    return exit_usage;
  }
  catch ( equivalence_error const& e )
  {
    err << "not equivalent: " << e.what() << '\n';
    return exit_failure;
  }
  catch ( std::exception const& e )
  {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}

} // namespace mch
