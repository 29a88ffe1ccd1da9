#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "mch/analysis.hpp"
#include "mch/flows.hpp"
#include "mch/graphmap.hpp"
#include "mch/io.hpp"
#include "mch/strategies.hpp"

namespace mch
{

mch_preset preset_named( std::string_view name )
{
  mch_preset p;
  p.name = std::string( name );
  if ( name == "balanced" )
  {
    p.mch.critical_ratio = 0.8;
    p.mch.mix_target = repr_tag::xmg;
    p.reprs = { repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg };
    p.mode = map_mode::balanced;
  }
  else if ( name == "delay" )
  {
    p.mch.critical_ratio = 0.5;
    p.mch.mix_target = repr_tag::xag;
    p.reprs = { repr_tag::aig, repr_tag::xag };
    p.mode = map_mode::delay;
  }
  else if ( name == "area" )
  {
    p.mch.critical_ratio = 0.8;
    p.mch.mix_target = repr_tag::xmg;
    p.reprs = { repr_tag::aig, repr_tag::xmg };
    p.mode = map_mode::area;
  }
  else
    throw std::invalid_argument( fmt::format( "unknown preset '{}' (balanced, delay, area)", name ) );
  return p;
}

choice_network build_preset( logic_network const& net, mch_preset const& preset, mch_stats* stats )
{
  auto ps = preset.mch;
  ps.mix_target = join( net.tag(), ps.mix_target.value_or( net.tag() ) );
  return build_mch( net, strategy_library::standard( preset.reprs ), ps, stats );
}

std::vector<std::string> known_flows()
{
  return { "lut", "mch-lut", "cell", "mch-delay", "mch-balanced", "mch-area",
           "graphmap-aig", "graphmap-xag", "graphmap-mig", "graphmap-xmg" };
}

flow_result run_flow( std::string_view flow, logic_network const& net, cell_library const& lib )
{
  using clock = std::chrono::steady_clock;
  auto const start = clock::now();
  flow_result r;
  logic_network result;

  auto from_mapping = [&]( mapped_netlist const& m ) {
    r.area = m.area;
    r.delay = m.delay;
    result = m.to_network();
  };

  if ( flow == "lut" )
    from_mapping( map_lut( net, map_params{} ) );
  else if ( flow == "mch-lut" )
    from_mapping( map_lut( build_preset( net, preset_named( "balanced" ) ), map_params{} ) );
  else if ( flow == "cell" )
    from_mapping( map_cells( net, lib, map_params{} ) );
  else if ( flow.starts_with( "mch-" ) )
  {
    auto const preset = preset_named( flow.substr( 4 ) );
    map_params ps;
    ps.mode = preset.mode;
    from_mapping( map_cells( build_preset( net, preset ), lib, ps ) );
  }
  else if ( flow.starts_with( "graphmap-" ) )
  {
    repr_tag target{};
    try
    {
      target = parse_repr( flow.substr( 9 ) );
    }
    catch ( std::exception const& )
    {
      throw std::invalid_argument( fmt::format( "unknown flow '{}'", flow ) );
    }
    result = optimize_iterate( net, target, default_mix( target ) ).network;
    r.area = count_live_gates( result );
    r.delay = compute_levels( result ).depth;
  }
  else
    throw std::invalid_argument( fmt::format( "unknown flow '{}'", flow ) );

  r.seconds = std::chrono::duration<double>( clock::now() - start ).count();
  r.verified = cec( result, net ).result;
  return r;
}

bench_suite load_suite( std::filesystem::path const& dir )
{
  if ( !std::filesystem::is_directory( dir ) )
    throw file_error( fmt::format( "'{}' is not a directory", dir.string() ) );
  std::vector<std::filesystem::path> files;
  for ( auto const& e : std::filesystem::directory_iterator( dir ) )
  {
    auto const ext = e.path().extension();
    if ( e.is_regular_file() && ( ext == ".aig" || ext == ".aag" ) )
      files.push_back( e.path() );
  }
  std::sort( files.begin(), files.end() );
  bench_suite suite;
  for ( auto const& f : files )
    suite.emplace_back( f.stem().string(), read_aiger( f ) );
  return suite;
}

std::vector<bench_row> run_bench( bench_suite const& suite, std::vector<std::string> const& flows,
                                  cell_library const& lib )
{
  std::vector<bench_row> rows;
  for ( auto const& [name, net] : suite )
  {
    for ( auto const& flow : flows )
    {
      bench_row row;
      row.benchmark = name;
      row.flow = flow;
      try
      {
        auto const r = run_flow( flow, net, lib );
        row.area = r.area;
        row.delay = r.delay;
        row.time_s = r.seconds;
        row.verified = std::string( to_string( r.verified ) );
      }
      catch ( std::exception const& e )
      {
        row.verified = fmt::format( "error: {}", e.what() );
      }
      rows.push_back( std::move( row ) );
    }
  }
  return rows;
}

std::vector<bench_row> geomean_rows( std::vector<bench_row> const& rows )
{
  struct acc
  {
    double log_area{ 0.0 }, log_delay{ 0.0 }, log_time{ 0.0 };
    bool zero_area{ false }, zero_delay{ false }, zero_time{ false };
    uint32_t used{ 0 }, total{ 0 }, equivalent{ 0 };
  };
  std::vector<std::string> order;
  std::map<std::string, acc> by_flow;
  auto add_log = []( double v, double& sum, bool& zero ) {
    if ( v <= 0.0 )
      zero = true;
    else
      sum += std::log( v );
  };
  for ( auto const& r : rows )
  {
    if ( !by_flow.count( r.flow ) )
      order.push_back( r.flow );
    auto& a = by_flow[r.flow];
    ++a.total;
    if ( r.verified == to_string( equivalence_verdict::status::equivalent ) )
      ++a.equivalent;
    if ( r.verified.starts_with( "error" ) )
      continue;
    ++a.used;
    add_log( r.area, a.log_area, a.zero_area );
    add_log( r.delay, a.log_delay, a.zero_delay );
    add_log( r.time_s, a.log_time, a.zero_time );
  }
  std::vector<bench_row> out;
  for ( auto const& flow : order )
  {
    auto const& a = by_flow[flow];
    auto mean = [&]( double sum, bool zero ) { return a.used == 0u || zero ? 0.0 : std::exp( sum / a.used ); };
    out.push_back( { "geomean", flow, mean( a.log_area, a.zero_area ), mean( a.log_delay, a.zero_delay ),
                     mean( a.log_time, a.zero_time ), fmt::format( "{}/{}", a.equivalent, a.total ) } );
  }
  return out;
}

std::string bench_csv( std::vector<bench_row> const& rows )
{
  std::string out = "benchmark,flow,area,delay,time_s,verified\n";
  auto quote = []( std::string const& s ) {
    if ( s.find_first_of( ",\"\n" ) == std::string::npos )
      return s;
    std::string q = "\"";
    for ( char c : s )
    {
      if ( c == '"' )
        q += '"';
      q += c;
    }
    return q + "\"";
  };
  auto emit = [&]( bench_row const& r ) {
    out += fmt::format( "{},{},{},{},{},{}\n", quote( r.benchmark ), quote( r.flow ), r.area, r.delay, r.time_s,
                        quote( r.verified ) );
  };
  for ( auto const& r : rows )
    emit( r );
  for ( auto const& r : geomean_rows( rows ) )
    emit( r );
  return out;
}

} // namespace mch
