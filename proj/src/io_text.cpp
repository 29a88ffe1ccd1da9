#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

#include "mch/errors.hpp"
#include "mch/io.hpp"

namespace mch
{

void write_verilog( mapped_netlist const& m, cell_library const& lib, std::ostream& os, std::string const& module )
{
  if ( m.luts )
    throw unsupported_input( "Verilog output is for cell netlists; write LUT netlists as BLIF" );
  std::unordered_map<uint32_t, uint32_t> pi_pos;
  for ( uint32_t i = 0; i < m.pis.size(); ++i )
    pi_pos[m.pis[i]] = i;
  auto name = [&]( uint32_t node, bool phase ) -> std::string {
    if ( node == 0u )
      return phase ? "1'b1" : "1'b0";
    if ( auto it = pi_pos.find( node ); it != pi_pos.end() && !phase )
      return fmt::format( "pi{}", it->second );
    return phase ? fmt::format( "n{}_n", node ) : fmt::format( "n{}", node );
  };

  os << "module " << module << " (";
  bool first = true;
  auto port = [&]( std::string const& p ) {
    os << ( first ? "" : ", " ) << p;
    first = false;
  };
  for ( uint32_t i = 0; i < m.pis.size(); ++i )
    port( fmt::format( "pi{}", i ) );
  for ( uint32_t i = 0; i < m.outputs.size(); ++i )
    port( fmt::format( "po{}", i ) );
  os << ");\n";
  for ( uint32_t i = 0; i < m.pis.size(); ++i )
    os << "  input pi" << i << ";\n";
  for ( uint32_t i = 0; i < m.outputs.size(); ++i )
    os << "  output po" << i << ";\n";
  for ( auto const& g : m.gates )
    os << "  wire " << name( g.root, g.phase ) << ";\n";

  for ( std::size_t i = 0; i < m.gates.size(); ++i )
  {
    auto const& g = m.gates[i];
    if ( g.cell < 0 || static_cast<std::size_t>( g.cell ) >= lib.cells().size() )
      throw std::invalid_argument( fmt::format( "gate {} refers to no cell of the library", i ) );
    auto const& c = lib.cells()[g.cell];
    os << "  " << c.name << " g" << i << " (";
    for ( std::size_t p = 0; p < g.inputs.size(); ++p )
      os << '.' << static_cast<char>( 'A' + p ) << '(' << name( g.inputs[p].first, g.inputs[p].second ) << "), ";
    os << ".Y(" << name( g.root, g.phase ) << "));\n";
  }
  for ( uint32_t i = 0; i < m.outputs.size(); ++i )
    os << "  assign po" << i << " = " << name( m.outputs[i].first, m.outputs[i].second ) << ";\n";
  os << "endmodule\n";
}

/* Format:
 *
 *     mch 1
 *     tag <aig|xag|mig|xmg>
 *     base <size>
 *     i                       PI node
 *     g <kind> <lit>...       gate node
 *     po <lit>
 *     choice <rep> <member> <phase>
 *
 * Node lines appear in arena order starting at node 1.
 */
void write_choices( choice_network const& cn, std::ostream& os )
{
  auto const& net = cn.network();
  os << "mch 1\ntag " << to_string( net.tag() ) << "\nbase " << cn.base_size() << '\n';
  for ( uint32_t n = 1; n < net.size(); ++n )
  {
    if ( net.is_pi( n ) )
    {
      os << "i\n";
      continue;
    }
    os << "g " << to_string( net.kind( n ) );
    for ( auto f : net.fanins( n ) )
      os << ' ' << f.literal();
    os << '\n';
  }
  for ( auto s : net.outputs() )
    os << "po " << s.literal() << '\n';
  for ( auto rep : cn.representatives_with_choices() )
  {
    for ( auto m = cn.next( rep ); m != choice_network::none; m = cn.next( m ) )
      os << "choice " << rep << ' ' << m << ' ' << ( cn.phase( m ) ? 1 : 0 ) << '\n';
  }
}

choice_network read_choices( std::istream& is )
{
  std::string text;
  uint32_t line = 0;
  auto fail = [&]( std::string const& msg ) { return parse_error( fmt::format( "line {}: {}", line, msg ) ); };
  auto next_line = [&]( std::istringstream& ss ) {
    while ( std::getline( is, text ) )
    {
      ++line;
      if ( auto p = text.find( '#' ); p != std::string::npos )
        text.erase( p );
      if ( text.find_first_not_of( " \t\r" ) == std::string::npos )
        continue;
      ss.clear();
      ss.str( text );
      return true;
    }
    return false;
  };

  std::istringstream ss;
  std::string word;
  if ( !next_line( ss ) || !( ss >> word ) || word != "mch" || !( ss >> word ) || word != "1" )
    throw fail( "expected 'mch 1'" );

  if ( !next_line( ss ) || !( ss >> word ) || word != "tag" || !( ss >> word ) )
    throw fail( "expected 'tag <repr>'" );
  repr_tag tag{};
  try
  {
    tag = parse_repr( word );
  }
  catch ( std::exception const& )
  {
    throw fail( "unknown representation '" + word + "'" );
  }

  uint64_t base = 0;
  if ( !next_line( ss ) || !( ss >> word ) || word != "base" || !( ss >> base ) )
    throw fail( "expected 'base <size>'" );

  logic_network net( tag );
  std::vector<std::tuple<uint32_t, uint32_t, bool, uint32_t>> choices;
  auto read_lit = [&]( std::istringstream& in ) {
    int64_t v = -1;
    if ( !( in >> v ) || v < 0 )
      throw fail( "expected a literal" );
    if ( static_cast<uint64_t>( v ) >= 2ull * net.size() )
      throw fail( fmt::format( "literal {} refers to a node not yet defined", v ) );
    return signal::from_literal( static_cast<uint32_t>( v ) );
  };

  while ( next_line( ss ) )
  {
    ss >> word;
    if ( word == "i" )
    {
      if ( !choices.empty() || net.num_pos() )
        throw fail( "node after outputs or choices" );
      net.create_pi();
    }
    else if ( word == "g" )
    {
      if ( !choices.empty() || net.num_pos() )
        throw fail( "node after outputs or choices" );
      std::string kind_name;
      ss >> kind_name;
      gate_kind kind{};
      if ( kind_name == to_string( gate_kind::and2 ) )
        kind = gate_kind::and2;
      else if ( kind_name == to_string( gate_kind::xor2 ) )
        kind = gate_kind::xor2;
      else if ( kind_name == to_string( gate_kind::maj3 ) )
        kind = gate_kind::maj3;
      else
        throw fail( "unknown gate kind '" + kind_name + "'" );
      std::array<signal, 3> f{};
      for ( uint32_t i = 0; i < arity( kind ); ++i )
        f[i] = read_lit( ss );
      auto const expected = net.size();
      signal s;
      try
      {
        s = net.strash_add( kind, std::span<const signal>( f.data(), arity( kind ) ) );
      }
      catch ( std::invalid_argument const& e )
      {
        throw fail( e.what() );
      }
      auto const stored = net.fanins( s.index() );
      if ( s.index() != expected || s.complemented() || !std::equal( stored.begin(), stored.end(), f.begin() ) )
        throw fail( fmt::format( "gate is not in canonical form (node {} expected)", expected ) );
    }
    else if ( word == "po" )
    {
      if ( !choices.empty() )
        throw fail( "output after choices" );
      net.create_po( read_lit( ss ) );
    }
    else if ( word == "choice" )
    {
      int64_t rep = -1, member = -1, phase = -1;
      if ( !( ss >> rep >> member >> phase ) || rep < 0 || member < 0 || ( phase != 0 && phase != 1 ) ||
           rep >= int64_t( net.size() ) || member >= int64_t( net.size() ) )
        throw fail( "expected 'choice <rep> <member> <0|1>'" );
      choices.emplace_back( static_cast<uint32_t>( rep ), static_cast<uint32_t>( member ), phase == 1, line );
    }
    else
      throw fail( "unknown statement '" + word + "'" );
    if ( ss >> word )
      throw fail( "trailing tokens" );
  }
  if ( base > net.size() )
    throw parse_error( fmt::format( "base size {} exceeds the {} nodes", base, net.size() ) );

  choice_network cn( std::move( net ) );
  cn.set_base_size( static_cast<uint32_t>( base ) );
  for ( auto const& [rep, member, phase, at] : choices )
  {
    auto const status = cn.add_choice( rep, signal( member, phase ), UINT32_MAX );
    if ( status != choice_status::added )
      throw parse_error( fmt::format( "line {}: choice {} of {} refused: {}", at, member, rep, to_string( status ) ) );
  }
  return cn;
}

cell_library read_cell_library( std::filesystem::path const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw file_error( fmt::format( "cannot open '{}'", path.string() ) );
  return cell_library::parse( in );
}

namespace
{

std::string lower_extension( std::filesystem::path const& path )
{
  auto ext = path.extension().string();
  for ( auto& c : ext )
    c = static_cast<char>( std::tolower( static_cast<unsigned char>( c ) ) );
  return ext;
}

} // namespace

choice_network read_choice_network( std::filesystem::path const& path )
{
  auto const ext = lower_extension( path );
  if ( ext == ".mch" )
  {
    std::ifstream in( path );
    if ( !in )
      throw file_error( fmt::format( "cannot open '{}'", path.string() ) );
    return read_choices( in );
  }
  return choice_network( read_network( path ) );
}

logic_network read_network( std::filesystem::path const& path )
{
  auto const ext = lower_extension( path );
  if ( ext == ".aag" || ext == ".aig" )
    return read_aiger( path );
  if ( ext == ".blif" )
    return read_blif( path );
  if ( ext == ".mch" )
  {
    auto cn = read_choice_network( path );
    auto const& arena = cn.network();
    /* The base nodes precede every choice structure, so copying the output cones keeps only the base. */
    return cleanup( arena );
  }
  throw unsupported_input( fmt::format( "unknown network format '{}'", path.extension().string() ) );
}

void write_network( logic_network const& net, std::filesystem::path const& path )
{
  auto const ext = lower_extension( path );
  if ( ext == ".aag" || ext == ".aig" )
  {
    write_aiger( net, path );
    return;
  }
  std::ofstream out( path );
  if ( !out )
    throw file_error( fmt::format( "cannot write '{}'", path.string() ) );
  if ( ext == ".blif" )
    write_blif( net, out );
  else if ( ext == ".mch" )
    write_choices( choice_network( net ), out );
  else
    throw unsupported_input( fmt::format( "unknown network format '{}'", path.extension().string() ) );
}

} // namespace mch
