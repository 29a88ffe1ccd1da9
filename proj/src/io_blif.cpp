#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <fmt/format.h>

#include "mch/errors.hpp"
#include "mch/io.hpp"
#include "mch/isop.hpp"

namespace mch
{

namespace
{

std::string value_name( uint32_t node, bool phase, std::unordered_map<uint32_t, uint32_t> const& pi_pos )
{
  if ( node == 0u )
    return phase ? "const1" : "const0";
  if ( auto it = pi_pos.find( node ); it != pi_pos.end() && !phase )
    return fmt::format( "pi{}", it->second );
  return phase ? fmt::format( "n{}_n", node ) : fmt::format( "n{}", node );
}

void write_cover( std::ostream& os, cube_list const& cubes, uint32_t num_vars )
{
  for ( auto const& c : cubes )
  {
    for ( uint32_t v = 0; v < num_vars; ++v )
      os << ( ( c.pos >> v ) & 1u ? '1' : ( ( c.neg >> v ) & 1u ? '0' : '-' ) );
    os << ( num_vars ? " 1\n" : "1\n" );
  }
}

void write_buffer( std::ostream& os, std::string const& from, std::string const& to, bool invert )
{
  os << ".names " << from << ' ' << to << '\n' << ( invert ? "0 1\n" : "1 1\n" );
}

} // namespace

void write_blif( mapped_netlist const& m, std::ostream& os, std::string const& model )
{
  if ( !m.luts )
    throw unsupported_input( "BLIF output is for LUT netlists; write cell netlists as Verilog" );
  std::unordered_map<uint32_t, uint32_t> pi_pos;
  for ( uint32_t i = 0; i < m.pis.size(); ++i )
    pi_pos[m.pis[i]] = i;

  os << ".model " << model << "\n.inputs";
  for ( uint32_t i = 0; i < m.pis.size(); ++i )
    os << " pi" << i;
  os << "\n.outputs";
  for ( uint32_t i = 0; i < m.outputs.size(); ++i )
    os << " po" << i;
  os << '\n';

  bool uses_const0 = false;
  bool uses_const1 = false;
  auto note_const = [&]( uint32_t node, bool phase ) {
    if ( node == 0u )
      ( phase ? uses_const1 : uses_const0 ) = true;
  };
  for ( auto const& g : m.gates )
    for ( auto const& [node, phase] : g.inputs )
      note_const( node, phase );
  if ( uses_const0 )
    os << ".names const0\n";
  if ( uses_const1 )
    os << ".names const1\n1\n";

  std::unordered_map<uint64_t, bool> produced;
  for ( auto const& g : m.gates )
  {
    os << ".names";
    for ( auto const& [node, phase] : g.inputs )
      os << ' ' << value_name( node, phase, pi_pos );
    os << ' ' << value_name( g.root, g.phase, pi_pos ) << '\n';
    write_cover( os, isop( g.function ), g.function.num_vars() );
    produced[( uint64_t( g.root ) << 1 ) | g.phase] = true;
  }

  for ( uint32_t i = 0; i < m.outputs.size(); ++i )
  {
    auto const [node, phase] = m.outputs[i];
    auto const po = fmt::format( "po{}", i );
    if ( node == 0u )
    {
      os << ".names " << po << '\n' << ( phase ? "1\n" : "" );
      continue;
    }
    bool const is_pi = pi_pos.count( node ) != 0u;
    bool const direct = is_pi ? !phase : produced.count( ( uint64_t( node ) << 1 ) | phase ) != 0u;
    /* LUT netlists may read the other phase of a produced value at an output. */
    write_buffer( os, value_name( node, direct ? phase : !phase, pi_pos ), po, !direct );
  }
  os << ".end\n";
}

void write_blif( logic_network const& net, std::ostream& os, std::string const& model )
{
  auto name = [&]( uint32_t n ) -> std::string {
    if ( net.is_constant( n ) )
      return "const0";
    if ( net.is_pi( n ) )
      return fmt::format( "pi{}", net.pi_index( n ) );
    return fmt::format( "n{}", n );
  };

  os << ".model " << model << "\n.inputs";
  for ( uint32_t i = 0; i < net.num_pis(); ++i )
    os << " pi" << i;
  os << "\n.outputs";
  for ( uint32_t i = 0; i < net.num_pos(); ++i )
    os << " po" << i;
  os << "\n.names const0\n";

  std::vector<uint8_t> live( net.size(), 0u );
  for ( auto s : net.outputs() )
    live[s.index()] = 1u;
  for ( uint32_t n = net.size(); n-- > 1u; )
  {
    if ( live[n] && net.is_gate( n ) )
      for ( auto f : net.fanins( n ) )
        live[f.index()] = 1u;
  }

  net.foreach_gate( [&]( uint32_t n ) {
    if ( !live[n] )
      return;
    auto const f = net.fanins( n );
    os << ".names";
    for ( auto s : f )
      os << ' ' << name( s.index() );
    os << ' ' << name( n ) << '\n';
    /* Fanin polarity applied to the positive-literal cover of the gate. */
    auto lit = [&]( std::size_t i, bool positive ) { return ( positive != f[i].complemented() ) ? '1' : '0'; };
    switch ( net.kind( n ) )
    {
    case gate_kind::and2:
      os << lit( 0, true ) << lit( 1, true ) << " 1\n";
      break;
    case gate_kind::xor2:
      os << lit( 0, true ) << lit( 1, false ) << " 1\n" << lit( 0, false ) << lit( 1, true ) << " 1\n";
      break;
    case gate_kind::maj3:
      os << lit( 0, true ) << lit( 1, true ) << "- 1\n"
         << lit( 0, true ) << '-' << lit( 2, true ) << " 1\n"
         << '-' << lit( 1, true ) << lit( 2, true ) << " 1\n";
      break;
    default:
      break;
    }
  } );

  for ( uint32_t i = 0; i < net.num_pos(); ++i )
    write_buffer( os, name( net.po_at( i ).index() ), fmt::format( "po{}", i ), net.po_at( i ).complemented() );
  os << ".end\n";
}

namespace
{

struct names_block
{
  std::vector<std::string> inputs;
  std::vector<std::string> rows;
  uint32_t line{ 0 };
};

class blif_reader
{
public:
  explicit blif_reader( std::istream& is ) : is_( is ) {}

  logic_network run()
  {
    std::vector<std::string> tokens;
    names_block* current = nullptr;
    bool seen_model = false;
    bool ended = false;
    while ( next_statement( tokens ) )
    {
      if ( ended )
        throw parse_error( fmt::format( "line {}: content after .end", line_ ) );
      auto const& head = tokens[0];
      if ( head[0] != '.' )
      {
        if ( current == nullptr )
          throw parse_error( fmt::format( "line {}: cover row outside a .names block", line_ ) );
        add_row( *current, tokens );
        continue;
      }
      current = nullptr;
      if ( head == ".model" )
      {
        if ( seen_model )
          throw unsupported_input( fmt::format( "line {}: only a single BLIF model is supported", line_ ) );
        seen_model = true;
      }
      else if ( head == ".inputs" )
        inputs_.insert( inputs_.end(), tokens.begin() + 1, tokens.end() );
      else if ( head == ".outputs" )
        outputs_.insert( outputs_.end(), tokens.begin() + 1, tokens.end() );
      else if ( head == ".names" )
      {
        if ( tokens.size() < 2u )
          throw parse_error( fmt::format( "line {}: .names needs an output", line_ ) );
        auto const& out = tokens.back();
        if ( defs_.count( out ) )
          throw parse_error( fmt::format( "line {}: signal '{}' defined twice", line_, out ) );
        auto& b = defs_[out];
        b.inputs.assign( tokens.begin() + 1, tokens.end() - 1 );
        b.line = line_;
        current = &b;
      }
      else if ( head == ".end" )
        ended = true;
      else if ( head == ".latch" )
        throw unsupported_input( fmt::format( "line {}: latches are not supported", line_ ) );
      else if ( head == ".subckt" || head == ".gate" || head == ".mlatch" )
        throw unsupported_input( fmt::format( "line {}: {} is not supported", line_, head ) );
      else
        throw parse_error( fmt::format( "line {}: unknown directive {}", line_, head ) );
    }
    return build();
  }

private:
  /* Joins continuation lines and strips comments; returns false at end of input. */
  bool next_statement( std::vector<std::string>& tokens )
  {
    tokens.clear();
    std::string text;
    while ( std::getline( is_, text ) )
    {
      ++line_;
      if ( auto p = text.find( '#' ); p != std::string::npos )
        text.erase( p );
      bool cont = false;
      auto last = text.find_last_not_of( " \t\r" );
      if ( last != std::string::npos && text[last] == '\\' )
      {
        cont = true;
        text.erase( last );
      }
      std::istringstream ss( text );
      std::string tok;
      while ( ss >> tok )
        tokens.push_back( tok );
      if ( !cont && !tokens.empty() )
        return true;
    }
    return !tokens.empty();
  }

  void add_row( names_block& b, std::vector<std::string> const& tokens )
  {
    auto const n = b.inputs.size();
    std::string row;
    if ( n == 0u )
    {
      if ( tokens.size() != 1u || tokens[0].size() != 1u )
        throw parse_error( fmt::format( "line {}: constant cover row must be '0' or '1'", line_ ) );
      row = tokens[0];
    }
    else
    {
      if ( tokens.size() != 2u || tokens[0].size() != n || tokens[1].size() != 1u )
        throw parse_error( fmt::format( "line {}: cover row does not match {} input(s)", line_, n ) );
      if ( tokens[0].find_first_not_of( "01-" ) != std::string::npos )
        throw parse_error( fmt::format( "line {}: cover row uses characters other than 0, 1, -", line_ ) );
      row = tokens[0] + tokens[1];
    }
    if ( row.back() != '0' && row.back() != '1' )
      throw parse_error( fmt::format( "line {}: output column must be 0 or 1", line_ ) );
    if ( !b.rows.empty() && b.rows.front().back() != row.back() )
      throw parse_error( fmt::format( "line {}: mixed on-set and off-set rows", line_ ) );
    b.rows.push_back( row );
  }

  logic_network build()
  {
    logic_network net( repr_tag::aig );
    for ( auto const& in : inputs_ )
    {
      if ( value_.count( in ) )
        throw parse_error( fmt::format( "input '{}' declared twice", in ) );
      if ( defs_.count( in ) )
        throw parse_error( fmt::format( "input '{}' is also driven by .names", in ) );
      value_[in] = net.create_pi();
    }
    for ( auto const& out : outputs_ )
      net.create_po( resolve( net, out ) );
    return net;
  }

  signal resolve( logic_network& net, std::string const& root )
  {
    if ( auto it = value_.find( root ); it != value_.end() )
      return it->second;
    /* Definitions may appear in any order; evaluate them depth-first. */
    std::vector<std::pair<std::string, bool>> stack{ { root, false } };
    while ( !stack.empty() )
    {
      auto [name, expanded] = stack.back();
      if ( value_.count( name ) )
      {
        stack.pop_back();
        continue;
      }
      auto it = defs_.find( name );
      if ( it == defs_.end() )
        throw parse_error( fmt::format( "signal '{}' is used but never defined", name ) );
      auto const& b = it->second;
      if ( !expanded )
      {
        if ( !on_stack_.insert( name ).second )
          throw parse_error( fmt::format( "combinational cycle through '{}'", name ) );
        stack.back().second = true;
        for ( auto const& in : b.inputs )
        {
          if ( value_.count( in ) )
            continue;
          if ( on_stack_.count( in ) )
            throw parse_error( fmt::format( "combinational cycle through '{}'", in ) );
          stack.emplace_back( in, false );
        }
        continue;
      }
      value_[name] = cover_signal( net, b );
      on_stack_.erase( name );
      stack.pop_back();
    }
    return value_.at( root );
  }

  signal cover_signal( logic_network& net, names_block const& b )
  {
    if ( b.rows.empty() )
      return net.get_constant( false );
    bool const onset = b.rows.front().back() == '1';
    signal sum = net.get_constant( false );
    for ( auto const& row : b.rows )
    {
      signal prod = net.get_constant( true );
      for ( std::size_t i = 0; i < b.inputs.size(); ++i )
      {
        if ( row[i] == '-' )
          continue;
        prod = net.create_and( prod, value_.at( b.inputs[i] ) ^ ( row[i] == '0' ) );
      }
      sum = net.create_or( sum, prod );
    }
    return onset ? sum : !sum;
  }

  std::istream& is_;
  uint32_t line_{ 0 };
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::unordered_map<std::string, names_block> defs_;
  std::unordered_map<std::string, signal> value_;
  std::unordered_set<std::string> on_stack_;
};

} // namespace

logic_network read_blif( std::istream& is )
{
  return blif_reader( is ).run();
}

logic_network read_blif( std::filesystem::path const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw file_error( fmt::format( "cannot open '{}'", path.string() ) );
  return read_blif( in );
}

} // namespace mch
