#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mch/errors.hpp"
#include "mch/io.hpp"

namespace mch
{

namespace
{

struct aiger_header
{
  bool binary{ false };
  uint32_t max_var{ 0 };
  uint32_t inputs{ 0 };
  uint32_t latches{ 0 };
  uint32_t outputs{ 0 };
  uint32_t ands{ 0 };
};

/* Reads header fields; AIGER 1.9 adds B C J F, which must all be zero here. */
aiger_header parse_header( std::string const& line )
{
  std::istringstream ss( line );
  std::string magic;
  ss >> magic;
  aiger_header h;
  if ( magic == "aag" )
    h.binary = false;
  else if ( magic == "aig" )
    h.binary = true;
  else
    throw parse_error( "line 1: expected 'aag' or 'aig' header" );

  std::vector<uint64_t> fields;
  std::string tok;
  while ( ss >> tok )
  {
    if ( tok.find_first_not_of( "0123456789" ) != std::string::npos )
      throw parse_error( fmt::format( "line 1: malformed header field '{}'", tok ) );
    fields.push_back( std::stoull( tok ) );
  }
  if ( fields.size() < 5u || fields.size() > 9u )
    throw parse_error( "line 1: header needs M I L O A" );
  for ( auto f : fields )
  {
    if ( f > ( UINT32_MAX >> 2 ) )
      throw parse_error( "line 1: header field out of range" );
  }
  h.max_var = static_cast<uint32_t>( fields[0] );
  h.inputs = static_cast<uint32_t>( fields[1] );
  h.latches = static_cast<uint32_t>( fields[2] );
  h.outputs = static_cast<uint32_t>( fields[3] );
  h.ands = static_cast<uint32_t>( fields[4] );
  if ( h.latches != 0u )
    throw unsupported_input( "AIGER latches are not supported (combinational networks only)" );
  for ( std::size_t i = 5; i < fields.size(); ++i )
  {
    if ( fields[i] != 0u )
      throw unsupported_input( "AIGER bad-state, constraint, justice and fairness sections are not supported" );
  }
  if ( static_cast<uint64_t>( h.inputs ) + h.latches + h.ands > h.max_var )
    throw parse_error( "line 1: M is smaller than I + L + A" );
  return h;
}

uint32_t parse_literal( std::string const& tok, uint32_t line, uint32_t max_var )
{
  if ( tok.empty() || tok.find_first_not_of( "0123456789" ) != std::string::npos )
    throw parse_error( fmt::format( "line {}: expected a literal, got '{}'", line, tok ) );
  auto const v = std::stoull( tok );
  if ( v > 2ull * max_var + 1u )
    throw parse_error( fmt::format( "line {}: literal {} exceeds 2M+1", line, v ) );
  return static_cast<uint32_t>( v );
}

std::vector<uint32_t> read_literal_line( std::istream& is, uint32_t& line, uint32_t count, uint32_t max_var )
{
  std::string text;
  ++line;
  if ( !std::getline( is, text ) )
    throw parse_error( fmt::format( "line {}: unexpected end of file", line ) );
  std::istringstream ss( text );
  std::vector<uint32_t> lits;
  std::string tok;
  while ( ss >> tok )
    lits.push_back( parse_literal( tok, line, max_var ) );
  if ( lits.size() != count )
    throw parse_error( fmt::format( "line {}: expected {} literal(s), got {}", line, count, lits.size() ) );
  return lits;
}

struct and_def
{
  uint32_t rhs0{ 0 };
  uint32_t rhs1{ 0 };
  bool defined{ false };
};

logic_network read_ascii( std::istream& is, aiger_header const& h )
{
  uint32_t line = 1;
  std::vector<int8_t> var_kind( h.max_var + 1u, 0 ); /* 0 undefined, 1 input, 2 and */
  std::vector<uint32_t> input_vars;
  for ( uint32_t i = 0; i < h.inputs; ++i )
  {
    auto const lit = read_literal_line( is, line, 1, h.max_var )[0];
    if ( lit < 2u || ( lit & 1u ) )
      throw parse_error( fmt::format( "line {}: input literal must be even and positive", line ) );
    if ( var_kind[lit >> 1] != 0 )
      throw parse_error( fmt::format( "line {}: variable {} defined twice", line, lit >> 1 ) );
    var_kind[lit >> 1] = 1;
    input_vars.push_back( lit >> 1 );
  }
  std::vector<uint32_t> output_lits;
  for ( uint32_t i = 0; i < h.outputs; ++i )
    output_lits.push_back( read_literal_line( is, line, 1, h.max_var )[0] );

  std::vector<and_def> defs( h.max_var + 1u );
  for ( uint32_t i = 0; i < h.ands; ++i )
  {
    auto const lits = read_literal_line( is, line, 3, h.max_var );
    if ( lits[0] < 2u || ( lits[0] & 1u ) )
      throw parse_error( fmt::format( "line {}: AND output literal must be even and positive", line ) );
    auto const v = lits[0] >> 1;
    if ( var_kind[v] != 0 )
      throw parse_error( fmt::format( "line {}: variable {} defined twice", line, v ) );
    var_kind[v] = 2;
    defs[v] = { lits[1], lits[2], true };
  }

  logic_network net( repr_tag::aig );
  std::vector<signal> value( h.max_var + 1u );
  std::vector<uint8_t> state( h.max_var + 1u, 0u ); /* 0 open, 1 on stack, 2 done */
  state[0] = 2u;
  for ( auto v : input_vars )
  {
    value[v] = net.create_pi();
    state[v] = 2u;
  }

  /* ANDs may appear in any order in ASCII files; resolve them depth-first. */
  auto resolve = [&]( uint32_t root ) {
    std::vector<uint32_t> stack{ root };
    while ( !stack.empty() )
    {
      auto const v = stack.back();
      if ( state[v] == 2u )
      {
        stack.pop_back();
        continue;
      }
      if ( var_kind[v] != 2 )
        throw parse_error( fmt::format( "variable {} is used but never defined", v ) );
      auto const& d = defs[v];
      if ( state[v] == 0u )
      {
        state[v] = 1u;
        for ( auto lit : { d.rhs0, d.rhs1 } )
        {
          auto const u = lit >> 1;
          if ( state[u] == 1u )
            throw parse_error( fmt::format( "combinational cycle through variable {}", u ) );
          if ( state[u] == 0u )
            stack.push_back( u );
        }
        continue;
      }
      auto const a = value[d.rhs0 >> 1] ^ ( ( d.rhs0 & 1u ) != 0u );
      auto const b = value[d.rhs1 >> 1] ^ ( ( d.rhs1 & 1u ) != 0u );
      value[v] = net.create_and( a, b );
      state[v] = 2u;
      stack.pop_back();
    }
  };
  for ( uint32_t v = 1; v <= h.max_var; ++v )
  {
    if ( var_kind[v] == 2 )
      resolve( v );
  }
  for ( auto lit : output_lits )
  {
    auto const v = lit >> 1;
    if ( v != 0u && var_kind[v] == 0 )
      throw parse_error( fmt::format( "output uses undefined variable {}", v ) );
    net.create_po( value[v] ^ ( ( lit & 1u ) != 0u ) );
  }
  return net;
}

uint32_t read_varint( std::istream& is )
{
  uint64_t x = 0;
  uint32_t shift = 0;
  while ( true )
  {
    auto const pos = static_cast<long long>( is.tellg() );
    int const c = is.get();
    if ( c == EOF )
      throw parse_error( fmt::format( "byte {}: unexpected end of binary AND section", pos ) );
    x |= static_cast<uint64_t>( c & 0x7f ) << shift;
    if ( ( c & 0x80 ) == 0 )
      break;
    shift += 7;
    if ( shift > 35 )
      throw parse_error( fmt::format( "byte {}: delta encoding too long", pos ) );
  }
  if ( x > UINT32_MAX )
    throw parse_error( "delta out of range" );
  return static_cast<uint32_t>( x );
}

logic_network read_binary( std::istream& is, aiger_header const& h )
{
  if ( h.max_var != h.inputs + h.ands )
    throw parse_error( "line 1: binary AIGER requires M = I + A" );
  uint32_t line = 1;
  std::vector<uint32_t> output_lits;
  for ( uint32_t i = 0; i < h.outputs; ++i )
    output_lits.push_back( read_literal_line( is, line, 1, h.max_var )[0] );

  logic_network net( repr_tag::aig );
  std::vector<signal> value( h.max_var + 1u );
  for ( uint32_t i = 1; i <= h.inputs; ++i )
    value[i] = net.create_pi();
  for ( uint32_t i = 0; i < h.ands; ++i )
  {
    auto const v = h.inputs + 1u + i;
    auto const lhs = 2u * v;
    auto const pos = static_cast<long long>( is.tellg() );
    auto const d0 = read_varint( is );
    auto const d1 = read_varint( is );
    if ( d0 == 0u || d0 > lhs || d1 > lhs - d0 )
      throw parse_error( fmt::format( "byte {}: invalid deltas for AND variable {}", pos, v ) );
    auto const r0 = lhs - d0;
    auto const r1 = r0 - d1;
    value[v] = net.create_and( value[r0 >> 1] ^ ( ( r0 & 1u ) != 0u ), value[r1 >> 1] ^ ( ( r1 & 1u ) != 0u ) );
  }
  for ( auto lit : output_lits )
    net.create_po( value[lit >> 1] ^ ( ( lit & 1u ) != 0u ) );
  return net;
}

void write_varint( std::ostream& os, uint32_t x )
{
  while ( x >= 0x80 )
  {
    os.put( static_cast<char>( ( x & 0x7f ) | 0x80 ) );
    x >>= 7;
  }
  os.put( static_cast<char>( x ) );
}

/* AIG with PIs first and ANDs in topological order, no dangling nodes. */
logic_network as_clean_aig( logic_network const& net )
{
  logic_network aig( repr_tag::aig );
  std::vector<signal> pis;
  for ( uint32_t i = 0; i < net.num_pis(); ++i )
    pis.push_back( aig.create_pi() );
  for ( auto s : append_network( net, aig, pis ) )
    aig.create_po( s );
  return cleanup( aig );
}

} // namespace

logic_network read_aiger( std::istream& is )
{
  std::string header;
  if ( !std::getline( is, header ) )
    throw parse_error( "line 1: empty input" );
  auto const h = parse_header( header );
  return h.binary ? read_binary( is, h ) : read_ascii( is, h );
}

logic_network read_aiger( std::filesystem::path const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw file_error( fmt::format( "cannot open '{}'", path.string() ) );
  return read_aiger( in );
}

void write_aiger( logic_network const& net, std::ostream& os, aiger_format format )
{
  auto const aig = as_clean_aig( net );
  /* cleanup places the PIs right after the constant, so node index equals AIGER variable. */
  auto const num_ands = aig.size() - 1u - aig.num_pis();
  os << ( format == aiger_format::ascii ? "aag " : "aig " ) << ( aig.size() - 1u ) << ' ' << aig.num_pis() << " 0 "
     << aig.num_pos() << ' ' << num_ands << '\n';
  if ( format == aiger_format::ascii )
  {
    for ( uint32_t i = 0; i < aig.num_pis(); ++i )
      os << aig.pi_at( i ) * 2u << '\n';
  }
  for ( auto s : aig.outputs() )
    os << s.literal() << '\n';
  aig.foreach_gate( [&]( uint32_t n ) {
    auto f = aig.fanins( n );
    auto r0 = f[0].literal();
    auto r1 = f[1].literal();
    if ( r0 < r1 )
      std::swap( r0, r1 );
    if ( format == aiger_format::ascii )
    {
      os << 2u * n << ' ' << r0 << ' ' << r1 << '\n';
    }
    else
    {
      write_varint( os, 2u * n - r0 );
      write_varint( os, r0 - r1 );
    }
  } );
}

void write_aiger( logic_network const& net, std::filesystem::path const& path )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw file_error( fmt::format( "cannot write '{}'", path.string() ) );
  write_aiger( net, out, path.extension() == ".aag" ? aiger_format::ascii : aiger_format::binary );
}

} // namespace mch
