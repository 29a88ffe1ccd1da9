#include <algorithm>
#include <istream>
#include <sstream>

#include <fmt/format.h>

#include "mch/errors.hpp"
#include "mch/mapper.hpp"

namespace mch
{

namespace
{

constexpr std::string_view generic_library = R"(# generic library: area in units, pin delays in units
cell INV    1.0 0x1    1 1.0
cell NAND2  1.5 0x7    2 1.0 1.0
cell NOR2   1.5 0x1    2 1.2 1.2
cell AND2   2.0 0x8    2 1.4 1.4
cell OR2    2.0 0xe    2 1.5 1.5
cell XOR2   3.0 0x6    2 1.8 1.8
cell XNOR2  3.0 0x9    2 1.8 1.8
cell NAND3  2.0 0x7f   3 1.2 1.2 1.2
cell NOR3   2.0 0x01   3 1.5 1.5 1.5
cell AND3   2.5 0x80   3 1.6 1.6 1.6
cell OR3    2.5 0xfe   3 1.7 1.7 1.7
cell AOI21  2.0 0x07   3 1.3 1.3 1.1
cell OAI21  2.0 0x1f   3 1.3 1.3 1.1
cell AOI22  2.5 0x0777 4 1.4 1.4 1.4 1.4
cell OAI22  2.5 0x111f 4 1.4 1.4 1.4 1.4
cell NAND4  2.5 0x7fff 4 1.4 1.4 1.4 1.4
cell NOR4   2.5 0x0001 4 1.8 1.8 1.8 1.8
cell MUX2   3.0 0xca   3 1.6 1.6 1.8
cell MAJ3   3.0 0xe8   3 1.7 1.7 1.7
cell XOR3   4.5 0x96   3 2.4 2.4 2.4
)";

void validate( cell const& c, std::string const& where )
{
  if ( c.function.num_vars() > 6u )
    throw parse_error( where + ": cells have at most 6 inputs" );
  if ( c.pin_delays.size() != c.function.num_vars() )
    throw parse_error( where + ": pin delay count differs from the input count" );
  if ( c.area < 0.0 )
    throw parse_error( where + ": negative area" );
  for ( auto d : c.pin_delays )
  {
    if ( d < 0.0 )
      throw parse_error( where + ": negative pin delay" );
  }
  bool const constant = c.function.is_const0() || c.function.is_const1();
  if ( !constant && c.function.support() != ( 1u << c.function.num_vars() ) - 1u )
    throw parse_error( where + ": cell " + c.name + " does not depend on all of its inputs" );
}

} // namespace

cell_library::cell_library( std::vector<cell> cells ) : cells_( std::move( cells ) )
{
  for ( auto const& c : cells_ )
    validate( c, "cell " + c.name );
}

cell_library cell_library::parse( std::istream& is )
{
  std::vector<cell> cells;
  std::string line;
  uint32_t line_no = 0;
  while ( std::getline( is, line ) )
  {
    ++line_no;
    if ( auto const hash = line.find( '#' ); hash != std::string::npos )
      line.erase( hash );
    std::istringstream ls( line );
    std::string keyword;
    if ( !( ls >> keyword ) )
      continue;
    auto const where = fmt::format( "line {}", line_no );
    if ( keyword != "cell" )
      throw parse_error( where + ": expected 'cell'" );
    cell c;
    std::string tt;
    uint32_t inputs = 0;
    if ( !( ls >> c.name >> c.area >> tt >> inputs ) )
      throw parse_error( where + ": expected name, area, truth table and input count" );
    if ( inputs > 6u )
      throw parse_error( where + ": cells have at most 6 inputs" );
    try
    {
      c.function = truth_table::from_hex( tt, inputs );
    }
    catch ( std::invalid_argument const& e )
    {
      throw parse_error( where + ": " + e.what() );
    }
    double d;
    while ( ls >> d )
      c.pin_delays.push_back( d );
    if ( !ls.eof() )
      throw parse_error( where + ": malformed pin delay" );
    validate( c, where );
    cells.push_back( std::move( c ) );
  }
  return cell_library( std::move( cells ) );
}

cell_library cell_library::parse( std::string_view text )
{
  std::istringstream is{ std::string( text ) };
  return parse( is );
}

cell_library cell_library::generic()
{
  return parse( generic_library );
}

uint32_t cell_library::inverter() const
{
  uint32_t best = UINT32_MAX;
  for ( uint32_t i = 0; i < cells_.size(); ++i )
  {
    auto const& c = cells_[i];
    if ( c.num_inputs() == 1u && c.function.raw() == 0x1u && ( best == UINT32_MAX || c.area < cells_[best].area ) )
      best = i;
  }
  if ( best == UINT32_MAX )
    throw library_incomplete( "cell library has no inverter" );
  return best;
}

uint32_t cell_library::max_inputs() const
{
  uint32_t m = 0;
  for ( auto const& c : cells_ )
    m = std::max( m, c.num_inputs() );
  return m;
}

std::string cell_library::to_text() const
{
  std::string s;
  for ( auto const& c : cells_ )
  {
    s += fmt::format( "cell {} {} {} {}", c.name, c.area, c.function.to_hex(), c.num_inputs() );
    for ( auto d : c.pin_delays )
      s += fmt::format( " {}", d );
    s += '\n';
  }
  return s;
}

} // namespace mch
