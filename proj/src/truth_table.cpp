#include "mch/truth_table.hpp"

#include <stdexcept>
#include <string>

namespace mch
{

std::string truth_table::to_hex() const
{
  static constexpr char digits[] = "0123456789abcdef";
  uint32_t const num_digits = num_vars_ <= 2 ? 1u : ( 1u << num_vars_ ) / 4u;
  std::string s = "0x";
  uint64_t const r = raw();
  for ( uint32_t d = num_digits; d-- > 0; )
    s.push_back( digits[( r >> ( 4u * d ) ) & 0xfu] );
  return s;
}

truth_table truth_table::from_hex( std::string_view text, uint32_t num_vars )
{
  if ( num_vars > 6 )
    throw std::invalid_argument( "truth tables support at most 6 variables" );
  if ( text.starts_with( "0x" ) || text.starts_with( "0X" ) )
    text.remove_prefix( 2 );
  if ( text.empty() || text.size() > 16 )
    throw std::invalid_argument( "malformed truth table literal" );
  uint64_t value = 0;
  for ( char c : text )
  {
    uint64_t d;
    if ( c >= '0' && c <= '9' )
      d = static_cast<uint64_t>( c - '0' );
    else if ( c >= 'a' && c <= 'f' )
      d = static_cast<uint64_t>( c - 'a' + 10 );
    else if ( c >= 'A' && c <= 'F' )
      d = static_cast<uint64_t>( c - 'A' + 10 );
    else
      throw std::invalid_argument( "malformed truth table literal" );
    value = ( value << 4 ) | d;
  }
  if ( ( value & ~tt_detail::mask_for( num_vars ) ) != 0u )
    throw std::invalid_argument( "truth table literal has more bits than 2^" + std::to_string( num_vars ) );
  return truth_table( num_vars, value );
}

truth_table shrink_to_support( truth_table const& tt, std::array<uint8_t, 6>& kept )
{
  uint64_t w = tt.word();
  uint32_t k = 0;
  for ( uint32_t i = 0; i < tt.num_vars(); ++i )
  {
    if ( !tt_detail::has_var( w, i ) )
      continue;
    if ( k != i )
      w = tt_detail::swap( w, k, i );
    kept[k++] = static_cast<uint8_t>( i );
  }
  return truth_table( k, w );
}

uint64_t expand_word( uint64_t word, uint32_t from_size, uint8_t const* positions )
{
  for ( uint32_t i = from_size; i-- > 0; )
  {
    if ( positions[i] != i )
      word = tt_detail::swap( word, i, positions[i] );
  }
  return word;
}

} // namespace mch
