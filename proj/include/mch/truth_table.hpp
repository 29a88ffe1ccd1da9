/*!
  \file truth_table.hpp
  \brief Truth tables over at most six variables in a single 64-bit word
*/

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace mch
{

namespace tt_detail
{
inline constexpr std::array<uint64_t, 6> projections = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull,
                                                         0xf0f0f0f0f0f0f0f0ull, 0xff00ff00ff00ff00ull,
                                                         0xffff0000ffff0000ull, 0xffffffff00000000ull };

inline constexpr uint64_t mask_for( uint32_t num_vars )
{
  return num_vars >= 6 ? ~0ull : ( ( 1ull << ( 1u << num_vars ) ) - 1u );
}

/* replicate the low 2^v bits across the word */
inline constexpr uint64_t replicate( uint64_t bits, uint32_t num_vars )
{
  bits &= mask_for( num_vars );
  for ( uint32_t v = num_vars; v < 6; ++v )
    bits |= bits << ( 1u << v );
  return bits;
}

inline constexpr uint64_t cofactor0( uint64_t t, uint32_t var )
{
  uint64_t const m = ~projections[var];
  return ( t & m ) | ( ( t & m ) << ( 1u << var ) );
}

inline constexpr uint64_t cofactor1( uint64_t t, uint32_t var )
{
  uint64_t const m = projections[var];
  return ( t & m ) | ( ( t & m ) >> ( 1u << var ) );
}

inline constexpr uint64_t flip( uint64_t t, uint32_t var )
{
  uint32_t const s = 1u << var;
  return ( ( t & projections[var] ) >> s ) | ( ( t & ~projections[var] ) << s );
}

inline constexpr uint64_t swap( uint64_t t, uint32_t i, uint32_t j )
{
  if ( i == j )
    return t;
  if ( i > j )
  {
    auto const k = i;
    i = j;
    j = k;
  }
  uint32_t const shift = ( 1u << j ) - ( 1u << i );
  uint64_t const mask = projections[i] & ~projections[j];
  return ( t & ~( mask | ( mask << shift ) ) ) | ( ( t & mask ) << shift ) | ( ( t >> shift ) & mask );
}

inline constexpr bool has_var( uint64_t t, uint32_t var )
{
  return cofactor0( t, var ) != cofactor1( t, var );
}
} // namespace tt_detail

/*! \brief Boolean function of `num_vars` <= 6 variables.
 *
 * Bit m holds f(m), variable i being bit i of the minterm index. For fewer
 * than six variables the 2^v-bit pattern is replicated over the word, so
 * the word never depends on variables at or beyond `num_vars`.
 */
class truth_table
{
public:
  constexpr truth_table() = default;
  constexpr truth_table( uint32_t num_vars, uint64_t bits )
      : bits_( tt_detail::replicate( bits, num_vars ) ), num_vars_( static_cast<uint8_t>( num_vars ) )
  {
  }

  static constexpr truth_table constant( uint32_t num_vars, bool value ) { return { num_vars, value ? ~0ull : 0ull }; }
  static constexpr truth_table nth_var( uint32_t num_vars, uint32_t var )
  {
    return { num_vars, tt_detail::projections[var] };
  }

  constexpr uint32_t num_vars() const { return num_vars_; }
  constexpr uint32_t num_bits() const { return 1u << num_vars_; }
  /*! \brief Whole replicated word. */
  constexpr uint64_t word() const { return bits_; }
  /*! \brief The significant 2^v bits. */
  constexpr uint64_t raw() const { return bits_ & tt_detail::mask_for( num_vars_ ); }

  constexpr bool get_bit( uint64_t minterm ) const { return ( bits_ >> minterm ) & 1u; }

  constexpr bool is_const0() const { return bits_ == 0u; }
  constexpr bool is_const1() const { return bits_ == ~0ull; }

  constexpr truth_table cofactor0( uint32_t var ) const { return from_word( tt_detail::cofactor0( bits_, var ) ); }
  constexpr truth_table cofactor1( uint32_t var ) const { return from_word( tt_detail::cofactor1( bits_, var ) ); }
  constexpr truth_table flip( uint32_t var ) const { return from_word( tt_detail::flip( bits_, var ) ); }
  constexpr truth_table swap( uint32_t i, uint32_t j ) const { return from_word( tt_detail::swap( bits_, i, j ) ); }
  constexpr bool has_var( uint32_t var ) const { return tt_detail::has_var( bits_, var ); }

  /*! \brief Bit i set iff the function depends on variable i. */
  constexpr uint32_t support() const
  {
    uint32_t s = 0;
    for ( uint32_t i = 0; i < num_vars_; ++i )
    {
      if ( has_var( i ) )
        s |= 1u << i;
    }
    return s;
  }

  constexpr uint32_t count_ones() const { return static_cast<uint32_t>( std::popcount( raw() ) ); }

  /*! \brief Same function viewed over a different variable count (must not drop support). */
  constexpr truth_table extend_to( uint32_t num_vars ) const { return { num_vars, bits_ }; }

  constexpr truth_table operator~() const { return from_word( ~bits_ ); }
  constexpr truth_table operator&( truth_table const& o ) const { return from_word( bits_ & o.bits_ ); }
  constexpr truth_table operator|( truth_table const& o ) const { return from_word( bits_ | o.bits_ ); }
  constexpr truth_table operator^( truth_table const& o ) const { return from_word( bits_ ^ o.bits_ ); }
  constexpr truth_table operator^( bool c ) const { return c ? ~*this : *this; }

  constexpr bool operator==( truth_table const& o ) const { return num_vars_ == o.num_vars_ && bits_ == o.bits_; }
  /*! \brief Lexicographic order on the significant bits. */
  constexpr bool operator<( truth_table const& o ) const
  {
    return num_vars_ != o.num_vars_ ? num_vars_ < o.num_vars_ : raw() < o.raw();
  }

  /*! \brief `0x`-prefixed hexadecimal of the 2^v significant bits (at least one digit). */
  std::string to_hex() const;
  /*! \brief Parses the output of `to_hex` for a declared variable count. Throws on malformed input. */
  static truth_table from_hex( std::string_view text, uint32_t num_vars );

private:
  constexpr truth_table from_word( uint64_t w ) const
  {
    truth_table t;
    t.bits_ = w;
    t.num_vars_ = num_vars_;
    return t;
  }

  uint64_t bits_{ 0 };
  uint8_t num_vars_{ 0 };
};

/*! \brief Drops variables outside the support; `kept[i]` receives the old index of new variable i. */
truth_table shrink_to_support( truth_table const& tt, std::array<uint8_t, 6>& kept );

/*! \brief Moves variable i to `positions[i]`; positions must be strictly increasing with `positions[i] >= i`. */
uint64_t expand_word( uint64_t word, uint32_t from_size, uint8_t const* positions );

} // namespace mch
