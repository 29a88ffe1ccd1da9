#include "mch/isop.hpp"

#include <bit>

namespace mch
{

uint32_t cube::num_literals() const
{
  return static_cast<uint32_t>( std::popcount( static_cast<uint32_t>( pos ) | ( static_cast<uint32_t>( neg ) << 8 ) ) );
}

namespace
{

/* returns the function of the produced cover; L <= U */
uint64_t isop_rec( uint64_t lower, uint64_t upper, uint32_t num_vars, cube_list& out )
{
  if ( lower == 0u )
    return 0u;
  if ( upper == ~0ull )
  {
    out.push_back( {} );
    return ~0ull;
  }

  uint32_t var = num_vars;
  while ( var-- > 0 )
  {
    if ( tt_detail::has_var( lower, var ) || tt_detail::has_var( upper, var ) )
      break;
  }

  uint64_t const l0 = tt_detail::cofactor0( lower, var ), l1 = tt_detail::cofactor1( lower, var );
  uint64_t const u0 = tt_detail::cofactor0( upper, var ), u1 = tt_detail::cofactor1( upper, var );

  auto const begin0 = out.size();
  uint64_t const f0 = isop_rec( l0 & ~u1, u0, var, out );
  for ( auto i = begin0; i < out.size(); ++i )
    out[i].neg |= static_cast<uint8_t>( 1u << var );

  auto const begin1 = out.size();
  uint64_t const f1 = isop_rec( l1 & ~u0, u1, var, out );
  for ( auto i = begin1; i < out.size(); ++i )
    out[i].pos |= static_cast<uint8_t>( 1u << var );

  uint64_t const ls = ( l0 & ~f0 ) | ( l1 & ~f1 );
  uint64_t const fs = isop_rec( ls, u0 & u1, var, out );

  uint64_t const x = tt_detail::projections[var];
  return ( f0 & ~x ) | ( f1 & x ) | fs;
}

} // namespace

cube_list isop( truth_table const& tt )
{
  cube_list cubes;
  isop_rec( tt.word(), tt.word(), tt.num_vars(), cubes );
  return cubes;
}

cube_list isop( truth_table const& on, truth_table const& dc )
{
  cube_list cubes;
  isop_rec( on.word(), on.word() | dc.word(), on.num_vars(), cubes );
  return cubes;
}

truth_table evaluate( cube const& c, uint32_t num_vars )
{
  uint64_t w = ~0ull;
  for ( uint32_t i = 0; i < num_vars; ++i )
  {
    if ( ( c.pos >> i ) & 1u )
      w &= tt_detail::projections[i];
    if ( ( c.neg >> i ) & 1u )
      w &= ~tt_detail::projections[i];
  }
  return truth_table( num_vars, w );
}

truth_table evaluate( cube_list const& cubes, uint32_t num_vars )
{
  auto f = truth_table::constant( num_vars, false );
  for ( auto const& c : cubes )
    f = f | evaluate( c, num_vars );
  return f;
}

uint32_t literal_count( cube_list const& cubes )
{
  uint32_t n = 0;
  for ( auto const& c : cubes )
    n += c.num_literals();
  return n;
}

} // namespace mch
