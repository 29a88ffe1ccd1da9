#include "mch/npn.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mch
{

npn_transform npn_transform::identity( uint32_t num_vars )
{
  npn_transform t;
  t.num_vars = static_cast<uint8_t>( num_vars );
  return t;
}

bool npn_transform::is_identity() const
{
  for ( uint32_t i = 0; i < num_vars; ++i )
  {
    if ( perm[i] != i )
      return false;
  }
  return input_neg == 0u && !output_neg;
}

truth_table apply_npn( truth_table const& tt, npn_transform const& t )
{
  uint64_t w = tt.word();
  for ( uint32_t i = 0; i < t.num_vars; ++i )
  {
    if ( ( t.input_neg >> i ) & 1u )
      w = tt_detail::flip( w, i );
  }
  /* move original variable i to position perm[i] */
  std::array<uint8_t, 6> inv{};
  for ( uint32_t i = 0; i < t.num_vars; ++i )
    inv[t.perm[i]] = static_cast<uint8_t>( i );
  std::array<uint8_t, 6> cur{ 0, 1, 2, 3, 4, 5 };
  for ( uint32_t p = 0; p < t.num_vars; ++p )
  {
    uint32_t q = p;
    while ( cur[q] != inv[p] )
      ++q;
    if ( q != p )
    {
      w = tt_detail::swap( w, p, q );
      std::swap( cur[p], cur[q] );
    }
  }
  if ( t.output_neg )
    w = ~w;
  return truth_table( tt.num_vars(), w );
}

npn_transform inverse( npn_transform const& t )
{
  npn_transform u;
  u.num_vars = t.num_vars;
  u.output_neg = t.output_neg;
  for ( uint32_t i = 0; i < t.num_vars; ++i )
  {
    u.perm[t.perm[i]] = static_cast<uint8_t>( i );
    if ( ( t.input_neg >> i ) & 1u )
      u.input_neg |= static_cast<uint8_t>( 1u << t.perm[i] );
  }
  return u;
}

namespace
{

template<typename Fn>
void foreach_transform( uint32_t num_vars, Fn&& fn )
{
  std::array<uint8_t, 6> perm{ 0, 1, 2, 3, 4, 5 };
  do
  {
    for ( uint32_t neg = 0; neg < ( 1u << num_vars ); ++neg )
    {
      for ( uint32_t out = 0; out < 2u; ++out )
      {
        npn_transform t;
        t.num_vars = static_cast<uint8_t>( num_vars );
        t.perm = perm;
        t.input_neg = static_cast<uint8_t>( neg );
        t.output_neg = out != 0u;
        fn( t );
      }
    }
  } while ( std::next_permutation( perm.begin(), perm.begin() + num_vars ) );
}

struct npn4_table
{
  std::vector<uint16_t> canon;
  std::vector<npn_transform> transform;
};

npn4_table const& table4()
{
  static npn4_table const table = [] {
    npn4_table t;
    t.canon.assign( 1u << 16, 0u );
    t.transform.resize( 1u << 16 );
    std::vector<uint8_t> assigned( 1u << 16, 0u );
    for ( uint32_t f = 0; f < ( 1u << 16 ); ++f )
    {
      if ( assigned[f] )
        continue;
      /* every smaller function is already classified, so f is the class minimum */
      truth_table const tf( 4, f );
      foreach_transform( 4, [&]( npn_transform const& tr ) {
        auto const g = static_cast<uint32_t>( apply_npn( tf, tr ).raw() );
        if ( assigned[g] )
          return;
        assigned[g] = 1u;
        t.canon[g] = static_cast<uint16_t>( f );
        t.transform[g] = inverse( tr );
      } );
    }
    return t;
  }();
  return table;
}

npn_result sifting( truth_table const& tt )
{
  uint32_t const v = tt.num_vars();
  npn_result best{ tt, npn_transform::identity( v ), false };
  auto consider = [&]( npn_transform const& t ) {
    auto const g = apply_npn( tt, t );
    if ( g.raw() < best.canon.raw() )
    {
      best.canon = g;
      best.transform = t;
      return true;
    }
    return false;
  };

  for ( bool out : { false, true } )
  {
    npn_transform cur = npn_transform::identity( v );
    cur.output_neg = out;
    consider( cur );
    bool improved = true;
    while ( improved )
    {
      improved = false;
      for ( uint32_t i = 0; i < v; ++i )
      {
        auto t = best.transform;
        t.input_neg ^= static_cast<uint8_t>( 1u << i );
        improved |= consider( t );
      }
      for ( uint32_t p = 0; p + 1 < v; ++p )
      {
        auto t = best.transform;
        /* swap the variables landing on positions p and p + 1 */
        for ( uint32_t i = 0; i < v; ++i )
        {
          if ( t.perm[i] == p )
            t.perm[i] = static_cast<uint8_t>( p + 1 );
          else if ( t.perm[i] == p + 1 )
            t.perm[i] = static_cast<uint8_t>( p );
        }
        improved |= consider( t );
      }
    }
  }
  return best;
}

} // namespace

npn_result npn_canonize_exhaustive( truth_table const& tt )
{
  uint32_t const v = tt.num_vars();
  if ( v > 4 )
    throw std::invalid_argument( "exhaustive NPN canonization limited to 4 variables" );
  npn_result best{ tt, npn_transform::identity( v ), true };
  foreach_transform( v, [&]( npn_transform const& t ) {
    auto const g = apply_npn( tt, t );
    if ( g.raw() < best.canon.raw() )
    {
      best.canon = g;
      best.transform = t;
    }
  } );
  return best;
}

npn_result npn_canonize( truth_table const& tt )
{
  uint32_t const v = tt.num_vars();
  if ( v == 4 )
  {
    auto const& t = table4();
    auto const idx = static_cast<uint32_t>( tt.raw() );
    return { truth_table( 4, t.canon[idx] ), t.transform[idx], true };
  }
  if ( v < 4 )
    return npn_canonize_exhaustive( tt );
  return sifting( tt );
}

} // namespace mch
