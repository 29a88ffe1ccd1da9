#include "mch/verify.hpp"

#include <random>

#include <fmt/format.h>

#include "mch/errors.hpp"
#include "mch/simulate.hpp"

namespace mch
{

std::string_view to_string( equivalence_verdict::status s )
{
  switch ( s )
  {
  case equivalence_verdict::status::equivalent:
    return "EQUIVALENT";
  case equivalence_verdict::status::not_equivalent:
    return "NOT_EQUIVALENT";
  case equivalence_verdict::status::unknown:
    return "UNKNOWN";
  }
  return "?";
}

namespace
{

/* compares one pattern block; records the first mismatch */
bool compare_block( logic_network const& a, logic_network const& b, pattern_block const& pb, uint64_t valid_mask,
                    equivalence_verdict& v )
{
  auto const oa = simulate_outputs( a, pb );
  auto const ob = simulate_outputs( b, pb );
  for ( uint32_t o = 0; o < a.num_pos(); ++o )
  {
    for ( uint32_t w = 0; w < pb.words; ++w )
    {
      uint64_t diff = oa[o * pb.words + w] ^ ob[o * pb.words + w];
      if ( w + 1u == pb.words )
        diff &= valid_mask;
      if ( diff == 0u )
        continue;
      uint64_t const p = 64u * w + static_cast<uint64_t>( std::countr_zero( diff ) );
      v.result = equivalence_verdict::status::not_equivalent;
      v.output = o;
      v.counterexample.resize( a.num_pis() );
      for ( uint32_t i = 0; i < a.num_pis(); ++i )
        v.counterexample[i] = pb.bit( i, p );
      return false;
    }
  }
  return true;
}

} // namespace

equivalence_verdict cec( logic_network const& a, logic_network const& b, cec_params const& ps )
{
  if ( a.num_pis() != b.num_pis() || a.num_pos() != b.num_pos() )
    throw interface_error( fmt::format( "cec: interface mismatch ({} PIs / {} POs vs {} PIs / {} POs)", a.num_pis(),
                                        a.num_pos(), b.num_pis(), b.num_pos() ) );
  equivalence_verdict v;
  uint32_t const n = a.num_pis();
  if ( n <= std::min( ps.exhaustive_limit, 16u ) )
  {
    uint64_t const minterms = 1ull << n;
    uint32_t const chunk_words = 64;
    for ( uint64_t first = 0; first < minterms; first += 64u * chunk_words )
    {
      uint64_t const left = minterms - first;
      uint32_t const words = static_cast<uint32_t>( std::min<uint64_t>( chunk_words, ( left + 63u ) / 64u ) );
      auto const pb = exhaustive_patterns( n, first, words );
      uint64_t const tail = left >= 64u * words ? 64u : left % 64u;
      uint64_t const mask = tail == 64u ? ~0ull : ( ( 1ull << tail ) - 1u );
      v.patterns += std::min<uint64_t>( left, 64u * words );
      if ( !compare_block( a, b, pb, mask, v ) )
        return v;
    }
    v.result = equivalence_verdict::status::equivalent;
    return v;
  }

  /* corners first: all zeros, all ones, one-hot and one-cold patterns */
  pattern_block corners;
  corners.num_pis = n;
  corners.words = ( 2u * n + 2u + 63u ) / 64u;
  corners.values.assign( static_cast<std::size_t>( n ) * corners.words, 0u );
  auto set_bit = [&]( uint32_t pi, uint64_t p ) { corners.values[pi * corners.words + p / 64u] |= 1ull << ( p % 64u ); };
  for ( uint32_t i = 0; i < n; ++i )
  {
    set_bit( i, 1u );
    set_bit( i, 2u + i );
    for ( uint32_t j = 0; j < n; ++j )
    {
      if ( j != i )
        set_bit( j, 2u + n + i );
    }
  }
  uint64_t const used = 2u * n + 2u;
  uint64_t const corner_mask = used % 64u == 0u ? ~0ull : ( ( 1ull << ( used % 64u ) ) - 1u );
  v.patterns += used;
  if ( !compare_block( a, b, corners, corner_mask, v ) )
    return v;

  std::mt19937_64 rng( ps.seed );
  uint64_t remaining = ps.budget;
  while ( remaining > 0u )
  {
    uint32_t const words = static_cast<uint32_t>( std::min<uint64_t>( 64u, ( remaining + 63u ) / 64u ) );
    auto const pb = random_patterns( n, words, rng );
    v.patterns += 64u * words;
    if ( !compare_block( a, b, pb, ~0ull, v ) )
      return v;
    remaining -= std::min<uint64_t>( remaining, 64u * words );
  }
  v.result = equivalence_verdict::status::unknown;
  return v;
}

} // namespace mch
