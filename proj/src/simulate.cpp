#include "mch/simulate.hpp"

#include <stdexcept>

namespace mch
{

pattern_block exhaustive_patterns( uint32_t num_pis, uint64_t first_minterm, uint32_t words )
{
  static constexpr uint64_t projections[6] = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                               0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
  pattern_block pb;
  pb.num_pis = num_pis;
  pb.words = words;
  pb.values.assign( static_cast<std::size_t>( num_pis ) * words, 0u );
  for ( uint32_t i = 0; i < num_pis; ++i )
  {
    for ( uint32_t w = 0; w < words; ++w )
    {
      uint64_t const base = first_minterm + 64u * w;
      if ( i < 6 )
        pb.values[i * words + w] = projections[i];
      else
        pb.values[i * words + w] = ( ( base >> i ) & 1u ) ? ~0ull : 0ull;
    }
  }
  return pb;
}

pattern_block random_patterns( uint32_t num_pis, uint32_t words, std::mt19937_64& rng )
{
  pattern_block pb;
  pb.num_pis = num_pis;
  pb.words = words;
  pb.values.resize( static_cast<std::size_t>( num_pis ) * words );
  for ( auto& v : pb.values )
    v = rng();
  return pb;
}

std::vector<uint64_t> simulate_nodes( logic_network const& net, pattern_block const& patterns )
{
  if ( patterns.num_pis != net.num_pis() )
    throw std::invalid_argument( "simulate: pattern block has wrong PI count" );
  uint32_t const W = patterns.words;
  std::vector<uint64_t> values( static_cast<std::size_t>( net.size() ) * W, 0u );
  for ( uint32_t i = 0; i < net.num_pis(); ++i )
  {
    auto const src = patterns.pi( i );
    std::copy( src.begin(), src.end(), values.begin() + static_cast<std::ptrdiff_t>( net.pi_at( i ) ) * W );
  }
  for ( uint32_t n = 1; n < net.size(); ++n )
  {
    if ( !net.is_gate( n ) )
      continue;
    auto const f = net.fanins( n );
    uint64_t* out = values.data() + static_cast<std::size_t>( n ) * W;
    auto in = [&]( uint32_t i, uint32_t w ) {
      uint64_t const v = values[static_cast<std::size_t>( f[i].index() ) * W + w];
      return f[i].complemented() ? ~v : v;
    };
    switch ( net.kind( n ) )
    {
    case gate_kind::and2:
      for ( uint32_t w = 0; w < W; ++w )
        out[w] = in( 0, w ) & in( 1, w );
      break;
    case gate_kind::xor2:
      for ( uint32_t w = 0; w < W; ++w )
        out[w] = in( 0, w ) ^ in( 1, w );
      break;
    case gate_kind::maj3:
      for ( uint32_t w = 0; w < W; ++w )
      {
        uint64_t const a = in( 0, w ), b = in( 1, w ), c = in( 2, w );
        out[w] = ( a & b ) | ( a & c ) | ( b & c );
      }
      break;
    default:
      break;
    }
  }
  return values;
}

std::vector<uint64_t> simulate_outputs( logic_network const& net, pattern_block const& patterns )
{
  auto const values = simulate_nodes( net, patterns );
  uint32_t const W = patterns.words;
  std::vector<uint64_t> out( static_cast<std::size_t>( net.num_pos() ) * W );
  for ( uint32_t o = 0; o < net.num_pos(); ++o )
  {
    auto const s = net.po_at( o );
    for ( uint32_t w = 0; w < W; ++w )
    {
      uint64_t const v = values[static_cast<std::size_t>( s.index() ) * W + w];
      out[o * W + w] = s.complemented() ? ~v : v;
    }
  }
  return out;
}

std::vector<std::vector<uint64_t>> exhaustive_output_tables( logic_network const& net )
{
  if ( net.num_pis() > 16 )
    throw std::invalid_argument( "exhaustive simulation limited to 16 inputs" );
  uint64_t const minterms = 1ull << net.num_pis();
  uint32_t const words = static_cast<uint32_t>( ( minterms + 63u ) / 64u );
  auto const pb = exhaustive_patterns( net.num_pis(), 0u, words );
  auto const out = simulate_outputs( net, pb );
  uint64_t const mask = minterms >= 64u ? ~0ull : ( ( 1ull << minterms ) - 1u );
  std::vector<std::vector<uint64_t>> tables( net.num_pos() );
  for ( uint32_t o = 0; o < net.num_pos(); ++o )
  {
    tables[o].assign( out.begin() + static_cast<std::ptrdiff_t>( o ) * words,
                      out.begin() + static_cast<std::ptrdiff_t>( o + 1 ) * words );
    tables[o].back() &= mask;
  }
  return tables;
}

} // namespace mch
