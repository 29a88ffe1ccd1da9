#include "mch/network.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

#include "mch/errors.hpp"

namespace mch
{

std::string_view to_string( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::const0:
    return "const0";
  case gate_kind::pi:
    return "pi";
  case gate_kind::and2:
    return "and";
  case gate_kind::xor2:
    return "xor";
  case gate_kind::maj3:
    return "maj";
  }
  return "?";
}

std::string_view to_string( repr_tag tag )
{
  switch ( tag )
  {
  case repr_tag::aig:
    return "aig";
  case repr_tag::xag:
    return "xag";
  case repr_tag::mig:
    return "mig";
  case repr_tag::xmg:
    return "xmg";
  }
  return "?";
}

repr_tag parse_repr( std::string_view name )
{
  std::string lower( name );
  std::transform( lower.begin(), lower.end(), lower.begin(), []( unsigned char c ) { return static_cast<char>( std::tolower( c ) ); } );
  if ( lower == "aig" )
    return repr_tag::aig;
  if ( lower == "xag" )
    return repr_tag::xag;
  if ( lower == "mig" )
    return repr_tag::mig;
  if ( lower == "xmg" )
    return repr_tag::xmg;
  throw std::invalid_argument( "unknown representation '" + std::string( name ) + "'" );
}

uint32_t arity( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::and2:
  case gate_kind::xor2:
    return 2u;
  case gate_kind::maj3:
    return 3u;
  default:
    return 0u;
  }
}

bool permits( repr_tag tag, gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::const0:
  case gate_kind::pi:
  case gate_kind::and2:
    return true;
  case gate_kind::xor2:
    return tag == repr_tag::xag || tag == repr_tag::xmg;
  case gate_kind::maj3:
    return tag == repr_tag::mig || tag == repr_tag::xmg;
  }
  return false;
}

bool embeds_into( repr_tag from, repr_tag to )
{
  for ( auto k : { gate_kind::xor2, gate_kind::maj3 } )
  {
    if ( permits( from, k ) && !permits( to, k ) )
      return false;
  }
  return true;
}

repr_tag join( repr_tag a, repr_tag b )
{
  bool const has_xor = permits( a, gate_kind::xor2 ) || permits( b, gate_kind::xor2 );
  bool const has_maj = permits( a, gate_kind::maj3 ) || permits( b, gate_kind::maj3 );
  if ( has_xor && has_maj )
    return repr_tag::xmg;
  if ( has_xor )
    return repr_tag::xag;
  if ( has_maj )
    return repr_tag::mig;
  return repr_tag::aig;
}

std::size_t logic_network::key_hash::operator()( key const& k ) const noexcept
{
  std::size_t h = static_cast<std::size_t>( k.kind );
  for ( auto l : k.literals )
  {
    h ^= std::hash<uint32_t>{}( l ) + 0x9e3779b97f4a7c15ull + ( h << 6 ) + ( h >> 2 );
  }
  return h;
}

logic_network::logic_network( repr_tag tag ) : tag_( tag )
{
  nodes_.emplace_back();
  pi_position_.push_back( UINT32_MAX );
}

void logic_network::retag( repr_tag tag )
{
  for ( uint32_t n = 1; n < size(); ++n )
  {
    if ( is_gate( n ) && !permits( tag, kind( n ) ) )
    {
      throw unsupported_conversion( "cannot convert " + std::string( to_string( tag_ ) ) + " to " +
                                    std::string( to_string( tag ) ) + ": network contains " +
                                    std::string( to_string( kind( n ) ) ) + " gates" );
    }
  }
  tag_ = tag;
}

signal logic_network::create_pi()
{
  uint32_t const n = size();
  node_record rec;
  rec.kind = gate_kind::pi;
  nodes_.push_back( rec );
  pi_position_.push_back( num_pis() );
  pis_.push_back( n );
  return signal( n, false );
}

uint32_t logic_network::create_po( signal s )
{
  if ( s.index() >= size() )
    throw std::invalid_argument( "output refers to a missing node" );
  outputs_.push_back( s );
  return num_pos() - 1u;
}

void logic_network::set_po( uint32_t index, signal s )
{
  if ( s.index() >= size() )
    throw std::invalid_argument( "output refers to a missing node" );
  outputs_.at( index ) = s;
}

logic_network::normalized logic_network::normalize( gate_kind kind, std::span<const signal> fanins ) const
{
  normalized norm;
  auto trivial = [&norm]( signal s ) {
    norm.trivial = true;
    norm.result = s;
    return norm;
  };

  switch ( kind )
  {
  case gate_kind::and2:
  {
    signal a = fanins[0], b = fanins[1];
    if ( b < a )
      std::swap( a, b );
    if ( a == b )
      return trivial( a );
    if ( a == !b )
      return trivial( get_constant( false ) );
    if ( a.index() == 0 )
      return trivial( a.complemented() ? b : get_constant( false ) );
    norm.kind = gate_kind::and2;
    norm.fanins = { a, b, signal{} };
    return norm;
  }
  case gate_kind::xor2:
  {
    bool const c = fanins[0].complemented() != fanins[1].complemented();
    signal a = fanins[0].regular(), b = fanins[1].regular();
    if ( b < a )
      std::swap( a, b );
    if ( a == b )
      return trivial( get_constant( c ) );
    if ( a.index() == 0 )
      return trivial( b ^ c );
    norm.kind = gate_kind::xor2;
    norm.fanins = { a, b, signal{} };
    norm.complement_output = c;
    return norm;
  }
  case gate_kind::maj3:
  {
    std::array<signal, 3> s{ fanins[0], fanins[1], fanins[2] };
    std::sort( s.begin(), s.end() );
    if ( s[0] == s[1] )
      return trivial( s[0] );
    if ( s[1] == s[2] )
      return trivial( s[1] );
    if ( s[0] == !s[1] )
      return trivial( s[2] );
    if ( s[1] == !s[2] )
      return trivial( s[0] );
    if ( s[0].index() == 0 )
    {
      if ( !s[0].complemented() )
      {
        std::array<signal, 2> const f{ s[1], s[2] };
        return normalize( gate_kind::and2, f );
      }
      std::array<signal, 2> const f{ !s[1], !s[2] };
      auto inner = normalize( gate_kind::and2, f );
      if ( inner.trivial )
        inner.result = !inner.result;
      else
        inner.complement_output = !inner.complement_output;
      return inner;
    }
    auto const num_compl = std::count_if( s.begin(), s.end(), []( signal x ) { return x.complemented(); } );
    if ( num_compl >= 2 )
    {
      for ( auto& x : s )
        x = !x;
      std::sort( s.begin(), s.end() );
      norm.complement_output = true;
    }
    norm.kind = gate_kind::maj3;
    norm.fanins = s;
    return norm;
  }
  default:
    throw std::invalid_argument( "strash_add: not a gate kind" );
  }
}

signal logic_network::insert( normalized const& norm )
{
  if ( norm.trivial )
    return norm.result;
  key k{ norm.kind, { norm.fanins[0].literal(), norm.fanins[1].literal(), norm.fanins[2].literal() } };
  if ( auto it = strash_.find( k ); it != strash_.end() )
    return signal( it->second, norm.complement_output );

  uint32_t const n = size();
  node_record rec;
  rec.kind = norm.kind;
  rec.num_fanins = static_cast<uint8_t>( arity( norm.kind ) );
  rec.fanins = norm.fanins;
  nodes_.push_back( rec );
  pi_position_.push_back( UINT32_MAX );
  strash_.emplace( k, n );
  return signal( n, norm.complement_output );
}

signal logic_network::strash_add( gate_kind kind, std::span<const signal> fanins )
{
  uint32_t const ar = arity( kind );
  if ( ar == 0u )
    throw std::invalid_argument( "strash_add: not a gate kind" );
  if ( fanins.size() != ar )
    throw std::invalid_argument( "strash_add: " + std::string( to_string( kind ) ) + " expects " + std::to_string( ar ) +
                                 " fanins, got " + std::to_string( fanins.size() ) );
  if ( !permits( tag_, kind ) )
    throw std::invalid_argument( "strash_add: " + std::string( to_string( tag_ ) ) + " does not permit " +
                                 std::string( to_string( kind ) ) + " gates" );
  for ( auto f : fanins )
  {
    if ( f.index() >= size() )
      throw std::invalid_argument( "strash_add: fanin refers to a missing node" );
  }
  return insert( normalize( kind, fanins ) );
}

std::optional<signal> logic_network::strash_find( gate_kind kind, std::span<const signal> fanins ) const
{
  if ( fanins.size() != arity( kind ) || arity( kind ) == 0u )
    return std::nullopt;
  auto const norm = normalize( kind, fanins );
  if ( norm.trivial )
    return norm.result;
  key k{ norm.kind, { norm.fanins[0].literal(), norm.fanins[1].literal(), norm.fanins[2].literal() } };
  if ( auto it = strash_.find( k ); it != strash_.end() )
    return signal( it->second, norm.complement_output );
  return std::nullopt;
}

signal logic_network::create_and( signal a, signal b )
{
  std::array<signal, 2> const f{ a, b };
  return strash_add( gate_kind::and2, f );
}

signal logic_network::create_xor( signal a, signal b )
{
  if ( permits( tag_, gate_kind::xor2 ) )
  {
    std::array<signal, 2> const f{ a, b };
    return strash_add( gate_kind::xor2, f );
  }
  return create_or( create_and( a, !b ), create_and( !a, b ) );
}

signal logic_network::create_maj( signal a, signal b, signal c )
{
  if ( permits( tag_, gate_kind::maj3 ) )
  {
    std::array<signal, 3> const f{ a, b, c };
    return strash_add( gate_kind::maj3, f );
  }
  return create_or( create_and( a, b ), create_and( c, create_or( a, b ) ) );
}

signal logic_network::create_ite( signal cond, signal then_s, signal else_s )
{
  return create_or( create_and( cond, then_s ), create_and( !cond, else_s ) );
}

logic_network one_to_one_map( logic_network const& net, repr_tag target )
{
  logic_network copy = net;
  copy.retag( target );
  return copy;
}

std::vector<signal> copy_cone( logic_network const& src, std::span<const signal> roots, logic_network& dst,
                               std::span<const signal> pi_map )
{
  if ( pi_map.size() != src.num_pis() )
    throw std::invalid_argument( "copy_cone: PI map size mismatch" );
  uint32_t top = 0;
  for ( auto r : roots )
    top = std::max( top, r.index() );

  std::vector<uint8_t> in_cone( top + 1u, 0u );
  for ( auto r : roots )
    in_cone[r.index()] = 1u;
  for ( uint32_t n = top + 1u; n-- > 1u; )
  {
    if ( in_cone[n] && src.is_gate( n ) )
    {
      for ( auto f : src.fanins( n ) )
        in_cone[f.index()] = 1u;
    }
  }

  std::vector<signal> map( top + 1u );
  map[0] = dst.get_constant( false );
  for ( uint32_t n = 1; n <= top; ++n )
  {
    if ( !in_cone[n] )
      continue;
    if ( src.is_pi( n ) )
    {
      map[n] = pi_map[src.pi_index( n )];
      continue;
    }
    std::array<signal, 3> f{};
    auto const fanins = src.fanins( n );
    for ( std::size_t i = 0; i < fanins.size(); ++i )
      f[i] = map[fanins[i].index()] ^ fanins[i].complemented();
    switch ( src.kind( n ) )
    {
    case gate_kind::and2:
      map[n] = dst.create_and( f[0], f[1] );
      break;
    case gate_kind::xor2:
      map[n] = dst.create_xor( f[0], f[1] );
      break;
    case gate_kind::maj3:
      map[n] = dst.create_maj( f[0], f[1], f[2] );
      break;
    default:
      break;
    }
  }

  std::vector<signal> result;
  result.reserve( roots.size() );
  for ( auto r : roots )
    result.push_back( map[r.index()] ^ r.complemented() );
  return result;
}

std::vector<signal> append_network( logic_network const& src, logic_network& dst, std::span<const signal> pi_map )
{
  return copy_cone( src, src.outputs(), dst, pi_map );
}

logic_network cleanup( logic_network const& net )
{
  logic_network res( net.tag() );
  std::vector<signal> pis;
  for ( uint32_t i = 0; i < net.num_pis(); ++i )
    pis.push_back( res.create_pi() );
  for ( auto s : append_network( net, res, pis ) )
    res.create_po( s );
  return res;
}

} // namespace mch
