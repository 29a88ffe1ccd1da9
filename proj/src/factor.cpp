#include "mch/factor.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace mch
{

namespace
{

/* cube as literal mask: bit 2i is x_i, bit 2i+1 is !x_i */
using lcube = uint16_t;
using sop = std::vector<lcube>;

lcube to_lcube( cube const& c )
{
  lcube m = 0;
  for ( uint32_t i = 0; i < 6; ++i )
  {
    if ( ( c.pos >> i ) & 1u )
      m |= static_cast<lcube>( 1u << ( 2 * i ) );
    if ( ( c.neg >> i ) & 1u )
      m |= static_cast<lcube>( 1u << ( 2 * i + 1 ) );
  }
  return m;
}

void normalize( sop& f )
{
  std::sort( f.begin(), f.end() );
  f.erase( std::unique( f.begin(), f.end() ), f.end() );
}

std::array<uint32_t, 12> literal_counts( sop const& f )
{
  std::array<uint32_t, 12> counts{};
  for ( auto c : f )
  {
    for ( uint32_t l = 0; l < 12; ++l )
      counts[l] += ( c >> l ) & 1u;
  }
  return counts;
}

lcube common_cube( sop const& f )
{
  lcube m = 0xfff;
  for ( auto c : f )
    m &= c;
  return f.empty() ? lcube{ 0 } : m;
}

sop make_cube_free( sop f )
{
  auto const cc = common_cube( f );
  for ( auto& c : f )
    c = static_cast<lcube>( c & ~cc );
  normalize( f );
  return f;
}

/* weak algebraic division f = q * d + r */
void divide( sop const& f, sop const& d, sop& q, sop& r )
{
  q.clear();
  bool first = true;
  for ( auto dc : d )
  {
    sop qd;
    for ( auto c : f )
    {
      if ( ( c & dc ) == dc )
        qd.push_back( static_cast<lcube>( c & ~dc ) );
    }
    normalize( qd );
    if ( first )
    {
      q = qd;
      first = false;
    }
    else
    {
      sop both;
      std::set_intersection( q.begin(), q.end(), qd.begin(), qd.end(), std::back_inserter( both ) );
      q = both;
    }
    if ( q.empty() )
      break;
  }
  sop product;
  for ( auto qc : q )
  {
    for ( auto dc : d )
      product.push_back( static_cast<lcube>( qc | dc ) );
  }
  normalize( product );
  r.clear();
  for ( auto c : f )
  {
    if ( !std::binary_search( product.begin(), product.end(), c ) )
      r.push_back( c );
  }
}

/* level-0 kernel by repeated division by literals occurring at least twice */
bool quick_divisor( sop const& f, sop& kernel )
{
  if ( f.size() <= 1u )
    return false;
  auto const counts = literal_counts( f );
  if ( std::none_of( counts.begin(), counts.end(), []( uint32_t c ) { return c >= 2u; } ) )
    return false;
  kernel = make_cube_free( f );
  while ( true )
  {
    auto const kc = literal_counts( kernel );
    uint32_t best = 12;
    for ( uint32_t l = 0; l < 12; ++l )
    {
      if ( kc[l] >= 2u && ( best == 12 || kc[l] > kc[best] ) )
        best = l;
    }
    if ( best == 12 )
      return true;
    sop q, r;
    divide( kernel, { static_cast<lcube>( 1u << best ) }, q, r );
    kernel = make_cube_free( q );
  }
}

class factorizer
{
public:
  explicit factorizer( factored_form& form ) : form_( form ) {}

  uint32_t run( sop f )
  {
    normalize( f );
    if ( f.empty() )
      return add( factored_form::op::const0 );
    if ( std::find( f.begin(), f.end(), lcube{ 0 } ) != f.end() )
      return add( factored_form::op::const1 );
    if ( f.size() == 1u )
      return cube_node( f[0] );

    sop kernel;
    if ( !quick_divisor( f, kernel ) )
      return sum_of_cubes( f );

    sop q, r;
    divide( f, kernel, q, r );
    if ( q.size() == 1u )
      return literal_factor( f, q[0] );

    q = make_cube_free( q );
    sop d;
    divide( f, q, d, r );
    if ( common_cube( d ) == 0u )
    {
      auto const a = run( q );
      auto const b = run( d );
      auto const prod = combine( factored_form::op::and_op, a, b );
      if ( r.empty() )
        return prod;
      return combine( factored_form::op::or_op, prod, run( r ) );
    }
    return literal_factor( f, common_cube( d ) );
  }

private:
  uint32_t add( factored_form::op kind, uint8_t literal = 0, std::vector<uint32_t> children = {} )
  {
    form_.nodes.push_back( { kind, literal, std::move( children ) } );
    return static_cast<uint32_t>( form_.nodes.size() - 1u );
  }

  uint32_t combine( factored_form::op kind, uint32_t a, uint32_t b )
  {
    std::vector<uint32_t> children;
    for ( auto x : { a, b } )
    {
      if ( form_.nodes[x].kind == kind )
      {
        auto const& ch = form_.nodes[x].children;
        children.insert( children.end(), ch.begin(), ch.end() );
      }
      else
        children.push_back( x );
    }
    return add( kind, 0, std::move( children ) );
  }

  uint32_t cube_node( lcube c )
  {
    std::vector<uint32_t> lits;
    for ( uint32_t l = 0; l < 12; ++l )
    {
      if ( ( c >> l ) & 1u )
        lits.push_back( add( factored_form::op::literal, static_cast<uint8_t>( l ) ) );
    }
    if ( lits.size() == 1u )
      return lits[0];
    return add( factored_form::op::and_op, 0, std::move( lits ) );
  }

  uint32_t sum_of_cubes( sop const& f )
  {
    std::vector<uint32_t> terms;
    for ( auto c : f )
      terms.push_back( cube_node( c ) );
    if ( terms.size() == 1u )
      return terms[0];
    return add( factored_form::op::or_op, 0, std::move( terms ) );
  }

  /* factor out the literal of `c` that occurs most often in f */
  uint32_t literal_factor( sop const& f, lcube c )
  {
    auto const counts = literal_counts( f );
    uint32_t best = 12;
    for ( uint32_t l = 0; l < 12; ++l )
    {
      if ( ( ( c >> l ) & 1u ) && ( best == 12 || counts[l] > counts[best] ) )
        best = l;
    }
    sop q, r;
    divide( f, { static_cast<lcube>( 1u << best ) }, q, r );
    auto const lit = add( factored_form::op::literal, static_cast<uint8_t>( best ) );
    auto const prod = combine( factored_form::op::and_op, lit, run( q ) );
    if ( r.empty() )
      return prod;
    return combine( factored_form::op::or_op, prod, run( r ) );
  }

  factored_form& form_;
};

} // namespace

uint32_t factored_form::literal_count() const
{
  uint32_t n = 0;
  for ( auto const& nd : nodes )
    n += nd.kind == op::literal ? 1u : 0u;
  return n;
}

truth_table factored_form::evaluate( uint32_t num_vars ) const
{
  std::vector<truth_table> values( nodes.size() );
  for ( uint32_t i = 0; i < nodes.size(); ++i )
  {
    auto const& nd = nodes[i];
    switch ( nd.kind )
    {
    case op::const0:
      values[i] = truth_table::constant( num_vars, false );
      break;
    case op::const1:
      values[i] = truth_table::constant( num_vars, true );
      break;
    case op::literal:
      values[i] = truth_table::nth_var( num_vars, nd.literal / 2u ) ^ ( ( nd.literal & 1u ) != 0u );
      break;
    case op::and_op:
      values[i] = truth_table::constant( num_vars, true );
      for ( auto c : nd.children )
        values[i] = values[i] & values[c];
      break;
    case op::or_op:
      values[i] = truth_table::constant( num_vars, false );
      for ( auto c : nd.children )
        values[i] = values[i] | values[c];
      break;
    }
  }
  return values[root];
}

factored_form factor( cube_list const& cubes )
{
  factored_form form;
  sop f;
  f.reserve( cubes.size() );
  for ( auto const& c : cubes )
    f.push_back( to_lcube( c ) );
  factorizer fz( form );
  form.root = fz.run( std::move( f ) );
  return form;
}

namespace
{

signal balanced_and( logic_network& net, std::vector<signal> items )
{
  if ( items.empty() )
    return net.get_constant( true );
  while ( items.size() > 1u )
  {
    std::vector<signal> next;
    for ( std::size_t i = 0; i + 1 < items.size(); i += 2 )
      next.push_back( net.create_and( items[i], items[i + 1] ) );
    if ( items.size() % 2u )
      next.push_back( items.back() );
    items = std::move( next );
  }
  return items[0];
}

signal lower_rec( factored_form const& form, uint32_t n, logic_network& net, std::span<const signal> leaves )
{
  auto const& nd = form.nodes[n];
  switch ( nd.kind )
  {
  case factored_form::op::const0:
    return net.get_constant( false );
  case factored_form::op::const1:
    return net.get_constant( true );
  case factored_form::op::literal:
    return leaves[nd.literal / 2u] ^ ( ( nd.literal & 1u ) != 0u );
  case factored_form::op::and_op:
  {
    std::vector<signal> items;
    for ( auto c : nd.children )
      items.push_back( lower_rec( form, c, net, leaves ) );
    return balanced_and( net, std::move( items ) );
  }
  case factored_form::op::or_op:
  {
    std::vector<signal> items;
    for ( auto c : nd.children )
      items.push_back( !lower_rec( form, c, net, leaves ) );
    return !balanced_and( net, std::move( items ) );
  }
  }
  return net.get_constant( false );
}

} // namespace

signal lower( factored_form const& form, logic_network& net, std::span<const signal> leaves )
{
  return lower_rec( form, form.root, net, leaves );
}

} // namespace mch
