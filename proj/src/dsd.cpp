#include "mch/dsd.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace mch
{

namespace
{

using child = dsd_tree::child;

uint64_t exists( uint64_t f, uint32_t vars )
{
  for ( uint32_t i = 0; i < 6; ++i )
  {
    if ( ( vars >> i ) & 1u )
      f = tt_detail::cofactor0( f, i ) | tt_detail::cofactor1( f, i );
  }
  return f;
}

uint64_t assign_zero( uint64_t f, uint32_t vars )
{
  for ( uint32_t i = 0; i < 6; ++i )
  {
    if ( ( vars >> i ) & 1u )
      f = tt_detail::cofactor0( f, i );
  }
  return f;
}

uint32_t support_of( uint64_t f )
{
  uint32_t s = 0;
  for ( uint32_t i = 0; i < 6; ++i )
  {
    if ( tt_detail::has_var( f, i ) )
      s |= 1u << i;
  }
  return s;
}

class decomposer
{
public:
  decomposer( dsd_tree& tree, dsd_params const& ps ) : tree_( tree ), ps_( ps ) {}

  /* leaf[i] is the subtree standing for variable position i */
  child run( uint64_t f, std::array<child, 6> const& leaf )
  {
    if ( f == 0u )
      return { const_node(), false };
    if ( f == ~0ull )
      return { const_node(), true };

    uint32_t const supp = support_of( f );
    if ( std::popcount( supp ) == 1 )
    {
      uint32_t const v = static_cast<uint32_t>( std::countr_zero( supp ) );
      bool const neg = ( f & tt_detail::projections[v] ) == 0u;
      return { leaf[v].node, leaf[v].complemented != neg };
    }

    uint32_t const low = supp & ( ~supp + 1u );
    uint32_t const rest = supp & ~low;

    /* AND / OR / XOR bipartitions, smallest side containing the lowest variable first */
    for ( uint32_t size = 1; size < static_cast<uint32_t>( std::popcount( supp ) ); ++size )
    {
      for ( uint32_t sub = rest;; sub = ( sub - 1u ) & rest )
      {
        uint32_t const a = sub | low;
        if ( static_cast<uint32_t>( std::popcount( a ) ) == size )
        {
          uint32_t const b = supp & ~a;
          for ( bool out : { false, true } )
          {
            uint64_t const g = out ? ~f : f;
            uint64_t const ga = exists( g, b ), gb = exists( g, a );
            if ( ( ga & gb ) == g )
            {
              auto const ca = run( ga, leaf ), cb = run( gb, leaf );
              return { make_gate( dsd_tree::op::and_op, { ca, cb } ), out };
            }
          }
          uint64_t const fa = assign_zero( f, b ), fb = assign_zero( f, a );
          bool const c = ( assign_zero( f, supp ) & 1u ) != 0u;
          if ( ( fa ^ fb ^ ( c ? ~0ull : 0ull ) ) == f )
          {
            auto const ca = run( fa, leaf ), cb = run( fb ^ ( c ? ~0ull : 0ull ), leaf );
            return { make_gate( dsd_tree::op::xor_op, { ca, cb } ), false };
          }
        }
        if ( sub == 0u )
          break;
      }
    }

    /* largest bound set with column multiplicity two */
    uint32_t best_a = 0;
    uint64_t best_c0 = 0, best_c1 = 0, best_g = 0;
    for ( uint32_t a = supp;; a = ( a - 1u ) & supp )
    {
      auto const na = std::popcount( a );
      if ( na >= 2 && a != supp && na > std::popcount( best_a ) )
      {
        uint64_t c0 = 0, c1 = 0, g = 0;
        if ( bound_set( f, a, c0, c1, g ) )
        {
          best_a = a;
          best_c0 = c0;
          best_c1 = c1;
          best_g = g;
        }
      }
      if ( a == 0u )
        break;
    }
    if ( best_a != 0u )
    {
      auto const cg = run( best_g, leaf );
      uint32_t const z = static_cast<uint32_t>( std::countr_zero( best_a ) );
      uint64_t const x = tt_detail::projections[z];
      uint64_t const outer = ( best_c0 & ~x ) | ( best_c1 & x );
      auto inner = leaf;
      inner[z] = cg;
      return run( outer, inner );
    }

    return prime( f, supp, leaf );
  }

private:
  uint32_t const_node()
  {
    if ( const_ == UINT32_MAX )
    {
      tree_.nodes.push_back( { dsd_tree::op::const0, 0, {}, {} } );
      const_ = static_cast<uint32_t>( tree_.nodes.size() - 1u );
    }
    return const_;
  }

  uint32_t make_gate( dsd_tree::op kind, std::array<child, 2> const& ins )
  {
    dsd_tree::node nd;
    nd.kind = kind;
    for ( auto const& c : ins )
    {
      auto const& sub = tree_.nodes[c.node];
      /* flatten same-kind operands: XOR absorbs complements, AND only uncomplemented ones */
      if ( sub.kind == kind && ( kind == dsd_tree::op::xor_op || !c.complemented ) )
      {
        auto ch = sub.children;
        if ( kind == dsd_tree::op::xor_op && c.complemented )
          ch[0].complemented = !ch[0].complemented;
        nd.children.insert( nd.children.end(), ch.begin(), ch.end() );
      }
      else
        nd.children.push_back( c );
    }
    /* normalize XOR operand complements onto the first child */
    if ( kind == dsd_tree::op::xor_op )
    {
      bool parity = false;
      for ( auto& c : nd.children )
      {
        parity ^= c.complemented;
        c.complemented = false;
      }
      nd.children[0].complemented = parity;
    }
    tree_.nodes.push_back( std::move( nd ) );
    return static_cast<uint32_t>( tree_.nodes.size() - 1u );
  }

  /* f = !g(A) * c0(B) + g(A) * c1(B) with exactly two distinct cofactors over A */
  static bool bound_set( uint64_t f, uint32_t a, uint64_t& c0, uint64_t& c1, uint64_t& g )
  {
    std::array<uint32_t, 6> vars{};
    uint32_t n = 0;
    for ( uint32_t i = 0; i < 6; ++i )
    {
      if ( ( a >> i ) & 1u )
        vars[n++] = i;
    }
    bool have1 = false;
    g = 0;
    for ( uint32_t m = 0; m < ( 1u << n ); ++m )
    {
      uint64_t cof = f;
      uint64_t cube = ~0ull;
      for ( uint32_t j = 0; j < n; ++j )
      {
        bool const bit = ( m >> j ) & 1u;
        cof = bit ? tt_detail::cofactor1( cof, vars[j] ) : tt_detail::cofactor0( cof, vars[j] );
        cube &= bit ? tt_detail::projections[vars[j]] : ~tt_detail::projections[vars[j]];
      }
      if ( m == 0u )
        c0 = cof;
      else if ( cof == c0 )
        continue;
      else if ( !have1 )
      {
        c1 = cof;
        have1 = true;
        g |= cube;
      }
      else if ( cof == c1 )
        g |= cube;
      else
        return false;
    }
    return have1;
  }

  child prime( uint64_t f, uint32_t supp, std::array<child, 6> const& leaf )
  {
    std::array<uint8_t, 6> kept{};
    auto const shrunk = shrink_to_support( truth_table( 6, f ), kept );
    dsd_tree::node nd;
    nd.kind = dsd_tree::op::prime;
    for ( uint32_t i = 0; i < shrunk.num_vars(); ++i )
      nd.children.push_back( leaf[kept[i]] );
    nd.function = shrunk;
    (void)supp;

    if ( ps_.detect_majority && shrunk.num_vars() == 3u )
    {
      for ( uint32_t neg = 0; neg < 8u; ++neg )
      {
        auto t = shrunk;
        for ( uint32_t i = 0; i < 3u; ++i )
        {
          if ( ( neg >> i ) & 1u )
            t = t.flip( i );
        }
        for ( bool out : { false, true } )
        {
          if ( ( t ^ out ).raw() == 0xe8u )
          {
            dsd_tree::node m;
            m.kind = dsd_tree::op::maj;
            for ( uint32_t i = 0; i < 3u; ++i )
            {
              auto c = nd.children[i];
              c.complemented ^= ( ( neg >> i ) & 1u ) != 0u;
              m.children.push_back( c );
            }
            tree_.nodes.push_back( std::move( m ) );
            return { static_cast<uint32_t>( tree_.nodes.size() - 1u ), out };
          }
        }
      }
    }
    tree_.nodes.push_back( std::move( nd ) );
    return { static_cast<uint32_t>( tree_.nodes.size() - 1u ), false };
  }

  dsd_tree& tree_;
  dsd_params const& ps_;
  uint32_t const_{ UINT32_MAX };
};

} // namespace

bool dsd_tree::non_decomposable() const
{
  auto const& top = nodes[root.node];
  if ( top.kind != op::prime )
    return false;
  return std::all_of( top.children.begin(), top.children.end(),
                      [this]( child const& c ) { return nodes[c.node].kind == op::var; } );
}

truth_table dsd_tree::evaluate( uint32_t num_vars ) const
{
  std::vector<truth_table> values( nodes.size() );
  auto in = [&]( child const& c ) { return values[c.node] ^ c.complemented; };
  for ( uint32_t i = 0; i < nodes.size(); ++i )
  {
    auto const& nd = nodes[i];
    switch ( nd.kind )
    {
    case op::const0:
      values[i] = truth_table::constant( num_vars, false );
      break;
    case op::var:
      values[i] = truth_table::nth_var( num_vars, nd.var );
      break;
    case op::and_op:
      values[i] = truth_table::constant( num_vars, true );
      for ( auto const& c : nd.children )
        values[i] = values[i] & in( c );
      break;
    case op::xor_op:
      values[i] = truth_table::constant( num_vars, false );
      for ( auto const& c : nd.children )
        values[i] = values[i] ^ in( c );
      break;
    case op::maj:
    {
      auto const a = in( nd.children[0] ), b = in( nd.children[1] ), c = in( nd.children[2] );
      values[i] = ( a & b ) | ( a & c ) | ( b & c );
      break;
    }
    case op::prime:
    {
      auto acc = truth_table::constant( num_vars, false );
      uint32_t const k = static_cast<uint32_t>( nd.children.size() );
      for ( uint32_t m = 0; m < ( 1u << k ); ++m )
      {
        if ( !nd.function.get_bit( m ) )
          continue;
        auto term = truth_table::constant( num_vars, true );
        for ( uint32_t j = 0; j < k; ++j )
          term = term & ( in( nd.children[j] ) ^ ( ( ( m >> j ) & 1u ) == 0u ) );
        acc = acc | term;
      }
      values[i] = acc;
      break;
    }
    }
  }
  return values[root.node] ^ root.complemented;
}

dsd_tree dsd_decompose( truth_table const& tt, dsd_params const& ps )
{
  dsd_tree tree;
  std::array<child, 6> leaf{};
  for ( uint32_t i = 0; i < 6; ++i )
  {
    tree.nodes.push_back( { dsd_tree::op::var, static_cast<uint8_t>( i ), {}, {} } );
    leaf[i] = { i, false };
  }
  decomposer d( tree, ps );
  tree.root = d.run( tt.word(), leaf );
  return tree;
}

} // namespace mch
