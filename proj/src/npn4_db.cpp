#include <algorithm>
#include <array>
#include <chrono>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "mch/analysis.hpp"
#include "mch/errors.hpp"
#include "mch/npn.hpp"
#include "mch/strategies.hpp"

namespace mch
{

/* ---------------------------------------------------------------- templates */

truth_table structure_template::evaluate() const
{
  std::vector<uint64_t> value( 5u + gates.size(), 0u );
  for ( uint32_t i = 0; i < 4; ++i )
    value[1u + i] = tt_detail::projections[i];
  auto lit = [&]( uint8_t l ) { return ( l & 1u ) ? ~value[l >> 1] : value[l >> 1]; };
  for ( std::size_t g = 0; g < gates.size(); ++g )
  {
    auto const& gt = gates[g];
    uint64_t w = 0;
    switch ( gt.kind )
    {
    case gate_kind::and2:
      w = lit( gt.fanins[0] ) & lit( gt.fanins[1] );
      break;
    case gate_kind::xor2:
      w = lit( gt.fanins[0] ) ^ lit( gt.fanins[1] );
      break;
    case gate_kind::maj3:
    {
      auto const a = lit( gt.fanins[0] ), b = lit( gt.fanins[1] ), c = lit( gt.fanins[2] );
      w = ( a & b ) | ( a & c ) | ( b & c );
      break;
    }
    default:
      break;
    }
    value[5u + g] = w;
  }
  return truth_table( 4, lit( output ) );
}

signal structure_template::instantiate( logic_network& net, std::span<const signal> inputs ) const
{
  std::vector<signal> value( 5u + gates.size() );
  value[0] = net.get_constant( false );
  for ( uint32_t i = 0; i < 4; ++i )
    value[1u + i] = i < inputs.size() ? inputs[i] : net.get_constant( false );
  auto lit = [&]( uint8_t l ) { return value[l >> 1] ^ ( ( l & 1u ) != 0u ); };
  for ( std::size_t g = 0; g < gates.size(); ++g )
  {
    auto const& gt = gates[g];
    switch ( gt.kind )
    {
    case gate_kind::and2:
      value[5u + g] = net.create_and( lit( gt.fanins[0] ), lit( gt.fanins[1] ) );
      break;
    case gate_kind::xor2:
      value[5u + g] = net.create_xor( lit( gt.fanins[0] ), lit( gt.fanins[1] ) );
      break;
    default:
      value[5u + g] = net.create_maj( lit( gt.fanins[0] ), lit( gt.fanins[1] ), lit( gt.fanins[2] ) );
      break;
    }
  }
  return lit( output );
}

namespace
{

std::string literal_name( uint8_t l )
{
  std::string s = ( l & 1u ) ? "!" : "";
  uint32_t const idx = l >> 1;
  if ( idx == 0u )
    return ( l & 1u ) ? "1" : "0";
  if ( idx <= 4u )
    return s + fmt::format( "t{}", idx - 1u );
  return s + fmt::format( "g{}", idx - 5u );
}

uint8_t parse_literal( std::string_view tok, std::size_t num_gates )
{
  if ( tok == "0" )
    return 0u;
  if ( tok == "1" )
    return 1u;
  uint8_t neg = 0;
  if ( !tok.empty() && tok[0] == '!' )
  {
    neg = 1;
    tok.remove_prefix( 1 );
  }
  if ( tok.size() < 2u || ( tok[0] != 't' && tok[0] != 'g' ) )
    throw parse_error( fmt::format( "bad template literal '{}'", tok ) );
  uint32_t idx = 0;
  for ( char c : tok.substr( 1 ) )
  {
    if ( c < '0' || c > '9' )
      throw parse_error( fmt::format( "bad template literal '{}'", tok ) );
    idx = idx * 10u + static_cast<uint32_t>( c - '0' );
  }
  if ( tok[0] == 't' )
  {
    if ( idx > 3u )
      throw parse_error( "template input out of range" );
    return static_cast<uint8_t>( 2u * ( idx + 1u ) + neg );
  }
  if ( idx >= num_gates )
    throw parse_error( "template gate reference out of order" );
  return static_cast<uint8_t>( 2u * ( idx + 5u ) + neg );
}

} // namespace

std::string structure_template::to_string() const
{
  if ( gates.empty() )
    return literal_name( output );
  std::string s;
  for ( std::size_t g = 0; g < gates.size(); ++g )
  {
    if ( g )
      s += ',';
    if ( g + 1u == gates.size() && ( output & 1u ) )
      s += '!';
    auto const& gt = gates[g];
    s += mch::to_string( gt.kind );
    s += '(';
    for ( uint32_t i = 0; i < arity( gt.kind ); ++i )
    {
      if ( i )
        s += ',';
      s += literal_name( gt.fanins[i] );
    }
    s += ')';
  }
  return s;
}

structure_template structure_template::parse( std::string_view text, repr_tag repr )
{
  structure_template t;
  t.repr = repr;
  if ( text.find( '(' ) == std::string_view::npos )
  {
    t.output = parse_literal( text, 0 );
    return t;
  }
  bool out_neg = false;
  while ( !text.empty() )
  {
    auto const close = text.find( ')' );
    if ( close == std::string_view::npos )
      throw parse_error( "unterminated template gate" );
    auto tok = text.substr( 0, close );
    text.remove_prefix( close + 1u );
    if ( !text.empty() )
    {
      if ( text[0] != ',' )
        throw parse_error( "expected ',' between template gates" );
      text.remove_prefix( 1 );
    }
    out_neg = false;
    if ( !tok.empty() && tok[0] == '!' )
    {
      out_neg = true;
      tok.remove_prefix( 1 );
    }
    auto const open = tok.find( '(' );
    if ( open == std::string_view::npos )
      throw parse_error( "missing '(' in template gate" );
    auto const name = tok.substr( 0, open );
    template_gate g;
    if ( name == "and" )
      g.kind = gate_kind::and2;
    else if ( name == "xor" )
      g.kind = gate_kind::xor2;
    else if ( name == "maj" )
      g.kind = gate_kind::maj3;
    else
      throw parse_error( fmt::format( "unknown template gate '{}'", name ) );
    auto args = tok.substr( open + 1u );
    uint32_t n = 0;
    while ( !args.empty() )
    {
      auto const comma = args.find( ',' );
      auto const a = args.substr( 0, comma );
      if ( n == 3u )
        throw parse_error( "too many template gate inputs" );
      g.fanins[n++] = parse_literal( a, t.gates.size() );
      if ( comma == std::string_view::npos )
        break;
      args.remove_prefix( comma + 1u );
    }
    if ( n != arity( g.kind ) )
      throw parse_error( "template gate arity mismatch" );
    t.gates.push_back( g );
  }
  t.output = static_cast<uint8_t>( 2u * ( 4u + t.gates.size() ) + ( out_neg ? 1u : 0u ) );
  return t;
}

/* ---------------------------------------------------------------- enumeration */

namespace
{

structure_template template_from_network( logic_network const& net, signal out )
{
  logic_network clean( net.tag() );
  std::vector<signal> pis;
  for ( uint32_t i = 0; i < net.num_pis(); ++i )
    pis.push_back( clean.create_pi() );
  clean.create_po( copy_cone( net, std::span<const signal>( &out, 1 ), clean, pis )[0] );
  structure_template t;
  t.repr = net.tag();
  clean.foreach_gate( [&]( uint32_t n ) {
    template_gate g;
    g.kind = clean.kind( n );
    auto const f = clean.fanins( n );
    for ( std::size_t i = 0; i < f.size(); ++i )
      g.fanins[i] = static_cast<uint8_t>( f[i].literal() );
    t.gates.push_back( g );
  } );
  t.output = static_cast<uint8_t>( clean.po_at( 0 ).literal() );
  t.size = static_cast<uint32_t>( t.gates.size() );
  t.depth = compute_levels( clean ).depth;
  return t;
}

struct entry
{
  uint16_t function;
  uint8_t size;
  uint8_t depth;
  gate_kind op;
  uint8_t child_neg;
  bool out_neg;
  std::array<uint32_t, 3> child;
};

class formula_enumerator
{
public:
  formula_enumerator( repr_tag repr, npn4_build_params const& ps ) : repr_( repr ), ps_( ps )
  {
    best_depth_.assign( 1u << 16, 0xffu );
    by_function_.resize( 1u << 16 );
    by_size_.resize( ps.max_size + 1u );
    for ( uint32_t i = 0; i < 4; ++i )
    {
      auto const f = static_cast<uint16_t>( tt_detail::projections[i] );
      entries_.push_back( { f, 0, 0, gate_kind::pi, 0, false, { i, 0, 0 } } );
      best_depth_[f] = 0;
      by_function_[f].push_back( i );
      by_size_[0].push_back( i );
    }
  }

  void run()
  {
    for ( uint32_t s = 1; s <= ps_.max_size; ++s )
    {
      cand_.clear();
      cand_depth_.assign( 1u << 16, 0xffu );
      for ( uint32_t s1 = 0; 2u * s1 <= s - 1u; ++s1 )
      {
        uint32_t const s2 = s - 1u - s1;
        pairs( s1, s2 );
      }
      if ( permits( repr_, gate_kind::maj3 ) && s - 1u <= ps_.max_majority_children )
      {
        for ( uint32_t s1 = 0; 3u * s1 <= s - 1u; ++s1 )
        {
          for ( uint32_t s2 = s1; s1 + 2u * s2 <= s - 1u; ++s2 )
            triples( s1, s2, s - 1u - s1 - s2 );
        }
      }
      for ( auto const& [f, e] : cand_ )
      {
        if ( cand_depth_[f] != e.depth || e.depth >= best_depth_[f] )
          continue;
        cand_depth_[f] = 0xfeu; /* commit once */
        best_depth_[f] = e.depth;
        auto const id = static_cast<uint32_t>( entries_.size() );
        entries_.push_back( e );
        by_function_[f].push_back( id );
        by_size_[s].push_back( id );
      }
    }
  }

  std::vector<uint32_t> const& entries_of( uint16_t normalized ) const { return by_function_[normalized]; }

  signal build( uint32_t id, logic_network& net, std::span<const signal> pis ) const
  {
    auto const& e = entries_[id];
    if ( e.op == gate_kind::pi )
      return pis[e.child[0]];
    std::array<signal, 3> in{};
    for ( uint32_t i = 0; i < arity( e.op ); ++i )
      in[i] = build( e.child[i], net, pis ) ^ ( ( ( e.child_neg >> i ) & 1u ) != 0u );
    signal r;
    switch ( e.op )
    {
    case gate_kind::and2:
      r = net.create_and( in[0], in[1] );
      break;
    case gate_kind::xor2:
      r = net.create_xor( in[0], in[1] );
      break;
    default:
      r = net.create_maj( in[0], in[1], in[2] );
      break;
    }
    return r ^ e.out_neg;
  }

private:
  void offer( uint64_t raw, uint8_t depth, gate_kind op, uint8_t neg, std::array<uint32_t, 3> const& child,
              uint8_t size )
  {
    auto f = static_cast<uint16_t>( raw );
    bool out_neg = false;
    if ( f & 1u )
    {
      f = static_cast<uint16_t>( ~f );
      out_neg = true;
    }
    if ( f == 0u || depth >= best_depth_[f] || depth >= cand_depth_[f] )
      return;
    cand_depth_[f] = depth;
    cand_.emplace_back( f, entry{ f, size, depth, op, neg, out_neg, child } );
  }

  void pairs( uint32_t s1, uint32_t s2 )
  {
    auto const& l1 = by_size_[s1];
    auto const& l2 = by_size_[s2];
    auto const size = static_cast<uint8_t>( s1 + s2 + 1u );
    bool const with_xor = permits( repr_, gate_kind::xor2 );
    for ( std::size_t i = 0; i < l1.size(); ++i )
    {
      auto const& a = entries_[l1[i]];
      uint64_t const fa = a.function;
      for ( std::size_t j = ( s1 == s2 ? i + 1u : 0u ); j < l2.size(); ++j )
      {
        auto const& b = entries_[l2[j]];
        uint64_t const fb = b.function;
        auto const depth = static_cast<uint8_t>( 1u + std::max( a.depth, b.depth ) );
        std::array<uint32_t, 3> const ch{ l1[i], l2[j], 0 };
        offer( fa & fb, depth, gate_kind::and2, 0, ch, size );
        offer( ~fa & fb, depth, gate_kind::and2, 1, ch, size );
        offer( fa & ~fb, depth, gate_kind::and2, 2, ch, size );
        offer( ~fa & ~fb, depth, gate_kind::and2, 3, ch, size );
        if ( with_xor )
          offer( fa ^ fb, depth, gate_kind::xor2, 0, ch, size );
      }
    }
  }

  void triples( uint32_t s1, uint32_t s2, uint32_t s3 )
  {
    if ( s3 < s2 )
      return;
    auto const& l1 = by_size_[s1];
    auto const& l2 = by_size_[s2];
    auto const& l3 = by_size_[s3];
    auto const size = static_cast<uint8_t>( s1 + s2 + s3 + 1u );
    for ( std::size_t i = 0; i < l1.size(); ++i )
    {
      auto const& a = entries_[l1[i]];
      for ( std::size_t j = ( s1 == s2 ? i + 1u : 0u ); j < l2.size(); ++j )
      {
        auto const& b = entries_[l2[j]];
        for ( std::size_t k = ( s2 == s3 ? j + 1u : 0u ); k < l3.size(); ++k )
        {
          auto const& c = entries_[l3[k]];
          auto const depth = static_cast<uint8_t>( 1u + std::max( { a.depth, b.depth, c.depth } ) );
          std::array<uint32_t, 3> const ch{ l1[i], l2[j], l3[k] };
          /* majority is self-dual, so at most one complemented operand is needed */
          for ( uint8_t neg : { 0, 1, 2, 4 } )
          {
            uint64_t const x = ( neg & 1u ) ? ~uint64_t( a.function ) : a.function;
            uint64_t const y = ( neg & 2u ) ? ~uint64_t( b.function ) : b.function;
            uint64_t const z = ( neg & 4u ) ? ~uint64_t( c.function ) : c.function;
            offer( ( x & y ) | ( x & z ) | ( y & z ), depth, gate_kind::maj3, neg, ch, size );
          }
        }
      }
    }
  }

  repr_tag repr_;
  npn4_build_params ps_;
  std::vector<entry> entries_;
  std::vector<uint8_t> best_depth_;
  std::vector<uint8_t> cand_depth_;
  std::vector<std::pair<uint16_t, entry>> cand_;
  std::vector<std::vector<uint32_t>> by_function_;
  std::vector<std::vector<uint32_t>> by_size_;
};

void pareto_insert( std::vector<structure_template>& set, structure_template t )
{
  for ( auto const& e : set )
  {
    if ( e.depth <= t.depth && e.size <= t.size )
      return;
  }
  std::erase_if( set, [&]( auto const& e ) { return t.depth <= e.depth && t.size <= e.size; } );
  set.push_back( std::move( t ) );
}

void sort_templates( std::vector<structure_template>& set )
{
  std::sort( set.begin(), set.end(), []( auto const& a, auto const& b ) {
    return std::pair{ a.depth, a.size } < std::pair{ b.depth, b.size };
  } );
}

std::vector<uint16_t> canonical_classes()
{
  std::vector<uint16_t> classes;
  for ( uint32_t f = 0; f < ( 1u << 16 ); ++f )
  {
    if ( npn_canonize( truth_table( 4, f ) ).canon.raw() == f )
      classes.push_back( static_cast<uint16_t>( f ) );
  }
  return classes;
}

} // namespace

npn4_database npn4_database::build( std::span<const repr_tag> reprs, npn4_build_params const& ps,
                                    npn4_build_stats* stats )
{
  auto const start = std::chrono::steady_clock::now();
  npn4_database db;
  db.reprs_.assign( reprs.begin(), reprs.end() );
  auto const classes = canonical_classes();

  /* structures enumerated for richer gate sets are lowered into the poorer ones as extra options */
  std::array<repr_tag, 4> const all{ repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg };
  std::vector<formula_enumerator> enumerators;
  for ( auto r : all )
  {
    enumerators.emplace_back( r, ps );
    enumerators.back().run();
  }

  for ( auto repr : reprs )
  {
    uint32_t filled = 0;
    for ( auto c : classes )
    {
      auto& set = db.entries_[{ c, repr }];
      truth_table const target( 4, c );
      bool const neg = ( c & 1u ) != 0u;
      auto const norm = static_cast<uint16_t>( neg ? ~c : c );

      if ( norm == 0u )
      {
        structure_template t;
        t.repr = repr;
        t.output = neg ? 1u : 0u;
        set.push_back( t );
        continue;
      }
      auto add = [&]( auto&& make ) {
        logic_network net( repr );
        std::vector<signal> pis;
        for ( int i = 0; i < 4; ++i )
          pis.push_back( net.create_pi() );
        auto t = template_from_network( net, make( net, pis ) );
        if ( t.evaluate() != target )
          throw std::logic_error( "npn4 database: structure does not match its class" );
        pareto_insert( set, std::move( t ) );
      };
      for ( std::size_t e = 0; e < all.size(); ++e )
      {
        auto const& en = enumerators[e];
        if ( all[e] == repr && en.entries_of( norm ).empty() )
          ++filled;
        for ( auto id : en.entries_of( norm ) )
          add( [&]( logic_network& net, std::vector<signal> const& pis ) { return en.build( id, net, pis ) ^ neg; } );
      }
      add( [&]( logic_network& net, std::vector<signal> const& pis ) {
        return synthesize_dsd( target, net, pis, nullptr );
      } );
      add( [&]( logic_network& net, std::vector<signal> const& pis ) {
        return synthesize_isop_factor( target, net, pis );
      } );
      sort_templates( set );
    }
    if ( stats )
      stats->filled_by_synthesis[repr] = filled;
  }
  if ( stats )
    stats->seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
  return db;
}

npn4_database const& npn4_database::shared()
{
  static npn4_database const db = [] {
    std::array<repr_tag, 4> const all{ repr_tag::aig, repr_tag::xag, repr_tag::mig, repr_tag::xmg };
    return build( all );
  }();
  return db;
}

std::span<const structure_template> npn4_database::lookup( truth_table const& canon, repr_tag repr ) const
{
  auto it = entries_.find( { static_cast<uint16_t>( canon.extend_to( 4 ).raw() ), repr } );
  if ( it == entries_.end() )
    return {};
  return it->second;
}

std::vector<uint16_t> npn4_database::classes() const
{
  std::vector<uint16_t> out;
  for ( auto const& [key, v] : entries_ )
  {
    if ( out.empty() || out.back() != key.first )
      out.push_back( key.first );
  }
  return out;
}

bool npn4_database::has( repr_tag repr ) const
{
  return std::find( reprs_.begin(), reprs_.end(), repr ) != reprs_.end();
}

void npn4_database::save( std::ostream& os ) const
{
  os << "npn4-db v1\n";
  for ( auto const& [key, set] : entries_ )
  {
    for ( auto const& t : set )
      os << truth_table( 4, key.first ).to_hex() << ' ' << mch::to_string( key.second ) << ' ' << t.depth << ' '
         << t.size << ' ' << t.to_string() << '\n';
  }
}

npn4_database npn4_database::load( std::istream& is )
{
  npn4_database db;
  std::string line;
  if ( !std::getline( is, line ) || line != "npn4-db v1" )
    throw parse_error( "npn4 database: missing 'npn4-db v1' header" );
  uint32_t lineno = 1;
  while ( std::getline( is, line ) )
  {
    ++lineno;
    if ( line.empty() || line[0] == '#' )
      continue;
    std::istringstream ss( line );
    std::string hex, repr_name, gates;
    uint32_t depth = 0, size = 0;
    if ( !( ss >> hex >> repr_name >> depth >> size >> gates ) )
      throw parse_error( fmt::format( "npn4 database line {}: expected 5 fields", lineno ) );
    try
    {
      auto const canon = truth_table::from_hex( hex, 4 );
      auto const repr = parse_repr( repr_name );
      auto t = structure_template::parse( gates, repr );
      logic_network net( repr );
      std::vector<signal> pis;
      for ( int i = 0; i < 4; ++i )
        pis.push_back( net.create_pi() );
      auto const out = t.instantiate( net, pis );
      t = template_from_network( net, out );
      if ( t.evaluate() != canon || npn_canonize( canon ).canon != canon )
        throw parse_error( "template does not implement its class" );
      if ( t.size != size || t.depth != depth )
        throw parse_error( "declared size or depth does not match the gates" );
      db.entries_[{ static_cast<uint16_t>( canon.raw() ), repr }].push_back( std::move( t ) );
      if ( !db.has( repr ) )
        db.reprs_.push_back( repr );
    }
    catch ( std::invalid_argument const& e )
    {
      throw parse_error( fmt::format( "npn4 database line {}: {}", lineno, e.what() ) );
    }
    catch ( parse_error const& e )
    {
      throw parse_error( fmt::format( "npn4 database line {}: {}", lineno, e.what() ) );
    }
  }
  for ( auto& [key, set] : db.entries_ )
    sort_templates( set );
  return db;
}

} // namespace mch
