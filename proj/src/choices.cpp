#include "mch/choices.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

#include "mch/errors.hpp"
#include "mch/simulate.hpp"
#include "mch/verify.hpp"

namespace mch
{

std::string_view to_string( choice_status s )
{
  switch ( s )
  {
  case choice_status::added:
    return "added";
  case choice_status::not_representative:
    return "not a representative";
  case choice_status::already_classified:
    return "already classified";
  case choice_status::invalid_member:
    return "invalid member";
  case choice_status::class_full:
    return "class full";
  case choice_status::cycle:
    return "cycle";
  }
  return "?";
}

choice_network::choice_network( logic_network base ) : net_( std::move( base ) ), base_size_( net_.size() ) {}

void choice_network::ensure( uint32_t n )
{
  if ( repr_.size() > n )
    return;
  uint32_t const old = static_cast<uint32_t>( repr_.size() );
  uint32_t const sz = std::max( n + 1u, net_.size() );
  repr_.resize( sz );
  for ( uint32_t i = old; i < sz; ++i )
    repr_[i] = i;
  next_.resize( sz, none );
  phase_.resize( sz, 0u );
}

std::vector<uint32_t> choice_network::class_members( uint32_t rep ) const
{
  std::vector<uint32_t> out{ rep };
  for ( auto m = next( rep ); m != none; m = next( m ) )
    out.push_back( m );
  return out;
}

std::vector<uint32_t> choice_network::representatives_with_choices() const
{
  std::vector<uint32_t> out;
  for ( uint32_t n = 0; n < repr_.size(); ++n )
  {
    if ( has_choices( n ) )
      out.push_back( n );
  }
  return out;
}

uint32_t choice_network::num_classes() const
{
  return static_cast<uint32_t>( representatives_with_choices().size() );
}

uint32_t choice_network::num_choices() const
{
  uint32_t c = 0;
  for ( uint32_t n = 0; n < repr_.size(); ++n )
    c += repr_[n] != n ? 1u : 0u;
  return c;
}

bool choice_network::reaches( uint32_t node, uint32_t rep ) const
{
  std::unordered_set<uint32_t> seen{ node };
  std::vector<uint32_t> stack{ node };
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    if ( n == rep )
      return true;
    auto visit = [&]( uint32_t m ) {
      if ( seen.insert( m ).second )
        stack.push_back( m );
    };
    for ( auto f : net_.fanins( n ) )
      visit( f.index() );
    if ( has_choices( n ) )
    {
      for ( auto m = next( n ); m != none; m = next( m ) )
        visit( m );
    }
  }
  return false;
}

choice_status choice_network::add_choice( uint32_t rep, signal choice, uint32_t max_class_size )
{
  auto const m = choice.index();
  if ( rep >= net_.size() || m >= net_.size() )
    throw std::out_of_range( "add_choice: node out of range" );
  if ( !is_representative( rep ) || !net_.is_gate( rep ) )
    return choice_status::not_representative;
  if ( m < base_size_ || !net_.is_gate( m ) )
    return choice_status::invalid_member;
  if ( in_class( m ) )
    return choice_status::already_classified;
  uint32_t members = 1;
  uint32_t last = rep;
  for ( auto x = next( rep ); x != none; x = next( x ) )
  {
    ++members;
    last = x;
  }
  if ( members >= max_class_size )
    return choice_status::class_full;
  if ( reaches( m, rep ) )
    return choice_status::cycle;
  ensure( std::max( rep, m ) );
  next_[last] = m;
  repr_[m] = rep;
  phase_[m] = choice.complemented() ? 1u : 0u;
  return choice_status::added;
}

void choice_network::remove_choice( uint32_t node )
{
  auto const rep = repr( node );
  if ( rep == node )
    return;
  uint32_t prev = rep;
  while ( next_[prev] != node )
    prev = next_[prev];
  next_[prev] = next_[node];
  next_[node] = none;
  repr_[node] = node;
  phase_[node] = 0u;
}

uint32_t choice_network::remove_cyclic_choices()
{
  uint32_t removed = 0;
  for ( auto rep : representatives_with_choices() )
  {
    for ( auto m : class_members( rep ) )
    {
      if ( m == rep )
        continue;
      bool const ph = phase( m );
      remove_choice( m );
      if ( reaches( m, rep ) )
        ++removed;
      else
        add_choice( rep, signal( m, ph ), UINT32_MAX );
    }
  }
  return removed;
}

std::vector<uint32_t> choice_network::topological_order() const
{
  uint32_t const n_nodes = net_.size();
  std::vector<uint8_t> state( n_nodes, 0u ); /* 0 new, 1 open, 2 done */
  std::vector<uint32_t> order;
  order.reserve( n_nodes );
  std::vector<uint32_t> children;
  std::vector<std::pair<uint32_t, std::vector<uint32_t>>> stack;

  auto children_of = [&]( uint32_t n ) {
    std::vector<uint32_t> ch;
    for ( auto f : net_.fanins( n ) )
      ch.push_back( f.index() );
    if ( has_choices( n ) )
    {
      for ( auto m = next( n ); m != none; m = next( m ) )
        ch.push_back( m );
    }
    std::reverse( ch.begin(), ch.end() );
    return ch;
  };

  for ( uint32_t root = 0; root < n_nodes; ++root )
  {
    if ( state[root] != 0u )
      continue;
    state[root] = 1u;
    stack.emplace_back( root, children_of( root ) );
    while ( !stack.empty() )
    {
      auto& [n, pending] = stack.back();
      if ( pending.empty() )
      {
        state[n] = 2u;
        order.push_back( n );
        stack.pop_back();
        continue;
      }
      auto const c = pending.back();
      pending.pop_back();
      if ( state[c] == 1u )
        throw std::logic_error( "choice network contains a cycle" );
      if ( state[c] == 0u )
      {
        state[c] = 1u;
        stack.emplace_back( c, children_of( c ) );
      }
    }
  }
  return order;
}

logic_network choice_network::substitute( uint32_t member ) const
{
  auto const rep = repr( member );
  bool const ph = phase( member );
  logic_network out( net_.tag() );
  std::vector<signal> map( net_.size() );
  std::vector<uint8_t> state( net_.size(), 0u );
  state[0] = 2u;
  map[0] = out.get_constant( false );
  for ( auto pi : net_.pis() )
  {
    map[pi] = out.create_pi();
    state[pi] = 2u;
  }

  auto build = [&]( uint32_t root ) {
    std::vector<uint32_t> stack{ root };
    while ( !stack.empty() )
    {
      auto const n = stack.back();
      if ( state[n] == 2u )
      {
        stack.pop_back();
        continue;
      }
      state[n] = 1u;
      bool ready = true;
      auto need = [&]( uint32_t m ) {
        if ( state[m] == 2u )
          return;
        if ( state[m] == 1u )
          throw std::logic_error( "substitution closes a cycle" );
        stack.push_back( m );
        ready = false;
      };
      if ( n == rep && member != rep )
      {
        need( member );
        if ( ready )
        {
          map[n] = map[member] ^ ph;
          state[n] = 2u;
          stack.pop_back();
        }
        else
          state[n] = 0u;
        continue;
      }
      for ( auto f : net_.fanins( n ) )
        need( f.index() );
      if ( !ready )
      {
        state[n] = 0u;
        continue;
      }
      std::array<signal, 3> fs{};
      auto const fanins = net_.fanins( n );
      for ( uint32_t i = 0; i < fanins.size(); ++i )
        fs[i] = map[fanins[i].index()] ^ fanins[i].complemented();
      map[n] = out.strash_add( net_.kind( n ), std::span<const signal>( fs.data(), fanins.size() ) );
      state[n] = 2u;
      stack.pop_back();
    }
  };

  for ( auto po : net_.outputs() )
  {
    build( po.index() );
    out.create_po( map[po.index()] ^ po.complemented() );
  }
  return out;
}

std::string mch_stats::report() const
{
  std::string s = fmt::format( "critical={} non_critical={} generated={} deduplicated={} verified={} failed={} "
                               "rejected_cycle={} rejected_full={} skipped_mffc={} classes={} choices={}",
                               critical, non_critical, generated, deduplicated, verified, failed, rejected_cycle,
                               rejected_full, skipped_mffc, classes, choices );
  s += " class_sizes={";
  bool first = true;
  for ( auto const& [size, count] : class_sizes )
  {
    s += fmt::format( "{}{}:{}", first ? "" : ",", size, count );
    first = false;
  }
  s += fmt::format( "}} time={:.3f}s", seconds );
  return s;
}

choice_info multi_strategy_choices( logic_network const& net, node_set const& critical, network_cuts const& cuts,
                                    uint32_t mffc_leaves, strategy_library const& lib, mch_stats* stats )
{
  mch_stats local;
  auto& st = stats ? *stats : local;
  choice_info info{ net, net.size(), {} };
  if ( lib.empty() )
    return info;

  auto const refs = reference_counts( net );
  std::unordered_set<uint32_t> classified;
  std::vector<signal> leaves;

  auto consider = [&]( uint32_t n, candidate const& cand, truth_table const& f, std::span<const uint32_t> leaf_nodes ) {
    ++st.generated;
    auto const r = cand.root.index();
    if ( r < info.base_size || classified.count( r ) )
    {
      ++st.deduplicated;
      return;
    }
    if ( ( cut_truth( info.scratch, r, leaf_nodes ) ^ cand.root.complemented() ) != f )
    {
      ++st.failed;
      return;
    }
    ++st.verified;
    classified.insert( r );
    info.pairs.push_back( { n, cand.root, cand.source } );
  };

  auto signals_of = [&]( std::span<const uint32_t> leaf_nodes ) {
    leaves.clear();
    for ( auto l : leaf_nodes )
      leaves.emplace_back( l, false );
  };

  net.foreach_gate( [&]( uint32_t n ) {
    bool const is_critical = critical.count( n ) != 0u;
    ++( is_critical ? st.critical : st.non_critical );
    for ( auto const& c : cuts[n] )
    {
      if ( c.size == 1u && c.leaves[0] == n )
        continue;
      signals_of( c.leaf_span() );
      auto const cands = is_critical ? level_oriented_candidates( lib, c.function, info.scratch, leaves )
                                     : area_oriented_candidates( lib, c.function, info.scratch, leaves );
      for ( auto const& cand : cands )
        consider( n, cand, c.function, c.leaf_span() );
    }
    if ( is_critical )
      return;
    auto const cone = mffc( net, refs, n, mffc_leaves );
    if ( cone.degenerate )
      return;
    if ( cone.leaves.size() > 6u )
    {
      ++st.skipped_mffc;
      return;
    }
    auto const f = cut_truth( net, n, cone.leaves );
    signals_of( cone.leaves );
    for ( auto const& cand : area_oriented_candidates( lib, f, info.scratch, leaves ) )
      consider( n, cand, f, cone.leaves );
  } );
  return info;
}

choice_network assemble_choices( choice_info info, mch_params const& ps, mch_stats* stats )
{
  choice_network cn( std::move( info.scratch ) );
  cn.set_base_size( info.base_size );
  for ( auto const& p : info.pairs )
  {
    auto const s = cn.add_choice( p.repr, p.choice, ps.max_class_size );
    if ( !stats )
      continue;
    if ( s == choice_status::cycle )
      ++stats->rejected_cycle;
    else if ( s == choice_status::class_full )
      ++stats->rejected_full;
  }
  return cn;
}

namespace
{

void collect_class_stats( choice_network const& cn, mch_stats& st )
{
  st.classes = 0;
  st.choices = 0;
  st.class_sizes.clear();
  for ( auto rep : cn.representatives_with_choices() )
  {
    auto const size = static_cast<uint32_t>( cn.class_members( rep ).size() );
    ++st.classes;
    st.choices += size - 1u;
    ++st.class_sizes[size];
  }
}

} // namespace

choice_network build_mch( logic_network const& net, strategy_library const& lib, mch_params const& ps,
                          mch_stats* stats )
{
  auto const start = std::chrono::steady_clock::now();
  mch_stats local;
  auto& st = stats ? *stats : local;
  st = {};

  if ( ps.critical_ratio < 0.0 || ps.critical_ratio > 1.0 )
    throw std::invalid_argument( "critical ratio must lie in [0, 1]" );
  if ( ps.mffc_leaves < 1u )
    throw std::invalid_argument( "MFFC leaf bound must be positive" );
  if ( ps.max_class_size < 1u )
    throw std::invalid_argument( "class size bound must be positive" );

  auto const embedded = one_to_one_map( net, ps.mix_target.value_or( net.tag() ) );
  auto const critical = critical_path_collection( embedded, ps.critical_ratio );
  auto const cuts = enumerate_cuts( embedded, { ps.cut_size, ps.cut_limit } );
  auto info = multi_strategy_choices( embedded, critical, cuts, ps.mffc_leaves, lib, &st );
  auto cn = assemble_choices( std::move( info ), ps, &st );
  st.failed += check_choices( cn, ps.seed );
  collect_class_stats( cn, st );
  st.seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
  return cn;
}

choice_network add_external_choices( choice_network cn, logic_network const& other, uint32_t max_class_size )
{
  auto& arena = cn.network();
  if ( arena.num_pis() != other.num_pis() || arena.num_pos() != other.num_pos() )
    throw interface_error( fmt::format( "network interfaces differ: {}/{} vs {}/{} inputs/outputs", arena.num_pis(),
                                        arena.num_pos(), other.num_pis(), other.num_pos() ) );
  auto const verdict = cec( arena, other );
  if ( verdict.not_equivalent() )
    throw equivalence_error( fmt::format( "networks differ at output {}", verdict.output ) );

  /* gates the arena cannot hold are lowered by the create_* fallbacks */
  std::vector<signal> pi_map;
  for ( auto pi : arena.pis() )
    pi_map.emplace_back( pi, false );
  logic_network lowered( arena.tag() );
  if ( embeds_into( other.tag(), arena.tag() ) )
    lowered = other;
  else
  {
    std::vector<signal> pis;
    for ( uint32_t i = 0; i < other.num_pis(); ++i )
      pis.push_back( lowered.create_pi() );
    std::vector<signal> map( other.size() );
    map[0] = lowered.get_constant( false );
    for ( uint32_t i = 0; i < other.num_pis(); ++i )
      map[other.pi_at( i )] = pis[i];
    other.foreach_gate( [&]( uint32_t n ) {
      auto const f = other.fanins( n );
      auto in = [&]( uint32_t i ) { return map[f[i].index()] ^ f[i].complemented(); };
      switch ( other.kind( n ) )
      {
      case gate_kind::and2:
        map[n] = lowered.create_and( in( 0 ), in( 1 ) );
        break;
      case gate_kind::xor2:
        map[n] = lowered.create_xor( in( 0 ), in( 1 ) );
        break;
      default:
        map[n] = lowered.create_maj( in( 0 ), in( 1 ), in( 2 ) );
        break;
      }
    } );
    for ( auto po : other.outputs() )
      lowered.create_po( map[po.index()] ^ po.complemented() );
  }
  auto const outs = append_network( lowered, arena, pi_map );

  for ( uint32_t o = 0; o < arena.num_pos(); ++o )
  {
    auto const d = arena.po_at( o );
    auto const s = outs[o];
    if ( s.index() == d.index() )
      continue;
    cn.add_choice( cn.repr( d.index() ), s ^ d.complemented(), max_class_size );
  }
  check_choices( cn );
  return cn;
}

uint32_t check_choices( choice_network& cn, uint64_t seed )
{
  auto const reps = cn.representatives_with_choices();
  if ( reps.empty() )
    return 0;
  auto const& net = cn.network();
  pattern_block pb;
  if ( net.num_pis() <= 12u )
  {
    uint32_t const words = net.num_pis() <= 6u ? 1u : ( 1u << ( net.num_pis() - 6u ) );
    pb = exhaustive_patterns( net.num_pis(), 0u, words );
  }
  else
  {
    std::mt19937_64 rng( seed );
    pb = random_patterns( net.num_pis(), 157u, rng );
  }
  auto const values = simulate_nodes( net, pb );
  uint32_t const W = pb.words;
  uint32_t removed = 0;
  for ( auto rep : reps )
  {
    for ( auto m : cn.class_members( rep ) )
    {
      if ( m == rep )
        continue;
      uint64_t const flip = cn.phase( m ) ? ~0ull : 0ull;
      bool ok = true;
      for ( uint32_t w = 0; w < W && ok; ++w )
        ok = ( values[static_cast<std::size_t>( m ) * W + w] ^ flip ) == values[static_cast<std::size_t>( rep ) * W + w];
      if ( !ok )
      {
        cn.remove_choice( m );
        ++removed;
      }
    }
  }
  return removed;
}

std::vector<std::string> choice_invariant_violations( choice_network const& cn )
{
  std::vector<std::string> out;
  auto const& net = cn.network();
  std::vector<uint32_t> owner( net.size(), choice_network::none );
  for ( uint32_t n = 0; n < net.size(); ++n )
  {
    auto const r = cn.repr( n );
    if ( r == n )
      continue;
    if ( n < cn.base_size() )
      out.push_back( fmt::format( "base node {} is a choice", n ) );
    if ( !cn.is_representative( r ) )
      out.push_back( fmt::format( "node {} points to non-representative {}", n, r ) );
  }
  for ( auto rep : cn.representatives_with_choices() )
  {
    if ( rep >= cn.base_size() )
      out.push_back( fmt::format( "representative {} is not a base node", rep ) );
    uint32_t steps = 0;
    for ( auto m = cn.next( rep ); m != choice_network::none; m = cn.next( m ) )
    {
      if ( ++steps > net.size() )
      {
        out.push_back( fmt::format( "class of {} does not terminate", rep ) );
        break;
      }
      if ( owner[m] != choice_network::none )
        out.push_back( fmt::format( "node {} appears in two classes", m ) );
      owner[m] = rep;
      if ( cn.repr( m ) != rep )
        out.push_back( fmt::format( "node {} listed under {} but points to {}", m, rep, cn.repr( m ) ) );
      if ( transitive_fanin( net, m ).count( rep ) )
        out.push_back( fmt::format( "representative {} lies in the fanin cone of its choice {}", rep, m ) );
    }
  }
  return out;
}

} // namespace mch
