#include "mch/graphmap.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

#include "mch/analysis.hpp"
#include "map_schedule.hpp"

namespace mch
{

graph_target_library graph_target_library::standard( repr_tag target )
{
  return { target, &npn4_database::shared() };
}

bool graph_target_library::function_complete() const
{
  if ( !db || !db->has( target ) )
    return false;
  std::array<signal, 4> leaves{};
  for ( uint64_t word : { 0x8888ull, 0x6666ull } ) /* AND and XOR; constants and literals need no gate */
  {
    auto const b = bind_npn4( truth_table( 4, word ), leaves );
    if ( !b || db->lookup( b->canon, target ).empty() )
      return false;
  }
  return true;
}

namespace
{

using detail::round_kind;
using detail::round_spec;

constexpr uint32_t no_time = std::numeric_limits<uint32_t>::max();
/* template index of a cut that forwards a literal or a constant */
constexpr int32_t literal_template = -1;

struct template_choice
{
  truth_table canon;
  /* sorted by (depth, size); empty for literal functions */
  std::span<const structure_template> templates;
  bool literal{ false };
};

/* one way to implement a node: a cut and a template of its class */
struct option
{
  uint32_t cut;
  int32_t tmpl;
  uint32_t depth;
  uint32_t size;
};

class graph_mapper
{
public:
  graph_mapper( choice_network const& cn, graph_target_library const& tl, map_params const& ps )
      : cn_( cn ), net_( cn.network() ), tl_( tl ), ps_( ps )
  {
  }

  logic_network run()
  {
    if ( !tl_.function_complete() )
      throw std::invalid_argument(
          fmt::format( "graph-mapping library for {} is not function-complete", to_string( tl_.target ) ) );
    if ( ps_.rounds < 1u )
      throw std::invalid_argument( "mapping needs at least one round" );
    uint32_t const k = std::clamp( ps_.cut_size, 3u, 4u );
    cuts_ = cost_ranked_choice_cuts( cn_, { k, ps_.cut_limit }, [&]( cut const& c ) {
      auto const& tc = choice_for( c.function );
      return tc.literal || !tc.templates.empty();
    } );
    order_ = cn_.topological_order();
    collect_options();
    init();

    select_round( { round_kind::delay, false } );
    auto [area, depth] = cover();
    uint32_t const target = depth;
    for ( auto const& r : detail::recovery_schedule( ps_ ) )
    {
      update_estimates();
      compute_required( r.constrained ? target : no_time );
      auto const saved_best = best_;
      auto const saved_arrival = arrival_;
      auto const saved_flow = flow_;
      select_round( r );
      auto const [new_area, new_depth] = cover();
      if ( new_area > area || ( r.constrained && new_depth > target ) )
      {
        best_ = saved_best;
        arrival_ = saved_arrival;
        flow_ = saved_flow;
        cover();
      }
      else
      {
        area = new_area;
        depth = new_depth;
      }
    }
    return build();
  }

private:
  template_choice const& choice_for( truth_table const& f )
  {
    auto const key = ( static_cast<uint64_t>( f.num_vars() ) << 60 ) ^ f.raw();
    if ( auto it = cache_.find( key ); it != cache_.end() )
      return it->second;
    template_choice tc;
    std::array<uint8_t, 6> kept{};
    if ( shrink_to_support( f, kept ).num_vars() <= 1u )
      tc.literal = true;
    else if ( auto const b = bind_npn4( f, dummy_leaves_ ); b )
    {
      tc.canon = b->canon;
      tc.templates = tl_.db->lookup( b->canon, tl_.target );
    }
    return cache_.emplace( key, tc ).first->second;
  }

  void collect_options()
  {
    options_.assign( net_.size(), {} );
    for ( uint32_t n = 0; n < net_.size(); ++n )
    {
      if ( !net_.is_gate( n ) )
        continue;
      auto const& set = cuts_[n];
      for ( uint32_t i = 0; i + 1u < set.size(); ++i )
      {
        auto const& tc = choice_for( set[i].function );
        if ( tc.literal )
        {
          options_[n].push_back( { i, literal_template, 0u, 0u } );
          continue;
        }
        if ( tc.templates.empty() )
          continue;
        /* fastest template first, then the smallest when it differs */
        options_[n].push_back( { i, 0, tc.templates[0].depth, tc.templates[0].size } );
        uint32_t smallest = 0;
        for ( uint32_t t = 1; t < tc.templates.size(); ++t )
        {
          if ( tc.templates[t].size < tc.templates[smallest].size )
            smallest = t;
        }
        if ( smallest != 0u )
          options_[n].push_back( { i, static_cast<int32_t>( smallest ), tc.templates[smallest].depth,
                                   tc.templates[smallest].size } );
      }
      if ( options_[n].empty() )
        throw std::invalid_argument( fmt::format( "no template implements node {}", n ) );
    }
  }

  void init()
  {
    uint32_t const n = net_.size();
    best_.assign( n, 0u );
    arrival_.assign( n, 0u );
    flow_.assign( n, 0.0 );
    refs_.assign( n, 0u );
    required_.assign( n, no_time );
    est_.assign( n, 0.0 );
    net_.foreach_gate( [&]( uint32_t g ) {
      for ( auto f : net_.fanins( g ) )
        est_[f.index()] += 1.0;
    } );
    for ( auto po : net_.outputs() )
      est_[po.index()] += 1.0;
    for ( auto& e : est_ )
      e = std::max( e, 1.0 );
  }

  cut const& cut_of( uint32_t n, option const& o ) const { return cuts_[n][o.cut]; }

  uint32_t option_arrival( uint32_t n, option const& o ) const
  {
    uint32_t a = 0;
    for ( auto l : cut_of( n, o ).leaf_span() )
      a = std::max( a, arrival_[l] );
    return a + o.depth;
  }

  double option_flow( uint32_t n, option const& o ) const
  {
    double f = o.size;
    for ( auto l : cut_of( n, o ).leaf_span() )
      f += flow_[l] / est_[l];
    return f;
  }

  uint32_t option_ref( uint32_t n, option const& o )
  {
    uint32_t area = o.size;
    for ( auto l : cut_of( n, o ).leaf_span() )
    {
      if ( net_.is_gate( l ) && refs_[l]++ == 0u )
        area += option_ref( l, options_[l][best_[l]] );
    }
    return area;
  }

  uint32_t option_deref( uint32_t n, option const& o )
  {
    uint32_t area = o.size;
    for ( auto l : cut_of( n, o ).leaf_span() )
    {
      if ( net_.is_gate( l ) && --refs_[l] == 0u )
        area += option_deref( l, options_[l][best_[l]] );
    }
    return area;
  }

  void select_round( round_spec const& r )
  {
    for ( auto n : order_ )
    {
      if ( !net_.is_gate( n ) )
        continue;
      auto const& opts = options_[n];
      bool const exact = r.kind == round_kind::exact_area && refs_[n] > 0u;
      if ( exact )
        option_deref( n, opts[best_[n]] );

      uint32_t const req = required_[n];
      std::size_t best = opts.size(), fastest = 0;
      uint32_t fastest_arr = no_time;
      std::tuple<double, double, double> best_key{};
      for ( std::size_t i = 0; i < opts.size(); ++i )
      {
        auto const& o = opts[i];
        uint32_t const arr = option_arrival( n, o );
        double const fl = option_flow( n, o );
        if ( arr < fastest_arr )
        {
          fastest_arr = arr;
          fastest = i;
        }
        if ( r.kind != round_kind::delay && req != no_time && arr > req )
          continue;
        uint32_t area = 0;
        if ( exact )
        {
          area = option_ref( n, o );
          option_deref( n, o );
        }
        auto const key = [&]() {
          switch ( r.kind )
          {
          case round_kind::delay:
            return std::tuple{ static_cast<double>( arr ), fl, 0.0 };
          case round_kind::exact_area:
            return std::tuple{ static_cast<double>( area ), static_cast<double>( arr ), fl };
          default:
            return std::tuple{ fl, static_cast<double>( arr ), 0.0 };
          }
        }();
        if ( best == opts.size() || key < best_key )
        {
          best = i;
          best_key = key;
        }
      }
      if ( best == opts.size() )
        best = fastest;
      best_[n] = static_cast<uint32_t>( best );
      arrival_[n] = option_arrival( n, opts[best] );
      flow_[n] = option_flow( n, opts[best] );
      if ( exact )
        option_ref( n, opts[best] );
    }
  }

  /* references from the outputs; returns (estimated gates, depth) */
  std::pair<uint32_t, uint32_t> cover()
  {
    std::fill( refs_.begin(), refs_.end(), 0u );
    uint32_t area = 0, depth = 0;
    for ( auto po : net_.outputs() )
    {
      auto const d = po.index();
      depth = std::max( depth, arrival_[d] );
      if ( net_.is_gate( d ) && refs_[d]++ == 0u )
        area += option_ref( d, options_[d][best_[d]] );
    }
    return { area, depth };
  }

  void compute_required( uint32_t target )
  {
    std::fill( required_.begin(), required_.end(), no_time );
    if ( target == no_time )
      return;
    for ( auto po : net_.outputs() )
      required_[po.index()] = std::min( required_[po.index()], target );
    for ( auto it = order_.rbegin(); it != order_.rend(); ++it )
    {
      auto const n = *it;
      if ( !net_.is_gate( n ) || refs_[n] == 0u || required_[n] == no_time )
        continue;
      auto const& o = options_[n][best_[n]];
      uint32_t const r = required_[n] >= o.depth ? required_[n] - o.depth : 0u;
      for ( auto l : cut_of( n, o ).leaf_span() )
        required_[l] = std::min( required_[l], r );
    }
  }

  void update_estimates()
  {
    for ( uint32_t n = 0; n < est_.size(); ++n )
      est_[n] = std::max( 1.0, ( 2.0 * est_[n] + refs_[n] ) / 3.0 );
  }

  logic_network build()
  {
    logic_network out( tl_.target );
    std::vector<signal> sig( net_.size() );
    sig[0] = out.get_constant( false );
    for ( auto pi : net_.pis() )
      sig[pi] = out.create_pi();
    std::vector<signal> leaves;
    for ( auto n : order_ )
    {
      if ( !net_.is_gate( n ) || refs_[n] == 0u )
        continue;
      auto const& o = options_[n][best_[n]];
      auto const& c = cut_of( n, o );
      leaves.clear();
      for ( auto l : c.leaf_span() )
        leaves.push_back( sig[l] );
      if ( o.tmpl == literal_template )
      {
        std::array<uint8_t, 6> kept{};
        auto const f = shrink_to_support( c.function, kept );
        if ( f.num_vars() == 0u )
          sig[n] = out.get_constant( ( f.raw() & 1u ) != 0u );
        else
          sig[n] = leaves[kept[0]] ^ ( f.raw() == 1u );
        continue;
      }
      auto const b = bind_npn4( c.function, leaves );
      auto const& t = choice_for( c.function ).templates[static_cast<uint32_t>( o.tmpl )];
      sig[n] = t.instantiate( out, b->inputs ) ^ b->output_neg;
    }
    for ( auto po : net_.outputs() )
      out.create_po( sig[po.index()] ^ po.complemented() );
    return cleanup( out );
  }

  choice_network const& cn_;
  logic_network const& net_;
  graph_target_library const& tl_;
  map_params ps_;
  network_cuts cuts_;
  std::vector<uint32_t> order_;
  std::vector<std::vector<option>> options_;
  std::unordered_map<uint64_t, template_choice> cache_;
  std::array<signal, 6> dummy_leaves_{};
  std::vector<uint32_t> best_;
  std::vector<uint32_t> arrival_;
  std::vector<double> flow_;
  std::vector<double> est_;
  std::vector<uint32_t> refs_;
  std::vector<uint32_t> required_;
};

struct metrics
{
  uint32_t nodes;
  uint32_t level;
};

metrics measure( logic_network const& net )
{
  return { count_live_gates( net ), compute_levels( net ).depth };
}

bool improves( metrics const& cand, metrics const& cur, map_mode mode )
{
  if ( mode == map_mode::delay )
    return std::tie( cand.level, cand.nodes ) < std::tie( cur.level, cur.nodes );
  return std::tie( cand.nodes, cand.level ) < std::tie( cur.nodes, cur.level );
}

bool fits( logic_network const& net, repr_tag target )
{
  bool ok = true;
  net.foreach_gate( [&]( uint32_t g ) { ok = ok && permits( target, net.kind( g ) ); } );
  return ok;
}

} // namespace

logic_network graph_map( choice_network const& cn, graph_target_library const& tl, map_params const& ps )
{
  return graph_mapper( cn, tl, ps ).run();
}

repr_tag default_mix( repr_tag target )
{
  return target == repr_tag::xmg ? repr_tag::mig : repr_tag::xmg;
}

std::string opt_loop_report::to_csv() const
{
  std::string s = "iteration,nodes,level,accepted\n";
  s += fmt::format( "0,{},{},1\n", initial_nodes, initial_level );
  for ( std::size_t i = 0; i < iterations.size(); ++i )
    s += fmt::format( "{},{},{},{}\n", i + 1u, iterations[i].nodes, iterations[i].level,
                      iterations[i].accepted ? 1 : 0 );
  return s;
}

optimize_result optimize_iterate( logic_network const& net, repr_tag target, repr_tag mix, optimize_params const& ps )
{
  if ( ps.max_iters < 1u )
    throw std::invalid_argument( "optimization needs at least one iteration" );
  auto const tl = graph_target_library::standard( target );
  std::vector<repr_tag> reprs{ mix };
  if ( target != mix )
    reprs.push_back( target );
  auto const lib = strategy_library::standard( reprs );
  repr_tag const arena = join( join( target, mix ), net.tag() );

  optimize_result res{ cleanup( net ), {} };
  auto cur = measure( res.network );
  res.report.initial_nodes = cur.nodes;
  res.report.initial_level = cur.level;
  bool must_convert = !fits( res.network, target );
  res.report.reason = loop_termination::max_iters;
  for ( uint32_t it = 0; it < ps.max_iters; ++it )
  {
    auto embedded = one_to_one_map( res.network, arena );
    logic_network cand( target );
    if ( ps.use_choices )
    {
      auto mp = ps.mch;
      mp.mix_target = arena;
      cand = graph_map( build_mch( embedded, lib, mp ), tl, ps.map );
    }
    else
      cand = graph_map( choice_network( std::move( embedded ) ), tl, ps.map );
    auto const m = measure( cand );
    bool const accepted = must_convert || improves( m, cur, ps.map.mode );
    res.report.iterations.push_back( { m.nodes, m.level, accepted } );
    if ( !accepted )
    {
      res.report.reason = loop_termination::fixpoint;
      break;
    }
    must_convert = false;
    res.network = std::move( cand );
    cur = m;
  }
  /* the input itself survives only if it already fits the target */
  if ( res.network.tag() != target )
    res.network = one_to_one_map( res.network, target );
  return res;
}

} // namespace mch
