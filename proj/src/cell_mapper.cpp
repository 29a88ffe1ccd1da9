#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "mch/errors.hpp"
#include "mch/mapper.hpp"
#include "mch/npn.hpp"

namespace mch
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double eps = 1e-9;
constexpr uint32_t via_inverter = std::numeric_limits<uint32_t>::max();
constexpr uint32_t unmatched = via_inverter - 1u;
/* cell index of a match that forwards pin 0 (a leaf, or the constant node) */
constexpr uint32_t wire = std::numeric_limits<uint32_t>::max();

struct pin_binding
{
  uint32_t leaf;
  bool phase;
};

struct match
{
  uint32_t cell;
  std::array<pin_binding, 6> pins;
};

/* cells grouped by NPN class */
class matcher
{
public:
  explicit matcher( cell_library const& lib ) : lib_( lib )
  {
    for ( uint32_t i = 0; i < lib.cells().size(); ++i )
    {
      auto const& c = lib.cells()[i];
      if ( c.num_inputs() < 2u )
        continue;
      auto const r = npn_canonize( c.function );
      classes_[key( r.canon )].push_back( { i, r.transform } );
    }
  }

  /* matches for both phases of a cut function over `leaves` */
  void match_cut( cut const& c, std::array<std::vector<match>, 2>& out )
  {
    std::array<uint8_t, 6> kept{};
    auto const f = shrink_to_support( c.function, kept );
    if ( f.num_vars() == 0u )
    {
      bool const value = ( f.raw() & 1u ) != 0u;
      out[0].push_back( { wire, { pin_binding{ 0u, value } } } );
      out[1].push_back( { wire, { pin_binding{ 0u, !value } } } );
      return;
    }
    if ( f.num_vars() == 1u )
    {
      bool const neg = f.raw() == 1u;
      out[0].push_back( { wire, { pin_binding{ c.leaves[kept[0]], neg } } } );
      out[1].push_back( { wire, { pin_binding{ c.leaves[kept[0]], !neg } } } );
      return;
    }
    auto const& r = canonize( f );
    auto it = classes_.find( key( r.canon ) );
    if ( it == classes_.end() )
      return;
    auto const inv = inverse( r.transform );
    for ( auto const& [cell_index, u] : it->second )
    {
      auto const& g = lib_.cells()[cell_index].function;
      npn_transform w;
      w.num_vars = u.num_vars;
      w.output_neg = inv.output_neg != u.output_neg;
      for ( uint32_t i = 0; i < u.num_vars; ++i )
      {
        w.perm[i] = inv.perm[u.perm[i]];
        bool const neg = ( ( inv.input_neg >> u.perm[i] ) & 1u ) != ( ( u.input_neg >> i ) & 1u );
        if ( neg )
          w.input_neg |= static_cast<uint8_t>( 1u << i );
      }
      if ( !( apply_npn( g, w ) == f ) )
        continue;
      match m{ cell_index, {} };
      for ( uint32_t i = 0; i < u.num_vars; ++i )
        m.pins[i] = { c.leaves[kept[w.perm[i]]], ( ( w.input_neg >> i ) & 1u ) != 0u };
      out[w.output_neg ? 1 : 0].push_back( m );
    }
  }

  bool has_match( cut const& c )
  {
    std::array<std::vector<match>, 2> both;
    match_cut( c, both );
    return !both[0].empty() || !both[1].empty();
  }

private:
  static uint64_t key( truth_table const& t ) { return ( t.raw() << 3 ) ^ t.num_vars(); }

  npn_result const& canonize( truth_table const& f )
  {
    auto const k = ( static_cast<uint64_t>( f.num_vars() ) << 60 ) ^ f.raw();
    auto it = cache_.find( k );
    if ( it == cache_.end() )
      it = cache_.emplace( k, npn_canonize( f ) ).first;
    return it->second;
  }

  cell_library const& lib_;
  std::unordered_map<uint64_t, std::vector<std::pair<uint32_t, npn_transform>>> classes_;
  std::unordered_map<uint64_t, npn_result> cache_;
};

class cell_mapper
{
public:
  cell_mapper( choice_network const& cn, cell_library const& lib, map_params const& ps )
      : cn_( cn ), net_( cn.network() ), lib_( lib ), ps_( ps )
  {
  }

  mapped_netlist run()
  {
    if ( ps_.rounds < 1u )
      throw std::invalid_argument( "mapping needs at least one round" );
    inv_ = lib_.inverter();
    inv_area_ = lib_.cells()[inv_].area;
    inv_delay_ = lib_.cells()[inv_].pin_delays[0];
    order_ = cn_.topological_order();
    compute_matches();
    init();

    mapped_netlist result;
    select_round( false );
    auto [area, delay] = cover();
    double const target = delay;
    result.round_area.push_back( area );
    result.round_delay.push_back( delay );

    /* area-flow recovery; constrained rounds keep the first-round delay */
    std::vector<bool> rounds;
    uint32_t const r = ps_.mode == map_mode::balanced ? 4u : ps_.rounds;
    for ( uint32_t i = 1; i < r; ++i )
      rounds.push_back( true );
    if ( ps_.mode == map_mode::area )
    {
      for ( uint32_t i = 1; i < std::max( r, 2u ); ++i )
        rounds.push_back( false );
    }
    for ( bool constrained : rounds )
    {
      update_estimates();
      compute_required( constrained ? target : inf );
      auto const saved_sel = sel_;
      auto const saved_arr = arr_;
      auto const saved_flow = flow_;
      select_round( true );
      auto const [new_area, new_delay] = cover();
      if ( new_area > area + eps || ( constrained && new_delay > target + eps ) )
      {
        sel_ = saved_sel;
        arr_ = saved_arr;
        flow_ = saved_flow;
        cover();
      }
      else
      {
        area = new_area;
        delay = new_delay;
      }
      result.round_area.push_back( area );
      result.round_delay.push_back( delay );
    }
    extract( result );
    return result;
  }

private:
  static std::size_t slot( uint32_t n, bool p ) { return 2u * n + ( p ? 1u : 0u ); }

  void compute_matches()
  {
    matcher m( lib_ );
    auto const cuts = cost_ranked_choice_cuts( cn_, { ps_.cut_size, ps_.cut_limit },
                                               [&]( cut const& c ) { return m.has_match( c ); } );
    matches_.resize( 2u * net_.size() );
    for ( uint32_t n = 0; n < net_.size(); ++n )
    {
      if ( !net_.is_gate( n ) )
        continue;
      std::array<std::vector<match>, 2> both;
      for ( std::size_t i = 0; i + 1u < cuts[n].size(); ++i )
        m.match_cut( cuts[n][i], both );
      matches_[slot( n, false )] = std::move( both[0] );
      matches_[slot( n, true )] = std::move( both[1] );
    }
  }

  void init()
  {
    std::size_t const n = 2u * net_.size();
    sel_.assign( n, unmatched );
    arr_.assign( n, inf );
    flow_.assign( n, inf );
    refs_.assign( n, 0u );
    required_.assign( n, inf );
    est_.assign( n, 0.0 );
    net_.foreach_gate( [&]( uint32_t g ) {
      for ( auto f : net_.fanins( g ) )
        est_[slot( f.index(), f.complemented() )] += 1.0;
    } );
    for ( auto po : net_.outputs() )
      est_[slot( po.index(), po.complemented() )] += 1.0;
    for ( auto& e : est_ )
      e = std::max( e, 1.0 );
  }

  std::pair<double, double> evaluate( match const& m, bool with_flow ) const
  {
    if ( m.cell == wire )
    {
      auto const s = slot( m.pins[0].leaf, m.pins[0].phase );
      return { arr_[s], flow_[s] };
    }
    auto const& c = lib_.cells()[m.cell];
    double a = 0.0, f = c.area;
    for ( uint32_t i = 0; i < c.num_inputs(); ++i )
    {
      auto const s = slot( m.pins[i].leaf, m.pins[i].phase );
      a = std::max( a, arr_[s] + c.pin_delays[i] );
      if ( with_flow )
        f += flow_[s] / est_[s];
    }
    return { a, f };
  }

  void select_round( bool area_oriented )
  {
    for ( auto n : order_ )
    {
      if ( n == 0u )
      {
        for ( bool p : { false, true } )
        {
          arr_[slot( n, p )] = 0.0;
          flow_[slot( n, p )] = 0.0;
        }
        continue;
      }
      if ( net_.is_pi( n ) )
      {
        arr_[slot( n, false )] = 0.0;
        flow_[slot( n, false )] = 0.0;
        sel_[slot( n, true )] = via_inverter;
        arr_[slot( n, true )] = inv_delay_;
        flow_[slot( n, true )] = inv_area_;
        continue;
      }
      if ( !net_.is_gate( n ) )
        continue;
      for ( bool p : { false, true } )
      {
        auto const s = slot( n, p );
        uint32_t best = unmatched, fastest = unmatched;
        double best_arr = inf, best_flow = inf, fastest_arr = inf;
        auto const& ms = matches_[s];
        for ( uint32_t i = 0; i < ms.size(); ++i )
        {
          auto const [a, f] = evaluate( ms[i], true );
          if ( a < fastest_arr )
          {
            fastest_arr = a;
            fastest = i;
          }
          if ( area_oriented && a > required_[s] + eps )
            continue;
          bool const better = area_oriented ? ( f < best_flow - eps || ( f < best_flow + eps && a < best_arr - eps ) )
                                            : ( a < best_arr - eps || ( a < best_arr + eps && f < best_flow - eps ) );
          if ( better )
          {
            best = i;
            best_arr = a;
            best_flow = f;
          }
        }
        if ( best == unmatched && fastest != unmatched )
        {
          best = fastest;
          std::tie( best_arr, best_flow ) = evaluate( ms[fastest], true );
        }
        sel_[s] = best;
        arr_[s] = best_arr;
        flow_[s] = best_flow;
      }
      /* an inverter on the other phase may be the better implementation */
      for ( bool p : { false, true } )
      {
        auto const s = slot( n, p ), o = slot( n, !p );
        if ( sel_[o] == unmatched || sel_[o] == via_inverter )
          continue;
        double const a = arr_[o] + inv_delay_;
        double const f = flow_[o] + inv_area_;
        bool better;
        if ( sel_[s] == unmatched )
          better = true;
        else if ( area_oriented )
          better = a <= required_[s] + eps && ( f < flow_[s] - eps || arr_[s] > required_[s] + eps );
        else
          better = a < arr_[s] - eps || ( a < arr_[s] + eps && f < flow_[s] - eps );
        if ( better )
        {
          sel_[s] = via_inverter;
          arr_[s] = a;
          flow_[s] = f;
        }
      }
    }
  }

  double ref( uint32_t n, bool p )
  {
    if ( n == 0u || ( net_.is_pi( n ) && !p ) )
      return 0.0;
    auto const s = slot( n, p );
    if ( refs_[s]++ > 0u )
      return 0.0;
    if ( sel_[s] == unmatched )
      throw library_incomplete(
          fmt::format( "no cell implements node {} in {} phase", n, p ? "negative" : "positive" ) );
    if ( sel_[s] == via_inverter )
      return inv_area_ + ref( n, !p );
    auto const& m = matches_[s][sel_[s]];
    if ( m.cell == wire )
      return ref( m.pins[0].leaf, m.pins[0].phase );
    auto const& c = lib_.cells()[m.cell];
    double area = c.area;
    for ( uint32_t i = 0; i < c.num_inputs(); ++i )
      area += ref( m.pins[i].leaf, m.pins[i].phase );
    return area;
  }

  std::pair<double, double> cover()
  {
    std::fill( refs_.begin(), refs_.end(), 0u );
    double area = 0.0, delay = 0.0;
    for ( auto po : net_.outputs() )
    {
      area += ref( po.index(), po.complemented() );
      delay = std::max( delay, arr_[slot( po.index(), po.complemented() )] );
    }
    return { area, delay };
  }

  void compute_required( double target )
  {
    std::fill( required_.begin(), required_.end(), inf );
    if ( target == inf )
      return;
    for ( auto po : net_.outputs() )
    {
      auto const s = slot( po.index(), po.complemented() );
      required_[s] = std::min( required_[s], target );
    }
    for ( auto it = order_.rbegin(); it != order_.rend(); ++it )
    {
      auto const n = *it;
      if ( n == 0u )
        continue;
      /* inverter outputs first so that the driven phase sees their requirement */
      for ( bool p : { false, true } )
      {
        auto const s = slot( n, p );
        if ( refs_[s] > 0u && sel_[s] == via_inverter )
          required_[slot( n, !p )] = std::min( required_[slot( n, !p )], required_[s] - inv_delay_ );
      }
      for ( bool p : { false, true } )
      {
        auto const s = slot( n, p );
        if ( refs_[s] == 0u || sel_[s] == via_inverter || sel_[s] == unmatched || !net_.is_gate( n ) )
          continue;
        auto const& m = matches_[s][sel_[s]];
        if ( m.cell == wire )
        {
          auto const l = slot( m.pins[0].leaf, m.pins[0].phase );
          required_[l] = std::min( required_[l], required_[s] );
          continue;
        }
        auto const& c = lib_.cells()[m.cell];
        for ( uint32_t i = 0; i < c.num_inputs(); ++i )
        {
          auto const l = slot( m.pins[i].leaf, m.pins[i].phase );
          required_[l] = std::min( required_[l], required_[s] - c.pin_delays[i] );
        }
      }
    }
  }

  void update_estimates()
  {
    for ( std::size_t s = 0; s < est_.size(); ++s )
      est_[s] = std::max( 1.0, ( 2.0 * est_[s] + refs_[s] ) / 3.0 );
  }

  void extract( mapped_netlist& m )
  {
    m.luts = false;
    m.pis.assign( net_.pis().begin(), net_.pis().end() );
    auto const& inv_cell = lib_.cells()[inv_];
    /* the value that actually carries (n, p) once wires are skipped */
    auto resolve = [&]( uint32_t n, bool p ) {
      while ( n != 0u && net_.is_gate( n ) )
      {
        auto const sl = sel_[slot( n, p )];
        if ( sl == via_inverter || sl == unmatched || matches_[slot( n, p )][sl].cell != wire )
          break;
        auto const pin = matches_[slot( n, p )][sl].pins[0];
        n = pin.leaf;
        p = pin.phase;
      }
      return std::pair{ n, p };
    };
    auto emit_inverter = [&]( uint32_t n, bool p ) {
      mapped_gate g;
      g.root = n;
      g.phase = p;
      g.inputs.push_back( resolve( n, !p ) );
      g.function = inv_cell.function;
      g.cell = static_cast<int32_t>( inv_ );
      g.area = inv_cell.area;
      g.pin_delays = inv_cell.pin_delays;
      m.gates.push_back( std::move( g ) );
    };
    for ( auto n : order_ )
    {
      if ( n == 0u )
        continue;
      if ( net_.is_pi( n ) )
      {
        if ( refs_[slot( n, true )] > 0u )
          emit_inverter( n, true );
        continue;
      }
      if ( !net_.is_gate( n ) )
        continue;
      for ( bool p : { false, true } )
      {
        auto const s = slot( n, p );
        if ( refs_[s] == 0u || sel_[s] == via_inverter )
          continue;
        auto const& mt = matches_[s][sel_[s]];
        if ( mt.cell == wire )
          continue;
        auto const& c = lib_.cells()[mt.cell];
        mapped_gate g;
        g.root = n;
        g.phase = p;
        for ( uint32_t i = 0; i < c.num_inputs(); ++i )
          g.inputs.push_back( resolve( mt.pins[i].leaf, mt.pins[i].phase ) );
        g.function = c.function;
        g.cell = static_cast<int32_t>( mt.cell );
        g.area = c.area;
        g.pin_delays = c.pin_delays;
        m.gates.push_back( std::move( g ) );
      }
      for ( bool p : { false, true } )
      {
        auto const s = slot( n, p );
        if ( refs_[s] > 0u && sel_[s] == via_inverter )
          emit_inverter( n, p );
      }
    }
    for ( auto po : net_.outputs() )
      m.outputs.push_back( resolve( po.index(), po.complemented() ) );
    m.compute_stats();
  }

  choice_network const& cn_;
  logic_network const& net_;
  cell_library const& lib_;
  map_params ps_;
  uint32_t inv_{ 0 };
  double inv_area_{ 0.0 };
  double inv_delay_{ 0.0 };
  std::vector<uint32_t> order_;
  std::vector<std::vector<match>> matches_;
  std::vector<uint32_t> sel_;
  std::vector<double> arr_;
  std::vector<double> flow_;
  std::vector<double> est_;
  std::vector<uint32_t> refs_;
  std::vector<double> required_;
};

} // namespace

mapped_netlist map_cells( choice_network const& cn, cell_library const& lib, map_params const& ps )
{
  return cell_mapper( cn, lib, ps ).run();
}

mapped_netlist map_cells( logic_network const& net, cell_library const& lib, map_params const& ps )
{
  return map_cells( choice_network( net ), lib, ps );
}

} // namespace mch
