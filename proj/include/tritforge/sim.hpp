/*!
  \file sim.hpp
  \brief Elaboration and cycle-based two-phase simulation

  A cycle is: clock-high phase (inputs applied, transparent-high latches
  pass, TLG outputs hold), falling edge (every TLG samples its inputs and
  latches the result), clock-low phase (new TLG outputs and
  transparent-low latches propagate).  Each phase is settled in one pass
  over a levelized order computed at elaboration time.

  Nets driven only by transmission gates may float.  A floating net keeps
  its previous value; reading it (or exporting it as an output) after the
  first falling edge is logged as a `float` event.  Two active drivers with
  different values raise simulation_error.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "cells.hpp"
#include "error.hpp"
#include "netlist.hpp"
#include "synth.hpp"
#include "tlg.hpp"
#include "trit.hpp"

namespace tritforge
{

inline constexpr std::size_t no_index = static_cast<std::size_t>( -1 );

struct FlatCell
{
  std::string name; /* hierarchical path, '/' separated */
  CellKind kind;
  std::vector<std::size_t> inputs; /* primitive pin order, clock excluded */
  std::vector<std::size_t> outputs;
  std::size_t clock{no_index};
  TlgWeights weights{};
  LatchPhase phase{LatchPhase::high};
  Trit value{};
};

struct FlatNet
{
  std::string name;
  NetKind kind{NetKind::signal};
  std::vector<std::size_t> drivers;
  std::vector<std::size_t> readers;
};

struct FlatPort
{
  std::string name;
  std::size_t net;
};

struct FlatNetlist
{
  std::string name;
  std::vector<FlatNet> nets;
  std::vector<FlatCell> cells;
  std::vector<FlatPort> inputs; /* data inputs, clock excluded */
  std::vector<FlatPort> outputs;
  std::optional<std::size_t> clock;
  std::vector<std::size_t> order_high;
  std::vector<std::size_t> order_low;

  [[nodiscard]] std::size_t net_index( std::string_view net ) const
  {
    for ( std::size_t i = 0; i < nets.size(); ++i )
    {
      if ( nets[i].name == net )
      {
        return i;
      }
    }
    throw invalid_value( "no net named '" + std::string( net ) + "' in " + name );
  }

  [[nodiscard]] std::size_t count( CellKind kind ) const
  {
    return static_cast<std::size_t>( std::count_if( cells.begin(), cells.end(), [&]( FlatCell const& c ) { return c.kind == kind; } ) );
  }
};

/* Pin names of primitive cells, in FlatCell::inputs / outputs order. */
struct PrimitivePins
{
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  bool clocked;
};

inline PrimitivePins const& primitive_pins( CellKind kind )
{
  static std::map<CellKind, PrimitivePins> const pins{
      {CellKind::NTI, {{"a"}, {"y"}, false}},
      {CellKind::PTI, {{"a"}, {"y"}, false}},
      {CellKind::STI_STD, {{"a"}, {"y"}, false}},
      {CellKind::BIN_INV, {{"a"}, {"y"}, false}},
      {CellKind::BIN_AND, {{"a", "b"}, {"y"}, false}},
      {CellKind::BIN_OR, {{"a", "b"}, {"y"}, false}},
      {CellKind::TGATE, {{"in", "en"}, {"out"}, false}},
      {CellKind::CONST, {{}, {"y"}, false}},
      {CellKind::TLG_RAW, {{"a", "b", "c", "d"}, {"o", "obar"}, true}},
      {CellKind::DLATCH, {{"d"}, {"q"}, true}},
  };
  auto it = pins.find( kind );
  if ( it == pins.end() )
  {
    throw invalid_value( std::string( to_string( kind ) ) + " is not a primitive cell" );
  }
  return it->second;
}

[[nodiscard]] inline bool is_primitive( CellKind kind )
{
  return cell_library().get( kind ).primitive;
}

/* Whether a cell passes its inputs combinationally while the clock is at the given level. */
[[nodiscard]] inline bool combinational_in_phase( FlatCell const& cell, bool clock_high )
{
  switch ( cell.kind )
  {
  case CellKind::TLG_RAW: return false;
  case CellKind::DLATCH: return ( cell.phase == LatchPhase::high ) == clock_high;
  default: return true;
  }
}

namespace detail
{

class Elaborator
{
public:
  explicit Elaborator( FlatNetlist& flat ) : flat_( flat ) {}

  void run( Netlist const& top )
  {
    top.validate();
    flat_.name = top.name();
    std::map<std::string, std::size_t> nets;
    for ( auto const& n : top.nets() )
    {
      nets[n.name] = map_net( n, n.name );
    }
    for ( auto const& p : top.ports() )
    {
      auto idx = nets.at( p.name );
      if ( p.dir == PortDir::out )
      {
        flat_.outputs.push_back( {p.name, idx} );
      }
      else if ( flat_.nets[idx].kind != NetKind::clock )
      {
        flat_.inputs.push_back( {p.name, idx} );
      }
    }
    std::vector<Netlist const*> scope{&top};
    expand( top, "", nets, scope );
  }

private:
  std::size_t map_net( Net const& n, std::string const& path )
  {
    if ( auto level = constant_level( n.kind ) )
    {
      auto& slot = constants_[level->value()];
      if ( slot == no_index )
      {
        slot = add_net( "$const" + std::string( 1, level->to_char() ), n.kind );
      }
      return slot;
    }
    return add_net( path, n.kind );
  }

  std::size_t add_net( std::string name, NetKind kind )
  {
    flat_.nets.push_back( {std::move( name ), kind, {}, {}} );
    return flat_.nets.size() - 1u;
  }

  static Netlist const* find_module( std::vector<Netlist const*> const& scope, std::string_view name )
  {
    for ( auto it = scope.rbegin(); it != scope.rend(); ++it )
    {
      if ( auto m = ( *it )->find_module( name ) )
      {
        return m;
      }
    }
    return nullptr;
  }

  static void check_bindings( Instance const& inst, std::vector<std::string> const& ports, std::string const& path )
  {
    for ( auto const& p : ports )
    {
      if ( !inst.net_of( p ) )
      {
        throw elaboration_error( "unbound port '" + p + "' on instance " + path + " (" + inst.kind + ")" );
      }
    }
    for ( auto const& c : inst.conns )
    {
      if ( std::find( ports.begin(), ports.end(), c.port ) == ports.end() )
      {
        throw elaboration_error( "instance " + path + " (" + inst.kind + ") has no port '" + c.port + "'" );
      }
    }
  }

  void expand( Netlist const& nl, std::string const& prefix, std::map<std::string, std::size_t> const& nets,
               std::vector<Netlist const*>& scope )
  {
    for ( auto const& inst : nl.instances() )
    {
      std::string const path = prefix + inst.id;
      Netlist const* sub = nullptr;
      auto kind = cell_kind_from_string( inst.kind );
      if ( kind )
      {
        auto const& spec = cell_library().get( *kind );
        if ( spec.primitive )
        {
          add_primitive( inst, *kind, path, nets );
          continue;
        }
        sub = &*spec.structure;
      }
      else
      {
        sub = find_module( scope, inst.kind );
        if ( sub == nullptr )
        {
          throw elaboration_error( "unknown cell '" + inst.kind + "' on instance " + path );
        }
        if ( std::find( scope.begin(), scope.end(), sub ) != scope.end() )
        {
          throw elaboration_error( "recursive instantiation of module '" + inst.kind + "' at " + path );
        }
      }

      std::vector<std::string> port_names;
      for ( auto const& p : sub->ports() )
      {
        port_names.push_back( p.name );
      }
      check_bindings( inst, port_names, path );

      std::map<std::string, std::size_t> inner;
      for ( auto const& n : sub->nets() )
      {
        bool const is_port = std::find( port_names.begin(), port_names.end(), n.name ) != port_names.end();
        if ( is_port )
        {
          inner[n.name] = nets.at( *inst.net_of( n.name ) );
        }
        else
        {
          if ( n.kind == NetKind::clock )
          {
            throw elaboration_error( "module " + sub->name() + " declares an internal clock '" + n.name +
                                     "'; only a single global clock is supported" );
          }
          inner[n.name] = map_net( n, path + "/" + n.name );
        }
      }
      scope.push_back( sub );
      expand( *sub, path + "/", inner, scope );
      scope.pop_back();
    }
  }

  void add_primitive( Instance const& inst, CellKind kind, std::string const& path, std::map<std::string, std::size_t> const& nets )
  {
    auto const& pins = primitive_pins( kind );
    std::vector<std::string> all = pins.inputs;
    all.insert( all.end(), pins.outputs.begin(), pins.outputs.end() );
    if ( pins.clocked )
    {
      all.push_back( "clk" );
    }
    check_bindings( inst, all, path );

    FlatCell cell;
    cell.name = path;
    cell.kind = kind;
    for ( auto const& p : pins.inputs )
    {
      cell.inputs.push_back( nets.at( *inst.net_of( p ) ) );
    }
    for ( auto const& p : pins.outputs )
    {
      cell.outputs.push_back( nets.at( *inst.net_of( p ) ) );
    }
    if ( pins.clocked )
    {
      cell.clock = nets.at( *inst.net_of( "clk" ) );
      if ( flat_.nets[cell.clock].kind != NetKind::clock )
      {
        throw elaboration_error( "clock pin of " + path + " is bound to non-clock net '" + flat_.nets[cell.clock].name + "'" );
      }
    }
    if ( kind == CellKind::TLG_RAW )
    {
      if ( !inst.params.weights )
      {
        throw elaboration_error( "TLG_RAW instance " + path + " has no weights" );
      }
      cell.weights = *inst.params.weights;
    }
    if ( kind == CellKind::DLATCH && inst.params.phase )
    {
      cell.phase = *inst.params.phase;
    }
    if ( kind == CellKind::CONST )
    {
      if ( !inst.params.value )
      {
        throw elaboration_error( "CONST instance " + path + " has no value" );
      }
      cell.value = *inst.params.value;
    }
    flat_.cells.push_back( std::move( cell ) );
  }

  FlatNetlist& flat_;
  std::array<std::size_t, 3> constants_{no_index, no_index, no_index};
};

/* Kahn's algorithm over the cells that are combinational in the given phase. */
inline std::vector<std::size_t> levelize( FlatNetlist const& flat, bool clock_high )
{
  std::size_t const n = flat.cells.size();
  std::vector<std::vector<std::size_t>> succ( n );
  std::vector<std::size_t> indegree( n, 0u );
  for ( std::size_t c = 0; c < n; ++c )
  {
    if ( !combinational_in_phase( flat.cells[c], clock_high ) )
    {
      continue;
    }
    for ( auto net : flat.cells[c].inputs )
    {
      for ( auto d : flat.nets[net].drivers )
      {
        succ[d].push_back( c );
        ++indegree[c];
      }
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for ( std::size_t c = 0; c < n; ++c )
  {
    if ( indegree[c] == 0u )
    {
      ready.push( c );
    }
  }
  std::vector<std::size_t> order;
  while ( !ready.empty() )
  {
    auto c = ready.top();
    ready.pop();
    order.push_back( c );
    for ( auto s : succ[c] )
    {
      if ( --indegree[s] == 0u )
      {
        ready.push( s );
      }
    }
  }
  if ( order.size() == n )
  {
    return order;
  }

  // walk backwards along unresolved predecessors until a cell repeats
  std::size_t start = 0;
  while ( indegree[start] == 0u )
  {
    ++start;
  }
  std::vector<std::size_t> path;
  std::map<std::size_t, std::size_t> seen;
  std::size_t cur = start;
  while ( !seen.count( cur ) )
  {
    seen[cur] = path.size();
    path.push_back( cur );
    std::size_t next = no_index;
    for ( auto net : flat.cells[cur].inputs )
    {
      for ( auto d : flat.nets[net].drivers )
      {
        if ( indegree[d] != 0u && combinational_in_phase( flat.cells[d], clock_high ) )
        {
          next = d;
          break;
        }
      }
      if ( next != no_index )
      {
        break;
      }
    }
    cur = next;
  }
  std::string cycle;
  for ( std::size_t i = path.size(); i-- > seen[cur]; )
  {
    cycle += flat.cells[path[i]].name + " -> ";
  }
  cycle += flat.cells[cur].name;
  throw elaboration_error( std::string( "combinational loop" ) + ( flat.clock ? clock_high ? " (clock high)" : " (clock low)" : "" ) +
                           ": " + cycle );
}

} // namespace detail

/*! \brief Expands a hierarchical netlist down to primitive cells.

  Composite library cells and user modules are inlined, port bindings are
  resolved and both clock phases are levelized.  Loops through a latch in
  its opaque phase or through a TLG are legal; a loop that is
  combinational in either phase is rejected and reported.
*/
inline FlatNetlist elaborate( Netlist const& netlist )
{
  FlatNetlist flat;
  detail::Elaborator( flat ).run( netlist );

  for ( std::size_t c = 0; c < flat.cells.size(); ++c )
  {
    for ( auto n : flat.cells[c].outputs )
    {
      flat.nets[n].drivers.push_back( c );
    }
    for ( auto n : flat.cells[c].inputs )
    {
      flat.nets[n].readers.push_back( c );
    }
  }

  for ( std::size_t i = 0; i < flat.nets.size(); ++i )
  {
    auto const& net = flat.nets[i];
    if ( net.kind == NetKind::clock )
    {
      if ( flat.clock && *flat.clock != i )
      {
        throw elaboration_error( "multiple clock nets ('" + flat.nets[*flat.clock].name + "', '" + net.name +
                                 "'); only a single clock domain is supported" );
      }
      flat.clock = i;
    }
    if ( net.drivers.empty() )
    {
      continue;
    }
    if ( net.kind != NetKind::signal )
    {
      throw elaboration_error( "net '" + net.name + "' of kind " + std::string( to_string( net.kind ) ) + " is driven by " +
                               flat.cells[net.drivers.front()].name );
    }
    if ( std::any_of( flat.inputs.begin(), flat.inputs.end(), [&]( FlatPort const& p ) { return p.net == i; } ) )
    {
      throw elaboration_error( "input port net '" + net.name + "' is driven by " + flat.cells[net.drivers.front()].name );
    }
    if ( net.drivers.size() > 1u )
    {
      for ( auto d : net.drivers )
      {
        if ( flat.cells[d].kind != CellKind::TGATE )
        {
          throw elaboration_error( "net '" + net.name + "' has several drivers including non-switch cell " + flat.cells[d].name );
        }
      }
    }
  }

  bool const any_clocked = std::any_of( flat.cells.begin(), flat.cells.end(), []( FlatCell const& c ) { return c.clock != no_index; } );
  if ( any_clocked && !flat.clock )
  {
    throw elaboration_error( "clocked cells present but no clock net" );
  }

  flat.order_high = detail::levelize( flat, true );
  flat.order_low = detail::levelize( flat, false );
  return flat;
}

/*! \brief Cycles after which outputs are settled when inputs are held.

  Longest path counting every TLG and latch as one stage (conservative for
  transparent latches); at least one.  Falls back to the number of
  sequential cells plus one if the circuit has feedback through state.
*/
inline std::size_t required_settle_cycles( FlatNetlist const& flat )
{
  std::size_t const n = flat.cells.size();
  std::vector<std::vector<std::size_t>> succ( n );
  std::vector<std::size_t> indegree( n, 0u );
  std::size_t sequential = 0;
  for ( std::size_t c = 0; c < n; ++c )
  {
    if ( flat.cells[c].clock != no_index )
    {
      ++sequential;
    }
    for ( auto net : flat.cells[c].inputs )
    {
      for ( auto d : flat.nets[net].drivers )
      {
        succ[d].push_back( c );
        ++indegree[c];
      }
    }
  }
  std::vector<std::size_t> depth( n, 0u );
  std::vector<std::size_t> ready;
  for ( std::size_t c = 0; c < n; ++c )
  {
    if ( indegree[c] == 0u )
    {
      ready.push_back( c );
    }
  }
  std::size_t visited = 0, longest = 0;
  while ( !ready.empty() )
  {
    auto c = ready.back();
    ready.pop_back();
    ++visited;
    std::size_t const own = depth[c] + ( flat.cells[c].clock != no_index ? 1u : 0u );
    longest = std::max( longest, own );
    for ( auto s : succ[c] )
    {
      depth[s] = std::max( depth[s], own );
      if ( --indegree[s] == 0u )
      {
        ready.push_back( s );
      }
    }
  }
  if ( visited != n )
  {
    return sequential + 1u;
  }
  return std::max<std::size_t>( longest, 1u );
}

enum class Phase
{
  high,
  low
};

inline std::string_view to_string( Phase p )
{
  return p == Phase::high ? "high" : "low";
}

enum class EventKind
{
  float_read,      /* floating net consumed or exported */
  unevaluated_tlg, /* TLG output consumed before its first falling edge */
  nonbinary_control
};

inline std::string_view to_string( EventKind k )
{
  switch ( k )
  {
  case EventKind::float_read: return "float";
  case EventKind::unevaluated_tlg: return "unevaluated-tlg";
  case EventKind::nonbinary_control: return "nonbinary-control";
  }
  return "?";
}

struct SimEvent
{
  EventKind kind;
  std::size_t cycle;
  Phase phase;
  std::string where;

  friend bool operator==( SimEvent const&, SimEvent const& ) = default;
};

/* Sampled net value; nullopt is the Z marker (no active driver). */
using TraceValue = std::optional<Trit>;

inline char to_char( TraceValue v )
{
  return v ? v->to_char() : 'Z';
}

/* Input values for one cycle, in FlatNetlist::inputs order. */
struct CycleStimulus
{
  std::vector<Trit> high;
  std::optional<std::vector<Trit>> low; /* changes applied after the falling edge */
};

class Simulator
{
public:
  explicit Simulator( FlatNetlist const& flat )
      : flat_( flat ),
        held_( flat.nets.size(), Trit{0} ),
        sample_( flat.nets.size(), std::nullopt ),
        resolved_( flat.nets.size(), 0u ),
        inputs_( flat.inputs.size(), Trit{0} ),
        latch_( flat.cells.size(), Trit{0} )
  {
    std::size_t offset = 0;
    for ( std::size_t c = 0; c < flat.cells.size(); ++c )
    {
      out_offset_.push_back( offset );
      offset += flat.cells[c].outputs.size();
      if ( flat.cells[c].kind == CellKind::TLG_RAW )
      {
        tlg_slot_.push_back( tlgs_.size() );
        tlgs_.emplace_back( flat.cells[c].weights );
      }
      else
      {
        tlg_slot_.push_back( no_index );
      }
    }
    drive_.assign( offset, std::nullopt );
    input_slot_.assign( flat.nets.size(), no_index );
    for ( std::size_t k = 0; k < flat.inputs.size(); ++k )
    {
      input_slot_[flat.inputs[k].net] = k;
    }
  }

  void set_inputs( std::span<Trit const> values )
  {
    if ( values.size() != inputs_.size() )
    {
      throw invalid_value( "expected " + std::to_string( inputs_.size() ) + " input values, got " + std::to_string( values.size() ) );
    }
    inputs_.assign( values.begin(), values.end() );
  }

  /*! \brief Runs one full clock cycle; returns after the clock-low phase has settled.

    `on_phase` is called after each phase has settled.
  */
  void cycle( CycleStimulus const& stim, std::function<void( Phase )> const& on_phase = {} )
  {
    set_inputs( stim.high );
    settle( Phase::high );
    if ( on_phase )
    {
      on_phase( Phase::high );
    }
    falling_edge();
    if ( stim.low )
    {
      set_inputs( *stim.low );
    }
    settle( Phase::low );
    if ( on_phase )
    {
      on_phase( Phase::low );
    }
    ++cycle_;
  }

private:
  void settle( Phase phase )
  {
    phase_ = phase;
    ++epoch_;
    auto const& order = phase == Phase::high ? flat_.order_high : flat_.order_low;
    for ( auto c : order )
    {
      evaluate( c );
    }
    for ( std::size_t n = 0; n < flat_.nets.size(); ++n )
    {
      resolve( n );
    }
    for ( auto const& p : flat_.outputs )
    {
      note_read( p.net );
    }
  }

  void falling_edge()
  {
    for ( std::size_t c = 0; c < flat_.cells.size(); ++c )
    {
      auto const& cell = flat_.cells[c];
      if ( cell.kind == CellKind::TLG_RAW )
      {
        auto& tlg = tlgs_[tlg_slot_[c]];
        tlg.step( ClockEdge::falling, held_[cell.inputs[0]], held_[cell.inputs[1]], held_[cell.inputs[2]], held_[cell.inputs[3]] );
      }
    }
    edge_seen_ = true;
  }

public:
  [[nodiscard]] TraceValue value( std::size_t net ) const { return sample_[net]; }

  [[nodiscard]] std::vector<TraceValue> output_values() const
  {
    std::vector<TraceValue> r;
    for ( auto const& p : flat_.outputs )
    {
      r.push_back( sample_[p.net] );
    }
    return r;
  }

  [[nodiscard]] std::vector<TraceValue> const& samples() const noexcept { return sample_; }
  [[nodiscard]] std::vector<SimEvent> const& events() const noexcept { return events_; }
  [[nodiscard]] std::size_t cycles_run() const noexcept { return cycle_; }
  [[nodiscard]] FlatNetlist const& netlist() const noexcept { return flat_; }

  /* TGATE cells whose enable was high in the last settled phase. */
  [[nodiscard]] bool conducting( std::size_t cell ) const
  {
    return drive_[out_offset_[cell]].has_value();
  }

private:
  void evaluate( std::size_t c )
  {
    auto const& cell = flat_.cells[c];
    auto* out = &drive_[out_offset_[c]];
    switch ( cell.kind )
    {
    case CellKind::CONST: out[0] = cell.value; break;
    case CellKind::NTI: out[0] = nti( read( cell.inputs[0] ) ); break;
    case CellKind::PTI: out[0] = pti( read( cell.inputs[0] ) ); break;
    case CellKind::STI_STD: out[0] = sti( read( cell.inputs[0] ) ); break;
    case CellKind::BIN_INV: out[0] = bin_not( read( cell.inputs[0] ) ); break;
    case CellKind::BIN_AND: out[0] = bin_and( read( cell.inputs[0] ), read( cell.inputs[1] ) ); break;
    case CellKind::BIN_OR: out[0] = bin_or( read( cell.inputs[0] ), read( cell.inputs[1] ) ); break;
    case CellKind::TGATE:
    {
      Trit const en = read( cell.inputs[1] );
      if ( en == Trit{1} )
      {
        event( EventKind::nonbinary_control, cell.name );
      }
      out[0] = en.is_high() ? std::optional<Trit>( read( cell.inputs[0] ) ) : std::nullopt;
      break;
    }
    case CellKind::TLG_RAW:
    {
      auto const& tlg = tlgs_[tlg_slot_[c]];
      out[0] = tlg.output().o;
      out[1] = tlg.output().obar;
      break;
    }
    case CellKind::DLATCH:
      if ( combinational_in_phase( cell, phase_ == Phase::high ) )
      {
        latch_[c] = read( cell.inputs[0] );
      }
      out[0] = latch_[c];
      break;
    default: throw simulation_error( "cannot simulate non-primitive cell " + cell.name );
    }
  }

  Trit read( std::size_t net )
  {
    resolve( net );
    note_read( net );
    return held_[net];
  }

  void note_read( std::size_t net )
  {
    if ( !sample_[net] && edge_seen_ )
    {
      event( EventKind::float_read, flat_.nets[net].name );
    }
    for ( auto d : flat_.nets[net].drivers )
    {
      if ( flat_.cells[d].kind == CellKind::TLG_RAW && !tlgs_[tlg_slot_[d]].evaluated() )
      {
        event( EventKind::unevaluated_tlg, flat_.cells[d].name );
      }
    }
  }

  void resolve( std::size_t n )
  {
    if ( resolved_[n] == epoch_ )
    {
      return;
    }
    resolved_[n] = epoch_;
    auto const& net = flat_.nets[n];
    if ( auto level = constant_level( net.kind ) )
    {
      set_sample( n, *level );
      return;
    }
    if ( net.kind == NetKind::clock )
    {
      set_sample( n, phase_ == Phase::high ? trit_true : trit_false );
      return;
    }
    if ( input_slot_[n] != no_index )
    {
      set_sample( n, inputs_[input_slot_[n]] );
      return;
    }
    std::optional<Trit> value;
    std::size_t first_driver = no_index;
    for ( auto d : net.drivers )
    {
      auto const& cell = flat_.cells[d];
      auto const it = std::find( cell.outputs.begin(), cell.outputs.end(), n );
      auto const& dv = drive_[out_offset_[d] + static_cast<std::size_t>( it - cell.outputs.begin() )];
      if ( !dv )
      {
        continue;
      }
      if ( value && *value != *dv )
      {
        throw simulation_error( "driver contention on net '" + net.name + "' in cycle " + std::to_string( cycle_ ) + " (" +
                                std::string( to_string( phase_ ) ) + " phase): " + flat_.cells[first_driver].name + " drives " +
                                value->to_char() + ", " + cell.name + " drives " + dv->to_char() );
      }
      if ( !value )
      {
        value = dv;
        first_driver = d;
      }
    }
    if ( value )
    {
      set_sample( n, *value );
    }
    else
    {
      sample_[n] = std::nullopt;
    }
  }

  void set_sample( std::size_t n, Trit v )
  {
    sample_[n] = v;
    held_[n] = v;
  }

  void event( EventKind kind, std::string const& where )
  {
    SimEvent e{kind, cycle_, phase_, where};
    if ( logged_.insert( std::make_tuple( kind, cycle_, phase_ == Phase::high, where ) ).second )
    {
      events_.push_back( std::move( e ) );
    }
  }

  FlatNetlist const& flat_;
  std::vector<Trit> held_;
  std::vector<TraceValue> sample_;
  std::vector<std::uint64_t> resolved_;
  std::vector<Trit> inputs_;
  std::vector<Trit> latch_;
  std::vector<std::optional<Trit>> drive_;
  std::vector<std::size_t> out_offset_;
  std::vector<std::size_t> tlg_slot_;
  std::vector<TlgCell> tlgs_;
  std::vector<std::size_t> input_slot_;
  std::vector<SimEvent> events_;
  std::set<std::tuple<EventKind, std::size_t, bool, std::string>> logged_;
  std::uint64_t epoch_{0};
  std::size_t cycle_{0};
  Phase phase_{Phase::high};
  bool edge_seen_{false};
};

struct TraceSample
{
  std::size_t cycle;
  Phase phase;
  std::vector<TraceValue> values; /* indexed like Trace::nets */

  friend bool operator==( TraceSample const&, TraceSample const& ) = default;
};

/* Per half-phase samples of every net plus the events raised while simulating. */
struct Trace
{
  std::vector<std::string> nets;
  std::vector<TraceSample> samples;
  std::vector<SimEvent> events;

  [[nodiscard]] std::size_t net_index( std::string_view name ) const
  {
    auto it = std::find( nets.begin(), nets.end(), name );
    if ( it == nets.end() )
    {
      throw invalid_value( "trace has no net '" + std::string( name ) + "'" );
    }
    return static_cast<std::size_t>( it - nets.begin() );
  }

  [[nodiscard]] TraceValue at( std::size_t sample, std::string_view net ) const { return samples.at( sample ).values.at( net_index( net ) ); }

  friend bool operator==( Trace const&, Trace const& ) = default;
};

/*! \brief Simulates `cycles` clock cycles and samples every net after each phase.

  When the stimulus is shorter than `cycles`, its last row is held.
*/
inline Trace simulate( FlatNetlist const& flat, std::span<CycleStimulus const> stimulus, std::size_t cycles )
{
  Trace trace;
  for ( auto const& n : flat.nets )
  {
    trace.nets.push_back( n.name );
  }
  if ( cycles == 0u )
  {
    return trace;
  }
  if ( stimulus.empty() && !flat.inputs.empty() )
  {
    throw invalid_value( "stimulus is empty but " + flat.name + " has inputs" );
  }
  CycleStimulus const idle{};
  Simulator sim( flat );
  for ( std::size_t k = 0; k < cycles; ++k )
  {
    auto const& stim = stimulus.empty() ? idle : stimulus[std::min( k, stimulus.size() - 1u )];
    sim.cycle( stim, [&]( Phase phase ) { trace.samples.push_back( {k, phase, sim.samples()} ); } );
  }
  trace.events = sim.events();
  return trace;
}

/* Behavioral reference: data inputs in port order to outputs in port order. */
using Oracle = std::function<std::vector<Trit>( std::span<Trit const> )>;

struct Mismatch
{
  std::vector<Trit> inputs;
  std::vector<Trit> expected;
  std::vector<TraceValue> got;
};

struct VerifyReport
{
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::size_t combinations{0};
  std::size_t matched{0};
  std::vector<Mismatch> mismatches;
  std::vector<SimEvent> events;

  [[nodiscard]] bool passed() const noexcept { return mismatches.empty() && combinations == matched; }

  [[nodiscard]] std::size_t count( EventKind kind ) const
  {
    return static_cast<std::size_t>( std::count_if( events.begin(), events.end(), [&]( SimEvent const& e ) { return e.kind == kind; } ) );
  }
};

inline constexpr std::size_t max_verify_inputs = 10u;

struct VerifyOptions
{
  std::size_t settle_cycles{0}; /* 0: use required_settle_cycles */
  unsigned threads{1};
};

/*! \brief Holds every input combination for `settle_cycles` cycles and
    compares the settled clock-low outputs with the oracle.

  Combinations are visited in lexicographic order (first input most
  significant) in one continuous run per shard, so each check also
  exercises recovery from the previous state.
*/
inline VerifyReport verify_exhaustive( FlatNetlist const& flat, Oracle const& oracle, VerifyOptions const& opts = {} )
{
  std::size_t const arity = flat.inputs.size();
  if ( arity > max_verify_inputs )
  {
    throw invalid_value( flat.name + " has " + std::to_string( arity ) + " input trits; exhaustive verification is capped at " +
                         std::to_string( max_verify_inputs ) );
  }
  std::size_t const settle = opts.settle_cycles ? opts.settle_cycles : required_settle_cycles( flat );
  std::size_t const total = pow3( static_cast<unsigned>( arity ) );
  unsigned const shards = std::max( 1u, std::min<unsigned>( opts.threads, static_cast<unsigned>( total ) ) );

  struct Shard
  {
    std::size_t matched{0};
    std::vector<Mismatch> mismatches;
    std::vector<SimEvent> events;
    std::exception_ptr failure;
  };
  std::vector<Shard> results( shards );

  auto run = [&]( unsigned s ) {
    auto& out = results[s];
    try
    {
      Simulator sim( flat );
      std::size_t const begin = total * s / shards, end = total * ( s + 1u ) / shards;
      for ( std::size_t i = begin; i < end; ++i )
      {
        auto const in = input_tuple( i, static_cast<unsigned>( arity ) );
        CycleStimulus const stim{in, std::nullopt};
        for ( std::size_t k = 0; k < settle; ++k )
        {
          sim.cycle( stim );
        }
        auto const expected = oracle( in );
        auto const got = sim.output_values();
        bool ok = expected.size() == got.size();
        for ( std::size_t o = 0; ok && o < got.size(); ++o )
        {
          ok = got[o] && *got[o] == expected[o];
        }
        if ( ok )
        {
          ++out.matched;
        }
        else
        {
          out.mismatches.push_back( {in, expected, got} );
        }
      }
      out.events = sim.events();
    }
    catch ( ... )
    {
      out.failure = std::current_exception();
    }
  };

  if ( shards == 1u )
  {
    run( 0u );
  }
  else
  {
    std::vector<std::thread> workers;
    for ( unsigned s = 0; s < shards; ++s )
    {
      workers.emplace_back( run, s );
    }
    for ( auto& w : workers )
    {
      w.join();
    }
  }

  VerifyReport report;
  report.name = flat.name;
  for ( auto const& p : flat.inputs )
  {
    report.inputs.push_back( p.name );
  }
  for ( auto const& p : flat.outputs )
  {
    report.outputs.push_back( p.name );
  }
  report.combinations = total;
  for ( auto& r : results )
  {
    if ( r.failure )
    {
      std::rethrow_exception( r.failure );
    }
    report.matched += r.matched;
    report.mismatches.insert( report.mismatches.end(), r.mismatches.begin(), r.mismatches.end() );
    report.events.insert( report.events.end(), r.events.begin(), r.events.end() );
  }
  return report;
}

inline VerifyReport verify_exhaustive( Netlist const& netlist, Oracle const& oracle, VerifyOptions const& opts = {} )
{
  return verify_exhaustive( elaborate( netlist ), oracle, opts );
}

} // namespace tritforge
