/*!
  \file cells.hpp
  \brief Cell library: primitives, TLG-based composite cells and their CMOS-style counterparts

  Every cell publishes a fixed port signature and a behavioral reference
  function.  Composite cells also carry a structural netlist over other
  library cells; elaboration expands it down to primitives.

  Primitive pin conventions:
    NTI, PTI, STI_STD, BIN_INV   a -> y
    BIN_AND, BIN_OR              a, b -> y
    TGATE                        in, en -> out   (drives `in` while en = 2, else Z)
    CONST                        -> y            (param value)
    TLG_RAW                      a, b, c, d, clk -> o, obar   (param weights)
    DLATCH                       d, clk -> q     (param phase: transparent level)
*/

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "netlist.hpp"
#include "synth.hpp"
#include "tlg.hpp"
#include "trit.hpp"

namespace tritforge
{

struct PortSpec
{
  std::string name;
  PortDir dir;
  bool clock{false};
};

/* Maps data inputs (port order, clock excluded) to outputs (port order). */
using BehavioralFn = std::function<std::vector<Trit>( std::span<Trit const> )>;

struct CellSpec
{
  CellKind kind;
  std::vector<PortSpec> ports;
  bool clocked{false};
  bool primitive{false};
  /* empty for parametric or purely switching primitives (TLG_RAW, TGATE, CONST) */
  BehavioralFn behavioral;
  std::optional<Netlist> structure;
  std::string description;

  [[nodiscard]] std::vector<std::string> data_inputs() const
  {
    std::vector<std::string> r;
    for ( auto const& p : ports )
    {
      if ( p.dir == PortDir::in && !p.clock )
      {
        r.push_back( p.name );
      }
    }
    return r;
  }

  [[nodiscard]] std::vector<std::string> outputs() const
  {
    std::vector<std::string> r;
    for ( auto const& p : ports )
    {
      if ( p.dir == PortDir::out )
      {
        r.push_back( p.name );
      }
    }
    return r;
  }

  [[nodiscard]] PortSpec const* find_port( std::string_view name ) const
  {
    for ( auto const& p : ports )
    {
      if ( p.name == name )
      {
        return &p;
      }
    }
    return nullptr;
  }
};

/* Scalar reference functions shared by cells, oracles and word operations. */

/* carry digit of a ternary half adder: 1 iff x + y >= 3 */
[[nodiscard]] constexpr Trit tha_carry( Trit x, Trit y ) noexcept
{
  return Trit( x.value() + y.value() >= 3u ? 1 : 0 );
}

[[nodiscard]] constexpr Trit tha_sum( Trit x, Trit y ) noexcept
{
  return txor( x, y );
}

/* (x - y) mod 3 */
[[nodiscard]] constexpr Trit hsub_diff( Trit x, Trit y ) noexcept
{
  return Trit( ( x.value() + 3 - y.value() ) % 3 );
}

[[nodiscard]] constexpr Trit hsub_borrow( Trit x, Trit y ) noexcept
{
  return Trit( x < y ? 1 : 0 );
}

/* binary-as-ternary x >= y */
[[nodiscard]] constexpr Trit comp_ge( Trit x, Trit y ) noexcept
{
  return from_bool( x >= y );
}

namespace detail
{

inline std::vector<PortSpec> ports_of( Netlist const& nl )
{
  std::vector<PortSpec> r;
  for ( auto const& p : nl.ports() )
  {
    r.push_back( {p.name, p.dir, nl.find_net( p.name )->kind == NetKind::clock} );
  }
  return r;
}

inline void add_tlg( Netlist& nl, std::string id, TlgWeights w, std::array<std::string, 4> const& in,
                     std::string const& o, std::string const& obar, std::string const& clk = "clk" )
{
  CellParams params;
  params.weights = w;
  nl.add_instance( std::move( id ), CellKind::TLG_RAW,
                   {{"a", in[0]}, {"b", in[1]}, {"c", in[2]}, {"d", in[3]}, {"clk", clk}, {"o", o}, {"obar", obar}},
                   params );
}

inline void add_tgate( Netlist& nl, std::string id, std::string const& in, std::string const& en, std::string const& out )
{
  nl.add_instance( std::move( id ), CellKind::TGATE, {{"in", in}, {"en", en}, {"out", out}} );
}

inline std::string add_bin_and( Netlist& nl, std::string const& id, std::string const& a, std::string const& b )
{
  auto y = nl.fresh_net( id );
  nl.add_instance( "u_" + id, CellKind::BIN_AND, {{"a", a}, {"b", b}, {"y", y}} );
  return y;
}

template<class Fn>
BehavioralFn unary( Fn fn )
{
  return [fn]( std::span<Trit const> in ) { return std::vector<Trit>{fn( in[0] )}; };
}

template<class Fn>
BehavioralFn binary( Fn fn )
{
  return [fn]( std::span<Trit const> in ) { return std::vector<Trit>{fn( in[0], in[1] )}; };
}

inline CellSpec composite( CellKind kind, Netlist structure, BehavioralFn fn, std::string description )
{
  structure.validate();
  CellSpec spec{kind, detail::ports_of( structure ), false, false, std::move( fn ), std::nullopt, std::move( description )};
  for ( auto const& p : spec.ports )
  {
    spec.clocked = spec.clocked || p.clock;
  }
  spec.structure = std::move( structure );
  return spec;
}

inline CellSpec primitive( CellKind kind, std::vector<PortSpec> ports, BehavioralFn fn, std::string description )
{
  CellSpec spec{kind, std::move( ports ), false, true, std::move( fn ), std::nullopt, std::move( description )};
  for ( auto const& p : spec.ports )
  {
    spec.clocked = spec.clocked || p.clock;
  }
  return spec;
}

} // namespace detail

/*! \brief STI from two clocked comparators against the constants 1 and 2.

  g1 = [x >= 1], g2 = [x >= 2]; the output is switched to Vdd when !g1, to
  ground when g2, and to Vbb when g1 && !g2.
*/
inline CellSpec sti_tlg_cell()
{
  Netlist nl( "STI_TLG" );
  nl.add_input( "x" );
  nl.add_clock();
  nl.add_output( "y" );
  auto const c0 = nl.constant( 0 ), c1 = nl.constant( 1 ), c2 = nl.constant( 2 );
  for ( auto n : {"g1_o", "g1_ob", "g2_o", "g2_ob"} )
  {
    nl.add_net( n );
  }
  detail::add_tlg( nl, "g1", TlgWeights( 1, 0, 1, 0 ), {"x", c0, c1, c0}, "g1_o", "g1_ob" );
  detail::add_tlg( nl, "g2", TlgWeights( 1, 0, 1, 0 ), {"x", c0, c2, c0}, "g2_o", "g2_ob" );
  detail::add_tgate( nl, "t_vdd", c2, "g1_ob", "y" );
  detail::add_tgate( nl, "t_gnd", c0, "g2_o", "y" );
  auto const mid = detail::add_bin_and( nl, "en_vbb", "g1_o", "g2_ob" );
  detail::add_tgate( nl, "t_vbb", c1, mid, "y" );
  return detail::composite( CellKind::STI_TLG, std::move( nl ), detail::unary( sti ),
                            "standard ternary inverter, TLG based, output registered on the falling edge" );
}

namespace detail
{

/*! \brief min/max share one structure; only the transmission gate controls swap.

  Transparent-high latches freeze x and y for the TLG selectors at the
  falling edge.  The routed data passes a second, transparent-low latch so
  the switched value and the selection always come from the same edge; a
  single latch would let new data meet the previous selection while the
  clock is high and short two drivers together.
*/
inline Netlist minmax_structure( std::string name, bool is_max )
{
  Netlist nl( std::move( name ) );
  nl.add_input( "x" );
  nl.add_input( "y" );
  nl.add_clock();
  nl.add_output( "z" );
  auto const c0 = nl.constant( 0 );
  for ( auto n : {"xm", "ym", "xl", "yl", "p_o", "p_ob", "q_o", "q_ob"} )
  {
    nl.add_net( n );
  }
  CellParams high, low;
  high.phase = LatchPhase::high;
  low.phase = LatchPhase::low;
  nl.add_instance( "lx", CellKind::DLATCH, {{"d", "x"}, {"clk", "clk"}, {"q", "xm"}}, high );
  nl.add_instance( "ly", CellKind::DLATCH, {{"d", "y"}, {"clk", "clk"}, {"q", "ym"}}, high );
  nl.add_instance( "hx", CellKind::DLATCH, {{"d", "xm"}, {"clk", "clk"}, {"q", "xl"}}, low );
  nl.add_instance( "hy", CellKind::DLATCH, {{"d", "ym"}, {"clk", "clk"}, {"q", "yl"}}, low );
  // p = [y >= x], q = [x >= y]
  add_tlg( nl, "p", TlgWeights( 1, 0, 0, 1 ), {"ym", c0, c0, "xm"}, "p_o", "p_ob" );
  add_tlg( nl, "q", TlgWeights( 1, 0, 0, 1 ), {"xm", c0, c0, "ym"}, "q_o", "q_ob" );
  add_tgate( nl, "tx", "xl", is_max ? "q_o" : "p_o", "z" );
  add_tgate( nl, "ty", "yl", is_max ? "p_o" : "q_o", "z" );
  return nl;
}

} // namespace detail

inline CellSpec and_tlg_cell()
{
  return detail::composite( CellKind::AND_TLG, detail::minmax_structure( "AND_TLG", false ), detail::binary( tmin ),
                            "ternary AND (min), input latches plus two TLG selectors" );
}

inline CellSpec or_tlg_cell()
{
  return detail::composite( CellKind::OR_TLG, detail::minmax_structure( "OR_TLG", true ), detail::binary( tmax ),
                            "ternary OR (max), input latches plus two TLG selectors" );
}

/*! \brief Mod-3 sum from four threshold comparisons on x + y.

  t_k = [x + y >= k] for k = 1..4 give a one-hot choice of supply:
  Vdd when t2 && !t3, Vbb when (t1 && !t2) || t4, ground when !t1 || (t3 && !t4).
*/
inline CellSpec xor_tlg_cell()
{
  Netlist nl( "XOR_TLG" );
  nl.add_input( "x" );
  nl.add_input( "y" );
  nl.add_clock();
  nl.add_output( "s" );
  auto const c0 = nl.constant( 0 ), c1 = nl.constant( 1 ), c2 = nl.constant( 2 );
  for ( int k = 1; k <= 4; ++k )
  {
    nl.add_net( "t" + std::to_string( k ) + "_o" );
    nl.add_net( "t" + std::to_string( k ) + "_ob" );
  }
  detail::add_tlg( nl, "t1", TlgWeights( 1, 1, 1, 0 ), {"x", "y", c1, c0}, "t1_o", "t1_ob" );
  detail::add_tlg( nl, "t2", TlgWeights( 1, 1, 1, 0 ), {"x", "y", c2, c0}, "t2_o", "t2_ob" );
  detail::add_tlg( nl, "t3", TlgWeights( 1, 1, 3, 0 ), {"x", "y", c1, c0}, "t3_o", "t3_ob" );
  detail::add_tlg( nl, "t4", TlgWeights( 1, 1, 2, 0 ), {"x", "y", c2, c0}, "t4_o", "t4_ob" );
  detail::add_tgate( nl, "s_vdd", c2, detail::add_bin_and( nl, "en_vdd", "t2_o", "t3_ob" ), "s" );
  detail::add_tgate( nl, "s_vbb_a", c1, detail::add_bin_and( nl, "en_vbb", "t1_o", "t2_ob" ), "s" );
  detail::add_tgate( nl, "s_vbb_b", c1, "t4_o", "s" );
  detail::add_tgate( nl, "s_gnd_a", c0, "t1_ob", "s" );
  detail::add_tgate( nl, "s_gnd_b", c0, detail::add_bin_and( nl, "en_gnd", "t3_o", "t4_ob" ), "s" );
  return detail::composite( CellKind::XOR_TLG, std::move( nl ), detail::binary( txor ),
                            "ternary XOR (mod-3 sum), four TLGs select ground, Vbb or Vdd" );
}

/* One TLG with x on input a and y on input d: o = [x >= y]. */
inline CellSpec comp1_tlg_cell()
{
  Netlist nl( "COMP1_TLG" );
  nl.add_input( "x" );
  nl.add_input( "y" );
  nl.add_clock();
  nl.add_output( "o" );
  nl.add_output( "obar" );
  auto const c0 = nl.constant( 0 );
  detail::add_tlg( nl, "cmp", TlgWeights( 1, 0, 0, 1 ), {"x", c0, c0, "y"}, "o", "obar" );
  return detail::composite( CellKind::COMP1_TLG, std::move( nl ),
                            []( std::span<Trit const> in ) {
                              auto const o = comp_ge( in[0], in[1] );
                              return std::vector<Trit>{o, sti( o )};
                            },
                            "single-trit comparator, o = 2 iff x >= y" );
}

/* 2x + 2y - 3*2 >= 0  <=>  x + y >= 3; the selected level is Vbb so the carry digit is 1. */
inline CellSpec carry_tlg_cell()
{
  Netlist nl( "CARRY_TLG" );
  nl.add_input( "x" );
  nl.add_input( "y" );
  nl.add_clock();
  nl.add_output( "c" );
  auto const c0 = nl.constant( 0 ), c1 = nl.constant( 1 ), c2 = nl.constant( 2 );
  nl.add_net( "k_o" );
  nl.add_net( "k_ob" );
  detail::add_tlg( nl, "k", TlgWeights( 2, 2, 3, 0 ), {"x", "y", c2, c0}, "k_o", "k_ob" );
  detail::add_tgate( nl, "c_vbb", c1, "k_o", "c" );
  detail::add_tgate( nl, "c_gnd", c0, "k_ob", "c" );
  return detail::composite( CellKind::CARRY_TLG, std::move( nl ), detail::binary( tha_carry ),
                            "half adder carry, one TLG routing Vbb" );
}

enum class Variant
{
  TLG,
  STD
};

inline std::string_view to_string( Variant v )
{
  return v == Variant::TLG ? "TLG" : "STD";
}

inline BehavioralFn tha_behavior()
{
  return []( std::span<Trit const> in ) { return std::vector<Trit>{tha_carry( in[0], in[1] ), tha_sum( in[0], in[1] )}; };
}

/* Half adder; TLG variant composes XOR_TLG and CARRY_TLG, STD variant is the synthesized pull-network structure. */
inline CellSpec tha_cell( Variant variant )
{
  if ( variant == Variant::TLG )
  {
    Netlist nl( "THA_TLG" );
    nl.add_input( "x" );
    nl.add_input( "y" );
    nl.add_clock();
    nl.add_output( "c" );
    nl.add_output( "s" );
    nl.add_instance( "sum", CellKind::XOR_TLG, {{"x", "x"}, {"y", "y"}, {"clk", "clk"}, {"s", "s"}} );
    nl.add_instance( "carry", CellKind::CARRY_TLG, {{"x", "x"}, {"y", "y"}, {"clk", "clk"}, {"c", "c"}} );
    return detail::composite( CellKind::THA_TLG, std::move( nl ), tha_behavior(), "ternary half adder from XOR_TLG and CARRY_TLG" );
  }
  std::array<TernaryTruthTable, 2> const tables{
      TernaryTruthTable::from_function( 2u, []( std::span<Trit const> in ) { return tha_carry( in[0], in[1] ); } ),
      TernaryTruthTable::from_function( 2u, []( std::span<Trit const> in ) { return tha_sum( in[0], in[1] ); } )};
  SynthOptions opts;
  opts.name = "THA_STD";
  opts.input_names = {"x", "y"};
  opts.output_names = {"c", "s"};
  opts.simplify = true;
  auto synth = synthesize( std::span<TernaryTruthTable const>( tables ), opts );
  return detail::composite( CellKind::THA_STD, std::move( synth.netlist ), tha_behavior(),
                            "ternary half adder, decoder plus three pull networks per output" );
}

/*! \brief Half subtractor by complement addition.

  x - y = x + (2 - y) + 1 - 3: a combinational STI feeds one THA, a second THA
  adds the constant 1.  The first carry is delayed by a DFF to line up with
  the second; borrow is 1 when neither stage carried.
*/
inline CellSpec hsub_cell()
{
  Netlist nl( "HSUB_TLG" );
  nl.add_input( "x" );
  nl.add_input( "y" );
  nl.add_clock();
  nl.add_output( "diff" );
  nl.add_output( "borrow" );
  auto const c0 = nl.constant( 0 ), c1 = nl.constant( 1 );
  for ( auto n : {"yc", "c1", "s1", "c1d", "c2", "z1", "z2", "nbz"} )
  {
    nl.add_net( n );
  }
  nl.add_instance( "comp", CellKind::STI_STD, {{"a", "y"}, {"y", "yc"}} );
  nl.add_instance( "add", CellKind::THA_TLG, {{"x", "x"}, {"y", "yc"}, {"clk", "clk"}, {"c", "c1"}, {"s", "s1"}} );
  nl.add_instance( "inc", CellKind::THA_TLG, {{"x", "s1"}, {"y", c1}, {"clk", "clk"}, {"c", "c2"}, {"s", "diff"}} );
  nl.add_instance( "align", CellKind::DFF, {{"d", "c1"}, {"clk", "clk"}, {"q", "c1d"}} );
  nl.add_instance( "z1i", CellKind::NTI, {{"a", "c1d"}, {"y", "z1"}} );
  nl.add_instance( "z2i", CellKind::NTI, {{"a", "c2"}, {"y", "z2"}} );
  auto const bz = detail::add_bin_and( nl, "no_carry", "z1", "z2" );
  nl.add_instance( "nbzi", CellKind::BIN_INV, {{"a", bz}, {"y", "nbz"}} );
  detail::add_tgate( nl, "b_vbb", c1, bz, "borrow" );
  detail::add_tgate( nl, "b_gnd", c0, "nbz", "borrow" );
  return detail::composite( CellKind::HSUB_TLG, std::move( nl ),
                            []( std::span<Trit const> in ) {
                              return std::vector<Trit>{hsub_diff( in[0], in[1] ), hsub_borrow( in[0], in[1] )};
                            },
                            "ternary half subtractor, STI complement into two THAs" );
}

inline CellSpec dlatch_cell()
{
  return detail::primitive( CellKind::DLATCH, {{"d", PortDir::in}, {"clk", PortDir::in, true}, {"q", PortDir::out}},
                            detail::unary( []( Trit d ) { return d; } ),
                            "ternary D-latch, transparent while the clock is at its `phase` level (default high)" );
}

/* Master transparent high, slave transparent low: captures on the falling edge. */
inline CellSpec dff_cell()
{
  Netlist nl( "DFF" );
  nl.add_input( "d" );
  nl.add_clock();
  nl.add_output( "q" );
  nl.add_net( "m" );
  CellParams high, low;
  high.phase = LatchPhase::high;
  low.phase = LatchPhase::low;
  nl.add_instance( "master", CellKind::DLATCH, {{"d", "d"}, {"clk", "clk"}, {"q", "m"}}, high );
  nl.add_instance( "slave", CellKind::DLATCH, {{"d", "m"}, {"clk", "clk"}, {"q", "q"}}, low );
  return detail::composite( CellKind::DFF, std::move( nl ), detail::unary( []( Trit d ) { return d; } ),
                            "ternary D flip-flop from two latches of opposite phase" );
}

/* Immutable catalog of every CellKind. */
class CellLibrary
{
public:
  CellLibrary()
  {
    using detail::primitive;
    std::vector<PortSpec> const unary_ports{{"a", PortDir::in}, {"y", PortDir::out}};
    std::vector<PortSpec> const binary_ports{{"a", PortDir::in}, {"b", PortDir::in}, {"y", PortDir::out}};
    add( primitive( CellKind::NTI, unary_ports, detail::unary( nti ), "negative ternary inverter" ) );
    add( primitive( CellKind::PTI, unary_ports, detail::unary( pti ), "positive ternary inverter" ) );
    add( primitive( CellKind::STI_STD, unary_ports, detail::unary( sti ), "standard ternary inverter, CMOS style" ) );
    add( primitive( CellKind::BIN_INV, unary_ports, detail::unary( bin_not ), "binary inverter on {0,2}" ) );
    add( primitive( CellKind::BIN_AND, binary_ports, detail::binary( bin_and ), "binary AND on {0,2}" ) );
    add( primitive( CellKind::BIN_OR, binary_ports, detail::binary( bin_or ), "binary OR on {0,2}" ) );
    add( primitive( CellKind::TGATE, {{"in", PortDir::in}, {"en", PortDir::in}, {"out", PortDir::out}}, {},
                    "ideal transmission gate, Z when en != 2" ) );
    add( primitive( CellKind::CONST, {{"y", PortDir::out}}, {}, "constant driver (param value)" ) );
    add( primitive( CellKind::TLG_RAW,
                    {{"a", PortDir::in},
                     {"b", PortDir::in},
                     {"c", PortDir::in},
                     {"d", PortDir::in},
                     {"clk", PortDir::in, true},
                     {"o", PortDir::out},
                     {"obar", PortDir::out}},
                    {}, "clocked ternary threshold gate with output latch (param weights)" ) );
    add( dlatch_cell() );
    add( dff_cell() );
    add( sti_tlg_cell() );
    add( and_tlg_cell() );
    add( or_tlg_cell() );
    add( xor_tlg_cell() );
    add( comp1_tlg_cell() );
    add( carry_tlg_cell() );
    add( tha_cell( Variant::TLG ) );
    add( tha_cell( Variant::STD ) );
    add( hsub_cell() );
  }

  [[nodiscard]] CellSpec const& get( CellKind kind ) const { return specs_.at( kind ); }

  [[nodiscard]] CellSpec const* find( std::string_view name ) const
  {
    auto kind = cell_kind_from_string( name );
    return kind ? &specs_.at( *kind ) : nullptr;
  }

  [[nodiscard]] std::map<CellKind, CellSpec> const& all() const noexcept { return specs_; }

private:
  void add( CellSpec spec ) { specs_.emplace( spec.kind, std::move( spec ) ); }

  std::map<CellKind, CellSpec> specs_;
};

inline CellLibrary const& cell_library()
{
  static CellLibrary const library;
  return library;
}

} // namespace tritforge
