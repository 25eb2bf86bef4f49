/*!
  \file builders.hpp
  \brief Catalog of buildable circuits in TLG and standard variants

  Word circuits take `width` digits per operand on ports x0.., y0.. (index 0
  least significant).  STD variants are combinational; `registered` puts a
  DFF behind every output so they can be compared against clocked TLG builds.
*/

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cells.hpp"
#include "error.hpp"
#include "netlist.hpp"
#include "synth.hpp"
#include "word.hpp"

namespace tritforge
{

struct CircuitInfo
{
  std::string name;
  bool has_tlg;
  bool has_std;
  bool word; /* takes a width */
  std::string oracle;
  std::string description;
};

inline std::vector<CircuitInfo> const& circuit_catalog()
{
  static std::vector<CircuitInfo> const catalog{
      {"sti", true, true, false, "sti", "standard ternary inverter"},
      {"and", true, true, false, "min", "ternary AND (min)"},
      {"or", true, true, false, "max", "ternary OR (max)"},
      {"xor", true, true, false, "xor", "ternary XOR (mod-3 sum)"},
      {"comp1", true, true, false, "comp1", "single-trit comparator x >= y"},
      {"wordcomp", true, true, true, "wordcomp", "word comparator cascade (gt, eq, lt)"},
      {"tha", true, true, false, "tha", "ternary half adder"},
      {"hsub", true, true, false, "hsub", "ternary half subtractor"},
      {"adder", true, true, true, "adder", "ripple adder from half adders"},
      {"sub", true, true, true, "sub", "complement subtractor"}};
  return catalog;
}

inline CircuitInfo const* find_circuit( std::string_view name )
{
  for ( auto const& c : circuit_catalog() )
  {
    if ( c.name == name )
    {
      return &c;
    }
  }
  return nullptr;
}

inline std::string catalog_names()
{
  std::string s;
  for ( auto const& c : circuit_catalog() )
  {
    s += ( s.empty() ? "" : ", " ) + c.name;
  }
  return s;
}

inline constexpr std::size_t default_word_width = 3u;

struct BuildOptions
{
  Variant variant{Variant::TLG};
  std::size_t width{default_word_width};
  bool registered{false};
};

namespace detail
{

inline void gate2( Netlist& nl, std::string id, CellKind kind, std::string const& a, std::string const& b, std::string const& y )
{
  nl.add_instance( std::move( id ), kind, {{"a", a}, {"b", b}, {"y", y}} );
}

/* pull-network module from per-output functions of two inputs */
template<class... Fn>
Netlist synthesized_module( std::string name, std::vector<std::string> outputs, Fn... fns )
{
  std::vector<TernaryTruthTable> tables{
      TernaryTruthTable::from_function( 2u, [fns]( std::span<Trit const> in ) { return fns( in[0], in[1] ); } )...};
  SynthOptions opts;
  opts.name = std::move( name );
  opts.input_names = {"x", "y"};
  opts.output_names = std::move( outputs );
  opts.simplify = true;
  return synthesize( std::span<TernaryTruthTable const>( tables ), opts ).netlist;
}

inline Netlist comp1_std()
{
  return synthesized_module(
      "COMP1_STD", {"o", "obar"}, []( Trit x, Trit y ) { return comp_ge( x, y ); },
      []( Trit x, Trit y ) { return sti( comp_ge( x, y ) ); } );
}

inline Netlist max_std()
{
  return synthesized_module( "MAX_STD", {"z"}, []( Trit x, Trit y ) { return tmax( x, y ); } );
}

/* x_i, y_i port names */
inline void add_word_inputs( Netlist& nl, std::size_t width )
{
  for ( char const op : {'x', 'y'} )
  {
    for ( std::size_t i = 0; i < width; ++i )
    {
      nl.add_input( op + std::to_string( i ) );
    }
  }
}

inline std::string digit( char op, std::size_t i )
{
  return op + std::to_string( i );
}

inline Netlist wordcomp( std::size_t width, Variant variant )
{
  Netlist nl( "wordcomp" + std::to_string( width ) + "_" + std::string( to_string( variant ) ) );
  add_word_inputs( nl, width );
  std::string comp = "COMP1_TLG";
  if ( variant == Variant::TLG )
  {
    nl.add_clock();
  }
  else
  {
    comp = "COMP1_STD";
    nl.add_module( comp1_std() );
  }
  for ( auto n : {"gt", "eq", "lt"} )
  {
    nl.add_output( n );
  }
  std::string gt, lt, eq;
  for ( std::size_t i = 0; i < width; ++i )
  {
    auto const s = std::to_string( i );
    auto const ge = nl.add_net( "ge" + s ), le = nl.add_net( "le" + s );
    bool const single = width == 1u;
    auto const gti = single ? std::string( "gt" ) : nl.add_net( "gt" + s );
    auto const lti = single ? std::string( "lt" ) : nl.add_net( "lt" + s );
    auto const x = digit( 'x', i ), y = digit( 'y', i );
    std::vector<Connection> a{{"x", x}, {"y", y}, {"o", ge}, {"obar", lti}};
    std::vector<Connection> b{{"x", y}, {"y", x}, {"o", le}, {"obar", gti}};
    if ( variant == Variant::TLG )
    {
      a.push_back( {"clk", "clk"} );
      b.push_back( {"clk", "clk"} );
    }
    nl.add_instance( "cmp_xy" + s, comp, a );
    nl.add_instance( "cmp_yx" + s, comp, b );
    bool const last = i + 1u == width;
    auto const eqi = single ? std::string( "eq" ) : nl.add_net( "eq" + s );
    gate2( nl, "and_eq" + s, CellKind::BIN_AND, ge, le, eqi );
    if ( i == 0u )
    {
      gt = gti;
      lt = lti;
      eq = eqi;
    }
    else
    {
      /* gt = gt_i | (eq_i & gt_below) */
      for ( auto [acc, here, tag] : {std::tuple{&gt, gti, "gt"}, std::tuple{&lt, lti, "lt"}} )
      {
        auto const keep = nl.add_net( std::string( tag ) + "_keep" + s );
        gate2( nl, std::string( tag ) + "_and" + s, CellKind::BIN_AND, eqi, *acc, keep );
        auto const next = last ? std::string( tag ) : nl.add_net( std::string( tag ) + "_acc" + s );
        gate2( nl, std::string( tag ) + "_or" + s, CellKind::BIN_OR, here, keep, next );
        *acc = next;
      }
      auto const next = last ? std::string( "eq" ) : nl.add_net( "eq_acc" + s );
      gate2( nl, "eq_and" + s, CellKind::BIN_AND, eqi, eq, next );
      eq = next;
    }
  }
  return nl;
}

/*! \brief Ripple adder; digit i adds x_i + y_i, then the incoming carry, and merges both carries with max.

  `carry_in` is a constant level.  Outputs are named `<sum>0..` and `carry`.
*/
inline void ripple( Netlist& nl, std::size_t width, Variant variant, std::vector<std::string> const& xs,
                    std::vector<std::string> const& ys, Trit carry_in, std::string const& sum, std::string const& carry )
{
  bool const tlg = variant == Variant::TLG;
  std::string const tha = tlg ? "THA_TLG" : "THA_STD";
  std::string const merge = tlg ? "OR_TLG" : "MAX_STD";
  auto with_clock = [&]( std::vector<Connection> conns ) {
    if ( tlg )
    {
      conns.push_back( {"clk", "clk"} );
    }
    return conns;
  };
  std::string cin = nl.constant( carry_in );
  for ( std::size_t i = 0; i < width; ++i )
  {
    auto const s = std::to_string( i );
    auto const c1 = nl.add_net( "c1_" + s ), s1 = nl.add_net( "s1_" + s ), c2 = nl.add_net( "c2_" + s );
    nl.add_instance( "ha_a" + s, tha, with_clock( {{"x", xs[i]}, {"y", ys[i]}, {"c", c1}, {"s", s1}} ) );
    nl.add_instance( "ha_b" + s, tha, with_clock( {{"x", s1}, {"y", cin}, {"c", c2}, {"s", sum + s}} ) );
    auto const cout = i + 1u == width ? carry : nl.add_net( "carry" + s );
    nl.add_instance( "merge" + s, merge, with_clock( {{"x", c1}, {"y", c2}, {"z", cout}} ) );
    cin = cout;
  }
}

inline Netlist word_arith( std::size_t width, Variant variant, bool subtract )
{
  Netlist nl( std::string( subtract ? "sub" : "adder" ) + std::to_string( width ) + "_" + std::string( to_string( variant ) ) );
  add_word_inputs( nl, width );
  if ( variant == Variant::TLG )
  {
    nl.add_clock();
  }
  else
  {
    nl.add_module( max_std() );
  }
  std::string const sum = subtract ? "d" : "s";
  for ( std::size_t i = 0; i < width; ++i )
  {
    nl.add_output( sum + std::to_string( i ) );
  }
  std::string const carry = subtract ? "no_borrow" : "cout";
  nl.add_output( carry );
  std::vector<std::string> xs, ys;
  for ( std::size_t i = 0; i < width; ++i )
  {
    xs.push_back( digit( 'x', i ) );
    if ( subtract )
    {
      auto const yc = nl.add_net( "yc" + std::to_string( i ) );
      nl.add_instance( "inv" + std::to_string( i ), CellKind::STI_STD, {{"a", digit( 'y', i )}, {"y", yc}} );
      ys.push_back( yc );
    }
    else
    {
      ys.push_back( digit( 'y', i ) );
    }
  }
  ripple( nl, width, variant, xs, ys, Trit( subtract ? 1 : 0 ), sum, carry );
  return nl;
}

inline Netlist cell_structure( CellKind kind )
{
  return *cell_library().get( kind ).structure;
}

inline Netlist single_cell( std::string name, CellKind kind, std::vector<std::string> const& ins, std::vector<std::string> const& outs,
                            std::vector<std::string> const& pins_in, std::vector<std::string> const& pins_out )
{
  Netlist nl( std::move( name ) );
  std::vector<Connection> conns;
  for ( std::size_t i = 0; i < ins.size(); ++i )
  {
    nl.add_input( ins[i] );
    conns.push_back( {pins_in[i], ins[i]} );
  }
  for ( std::size_t i = 0; i < outs.size(); ++i )
  {
    nl.add_output( outs[i] );
    conns.push_back( {pins_out[i], outs[i]} );
  }
  nl.add_instance( "u0", kind, std::move( conns ) );
  return nl;
}

/* wraps a combinational netlist so that every output passes a DFF */
inline Netlist register_outputs( Netlist inner )
{
  if ( inner.find_net( "clk" ) )
  {
    throw invalid_value( "output registers are only added to unclocked builds" );
  }
  Netlist nl( inner.name() + "_ff" );
  std::vector<Connection> conns;
  for ( auto const& p : inner.inputs() )
  {
    nl.add_input( p );
    conns.push_back( {p, p} );
  }
  nl.add_clock();
  std::vector<std::string> outs = inner.outputs();
  for ( auto const& o : outs )
  {
    nl.add_output( o );
    auto const raw = nl.add_net( o + "_comb" );
    conns.push_back( {o, raw} );
    nl.add_instance( "ff_" + o, CellKind::DFF, {{"d", raw}, {"clk", "clk"}, {"q", o}} );
  }
  std::string const core = inner.name() + "_core";
  inner.set_name( core );
  nl.add_module( std::move( inner ) );
  nl.add_instance( "core", core, std::move( conns ) );
  return nl;
}

inline Netlist build_std( std::string_view name, std::size_t width )
{
  if ( name == "sti" )
  {
    return single_cell( "sti_STD", CellKind::STI_STD, {"x"}, {"y"}, {"a"}, {"y"} );
  }
  if ( name == "and" )
  {
    return synthesized_module( "and_STD", {"z"}, []( Trit x, Trit y ) { return tmin( x, y ); } );
  }
  if ( name == "or" )
  {
    return synthesized_module( "or_STD", {"z"}, []( Trit x, Trit y ) { return tmax( x, y ); } );
  }
  if ( name == "xor" )
  {
    return synthesized_module( "xor_STD", {"s"}, []( Trit x, Trit y ) { return txor( x, y ); } );
  }
  if ( name == "comp1" )
  {
    auto nl = comp1_std();
    nl.set_name( "comp1_STD" );
    return nl;
  }
  if ( name == "tha" )
  {
    auto nl = cell_structure( CellKind::THA_STD );
    nl.set_name( "tha_STD" );
    return nl;
  }
  if ( name == "hsub" )
  {
    return synthesized_module(
        "hsub_STD", {"diff", "borrow"}, []( Trit x, Trit y ) { return hsub_diff( x, y ); },
        []( Trit x, Trit y ) { return hsub_borrow( x, y ); } );
  }
  if ( name == "wordcomp" )
  {
    return wordcomp( width, Variant::STD );
  }
  return word_arith( width, Variant::STD, name == "sub" );
}

inline Netlist build_tlg( std::string_view name, std::size_t width )
{
  static std::map<std::string_view, CellKind> const cells{{"sti", CellKind::STI_TLG},     {"and", CellKind::AND_TLG},
                                                          {"or", CellKind::OR_TLG},       {"xor", CellKind::XOR_TLG},
                                                          {"comp1", CellKind::COMP1_TLG}, {"tha", CellKind::THA_TLG},
                                                          {"hsub", CellKind::HSUB_TLG}};
  if ( auto it = cells.find( name ); it != cells.end() )
  {
    auto nl = cell_structure( it->second );
    nl.set_name( std::string( name ) + "_TLG" );
    return nl;
  }
  if ( name == "wordcomp" )
  {
    return wordcomp( width, Variant::TLG );
  }
  return word_arith( width, Variant::TLG, name == "sub" );
}

} // namespace detail

/*! \brief Builds a catalog circuit.

  Unknown names raise invalid_value listing the catalog.
*/
inline Netlist build_circuit( std::string_view name, BuildOptions const& opts = {} )
{
  auto const* info = find_circuit( name );
  if ( !info )
  {
    throw invalid_value( "unknown circuit '" + std::string( name ) + "'; catalog: " + catalog_names() );
  }
  if ( info->word && ( opts.width < 1u || opts.width > max_word_width ) )
  {
    throw invalid_value( "width must be in 1.." + std::to_string( max_word_width ) );
  }
  if ( opts.variant == Variant::TLG )
  {
    if ( opts.registered )
    {
      throw invalid_value( "TLG builds are already registered" );
    }
    return detail::build_tlg( name, opts.width );
  }
  auto nl = detail::build_std( name, opts.width );
  return opts.registered ? detail::register_outputs( std::move( nl ) ) : nl;
}

} // namespace tritforge
