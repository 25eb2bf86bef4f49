/*!
  \file oracles.hpp
  \brief Named behavioral references for verification
*/

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cells.hpp"
#include "error.hpp"
#include "sim.hpp"
#include "word.hpp"

namespace tritforge
{

namespace detail
{

inline void check_arity( std::string const& name, std::size_t inputs, std::size_t outputs, std::size_t want_in,
                         std::size_t want_out )
{
  if ( inputs != want_in || outputs != want_out )
  {
    throw invalid_value( "oracle '" + name + "' expects " + std::to_string( want_in ) + " inputs and " +
                         std::to_string( want_out ) + " outputs, netlist has " + std::to_string( inputs ) + " and " +
                         std::to_string( outputs ) );
  }
}

/* splits x0..x{M-1}, y0..y{M-1} (least significant first) into two words */
inline std::pair<TernaryWord, TernaryWord> split_words( std::span<Trit const> in )
{
  auto const m = in.size() / 2u;
  return {TernaryWord( std::vector<Trit>( in.begin(), in.begin() + m ) ),
          TernaryWord( std::vector<Trit>( in.begin() + m, in.end() ) )};
}

} // namespace detail

inline std::vector<std::string> const& oracle_names()
{
  static std::vector<std::string> const names{"and", "adder", "carry", "comp1", "dff", "hsub", "identity", "max", "min", "nti",
                                              "or",  "pti",   "sti",   "sub",   "tha", "wordcomp", "xor"};
  return names;
}

/*! \brief Looks up a builtin oracle and checks it against the port counts.

  Word oracles (wordcomp, adder, sub) infer the width from the input count.
*/
inline Oracle make_oracle( std::string const& name, std::size_t inputs, std::size_t outputs )
{
  auto const unary = [&]( Trit ( *fn )( Trit ) ) -> Oracle {
    detail::check_arity( name, inputs, outputs, 1u, 1u );
    return [fn]( std::span<Trit const> in ) { return std::vector<Trit>{fn( in[0] )}; };
  };
  auto const binary = [&]( Trit ( *fn )( Trit, Trit ) ) -> Oracle {
    detail::check_arity( name, inputs, outputs, 2u, 1u );
    return [fn]( std::span<Trit const> in ) { return std::vector<Trit>{fn( in[0], in[1] )}; };
  };
  auto const word_inputs = [&]( std::size_t extra_outputs_per_digit, std::size_t fixed_outputs ) {
    if ( inputs == 0u || inputs % 2u != 0u )
    {
      throw invalid_value( "oracle '" + name + "' needs an even, non-zero number of inputs" );
    }
    detail::check_arity( name, inputs, outputs, inputs, inputs / 2u * extra_outputs_per_digit + fixed_outputs );
  };

  if ( name == "sti" )
  {
    return unary( []( Trit x ) { return sti( x ); } );
  }
  if ( name == "nti" )
  {
    return unary( []( Trit x ) { return nti( x ); } );
  }
  if ( name == "pti" )
  {
    return unary( []( Trit x ) { return pti( x ); } );
  }
  if ( name == "identity" || name == "dff" )
  {
    return unary( []( Trit x ) { return x; } );
  }
  if ( name == "min" || name == "and" )
  {
    return binary( []( Trit x, Trit y ) { return tmin( x, y ); } );
  }
  if ( name == "max" || name == "or" )
  {
    return binary( []( Trit x, Trit y ) { return tmax( x, y ); } );
  }
  if ( name == "xor" )
  {
    return binary( []( Trit x, Trit y ) { return txor( x, y ); } );
  }
  if ( name == "carry" )
  {
    return binary( []( Trit x, Trit y ) { return tha_carry( x, y ); } );
  }
  if ( name == "comp1" )
  {
    detail::check_arity( name, inputs, outputs, 2u, 2u );
    return []( std::span<Trit const> in ) {
      auto const o = comp_ge( in[0], in[1] );
      return std::vector<Trit>{o, sti( o )};
    };
  }
  if ( name == "tha" )
  {
    detail::check_arity( name, inputs, outputs, 2u, 2u );
    return tha_behavior();
  }
  if ( name == "hsub" )
  {
    detail::check_arity( name, inputs, outputs, 2u, 2u );
    return []( std::span<Trit const> in ) { return std::vector<Trit>{hsub_diff( in[0], in[1] ), hsub_borrow( in[0], in[1] )}; };
  }
  if ( name == "wordcomp" )
  {
    word_inputs( 0u, 3u );
    return []( std::span<Trit const> in ) {
      auto const [x, y] = detail::split_words( in );
      auto const ord = word_compare( x, y );
      return std::vector<Trit>{from_bool( ord == Ordering::gt ), from_bool( ord == Ordering::eq ), from_bool( ord == Ordering::lt )};
    };
  }
  if ( name == "adder" || name == "sub" )
  {
    word_inputs( 1u, 1u );
    bool const sub = name == "sub";
    return [sub]( std::span<Trit const> in ) {
      auto const [x, y] = detail::split_words( in );
      std::vector<Trit> out;
      if ( sub )
      {
        auto r = word_sub( x, y );
        out = r.diff.digits();
        out.push_back( r.no_borrow );
      }
      else
      {
        auto r = word_add( x, y );
        out = r.sum.digits();
        out.push_back( r.carry );
      }
      return out;
    };
  }
  std::string known;
  for ( auto const& n : oracle_names() )
  {
    known += ( known.empty() ? "" : ", " ) + n;
  }
  throw invalid_value( "unknown oracle '" + name + "' (known: " + known + ")" );
}

inline Oracle make_oracle( std::string const& name, FlatNetlist const& flat )
{
  return make_oracle( name, flat.inputs.size(), flat.outputs.size() );
}

} // namespace tritforge
