#include <map>
#include <random>

#include <gtest/gtest.h>

#include "tritforge/builders.hpp"
#include "tritforge/sim.hpp"

#include "reference.hpp"

using namespace tritforge;

namespace
{

using Values = std::map<std::string, int>;

std::vector<int> word( Values const& in, char prefix, std::size_t width )
{
  std::vector<int> d;
  for ( std::size_t i = 0; i < width; ++i )
  {
    d.push_back( in.at( prefix + std::to_string( i ) ) );
  }
  return d;
}

void put_word( Values& out, char prefix, std::uint64_t v, std::size_t width )
{
  auto const d = ref::digits( v, unsigned( width ) );
  for ( std::size_t i = 0; i < width; ++i )
  {
    out[prefix + std::to_string( i )] = d[i];
  }
}

/* expected outputs by port name, computed from integers */
Values expected( std::string const& circuit, std::size_t width, Values const& in )
{
  Values out;
  if ( circuit == "sti" )
  {
    out["y"] = ref::sti( in.at( "x" ) );
    return out;
  }
  if ( circuit == "wordcomp" || circuit == "adder" || circuit == "sub" )
  {
    auto const x = ref::value( word( in, 'x', width ) ), y = ref::value( word( in, 'y', width ) );
    auto const n = ref::pow3( unsigned( width ) );
    if ( circuit == "wordcomp" )
    {
      out["gt"] = x > y ? 2 : 0;
      out["eq"] = x == y ? 2 : 0;
      out["lt"] = x < y ? 2 : 0;
    }
    else if ( circuit == "adder" )
    {
      put_word( out, 's', ( x + y ) % n, width );
      out["cout"] = int( ( x + y ) / n );
    }
    else
    {
      put_word( out, 'd', ( x + n - y ) % n, width );
      out["no_borrow"] = x >= y ? 1 : 0;
    }
    return out;
  }
  int const x = in.at( "x" ), y = in.at( "y" );
  if ( circuit == "and" )
  {
    out["z"] = std::min( x, y );
  }
  else if ( circuit == "or" )
  {
    out["z"] = std::max( x, y );
  }
  else if ( circuit == "xor" )
  {
    out["s"] = ref::xor3( x, y );
  }
  else if ( circuit == "comp1" )
  {
    out["o"] = x >= y ? 2 : 0;
    out["obar"] = x >= y ? 0 : 2;
  }
  else if ( circuit == "tha" )
  {
    out["c"] = ref::carry( x, y );
    out["s"] = ref::xor3( x, y );
  }
  else if ( circuit == "hsub" )
  {
    out["diff"] = ref::diff( x, y );
    out["borrow"] = ref::borrow( x, y );
  }
  return out;
}

Values settle( FlatNetlist const& flat, Values const& in )
{
  std::vector<Trit> stim;
  for ( auto const& p : flat.inputs )
  {
    stim.push_back( Trit( in.at( p.name ) ) );
  }
  Simulator sim( flat );
  for ( std::size_t k = 0; k < required_settle_cycles( flat ); ++k )
  {
    sim.cycle( {stim, std::nullopt} );
  }
  Values out;
  for ( auto const& p : flat.outputs )
  {
    auto const v = sim.value( p.net );
    out[p.name] = v ? int( v->value() ) : -1;
  }
  return out;
}

/* every input combination, one fresh simulator each */
void check_exhaustive( std::string const& circuit, BuildOptions const& opts )
{
  auto const flat = elaborate( build_circuit( circuit, opts ) );
  auto const arity = flat.inputs.size();
  for ( std::size_t i = 0; i < ref::pow3( unsigned( arity ) ); ++i )
  {
    auto const d = ref::digits( i, unsigned( arity ) );
    Values in;
    for ( std::size_t k = 0; k < arity; ++k )
    {
      in[flat.inputs[k].name] = d[k];
    }
    ASSERT_EQ( settle( flat, in ), expected( circuit, opts.width, in ) ) << flat.name << " input " << i;
  }
}

} // namespace

TEST( builders, catalog )
{
  EXPECT_EQ( circuit_catalog().size(), 10u );
  EXPECT_NE( find_circuit( "adder" ), nullptr );
  EXPECT_TRUE( find_circuit( "adder" )->word );
  EXPECT_EQ( find_circuit( "nand" ), nullptr );
  try
  {
    static_cast<void>( build_circuit( "bogus" ) );
    FAIL() << "bogus circuit built";
  }
  catch ( invalid_value const& e )
  {
    for ( auto const& c : circuit_catalog() )
    {
      EXPECT_NE( std::string( e.what() ).find( c.name ), std::string::npos ) << c.name;
    }
  }
}

TEST( builders, option_errors )
{
  BuildOptions opts;
  opts.width = 0;
  EXPECT_THROW( static_cast<void>( build_circuit( "adder", opts ) ), invalid_value );
  opts.width = 33;
  EXPECT_THROW( static_cast<void>( build_circuit( "wordcomp", opts ) ), invalid_value );
  opts.width = 2;
  opts.registered = true;
  EXPECT_THROW( static_cast<void>( build_circuit( "xor", opts ) ), invalid_value );
}

TEST( builders, half_adder_composes_xor_and_carry )
{
  auto const nl = build_circuit( "tha" );
  std::vector<std::string> kinds;
  for ( auto const& inst : nl.instances() )
  {
    kinds.push_back( inst.kind );
  }
  EXPECT_EQ( kinds, ( std::vector<std::string>{"XOR_TLG", "CARRY_TLG"} ) );
}

TEST( builders, word_ports )
{
  BuildOptions opts;
  opts.width = 2;
  auto const add = build_circuit( "adder", opts );
  EXPECT_EQ( add.data_inputs(), ( std::vector<std::string>{"x0", "x1", "y0", "y1"} ) );
  EXPECT_EQ( add.outputs(), ( std::vector<std::string>{"s0", "s1", "cout"} ) );
  EXPECT_EQ( build_circuit( "sub", opts ).outputs(), ( std::vector<std::string>{"d0", "d1", "no_borrow"} ) );
  EXPECT_EQ( build_circuit( "wordcomp", opts ).outputs(), ( std::vector<std::string>{"gt", "eq", "lt"} ) );
}

TEST( builders, every_circuit_matches_integers )
{
  for ( auto const& c : circuit_catalog() )
  {
    for ( std::size_t width = 1; width <= ( c.word ? 3u : 1u ); ++width )
    {
      for ( int mode = 0; mode < 3; ++mode )
      {
        BuildOptions opts;
        opts.width = width;
        opts.variant = mode == 0 ? Variant::TLG : Variant::STD;
        opts.registered = mode == 2;
        check_exhaustive( c.name, opts );
      }
    }
  }
}

TEST( builders, structural_cascade_is_built_from_comparators )
{
  BuildOptions opts;
  opts.width = 3;
  auto const flat = elaborate( build_circuit( "wordcomp", opts ) );
  auto const single = elaborate( build_circuit( "comp1" ) );
  EXPECT_EQ( flat.count( CellKind::TLG_RAW ), 6 * single.count( CellKind::TLG_RAW ) );
  EXPECT_GT( flat.count( CellKind::BIN_AND ), 0u );
  EXPECT_GT( flat.count( CellKind::BIN_OR ), 0u );
}

TEST( builders, wide_arithmetic_on_random_pairs )
{
  std::mt19937_64 rng( 8 );
  std::size_t const width = 8;
  auto const n = ref::pow3( unsigned( width ) );
  for ( auto const* circuit : {"adder", "sub"} )
  {
    for ( auto variant : {Variant::TLG, Variant::STD} )
    {
      BuildOptions opts;
      opts.width = width;
      opts.variant = variant;
      auto const flat = elaborate( build_circuit( circuit, opts ) );
      for ( int k = 0; k < 1000; ++k )
      {
        Values in;
        put_word( in, 'x', rng() % n, width );
        put_word( in, 'y', rng() % n, width );
        ASSERT_EQ( settle( flat, in ), expected( circuit, width, in ) ) << flat.name;
      }
    }
  }
}

TEST( builders, registered_outputs_lag_one_edge )
{
  BuildOptions opts;
  opts.variant = Variant::STD;
  opts.registered = true;
  auto const flat = elaborate( build_circuit( "xor", opts ) );
  EXPECT_EQ( flat.name, "xor_STD_ff" );
  EXPECT_EQ( flat.count( CellKind::DLATCH ), 2u );
  Simulator sim( flat );
  std::vector<TraceValue> high, low;
  sim.cycle( {{Trit( 1 ), Trit( 1 )}, std::nullopt}, [&]( Phase p ) { ( p == Phase::high ? high : low ) = sim.output_values(); } );
  EXPECT_EQ( high[0], Trit( 0 ) );
  EXPECT_EQ( low[0], Trit( 2 ) );
}
