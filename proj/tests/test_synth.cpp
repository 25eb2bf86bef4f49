#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "tritforge/sim.hpp"
#include "tritforge/synth.hpp"

#include "reference.hpp"

using namespace tritforge;

namespace
{

TernaryTruthTable unary_table( int ( *fn )( int ) )
{
  return TernaryTruthTable::from_function( 1, [fn]( std::span<Trit const> in ) { return Trit( fn( int( in[0].value() ) ) ); } );
}

TernaryTruthTable binary_table( int ( *fn )( int, int ) )
{
  return TernaryTruthTable::from_function( 2, [fn]( std::span<Trit const> in ) {
    return Trit( fn( int( in[0].value() ), int( in[1].value() ) ) );
  } );
}

TernaryTruthTable random_table( std::mt19937& rng, unsigned arity )
{
  std::uniform_int_distribution<int> t( 0, 2 );
  std::vector<Trit> out( pow3( arity ) );
  for ( auto& v : out )
  {
    v = Trit( t( rng ) );
  }
  return TernaryTruthTable( arity, out );
}

/* simulates every input combination and checks the table and the absence of events */
void expect_round_trip( TernaryTruthTable const& tt, bool simplify )
{
  SynthOptions opts;
  opts.simplify = simplify;
  auto const result = synthesize( tt, opts );
  auto const report = verify_exhaustive( result.netlist, [&]( std::span<Trit const> in ) { return std::vector<Trit>{tt( in )}; } );
  EXPECT_TRUE( report.passed() ) << format_truth_table( tt );
  EXPECT_EQ( report.combinations, tt.size() );
  EXPECT_TRUE( report.events.empty() ) << format_truth_table( tt );
}

void expect_exclusive( PullNetworks const& nets, unsigned arity )
{
  for ( std::size_t i = 0; i < pow3( arity ); ++i )
  {
    auto const tuple = input_tuple( i, arity );
    int active = 0;
    for ( auto const& n : nets )
    {
      active += n.active( tuple ) ? 1 : 0;
    }
    ASSERT_EQ( active, 1 );
  }
}

} // namespace

TEST( synth, truth_table_indexing )
{
  EXPECT_EQ( input_tuple( 5, 2 ), ( std::vector<Trit>{Trit( 1 ), Trit( 2 )} ) );
  std::vector<Trit> const t{Trit( 2 ), Trit( 0 ), Trit( 1 )};
  EXPECT_EQ( tuple_index( t ), 19u );
  EXPECT_THROW( TernaryTruthTable( 2, std::vector<Trit>( 8 ) ), invalid_value );
  EXPECT_THROW( TernaryTruthTable( 0, {} ), invalid_value );
}

TEST( synth, truth_table_text_round_trip )
{
  std::mt19937 rng( 3 );
  auto const tt = random_table( rng, 3 );
  std::istringstream in( format_truth_table( tt ) );
  EXPECT_EQ( parse_truth_table( in ), tt );
}

TEST( synth, truth_table_parser )
{
  std::istringstream ok( "# inverter\narity 1\n2 0\n\n0 2 # first\n1 1\n" );
  EXPECT_EQ( parse_truth_table( ok ), unary_table( ref::sti ) );
  for ( char const* bad : {"", "arity 0\n", "arity x\n", "arity 1\n0 2\n1 1\n", "arity 1\n0 2\n0 2\n1 1\n2 0\n",
                           "arity 1\n0 2\n1 1\n22 0\n", "arity 1\n0 2\n1 1\n2 3\n", "arity 1\n0 2\n1 1\n2\n", "wrong 1\n"} )
  {
    std::istringstream in( bad );
    EXPECT_THROW( parse_truth_table( in ), io_error ) << bad;
  }
  EXPECT_THROW( read_truth_table( "/nonexistent/table.txt" ), io_error );
}

TEST( synth, sti_networks )
{
  auto const nets = minterm_networks( unary_table( ref::sti ) );
  std::vector<std::string> const names{"x"};
  EXPECT_EQ( format_network( nets[2], names ), "x^-" );
  EXPECT_EQ( format_network( nets[0], names ), "(x^+)~" );
  EXPECT_EQ( format_network( nets[1], names ), "x^1" );
  expect_exclusive( nets, 1 );
  /* inverter column of the truth table */
  auto const result = synthesize( unary_table( ref::sti ) );
  auto const flat = elaborate( result.netlist );
  for ( int x = 0; x <= 2; ++x )
  {
    Simulator sim( flat );
    sim.cycle( {{Trit( x )}, std::nullopt} );
    EXPECT_EQ( sim.output_values()[0], Trit( 2 - x ) );
  }
}

TEST( synth, carry_pull_to_zero )
{
  auto const carry = binary_table( ref::carry );
  for ( auto const& nets : {minterm_networks( carry ), simplify_terms( minterm_networks( carry ), 2 )} )
  {
    for ( int x = 0; x <= 2; ++x )
    {
      for ( int y = 0; y <= 2; ++y )
      {
        bool const want = ref::nti( x ) == 2 || ref::nti( y ) == 2 || ( x == 1 && ref::pti( y ) == 2 );
        std::vector<Trit> const t{Trit( x ), Trit( y )};
        EXPECT_EQ( nets[0].active( t ), want ) << x << y;
      }
    }
  }
  auto const simple = simplify_terms( minterm_networks( carry ), 2 );
  EXPECT_LT( simple[0].terms.size(), minterm_networks( carry )[0].terms.size() );
  EXPECT_TRUE( simple[2].terms.empty() );
}

TEST( synth, constant_function )
{
  auto const one = unary_table( []( int ) { return 1; } );
  auto const nets = simplify_terms( minterm_networks( one ), 1 );
  ASSERT_EQ( nets[1].terms.size(), 1u );
  EXPECT_EQ( nets[1].terms[0], Cube( 1 ) );
  EXPECT_EQ( format_network( nets[1], {"x"} ), "1" );
  EXPECT_TRUE( nets[0].terms.empty() );
  EXPECT_TRUE( nets[2].terms.empty() );
  expect_round_trip( one, true );
  expect_round_trip( one, false );
}

TEST( synth, simplify_fixpoints )
{
  Cube c( 2 );
  c.set_mask( 0, 0b001 );
  PullNetworks const nets{PullNetwork{Trit( 0 ), {}}, PullNetwork{Trit( 1 ), {}}, PullNetwork{Trit( 2 ), {c}}};
  auto const simple = simplify_terms( nets, 2 );
  EXPECT_TRUE( simple[0].terms.empty() );
  EXPECT_TRUE( simple[1].terms.empty() );
  EXPECT_EQ( simple[2].terms, nets[2].terms );
  EXPECT_THROW( c.set_mask( 1, 0 ), invalid_value );
}

TEST( synth, simplify_preserves_activation_and_never_grows )
{
  std::mt19937 rng( 17 );
  for ( int k = 0; k < 200; ++k )
  {
    unsigned const arity = 1u + unsigned( k % 3 );
    auto const tt = random_table( rng, arity );
    auto const raw = minterm_networks( tt );
    auto const simple = simplify_terms( raw, arity );
    for ( std::size_t level = 0; level < 3; ++level )
    {
      EXPECT_LE( simple[level].terms.size(), raw[level].terms.size() );
      EXPECT_LE( simple[level].literal_count(), raw[level].literal_count() );
      for ( std::size_t i = 0; i < tt.size(); ++i )
      {
        auto const t = input_tuple( i, arity );
        ASSERT_EQ( simple[level].active( t ), raw[level].active( t ) );
        ASSERT_EQ( raw[level].active( t ), tt.at( i ) == Trit( unsigned( level ) ) );
      }
    }
    expect_exclusive( simple, arity );
    EXPECT_EQ( evaluate_networks( simple, input_tuple( 0, arity ) ), tt.at( 0 ) );
  }
}

TEST( synth, random_tables_round_trip )
{
  std::mt19937 rng( 2024 );
  for ( int k = 0; k < 200; ++k )
  {
    auto const tt = random_table( rng, 1u + unsigned( k % 3 ) );
    expect_round_trip( tt, false );
    expect_round_trip( tt, true );
  }
}

TEST( synth, half_adder_matches_table )
{
  std::vector<TernaryTruthTable> const tables{binary_table( ref::carry ), binary_table( ref::xor3 )};
  SynthOptions opts;
  opts.input_names = {"x", "y"};
  opts.output_names = {"c", "s"};
  opts.simplify = true;
  auto const result = synthesize( tables, opts );
  EXPECT_EQ( result.networks.size(), 2u );
  EXPECT_EQ( result.netlist.outputs(), ( std::vector<std::string>{"c", "s"} ) );
  /* x, y, c, s */
  int const table[9][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 2, 0, 2}, {1, 0, 0, 1}, {1, 1, 0, 2},
                           {1, 2, 1, 0}, {2, 0, 0, 2}, {2, 1, 1, 0}, {2, 2, 1, 1}};
  auto const flat = elaborate( result.netlist );
  for ( auto const& row : table )
  {
    Simulator sim( flat );
    sim.cycle( {{Trit( row[0] ), Trit( row[1] )}, std::nullopt} );
    EXPECT_EQ( sim.output_values(), ( std::vector<TraceValue>{Trit( row[2] ), Trit( row[3] )} ) );
    EXPECT_TRUE( sim.events().empty() );
  }
}

TEST( synth, decoders_are_shared_between_outputs )
{
  std::vector<TernaryTruthTable> const both{binary_table( ref::carry ), binary_table( ref::xor3 )};
  auto const shared = elaborate( synthesize( both ).netlist );
  auto const c = elaborate( synthesize( both[0] ).netlist );
  auto const s = elaborate( synthesize( both[1] ).netlist );
  for ( auto kind : {CellKind::NTI, CellKind::PTI} )
  {
    EXPECT_LT( shared.count( kind ), c.count( kind ) + s.count( kind ) );
    EXPECT_LE( shared.count( kind ), 2u );
  }
}

TEST( synth, rejects_inconsistent_requests )
{
  std::vector<TernaryTruthTable> const mixed{unary_table( ref::sti ), binary_table( ref::carry )};
  EXPECT_THROW( synthesize( mixed ), invalid_value );
  EXPECT_THROW( synthesize( std::span<TernaryTruthTable const>{} ), invalid_value );
  SynthOptions opts;
  opts.input_names = {"a", "b"};
  EXPECT_THROW( synthesize( unary_table( ref::sti ), opts ), invalid_value );
}
