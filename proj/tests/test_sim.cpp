#include <algorithm>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "tritforge/cells.hpp"
#include "tritforge/sim.hpp"

#include "reference.hpp"

using namespace tritforge;

namespace
{

Netlist single( CellKind kind )
{
  auto const& spec = cell_library().get( kind );
  Netlist nl( "top" );
  std::vector<Connection> conns;
  for ( auto const& p : spec.ports )
  {
    if ( p.clock )
    {
      nl.add_clock( p.name );
    }
    else if ( p.dir == PortDir::in )
    {
      nl.add_input( p.name );
    }
    else
    {
      nl.add_output( p.name );
    }
    conns.push_back( {p.name, p.name} );
  }
  nl.add_instance( "u", kind, conns );
  return nl;
}

std::vector<CycleStimulus> rows( std::vector<std::vector<int>> const& values )
{
  std::vector<CycleStimulus> r;
  for ( auto const& v : values )
  {
    CycleStimulus s;
    for ( int x : v )
    {
      s.high.push_back( Trit( x ) );
    }
    r.push_back( s );
  }
  return r;
}

struct RandomCircuit
{
  Netlist netlist{"rand"};
  /* cells in creation (topological) order: kind, input nets, output net */
  std::vector<std::tuple<CellKind, std::vector<std::string>, std::string>> cells;
};

RandomCircuit random_circuit( std::mt19937& rng, std::size_t size )
{
  static CellKind const kinds[] = {CellKind::NTI, CellKind::PTI, CellKind::STI_STD, CellKind::BIN_INV, CellKind::BIN_AND, CellKind::BIN_OR};
  RandomCircuit rc;
  std::vector<std::string> nets;
  for ( int i = 0; i < 3; ++i )
  {
    nets.push_back( rc.netlist.add_input( "i" + std::to_string( i ) ) );
  }
  for ( std::size_t c = 0; c < size; ++c )
  {
    auto const kind = kinds[rng() % 6];
    std::size_t const arity = kind == CellKind::BIN_AND || kind == CellKind::BIN_OR ? 2 : 1;
    std::vector<std::string> in;
    for ( std::size_t k = 0; k < arity; ++k )
    {
      in.push_back( nets[rng() % nets.size()] );
    }
    auto const out = c + 1 == size ? rc.netlist.add_output( "n" + std::to_string( c ) ) : rc.netlist.add_net( "n" + std::to_string( c ) );
    rc.cells.emplace_back( kind, in, out );
    nets.push_back( out );
  }
  std::vector<std::size_t> order( size );
  for ( std::size_t c = 0; c < size; ++c )
  {
    order[c] = c;
  }
  std::shuffle( order.begin(), order.end(), rng );
  for ( auto c : order )
  {
    auto const& [kind, in, out] = rc.cells[c];
    std::vector<Connection> conns{{"a", in[0]}, {"y", out}};
    if ( in.size() == 2 )
    {
      conns.push_back( {"b", in[1]} );
    }
    rc.netlist.add_instance( "g" + std::to_string( c ), kind, conns );
  }
  return rc;
}

int eval_gate( CellKind kind, std::vector<int> const& in )
{
  auto high = []( int v ) { return v == 2; };
  switch ( kind )
  {
  case CellKind::NTI: return ref::nti( in[0] );
  case CellKind::PTI: return ref::pti( in[0] );
  case CellKind::STI_STD: return ref::sti( in[0] );
  case CellKind::BIN_INV: return high( in[0] ) ? 0 : 2;
  case CellKind::BIN_AND: return high( in[0] ) && high( in[1] ) ? 2 : 0;
  case CellKind::BIN_OR: return high( in[0] ) || high( in[1] ) ? 2 : 0;
  default: return -1;
  }
}

/* iterate over the cells in random order until nothing changes */
std::map<std::string, int> fixed_point( RandomCircuit const& rc, std::vector<int> const& inputs, std::mt19937& rng )
{
  std::map<std::string, int> v;
  for ( std::size_t i = 0; i < inputs.size(); ++i )
  {
    v["i" + std::to_string( i )] = inputs[i];
  }
  for ( auto const& [kind, in, out] : rc.cells )
  {
    v[out] = 0;
  }
  auto cells = rc.cells;
  for ( bool changed = true; changed; )
  {
    changed = false;
    std::shuffle( cells.begin(), cells.end(), rng );
    for ( auto const& [kind, in, out] : cells )
    {
      std::vector<int> args;
      for ( auto const& n : in )
      {
        args.push_back( v.at( n ) );
      }
      auto const r = eval_gate( kind, args );
      if ( r != v[out] )
      {
        v[out] = r;
        changed = true;
      }
    }
  }
  return v;
}

} // namespace

TEST( sim, composite_instances_expand_to_primitives )
{
  auto const flat = elaborate( single( CellKind::THA_TLG ) );
  auto const x = elaborate( *cell_library().get( CellKind::XOR_TLG ).structure );
  auto const c = elaborate( *cell_library().get( CellKind::CARRY_TLG ).structure );
  EXPECT_EQ( flat.cells.size(), x.cells.size() + c.cells.size() );
  EXPECT_EQ( flat.count( CellKind::TLG_RAW ), x.count( CellKind::TLG_RAW ) + c.count( CellKind::TLG_RAW ) );
  for ( auto const& cell : flat.cells )
  {
    EXPECT_TRUE( is_primitive( cell.kind ) );
    EXPECT_EQ( cell.name.rfind( "u/", 0 ), 0u ) << cell.name;
  }
  EXPECT_TRUE( flat.clock.has_value() );
}

TEST( sim, elaboration_errors )
{
  Netlist loop( "loop" );
  loop.add_output( "y" );
  loop.add_instance( "inv", CellKind::STI_STD, {{"a", "y"}, {"y", "y"}} );
  try
  {
    static_cast<void>( elaborate( loop ) );
    FAIL() << "loop accepted";
  }
  catch ( elaboration_error const& e )
  {
    EXPECT_NE( std::string( e.what() ).find( "combinational loop" ), std::string::npos );
    EXPECT_NE( std::string( e.what() ).find( "inv" ), std::string::npos );
  }

  Netlist unbound( "unbound" );
  unbound.add_input( "a" );
  unbound.add_output( "y" );
  unbound.add_instance( "u", CellKind::BIN_AND, {{"a", "a"}, {"y", "y"}} );
  EXPECT_THROW( static_cast<void>( elaborate( unbound ) ), elaboration_error );

  Netlist unknown( "unknown" );
  unknown.add_input( "a" );
  unknown.add_instance( "u", "FROB", {{"a", "a"}} );
  EXPECT_THROW( static_cast<void>( elaborate( unknown ) ), elaboration_error );

  Netlist clocks( "clocks" );
  clocks.add_input( "d" );
  clocks.add_clock( "c1" );
  clocks.add_clock( "c2" );
  clocks.add_output( "q1" );
  clocks.add_output( "q2" );
  clocks.add_instance( "l1", CellKind::DLATCH, {{"d", "d"}, {"clk", "c1"}, {"q", "q1"}} );
  clocks.add_instance( "l2", CellKind::DLATCH, {{"d", "d"}, {"clk", "c2"}, {"q", "q2"}} );
  EXPECT_THROW( static_cast<void>( elaborate( clocks ) ), elaboration_error );

  Netlist two( "two" );
  two.add_input( "a" );
  two.add_output( "y" );
  two.add_instance( "p", CellKind::NTI, {{"a", "a"}, {"y", "y"}} );
  two.add_instance( "q", CellKind::PTI, {{"a", "a"}, {"y", "y"}} );
  EXPECT_THROW( static_cast<void>( elaborate( two ) ), elaboration_error );
}

TEST( sim, loop_through_latch_is_legal )
{
  Netlist nl( "toggle" );
  nl.add_clock();
  nl.add_output( "q" );
  nl.add_net( "m" );
  nl.add_net( "n" );
  CellParams low;
  low.phase = LatchPhase::low;
  nl.add_instance( "inv", CellKind::STI_STD, {{"a", "q"}, {"y", "n"}} );
  nl.add_instance( "master", CellKind::DLATCH, {{"d", "n"}, {"clk", "clk"}, {"q", "m"}} );
  nl.add_instance( "slave", CellKind::DLATCH, {{"d", "m"}, {"clk", "clk"}, {"q", "q"}}, low );
  auto const flat = elaborate( nl );
  auto const trace = simulate( flat, std::vector<CycleStimulus>{}, 3 );
  std::vector<char> seen;
  for ( std::size_t s = 1; s < trace.samples.size(); s += 2 )
  {
    seen.push_back( to_char( trace.at( s, "q" ) ) );
  }
  EXPECT_EQ( seen, ( std::vector<char>{'2', '0', '2'} ) );
}

TEST( sim, empty_netlist )
{
  auto const flat = elaborate( Netlist( "empty" ) );
  EXPECT_TRUE( flat.cells.empty() );
  EXPECT_TRUE( flat.inputs.empty() );
  EXPECT_TRUE( simulate( flat, std::vector<CycleStimulus>{}, 2 ).events.empty() );
}

TEST( sim, examples )
{
  auto trace = simulate( elaborate( single( CellKind::COMP1_TLG ) ), rows( {{2, 1}} ), 1 );
  ASSERT_EQ( trace.samples.size(), 2u );
  EXPECT_EQ( trace.samples[1].phase, Phase::low );
  EXPECT_EQ( trace.at( 1, "o" ), Trit( 2 ) );
  EXPECT_EQ( trace.at( 1, "obar" ), Trit( 0 ) );

  trace = simulate( elaborate( single( CellKind::XOR_TLG ) ), rows( {{1, 2}} ), 1 );
  EXPECT_EQ( trace.at( 1, "s" ), Trit( 0 ) );

  trace = simulate( elaborate( single( CellKind::XOR_TLG ) ), rows( {{1, 2}} ), 0 );
  EXPECT_TRUE( trace.samples.empty() );
  EXPECT_TRUE( trace.events.empty() );
}

TEST( sim, verify_examples )
{
  auto report = verify_exhaustive( single( CellKind::STI_TLG ), []( std::span<Trit const> in ) { return std::vector<Trit>{sti( in[0] )}; } );
  EXPECT_TRUE( report.passed() );
  EXPECT_EQ( report.matched, 3u );

  report = verify_exhaustive( single( CellKind::THA_TLG ), []( std::span<Trit const> in ) {
    int const x = int( in[0].value() ), y = int( in[1].value() );
    return std::vector<Trit>{Trit( ref::carry( x, y ) ), Trit( ref::xor3( x, y ) )};
  } );
  EXPECT_TRUE( report.passed() );
  EXPECT_EQ( report.matched, 9u );

  report = verify_exhaustive( single( CellKind::STI_TLG ), []( std::span<Trit const> in ) { return std::vector<Trit>{pti( in[0] )}; } );
  EXPECT_FALSE( report.passed() );
  ASSERT_EQ( report.mismatches.size(), 1u );
  EXPECT_EQ( report.mismatches[0].inputs, std::vector<Trit>{Trit( 1 )} );
  EXPECT_EQ( report.mismatches[0].expected, std::vector<Trit>{Trit( 2 )} );
  EXPECT_EQ( report.mismatches[0].got, std::vector<TraceValue>{Trit( 1 )} );
}

TEST( sim, verify_is_capped_and_shards_deterministically )
{
  Netlist wide( "wide" );
  for ( int i = 0; i < 11; ++i )
  {
    wide.add_input( "i" + std::to_string( i ) );
  }
  EXPECT_THROW( static_cast<void>( verify_exhaustive( wide, []( std::span<Trit const> ) { return std::vector<Trit>{}; } ) ), invalid_value );

  auto const flat = elaborate( single( CellKind::HSUB_TLG ) );
  auto const oracle = []( std::span<Trit const> in ) { return std::vector<Trit>{hsub_diff( in[0], in[1] ), pti( in[1] )}; };
  VerifyOptions one, four;
  four.threads = 4;
  auto const a = verify_exhaustive( flat, oracle, one );
  auto const b = verify_exhaustive( flat, oracle, four );
  EXPECT_FALSE( a.passed() );
  EXPECT_EQ( a.matched, b.matched );
  ASSERT_EQ( a.mismatches.size(), b.mismatches.size() );
  for ( std::size_t k = 0; k < a.mismatches.size(); ++k )
  {
    EXPECT_EQ( a.mismatches[k].inputs, b.mismatches[k].inputs );
  }
}

TEST( sim, determinism )
{
  std::mt19937 rng( 1 );
  auto const flat = elaborate( single( CellKind::HSUB_TLG ) );
  std::vector<CycleStimulus> stim;
  for ( int k = 0; k < 50; ++k )
  {
    stim.push_back( {{Trit( rng() % 3 ), Trit( rng() % 3 )}, std::vector<Trit>{Trit( rng() % 3 ), Trit( rng() % 3 )}} );
  }
  EXPECT_EQ( simulate( flat, stim, 50 ), simulate( flat, stim, 50 ) );
}

TEST( sim, stimulus_last_row_is_held )
{
  auto const flat = elaborate( single( CellKind::XOR_TLG ) );
  auto const trace = simulate( flat, rows( {{1, 1}, {2, 0}} ), 4 );
  EXPECT_EQ( trace.samples.size(), 8u );
  EXPECT_EQ( trace.at( 7, "x" ), Trit( 2 ) );
  EXPECT_EQ( trace.at( 7, "s" ), Trit( 2 ) );
  EXPECT_THROW( static_cast<void>( simulate( flat, std::vector<CycleStimulus>{}, 1 ) ), invalid_value );
}

TEST( sim, floating_net_holds_and_warns )
{
  Netlist nl( "float" );
  nl.add_input( "a" );
  nl.add_input( "en" );
  nl.add_output( "y" );
  nl.add_net( "m" );
  nl.add_instance( "t", CellKind::TGATE, {{"in", "a"}, {"en", "en"}, {"out", "m"}} );
  nl.add_instance( "inv", CellKind::NTI, {{"a", "m"}, {"y", "y"}} );
  auto const flat = elaborate( nl );
  auto const trace = simulate( flat, rows( {{0, 2}, {2, 0}} ), 2 );
  EXPECT_EQ( trace.at( 1, "m" ), Trit( 0 ) );
  EXPECT_EQ( trace.at( 1, "y" ), Trit( 2 ) );
  EXPECT_EQ( trace.at( 3, "m" ), std::nullopt );
  EXPECT_EQ( to_char( trace.at( 3, "m" ) ), 'Z' );
  EXPECT_EQ( trace.at( 3, "y" ), Trit( 2 ) );
  ASSERT_FALSE( trace.events.empty() );
  EXPECT_EQ( trace.events[0].kind, EventKind::float_read );
  EXPECT_EQ( trace.events[0].cycle, 1u );
  EXPECT_EQ( trace.events[0].where, "m" );
}

TEST( sim, contention_is_an_error )
{
  Netlist nl( "fight" );
  nl.add_input( "a" );
  nl.add_input( "b" );
  nl.add_input( "en" );
  nl.add_output( "y" );
  nl.add_instance( "t1", CellKind::TGATE, {{"in", "a"}, {"en", "en"}, {"out", "y"}} );
  nl.add_instance( "t2", CellKind::TGATE, {{"in", "b"}, {"en", "en"}, {"out", "y"}} );
  auto const flat = elaborate( nl );
  EXPECT_NO_THROW( static_cast<void>( simulate( flat, rows( {{1, 1, 2}} ), 1 ) ) );
  try
  {
    static_cast<void>( simulate( flat, rows( {{0, 0, 2}, {1, 2, 2}} ), 2 ) );
    FAIL() << "contention accepted";
  }
  catch ( simulation_error const& e )
  {
    std::string const msg = e.what();
    EXPECT_NE( msg.find( "'y'" ), std::string::npos );
    EXPECT_NE( msg.find( "cycle 1" ), std::string::npos );
  }
}

TEST( sim, control_and_startup_events )
{
  Netlist nl( "gate" );
  nl.add_input( "a" );
  nl.add_input( "en" );
  nl.add_output( "y" );
  nl.add_instance( "t", CellKind::TGATE, {{"in", "a"}, {"en", "en"}, {"out", "y"}} );
  auto const trace = simulate( elaborate( nl ), rows( {{2, 1}} ), 1 );
  ASSERT_FALSE( trace.events.empty() );
  EXPECT_EQ( trace.events[0].kind, EventKind::nonbinary_control );

  auto const tlg = simulate( elaborate( single( CellKind::COMP1_TLG ) ), rows( {{0, 0}} ), 2 );
  EXPECT_TRUE( std::any_of( tlg.events.begin(), tlg.events.end(), []( SimEvent const& e ) {
    return e.kind == EventKind::unevaluated_tlg && e.cycle == 0u && e.phase == Phase::high;
  } ) );
  EXPECT_TRUE( std::none_of( tlg.events.begin(), tlg.events.end(), []( SimEvent const& e ) { return e.cycle > 0u; } ) );
}

TEST( sim, settle_cycles_follow_register_depth )
{
  EXPECT_EQ( required_settle_cycles( elaborate( single( CellKind::NTI ) ) ), 1u );
  EXPECT_EQ( required_settle_cycles( elaborate( single( CellKind::XOR_TLG ) ) ), 1u );
  EXPECT_EQ( required_settle_cycles( elaborate( single( CellKind::HSUB_TLG ) ) ), 3u );
}

TEST( sim, levelized_settle_matches_naive_fixed_point )
{
  std::mt19937 rng( 99 );
  for ( int n = 0; n < 100; ++n )
  {
    auto const rc = random_circuit( rng, 1 + rng() % 50 );
    auto const flat = elaborate( rc.netlist );
    for ( int s = 0; s < 5; ++s )
    {
      std::vector<int> in{int( rng() % 3 ), int( rng() % 3 ), int( rng() % 3 )};
      Simulator sim( flat );
      sim.cycle( {{Trit( in[0] ), Trit( in[1] ), Trit( in[2] )}, std::nullopt} );
      auto const want = fixed_point( rc, in, rng );
      for ( auto const& [net, value] : want )
      {
        auto const got = sim.value( flat.net_index( net ) );
        ASSERT_TRUE( got.has_value() ) << net;
        ASSERT_EQ( int( got->value() ), value ) << "circuit " << n << " net " << net;
      }
    }
  }
}
