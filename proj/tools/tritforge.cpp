/* tritforge command line: cells, build, synth, sim, verify, report */

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "tritforge/tritforge.hpp"

using namespace tritforge;

namespace
{

enum exit_code
{
  ok = 0,
  mismatch = 1,
  usage = 2,
  io = 3
};

Variant parse_variant( std::string const& s )
{
  if ( s == "TLG" || s == "tlg" )
  {
    return Variant::TLG;
  }
  if ( s == "STD" || s == "std" )
  {
    return Variant::STD;
  }
  throw invalid_value( "variant must be TLG or STD, got '" + s + "'" );
}

void require_files( std::vector<std::string> const& paths )
{
  for ( auto const& p : paths )
  {
    if ( !p.empty() && !std::filesystem::is_regular_file( p ) )
    {
      throw io_error( "no such file: '" + p + "'" );
    }
  }
}

void write_text( std::string const& path, std::string const& text )
{
  if ( path.empty() || path == "-" )
  {
    std::cout << text;
    return;
  }
  std::ofstream out( path );
  if ( !out || !( out << text ) )
  {
    throw io_error( "cannot write '" + path + "'" );
  }
}

std::string netlist_text( Netlist const& nl )
{
  return to_json( nl ).dump( 2 ) + "\n";
}

/* device count and worst-case path of a cell from its expansion into primitives */
nlohmann::ordered_json cell_costs( CellSpec const& spec, CostModel const& costs )
{
  nlohmann::ordered_json j;
  if ( spec.primitive )
  {
    auto const& c = costs.get( spec.kind );
    j["devices"] = c.devices;
    j["delay"] = c.delay;
    j["toggle_energy"] = c.toggle_energy;
    j["leakage"] = c.leakage;
    return j;
  }
  auto const flat = elaborate( *spec.structure );
  j["devices"] = transistor_count( flat, costs );
  j["delay"] = critical_path( flat, costs );
  j["leakage"] = leakage_sum( flat, costs );
  return j;
}

int cmd_cells( bool json )
{
  auto const costs = environment_costs();
  auto const& lib = cell_library();
  if ( json )
  {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for ( auto kind : all_cell_kinds )
    {
      auto const& spec = lib.get( kind );
      nlohmann::ordered_json c;
      c["kind"] = std::string( to_string( kind ) );
      c["primitive"] = spec.primitive;
      c["clocked"] = spec.clocked;
      c["ports"] = nlohmann::ordered_json::array();
      for ( auto const& p : spec.ports )
      {
        c["ports"].push_back( {{"name", p.name}, {"dir", p.dir == PortDir::in ? "in" : "out"}, {"clock", p.clock}} );
      }
      c["description"] = spec.description;
      c["costs"] = cell_costs( spec, costs );
      j.push_back( c );
    }
    std::cout << j.dump( 2 ) << '\n';
    return ok;
  }
  for ( auto kind : all_cell_kinds )
  {
    auto const& spec = lib.get( kind );
    std::string ports;
    for ( auto const& p : spec.ports )
    {
      ports += ( ports.empty() ? "" : " " ) + std::string( p.dir == PortDir::in ? ( p.clock ? "^" : "" ) : ">" ) + p.name;
    }
    std::printf( "%-10s %-9s %-26s %s\n", std::string( to_string( kind ) ).c_str(),
                 spec.primitive ? "primitive" : "composite", ports.c_str(), spec.description.c_str() );
  }
  return ok;
}

std::string format_report_line( std::string const& label, VerifyReport const& r )
{
  char buf[256];
  std::snprintf( buf, sizeof buf, "%-18s %4zu/%-5zu float=%zu %s", label.c_str(), r.matched, r.combinations,
                 r.count( EventKind::float_read ), r.passed() && r.count( EventKind::float_read ) == 0u ? "PASS" : "FAIL" );
  return buf;
}

void print_mismatches( VerifyReport const& r, std::size_t limit = 10 )
{
  std::size_t shown = 0;
  for ( auto const& m : r.mismatches )
  {
    if ( shown++ == limit )
    {
      std::cout << "  ...\n";
      break;
    }
    std::string in, exp, got;
    for ( auto t : m.inputs )
    {
      in.push_back( t.to_char() );
    }
    for ( auto t : m.expected )
    {
      exp.push_back( t.to_char() );
    }
    for ( auto t : m.got )
    {
      got.push_back( to_char( t ) );
    }
    std::cout << "  inputs " << in << ": expected " << exp << ", got " << got << '\n';
  }
}

int verify_all( unsigned threads )
{
  bool all = true;
  std::cout << "circuit            result\n";
  for ( auto const& c : circuit_catalog() )
  {
    for ( auto v : {Variant::TLG, Variant::STD} )
    {
      if ( ( v == Variant::TLG && !c.has_tlg ) || ( v == Variant::STD && !c.has_std ) )
      {
        continue;
      }
      BuildOptions opts;
      opts.variant = v;
      auto const flat = elaborate( build_circuit( c.name, opts ) );
      auto const r = verify_exhaustive( flat, make_oracle( c.oracle, flat ), {0, threads} );
      auto label = c.name + " " + std::string( to_string( v ) );
      if ( c.word )
      {
        label += " M=" + std::to_string( opts.width );
      }
      std::cout << format_report_line( label, r ) << '\n';
      print_mismatches( r );
      all = all && r.passed() && r.count( EventKind::float_read ) == 0u;
    }
  }
  std::cout << ( all ? "all circuits pass\n" : "verification FAILED\n" );
  return all ? ok : mismatch;
}

std::vector<std::string> split_list( std::string const& s )
{
  std::vector<std::string> r;
  std::stringstream ss( s );
  std::string item;
  while ( std::getline( ss, item, ',' ) )
  {
    if ( !item.empty() )
    {
      r.push_back( item );
    }
  }
  return r;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{"tritforge: ternary threshold-logic circuit toolkit"};
  app.require_subcommand( 1 );

  auto* cells = app.add_subcommand( "cells", "List the cell library" );
  bool cells_json = false;
  cells->add_flag( "--json", cells_json, "Emit JSON with ports, clocking and default costs" );

  auto* build = app.add_subcommand( "build", "Build a catalog circuit as netlist JSON" );
  std::string build_name, build_variant = "TLG", build_out;
  std::size_t build_width = default_word_width;
  bool build_ff = false;
  build->add_option( "circuit", build_name, "Circuit name" )->required();
  build->add_option( "--variant", build_variant, "TLG or STD" );
  build->add_option( "--width,-M", build_width, "Digits per operand for word circuits" );
  build->add_flag( "--ff", build_ff, "Register STD outputs with DFFs" );
  build->add_option( "-o,--output", build_out, "Output file (default stdout)" );

  auto* synth = app.add_subcommand( "synth", "Synthesize a truth table into pull networks" );
  std::string synth_table, synth_out, synth_name = "synth";
  bool synth_simplify = false;
  synth->add_option( "--table", synth_table, "Truth-table file" )->required();
  synth->add_option( "-o,--output", synth_out, "Netlist JSON output (default stdout, report goes to stderr)" );
  synth->add_option( "--name", synth_name, "Netlist name" );
  synth->add_flag( "--simplify", synth_simplify, "Merge and drop redundant terms" );

  auto* sim = app.add_subcommand( "sim", "Simulate a netlist" );
  std::string sim_netlist, sim_stim, sim_vcd, sim_csv;
  std::size_t sim_cycles = 0;
  sim->add_option( "--netlist", sim_netlist, "Netlist JSON" )->required();
  sim->add_option( "--stim", sim_stim, "Stimulus CSV" );
  sim->add_option( "--cycles", sim_cycles, "Cycles to run (default: stimulus length)" );
  sim->add_option( "--trace", sim_vcd, "VCD output" );
  sim->add_option( "--csv", sim_csv, "Trace CSV output" );

  auto* verify = app.add_subcommand( "verify", "Exhaustive functional verification" );
  std::string verify_netlist, verify_oracle, verify_circuit, verify_variant = "TLG";
  std::size_t verify_width = default_word_width;
  unsigned verify_threads = 1;
  bool verify_all_flag = false;
  verify->add_option( "--netlist", verify_netlist, "Netlist JSON" );
  verify->add_option( "--oracle", verify_oracle, "Builtin oracle name" );
  verify->add_option( "--circuit", verify_circuit, "Catalog circuit" );
  verify->add_option( "--variant", verify_variant, "TLG or STD" );
  verify->add_option( "--width,-M", verify_width, "Digits per operand for word circuits" );
  verify->add_option( "--threads", verify_threads, "Worker threads" );
  verify->add_flag( "--all", verify_all_flag, "Verify every catalog circuit" );

  auto* report = app.add_subcommand( "report", "Cost comparison of circuit variants" );
  std::string report_variants, report_circuit, report_stim, report_costs, report_format = "text";
  std::size_t report_width = default_word_width, report_cycles = 0;
  report->add_option( "--variants", report_variants, "Comma separated netlist JSON files" );
  report->add_option( "--circuit", report_circuit, "Catalog circuit: compares TLG against registered STD" );
  report->add_option( "--width,-M", report_width, "Digits per operand for word circuits" );
  report->add_option( "--stim", report_stim, "Stimulus CSV (default: every trit transition on each input)" );
  report->add_option( "--costs", report_costs, "Cost file (default: $TRITFORGE_COSTS or built-in)" );
  report->add_option( "--cycles", report_cycles, "Cycles to simulate" );
  report->add_option( "--format", report_format, "text, md, csv or json" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    int const rc = app.exit( e );
    return rc == 0 ? ok : usage;
  }

  try
  {
    if ( *cells )
    {
      return cmd_cells( cells_json );
    }
    if ( *build )
    {
      BuildOptions opts;
      opts.variant = parse_variant( build_variant );
      opts.width = build_width;
      opts.registered = build_ff;
      auto const nl = build_circuit( build_name, opts );
      write_text( build_out, netlist_text( nl ) );
      return ok;
    }
    if ( *synth )
    {
      require_files( {synth_table} );
      auto const tt = read_truth_table( synth_table );
      SynthOptions opts;
      opts.name = synth_name;
      opts.simplify = synth_simplify;
      auto const result = synthesize( tt, opts );
      std::vector<std::string> names;
      for ( unsigned i = 0; i < tt.arity(); ++i )
      {
        names.push_back( "x" + std::to_string( i ) );
      }
      std::ostringstream terms;
      for ( auto const& net : result.networks.front() )
      {
        terms << "pull to " << net.level.to_char() << ": " << format_network( net, names ) << '\n';
      }
      write_text( synth_out, netlist_text( result.netlist ) );
      ( synth_out.empty() || synth_out == "-" ? std::cerr : std::cout ) << terms.str();
      return ok;
    }
    if ( *sim )
    {
      require_files( {sim_netlist, sim_stim} );
      auto const flat = elaborate( read_netlist( sim_netlist ) );
      std::vector<CycleStimulus> stim;
      if ( !sim_stim.empty() )
      {
        stim = read_stimulus( sim_stim, flat );
      }
      else if ( !flat.inputs.empty() )
      {
        throw invalid_value( flat.name + " has inputs; pass --stim" );
      }
      auto const cycles = sim_cycles ? sim_cycles : std::max<std::size_t>( stim.size(), 1u );
      auto const trace = simulate( flat, stim, cycles );
      std::cout << "cycle phase";
      for ( auto const& p : flat.outputs )
      {
        std::cout << ' ' << p.name;
      }
      std::cout << '\n';
      for ( auto const& s : trace.samples )
      {
        std::cout << s.cycle << ' ' << to_string( s.phase );
        for ( auto const& p : flat.outputs )
        {
          std::cout << ' ' << to_char( s.values[p.net] );
        }
        std::cout << '\n';
      }
      for ( auto const& e : trace.events )
      {
        std::cerr << "warning: " << to_string( e.kind ) << " at " << e.where << " (cycle " << e.cycle << ", "
                  << to_string( e.phase ) << ")\n";
      }
      if ( !sim_vcd.empty() )
      {
        std::ostringstream os;
        write_vcd( os, trace, flat.name );
        write_text( sim_vcd, os.str() );
      }
      if ( !sim_csv.empty() )
      {
        std::ostringstream os;
        write_trace_csv( os, trace );
        write_text( sim_csv, os.str() );
      }
      return ok;
    }
    if ( *verify )
    {
      if ( verify_all_flag )
      {
        return verify_all( verify_threads );
      }
      FlatNetlist flat;
      std::string oracle = verify_oracle;
      if ( !verify_netlist.empty() )
      {
        require_files( {verify_netlist} );
        if ( oracle.empty() )
        {
          throw invalid_value( "--netlist needs --oracle" );
        }
        flat = elaborate( read_netlist( verify_netlist ) );
      }
      else if ( !verify_circuit.empty() )
      {
        BuildOptions opts;
        opts.variant = parse_variant( verify_variant );
        opts.width = verify_width;
        flat = elaborate( build_circuit( verify_circuit, opts ) );
        if ( oracle.empty() )
        {
          oracle = find_circuit( verify_circuit )->oracle;
        }
      }
      else
      {
        throw invalid_value( "verify needs --netlist with --oracle, --circuit, or --all" );
      }
      auto const r = verify_exhaustive( flat, make_oracle( oracle, flat ), {0, verify_threads} );
      std::cout << format_report_line( flat.name, r ) << '\n';
      print_mismatches( r );
      return r.passed() && r.count( EventKind::float_read ) == 0u ? ok : mismatch;
    }
    if ( *report )
    {
      require_files( {report_stim, report_costs} );
      for ( auto const& f : split_list( report_variants ) )
      {
        require_files( {f} );
      }
      auto const format = report_format_from_string( report_format );
      std::vector<FlatNetlist> variants;
      if ( !report_circuit.empty() )
      {
        BuildOptions tlg, std_ff;
        tlg.width = std_ff.width = report_width;
        std_ff.variant = Variant::STD;
        std_ff.registered = true;
        variants.push_back( elaborate( build_circuit( report_circuit, tlg ) ) );
        variants.push_back( elaborate( build_circuit( report_circuit, std_ff ) ) );
      }
      for ( auto const& f : split_list( report_variants ) )
      {
        variants.push_back( elaborate( read_netlist( f ) ) );
      }
      if ( variants.empty() )
      {
        throw invalid_value( "report needs --variants or --circuit" );
      }
      auto const costs = report_costs.empty() ? environment_costs() : read_costs( report_costs );
      std::vector<CycleStimulus> stim =
          report_stim.empty() ? all_transitions_stimulus( variants.front().inputs.size() ) : read_stimulus( report_stim, variants.front() );
      for ( auto const& v : variants )
      {
        if ( v.inputs.size() != variants.front().inputs.size() )
        {
          throw invalid_value( "variants " + variants.front().name + " and " + v.name + " differ in their inputs" );
        }
      }
      auto const rep = compare_variants( variants, stim, costs, report_cycles );
      std::cout << render_report( rep, format );
      return ok;
    }
  }
  catch ( io_error const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return io;
  }
  catch ( simulation_error const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return mismatch;
  }
  catch ( error const& e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}
