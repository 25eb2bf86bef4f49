/*!
  \file trace_io.hpp
  \brief Stimulus CSV input, trace CSV and VCD output

  Stimulus CSV: a header naming every data input (any order), optionally a
  `phase` column.  Without it every row is one clock cycle.  With it, a
  `high` row starts a cycle and a following `low` row changes the inputs
  after that cycle's falling edge.  Blank lines and `#` comments are skipped.
*/

#pragma once

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "sim.hpp"

namespace tritforge
{

namespace detail
{

inline std::vector<std::string> split_csv( std::string const& line )
{
  std::vector<std::string> fields;
  std::stringstream ss( line );
  std::string f;
  while ( std::getline( ss, f, ',' ) )
  {
    auto const b = f.find_first_not_of( " \t\r" );
    fields.push_back( b == std::string::npos ? std::string{} : f.substr( b, f.find_last_not_of( " \t\r" ) - b + 1u ) );
  }
  if ( !line.empty() && line.back() == ',' )
  {
    fields.emplace_back();
  }
  return fields;
}

} // namespace detail

inline std::vector<CycleStimulus> parse_stimulus( std::istream& in, FlatNetlist const& flat )
{
  std::vector<CycleStimulus> stim;
  std::string line;
  std::vector<std::size_t> column_of_input( flat.inputs.size(), no_index );
  std::size_t phase_column = no_index;
  std::size_t columns = 0;
  bool header = false;
  std::size_t lineno = 0;
  while ( std::getline( in, line ) )
  {
    ++lineno;
    if ( auto hash = line.find( '#' ); hash != std::string::npos )
    {
      line.resize( hash );
    }
    if ( line.find_first_not_of( " \t\r" ) == std::string::npos )
    {
      continue;
    }
    auto const fields = detail::split_csv( line );
    auto const where = "stimulus line " + std::to_string( lineno );
    if ( !header )
    {
      header = true;
      columns = fields.size();
      for ( std::size_t c = 0; c < fields.size(); ++c )
      {
        if ( fields[c] == "phase" )
        {
          phase_column = c;
          continue;
        }
        bool found = false;
        for ( std::size_t k = 0; k < flat.inputs.size(); ++k )
        {
          if ( flat.inputs[k].name == fields[c] )
          {
            if ( column_of_input[k] != no_index )
            {
              throw invalid_value( where + ": duplicate column '" + fields[c] + "'" );
            }
            column_of_input[k] = c;
            found = true;
          }
        }
        if ( !found )
        {
          throw invalid_value( where + ": '" + fields[c] + "' is not a data input of " + flat.name );
        }
      }
      for ( std::size_t k = 0; k < flat.inputs.size(); ++k )
      {
        if ( column_of_input[k] == no_index )
        {
          throw invalid_value( where + ": missing column for input '" + flat.inputs[k].name + "'" );
        }
      }
      continue;
    }
    if ( fields.size() != columns )
    {
      throw invalid_value( where + ": expected " + std::to_string( columns ) + " fields, got " + std::to_string( fields.size() ) );
    }
    std::vector<Trit> values;
    for ( auto c : column_of_input )
    {
      if ( fields[c].size() != 1u )
      {
        throw invalid_value( where + ": '" + fields[c] + "' is not a trit" );
      }
      values.push_back( Trit::from_char( fields[c][0] ) );
    }
    bool low = false;
    if ( phase_column != no_index )
    {
      auto const& p = fields[phase_column];
      if ( p != "high" && p != "low" )
      {
        throw invalid_value( where + ": phase must be 'high' or 'low'" );
      }
      low = p == "low";
    }
    if ( low )
    {
      if ( stim.empty() || stim.back().low )
      {
        throw invalid_value( where + ": a 'low' row must follow a 'high' row" );
      }
      stim.back().low = std::move( values );
    }
    else
    {
      stim.push_back( {std::move( values ), std::nullopt} );
    }
  }
  if ( !header )
  {
    throw invalid_value( "stimulus has no header" );
  }
  return stim;
}

inline std::vector<CycleStimulus> read_stimulus( std::string const& path, FlatNetlist const& flat )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw io_error( "cannot open stimulus '" + path + "'" );
  }
  try
  {
    return parse_stimulus( in, flat );
  }
  catch ( invalid_value const& e )
  {
    throw io_error( path + ": " + e.what() );
  }
}

/* cycle,phase,net,value with Z for undriven samples */
inline void write_trace_csv( std::ostream& os, Trace const& trace )
{
  os << "cycle,phase,net,value\n";
  for ( auto const& s : trace.samples )
  {
    for ( std::size_t n = 0; n < trace.nets.size(); ++n )
    {
      os << s.cycle << ',' << to_string( s.phase ) << ',' << trace.nets[n] << ',' << to_char( s.values[n] ) << '\n';
    }
  }
}

namespace detail
{

inline std::string vcd_identifier( std::size_t i )
{
  std::string id;
  do
  {
    id.push_back( char( 33 + i % 94u ) );
    i /= 94u;
  } while ( i != 0u );
  return id;
}

inline char const* vcd_bits( TraceValue v )
{
  if ( !v )
  {
    return "zz";
  }
  switch ( v->value() )
  {
  case 0: return "00";
  case 1: return "01";
  default: return "10";
  }
}

} // namespace detail

/*! \brief VCD dump; every trit is a 2-bit vector (00, 01, 10, zz for Z).

  Time 2k is the clock-high phase of cycle k, 2k + 1 its clock-low phase.
*/
inline void write_vcd( std::ostream& os, Trace const& trace, std::string const& module = "top" )
{
  os << "$timescale 1ns $end\n";
  os << "$scope module " << module << " $end\n";
  auto const clk_id = detail::vcd_identifier( trace.nets.size() );
  os << "$var wire 1 " << clk_id << " clock_phase $end\n";
  for ( std::size_t n = 0; n < trace.nets.size(); ++n )
  {
    auto name = trace.nets[n];
    for ( auto& ch : name )
    {
      if ( ch == '$' || ch == ' ' )
      {
        ch = '_';
      }
    }
    os << "$var wire 2 " << detail::vcd_identifier( n ) << ' ' << name << " $end\n";
  }
  os << "$upscope $end\n$enddefinitions $end\n";
  std::vector<std::optional<TraceValue>> last( trace.nets.size() );
  for ( auto const& s : trace.samples )
  {
    bool const high = s.phase == Phase::high;
    os << '#' << ( 2u * s.cycle + ( high ? 0u : 1u ) ) << '\n';
    os << ( high ? '1' : '0' ) << clk_id << '\n';
    for ( std::size_t n = 0; n < trace.nets.size(); ++n )
    {
      if ( !last[n] || *last[n] != s.values[n] )
      {
        os << 'b' << detail::vcd_bits( s.values[n] ) << ' ' << detail::vcd_identifier( n ) << '\n';
        last[n] = s.values[n];
      }
    }
  }
}

} // namespace tritforge
