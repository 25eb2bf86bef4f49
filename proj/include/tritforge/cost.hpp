/*!
  \file cost.hpp
  \brief Abstract cost accounting: device count, critical path, toggle energy, leakage

  Costs are attached to primitive cell kinds; composite cells are costed
  through their elaborated structure.  Cost files come in two spellings:

    # TOML subset
    provenance = "..."
    [NTI]
    devices = 2
    delay = 1
    toggle_energy = 1
    leakage = 0.5

    {"provenance": "...", "cells": {"NTI": {"devices": 2, "delay": 1, ...}}}
*/

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "error.hpp"
#include "netlist.hpp"
#include "sim.hpp"

namespace tritforge
{

struct CellCost
{
  std::uint64_t devices{0};
  double delay{0.0};
  double toggle_energy{0.0};
  double leakage{0.0};

  friend bool operator==( CellCost const&, CellCost const& ) = default;
};

class CostModel
{
public:
  CostModel() = default;

  void set( CellKind kind, CellCost const& cost )
  {
    for ( double v : {cost.delay, cost.toggle_energy, cost.leakage} )
    {
      if ( !( v >= 0.0 ) || !std::isfinite( v ) )
      {
        throw invalid_value( "cost values of " + std::string( to_string( kind ) ) + " must be finite and non-negative" );
      }
    }
    costs_[kind] = cost;
  }

  [[nodiscard]] bool has( CellKind kind ) const { return costs_.count( kind ) != 0u; }

  [[nodiscard]] CellCost const& get( CellKind kind ) const
  {
    auto it = costs_.find( kind );
    if ( it == costs_.end() )
    {
      throw invalid_value( "cost model has no entry for cell kind " + std::string( to_string( kind ) ) );
    }
    return it->second;
  }

  [[nodiscard]] std::map<CellKind, CellCost> const& entries() const noexcept { return costs_; }

  std::string provenance;

  /* multiplies every non-device field; devices are counts and stay put */
  [[nodiscard]] CostModel scaled( double delay, double toggle_energy, double leakage ) const
  {
    CostModel r = *this;
    for ( auto& [kind, c] : r.costs_ )
    {
      c.delay *= delay;
      c.toggle_energy *= toggle_energy;
      c.leakage *= leakage;
    }
    return r;
  }

private:
  std::map<CellKind, CellCost> costs_;
};

inline constexpr char const* default_costs_toml = R"(# Default primitive costs.
provenance = "device counts from the reference transistor schematics, relative delay and energy units"

[NTI]
devices = 2
delay = 1
toggle_energy = 1
leakage = 0.2

[PTI]
devices = 2
delay = 1
toggle_energy = 1
leakage = 0.2

[STI_STD]
devices = 6
delay = 1.5
toggle_energy = 2
leakage = 0.6

[BIN_INV]
devices = 2
delay = 1
toggle_energy = 1
leakage = 0.2

[BIN_AND]
devices = 6
delay = 2
toggle_energy = 2
leakage = 0.6

[BIN_OR]
devices = 6
delay = 2
toggle_energy = 2
leakage = 0.6

[TGATE]
devices = 2
delay = 0.5
toggle_energy = 0.5
leakage = 0.1

[CONST]
devices = 0
delay = 0
toggle_energy = 0
leakage = 0

[DLATCH]
devices = 16
delay = 2.5
toggle_energy = 4
leakage = 1.6

[TLG_RAW]
devices = 58
delay = 3
toggle_energy = 6
leakage = 2
)";

namespace detail
{

inline CellKind cost_kind( std::string const& name )
{
  auto kind = cell_kind_from_string( name );
  if ( !kind )
  {
    throw invalid_value( "unknown cell kind '" + name + "' in cost file" );
  }
  return *kind;
}

inline void set_cost_field( CellCost& c, std::string const& key, double v, std::string const& where )
{
  if ( key == "devices" )
  {
    if ( v < 0.0 || v != std::floor( v ) )
    {
      throw invalid_value( where + ": devices must be a non-negative integer" );
    }
    c.devices = static_cast<std::uint64_t>( v );
  }
  else if ( key == "delay" )
  {
    c.delay = v;
  }
  else if ( key == "toggle_energy" )
  {
    c.toggle_energy = v;
  }
  else if ( key == "leakage" )
  {
    c.leakage = v;
  }
  else
  {
    throw invalid_value( where + ": unknown cost field '" + key + "'" );
  }
}

inline std::string trim( std::string s )
{
  auto const b = s.find_first_not_of( " \t\r" );
  if ( b == std::string::npos )
  {
    return {};
  }
  return s.substr( b, s.find_last_not_of( " \t\r" ) - b + 1u );
}

} // namespace detail

inline CostModel parse_costs_toml( std::string const& text )
{
  CostModel model;
  std::istringstream in( text );
  std::string line;
  std::optional<CellKind> section;
  std::map<CellKind, CellCost> pending;
  std::size_t lineno = 0;
  while ( std::getline( in, line ) )
  {
    ++lineno;
    auto const where = "cost file line " + std::to_string( lineno );
    bool quoted = false;
    for ( std::size_t i = 0; i < line.size(); ++i )
    {
      quoted ^= line[i] == '"';
      if ( line[i] == '#' && !quoted )
      {
        line.resize( i );
        break;
      }
    }
    line = detail::trim( line );
    if ( line.empty() )
    {
      continue;
    }
    if ( line.front() == '[' )
    {
      if ( line.back() != ']' )
      {
        throw invalid_value( where + ": malformed section header" );
      }
      section = detail::cost_kind( detail::trim( line.substr( 1u, line.size() - 2u ) ) );
      if ( pending.count( *section ) )
      {
        throw invalid_value( where + ": duplicate section " + std::string( to_string( *section ) ) );
      }
      pending[*section];
      continue;
    }
    auto const eq = line.find( '=' );
    if ( eq == std::string::npos )
    {
      throw invalid_value( where + ": expected key = value" );
    }
    auto const key = detail::trim( line.substr( 0u, eq ) );
    auto const value = detail::trim( line.substr( eq + 1u ) );
    if ( !section )
    {
      if ( key != "provenance" || value.size() < 2u || value.front() != '"' || value.back() != '"' )
      {
        throw invalid_value( where + ": only a quoted 'provenance' may precede the first section" );
      }
      model.provenance = value.substr( 1u, value.size() - 2u );
      continue;
    }
    char* end = nullptr;
    double const v = std::strtod( value.c_str(), &end );
    if ( value.empty() || end != value.c_str() + value.size() )
    {
      throw invalid_value( where + ": '" + value + "' is not a number" );
    }
    detail::set_cost_field( pending[*section], key, v, where );
  }
  for ( auto const& [kind, c] : pending )
  {
    model.set( kind, c );
  }
  return model;
}

inline CostModel parse_costs_json( std::string const& text )
{
  CostModel model;
  try
  {
    auto const j = nlohmann::json::parse( text );
    if ( j.contains( "provenance" ) )
    {
      model.provenance = j.at( "provenance" ).get<std::string>();
    }
    for ( auto const& [name, fields] : j.at( "cells" ).items() )
    {
      CellCost c;
      for ( auto const& [key, v] : fields.items() )
      {
        detail::set_cost_field( c, key, v.get<double>(), "cost entry " + name );
      }
      model.set( detail::cost_kind( name ), c );
    }
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw invalid_value( std::string( "malformed JSON cost file: " ) + e.what() );
  }
  return model;
}

/* JSON when the first non-blank character is '{', TOML subset otherwise */
inline CostModel parse_costs( std::string const& text )
{
  auto const first = text.find_first_not_of( " \t\r\n" );
  return first != std::string::npos && text[first] == '{' ? parse_costs_json( text ) : parse_costs_toml( text );
}

inline CostModel read_costs( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw io_error( "cannot open cost file '" + path + "'" );
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try
  {
    return parse_costs( ss.str() );
  }
  catch ( invalid_value const& e )
  {
    throw io_error( path + ": " + e.what() );
  }
}

inline CostModel default_costs()
{
  return parse_costs_toml( default_costs_toml );
}

/* TRITFORGE_COSTS if set, built-in defaults otherwise */
inline CostModel environment_costs()
{
  if ( char const* path = std::getenv( "TRITFORGE_COSTS" ); path && *path )
  {
    return read_costs( path );
  }
  return default_costs();
}

inline std::uint64_t transistor_count( FlatNetlist const& flat, CostModel const& costs )
{
  std::uint64_t n = 0;
  for ( auto const& c : flat.cells )
  {
    n += costs.get( c.kind ).devices;
  }
  return n;
}

/* Composite instances are counted by their primitives. */
inline std::uint64_t transistor_count( Netlist const& netlist, CostModel const& costs )
{
  return transistor_count( elaborate( netlist ), costs );
}

inline double leakage_sum( FlatNetlist const& flat, CostModel const& costs )
{
  double s = 0.0;
  for ( auto const& c : flat.cells )
  {
    s += costs.get( c.kind ).leakage;
  }
  return s;
}

inline bool is_sequential( CellKind kind )
{
  return kind == CellKind::TLG_RAW || kind == CellKind::DLATCH;
}

/*! \brief Longest register-to-register path.

  Paths start at primary inputs (arrival 0) or at sequential cells, which
  launch with their own delay, run through combinational cells, and end at
  sequential cell inputs or primary outputs.
*/
inline double critical_path( FlatNetlist const& flat, CostModel const& costs )
{
  std::size_t const n = flat.cells.size();
  std::vector<std::vector<std::size_t>> succ( n );
  std::vector<std::size_t> indegree( n, 0u );
  for ( std::size_t c = 0; c < n; ++c )
  {
    static_cast<void>( costs.get( flat.cells[c].kind ) );
    for ( auto net : flat.cells[c].outputs )
    {
      for ( auto r : flat.nets[net].readers )
      {
        if ( !is_sequential( flat.cells[r].kind ) )
        {
          succ[c].push_back( r );
          ++indegree[r];
        }
      }
    }
  }
  std::vector<double> arrival( n, 0.0 ); /* at the cell output */
  std::queue<std::size_t> ready;
  for ( std::size_t c = 0; c < n; ++c )
  {
    if ( indegree[c] == 0u )
    {
      ready.push( c );
    }
  }
  std::vector<double> input_arrival( n, 0.0 );
  std::size_t visited = 0;
  double longest = 0.0;
  while ( !ready.empty() )
  {
    auto const c = ready.front();
    ready.pop();
    ++visited;
    arrival[c] = input_arrival[c] + costs.get( flat.cells[c].kind ).delay;
    longest = std::max( longest, arrival[c] );
    for ( auto s : succ[c] )
    {
      input_arrival[s] = std::max( input_arrival[s], arrival[c] );
      if ( --indegree[s] == 0u )
      {
        ready.push( s );
      }
    }
  }
  if ( visited != n )
  {
    throw elaboration_error( "critical path needs an acyclic combinational graph in " + flat.name );
  }
  return longest;
}

/* Stimulus that walks every ordered pair of trits once on each input: 0,0,1,0,2,1,1,2,2,0 rotated per input. */
inline std::vector<CycleStimulus> all_transitions_stimulus( std::size_t inputs )
{
  static constexpr std::array<int, 10> walk{0, 0, 1, 0, 2, 1, 1, 2, 2, 0};
  std::vector<CycleStimulus> stim( walk.size() );
  for ( std::size_t k = 0; k < walk.size(); ++k )
  {
    for ( std::size_t i = 0; i < inputs; ++i )
    {
      stim[k].high.push_back( Trit( walk[( k + i ) % ( walk.size() - 1u )] ) );
    }
  }
  return stim;
}

/* Transitions between consecutive settled samples, charged at the highest toggle energy among the net's drivers. */
inline double toggle_energy( FlatNetlist const& flat, Trace const& trace, CostModel const& costs )
{
  double e = 0.0;
  for ( std::size_t n = 0; n < flat.nets.size(); ++n )
  {
    double per = 0.0;
    for ( auto d : flat.nets[n].drivers )
    {
      per = std::max( per, costs.get( flat.cells[d].kind ).toggle_energy );
    }
    if ( per == 0.0 )
    {
      continue;
    }
    std::optional<Trit> last;
    std::size_t toggles = 0;
    for ( auto const& s : trace.samples )
    {
      auto const v = s.values[n];
      if ( v && last && *v != *last )
      {
        ++toggles;
      }
      if ( v )
      {
        last = v;
      }
    }
    e += double( toggles ) * per;
  }
  return e;
}

struct ReportRow
{
  std::string variant;
  std::uint64_t device_count{0};
  double critical_path{0.0};
  double toggle_energy{0.0};
  double leakage{0.0};
  double edp{0.0};
  std::size_t cycles{0};

  friend bool operator==( ReportRow const&, ReportRow const& ) = default;
};

struct ComparisonReport
{
  std::vector<ReportRow> rows;
  std::string provenance;
};

inline ReportRow measure( FlatNetlist const& flat, std::span<CycleStimulus const> stimulus, CostModel const& costs,
                          std::size_t cycles = 0 )
{
  ReportRow row;
  row.variant = flat.name;
  row.device_count = transistor_count( flat, costs );
  row.critical_path = critical_path( flat, costs );
  row.leakage = leakage_sum( flat, costs );
  row.cycles = cycles ? cycles : stimulus.size();
  auto const trace = simulate( flat, stimulus, row.cycles );
  row.toggle_energy = toggle_energy( flat, trace, costs );
  row.edp = row.toggle_energy * row.critical_path;
  return row;
}

inline ComparisonReport compare_variants( std::span<FlatNetlist const> variants, std::span<CycleStimulus const> stimulus,
                                          CostModel const& costs, std::size_t cycles = 0 )
{
  ComparisonReport report;
  report.provenance = costs.provenance;
  for ( auto const& v : variants )
  {
    report.rows.push_back( measure( v, stimulus, costs, cycles ) );
  }
  return report;
}

enum class ReportFormat
{
  text,
  md,
  csv,
  json
};

inline ReportFormat report_format_from_string( std::string_view s )
{
  if ( s == "text" )
  {
    return ReportFormat::text;
  }
  if ( s == "md" )
  {
    return ReportFormat::md;
  }
  if ( s == "csv" )
  {
    return ReportFormat::csv;
  }
  if ( s == "json" )
  {
    return ReportFormat::json;
  }
  throw invalid_value( "unknown format '" + std::string( s ) + "' (text, md, csv, json)" );
}

inline std::string format_number( double v )
{
  char buf[32];
  std::snprintf( buf, sizeof buf, "%.6g", v );
  return buf;
}

inline std::string render_report( ComparisonReport const& report, ReportFormat format )
{
  std::vector<std::string> const header{"variant", "devices", "critical_path", "toggle_energy", "leakage", "edp"};
  std::vector<std::vector<std::string>> cells;
  for ( auto const& r : report.rows )
  {
    cells.push_back( {r.variant, std::to_string( r.device_count ), format_number( r.critical_path ),
                      format_number( r.toggle_energy ), format_number( r.leakage ), format_number( r.edp )} );
  }
  std::ostringstream os;
  switch ( format )
  {
  case ReportFormat::json:
  {
    nlohmann::ordered_json j;
    j["provenance"] = report.provenance;
    j["rows"] = nlohmann::ordered_json::array();
    for ( auto const& r : report.rows )
    {
      j["rows"].push_back( {{"variant", r.variant},
                            {"devices", r.device_count},
                            {"critical_path", r.critical_path},
                            {"toggle_energy", r.toggle_energy},
                            {"leakage", r.leakage},
                            {"edp", r.edp},
                            {"cycles", r.cycles}} );
    }
    os << j.dump( 2 ) << '\n';
    break;
  }
  case ReportFormat::csv:
    cells.insert( cells.begin(), header );
    for ( auto const& row : cells )
    {
      for ( std::size_t i = 0; i < row.size(); ++i )
      {
        os << ( i ? "," : "" ) << row[i];
      }
      os << '\n';
    }
    break;
  case ReportFormat::md:
  case ReportFormat::text:
  {
    std::vector<std::size_t> width( header.size() );
    for ( std::size_t i = 0; i < header.size(); ++i )
    {
      width[i] = header[i].size();
      for ( auto const& row : cells )
      {
        width[i] = std::max( width[i], row[i].size() );
      }
    }
    bool const md = format == ReportFormat::md;
    auto line = [&]( std::vector<std::string> const& row ) {
      std::string s = md ? "|" : "";
      for ( std::size_t i = 0; i < row.size(); ++i )
      {
        auto cell = row[i];
        auto const pad = std::string( width[i] - cell.size(), ' ' );
        cell = i == 0u ? cell + pad : pad + cell;
        s += md ? " " + cell + " |" : ( i ? "  " : "" ) + cell;
      }
      os << s << '\n';
    };
    line( header );
    if ( md )
    {
      std::string s = "|";
      for ( std::size_t i = 0; i < header.size(); ++i )
      {
        s += i == 0u ? " " + std::string( width[i], '-' ) + " |" : " " + std::string( width[i] - 1u, '-' ) + ": |";
      }
      os << s << '\n';
    }
    else
    {
      std::size_t total = 0;
      for ( auto w : width )
      {
        total += w;
      }
      os << std::string( total + 2u * ( width.size() - 1u ), '-' ) << '\n';
    }
    for ( auto const& row : cells )
    {
      line( row );
    }
    if ( !md && !report.provenance.empty() )
    {
      os << "costs: " << report.provenance << '\n';
    }
    break;
  }
  }
  return os.str();
}

} // namespace tritforge
