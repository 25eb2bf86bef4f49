/*!
  \file netlist.hpp
  \brief Hierarchical structural netlists and their JSON form
*/

#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "error.hpp"
#include "tlg.hpp"
#include "trit.hpp"

namespace tritforge
{

enum class CellKind
{
  NTI,
  PTI,
  STI_STD,
  STI_TLG,
  AND_TLG,
  OR_TLG,
  XOR_TLG,
  COMP1_TLG,
  CARRY_TLG,
  THA_TLG,
  THA_STD,
  HSUB_TLG,
  DLATCH,
  DFF,
  TGATE,
  BIN_INV,
  BIN_AND,
  BIN_OR,
  TLG_RAW,
  CONST
};

inline constexpr std::array<CellKind, 20> all_cell_kinds{
    CellKind::NTI,      CellKind::PTI,     CellKind::STI_STD,   CellKind::STI_TLG, CellKind::AND_TLG,
    CellKind::OR_TLG,   CellKind::XOR_TLG, CellKind::COMP1_TLG, CellKind::CARRY_TLG, CellKind::THA_TLG,
    CellKind::THA_STD,  CellKind::HSUB_TLG, CellKind::DLATCH,   CellKind::DFF,     CellKind::TGATE,
    CellKind::BIN_INV,  CellKind::BIN_AND, CellKind::BIN_OR,    CellKind::TLG_RAW, CellKind::CONST};

inline std::string_view to_string( CellKind kind )
{
  switch ( kind )
  {
  case CellKind::NTI: return "NTI";
  case CellKind::PTI: return "PTI";
  case CellKind::STI_STD: return "STI_STD";
  case CellKind::STI_TLG: return "STI_TLG";
  case CellKind::AND_TLG: return "AND_TLG";
  case CellKind::OR_TLG: return "OR_TLG";
  case CellKind::XOR_TLG: return "XOR_TLG";
  case CellKind::COMP1_TLG: return "COMP1_TLG";
  case CellKind::CARRY_TLG: return "CARRY_TLG";
  case CellKind::THA_TLG: return "THA_TLG";
  case CellKind::THA_STD: return "THA_STD";
  case CellKind::HSUB_TLG: return "HSUB_TLG";
  case CellKind::DLATCH: return "DLATCH";
  case CellKind::DFF: return "DFF";
  case CellKind::TGATE: return "TGATE";
  case CellKind::BIN_INV: return "BIN_INV";
  case CellKind::BIN_AND: return "BIN_AND";
  case CellKind::BIN_OR: return "BIN_OR";
  case CellKind::TLG_RAW: return "TLG_RAW";
  case CellKind::CONST: return "CONST";
  }
  return "?";
}

inline std::optional<CellKind> cell_kind_from_string( std::string_view name )
{
  for ( auto kind : all_cell_kinds )
  {
    if ( to_string( kind ) == name )
    {
      return kind;
    }
  }
  return std::nullopt;
}

enum class NetKind
{
  signal,
  clock,
  const0,
  const1,
  const2
};

inline std::string_view to_string( NetKind kind )
{
  switch ( kind )
  {
  case NetKind::signal: return "signal";
  case NetKind::clock: return "clock";
  case NetKind::const0: return "const0";
  case NetKind::const1: return "const1";
  case NetKind::const2: return "const2";
  }
  return "?";
}

inline NetKind net_kind_from_string( std::string_view name )
{
  for ( auto kind : {NetKind::signal, NetKind::clock, NetKind::const0, NetKind::const1, NetKind::const2} )
  {
    if ( to_string( kind ) == name )
    {
      return kind;
    }
  }
  throw invalid_value( "unknown net kind '" + std::string( name ) + "'" );
}

inline std::optional<Trit> constant_level( NetKind kind )
{
  switch ( kind )
  {
  case NetKind::const0: return Trit{0};
  case NetKind::const1: return Trit{1};
  case NetKind::const2: return Trit{2};
  default: return std::nullopt;
  }
}

enum class PortDir
{
  in,
  out
};

/* Which clock level makes a DLATCH transparent. */
enum class LatchPhase
{
  high,
  low
};

struct Port
{
  std::string name;
  PortDir dir;
};

struct Net
{
  std::string name;
  NetKind kind{NetKind::signal};
};

struct Connection
{
  std::string port;
  std::string net;
};

/* Per-instance parameters; only meaningful for TLG_RAW, DLATCH and CONST. */
struct CellParams
{
  std::optional<TlgWeights> weights;
  std::optional<LatchPhase> phase;
  std::optional<Trit> value;
};

struct Instance
{
  std::string id;
  std::string kind;
  std::vector<Connection> conns;
  CellParams params;

  [[nodiscard]] std::optional<std::string> net_of( std::string_view port ) const
  {
    for ( auto const& c : conns )
    {
      if ( c.port == port )
      {
        return c.net;
      }
    }
    return std::nullopt;
  }
};

/*! \brief A named circuit: ports, nets and cell instances.

  Ports share their names with nets.  Instances refer to cells either by a
  CellKind name or by the name of one of `modules`.
*/
class Netlist
{
public:
  Netlist() = default;
  explicit Netlist( std::string name ) : name_( std::move( name ) ) {}

  [[nodiscard]] std::string const& name() const noexcept { return name_; }
  void set_name( std::string name ) { name_ = std::move( name ); }

  [[nodiscard]] std::vector<Port> const& ports() const noexcept { return ports_; }
  [[nodiscard]] std::vector<Net> const& nets() const noexcept { return nets_; }
  [[nodiscard]] std::vector<Instance> const& instances() const noexcept { return instances_; }
  [[nodiscard]] std::vector<Netlist> const& modules() const noexcept { return modules_; }

  [[nodiscard]] Net const* find_net( std::string_view name ) const
  {
    auto it = std::find_if( nets_.begin(), nets_.end(), [&]( Net const& n ) { return n.name == name; } );
    return it == nets_.end() ? nullptr : &*it;
  }

  [[nodiscard]] Netlist const* find_module( std::string_view name ) const
  {
    auto it = std::find_if( modules_.begin(), modules_.end(), [&]( Netlist const& m ) { return m.name() == name; } );
    return it == modules_.end() ? nullptr : &*it;
  }

  std::string add_net( std::string name, NetKind kind = NetKind::signal )
  {
    if ( find_net( name ) != nullptr )
    {
      throw invalid_value( "duplicate net '" + name + "' in " + name_ );
    }
    nets_.push_back( {std::move( name ), kind} );
    return nets_.back().name;
  }

  std::string add_input( std::string name )
  {
    add_net( name );
    ports_.push_back( {name, PortDir::in} );
    return name;
  }

  std::string add_output( std::string name )
  {
    add_net( name );
    ports_.push_back( {name, PortDir::out} );
    return name;
  }

  /* The clock is an input port whose net is of kind clock. */
  std::string add_clock( std::string name = "clk" )
  {
    add_net( name, NetKind::clock );
    ports_.push_back( {name, PortDir::in} );
    return name;
  }

  /* Declares a port on an already existing net. */
  void add_port( std::string const& net, PortDir dir )
  {
    if ( find_net( net ) == nullptr )
    {
      throw invalid_value( "port '" + net + "' has no matching net" );
    }
    if ( std::any_of( ports_.begin(), ports_.end(), [&]( Port const& p ) { return p.name == net; } ) )
    {
      throw invalid_value( "duplicate port '" + net + "'" );
    }
    ports_.push_back( {net, dir} );
  }

  /* Canonical supply net for a level: const0 (ground), const1 (Vbb), const2 (Vdd). */
  std::string constant( Trit level )
  {
    std::string name = "const" + std::string( 1, level.to_char() );
    if ( find_net( name ) == nullptr )
    {
      add_net( name, level == Trit{0} ? NetKind::const0 : level == Trit{1} ? NetKind::const1 : NetKind::const2 );
    }
    return name;
  }

  /* Fresh internal net with a unique name derived from `hint`. */
  std::string fresh_net( std::string const& hint )
  {
    std::string name = hint;
    while ( find_net( name ) != nullptr )
    {
      name = hint + "_" + std::to_string( counter_++ );
    }
    return add_net( name );
  }

  Instance& add_instance( std::string id, std::string kind, std::vector<Connection> conns, CellParams params = {} )
  {
    if ( std::any_of( instances_.begin(), instances_.end(), [&]( Instance const& i ) { return i.id == id; } ) )
    {
      throw invalid_value( "duplicate instance id '" + id + "' in " + name_ );
    }
    instances_.push_back( {std::move( id ), std::move( kind ), std::move( conns ), params} );
    return instances_.back();
  }

  Instance& add_instance( std::string id, CellKind kind, std::vector<Connection> conns, CellParams params = {} )
  {
    return add_instance( std::move( id ), std::string( to_string( kind ) ), std::move( conns ), params );
  }

  void add_module( Netlist module ) { modules_.push_back( std::move( module ) ); }

  [[nodiscard]] std::vector<std::string> inputs() const { return ports_of( PortDir::in, false ); }

  /* Input ports excluding clock nets. */
  [[nodiscard]] std::vector<std::string> data_inputs() const { return ports_of( PortDir::in, true ); }

  [[nodiscard]] std::vector<std::string> outputs() const { return ports_of( PortDir::out, false ); }

  /* Checks name-level consistency: every port and connection names a declared net. */
  void validate() const
  {
    std::set<std::string> names;
    for ( auto const& n : nets_ )
    {
      if ( !names.insert( n.name ).second )
      {
        throw invalid_value( "duplicate net '" + n.name + "' in " + name_ );
      }
    }
    std::set<std::string> port_names;
    for ( auto const& p : ports_ )
    {
      if ( !names.count( p.name ) )
      {
        throw invalid_value( "port '" + p.name + "' of " + name_ + " has no net" );
      }
      if ( !port_names.insert( p.name ).second )
      {
        throw invalid_value( "duplicate port '" + p.name + "' in " + name_ );
      }
    }
    std::set<std::string> ids;
    for ( auto const& inst : instances_ )
    {
      if ( !ids.insert( inst.id ).second )
      {
        throw invalid_value( "duplicate instance id '" + inst.id + "' in " + name_ );
      }
      for ( auto const& c : inst.conns )
      {
        if ( !names.count( c.net ) )
        {
          throw invalid_value( "instance '" + inst.id + "' port '" + c.port + "' bound to unknown net '" + c.net + "'" );
        }
      }
    }
    for ( auto const& m : modules_ )
    {
      m.validate();
    }
  }

private:
  [[nodiscard]] std::vector<std::string> ports_of( PortDir dir, bool skip_clock ) const
  {
    std::vector<std::string> result;
    for ( auto const& p : ports_ )
    {
      if ( p.dir != dir )
      {
        continue;
      }
      if ( skip_clock && find_net( p.name )->kind == NetKind::clock )
      {
        continue;
      }
      result.push_back( p.name );
    }
    return result;
  }

  std::string name_;
  std::vector<Port> ports_;
  std::vector<Net> nets_;
  std::vector<Instance> instances_;
  std::vector<Netlist> modules_;
  std::size_t counter_{0};
};

/* JSON form: {name, ports, nets, instances[, modules]} with a stable field order. */
inline nlohmann::ordered_json to_json( Netlist const& netlist )
{
  using nlohmann::ordered_json;
  ordered_json j;
  j["name"] = netlist.name();
  j["ports"] = ordered_json::array();
  for ( auto const& p : netlist.ports() )
  {
    j["ports"].push_back( ordered_json{{"name", p.name}, {"dir", p.dir == PortDir::in ? "in" : "out"}} );
  }
  j["nets"] = ordered_json::array();
  for ( auto const& n : netlist.nets() )
  {
    j["nets"].push_back( ordered_json{{"name", n.name}, {"kind", to_string( n.kind )}} );
  }
  j["instances"] = ordered_json::array();
  for ( auto const& inst : netlist.instances() )
  {
    ordered_json ji;
    ji["id"] = inst.id;
    ji["kind"] = inst.kind;
    ji["conns"] = ordered_json::object();
    for ( auto const& c : inst.conns )
    {
      ji["conns"][c.port] = c.net;
    }
    ordered_json params = ordered_json::object();
    if ( inst.params.weights )
    {
      params["weights"] = inst.params.weights->values();
    }
    if ( inst.params.phase )
    {
      params["phase"] = *inst.params.phase == LatchPhase::high ? "high" : "low";
    }
    if ( inst.params.value )
    {
      params["value"] = inst.params.value->value();
    }
    if ( !params.empty() )
    {
      ji["params"] = params;
    }
    j["instances"].push_back( ji );
  }
  if ( !netlist.modules().empty() )
  {
    j["modules"] = ordered_json::array();
    for ( auto const& m : netlist.modules() )
    {
      j["modules"].push_back( to_json( m ) );
    }
  }
  return j;
}

namespace detail
{

template<class Json>
std::string required_string( Json const& j, char const* key, std::string const& where )
{
  if ( !j.contains( key ) || !j[key].is_string() )
  {
    throw io_error( where + ": missing string field '" + key + "'" );
  }
  return j[key].template get<std::string>();
}

} // namespace detail

inline Netlist netlist_from_json( nlohmann::ordered_json const& j )
{
  if ( !j.is_object() )
  {
    throw io_error( "netlist JSON must be an object" );
  }
  Netlist netlist( detail::required_string( j, "name", "netlist" ) );
  std::string const where = "netlist " + netlist.name();

  try
  {
    for ( auto const& jn : j.value( "nets", nlohmann::ordered_json::array() ) )
    {
      netlist.add_net( detail::required_string( jn, "name", where ),
                       net_kind_from_string( jn.value( "kind", std::string( "signal" ) ) ) );
    }
    for ( auto const& jp : j.value( "ports", nlohmann::ordered_json::array() ) )
    {
      auto name = detail::required_string( jp, "name", where );
      auto dir = detail::required_string( jp, "dir", where );
      if ( dir != "in" && dir != "out" )
      {
        throw io_error( where + ": port '" + name + "' has bad direction '" + dir + "'" );
      }
      netlist.add_port( name, dir == "in" ? PortDir::in : PortDir::out );
    }
    for ( auto const& ji : j.value( "instances", nlohmann::ordered_json::array() ) )
    {
      auto id = detail::required_string( ji, "id", where );
      auto kind = detail::required_string( ji, "kind", where );
      std::vector<Connection> conns;
      if ( ji.contains( "conns" ) )
      {
        if ( !ji["conns"].is_object() )
        {
          throw io_error( where + ": instance '" + id + "' conns must be an object" );
        }
        for ( auto const& [port, net] : ji["conns"].items() )
        {
          if ( !net.is_string() )
          {
            throw io_error( where + ": instance '" + id + "' port '" + port + "' must name a net" );
          }
          conns.push_back( {port, net.template get<std::string>()} );
        }
      }
      CellParams params;
      if ( ji.contains( "params" ) )
      {
        auto const& jp = ji["params"];
        if ( jp.contains( "weights" ) )
        {
          auto w = jp["weights"].template get<std::vector<std::uint32_t>>();
          if ( w.size() != 4u )
          {
            throw io_error( where + ": instance '" + id + "' needs exactly four TLG weights" );
          }
          params.weights = TlgWeights( w[0], w[1], w[2], w[3] );
        }
        if ( jp.contains( "phase" ) )
        {
          auto phase = jp["phase"].template get<std::string>();
          if ( phase != "high" && phase != "low" )
          {
            throw io_error( where + ": instance '" + id + "' has bad latch phase '" + phase + "'" );
          }
          params.phase = phase == "high" ? LatchPhase::high : LatchPhase::low;
        }
        if ( jp.contains( "value" ) )
        {
          params.value = Trit( jp["value"].template get<int>() );
        }
      }
      netlist.add_instance( std::move( id ), std::move( kind ), std::move( conns ), params );
    }
    for ( auto const& jm : j.value( "modules", nlohmann::ordered_json::array() ) )
    {
      netlist.add_module( netlist_from_json( jm ) );
    }
    netlist.validate();
  }
  catch ( invalid_value const& e )
  {
    throw io_error( where + ": " + e.what() );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw io_error( where + ": " + e.what() );
  }
  return netlist;
}

inline Netlist read_netlist( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw io_error( "cannot open netlist file '" + path + "'" );
  }
  nlohmann::ordered_json j;
  try
  {
    in >> j;
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw io_error( "cannot parse '" + path + "': " + e.what() );
  }
  return netlist_from_json( j );
}

inline void write_netlist( Netlist const& netlist, std::string const& path )
{
  std::ofstream out( path );
  if ( !out )
  {
    throw io_error( "cannot write netlist file '" + path + "'" );
  }
  out << to_json( netlist ).dump( 2 ) << '\n';
}

} // namespace tritforge
