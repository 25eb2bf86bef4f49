/*!
  \file synth.hpp
  \brief Two-level synthesis of ternary functions into three pull networks

  Every input variable is decoded into one-hot indicators built from NTI,
  PTI and binary gates.  For each output level v a pull network connects
  the output to the matching supply (ground, Vbb, Vdd) whenever one of its
  product terms holds.  A term is a conjunction of multi-valued literals
  "x in S"; S = {0}, {0,1}, {2}, ... map onto x^-, x^+, (x^+)~ and friends.
*/

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "netlist.hpp"
#include "trit.hpp"

namespace tritforge
{

inline constexpr unsigned max_truth_table_arity = 10u;

[[nodiscard]] constexpr std::size_t pow3( unsigned n ) noexcept
{
  std::size_t r = 1u;
  for ( unsigned i = 0; i < n; ++i )
  {
    r *= 3u;
  }
  return r;
}

/* Input tuple of a row index; the first variable is the most significant digit. */
inline std::vector<Trit> input_tuple( std::size_t index, unsigned arity )
{
  std::vector<Trit> tuple( arity );
  for ( unsigned k = arity; k-- > 0; )
  {
    tuple[k] = Trit( static_cast<int>( index % 3u ) );
    index /= 3u;
  }
  return tuple;
}

inline std::size_t tuple_index( std::span<Trit const> tuple )
{
  std::size_t index = 0;
  for ( auto t : tuple )
  {
    index = index * 3u + t.value();
  }
  return index;
}

class TernaryTruthTable
{
public:
  TernaryTruthTable( unsigned arity, std::vector<Trit> outputs ) : arity_( arity ), outputs_( std::move( outputs ) )
  {
    if ( arity == 0u || arity > max_truth_table_arity )
    {
      throw invalid_value( "truth table arity must be in 1.." + std::to_string( max_truth_table_arity ) );
    }
    if ( outputs_.size() != pow3( arity ) )
    {
      throw invalid_value( "truth table of arity " + std::to_string( arity ) + " needs " +
                           std::to_string( pow3( arity ) ) + " entries, got " + std::to_string( outputs_.size() ) );
    }
  }

  template<class Fn>
  static TernaryTruthTable from_function( unsigned arity, Fn&& fn )
  {
    std::vector<Trit> outputs( pow3( arity ) );
    for ( std::size_t i = 0; i < outputs.size(); ++i )
    {
      auto const tuple = input_tuple( i, arity );
      outputs[i] = fn( std::span<Trit const>( tuple ) );
    }
    return TernaryTruthTable( arity, std::move( outputs ) );
  }

  [[nodiscard]] unsigned arity() const noexcept { return arity_; }
  [[nodiscard]] std::size_t size() const noexcept { return outputs_.size(); }
  [[nodiscard]] Trit at( std::size_t index ) const { return outputs_.at( index ); }
  [[nodiscard]] Trit operator()( std::span<Trit const> inputs ) const { return outputs_.at( tuple_index( inputs ) ); }
  [[nodiscard]] std::vector<Trit> const& outputs() const noexcept { return outputs_; }

  friend bool operator==( TernaryTruthTable const&, TernaryTruthTable const& ) = default;

private:
  unsigned arity_;
  std::vector<Trit> outputs_;
};

/*! \brief Reads the text format: `arity n`, then 3^n lines `<digits> <output>`.

  Digits list the inputs first-variable-first.  Blank lines and `#` comments
  are ignored; rows may appear in any order but each exactly once.
*/
inline TernaryTruthTable parse_truth_table( std::istream& in )
{
  std::optional<unsigned> arity;
  std::vector<std::optional<Trit>> rows;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&]( std::string const& msg ) -> void {
    throw io_error( "truth table line " + std::to_string( lineno ) + ": " + msg );
  };
  while ( std::getline( in, line ) )
  {
    ++lineno;
    if ( auto hash = line.find( '#' ); hash != std::string::npos )
    {
      line.erase( hash );
    }
    std::istringstream ls( line );
    std::string first;
    if ( !( ls >> first ) )
    {
      continue;
    }
    if ( !arity )
    {
      unsigned n = 0;
      if ( first != "arity" || !( ls >> n ) )
      {
        fail( "expected header 'arity <n>'" );
      }
      if ( n == 0u || n > max_truth_table_arity )
      {
        fail( "arity out of range" );
      }
      arity = n;
      rows.assign( pow3( n ), std::nullopt );
      continue;
    }
    std::string out;
    if ( !( ls >> out ) || out.size() != 1u )
    {
      fail( "expected '<digits> <output>'" );
    }
    if ( first.size() != *arity )
    {
      fail( "row has " + std::to_string( first.size() ) + " digits, arity is " + std::to_string( *arity ) );
    }
    try
    {
      std::vector<Trit> tuple;
      for ( char c : first )
      {
        tuple.push_back( Trit::from_char( c ) );
      }
      auto& slot = rows[tuple_index( tuple )];
      if ( slot )
      {
        fail( "duplicate row " + first );
      }
      slot = Trit::from_char( out[0] );
    }
    catch ( invalid_value const& e )
    {
      fail( e.what() );
    }
  }
  if ( !arity )
  {
    throw io_error( "truth table is empty" );
  }
  std::vector<Trit> outputs;
  for ( std::size_t i = 0; i < rows.size(); ++i )
  {
    if ( !rows[i] )
    {
      auto tuple = input_tuple( i, *arity );
      std::string digits;
      for ( auto t : tuple )
      {
        digits += t.to_char();
      }
      throw io_error( "truth table is missing row " + digits );
    }
    outputs.push_back( *rows[i] );
  }
  return TernaryTruthTable( *arity, std::move( outputs ) );
}

inline TernaryTruthTable read_truth_table( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw io_error( "cannot open truth table '" + path + "'" );
  }
  return parse_truth_table( in );
}

inline std::string format_truth_table( TernaryTruthTable const& tt )
{
  std::ostringstream os;
  os << "arity " << tt.arity() << '\n';
  for ( std::size_t i = 0; i < tt.size(); ++i )
  {
    for ( auto t : input_tuple( i, tt.arity() ) )
    {
      os << t;
    }
    os << ' ' << tt.at( i ) << '\n';
  }
  return os.str();
}

/* Set of admissible levels of one variable, bit v set <=> level v allowed. */
using LevelMask = std::uint8_t;
inline constexpr LevelMask any_level = 0b111;

[[nodiscard]] constexpr LevelMask level_bit( Trit v ) noexcept
{
  return static_cast<LevelMask>( 1u << v.value() );
}

/* A product term: one literal mask per variable; `any_level` means the variable is absent. */
class Cube
{
public:
  explicit Cube( unsigned arity ) : masks_( arity, any_level ) {}

  static Cube minterm( std::span<Trit const> tuple )
  {
    Cube c( static_cast<unsigned>( tuple.size() ) );
    for ( std::size_t i = 0; i < tuple.size(); ++i )
    {
      c.masks_[i] = level_bit( tuple[i] );
    }
    return c;
  }

  [[nodiscard]] unsigned arity() const noexcept { return static_cast<unsigned>( masks_.size() ); }
  [[nodiscard]] LevelMask mask( unsigned var ) const { return masks_.at( var ); }
  void set_mask( unsigned var, LevelMask m )
  {
    if ( m == 0u || m > any_level )
    {
      throw invalid_value( "literal mask must be a non-empty subset of {0,1,2}" );
    }
    masks_.at( var ) = m;
  }

  [[nodiscard]] bool contains( std::span<Trit const> tuple ) const
  {
    for ( std::size_t i = 0; i < masks_.size(); ++i )
    {
      if ( ( masks_[i] & level_bit( tuple[i] ) ) == 0u )
      {
        return false;
      }
    }
    return true;
  }

  /* single-cube containment */
  [[nodiscard]] bool covers( Cube const& other ) const
  {
    for ( std::size_t i = 0; i < masks_.size(); ++i )
    {
      if ( ( other.masks_[i] & ~masks_[i] ) != 0u )
      {
        return false;
      }
    }
    return true;
  }

  [[nodiscard]] std::size_t literal_count() const
  {
    return static_cast<std::size_t>( std::count_if( masks_.begin(), masks_.end(), []( LevelMask m ) { return m != any_level; } ) );
  }

  template<class Fn>
  void for_each_minterm( Fn&& fn ) const
  {
    std::vector<Trit> tuple( masks_.size() );
    enumerate( 0u, tuple, fn );
  }

  friend bool operator==( Cube const&, Cube const& ) = default;
  friend auto operator<=>( Cube const&, Cube const& ) = default;

private:
  template<class Fn>
  void enumerate( std::size_t var, std::vector<Trit>& tuple, Fn& fn ) const
  {
    if ( var == masks_.size() )
    {
      fn( std::span<Trit const>( tuple ) );
      return;
    }
    for ( auto v : all_trits )
    {
      if ( masks_[var] & level_bit( v ) )
      {
        tuple[var] = v;
        enumerate( var + 1u, tuple, fn );
      }
    }
  }

  std::vector<LevelMask> masks_;
};

/* Network pulling the output to `level` (0 -> ground, 1 -> Vbb, 2 -> Vdd). */
struct PullNetwork
{
  Trit level;
  std::vector<Cube> terms;

  [[nodiscard]] bool active( std::span<Trit const> tuple ) const
  {
    return std::any_of( terms.begin(), terms.end(), [&]( Cube const& c ) { return c.contains( tuple ); } );
  }

  [[nodiscard]] std::size_t literal_count() const
  {
    std::size_t n = 0;
    for ( auto const& c : terms )
    {
      n += c.literal_count();
    }
    return n;
  }
};

using PullNetworks = std::array<PullNetwork, 3>;

/* One minterm per row, grouped by output level. */
inline PullNetworks minterm_networks( TernaryTruthTable const& tt )
{
  PullNetworks nets{PullNetwork{Trit{0}, {}}, PullNetwork{Trit{1}, {}}, PullNetwork{Trit{2}, {}}};
  for ( std::size_t i = 0; i < tt.size(); ++i )
  {
    auto const tuple = input_tuple( i, tt.arity() );
    nets[tt.at( i ).value()].terms.push_back( Cube::minterm( tuple ) );
  }
  return nets;
}

namespace detail
{

inline bool cube_inside( Cube const& cube, std::vector<bool> const& on_set )
{
  bool inside = true;
  cube.for_each_minterm( [&]( std::span<Trit const> t ) {
    if ( inside && !on_set[tuple_index( t )] )
    {
      inside = false;
    }
  } );
  return inside;
}

inline PullNetwork simplify_network( PullNetwork const& net, unsigned arity )
{
  std::vector<bool> on_set( pow3( arity ), false );
  for ( auto const& c : net.terms )
  {
    c.for_each_minterm( [&]( std::span<Trit const> t ) { on_set[tuple_index( t )] = true; } );
  }

  // expand every literal as far as the network's own activation set allows
  std::vector<Cube> expanded;
  for ( auto cube : net.terms )
  {
    if ( std::any_of( expanded.begin(), expanded.end(), [&]( Cube const& e ) { return e.covers( cube ); } ) )
    {
      continue;
    }
    for ( unsigned var = 0; var < arity; ++var )
    {
      for ( auto v : all_trits )
      {
        LevelMask const m = cube.mask( var );
        if ( m & level_bit( v ) )
        {
          continue;
        }
        Cube trial = cube;
        trial.set_mask( var, static_cast<LevelMask>( m | level_bit( v ) ) );
        if ( cube_inside( trial, on_set ) )
        {
          cube = trial;
        }
      }
    }
    expanded.push_back( cube );
  }

  // single-cube containment
  std::vector<Cube> kept;
  for ( std::size_t i = 0; i < expanded.size(); ++i )
  {
    bool contained = false;
    for ( std::size_t j = 0; j < expanded.size() && !contained; ++j )
    {
      if ( i != j && expanded[j].covers( expanded[i] ) && ( expanded[i] != expanded[j] || j < i ) )
      {
        contained = true;
      }
    }
    if ( !contained )
    {
      kept.push_back( expanded[i] );
    }
  }

  // drop terms whose minterms are all covered by the remaining ones
  for ( std::size_t i = kept.size(); i-- > 0; )
  {
    std::vector<bool> others( on_set.size(), false );
    for ( std::size_t j = 0; j < kept.size(); ++j )
    {
      if ( j != i )
      {
        kept[j].for_each_minterm( [&]( std::span<Trit const> t ) { others[tuple_index( t )] = true; } );
      }
    }
    if ( cube_inside( kept[i], others ) )
    {
      kept.erase( kept.begin() + static_cast<std::ptrdiff_t>( i ) );
    }
  }
  return PullNetwork{net.level, std::move( kept )};
}

} // namespace detail

/*! \brief Literal expansion followed by single-cube containment.

  Each network's activation set is preserved exactly; the number of terms
  and literals never grows.
*/
inline PullNetworks simplify_terms( PullNetworks const& networks, unsigned arity )
{
  PullNetworks result;
  for ( std::size_t k = 0; k < 3u; ++k )
  {
    result[k] = detail::simplify_network( networks[k], arity );
  }
  return result;
}

/* The level driven for an input, or nullopt when no network (or more than one) is active. */
inline std::optional<Trit> evaluate_networks( PullNetworks const& networks, std::span<Trit const> tuple )
{
  std::optional<Trit> result;
  for ( auto const& n : networks )
  {
    if ( n.active( tuple ) )
    {
      if ( result )
      {
        return std::nullopt;
      }
      result = n.level;
    }
  }
  return result;
}

inline std::string format_literal( std::string const& var, LevelMask mask )
{
  switch ( mask )
  {
  case 0b001: return var + "^-";
  case 0b011: return var + "^+";
  case 0b100: return "(" + var + "^+)~";
  case 0b110: return "(" + var + "^-)~";
  case 0b010: return var + "^1";
  case 0b101: return "(" + var + "^1)~";
  default: return "1";
  }
}

inline std::string format_network( PullNetwork const& net, std::vector<std::string> const& names )
{
  if ( net.terms.empty() )
  {
    return "0";
  }
  std::string out;
  for ( std::size_t t = 0; t < net.terms.size(); ++t )
  {
    auto const& cube = net.terms[t];
    std::string term;
    for ( unsigned v = 0; v < cube.arity(); ++v )
    {
      if ( cube.mask( v ) == any_level )
      {
        continue;
      }
      if ( !term.empty() )
      {
        term += " & ";
      }
      term += format_literal( names.at( v ), cube.mask( v ) );
    }
    if ( term.empty() )
    {
      term = "1";
    }
    if ( t > 0u )
    {
      out += " | ";
    }
    out += cube.literal_count() > 1u && net.terms.size() > 1u ? "(" + term + ")" : term;
  }
  return out;
}

struct SynthOptions
{
  std::string name{"synth"};
  std::vector<std::string> input_names;  /* default x0, x1, ... */
  std::vector<std::string> output_names; /* default y0, y1, ... (single output: y) */
  bool simplify{false};
};

struct SynthResult
{
  Netlist netlist;
  std::vector<PullNetworks> networks; /* one triple per output */
};

namespace detail
{

/* Emits decoders and pull networks; decoders and term nets are shared between outputs. */
class PullNetlistBuilder
{
public:
  PullNetlistBuilder( Netlist& nl, std::vector<std::string> inputs ) : nl_( nl ), inputs_( std::move( inputs ) ) {}

  std::string literal( unsigned var, LevelMask mask )
  {
    auto key = std::make_pair( var, mask );
    if ( auto it = literals_.find( key ); it != literals_.end() )
    {
      return it->second;
    }
    std::string const& x = inputs_.at( var );
    std::string net;
    switch ( mask )
    {
    case 0b001: net = cell1( CellKind::NTI, x, x + "_nti" ); break;
    case 0b011: net = cell1( CellKind::PTI, x, x + "_pti" ); break;
    case 0b100: net = cell1( CellKind::BIN_INV, literal( var, 0b011 ), x + "_is2" ); break;
    case 0b110: net = cell1( CellKind::BIN_INV, literal( var, 0b001 ), x + "_ge1" ); break;
    case 0b010: net = cell2( CellKind::BIN_AND, literal( var, 0b011 ), literal( var, 0b110 ), x + "_is1" ); break;
    case 0b101: net = cell1( CellKind::BIN_INV, literal( var, 0b010 ), x + "_not1" ); break;
    default: throw invalid_value( "no decoder for literal mask" );
    }
    literals_.emplace( key, net );
    return net;
  }

  std::string term( Cube const& cube )
  {
    if ( auto it = terms_.find( cube ); it != terms_.end() )
    {
      return it->second;
    }
    std::vector<std::string> lits;
    for ( unsigned v = 0; v < cube.arity(); ++v )
    {
      if ( cube.mask( v ) != any_level )
      {
        lits.push_back( literal( v, cube.mask( v ) ) );
      }
    }
    std::string net;
    if ( lits.empty() )
    {
      net = nl_.constant( Trit{2} );
    }
    else
    {
      net = lits.front();
      for ( std::size_t i = 1; i < lits.size(); ++i )
      {
        net = cell2( CellKind::BIN_AND, net, lits[i], "term" );
      }
    }
    terms_.emplace( cube, net );
    return net;
  }

  void pull( std::string const& output, Trit level, std::string const& enable )
  {
    nl_.add_instance( "pull_" + output + "_" + level.to_char() + "_" + std::to_string( pulls_++ ), CellKind::TGATE,
                      {{"in", nl_.constant( level )}, {"en", enable}, {"out", output}} );
  }

private:
  std::string cell1( CellKind kind, std::string const& a, std::string const& hint )
  {
    auto y = nl_.fresh_net( hint );
    nl_.add_instance( "u_" + y, kind, {{"a", a}, {"y", y}} );
    return y;
  }

  std::string cell2( CellKind kind, std::string const& a, std::string const& b, std::string const& hint )
  {
    auto y = nl_.fresh_net( hint );
    nl_.add_instance( "u_" + y, kind, {{"a", a}, {"b", b}, {"y", y}} );
    return y;
  }

  Netlist& nl_;
  std::vector<std::string> inputs_;
  std::map<std::pair<unsigned, LevelMask>, std::string> literals_;
  std::map<Cube, std::string> terms_;
  std::size_t pulls_{0};
};

} // namespace detail

/* Builds the structural netlist realizing already computed networks. */
inline Netlist pull_networks_netlist( std::vector<PullNetworks> const& outputs, unsigned arity, SynthOptions const& opts )
{
  std::vector<std::string> in_names = opts.input_names;
  if ( in_names.empty() )
  {
    for ( unsigned i = 0; i < arity; ++i )
    {
      in_names.push_back( "x" + std::to_string( i ) );
    }
  }
  std::vector<std::string> out_names = opts.output_names;
  if ( out_names.empty() )
  {
    if ( outputs.size() == 1u )
    {
      out_names.push_back( "y" );
    }
    else
    {
      for ( std::size_t i = 0; i < outputs.size(); ++i )
      {
        out_names.push_back( "y" + std::to_string( i ) );
      }
    }
  }
  if ( in_names.size() != arity || out_names.size() != outputs.size() )
  {
    throw invalid_value( "synthesis port name count does not match the function" );
  }

  Netlist nl( opts.name );
  for ( auto const& n : in_names )
  {
    nl.add_input( n );
  }
  for ( auto const& n : out_names )
  {
    nl.add_output( n );
  }
  detail::PullNetlistBuilder builder( nl, in_names );
  for ( std::size_t o = 0; o < outputs.size(); ++o )
  {
    for ( auto const& net : outputs[o] )
    {
      for ( auto const& cube : net.terms )
      {
        builder.pull( out_names[o], net.level, builder.term( cube ) );
      }
    }
  }
  return nl;
}

/* Multi-output synthesis over a shared set of inputs. */
inline SynthResult synthesize( std::span<TernaryTruthTable const> tables, SynthOptions const& opts = {} )
{
  if ( tables.empty() )
  {
    throw invalid_value( "nothing to synthesize" );
  }
  unsigned const arity = tables.front().arity();
  SynthResult result;
  for ( auto const& tt : tables )
  {
    if ( tt.arity() != arity )
    {
      throw invalid_value( "all synthesized outputs must share one arity" );
    }
    auto nets = minterm_networks( tt );
    result.networks.push_back( opts.simplify ? simplify_terms( nets, arity ) : nets );
  }
  result.netlist = pull_networks_netlist( result.networks, arity, opts );
  return result;
}

inline SynthResult synthesize( TernaryTruthTable const& tt, SynthOptions const& opts = {} )
{
  return synthesize( std::span<TernaryTruthTable const>( &tt, 1u ), opts );
}

} // namespace tritforge
