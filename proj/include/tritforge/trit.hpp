/*!
  \file trit.hpp
  \brief Ternary value domain and scalar ternary operations

  Logic levels are 0 (ground), 1 (Vbb) and 2 (Vdd).  Signals that carry a
  binary meaning ("binary-as-ternary") use the same type restricted to
  {0, 2}, where 2 is true.
*/

#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>

#include "error.hpp"

namespace tritforge
{

class Trit
{
public:
  constexpr Trit() noexcept = default;

  constexpr Trit( int v ) : value_( checked( v ) ) {}

  [[nodiscard]] constexpr std::uint8_t value() const noexcept { return value_; }

  /* truthiness of a binary-as-ternary signal */
  [[nodiscard]] constexpr bool is_high() const noexcept { return value_ == 2u; }

  [[nodiscard]] constexpr bool is_binary() const noexcept { return value_ != 1u; }

  [[nodiscard]] char to_char() const noexcept { return static_cast<char>( '0' + value_ ); }

  static Trit from_char( char c )
  {
    if ( c < '0' || c > '2' )
    {
      throw invalid_value( std::string( "not a trit digit: '" ) + c + "'" );
    }
    return Trit( c - '0' );
  }

  friend constexpr bool operator==( Trit, Trit ) noexcept = default;
  friend constexpr auto operator<=>( Trit, Trit ) noexcept = default;

private:
  static constexpr std::uint8_t checked( int v )
  {
    if ( v < 0 || v > 2 )
    {
      throw invalid_value( "trit value out of range: " + std::to_string( v ) );
    }
    return static_cast<std::uint8_t>( v );
  }

  std::uint8_t value_{0};
};

inline std::ostream& operator<<( std::ostream& os, Trit t )
{
  return os << t.to_char();
}

inline constexpr std::array<Trit, 3> all_trits{Trit{0}, Trit{1}, Trit{2}};

/* Binary-as-ternary constants. */
inline constexpr Trit trit_false{0};
inline constexpr Trit trit_true{2};

[[nodiscard]] constexpr Trit from_bool( bool b ) noexcept
{
  return b ? trit_true : trit_false;
}

/* negative ternary inverter: fires only on 0 */
[[nodiscard]] constexpr Trit nti( Trit x ) noexcept
{
  return x.value() == 0u ? trit_true : trit_false;
}

/* positive ternary inverter: fires on anything but 2 */
[[nodiscard]] constexpr Trit pti( Trit x ) noexcept
{
  return x.value() != 2u ? trit_true : trit_false;
}

/* standard ternary inverter, 2 - x */
[[nodiscard]] constexpr Trit sti( Trit x ) noexcept
{
  return Trit( 2 - x.value() );
}

[[nodiscard]] constexpr Trit tmin( Trit x, Trit y ) noexcept
{
  return x < y ? x : y;
}

[[nodiscard]] constexpr Trit tmax( Trit x, Trit y ) noexcept
{
  return x < y ? y : x;
}

/* modulo-3 sum, carry discarded */
[[nodiscard]] constexpr Trit txor( Trit x, Trit y ) noexcept
{
  return Trit( ( x.value() + y.value() ) % 3 );
}

/* Binary gates over binary-as-ternary signals; a level-1 input counts as false. */
[[nodiscard]] constexpr Trit bin_not( Trit x ) noexcept
{
  return from_bool( !x.is_high() );
}

[[nodiscard]] constexpr Trit bin_and( Trit x, Trit y ) noexcept
{
  return from_bool( x.is_high() && y.is_high() );
}

[[nodiscard]] constexpr Trit bin_or( Trit x, Trit y ) noexcept
{
  return from_bool( x.is_high() || y.is_high() );
}

/*! \brief Two binary-as-ternary rails encoding one trit.

  `upper` is high when the trit is at least 1, `lower` when it is 2, so the
  trit equals (upper + lower) / 2.
*/
class TritPair
{
public:
  constexpr TritPair() noexcept = default;

  constexpr TritPair( Trit upper, Trit lower ) : upper_( upper ), lower_( lower )
  {
    if ( !upper.is_binary() || !lower.is_binary() )
    {
      throw invalid_value( "trit pair rails must be 0 or 2" );
    }
    if ( lower.is_high() && !upper.is_high() )
    {
      throw invalid_value( "trit pair requires upper >= lower" );
    }
  }

  [[nodiscard]] constexpr Trit upper() const noexcept { return upper_; }
  [[nodiscard]] constexpr Trit lower() const noexcept { return lower_; }

  [[nodiscard]] constexpr Trit reconstruct() const noexcept
  {
    return Trit( ( upper_.value() + lower_.value() ) / 2 );
  }

  friend constexpr bool operator==( TritPair, TritPair ) noexcept = default;

private:
  Trit upper_{};
  Trit lower_{};
};

[[nodiscard]] constexpr TritPair decompose( Trit x ) noexcept
{
  return TritPair( from_bool( x.value() >= 1u ), from_bool( x.value() == 2u ) );
}

/* One-hot decode of a trit; exactly one member is 2. */
struct Indicators
{
  Trit is0;
  Trit is1;
  Trit is2;

  friend constexpr bool operator==( Indicators const&, Indicators const& ) noexcept = default;
};

/* Decoding built only from inverters and a binary AND, the way the hardware does it. */
[[nodiscard]] constexpr Indicators decode_indicators( Trit x ) noexcept
{
  return {nti( x ), bin_and( pti( x ), sti( nti( x ) ) ), sti( pti( x ) )};
}

} // namespace tritforge
