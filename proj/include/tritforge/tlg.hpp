/*!
  \file tlg.hpp
  \brief Ternary threshold logic gate

  o = sgn(n1*a + n2*b + eps - n3*c - n4*d) + 1, with ternary inputs and a
  binary-as-ternary output pair (o, obar).  The weighted difference is an
  integer, so for any 0 < eps < 1 the offset only resolves the zero case in
  favour of o = 2.  No floating point is involved.
*/

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "error.hpp"
#include "trit.hpp"

namespace tritforge
{

inline constexpr std::uint32_t default_max_tlg_weight = 15u;

class TlgWeights
{
public:
  constexpr TlgWeights() noexcept = default;

  constexpr TlgWeights( std::uint32_t n1, std::uint32_t n2, std::uint32_t n3, std::uint32_t n4,
                        std::uint32_t max_weight = default_max_tlg_weight )
      : n_{n1, n2, n3, n4}
  {
    if ( n1 + n2 + n3 + n4 == 0u )
    {
      throw invalid_value( "TLG weights must not all be zero" );
    }
    for ( auto w : n_ )
    {
      if ( w > max_weight )
      {
        throw invalid_value( "TLG weight " + std::to_string( w ) + " exceeds cap " + std::to_string( max_weight ) );
      }
    }
  }

  [[nodiscard]] constexpr std::uint32_t operator[]( std::size_t i ) const { return n_[i]; }
  [[nodiscard]] constexpr std::array<std::uint32_t, 4> const& values() const noexcept { return n_; }

  friend constexpr bool operator==( TlgWeights const&, TlgWeights const& ) noexcept = default;

private:
  /* positive side (a, b), negative side (c, d) */
  std::array<std::uint32_t, 4> n_{1u, 0u, 0u, 0u};
};

struct TlgOutput
{
  Trit o;
  Trit obar;

  friend constexpr bool operator==( TlgOutput const&, TlgOutput const& ) noexcept = default;
};

namespace detail
{

constexpr TlgOutput tlg_output_from_sign( std::int64_t difference ) noexcept
{
  Trit const o = from_bool( difference >= 0 );
  return {o, sti( o )};
}

} // namespace detail

[[nodiscard]] constexpr TlgOutput tlg_eval( TlgWeights const& w, Trit a, Trit b, Trit c, Trit d ) noexcept
{
  std::int64_t const difference = std::int64_t( w[0] ) * a.value() + std::int64_t( w[1] ) * b.value() -
                                  std::int64_t( w[2] ) * c.value() - std::int64_t( w[3] ) * d.value();
  return detail::tlg_output_from_sign( difference );
}

/*! \brief Evaluates the gate from decomposed rails.

  Works on twice the weighted difference, sum of n_i * (upper + lower), so the
  halves in (upper + lower) / 2 never appear.
*/
[[nodiscard]] constexpr TlgOutput tlg_eval_decomposed( TlgWeights const& w, std::array<TritPair, 4> const& inputs ) noexcept
{
  std::int64_t doubled = 0;
  for ( std::size_t i = 0; i < 4u; ++i )
  {
    std::int64_t const rails = std::int64_t( inputs[i].upper().value() ) + inputs[i].lower().value();
    std::int64_t const term = std::int64_t( w[i] ) * rails;
    doubled += i < 2u ? term : -term;
  }
  return detail::tlg_output_from_sign( doubled );
}

enum class ClockEdge
{
  none,
  rising,
  falling
};

/*! \brief Clocked TLG with its output SR-latch.

  The gate evaluates on the falling edge and holds through the precharge
  (clock-high) phase.  Before the first falling edge the output reads o = 0,
  obar = 2 and `evaluated()` is false.
*/
class TlgCell
{
public:
  explicit constexpr TlgCell( TlgWeights const& weights ) noexcept : weights_( weights ) {}

  constexpr TlgOutput step( ClockEdge edge, Trit a, Trit b, Trit c, Trit d ) noexcept
  {
    if ( edge == ClockEdge::falling )
    {
      state_ = tlg_eval( weights_, a, b, c, d );
      evaluated_ = true;
    }
    return state_;
  }

  [[nodiscard]] constexpr TlgOutput output() const noexcept { return state_; }
  [[nodiscard]] constexpr bool evaluated() const noexcept { return evaluated_; }
  [[nodiscard]] constexpr TlgWeights const& weights() const noexcept { return weights_; }

private:
  TlgWeights weights_;
  TlgOutput state_{trit_false, trit_true};
  bool evaluated_{false};
};

} // namespace tritforge
