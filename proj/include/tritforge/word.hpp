/*!
  \file word.hpp
  \brief Multi-digit ternary words: comparison, ripple addition, complements, subtraction

  Digits are stored least significant first.  Text is written most
  significant first, optionally followed by a `t` suffix ("21t" is seven).
*/

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cells.hpp"
#include "error.hpp"
#include "trit.hpp"

namespace tritforge
{

inline constexpr std::size_t max_word_width = 32u;

class TernaryWord
{
public:
  explicit TernaryWord( std::size_t width ) : digits_( check_width( width ), Trit( 0 ) ) {}

  explicit TernaryWord( std::vector<Trit> digits ) : digits_( std::move( digits ) )
  {
    check_width( digits_.size() );
  }

  [[nodiscard]] static TernaryWord from_integer( std::uint64_t value, std::size_t width )
  {
    TernaryWord w( width );
    for ( auto& d : w.digits_ )
    {
      d = Trit( int( value % 3u ) );
      value /= 3u;
    }
    if ( value != 0u )
    {
      throw invalid_value( "value does not fit into " + std::to_string( width ) + " trits" );
    }
    return w;
  }

  /* MSB first, optional trailing 't' */
  [[nodiscard]] static TernaryWord parse( std::string_view text )
  {
    if ( !text.empty() && ( text.back() == 't' || text.back() == 'T' ) )
    {
      text.remove_suffix( 1u );
    }
    if ( text.empty() )
    {
      throw invalid_value( "empty ternary word" );
    }
    std::vector<Trit> digits;
    for ( auto it = text.rbegin(); it != text.rend(); ++it )
    {
      digits.push_back( Trit::from_char( *it ) );
    }
    return TernaryWord( std::move( digits ) );
  }

  [[nodiscard]] std::size_t width() const noexcept { return digits_.size(); }
  [[nodiscard]] Trit operator[]( std::size_t i ) const { return digits_.at( i ); }
  [[nodiscard]] Trit& operator[]( std::size_t i ) { return digits_.at( i ); }
  [[nodiscard]] std::vector<Trit> const& digits() const noexcept { return digits_; }

  [[nodiscard]] std::uint64_t to_integer() const noexcept
  {
    std::uint64_t v = 0u;
    for ( auto it = digits_.rbegin(); it != digits_.rend(); ++it )
    {
      v = v * 3u + it->value();
    }
    return v;
  }

  [[nodiscard]] std::string to_string() const
  {
    std::string s;
    for ( auto it = digits_.rbegin(); it != digits_.rend(); ++it )
    {
      s.push_back( it->to_char() );
    }
    return s;
  }

  friend bool operator==( TernaryWord const&, TernaryWord const& ) = default;

private:
  static std::size_t check_width( std::size_t width )
  {
    if ( width < 1u || width > max_word_width )
    {
      throw invalid_value( "word width must be in 1.." + std::to_string( max_word_width ) + ", got " +
                           std::to_string( width ) );
    }
    return width;
  }

  std::vector<Trit> digits_;
};

[[nodiscard]] inline std::uint64_t pow3_word( std::size_t width ) noexcept
{
  std::uint64_t p = 1u;
  for ( std::size_t i = 0; i < width; ++i )
  {
    p *= 3u;
  }
  return p;
}

enum class Ordering
{
  lt,
  eq,
  gt
};

[[nodiscard]] inline std::string to_string( Ordering o )
{
  switch ( o )
  {
  case Ordering::lt:
    return "LT";
  case Ordering::eq:
    return "EQ";
  default:
    return "GT";
  }
}

namespace detail
{

inline void check_same_width( TernaryWord const& x, TernaryWord const& y )
{
  if ( x.width() != y.width() )
  {
    throw invalid_value( "word width mismatch: " + std::to_string( x.width() ) + " vs " + std::to_string( y.width() ) );
  }
}

} // namespace detail

/*! \brief Digit cascade, most significant digit first.

  gt = gt_M | (eq_M & (gt_{M-1} | (eq_{M-1} & ...))), where every digit
  relation comes from the two comparisons x_i >= y_i and y_i >= x_i.
*/
[[nodiscard]] inline Ordering word_compare( TernaryWord const& x, TernaryWord const& y )
{
  detail::check_same_width( x, y );
  Trit gt = trit_false, lt = trit_false;
  for ( std::size_t i = 0; i < x.width(); ++i )
  {
    auto const ge = comp_ge( x[i], y[i] ), le = comp_ge( y[i], x[i] );
    auto const digit_eq = bin_and( ge, le );
    /* fold from the least significant digit upwards */
    gt = bin_or( bin_not( le ), bin_and( digit_eq, gt ) );
    lt = bin_or( bin_not( ge ), bin_and( digit_eq, lt ) );
  }
  if ( gt.is_high() )
  {
    return Ordering::gt;
  }
  return lt.is_high() ? Ordering::lt : Ordering::eq;
}

struct AddResult
{
  TernaryWord sum;
  Trit carry;
};

/* one ripple digit: two half adders and a max merge of their carries */
struct DigitSum
{
  Trit sum;
  Trit carry;
};

[[nodiscard]] constexpr DigitSum digit_add( Trit x, Trit y, Trit carry_in ) noexcept
{
  auto const s1 = tha_sum( x, y ), c1 = tha_carry( x, y );
  auto const s2 = tha_sum( s1, carry_in ), c2 = tha_carry( s1, carry_in );
  return {s2, tmax( c1, c2 )};
}

[[nodiscard]] inline AddResult word_add( TernaryWord const& x, TernaryWord const& y, Trit carry_in = Trit( 0 ) )
{
  detail::check_same_width( x, y );
  if ( carry_in.value() > 1u )
  {
    throw invalid_value( "carry-in must be 0 or 1" );
  }
  TernaryWord sum( x.width() );
  Trit carry = carry_in;
  for ( std::size_t i = 0; i < x.width(); ++i )
  {
    auto const d = digit_add( x[i], y[i], carry );
    sum[i] = d.sum;
    carry = d.carry;
  }
  return {std::move( sum ), carry};
}

[[nodiscard]] inline TernaryWord twos_complement( TernaryWord const& x )
{
  TernaryWord r( x.width() );
  for ( std::size_t i = 0; i < x.width(); ++i )
  {
    r[i] = sti( x[i] );
  }
  return r;
}

[[nodiscard]] inline TernaryWord threes_complement( TernaryWord const& x )
{
  return word_add( twos_complement( x ), TernaryWord( x.width() ), Trit( 1 ) ).sum;
}

struct SubResult
{
  TernaryWord diff;
  Trit no_borrow;
};

/*! \brief x - y as x + twos(y) + 1.

  The increment rides in as the adder's carry-in, so the final carry-out is
  1 exactly when x >= y.  The overflow is dropped from the difference and
  reported as `no_borrow`.
*/
[[nodiscard]] inline SubResult word_sub( TernaryWord const& x, TernaryWord const& y )
{
  detail::check_same_width( x, y );
  auto r = word_add( x, twos_complement( y ), Trit( 1 ) );
  return {std::move( r.sum ), r.carry};
}

} // namespace tritforge
