#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "facmech/errors.hpp"

namespace facmech {

/// Exact rational scalar. All coordinates, distances, costs and ratios are
/// values of this type; no operation ever rounds. Stored canonically
/// reduced with a positive denominator.
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {} // NOLINT: implicit by design, mirrors integer literals
    Rat(long n, long d);
    explicit Rat(const mpq_class& v);
    explicit Rat(mpz_class num, mpz_class den);

    /// Parses "p" or "p/q" with optional leading '-' on p and q > 0.
    /// Anything else (including q <= 0) is rejected with ParseError.
    static Rat parse(std::string_view text);

    /// Canonical rendering: "p/q", or just "p" for integers.
    std::string str() const;

    /// Decimal rendering to `sig` significant digits (trailing zeros
    /// trimmed). Rendering only; never fed back into any computation.
    std::string decimal(int sig = 12) const;

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) >= 0; }

    friend Rat abs(const Rat& a) { return Rat(mpq_class(abs(a.v_))); }

    double to_double() const { return v_.get_d(); }

  private:
    mpq_class v_; // invariant: canonical (den > 0, gcd(|num|, den) = 1)
};

/// A bound of the form a + b*sqrt(2), compared against rationals exactly
/// by sign analysis and squaring. Represents 2, 3 (b = 0) and 1+sqrt(2)
/// (a = b = 1) without any floating point.
struct BoundExpr {
    Rat a;
    Rat b;

    static BoundExpr rational(Rat value) { return BoundExpr{std::move(value), Rat(0)}; }
    static BoundExpr one_plus_sqrt2() { return BoundExpr{Rat(1), Rat(1)}; }

    /// Sign of r - (a + b*sqrt2): -1 if r below the bound, 0 if equal,
    /// +1 if above. Exact for every rational r.
    int compare(const Rat& r) const;

    std::string str() const;
};

} // namespace facmech
