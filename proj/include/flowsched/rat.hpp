#pragma once

#include <flowsched/error.hpp>

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace flowsched {

/// Exact rational scalar. Backed by GMP; always canonical (lowest terms,
/// positive denominator). Used for every time, volume and weight.
class Rat {
public:
    Rat() = default;

    template <std::integral T>
    Rat(T value) // NOLINT(google-explicit-constructor)
        : value_(mpz_class(static_cast<long>(value))) {}

    Rat(long num, long den);
    Rat(const mpz_class& num, const mpz_class& den);
    explicit Rat(mpq_class value);

    /// Parses `<int>` or `<int>/<int>`. Throws Error(ParseError).
    static Rat parse(std::string_view text);

    /// `n` for integers, `n/d` otherwise.
    [[nodiscard]] std::string str() const;
    /// Always `n/d`.
    [[nodiscard]] std::string fraction() const;
    /// Display-only decimal with the requested significant digits.
    [[nodiscard]] std::string decimal(int significant_digits = 20) const;

    [[nodiscard]] mpz_class num() const { return value_.get_num(); }
    [[nodiscard]] mpz_class den() const { return value_.get_den(); }
    [[nodiscard]] const mpq_class& raw() const { return value_; }

    [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
    [[nodiscard]] int sign() const { return sgn(value_); }
    [[nodiscard]] bool is_zero() const { return sign() == 0; }
    [[nodiscard]] bool is_positive() const { return sign() > 0; }

    /// Largest integer <= value.
    [[nodiscard]] mpz_class floor() const;
    /// Smallest integer >= value.
    [[nodiscard]] mpz_class ceil() const;
    /// Approximation for plotting and progress output only.
    [[nodiscard]] double to_double() const { return value_.get_d(); }

    [[nodiscard]] std::size_t hash() const;

    Rat& operator+=(const Rat& o) { value_ += o.value_; return *this; }
    Rat& operator-=(const Rat& o) { value_ -= o.value_; return *this; }
    Rat& operator*=(const Rat& o) { value_ *= o.value_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.value_)); }

    friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    mpq_class value_{0};
};

/// base^exponent, exact. base must be nonzero when exponent < 0.
Rat pow(const Rat& base, std::int64_t exponent);

Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);

/// Unique k with base^k <= value < base^(k+1). Pure integer comparisons.
/// Throws InvalidBase when base <= 1 and NonPositiveField when value <= 0.
std::int64_t floor_log(const Rat& value, const Rat& base);

struct PowerRounding {
    std::int64_t exponent;
    Rat rounded;
};

/// Least power of base that is >= value.
PowerRounding ceil_to_power(const Rat& value, const Rat& base);

} // namespace flowsched

template <>
struct std::hash<flowsched::Rat> {
    std::size_t operator()(const flowsched::Rat& r) const noexcept { return r.hash(); }
};
