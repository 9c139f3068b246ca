#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace retrade {

// Currency amount in integer ticks (default tick = 1 cent). All market-core
// arithmetic stays in int64 ticks so sums are exact; conversion to currency
// units happens only at the I/O boundary.
struct Money {
    std::int64_t ticks{0};

    constexpr Money() = default;
    constexpr explicit Money(std::int64_t t) : ticks(t) {}

    friend constexpr Money operator+(Money a, Money b) { return Money{a.ticks + b.ticks}; }
    friend constexpr Money operator-(Money a, Money b) { return Money{a.ticks - b.ticks}; }
    friend constexpr Money operator*(Money a, std::int64_t k) { return Money{a.ticks * k}; }
    friend constexpr Money operator*(std::int64_t k, Money a) { return Money{a.ticks * k}; }
    constexpr Money& operator+=(Money b) { ticks += b.ticks; return *this; }
    constexpr Money& operator-=(Money b) { ticks -= b.ticks; return *this; }
    friend constexpr auto operator<=>(Money, Money) = default;
};

inline std::string to_string(Money m) { return std::to_string(m.ticks); }

// Round a real-valued price (in ticks) down/up to an integer tick, clamped at 0.
inline Money money_floor(double ticks) {
    double f = std::floor(ticks);
    return Money{static_cast<std::int64_t>(f < 0 ? 0 : f)};
}
inline Money money_ceil(double ticks) {
    double c = std::ceil(ticks);
    return Money{static_cast<std::int64_t>(c < 0 ? 0 : c)};
}

}  // namespace retrade
