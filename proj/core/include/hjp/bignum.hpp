#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <string>

namespace hjp {

using BigNat = boost::multiprecision::cpp_int;

/// C(n, k); zero when k > n.
BigNat binomial(const BigNat& n, std::uint64_t k);

/// Number of k-element multisets over n items, C(n + k - 1, k).
BigNat multichoose(const BigNat& n, std::uint64_t k);

/// Number of significant bits; zero for zero.
std::size_t bit_length(const BigNat& x);

/// Full decimal rendering.
std::string to_decimal(const BigNat& x);

/// Decimal when short, otherwise a size summary such as "~2^6561 (1976 digits)".
std::string to_short_string(const BigNat& x, std::size_t max_digits = 60);

}  // namespace hjp
