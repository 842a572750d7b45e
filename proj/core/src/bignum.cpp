#include "hjp/bignum.hpp"

#include <boost/multiprecision/integer.hpp>

namespace hjp {

BigNat binomial(const BigNat& n, std::uint64_t k) {
  if (BigNat(k) > n) return 0;
  BigNat kk = k;
  if (kk > n - kk) kk = n - kk;
  const auto steps = static_cast<std::uint64_t>(kk);
  BigNat result = 1;
  for (std::uint64_t i = 0; i < steps; ++i) {
    result *= (n - i);
    result /= (i + 1);
  }
  return result;
}

BigNat multichoose(const BigNat& n, std::uint64_t k) {
  if (k == 0) return 1;
  if (n == 0) return 0;
  return binomial(n + k - 1, k);
}

std::size_t bit_length(const BigNat& x) {
  if (x == 0) return 0;
  return static_cast<std::size_t>(boost::multiprecision::msb(x)) + 1;
}

std::string to_decimal(const BigNat& x) { return x.str(); }

std::string to_short_string(const BigNat& x, std::size_t max_digits) {
  std::string s = x.str();
  if (s.size() <= max_digits) return s;
  return "~2^" + std::to_string(bit_length(x) - 1) + " (" + std::to_string(s.size()) + " digits)";
}

}  // namespace hjp
