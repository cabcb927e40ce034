#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace ordercert {

/// Integer Laurent polynomial sum a_k t^{n_k}; zero coefficients are never stored.
class LaurentPoly {
 public:
  using Terms = std::map<std::int64_t, std::int64_t>;

  LaurentPoly() = default;
  explicit LaurentPoly(Terms terms);

  static LaurentPoly monomial(std::int64_t coefficient, std::int64_t exponent);

  Terms const& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// (exponent, coefficient) of the highest-degree term; empty for zero.
  std::optional<std::pair<std::int64_t, std::int64_t>> leading_term() const;

  /// Multiplication by t^k.
  LaurentPoly shifted(std::int64_t k) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(LaurentPoly const& other);
  friend LaurentPoly operator+(LaurentPoly a, LaurentPoly const& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, LaurentPoly const& b) { return a += -b; }
  friend bool operator==(LaurentPoly const&, LaurentPoly const&) = default;

  /// "1*t^0+-2*t^3"; "0" for the zero polynomial.
  std::string to_string() const;

 private:
  void add_term(std::int64_t exponent, std::int64_t coefficient);

  Terms terms_;
};

}  // namespace ordercert
