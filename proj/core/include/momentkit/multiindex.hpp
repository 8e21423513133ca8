#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

namespace momentkit {

/// An element of N^r. The rank r is fixed at construction and checked by
/// every binary operation.
///
/// `operator<=>` is the lexicographic total order (used for containers and
/// enumeration); the componentwise partial order is `leq`.
class MultiIndex {
 public:
  using value_type = std::uint32_t;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t rank) : entries_(rank, 0) {}
  explicit MultiIndex(std::vector<value_type> entries);
  MultiIndex(std::initializer_list<value_type> entries);

  static MultiIndex zero(std::size_t rank) { return MultiIndex(rank); }
  /// The i-th unit vector e_i.
  static MultiIndex unit(std::size_t rank, std::size_t i);

  std::size_t rank() const noexcept { return entries_.size(); }
  value_type operator[](std::size_t i) const { return entries_[i]; }
  std::span<const value_type> entries() const noexcept { return entries_; }

  /// Sum of entries.
  std::uint64_t height() const noexcept;
  bool is_zero() const noexcept;

  /// alpha! = alpha_1! ... alpha_r!
  mpz_class factorial() const;

  std::string to_string() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<value_type> entries_;
};

MultiIndex add(const MultiIndex& a, const MultiIndex& b);
/// Throws InvalidArgument unless b <= a.
MultiIndex sub(const MultiIndex& a, const MultiIndex& b);

inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) { return add(a, b); }
inline MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) { return sub(a, b); }

/// Componentwise a <= b.
bool leq(const MultiIndex& a, const MultiIndex& b);
/// a <= b and a != b.
bool strictly_below(const MultiIndex& a, const MultiIndex& b);

/// Product of scalar binomials C(alpha_i, beta_i). Throws unless beta <= alpha.
mpz_class binom(const MultiIndex& alpha, const MultiIndex& beta);

/// Every beta <= alpha, lexicographic, exactly prod(alpha_i + 1) of them.
std::vector<MultiIndex> enumerate_below(const MultiIndex& alpha);

/// Every alpha in N^rank with |alpha| <= max_height, lexicographic.
std::vector<MultiIndex> enumerate_height_at_most(std::size_t rank, std::uint64_t max_height);

void to_json(nlohmann::json& j, const MultiIndex& a);
void from_json(const nlohmann::json& j, MultiIndex& a);

}  // namespace momentkit
