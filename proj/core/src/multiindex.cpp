#include "momentkit/multiindex.hpp"

#include <numeric>

#include "momentkit/error.hpp"

namespace momentkit {

namespace {

void require_same_rank(const MultiIndex& a, const MultiIndex& b, const char* where) {
  if (a.rank() != b.rank()) throw DimensionMismatch(a.rank(), b.rank(), where);
}

}  // namespace

MultiIndex::MultiIndex(std::vector<value_type> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidArgument("MultiIndex: rank must be at least 1");
}

MultiIndex::MultiIndex(std::initializer_list<value_type> entries)
    : MultiIndex(std::vector<value_type>(entries)) {}

MultiIndex MultiIndex::unit(std::size_t rank, std::size_t i) {
  if (i >= rank) throw InvalidArgument("MultiIndex::unit: coordinate out of range");
  MultiIndex e(rank);
  e.entries_[i] = 1;
  return e;
}

std::uint64_t MultiIndex::height() const noexcept {
  return std::accumulate(entries_.begin(), entries_.end(), std::uint64_t{0});
}

bool MultiIndex::is_zero() const noexcept {
  for (auto v : entries_)
    if (v != 0) return false;
  return true;
}

mpz_class MultiIndex::factorial() const {
  mpz_class out = 1;
  mpz_class f;
  for (auto v : entries_) {
    mpz_fac_ui(f.get_mpz_t(), v);
    out *= f;
  }
  return out;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(entries_[i]);
  }
  return s + ")";
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  require_same_rank(a, b, "MultiIndex add");
  std::vector<MultiIndex::value_type> out(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) out[i] = a[i] + b[i];
  return MultiIndex(std::move(out));
}

MultiIndex sub(const MultiIndex& a, const MultiIndex& b) {
  require_same_rank(a, b, "MultiIndex sub");
  if (!leq(b, a))
    throw InvalidArgument("MultiIndex sub: " + b.to_string() + " is not <= " + a.to_string());
  std::vector<MultiIndex::value_type> out(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) out[i] = a[i] - b[i];
  return MultiIndex(std::move(out));
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  require_same_rank(a, b, "MultiIndex leq");
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool strictly_below(const MultiIndex& a, const MultiIndex& b) { return leq(a, b) && a != b; }

mpz_class binom(const MultiIndex& alpha, const MultiIndex& beta) {
  if (!leq(beta, alpha))
    throw InvalidArgument("binom: " + beta.to_string() + " is not <= " + alpha.to_string());
  mpz_class out = 1;
  mpz_class c;
  for (std::size_t i = 0; i < alpha.rank(); ++i) {
    mpz_bin_uiui(c.get_mpz_t(), alpha[i], beta[i]);
    out *= c;
  }
  return out;
}

std::vector<MultiIndex> enumerate_below(const MultiIndex& alpha) {
  const std::size_t r = alpha.rank();
  std::vector<MultiIndex> out;
  std::vector<MultiIndex::value_type> cur(r, 0);
  // Odometer with the last coordinate varying fastest gives lexicographic order.
  while (true) {
    out.emplace_back(cur);
    std::size_t i = r;
    while (i > 0) {
      --i;
      if (cur[i] < alpha[i]) {
        ++cur[i];
        break;
      }
      cur[i] = 0;
      if (i == 0) return out;
    }
  }
}

std::vector<MultiIndex> enumerate_height_at_most(std::size_t rank, std::uint64_t max_height) {
  if (rank == 0) throw InvalidArgument("enumerate_height_at_most: rank must be at least 1");
  std::vector<MultiIndex> out;
  std::vector<MultiIndex::value_type> cur(rank, 0);
  std::uint64_t h = 0;
  while (true) {
    out.emplace_back(cur);
    std::size_t i = rank;
    while (true) {
      --i;
      if (h < max_height) {
        ++cur[i];
        ++h;
        break;
      }
      h -= cur[i];
      cur[i] = 0;
      if (i == 0) return out;
    }
  }
}

void to_json(nlohmann::json& j, const MultiIndex& a) {
  j = nlohmann::json::array();
  for (auto v : a.entries()) j.push_back(v);
}

void from_json(const nlohmann::json& j, MultiIndex& a) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("MultiIndex JSON must be a non-empty array");
  std::vector<MultiIndex::value_type> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<long long>() < 0)
      throw InvalidArgument("MultiIndex JSON entries must be nonnegative integers");
    v.push_back(e.get<MultiIndex::value_type>());
  }
  a = MultiIndex(std::move(v));
}

}  // namespace momentkit
