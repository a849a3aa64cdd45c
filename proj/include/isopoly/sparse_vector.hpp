#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "isopoly/rational.hpp"

namespace isopoly {

using Index = std::int64_t;

/// Finitely supported rational vector on the positive integers.
/// Zero entries are never stored, so `support()` is exactly the set of nonzero coordinates.
class SparseVector {
 public:
  using Storage = std::map<Index, Rational>;

  SparseVector() = default;
  SparseVector(std::initializer_list<std::pair<const Index, Rational>> entries);

  static SparseVector unit(Index i, const Rational& value = 1);

  Rational get(Index i) const;
  void set(Index i, const Rational& value);
  void add(Index i, const Rational& value);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::vector<Index> support() const;
  Index min_index() const { return entries_.begin()->first; }
  Index max_index() const { return entries_.rbegin()->first; }

  const Storage& entries() const { return entries_; }
  Storage::const_iterator begin() const { return entries_.begin(); }
  Storage::const_iterator end() const { return entries_.end(); }

  SparseVector abs() const;
  SparseVector scaled(const Rational& factor) const;
  SparseVector restricted(const std::function<bool(Index)>& keep) const;
  SparseVector restricted_to(const std::vector<Index>& coordinates) const;

  Rational sup_norm() const;
  Rational l1_norm() const;
  bool nonnegative() const;

  /// Pairing sum_i f(i) x(i).
  Rational dot(const SparseVector& other) const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
  friend SparseVector operator+(const SparseVector& a, const SparseVector& b);
  friend SparseVector operator-(const SparseVector& a, const SparseVector& b);

 private:
  Storage entries_;
};

/// "idx:num/den" pairs, comma separated, strictly increasing idx. Empty string is the zero vector.
SparseVector parse_vector(std::string_view text);
std::string format_vector(const SparseVector& v);

}  // namespace isopoly
