#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "isopoly/sparse_vector.hpp"

namespace isopoly {

/// Strictly increasing finite list of positive integers.
class FiniteSet {
 public:
  FiniteSet() = default;
  FiniteSet(std::initializer_list<Index> elements);
  explicit FiniteSet(std::vector<Index> elements);

  const std::vector<Index>& elements() const { return elements_; }
  bool empty() const { return elements_.empty(); }
  std::size_t size() const { return elements_.size(); }
  Index min() const { return elements_.front(); }
  Index max() const { return elements_.back(); }
  bool contains(Index i) const;
  bool is_subset_of(const FiniteSet& other) const;

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;
  friend auto operator<=>(const FiniteSet&, const FiniteSet&) = default;

 private:
  std::vector<Index> elements_;
};

/// The Schreier family: F is empty or |F| <= min F.
bool is_S1(const FiniteSet& f);

/// E < F, i.e. max E < min F. The empty set precedes and is preceded by everything.
bool precedes(const FiniteSet& e, const FiniteSet& f);

/// Finite stand-in for pointwise compactness: every subset of every member is listed.
bool is_pointwise_limit_closed_sample(const std::vector<FiniteSet>& family);

/// All members of S1 with max <= bound (including the empty set).
std::vector<FiniteSet> enumerate_S1(Index bound);

/// "{a,b,c}"
FiniteSet parse_set(std::string_view text);
std::string format_set(const FiniteSet& s);

}  // namespace isopoly
