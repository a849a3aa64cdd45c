#include "isopoly/sparse_vector.hpp"

#include <algorithm>

#include "isopoly/errors.hpp"

namespace isopoly {

SparseVector::SparseVector(std::initializer_list<std::pair<const Index, Rational>> entries) {
  for (const auto& [i, v] : entries) set(i, v);
}

SparseVector SparseVector::unit(Index i, const Rational& value) {
  SparseVector v;
  v.set(i, value);
  return v;
}

Rational SparseVector::get(Index i) const {
  auto it = entries_.find(i);
  return it == entries_.end() ? Rational(0) : it->second;
}

void SparseVector::set(Index i, const Rational& value) {
  if (i < 1) throw InvalidArgument("coordinate indices start at 1, got " + std::to_string(i));
  if (value == 0) {
    entries_.erase(i);
  } else {
    entries_[i] = value;
  }
}

void SparseVector::add(Index i, const Rational& value) { set(i, get(i) + value); }

std::vector<Index> SparseVector::support() const {
  std::vector<Index> out;
  out.reserve(entries_.size());
  for (const auto& [i, v] : entries_) out.push_back(i);
  return out;
}

SparseVector SparseVector::abs() const {
  SparseVector out;
  for (const auto& [i, v] : entries_) out.entries_.emplace(i, ::abs(v));
  return out;
}

SparseVector SparseVector::scaled(const Rational& factor) const {
  SparseVector out;
  if (factor == 0) return out;
  for (const auto& [i, v] : entries_) out.entries_.emplace(i, v * factor);
  return out;
}

SparseVector SparseVector::restricted(const std::function<bool(Index)>& keep) const {
  SparseVector out;
  for (const auto& [i, v] : entries_) {
    if (keep(i)) out.entries_.emplace(i, v);
  }
  return out;
}

SparseVector SparseVector::restricted_to(const std::vector<Index>& coordinates) const {
  return restricted([&](Index i) { return std::binary_search(coordinates.begin(), coordinates.end(), i); });
}

Rational SparseVector::sup_norm() const {
  Rational best = 0;
  for (const auto& [i, v] : entries_) best = std::max<Rational>(best, ::abs(v));
  return best;
}

Rational SparseVector::l1_norm() const {
  Rational sum = 0;
  for (const auto& [i, v] : entries_) sum += ::abs(v);
  return sum;
}

bool SparseVector::nonnegative() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.second > 0; });
}

Rational SparseVector::dot(const SparseVector& other) const {
  const auto& small = size() <= other.size() ? entries_ : other.entries_;
  const auto& large = size() <= other.size() ? other.entries_ : entries_;
  Rational sum = 0;
  for (const auto& [i, v] : small) {
    auto it = large.find(i);
    if (it != large.end()) sum += v * it->second;
  }
  return sum;
}

SparseVector operator+(const SparseVector& a, const SparseVector& b) {
  SparseVector out = a;
  for (const auto& [i, v] : b) out.add(i, v);
  return out;
}

SparseVector operator-(const SparseVector& a, const SparseVector& b) {
  SparseVector out = a;
  for (const auto& [i, v] : b) out.add(i, -v);
  return out;
}

SparseVector parse_vector(std::string_view text) {
  SparseVector out;
  Index previous = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    pos = comma == std::string_view::npos ? text.size() : comma + 1;
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    if (item.empty()) continue;
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw ParseError("vector entry without ':' in '" + std::string(item) + "'");
    Index idx = 0;
    try {
      idx = std::stoll(std::string(item.substr(0, colon)));
    } catch (const std::exception&) {
      throw ParseError("bad vector index in '" + std::string(item) + "'");
    }
    if (idx <= previous) throw ParseError("vector indices must be positive and strictly increasing");
    previous = idx;
    out.set(idx, parse_rational(item.substr(colon + 1)));
  }
  return out;
}

std::string format_vector(const SparseVector& v) {
  std::string out;
  for (const auto& [i, value] : v) {
    if (!out.empty()) out += ',';
    out += std::to_string(i) + ":" + format_rational(value);
  }
  return out;
}

}  // namespace isopoly
