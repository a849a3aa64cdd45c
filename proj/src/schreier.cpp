#include "isopoly/schreier.hpp"

#include <algorithm>
#include <set>

#include "isopoly/errors.hpp"

namespace isopoly {

FiniteSet::FiniteSet(std::initializer_list<Index> elements) : FiniteSet(std::vector<Index>(elements)) {}

FiniteSet::FiniteSet(std::vector<Index> elements) : elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] < 1) throw InvalidArgument("finite sets live in the positive integers");
    if (i > 0 && elements_[i - 1] >= elements_[i]) throw InvalidArgument("finite set elements must strictly increase");
  }
}

bool FiniteSet::contains(Index i) const { return std::binary_search(elements_.begin(), elements_.end(), i); }

bool FiniteSet::is_subset_of(const FiniteSet& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

bool is_S1(const FiniteSet& f) { return f.empty() || static_cast<Index>(f.size()) <= f.min(); }

bool precedes(const FiniteSet& e, const FiniteSet& f) {
  if (e.empty() || f.empty()) return true;
  return e.max() < f.min();
}

bool is_pointwise_limit_closed_sample(const std::vector<FiniteSet>& family) {
  std::set<FiniteSet> listed(family.begin(), family.end());
  for (const FiniteSet& member : family) {
    const auto& els = member.elements();
    if (els.size() > 20) return false;  // too large to certify at this scale
    const std::size_t count = std::size_t{1} << els.size();
    for (std::size_t mask = 0; mask < count; ++mask) {
      std::vector<Index> sub;
      for (std::size_t b = 0; b < els.size(); ++b) {
        if (mask & (std::size_t{1} << b)) sub.push_back(els[b]);
      }
      if (!listed.contains(FiniteSet(std::move(sub)))) return false;
    }
  }
  return true;
}

std::vector<FiniteSet> enumerate_S1(Index bound) {
  std::vector<FiniteSet> out{FiniteSet{}};
  if (bound < 1) return out;
  const std::size_t n = static_cast<std::size_t>(bound);
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Index> els;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::size_t{1} << b)) els.push_back(static_cast<Index>(b + 1));
    }
    FiniteSet s(std::move(els));
    if (is_S1(s)) out.push_back(std::move(s));
  }
  return out;
}

FiniteSet parse_set(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') throw ParseError("sets are written {a,b,c}");
  text = text.substr(1, text.size() - 2);
  std::vector<Index> els;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    pos = comma == std::string_view::npos ? text.size() : comma + 1;
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    try {
      els.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw ParseError("bad set element '" + item + "'");
    }
  }
  try {
    return FiniteSet(std::move(els));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

std::string format_set(const FiniteSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s.elements()[i]);
  }
  return out + "}";
}

}  // namespace isopoly
