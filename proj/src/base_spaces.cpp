#include "isopoly/base_spaces.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "isopoly/cutting_plane.hpp"
#include "isopoly/errors.hpp"
#include "isopoly/tsirelson.hpp"

namespace isopoly {

namespace {

constexpr unsigned kMaxRefinementBits = 4096;

void check_exponent(const Rational& p) {
  if (p <= 1) throw InvalidArgument("exponent p must exceed 1, got " + format_rational(p));
  if (!p.get_num().fits_ulong_p() || !p.get_den().fits_ulong_p()) throw InvalidArgument("exponent too large");
}

void check_kind(const BaseSpaceId& space) {
  if (space.kind == SpaceKind::Unset) throw InvalidArgument("base space id has no kind");
  if (space.kind == SpaceKind::Lp || space.kind == SpaceKind::C0SumLp) check_exponent(space.p());
}

// Exponent of the dual space, q = p / (p - 1) = r / (r - s).
std::pair<unsigned long, unsigned long> conjugate(unsigned long r, unsigned long s) {
  unsigned long num = r, den = r - s;
  unsigned long g = std::gcd(num, den);
  return {num / g, den / g};
}

// ||v||_{r/s} for a non-negative value list, as an enclosure of width <= precision.
ScalarBound power_norm(const std::vector<Rational>& values, unsigned long r, unsigned long s,
                       const Rational& precision) {
  if (values.empty()) return ScalarBound::exact(0);
  Rational term_width = precision / static_cast<long>(values.size() + 1);
  for (unsigned bits = 0; bits < kMaxRefinementBits; bits += 8) {
    ScalarBound sum = ScalarBound::exact(0);
    bool all_exact = true;
    for (const Rational& v : values) {
      ScalarBound term = root_enclosure(rational_pow(v, r), s, term_width);
      all_exact = all_exact && term.is_exact();
      sum = sum + term;
    }
    if (all_exact) return root_enclosure(rational_pow(sum.lower, s), r, precision);
    ScalarBound out{root_lower(rational_pow(sum.lower, s), r, precision / 4),
                    root_upper(rational_pow(sum.upper, s), r, precision / 4)};
    if (out.width() <= precision) return out;
    term_width /= 256;
  }
  throw Indeterminate("power norm enclosure did not converge");
}

// Sign of sum_i v_i^{r/s} - 1. Equality forces every term to be rational, which is
// detected exactly; otherwise refinement separates the sum from 1.
BallPosition power_sum_against_one(const std::vector<Rational>& values, unsigned long r, unsigned long s) {
  Rational term_width(1, 1 << 10);
  for (unsigned bits = 10; bits < kMaxRefinementBits; bits += 16) {
    ScalarBound sum = ScalarBound::exact(0);
    bool all_exact = true;
    for (const Rational& v : values) {
      ScalarBound term = root_enclosure(rational_pow(v, r), s, term_width);
      all_exact = all_exact && term.is_exact();
      sum = sum + term;
    }
    if (all_exact) {
      const int c = cmp(sum.lower, 1);
      return c < 0 ? BallPosition::Inside : (c == 0 ? BallPosition::Boundary : BallPosition::Outside);
    }
    if (sum.upper < 1) return BallPosition::Inside;
    if (sum.lower > 1) return BallPosition::Outside;
    term_width /= 65536;
  }
  throw Indeterminate("ball comparison unresolved at the precision cap");
}

std::vector<Rational> magnitudes(const SparseVector& x) {
  std::vector<Rational> out;
  for (const auto& [i, v] : x) out.push_back(abs(v));
  return out;
}

// Per-group reduction: max (for the norm) or sum (for the dual norm) of |x| within each group.
std::vector<Rational> group_reduce(const BaseSpaceId& space, const SparseVector& x, bool use_sum) {
  std::map<Index, Rational> by_group;
  for (const auto& [i, v] : x) {
    Rational& slot = by_group[space.group_of(i)];
    slot = use_sum ? Rational(slot + abs(v)) : std::max<Rational>(slot, abs(v));
  }
  std::vector<Rational> out;
  for (auto& [g, v] : by_group) out.push_back(v);
  return out;
}

BallPosition compare_rational_with_one(const Rational& q) {
  const int c = cmp(q, 1);
  return c < 0 ? BallPosition::Inside : (c == 0 ? BallPosition::Boundary : BallPosition::Outside);
}

BallMaximum tsirelson_dual(const SparseVector& f, const Rational& precision) {
  CuttingPlaneOptions options;
  options.precision = precision;
  options.max_iterations = 20000;
  return maximize_over_ball(
      f,
      [](const SparseVector& x) {
        TsirelsonNorm n = tsirelson_norm(x);
        return Separation{n.value, n.witness};
      },
      options);
}

}  // namespace

BaseSpaceId BaseSpaceId::lp(const Rational& p) {
  check_exponent(p);
  BaseSpaceId id;
  id.kind = SpaceKind::Lp;
  id.p_num = p.get_num().get_ui();
  id.p_den = p.get_den().get_ui();
  return id;
}

BaseSpaceId BaseSpaceId::c0() {
  BaseSpaceId id;
  id.kind = SpaceKind::C0;
  return id;
}

BaseSpaceId BaseSpaceId::c0sum_lp(const Rational& p, std::vector<Index> group_sizes) {
  check_exponent(p);
  if (group_sizes.empty()) throw InvalidArgument("c0sum-lp needs at least one group size");
  for (Index g : group_sizes) {
    if (g < 1) throw InvalidArgument("c0sum-lp group sizes must be positive");
  }
  BaseSpaceId id;
  id.kind = SpaceKind::C0SumLp;
  id.p_num = p.get_num().get_ui();
  id.p_den = p.get_den().get_ui();
  id.group_sizes = std::move(group_sizes);
  return id;
}

BaseSpaceId BaseSpaceId::tsirelson() {
  BaseSpaceId id;
  id.kind = SpaceKind::Tsirelson;
  return id;
}

Index BaseSpaceId::group_of(Index coordinate) const {
  Index start = 1;
  Index group = 0;
  for (Index size : group_sizes) {
    if (coordinate < start + size) return group;
    start += size;
    ++group;
  }
  const Index last = group_sizes.back();
  return group + (coordinate - start) / last;
}

BaseSpaceId parse_space(std::string_view text) {
  const std::string s(text);
  if (s == "c0") return BaseSpaceId::c0();
  if (s == "tsirelson") return BaseSpaceId::tsirelson();
  if (s.rfind("lp:", 0) == 0) return BaseSpaceId::lp(parse_rational(s.substr(3)));
  if (s.rfind("c0sum-lp:", 0) == 0) {
    const std::string rest = s.substr(9);
    const auto colon = rest.find(':');
    if (colon == std::string::npos || rest.compare(colon + 1, 7, "blocks=") != 0)
      throw ParseError("expected c0sum-lp:<p>:blocks=<sizes>");
    std::vector<Index> sizes;
    std::string list = rest.substr(colon + 8);
    std::size_t pos = 0;
    while (pos <= list.size()) {
      const auto comma = list.find(',', pos);
      const std::string item = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        sizes.push_back(std::stoll(item));
      } catch (const std::exception&) {
        throw ParseError("bad group size '" + item + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return BaseSpaceId::c0sum_lp(parse_rational(rest.substr(0, colon)), std::move(sizes));
  }
  throw ParseError("unknown space id '" + s + "'");
}

std::string format_space(const BaseSpaceId& space) {
  switch (space.kind) {
    case SpaceKind::Lp:
      return "lp:" + (space.p_den == 1 ? std::to_string(space.p_num)
                                       : std::to_string(space.p_num) + "/" + std::to_string(space.p_den));
    case SpaceKind::C0:
      return "c0";
    case SpaceKind::C0SumLp: {
      std::string out = "c0sum-lp:" + (space.p_den == 1 ? std::to_string(space.p_num)
                                                        : std::to_string(space.p_num) + "/" +
                                                              std::to_string(space.p_den));
      out += ":blocks=";
      for (std::size_t i = 0; i < space.group_sizes.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(space.group_sizes[i]);
      }
      return out;
    }
    case SpaceKind::Tsirelson:
      return "tsirelson";
    case SpaceKind::Unset:
      break;
  }
  throw InvalidArgument("base space id has no kind");
}

std::string to_string(BallPosition position) {
  switch (position) {
    case BallPosition::Inside:
      return "Inside";
    case BallPosition::Boundary:
      return "Boundary";
    case BallPosition::Outside:
      return "Outside";
  }
  return "?";
}

ScalarBound norm(const BaseSpaceId& space, const SparseVector& x, const Rational& precision) {
  check_kind(space);
  if (precision <= 0) throw InvalidArgument("precision must be positive");
  switch (space.kind) {
    case SpaceKind::Lp:
      return power_norm(magnitudes(x), space.p_num, space.p_den, precision);
    case SpaceKind::C0:
      return ScalarBound::exact(x.sup_norm());
    case SpaceKind::C0SumLp:
      return power_norm(group_reduce(space, x, false), space.p_num, space.p_den, precision);
    case SpaceKind::Tsirelson:
      return ScalarBound::exact(tsirelson_norm(x).value);
    case SpaceKind::Unset:
      break;
  }
  throw InvalidArgument("base space id has no kind");
}

BallPosition ball_member(const BaseSpaceId& space, const SparseVector& x) {
  check_kind(space);
  switch (space.kind) {
    case SpaceKind::Lp:
      return power_sum_against_one(magnitudes(x), space.p_num, space.p_den);
    case SpaceKind::C0:
      return compare_rational_with_one(x.sup_norm());
    case SpaceKind::C0SumLp:
      return power_sum_against_one(group_reduce(space, x, false), space.p_num, space.p_den);
    case SpaceKind::Tsirelson:
      return compare_rational_with_one(tsirelson_norm(x).value);
    case SpaceKind::Unset:
      break;
  }
  throw InvalidArgument("base space id has no kind");
}

ScalarBound dual_norm(const BaseSpaceId& space, const SparseVector& f, const Rational& precision) {
  check_kind(space);
  if (precision <= 0) throw InvalidArgument("precision must be positive");
  switch (space.kind) {
    case SpaceKind::Lp: {
      auto [qn, qd] = conjugate(space.p_num, space.p_den);
      return power_norm(magnitudes(f), qn, qd, precision);
    }
    case SpaceKind::C0:
      return ScalarBound::exact(f.l1_norm());
    case SpaceKind::C0SumLp: {
      auto [qn, qd] = conjugate(space.p_num, space.p_den);
      return power_norm(group_reduce(space, f, true), qn, qd, precision);
    }
    case SpaceKind::Tsirelson:
      return tsirelson_dual(f, precision).value;
    case SpaceKind::Unset:
      break;
  }
  throw InvalidArgument("base space id has no kind");
}

BallPosition dual_ball_member(const BaseSpaceId& space, const SparseVector& f) {
  check_kind(space);
  switch (space.kind) {
    case SpaceKind::Lp: {
      auto [qn, qd] = conjugate(space.p_num, space.p_den);
      return power_sum_against_one(magnitudes(f), qn, qd);
    }
    case SpaceKind::C0:
      return compare_rational_with_one(f.l1_norm());
    case SpaceKind::C0SumLp: {
      auto [qn, qd] = conjugate(space.p_num, space.p_den);
      return power_sum_against_one(group_reduce(space, f, true), qn, qd);
    }
    case SpaceKind::Tsirelson: {
      // precision 0: run the cutting-plane loop to the exact optimum
      BallMaximum m = tsirelson_dual(f, Rational(0));
      return compare_rational_with_one(m.value.upper);
    }
    case SpaceKind::Unset:
      break;
  }
  throw InvalidArgument("base space id has no kind");
}

Rational phi_precision() { return decimal_precision(15); }

PhiValue phi(const BaseSpaceId& space, Index k, Index support_budget) {
  check_kind(space);
  if (k < 1) throw InvalidArgument("phi is defined for k >= 1");
  if (support_budget < k) throw InvalidArgument("support budget too small to place k disjoint blocks");
  PhiValue out;
  switch (space.kind) {
    case SpaceKind::Lp:
    case SpaceKind::C0SumLp: {
      // k disjoint unit vectors give k^{1/p}; the p-sum bound gives <=.
      out.exact = Surd{rational_pow(Rational(k), space.p_den), space.p_num};
      out.bound = out.exact->enclose(phi_precision());
      return out;
    }
    case SpaceKind::C0:
      out.exact = Surd::of(1);
      out.bound = ScalarBound::exact(1);
      return out;
    case SpaceKind::Tsirelson: {
      // k unit vectors at the top of the budget window; the upper bound k is the triangle inequality.
      Rational lower = 1;
      if (k <= 14) {
        SparseVector sum;
        for (Index i = support_budget - k + 1; i <= support_budget; ++i) sum.set(i, 1);
        lower = tsirelson_norm(sum).value;
      } else if (support_budget - k + 1 >= k) {
        lower = ratio(k, 2);
      }
      out.bound = {lower, Rational(k)};
      out.tight = lower == k;
      return out;
    }
    case SpaceKind::Unset:
      break;
  }
  throw InvalidArgument("base space id has no kind");
}

bool verify_submultiplicative(const BaseSpaceId& space, Index m, Index n) {
  if (m < 1 || n < 1) throw InvalidArgument("submultiplicativity is checked for m, n >= 1");
  const Index budget = 4 * m * n;
  PhiValue whole = phi(space, m * n, budget);
  PhiValue left = phi(space, m, budget);
  PhiValue right = phi(space, n, budget);
  if (whole.exact && left.exact && right.exact) return compare(*whole.exact, *left.exact * *right.exact) <= 0;
  if (whole.bound.upper <= left.bound.lower * right.bound.lower) return true;
  if (whole.bound.lower > left.bound.upper * right.bound.upper) return false;
  throw Indeterminate("phi enclosures overlap for (" + std::to_string(m) + ", " + std::to_string(n) + ")");
}

}  // namespace isopoly
