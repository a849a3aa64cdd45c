#include "isopoly/construction.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "isopoly/errors.hpp"

namespace isopoly {

BlockSystem::BlockSystem(std::vector<Block> blocks, Index sizing_factor)
    : blocks_(std::move(blocks)), sizing_factor_(sizing_factor) {
  if (sizing_factor_ < 1) throw InvalidArgument("sizing factor must be positive");
  for (std::size_t n = 0; n < blocks_.size(); ++n) {
    if (blocks_[n].start < 1 || blocks_[n].length < 1) throw InvalidArgument("blocks must be non-empty");
    if (n > 0 && blocks_[n - 1].end() >= blocks_[n].start) throw InvalidArgument("blocks must be successive");
  }
}

const Block& BlockSystem::block(int n) const {
  if (n < 1 || n > depth()) throw InvalidArgument("block index " + std::to_string(n) + " not materialized");
  return blocks_[static_cast<std::size_t>(n - 1)];
}

std::optional<int> BlockSystem::block_of(Index j) const {
  auto it = std::upper_bound(blocks_.begin(), blocks_.end(), j,
                             [](Index value, const Block& b) { return value < b.start; });
  if (it == blocks_.begin()) return std::nullopt;
  --it;
  if (!it->contains(j)) return std::nullopt;
  return static_cast<int>(it - blocks_.begin()) + 1;
}

Index BlockSystem::position(Index j) const {
  auto n = block_of(j);
  if (!n) throw InvalidArgument("coordinate " + std::to_string(j) + " lies in no block");
  return j - block(*n).start + 1;
}

Rational BlockSystem::materialized_mass() const {
  Rational sum = 0;
  for (const Block& b : blocks_) sum += Rational(1, b.length);
  return sum;
}

Rational BlockSystem::tail_mass() const {
  // sum_{n > N} 1 / (c 2^{n+1}) = 1 / (c 2^{N+1})
  return Rational(Integer(1), Integer(sizing_factor_) * (Integer(1) << static_cast<unsigned long>(depth() + 1)));
}

SparseVector BlockSystem::segment_indicator(int n, Index length) const {
  const Block& b = block(n);
  if (length < 0 || length > b.length) throw InvalidArgument("segment longer than its block");
  SparseVector out;
  for (Index j = b.start; j < b.start + length; ++j) out.set(j, 1);
  return out;
}

Rational ParameterLedger::epsilon(int n) const { return Rational(Integer(1), integer_pow(Integer(k0), n)); }

Rational ParameterLedger::delta_at(int n) const { return rational_pow(lambda, static_cast<unsigned long>(n)); }

K0Selection select_k0(const BaseSpaceId& space, Index k_max) {
  for (Index k = 2; k <= k_max; ++k) {
    PhiValue value = phi(space, k, 4 * k);
    const bool certified = value.exact ? compare(*value.exact, Surd::of(Rational(k))) < 0
                                       : value.bound.upper < k;
    if (certified && value.bound.upper < k) return {k, value};
  }
  throw NoUpperEstimateWitness("no k <= " + std::to_string(k_max) + " certifies phi(k) < k for " +
                               format_space(space) + "; the space may fail the upper p-estimate");
}

ParameterLedger build_ledger(const BaseSpaceId& space, Index k0, const PhiValue& phi_k0,
                             const LambdaRule& lambda_rule, int depth, const Rational& block_mass_target) {
  if (depth < 1) throw InvalidArgument("ledger depth must be at least 1");
  if (k0 < 2) throw InvalidArgument("k0 must be at least 2");
  if (!(phi_k0.bound.upper < k0)) throw InvalidArgument("phi(k0) is not certified below k0");
  if (!(block_mass_target > 0 && block_mass_target < 1)) throw InvalidArgument("block mass target must lie in (0, 1)");

  const Rational lo = phi_k0.bound.upper / k0;
  Rational lambda;
  if (lambda_rule.value) {
    lambda = *lambda_rule.value;
  } else {
    const Rational mid = (lo + 1) / 2;
    const Rational half_window = (1 - lo) / 16;
    lambda = simplest_rational_between(mid - half_window, mid + half_window);
  }
  if (!(lo < lambda && lambda < 1)) {
    throw InvalidArgument("lambda = " + format_rational(lambda) + " outside (phi(k0)/k0, 1) = (" +
                          format_rational(lo) + ", 1)");
  }
  if (phi_k0.exact && compare(Surd::of(lambda * k0), *phi_k0.exact) <= 0) {
    throw InvalidArgument("lambda * k0 does not exceed phi(k0)");
  }

  ParameterLedger ledger;
  ledger.space = space;
  ledger.k0 = k0;
  ledger.phi_k0 = phi_k0;
  ledger.lambda = lambda;
  ledger.depth = depth;
  ledger.block_mass_target = block_mass_target;
  for (int n = 0; n <= depth; ++n) {
    ledger.eps.push_back(ledger.epsilon(n));
    ledger.delta.push_back(ledger.delta_at(n));
  }
  return ledger;
}

BlockSystem build_blocks(const ParameterLedger& ledger, const SizingRule& rule) {
  // sum_{n>=1} 1/(c 2^{n+1}) = 1/(2c) must stay within the mass target.
  Index factor = rule.factor.value_or(0);
  if (factor == 0) {
    factor = ceil_of(Rational(1) / (2 * ledger.block_mass_target)).get_si();
    factor = std::max<Index>(factor, 1);
  }
  if (Rational(1, 2 * factor) > ledger.block_mass_target) {
    throw InvalidArgument("sizing factor " + std::to_string(factor) + " breaks the block mass target");
  }
  std::vector<Block> blocks;
  Index previous_end = 0;
  for (int n = 1; n <= ledger.depth; ++n) {
    // 1 + 1/delta_{n-1} < eps_n * min F_n
    const Rational threshold = (1 + 1 / ledger.delta_at(n - 1)) / ledger.epsilon(n);
    Integer least = floor_of(threshold) + 1;
    Integer length = Integer(factor) << static_cast<unsigned long>(n + 1);
    Integer start = std::max<Integer>(least, Integer(previous_end + 1));
    if (start + length - 1 > Integer(rule.coordinate_cap)) {
      throw OverflowBudget("block F_" + std::to_string(n) + " would exceed coordinate cap " +
                           std::to_string(rule.coordinate_cap));
    }
    blocks.push_back({start.get_si(), length.get_si()});
    previous_end = blocks.back().end();
  }
  BlockSystem system(std::move(blocks), factor);
  if (std::string why = block_violation(ledger, system); !why.empty()) throw Error("block builder bug: " + why);
  return system;
}

std::string block_violation(const ParameterLedger& ledger, const BlockSystem& blocks) {
  if (blocks.depth() != ledger.depth) return "block count differs from ledger depth";
  Rational mass = 0;
  for (int n = 1; n <= blocks.depth(); ++n) {
    const Block& b = blocks.block(n);
    if (b.start < 1 || b.length < 1) return "F_" + std::to_string(n) + " is empty";
    if (n > 1 && !(blocks.block(n - 1).end() < b.start)) return "max F_" + std::to_string(n - 1) + " >= min F_" + std::to_string(n);
    mass += Rational(1, b.length);
    const Rational lhs = 1 + 1 / ledger.delta_at(n - 1);
    const Rational rhs = ledger.epsilon(n) * b.start;
    if (!(lhs < rhs)) {
      return "1 + 1/delta_" + std::to_string(n - 1) + " = " + format_rational(lhs) + " is not < eps_" +
             std::to_string(n) + " * min F_" + std::to_string(n) + " = " + format_rational(rhs);
    }
  }
  const Rational total = mass + blocks.tail_mass();
  if (!(total <= ledger.block_mass_target)) {
    return "sum 1/|F_n| <= " + format_rational(total) + " exceeds target " + format_rational(ledger.block_mass_target);
  }
  if (!(total < 1)) return "sum 1/|F_n| is not < 1";
  return {};
}

Rational constant_A(const BlockSystem& blocks) {
  const Rational mass = blocks.materialized_mass() + blocks.tail_mass();
  if (!(mass < 1)) throw InvalidArgument("blocks violate sum 1/|F_n| < 1");
  return (1 - mass) / 2;
}

Rational level_bound_B(const ParameterLedger& ledger, int n) {
  const Rational& phi_bar = ledger.phi_upper();
  const unsigned long e = static_cast<unsigned long>(n);
  return ledger.k0 * phi_bar *
         (rational_pow(phi_bar / ledger.k0, e) + rational_pow(phi_bar / (ledger.lambda * ledger.k0), e));
}

Rational constant_C(const ParameterLedger& ledger) {
  const Rational k0(ledger.k0);
  const Rational& phi_bar = ledger.phi_upper();
  const Rational ratio_small = phi_bar / k0;
  const Rational ratio_large = phi_bar / (ledger.lambda * k0);
  if (!(ratio_large < 1)) {
    throw DivergenceGuard("phi(k0)/(lambda k0) = " + format_rational(ratio_large) + " is not < 1");
  }
  if (!(ledger.lambda < 1)) throw DivergenceGuard("lambda must be < 1");
  const Rational arithmetic_geometric = k0 / ((k0 - 1) * (k0 - 1));  // sum n (1/k0)^n
  const Rational geometric = 2 * k0 / (1 - ledger.lambda);            // sum 2 k0 lambda^n
  const Rational level_terms = k0 * phi_bar * (1 / (1 - ratio_small) + 1 / (1 - ratio_large));
  return arithmetic_geometric + geometric + level_terms;
}

namespace {

std::string join_rationals(const std::vector<Rational>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_rational(values[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<Rational> parse_rationals(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_rational(item));
  return out;
}

Index parse_index(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    Index v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer for '" + key + "': '" + s + "'");
  }
}

}  // namespace

std::string serialize_parameters(const ParameterLedger& ledger, const BlockSystem& blocks) {
  std::ostringstream out;
  out << "# isopoly parameter ledger\n";
  out << "space = " << format_space(ledger.space) << "\n";
  out << "k0 = " << ledger.k0 << "\n";
  out << "phi_k0 = " << format_rational(ledger.phi_k0.bound.lower) << "," << format_rational(ledger.phi_k0.bound.upper)
      << "\n";
  out << "phi_k0_tight = " << (ledger.phi_k0.tight ? 1 : 0) << "\n";
  if (ledger.phi_k0.exact) {
    out << "phi_k0_radicand = " << format_rational(ledger.phi_k0.exact->radicand) << "\n";
    out << "phi_k0_root = " << ledger.phi_k0.exact->index << "\n";
  }
  out << "lambda = " << format_rational(ledger.lambda) << "\n";
  out << "depth = " << ledger.depth << "\n";
  out << "eps = " << join_rationals(ledger.eps) << "\n";
  out << "delta = " << join_rationals(ledger.delta) << "\n";
  out << "block_mass_target = " << format_rational(ledger.block_mass_target) << "\n";
  out << "sizing_factor = " << blocks.sizing_factor() << "\n";
  out << "blocks = ";
  for (int n = 1; n <= blocks.depth(); ++n) {
    if (n > 1) out << ',';
    out << blocks.block(n).start << '-' << blocks.block(n).end();
  }
  out << "\n";
  return out.str();
}

ParameterFile parse_parameters(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value, got '" + line + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("ledger is missing '" + key + "'");
    return it->second;
  };

  ParameterFile file;
  ParameterLedger& ledger = file.ledger;
  ledger.space = parse_space(need("space"));
  ledger.k0 = parse_index("k0", need("k0"));
  const auto phi_bounds = parse_rationals(need("phi_k0"));
  if (phi_bounds.size() != 2 || phi_bounds[0] > phi_bounds[1]) throw ParseError("phi_k0 must be 'lower,upper'");
  ledger.phi_k0.bound = {phi_bounds[0], phi_bounds[1]};
  ledger.phi_k0.tight = parse_index("phi_k0_tight", need("phi_k0_tight")) != 0;
  if (kv.contains("phi_k0_radicand")) {
    ledger.phi_k0.exact = Surd{parse_rational(kv["phi_k0_radicand"]),
                               static_cast<unsigned long>(parse_index("phi_k0_root", need("phi_k0_root")))};
  }
  ledger.lambda = parse_rational(need("lambda"));
  ledger.depth = static_cast<int>(parse_index("depth", need("depth")));
  ledger.eps = parse_rationals(need("eps"));
  ledger.delta = parse_rationals(need("delta"));
  ledger.block_mass_target = parse_rational(need("block_mass_target"));

  // Recompute the derived sequences and insist they agree with the file.
  ParameterLedger rebuilt = build_ledger(ledger.space, ledger.k0, ledger.phi_k0, LambdaRule{ledger.lambda},
                                         ledger.depth, ledger.block_mass_target);
  if (rebuilt.eps != ledger.eps || rebuilt.delta != ledger.delta) {
    throw ParseError("eps/delta sequences do not match k0 and lambda");
  }

  std::vector<Block> blocks;
  for (const auto& item : split(need("blocks"), ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) throw ParseError("blocks are written start-end");
    const Index start = parse_index("blocks", item.substr(0, dash));
    const Index end = parse_index("blocks", item.substr(dash + 1));
    blocks.push_back({start, end - start + 1});
  }
  file.blocks = BlockSystem(std::move(blocks), parse_index("sizing_factor", need("sizing_factor")));
  if (std::string why = block_violation(ledger, file.blocks); !why.empty()) throw ParseError("invalid blocks: " + why);
  return file;
}

ParameterFile load_parameters(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open parameter file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_parameters(buffer.str());
}

void save_parameters(const std::string& path, const ParameterLedger& ledger, const BlockSystem& blocks) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write parameter file '" + path + "'");
  out << serialize_parameters(ledger, blocks);
}

}  // namespace isopoly
