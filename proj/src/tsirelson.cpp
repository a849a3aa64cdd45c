#include "isopoly/tsirelson.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "isopoly/errors.hpp"

namespace isopoly {

namespace {

constexpr std::size_t kMaxSupport = 40;

class NormCache {
 public:
  bool lookup(const std::string& key, TsirelsonNorm& out) {
    std::lock_guard lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    out = it->second;
    return true;
  }
  // First writer wins; later writers computed the same value.
  TsirelsonNorm insert(const std::string& key, TsirelsonNorm value) {
    std::lock_guard lock(mutex_);
    return map_.try_emplace(key, std::move(value)).first->second;
  }
  std::size_t size() {
    std::lock_guard lock(mutex_);
    return map_.size();
  }
  void clear() {
    std::lock_guard lock(mutex_);
    map_.clear();
  }

 private:
  std::mutex mutex_;
  std::unordered_map<std::string, TsirelsonNorm> map_;
};

NormCache& cache() {
  static NormCache instance;
  return instance;
}

// Interval dynamic program over the sorted support points of a non-negative vector.
class IntervalProgram {
 public:
  IntervalProgram(std::vector<Index> coords, std::vector<Rational> values)
      : coords_(std::move(coords)), values_(std::move(values)), m_(coords_.size()) {
    norm_.assign(m_, std::vector<Rational>(m_));
    argmax_point_.assign(m_, std::vector<std::size_t>(m_));
    split_start_.assign(m_, std::vector<std::size_t>(m_, kNone));
    best_split_.assign(m_, std::vector<Rational>(m_));
    split_cuts_.assign(m_, std::vector<std::vector<std::size_t>>(m_));
    run();
  }

  const Rational& value() const { return norm_[0][m_ - 1]; }

  SparseVector witness() const {
    SparseVector out;
    append_witness(0, m_ - 1, Rational(1), out);
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void run() {
    for (std::size_t len = 1; len <= m_; ++len) {
      for (std::size_t a = 0; a + len <= m_; ++a) {
        const std::size_t b = a + len - 1;
        compute_split(a, b);
        std::size_t arg = a;
        for (std::size_t i = a + 1; i <= b; ++i) {
          if (values_[i] > values_[arg]) arg = i;
        }
        argmax_point_[a][b] = arg;
        Rational best = values_[arg];
        std::size_t best_t = kNone;
        for (std::size_t t = a; t <= b; ++t) {
          if (split_cuts_[t][b].empty()) continue;
          Rational candidate = best_split_[t][b] / 2;
          if (candidate > best) {
            best = candidate;
            best_t = t;
          }
        }
        norm_[a][b] = best;
        split_start_[a][b] = best_t;
      }
    }
  }

  // Best sum of norms over partitions of points [t..b] into 2..K consecutive groups,
  // K = coords_[t] (the first group may start at coordinate coords_[t]).
  void compute_split(std::size_t t, std::size_t b) {
    const std::size_t len = b - t + 1;
    if (len < 2 || coords_[t] < 2) return;
    const std::size_t max_groups = std::min<std::size_t>(len, static_cast<std::size_t>(coords_[t]));
    // best[j][i]: best sum splitting points [t .. t+i-1] into j groups.
    std::vector<std::vector<Rational>> best(max_groups + 1, std::vector<Rational>(len + 1));
    std::vector<std::vector<std::size_t>> prev(max_groups + 1, std::vector<std::size_t>(len + 1, kNone));
    std::vector<std::vector<bool>> reachable(max_groups + 1, std::vector<bool>(len + 1, false));
    reachable[0][0] = true;
    for (std::size_t j = 1; j <= max_groups; ++j) {
      for (std::size_t i = j; i <= len; ++i) {
        for (std::size_t s = j - 1; s < i; ++s) {
          if (!reachable[j - 1][s]) continue;
          if (j == 1 && s != 0) continue;
          // group covers points [t+s .. t+i-1]; a single group spanning everything is excluded
          if (j == 1 && i == len) continue;
          Rational candidate = best[j - 1][s] + norm_[t + s][t + i - 1];
          if (!reachable[j][i] || candidate > best[j][i]) {
            best[j][i] = candidate;
            prev[j][i] = s;
            reachable[j][i] = true;
          }
        }
      }
    }
    std::size_t best_j = 0;
    for (std::size_t j = 2; j <= max_groups; ++j) {
      if (reachable[j][len] && (best_j == 0 || best[j][len] > best[best_j][len])) best_j = j;
    }
    if (best_j == 0) return;
    best_split_[t][b] = best[best_j][len];
    std::vector<std::size_t> starts;
    for (std::size_t j = best_j, i = len; j > 0; --j) {
      const std::size_t s = prev[j][i];
      starts.push_back(t + s);
      i = s;
    }
    std::reverse(starts.begin(), starts.end());
    split_cuts_[t][b] = std::move(starts);
  }

  void append_witness(std::size_t a, std::size_t b, const Rational& factor, SparseVector& out) const {
    const std::size_t t = split_start_[a][b];
    if (t == kNone) {
      out.add(coords_[argmax_point_[a][b]], factor);
      return;
    }
    const auto& starts = split_cuts_[t][b];
    for (std::size_t g = 0; g < starts.size(); ++g) {
      const std::size_t end = g + 1 < starts.size() ? starts[g + 1] - 1 : b;
      append_witness(starts[g], end, factor / 2, out);
    }
  }

  std::vector<Index> coords_;
  std::vector<Rational> values_;
  std::size_t m_;
  std::vector<std::vector<Rational>> norm_;
  std::vector<std::vector<std::size_t>> argmax_point_;
  std::vector<std::vector<std::size_t>> split_start_;
  std::vector<std::vector<Rational>> best_split_;
  std::vector<std::vector<std::vector<std::size_t>>> split_cuts_;
};

SparseVector apply_signs(const SparseVector& functional, const SparseVector& x) {
  SparseVector out;
  for (const auto& [i, v] : functional) out.set(i, sgn(x.get(i)) < 0 ? Rational(-v) : v);
  return out;
}

// Every composition of points[t..] into k consecutive groups, k <= coordinate of the first point.
void for_each_admissible_split(const std::vector<Index>& coords, std::size_t t,
                               const std::function<void(const std::vector<std::vector<Index>>&)>& visit) {
  const std::size_t len = coords.size() - t;
  if (len == 0) return;
  const std::size_t cuts = len - 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << cuts); ++mask) {
    std::vector<std::vector<Index>> groups{{coords[t]}};
    for (std::size_t i = 1; i < len; ++i) {
      if (mask & (std::size_t{1} << (i - 1))) groups.emplace_back();
      groups.back().push_back(coords[t + i]);
    }
    if (static_cast<Index>(groups.size()) <= coords[t]) visit(groups);
  }
}

}  // namespace

TsirelsonNorm tsirelson_norm(const SparseVector& x) {
  if (x.empty()) return {Rational(0), SparseVector{}};
  if (x.size() > kMaxSupport) throw BudgetExceeded("Tsirelson norm evaluation limited to supports of size 40");
  const SparseVector magnitude = x.abs();
  const std::string key = format_vector(magnitude);
  TsirelsonNorm cached;
  if (!cache().lookup(key, cached)) {
    std::vector<Index> coords;
    std::vector<Rational> values;
    for (const auto& [i, v] : magnitude) {
      coords.push_back(i);
      values.push_back(v);
    }
    IntervalProgram program(std::move(coords), std::move(values));
    cached = cache().insert(key, TsirelsonNorm{program.value(), program.witness()});
  }
  return {cached.value, apply_signs(cached.witness, x)};
}

Rational tsirelson_recursion_step(const SparseVector& x) {
  const SparseVector magnitude = x.abs();
  Rational best = magnitude.sup_norm();
  const std::vector<Index> coords = magnitude.support();
  if (coords.size() > 16) throw BudgetExceeded("recursion step enumerates compositions; support too large");
  for (std::size_t t = 0; t < coords.size(); ++t) {
    for_each_admissible_split(coords, t, [&](const std::vector<std::vector<Index>>& groups) {
      Rational sum = 0;
      for (const auto& g : groups) sum += tsirelson_norm(magnitude.restricted_to(g)).value;
      best = std::max<Rational>(best, sum / 2);
    });
  }
  return best;
}

std::size_t tsirelson_cache_size() { return cache().size(); }
void clear_tsirelson_cache() { cache().clear(); }

}  // namespace isopoly
