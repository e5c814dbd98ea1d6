#include <explore/atsp.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace explore {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct XorShift64 {
  std::uint64_t s;
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  std::uint64_t bounded(std::uint64_t n) { return next() % n; }
};
}  // namespace

double tour_cost(const CostMatrix& m, const std::vector<int>& order) {
  double total = 0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) total += m.at(order[k], order[k + 1]);
  return total;
}

TourResult solve_atsp_exact(const CostMatrix& m) {
  const int n = m.n;
  if (n <= 1) return {{0}, 0.0};
  const int k = n - 1;  // nodes 1..n-1
  if (k > 20) throw std::invalid_argument("solve_atsp_exact: instance too large");

  const std::size_t subsets = std::size_t{1} << k;
  std::vector<double> dp(subsets * k, kInf);
  std::vector<std::int8_t> from(subsets * k, -1);
  auto idx = [&](std::size_t S, int j) { return S * k + j; };

  for (int j = 0; j < k; ++j) dp[idx(std::size_t{1} << j, j)] = m.at(0, j + 1);

  for (std::size_t S = 1; S < subsets; ++S)
    for (int j = 0; j < k; ++j) {
      if (!(S >> j & 1)) continue;
      const double base = dp[idx(S, j)];
      if (base == kInf) continue;
      for (int x = 0; x < k; ++x) {
        if (S >> x & 1) continue;
        const double cand = base + m.at(j + 1, x + 1);
        const std::size_t t = idx(S | (std::size_t{1} << x), x);
        if (cand < dp[t]) {
          dp[t] = cand;
          from[t] = static_cast<std::int8_t>(j);
        }
      }
    }

  const std::size_t full = subsets - 1;
  int best_end = -1;
  double best = kInf;
  for (int j = 0; j < k; ++j)
    if (dp[idx(full, j)] < best) {
      best = dp[idx(full, j)];
      best_end = j;
    }

  TourResult result;
  if (best_end < 0) {  // nothing reachable; fall back to index order
    result.order.resize(n);
    for (int i = 0; i < n; ++i) result.order[i] = i;
    result.cost = tour_cost(m, result.order);
    return result;
  }

  std::vector<int> rev;
  std::size_t S = full;
  int j = best_end;
  while (j >= 0) {
    rev.push_back(j + 1);
    const int p = from[idx(S, j)];
    S &= ~(std::size_t{1} << j);
    j = p;
  }
  result.order.push_back(0);
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) result.order.push_back(*it);
  result.cost = best;
  return result;
}

namespace {

// Local search: or-opt relocation of 1..3-node segments plus pairwise node
// swaps, first-improvement passes until a fixpoint. Segment relocation never
// reverses, so the moves stay sound on asymmetric matrices. Candidates are
// costed by full recompute; instances at this scale are small.
void local_search(const CostMatrix& m, std::vector<int>& order, double& cost) {
  const int n = static_cast<int>(order.size());
  if (n < 3) return;

  std::vector<int> cand;
  cand.reserve(order.size());
  bool improved = true;
  while (improved) {
    improved = false;

    for (int len = 1; len <= 3 && !improved; ++len)
      for (int i = 1; i + len <= n && !improved; ++i)
        for (int p = 1; p <= n - len && !improved; ++p) {
          if (p == i) continue;
          cand.assign(order.begin(), order.end());
          std::vector<int> seg(cand.begin() + i, cand.begin() + i + len);
          cand.erase(cand.begin() + i, cand.begin() + i + len);
          cand.insert(cand.begin() + p, seg.begin(), seg.end());  // p indexes the reduced array
          const double c = tour_cost(m, cand);
          if (c < cost - 1e-12) {
            order = cand;
            cost = c;
            improved = true;
          }
        }

    if (improved) continue;
    for (int i = 1; i < n && !improved; ++i)
      for (int j = i + 1; j < n && !improved; ++j) {
        std::swap(order[i], order[j]);
        const double c = tour_cost(m, order);
        if (c < cost - 1e-12) {
          cost = c;
          improved = true;
        } else {
          std::swap(order[i], order[j]);
        }
      }
  }
}

std::vector<int> nearest_neighbor(const CostMatrix& m, int forced_first) {
  const int n = m.n;
  std::vector<int> order{0};
  std::vector<std::uint8_t> used(n, 0);
  used[0] = 1;
  if (forced_first > 0) {
    order.push_back(forced_first);
    used[forced_first] = 1;
  }
  while (static_cast<int>(order.size()) < n) {
    const int cur = order.back();
    int best = -1;
    double best_c = kInf;
    for (int j = 1; j < n; ++j) {
      if (used[j]) continue;
      const double c = m.at(cur, j);
      if (best < 0 || c < best_c) {
        best = j;
        best_c = c;
      }
    }
    order.push_back(best);
    used[best] = 1;
  }
  return order;
}

}  // namespace

TourResult solve_atsp_heuristic(const CostMatrix& m) {
  const int n = m.n;
  if (n <= 2) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    return {order, tour_cost(m, order)};
  }

  // Multistart: plain NN plus NN forced through each of the cheapest first
  // hops from the start node.
  std::vector<int> firsts{0};
  {
    std::vector<std::pair<double, int>> ranked;
    for (int j = 1; j < n; ++j) ranked.push_back({m.at(0, j), j});
    std::sort(ranked.begin(), ranked.end());
    for (int k = 0; k < std::min<int>(5, static_cast<int>(ranked.size())); ++k)
      firsts.push_back(ranked[k].second);
  }

  TourResult best;
  best.cost = kInf;
  for (int f : firsts) {
    std::vector<int> order = nearest_neighbor(m, f == 0 ? -1 : f);
    double cost = tour_cost(m, order);
    local_search(m, order, cost);
    if (cost < best.cost) best = {order, cost};
  }

  XorShift64 rng{0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(n)};
  const int rounds = n <= 12 ? 40 : 15;
  for (int round = 0; round < rounds; ++round) {
    std::vector<int> order = best.order;
    if (n >= 5) {
      // Double bridge on the suffix after node 0.
      const int len = n - 1;
      int cuts[3];
      cuts[0] = 1 + static_cast<int>(rng.bounded(len - 2));
      cuts[1] = cuts[0] + 1 + static_cast<int>(rng.bounded(n - cuts[0] - 1));
      cuts[2] = cuts[1] + (cuts[1] + 1 < n ? 1 + static_cast<int>(rng.bounded(n - cuts[1] - 1)) : 0);
      if (cuts[0] < cuts[1] && cuts[1] < cuts[2] && cuts[2] < n) {
        std::vector<int> next(order.begin(), order.begin() + cuts[0]);
        next.insert(next.end(), order.begin() + cuts[1], order.begin() + cuts[2]);
        next.insert(next.end(), order.begin() + cuts[0], order.begin() + cuts[1]);
        next.insert(next.end(), order.begin() + cuts[2], order.end());
        order = std::move(next);
      }
    }
    double cost = tour_cost(m, order);
    local_search(m, order, cost);
    if (cost < best.cost) best = {order, cost};
  }
  return best;
}

TourResult solve_atsp(const CostMatrix& m, int exact_threshold) {
  if (m.n <= exact_threshold) return solve_atsp_exact(m);
  return solve_atsp_heuristic(m);
}

void write_tsplib_atsp(std::ostream& os, const CostMatrix& m, const std::string& name) {
  os << "NAME: " << name << "\nTYPE: ATSP\nDIMENSION: " << m.n
     << "\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n";
  // Scale to milliseconds; unreachable entries become a large sentinel.
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      const double c = m.at(i, j);
      const long v = std::isfinite(c) ? std::lround(c * 1000.0) : 1000000000L;
      os << v << (j + 1 == m.n ? '\n' : ' ');
    }
  }
  os << "EOF\n";
}

}  // namespace explore
