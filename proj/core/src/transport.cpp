// Copyright 2026 The empdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "empdist/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include "empdist/compensated.hpp"
#include "empdist/dyadic_cell.hpp"
#include "empdist/errors.hpp"

namespace empdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// One dimension

using CdfSource = std::variant<const DiscreteMeasure*, const PiecewiseLinearCdf*>;

void require_line(const DiscreteMeasure& m) {
  if (m.dim() != 1) throw InvalidArgument("w1_exact_1d needs d = 1");
}

const PiecewiseLinearCdf* require_cdf(const ReferenceMeasure& m) {
  if (m.dim() != 1) throw InvalidArgument("w1_exact_1d needs d = 1");
  return &m.cdf();  // throws CapabilityMissing
}

void add_breakpoints(const CdfSource& src, std::vector<double>& out) {
  if (const auto* dm = std::get_if<const DiscreteMeasure*>(&src)) {
    out.insert(out.end(), (*dm)->coords().begin(), (*dm)->coords().end());
  } else {
    const auto* cdf = std::get<const PiecewiseLinearCdf*>(src);
    out.insert(out.end(), cdf->knots().begin(), cdf->knots().end());
  }
}

// Values of F at the left and right ends of each open segment (bp[k], bp[k+1]).
// Atoms sit on breakpoints, so a step CDF is constant on every segment.
void segment_values(const CdfSource& src, const std::vector<double>& bp,
                    std::vector<double>& left, std::vector<double>& right) {
  const std::size_t segs = bp.size() - 1;
  left.assign(segs, 0.0);
  right.assign(segs, 0.0);
  if (const auto* dmp = std::get_if<const DiscreteMeasure*>(&src)) {
    const DiscreteMeasure& dm = **dmp;
    std::vector<std::size_t> order(dm.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return dm.coords()[a] < dm.coords()[b]; });
    CompensatedSum cum;
    std::size_t next = 0;
    for (std::size_t k = 0; k < segs; ++k) {
      while (next < order.size() && dm.coords()[order[next]] <= bp[k]) {
        cum.add(dm.weight(order[next]));
        ++next;
      }
      left[k] = right[k] = std::min(1.0, cum.value());
    }
    return;
  }
  const auto& cdf = *std::get<const PiecewiseLinearCdf*>(src);
  for (std::size_t k = 0; k < segs; ++k) {
    left[k] = cdf(bp[k]);
    right[k] = cdf(bp[k + 1]);
  }
}

double integrate_abs_difference(const CdfSource& a, const CdfSource& b) {
  std::vector<double> bp{0.0, 1.0};
  add_breakpoints(a, bp);
  add_breakpoints(b, bp);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  std::vector<double> al, ar, bl, br;
  segment_values(a, bp, al, ar);
  segment_values(b, bp, bl, br);

  CompensatedSum total;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double len = bp[k + 1] - bp[k];
    const double g0 = al[k] - bl[k];
    const double g1 = ar[k] - br[k];
    const double a0 = std::abs(g0);
    const double a1 = std::abs(g1);
    if (g0 * g1 >= 0.0) {
      total.add(0.5 * len * (a0 + a1));
    } else {
      // |g| is linear with a single root inside the segment.
      total.add(0.5 * len * (g0 * g0 + g1 * g1) / (a0 + a1));
    }
  }
  return total.value();
}

// ---------------------------------------------------------------------------
// Ground cost

struct GroundCost {
  int dim;
  Metric metric;
  double exponent;

  [[nodiscard]] double operator()(const double* x, const double* y) const {
    double r = 0.0;
    if (metric == Metric::supremum) {
      for (int i = 0; i < dim; ++i) r = std::max(r, std::abs(x[i] - y[i]));
    } else {
      for (int i = 0; i < dim; ++i) r += (x[i] - y[i]) * (x[i] - y[i]);
      r = std::sqrt(r);
    }
    return exponent == 1.0 ? r : std::pow(r, exponent);
  }
};

std::vector<double> cost_matrix(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                const GroundCost& c) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> out(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] = c(a.point(i).data(), b.point(j).data());
  }
  return out;
}

// Value of the dual solution (u, v_j = min_i c_ij - u_i); a lower bound on the
// optimum whatever u is.
double dual_value(const std::vector<double>& cost, std::size_t n, std::size_t m,
                  const std::vector<double>& u, std::span<const double> wa,
                  std::span<const double> wb) {
  long double total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<long double>(wa[i]) * u[i];
  for (std::size_t j = 0; j < m; ++j) {
    double v = kInf;
    for (std::size_t i = 0; i < n; ++i) v = std::min(v, cost[i * m + j] - u[i]);
    total += static_cast<long double>(wb[j]) * v;
  }
  return static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Hungarian method for n x n equal-weight instances.

TransportPlanSummary solve_assignment(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                      const GroundCost& gc) {
  const std::size_t n = a.size();
  const std::vector<double> cost = cost_matrix(a, b, gc);
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  long double total = 0.0L;
  for (std::size_t j = 1; j <= n; ++j) total += cost[(p[j] - 1) * n + (j - 1)];
  TransportPlanSummary out;
  out.cost = static_cast<double>(total / static_cast<long double>(n));
  out.support_size = n;
  out.feasibility_residual = 0.0;
  std::vector<double> ui(u.begin() + 1, u.end());
  out.optimality_gap =
      std::max(0.0, out.cost - dual_value(cost, n, n, ui, a.weights(), b.weights()));
  out.solver = "assignment";
  return out;
}

// ---------------------------------------------------------------------------
// Successive shortest paths with potentials on the dense bipartite graph.

TransportPlanSummary solve_transportation(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                          const GroundCost& gc) {
  constexpr double kTiny = 1e-15;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t V = n + m;
  const std::vector<double> cost = cost_matrix(a, b, gc);
  std::vector<double> flow(n * m, 0.0);
  std::vector<double> excess(a.weights().begin(), a.weights().end());
  std::vector<double> deficit(b.weights().begin(), b.weights().end());
  std::vector<double> pot(V, 0.0), dist(V);
  std::vector<std::ptrdiff_t> parent(V);
  std::vector<char> done(V);

  for (;;) {
    bool any_supply = false;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (excess[i] > kTiny) {
        dist[i] = 0.0;
        any_supply = true;
      }
    }
    if (!any_supply) break;

    std::ptrdiff_t target = -1;
    for (;;) {
      std::size_t v = V;
      double best = kInf;
      for (std::size_t w = 0; w < V; ++w) {
        if (!done[w] && dist[w] < best) {
          best = dist[w];
          v = w;
        }
      }
      if (v == V) break;
      done[v] = 1;
      if (v >= n) {
        const std::size_t j = v - n;
        if (deficit[j] > kTiny) {
          target = static_cast<std::ptrdiff_t>(v);
          break;
        }
        for (std::size_t i = 0; i < n; ++i) {
          if (done[i] || flow[i * m + j] <= 0.0) continue;
          const double rc = std::max(0.0, -cost[i * m + j] + pot[v] - pot[i]);
          if (dist[v] + rc < dist[i]) {
            dist[i] = dist[v] + rc;
            parent[i] = static_cast<std::ptrdiff_t>(v);
          }
        }
      } else {
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t w = n + j;
          if (done[w]) continue;
          const double rc = std::max(0.0, cost[v * m + j] + pot[v] - pot[w]);
          if (dist[v] + rc < dist[w]) {
            dist[w] = dist[v] + rc;
            parent[w] = static_cast<std::ptrdiff_t>(v);
          }
        }
      }
    }
    if (target < 0) break;  // remaining imbalance is rounding noise

    const double dt = dist[static_cast<std::size_t>(target)];
    for (std::size_t w = 0; w < V; ++w) pot[w] += std::min(dist[w], dt);

    auto node = static_cast<std::size_t>(target);
    double amount = deficit[node - n];
    while (parent[node] >= 0) {
      const auto prev = static_cast<std::size_t>(parent[node]);
      if (prev >= n) amount = std::min(amount, flow[node * m + (prev - n)]);
      node = prev;
    }
    amount = std::min(amount, excess[node]);
    const std::size_t root = node;

    node = static_cast<std::size_t>(target);
    while (parent[node] >= 0) {
      const auto prev = static_cast<std::size_t>(parent[node]);
      if (prev < n) {
        flow[prev * m + (node - n)] += amount;
      } else {
        double& f = flow[node * m + (prev - n)];
        f -= amount;
        if (f < kTiny) f = 0.0;
      }
      node = prev;
    }
    excess[root] -= amount;
    deficit[static_cast<std::size_t>(target) - n] -= amount;
  }

  TransportPlanSummary out;
  long double total = 0.0L;
  std::vector<CompensatedSum> row(n), col(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double f = flow[i * m + j];
      if (f <= 0.0) continue;
      ++out.support_size;
      total += static_cast<long double>(f) * cost[i * m + j];
      row[i].add(f);
      col[j].add(f);
    }
  }
  double resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(row[i].value() - a.weight(i)));
  for (std::size_t j = 0; j < m; ++j) resid = std::max(resid, std::abs(col[j].value() - b.weight(j)));
  out.cost = static_cast<double>(total);
  out.feasibility_residual = resid;
  // Supply-node potentials act as -u_i in the reduced costs c_ij + pot_i - pot_j.
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = -pot[i];
  out.optimality_gap =
      std::max(0.0, out.cost - dual_value(cost, n, m, u, a.weights(), b.weights()));
  out.solver = "transportation";
  return out;
}

// ---------------------------------------------------------------------------
// Epsilon-scaling auction for equal-weight instances of any size. The larger
// side bids (each atom split into `mult` unit persons); each atom of the
// smaller side is an object with `cap` unit slots held in a min-heap keyed by
// (price, held), so a free slot wins ties and is taken before anyone is
// evicted.
//
// Between phases assignments are kept: every object's slots are flattened to
// its cheapest price (this only raises the holders' values and leaves every
// other person's best value unchanged), and only persons violating the new
// eps-complementary slackness are released. The dual solution implied by the
// prices is checked after each phase and the loop stops once the certified gap
// is within tolerance.

class SlotHeaps {
 public:
  SlotHeaps(std::size_t objects, std::size_t cap)
      : cap_(cap), price_(objects * cap, 0.0), holder_(objects * cap, -1) {}

  [[nodiscard]] std::size_t cap() const { return cap_; }
  [[nodiscard]] double min_price(std::size_t i) const { return price_[i * cap_]; }
  [[nodiscard]] double second_price(std::size_t i) const {
    if (cap_ < 2) return kInf;
    const std::size_t b = i * cap_;
    return cap_ == 2 ? price_[b + 1] : std::min(price_[b + 1], price_[b + 2]);
  }
  [[nodiscard]] std::int64_t min_holder(std::size_t i) const { return holder_[i * cap_]; }
  [[nodiscard]] std::int64_t holder(std::size_t i, std::size_t slot) const {
    return holder_[i * cap_ + slot];
  }
  void release(std::size_t i, std::size_t slot) { holder_[i * cap_ + slot] = -1; }

  /// Gives the root slot of object i to `who` at `price` (>= the root price).
  void replace_min(std::size_t i, double price, std::int64_t who) {
    const std::size_t base = i * cap_;
    std::size_t k = 0;
    for (;;) {
      const std::size_t l = 2 * k + 1;
      if (l >= cap_) break;
      std::size_t c = l;
      if (l + 1 < cap_ && less(base + l + 1, base + l)) c = l + 1;
      // (price, held) of the new entry against the smaller child.
      const double pc = price_[base + c];
      if (pc > price || (pc == price && holder_[base + c] >= 0)) break;
      price_[base + k] = pc;
      holder_[base + k] = holder_[base + c];
      k = c;
    }
    price_[base + k] = price;
    holder_[base + k] = who;
  }

  /// Sets every slot of object i to its cheapest price and puts the free slots
  /// first; an array of equal prices ordered free-then-held is a valid heap.
  void flatten(std::size_t i) {
    const std::size_t base = i * cap_;
    const double p = price_[base];
    auto* h = holder_.data() + base;
    std::stable_partition(h, h + cap_, [](std::int64_t x) { return x < 0; });
    std::fill(price_.begin() + static_cast<std::ptrdiff_t>(base),
              price_.begin() + static_cast<std::ptrdiff_t>(base + cap_), p);
  }

 private:
  [[nodiscard]] bool less(std::size_t x, std::size_t y) const {
    return price_[x] < price_[y] ||
           (price_[x] == price_[y] && holder_[x] < 0 && holder_[y] >= 0);
  }

  std::size_t cap_;
  std::vector<double> price_;
  std::vector<std::int64_t> holder_;
};

TransportPlanSummary solve_auction(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                   const GroundCost& gc, double tolerance, Metric metric) {
  const bool a_small = a.size() <= b.size();
  const DiscreteMeasure& obj = a_small ? a : b;
  const DiscreteMeasure& per = a_small ? b : a;
  const std::size_t n_obj = obj.size();
  const std::size_t n_per = per.size();
  const std::size_t units = std::lcm(n_obj, n_per);
  if (units > (std::size_t{1} << 26)) {
    throw BudgetExceeded("auction would need more than 2^26 unit persons");
  }
  const std::size_t cap = units / n_obj;
  const std::size_t mult = units / n_per;
  const int d = obj.dim();
  const double* oc = obj.coords().data();
  const double* pc = per.coords().data();
  auto cost = [&](std::size_t i, std::size_t j) {
    return gc(oc + i * static_cast<std::size_t>(d), pc + j * static_cast<std::size_t>(d));
  };

  const double diam = metric == Metric::supremum ? 1.0 : std::sqrt(static_cast<double>(d));
  const double cmax = gc.exponent == 1.0 ? diam : std::pow(diam, gc.exponent);

  SlotHeaps heaps(n_obj, cap);
  std::vector<std::int64_t> owner(units, -1);
  std::vector<std::size_t> queue;
  queue.reserve(units);
  for (std::size_t p = units; p-- > 0;) queue.push_back(p);

  // Best value max_i (-c_ij - price_i) of unit persons of atom j.
  auto best_value = [&](std::size_t j) {
    double v = -kInf;
    for (std::size_t i = 0; i < n_obj; ++i) v = std::max(v, -cost(i, j) - heaps.min_price(i));
    return v;
  };

  // Primal cost of the assignment and the dual value of the prices, both per
  // unit mass; per-atom sums are compensated across atoms.
  auto certify = [&](TransportPlanSummary& out) {
    CompensatedSum primal, dual;
    for (std::size_t i = 0; i < n_obj; ++i) dual.add(-obj.weight(i) * heaps.min_price(i));
    for (std::size_t j = 0; j < n_per; ++j) {
      double v = kInf;
      for (std::size_t i = 0; i < n_obj; ++i) v = std::min(v, cost(i, j) + heaps.min_price(i));
      dual.add(per.weight(j) * v);
      double row = 0.0;
      for (std::size_t r = 0; r < mult; ++r) {
        row += cost(static_cast<std::size_t>(owner[j * mult + r]), j);
      }
      primal.add(row / static_cast<double>(units));
    }
    out.cost = primal.value();
    out.optimality_gap = std::max(0.0, out.cost - dual.value());
  };

  TransportPlanSummary out;
  double eps = std::max(tolerance, cmax / 4.0);
  for (;;) {
    while (!queue.empty()) {
      const std::size_t p = queue.back();
      queue.pop_back();
      const std::size_t j = p / mult;
      double v1 = -kInf, v2 = -kInf;
      std::size_t i1 = 0;
      for (std::size_t i = 0; i < n_obj; ++i) {
        const double val = -cost(i, j) - heaps.min_price(i);
        if (val > v1) {
          v2 = v1;
          v1 = val;
          i1 = i;
        } else if (val > v2) {
          v2 = val;
        }
      }
      v2 = std::max(v2, -cost(i1, j) - heaps.second_price(i1));
      const double incr = (v2 == -kInf ? 0.0 : v1 - v2) + eps;
      const std::int64_t prev = heaps.min_holder(i1);
      heaps.replace_min(i1, heaps.min_price(i1) + incr, static_cast<std::int64_t>(p));
      owner[p] = static_cast<std::int64_t>(i1);
      if (prev >= 0) {
        owner[static_cast<std::size_t>(prev)] = -1;
        queue.push_back(static_cast<std::size_t>(prev));
      }
    }
    certify(out);
    if (eps <= tolerance || out.optimality_gap <= tolerance) break;
    eps = std::max(tolerance, eps / 8.0);

    for (std::size_t i = 0; i < n_obj; ++i) heaps.flatten(i);
    std::vector<double> best(n_per);
    for (std::size_t j = 0; j < n_per; ++j) best[j] = best_value(j);
    for (std::size_t i = 0; i < n_obj; ++i) {
      const double value_floor = -heaps.min_price(i);
      for (std::size_t slot = 0; slot < cap; ++slot) {
        const std::int64_t h = heaps.holder(i, slot);
        if (h < 0) continue;
        const std::size_t j = static_cast<std::size_t>(h) / mult;
        if (value_floor - cost(i, j) < best[j] - eps) {
          heaps.release(i, slot);
          owner[static_cast<std::size_t>(h)] = -1;
          queue.push_back(static_cast<std::size_t>(h));
        }
      }
      heaps.flatten(i);
    }
  }

  std::vector<std::size_t> load(n_obj, 0);
  std::vector<std::size_t> scratch;
  for (std::size_t j = 0; j < n_per; ++j) {
    scratch.clear();
    for (std::size_t r = 0; r < mult; ++r) {
      const auto i = static_cast<std::size_t>(owner[j * mult + r]);
      ++load[i];
      scratch.push_back(i);
    }
    std::sort(scratch.begin(), scratch.end());
    out.support_size += static_cast<std::size_t>(
        std::unique(scratch.begin(), scratch.end()) - scratch.begin());
  }
  const long double unit = 1.0L / static_cast<long double>(units);
  double resid = 0.0;
  for (std::size_t i = 0; i < n_obj; ++i) {
    resid = std::max(resid, std::abs(static_cast<double>(load[i] * unit) - obj.weight(i)));
  }
  for (std::size_t j = 0; j < n_per; ++j) {
    resid = std::max(resid, std::abs(static_cast<double>(mult * unit) - per.weight(j)));
  }
  out.feasibility_residual = resid;
  out.solver = "auction";
  return out;
}

// ---------------------------------------------------------------------------
// Primal-dual solver for equal-weight instances where the smaller side (k
// objects) divides the larger (N unit persons): every object takes exactly
// cap = N/k persons. Object prices pi_i are the dual variables; each person
// sits on an object minimizing c_ij + pi_i.
//
// A round runs Dijkstra over the k objects, from the overfull ones, with edge
// weight w(u,v) = min over persons j on u of (c_vj + pi_v) - (c_uj + pi_u),
// raises prices by the capped distances so shortest-path edges become tight,
// then moves persons along tight paths from overfull to underfull objects.
// Keys c_vj - c_uj do not depend on prices, so each edge keeps a lazy min-heap
// of them and a round costs O(k^2) plus the moves.
//
// Persons only enter heaps for their candidate objects, those within `slack`
// of their best at the starting prices. Optimality is then checked against
// every (object, person) pair; on a violation the slack grows and the level is
// rerun from the current prices. Prices come from the same solve on a nested
// random subsample an eighth the size, which makes the repair short.

class FewSinks {
 public:
  FewSinks(const DiscreteMeasure& obj, const DiscreteMeasure& per, const GroundCost& gc,
           double cmax)
      : k_(obj.size()),
        oc_(obj.coords().data()),
        pc_(per.coords().data()),
        d_(static_cast<std::size_t>(obj.dim())),
        gc_(gc),
        cmax_(cmax),
        pi_(k_, 0.0),
        heaps_(k_ * k_) {}

  [[nodiscard]] double cost(std::size_t i, std::uint32_t j) const {
    return gc_(oc_ + i * d_, pc_ + static_cast<std::size_t>(j) * d_);
  }

  /// Solves the level on persons ids[0..n) with capacity cap per object,
  /// starting from the current prices. Leaves the assignment in owner().
  void solve_level(const std::vector<std::uint32_t>& ids, std::size_t n, std::size_t cap,
                   bool cold) {
    ids_ = ids.data();
    n_ = n;
    cap_ = cap;
    // A cold start has no price information; every object is a candidate.
    double slack = cold ? kInf : cmax_ / 64.0;
    for (;;) {
      greedy_assign();
      build_candidates(slack);
      if (balance() && verify()) return;
      if (slack == kInf) throw std::logic_error("transport: primal-dual solver did not converge");
      slack = slack * 4.0 >= cmax_ ? kInf : slack * 4.0;
    }
  }

  [[nodiscard]] const std::vector<double>& prices() const { return pi_; }
  [[nodiscard]] const std::vector<std::uint32_t>& owner() const { return asg_; }

 private:
  struct Entry {
    double key;
    std::uint32_t t;
    friend bool operator>(const Entry& a, const Entry& b) { return a.key > b.key; }
  };

  [[nodiscard]] double value(std::size_t i, std::size_t t) const {
    return cost(i, ids_[t]) + pi_[i];
  }

  void greedy_assign() {
    asg_.assign(n_, 0);
    load_.assign(k_, 0);
    for (std::size_t t = 0; t < n_; ++t) {
      double best = kInf;
      std::uint32_t arg = 0;
      for (std::size_t i = 0; i < k_; ++i) {
        const double v = value(i, t);
        if (v < best) {
          best = v;
          arg = static_cast<std::uint32_t>(i);
        }
      }
      asg_[t] = arg;
      ++load_[arg];
    }
  }

  void build_candidates(double slack) {
    offset_.assign(n_ + 1, 0);
    cand_.clear();
    for (auto& h : heaps_) h.clear();
    for (std::size_t t = 0; t < n_; ++t) {
      const double best = value(asg_[t], t);
      for (std::size_t i = 0; i < k_; ++i) {
        if (value(i, t) <= best + slack) cand_.push_back(static_cast<std::uint32_t>(i));
      }
      offset_[t + 1] = cand_.size();
      push_entries(static_cast<std::uint32_t>(t));
    }
  }

  // Heap entries of person t towards each of its candidates.
  void push_entries(std::uint32_t t) {
    const std::size_t u = asg_[t];
    const double cu = cost(u, ids_[t]);
    for (std::size_t c = offset_[t]; c < offset_[t + 1]; ++c) {
      const std::size_t v = cand_[c];
      if (v == u) continue;
      auto& h = heaps_[u * k_ + v];
      h.push_back({cost(v, ids_[t]) - cu, t});
      std::push_heap(h.begin(), h.end(), std::greater<>{});
    }
  }

  // Smallest valid key on edge u -> v, dropping persons that have moved.
  [[nodiscard]] double top_key(std::size_t u, std::size_t v) {
    auto& h = heaps_[u * k_ + v];
    while (!h.empty() && asg_[h.front().t] != u) {
      std::pop_heap(h.begin(), h.end(), std::greater<>{});
      h.pop_back();
    }
    return h.empty() ? kInf : h.front().key;
  }

  [[nodiscard]] double weight(std::size_t u, std::size_t v) {
    const double key = top_key(u, v);
    return key == kInf ? kInf : key + pi_[v] - pi_[u];
  }

  [[nodiscard]] bool over(std::size_t i) const { return load_[i] > cap_; }
  [[nodiscard]] bool under(std::size_t i) const { return load_[i] < cap_; }

  // Moves the person on top of edge u -> v.
  void move_top(std::size_t u, std::size_t v) {
    auto& h = heaps_[u * k_ + v];
    std::pop_heap(h.begin(), h.end(), std::greater<>{});
    const std::uint32_t t = h.back().t;
    h.pop_back();
    asg_[t] = static_cast<std::uint32_t>(v);
    --load_[u];
    ++load_[v];
    push_entries(t);
  }

  // Returns false if some overfull object cannot reach an underfull one
  // through candidate edges.
  bool balance() {
    const double tight = 1e-12 * std::max(1.0, cmax_);
    std::vector<double> dist(k_);
    std::vector<char> done(k_);
    std::vector<std::int64_t> prev(k_);
    std::vector<std::size_t> queue;
    for (;;) {
      bool any = false;
      for (std::size_t i = 0; i < k_; ++i) any = any || over(i);
      if (!any) return true;

      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(done.begin(), done.end(), 0);
      for (std::size_t i = 0; i < k_; ++i) {
        if (over(i)) dist[i] = 0.0;
      }
      double D = kInf;
      for (;;) {
        std::size_t u = k_;
        double du = kInf;
        for (std::size_t i = 0; i < k_; ++i) {
          if (!done[i] && dist[i] < du) {
            du = dist[i];
            u = i;
          }
        }
        if (u == k_) break;
        done[u] = 1;
        if (under(u)) {
          D = du;
          break;
        }
        for (std::size_t v = 0; v < k_; ++v) {
          if (done[v] || v == u) continue;
          const double w = weight(u, v);
          if (w == kInf) continue;
          dist[v] = std::min(dist[v], du + std::max(0.0, w));
        }
      }
      if (D == kInf) return false;
      for (std::size_t i = 0; i < k_; ++i) pi_[i] += D - std::min(dist[i], D);

      // Push along tight paths until none is left.
      for (;;) {
        std::fill(prev.begin(), prev.end(), -2);
        queue.clear();
        for (std::size_t i = 0; i < k_; ++i) {
          if (over(i)) {
            prev[i] = -1;
            queue.push_back(i);
          }
        }
        std::int64_t target = -1;
        for (std::size_t qi = 0; qi < queue.size() && target < 0; ++qi) {
          const std::size_t u = queue[qi];
          for (std::size_t v = 0; v < k_; ++v) {
            if (prev[v] != -2 || weight(u, v) > tight) continue;
            prev[v] = static_cast<std::int64_t>(u);
            if (under(v)) {
              target = static_cast<std::int64_t>(v);
              break;
            }
            queue.push_back(v);
          }
        }
        if (target < 0) break;
        // Repeat the path while its source is overfull, its sink underfull
        // and every edge still tight.
        for (;;) {
          std::size_t v = static_cast<std::size_t>(target);
          std::size_t root = v;
          bool ok = under(v);
          while (ok && prev[v] >= 0) {
            const auto u = static_cast<std::size_t>(prev[v]);
            ok = weight(u, v) <= tight;
            v = u;
            root = u;
          }
          if (!ok || !over(root)) break;
          v = static_cast<std::size_t>(target);
          while (prev[v] >= 0) {
            const auto u = static_cast<std::size_t>(prev[v]);
            move_top(u, v);
            v = u;
          }
        }
      }
    }
  }

  // Every person is on an object minimizing c + pi, up to rounding.
  bool verify() const {
    const double tol = 1e-12 * std::max(1.0, cmax_);
    for (std::size_t t = 0; t < n_; ++t) {
      const double mine = value(asg_[t], t);
      for (std::size_t i = 0; i < k_; ++i) {
        if (value(i, t) < mine - tol) return false;
      }
    }
    return true;
  }

  std::size_t k_;
  const double* oc_;
  const double* pc_;
  std::size_t d_;
  GroundCost gc_;
  double cmax_;
  std::vector<double> pi_;
  std::vector<std::vector<Entry>> heaps_;

  const std::uint32_t* ids_ = nullptr;
  std::size_t n_ = 0;
  std::size_t cap_ = 0;
  std::vector<std::uint32_t> asg_;
  std::vector<std::size_t> load_;
  std::vector<std::size_t> offset_;
  std::vector<std::uint32_t> cand_;
};

bool few_sinks_applicable(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  const std::size_t k = std::min(a.size(), b.size());
  const std::size_t n = std::max(a.size(), b.size());
  return a.equal_weights() && b.equal_weights() && n % k == 0 && k <= 4096 &&
         n < (std::size_t{1} << 32);
}

TransportPlanSummary solve_few_sinks(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                     const GroundCost& gc, Metric metric) {
  const bool a_small = a.size() <= b.size();
  const DiscreteMeasure& obj = a_small ? a : b;
  const DiscreteMeasure& per = a_small ? b : a;
  const std::size_t k = obj.size();
  const std::size_t n = per.size();
  const std::size_t cap = n / k;
  const int d = obj.dim();
  const double diam = metric == Metric::supremum ? 1.0 : std::sqrt(static_cast<double>(d));
  const double cmax = gc.exponent == 1.0 ? diam : std::pow(diam, gc.exponent);

  // Nested subsamples: prefixes of one fixed pseudo-random permutation.
  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0U);
  std::mt19937_64 shuffle_rng(0x9e3779b97f4a7c15ULL ^ n ^ (static_cast<std::uint64_t>(k) << 32));
  for (std::size_t t = n; t > 1; --t) {
    std::swap(ids[t - 1], ids[static_cast<std::size_t>(shuffle_rng() % t)]);
  }
  std::vector<std::size_t> caps{cap};
  while (caps.back() >= 64 && caps.back() * k > 4096) caps.push_back(caps.back() / 8);

  FewSinks solver(obj, per, gc, cmax);
  for (std::size_t l = caps.size(); l-- > 0;) {
    solver.solve_level(ids, caps[l] * k, caps[l], l + 1 == caps.size());
  }

  const auto& owner = solver.owner();
  const auto& pi = solver.prices();
  TransportPlanSummary out;
  CompensatedSum primal, dual;
  std::vector<std::size_t> load(k, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = owner[t];
    primal.add(solver.cost(i, ids[t]));
    ++load[i];
  }
  out.cost = primal.value() / static_cast<double>(n);
  for (std::size_t i = 0; i < k; ++i) dual.add(-obj.weight(i) * pi[i]);
  for (std::size_t j = 0; j < n; ++j) {
    double v = kInf;
    for (std::size_t i = 0; i < k; ++i) {
      v = std::min(v, solver.cost(i, static_cast<std::uint32_t>(j)) + pi[i]);
    }
    dual.add(per.weight(j) * v);
  }
  out.optimality_gap = std::max(0.0, out.cost - dual.value());
  out.support_size = n;
  double resid = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    resid = std::max(resid, std::abs(static_cast<double>(load[i]) / static_cast<double>(n) -
                                     obj.weight(i)));
  }
  out.feasibility_residual = resid;
  out.solver = "primal_dual";
  return out;
}

}  // namespace

double w1_exact_1d(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  require_line(a);
  require_line(b);
  return integrate_abs_difference(&a, &b);
}

double w1_exact_1d(const DiscreteMeasure& a, const ReferenceMeasure& b) {
  require_line(a);
  return integrate_abs_difference(&a, require_cdf(b));
}

double w1_exact_1d(const ReferenceMeasure& a, const DiscreteMeasure& b) {
  return w1_exact_1d(b, a);
}

double w1_exact_1d(const ReferenceMeasure& a, const ReferenceMeasure& b) {
  return integrate_abs_difference(require_cdf(a), require_cdf(b));
}

TransportPlanSummary w1_exact_discrete(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                       Metric metric, const TransportOptions& options) {
  if (a.dim() != b.dim()) throw InvalidArgument("transport between different dimensions");
  if (!(options.cost_exponent > 0.0 && options.cost_exponent <= 1.0)) {
    throw InvalidArgument("cost exponent must lie in (0,1]");
  }
  const std::uint64_t pairs = static_cast<std::uint64_t>(a.size()) * b.size();
  if (pairs > options.max_pairs) {
    throw BudgetExceeded("transport instance has " + std::to_string(pairs) +
                         " atom pairs, above the guard of " + std::to_string(options.max_pairs));
  }
  const GroundCost gc{a.dim(), metric, options.cost_exponent};
  const bool both_equal = a.equal_weights() && b.equal_weights();
  const double tol = options.auction_tolerance;

  switch (options.solver) {
    case TransportSolver::assignment:
      if (!both_equal || a.size() != b.size()) {
        throw InvalidArgument("assignment solver needs equal-size equal-weight measures");
      }
      return solve_assignment(a, b, gc);
    case TransportSolver::transportation:
      return solve_transportation(a, b, gc);
    case TransportSolver::auction:
      if (!both_equal) throw InvalidArgument("auction solver needs equal-weight measures");
      return solve_auction(a, b, gc, tol, metric);
    case TransportSolver::primal_dual:
      if (!few_sinks_applicable(a, b)) {
        throw InvalidArgument(
            "primal-dual solver needs equal weights, the smaller size dividing the larger, "
            "and at most 4096 atoms on the smaller side");
      }
      return solve_few_sinks(a, b, gc, metric);
    case TransportSolver::automatic:
      break;
  }
  if (both_equal && a.size() == b.size() && a.size() <= 2000) return solve_assignment(a, b, gc);
  if (pairs <= 250'000) return solve_transportation(a, b, gc);
  if (few_sinks_applicable(a, b)) return solve_few_sinks(a, b, gc, metric);
  if (both_equal) return solve_auction(a, b, gc, tol, metric);
  throw BudgetExceeded("no exact solver for a large instance with unequal weights");
}

Discretization discretize_reference(const ReferenceMeasure& ref, int base, int depth,
                                    Metric metric, std::uint64_t budget) {
  const int d = ref.dim();
  std::vector<DyadicCell> cells;
  if (ref.has_support_oracle()) {
    cells = ref.support_cells(base, depth);
    if (cells.size() > budget) throw BudgetExceeded("support enumeration exceeds the cell budget");
  } else {
    cells = partition(base, depth, d, budget);
  }
  std::vector<double> coords;
  std::vector<double> weights;
  coords.reserve(cells.size() * static_cast<std::size_t>(d));
  weights.reserve(cells.size());
  for (const auto& cell : cells) {
    const double w = ref.cell_mass(cell);
    if (w <= 0.0) continue;
    const auto c = cell.center();
    coords.insert(coords.end(), c.begin(), c.end());
    weights.push_back(w);
  }
  const double half_side = 0.5 / std::pow(static_cast<double>(base), depth);
  const double err = metric == Metric::supremum ? half_side
                                                : std::sqrt(static_cast<double>(d)) * half_side;
  return {DiscreteMeasure(d, std::move(coords), std::move(weights)), err};
}

}  // namespace empdist
