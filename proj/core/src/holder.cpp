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

#include "empdist/holder.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "empdist/errors.hpp"

namespace empdist {

namespace {

constexpr double kRelSlack = 1e-12;

bool exceeds(double value, double bound) {
  return std::abs(value) > bound * (1.0 + kRelSlack) + 1e-15;
}

// Row-major linear index of a base-2 depth-j cell (axis 0 most significant).
std::size_t linear(std::span<const std::int64_t> tau, int j) {
  std::size_t lin = 0;
  for (auto t : tau) lin = (lin << j) | static_cast<std::size_t>(t);
  return lin;
}

void unlinear(std::size_t lin, int j, std::vector<std::int64_t>& tau) {
  const std::size_t mask = (std::size_t{1} << j) - 1;
  for (std::size_t i = tau.size(); i-- > 0;) {
    tau[i] = static_cast<std::int64_t>(lin & mask);
    lin >>= j;
  }
}

std::size_t containing_linear(std::span<const double> x, int j) {
  const double scale = std::ldexp(1.0, j);
  const auto top = static_cast<std::int64_t>(scale) - 1;
  std::size_t lin = 0;
  for (double c : x) {
    const auto t = std::clamp(static_cast<std::int64_t>(std::floor(c * scale)), std::int64_t{0}, top);
    lin = (lin << j) | static_cast<std::size_t>(t);
  }
  return lin;
}

}  // namespace

double HolderDecomposition::coefficient(int j, std::span<const std::int64_t> index) const {
  if (j < 1 || j > J) throw InvalidArgument("coefficient depth out of range");
  if (static_cast<int>(index.size()) != dim) throw InvalidArgument("cell index dimension");
  return coefficients[static_cast<std::size_t>(j - 1)][linear(index, j)];
}

double HolderDecomposition::evaluate(std::span<const double> x) const {
  double v = c;
  for (int j = 1; j <= J; ++j) v += coefficients[static_cast<std::size_t>(j - 1)][containing_linear(x, j)];
  return v;
}

HolderDecomposition holder_decompose(const ScalarField& f, int dim, double q, int J,
                                     int eval_grid_depth) {
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in (0,1]");
  if (J < 0) throw InvalidArgument("depth J must be >= 0");
  if (eval_grid_depth < J + 2) throw InvalidArgument("evaluation grid must be >= J + 2 deep");
  if (static_cast<long long>(dim) * eval_grid_depth > 24) {
    throw BudgetExceeded("evaluation grid exceeds 2^24 cells");
  }
  const auto d = static_cast<std::size_t>(dim);

  HolderDecomposition out;
  out.dim = dim;
  out.q = q;
  out.J = J;
  out.remainder_bound = std::pow(2.0, -(J + 1) * q);

  std::vector<double> x(d, 0.5);
  out.c = f(x);

  // values[lin] = f at the center of each depth-j cell = f_j on that cell.
  std::vector<double> prev{out.c};
  std::vector<std::int64_t> tau(d);
  for (int j = 1; j <= J; ++j) {
    const std::size_t count = std::size_t{1} << (dim * j);
    const double side = std::ldexp(1.0, -j);
    const double bound = std::pow(2.0, -(j + 1) * q);
    std::vector<double> values(count);
    std::vector<double> alpha(count);
    for (std::size_t lin = 0; lin < count; ++lin) {
      unlinear(lin, j, tau);
      std::size_t parent = 0;
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = (static_cast<double>(tau[i]) + 0.5) * side;
        parent = (parent << (j - 1)) | static_cast<std::size_t>(tau[i] >> 1);
      }
      values[lin] = f(x);
      alpha[lin] = values[lin] - prev[parent];
      if (exceeds(alpha[lin], bound)) ++out.violations;
    }
    out.coefficients.push_back(std::move(alpha));
    prev = std::move(values);
  }

  const int G = eval_grid_depth;
  const std::size_t grid = std::size_t{1} << (dim * G);
  const double side = std::ldexp(1.0, -G);
  double worst = 0.0;
  for (std::size_t lin = 0; lin < grid; ++lin) {
    unlinear(lin, G, tau);
    std::size_t coarse = 0;
    for (std::size_t i = 0; i < d; ++i) coarse = (coarse << J) | static_cast<std::size_t>(tau[i] >> (G - J));
    const double fJ = prev[coarse];
    for (double offset : {0.0, 0.5}) {
      for (std::size_t i = 0; i < d; ++i) x[i] = (static_cast<double>(tau[i]) + offset) * side;
      worst = std::max(worst, std::abs(f(x) - fJ));
    }
  }
  out.max_residual = worst;
  if (exceeds(worst, out.remainder_bound)) ++out.violations;
  return out;
}

namespace {

struct Piece {
  enum Kind { point_cone, axis_cone, min_cones, wave } kind;
  double weight;
  std::vector<double> p1, p2;
  int axis = 0;
  std::vector<int> k;
  double phase = 0.0;
};

double sup_dist(std::span<const double> x, const std::vector<double>& p) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(x[i] - p[i]));
  return r;
}

}  // namespace

ScalarField random_holder_function(int dim, double q, Rng& rng) {
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in (0,1]");
  const auto d = static_cast<std::size_t>(dim);
  const int count = 1 + static_cast<int>(rng.below(4));
  std::vector<double> raw(static_cast<std::size_t>(count));
  double mass = 0.0;
  for (double& w : raw) {
    w = rng.uniform() + 0.05;
    mass += w;
  }
  // Total |weight| lands in (0.5, 1].
  const double scale = (0.5 + 0.5 * rng.uniform()) / mass;
  auto pieces = std::make_shared<std::vector<Piece>>();
  for (int c = 0; c < count; ++c) {
    Piece piece{};
    piece.kind = static_cast<Piece::Kind>(rng.below(4));
    piece.weight = raw[static_cast<std::size_t>(c)] * scale * (rng.below(2) ? 1.0 : -1.0);
    auto random_point = [&] {
      std::vector<double> p(d);
      for (double& v : p) v = rng.uniform();
      return p;
    };
    piece.p1 = random_point();
    piece.p2 = random_point();
    piece.axis = static_cast<int>(rng.below(d));
    piece.k.resize(d);
    int l1 = 0;
    while (l1 == 0) {
      l1 = 0;
      for (int& v : piece.k) {
        v = static_cast<int>(rng.below(9)) - 4;
        l1 += std::abs(v);
      }
    }
    piece.phase = 2.0 * std::numbers::pi * rng.uniform();
    pieces->push_back(std::move(piece));
  }
  const double offset = 4.0 * rng.uniform() - 2.0;

  return [pieces, offset, q](std::span<const double> x) {
    double v = offset;
    for (const auto& pc : *pieces) {
      double term = 0.0;
      switch (pc.kind) {
        case Piece::point_cone:
          term = std::pow(sup_dist(x, pc.p1), q);
          break;
        case Piece::axis_cone:
          term = std::pow(std::abs(x[static_cast<std::size_t>(pc.axis)] - pc.p1[static_cast<std::size_t>(pc.axis)]), q);
          break;
        case Piece::min_cones:
          term = std::min(std::pow(sup_dist(x, pc.p1), q), std::pow(sup_dist(x, pc.p2), q));
          break;
        case Piece::wave: {
          double arg = pc.phase;
          int l1 = 0;
          for (std::size_t i = 0; i < x.size(); ++i) {
            arg += 2.0 * std::numbers::pi * pc.k[i] * x[i];
            l1 += std::abs(pc.k[i]);
          }
          term = std::sin(arg) / (2.0 * std::numbers::pi * l1);
          break;
        }
      }
      v += pc.weight * term;
    }
    return v;
  };
}

}  // namespace empdist
