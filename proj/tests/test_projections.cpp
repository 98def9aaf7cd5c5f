#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "typedcrf/errors.hpp"
#include "typedcrf/factor_graph.hpp"

using namespace typedcrf;

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Independent oracle: exhaustive minimization of |u - v|^2 over a grid of the
// factor polytope. Grid points are enumerated on the un-negated polytope and
// flipped into place, mirroring how the polytope itself is defined.
struct GridOracle {
  FactorKind kind;
  std::vector<bool> negations;
  const std::vector<double>& target;
  int steps;

  double best_dist = 1e300;
  std::vector<double> best_point;

  void consider(std::vector<double>& point) {
    std::vector<double> flipped(point);
    for (std::size_t i = 0; i < flipped.size(); ++i)
      if (negations[i]) flipped[i] = 1.0 - flipped[i];
    double d = sq_dist(flipped, target);
    if (d < best_dist) {
      best_dist = d;
      best_point = flipped;
    }
  }

  void run() {
    std::vector<double> point(target.size(), 0.0);
    switch (kind) {
      case FactorKind::Xor: enumerate_sum(point, 0, steps); break;
      case FactorKind::AtMostOne: enumerate_sum_upto(point, 0, steps); break;
      case FactorKind::Or: enumerate_box_min_sum(point, 0, 0); break;
      case FactorKind::Imply: enumerate_imply(); break;
    }
  }

  // sum u = steps exactly, u >= 0
  void enumerate_sum(std::vector<double>& point, std::size_t i, int remaining) {
    if (i + 1 == point.size()) {
      point[i] = remaining / static_cast<double>(steps);
      consider(point);
      return;
    }
    for (int s = 0; s <= remaining; ++s) {
      point[i] = s / static_cast<double>(steps);
      enumerate_sum(point, i + 1, remaining - s);
    }
  }

  // sum u <= steps, u >= 0 (each coordinate also <= 1 automatically)
  void enumerate_sum_upto(std::vector<double>& point, std::size_t i, int remaining) {
    if (i == point.size()) {
      consider(point);
      return;
    }
    for (int s = 0; s <= remaining; ++s) {
      point[i] = s / static_cast<double>(steps);
      enumerate_sum_upto(point, i + 1, remaining - s);
    }
  }

  // u in [0,1]^n with sum u >= steps
  void enumerate_box_min_sum(std::vector<double>& point, std::size_t i, int used) {
    if (i == point.size()) {
      if (used >= steps) consider(point);
      return;
    }
    int max_rest = static_cast<int>(point.size() - i - 1) * steps;
    for (int s = 0; s <= steps; ++s) {
      if (used + s + max_rest < steps) continue;  // cannot reach the sum
      point[i] = s / static_cast<double>(steps);
      enumerate_box_min_sum(point, i + 1, used + s);
    }
  }

  // (a,b) in [0,1]^2 with a <= b
  void enumerate_imply() {
    std::vector<double> point(2);
    for (int a = 0; a <= steps; ++a)
      for (int b = a; b <= steps; ++b) {
        point[0] = a / static_cast<double>(steps);
        point[1] = b / static_cast<double>(steps);
        consider(point);
      }
  }
};

std::vector<double> grid_project(FactorKind kind, const std::vector<bool>& negations,
                                 const std::vector<double>& v, int steps) {
  GridOracle oracle{kind, negations, v, steps};
  oracle.run();
  return oracle.best_point;
}

// 1e-3 sweep over the two-point simplex {u >= 0, sum = target}.
std::vector<double> grid_project_simplex2(const std::vector<double>& v, double target) {
  const int steps = 1000;
  double best = 1e300;
  std::vector<double> best_point(2);
  for (int s = 0; s <= steps; ++s) {
    std::vector<double> p{target * s / steps, target * (steps - s) / steps};
    double d = sq_dist(p, v);
    if (d < best) {
      best = d;
      best_point = p;
    }
  }
  return best_point;
}

bool feasible(FactorKind kind, const std::vector<bool>& negations,
              const std::vector<double>& u, double tol) {
  double sum = 0.0;
  std::vector<double> w(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (negations[i]) w[i] = 1.0 - w[i];
    if (w[i] < -tol || w[i] > 1.0 + tol) return false;
    sum += w[i];
  }
  switch (kind) {
    case FactorKind::Xor: return std::abs(sum - 1.0) <= tol;
    case FactorKind::AtMostOne: return sum <= 1.0 + tol;
    case FactorKind::Or: return sum >= 1.0 - tol;
    case FactorKind::Imply: return w[0] <= w[1] + tol;
  }
  return false;
}

constexpr FactorKind kAllKinds[4] = {FactorKind::Xor, FactorKind::AtMostOne, FactorKind::Or,
                                     FactorKind::Imply};

}  // namespace

TEST_CASE("project_simplex keeps points already on the simplex") {
  auto u = project_simplex({0.5, 0.5});
  CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("project_simplex matches the grid sweep on two-point cases") {
  {
    auto u = project_simplex({2.0, 0.0});
    auto oracle = grid_project_simplex2({2.0, 0.0}, 1.0);
    CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(u[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(sq_dist(u, {2.0, 0.0}) <= sq_dist(oracle, {2.0, 0.0}) + 1e-9);
  }
  {
    auto u = project_simplex({0.2, 0.2});
    auto oracle = grid_project_simplex2({0.2, 0.2}, 1.0);
    CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sq_dist(u, {0.2, 0.2}) <= sq_dist(oracle, {0.2, 0.2}) + 1e-9);
  }
}

TEST_CASE("project_simplex supports non-unit target sums") {
  auto u = project_simplex({3.0, 1.0, 0.0}, 2.0);
  CHECK(u[0] + u[1] + u[2] == doctest::Approx(2.0).epsilon(1e-12));
  for (double x : u) CHECK(x >= 0.0);
}

TEST_CASE("project_simplex rejects bad arguments") {
  CHECK_THROWS_AS(project_simplex({}), std::invalid_argument);
  CHECK_THROWS_AS(project_simplex({1.0, 2.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(project_simplex({1.0, 2.0}, 3.0), std::invalid_argument);
}

TEST_CASE("project_factor AT_MOST_ONE clips already-feasible points") {
  auto u = project_factor(FactorKind::AtMostOne, {false, false}, {-1.0, -2.0});
  CHECK(u[0] == doctest::Approx(0.0));
  CHECK(u[1] == doctest::Approx(0.0));
}

TEST_CASE("project_factor AT_MOST_ONE matches the grid oracle when the sum binds") {
  std::vector<double> v{0.9, 0.9};
  auto u = project_factor(FactorKind::AtMostOne, {false, false}, v);
  auto oracle = grid_project(FactorKind::AtMostOne, {false, false}, v, 100);
  CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sq_dist(u, v) <= sq_dist(oracle, v) + 1e-9);
}

TEST_CASE("project_factor XOR flips negated coordinates around the projection") {
  std::vector<double> v{0.9, 0.8};
  std::vector<bool> negations{true, false};
  auto u = project_factor(FactorKind::Xor, negations, v);

  // same computation spelled out: flip, project, flip back
  auto inner = project_simplex({1.0 - v[0], v[1]});
  CHECK(u[0] == doctest::Approx(1.0 - inner[0]).epsilon(1e-12));
  CHECK(u[1] == doctest::Approx(inner[1]).epsilon(1e-12));

  auto oracle = grid_project(FactorKind::Xor, negations, v, 100);
  CHECK(sq_dist(u, v) <= sq_dist(oracle, v) + 1e-9);
}

TEST_CASE("project_factor rejects malformed inputs") {
  CHECK_THROWS_AS(project_factor(FactorKind::Xor, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(project_factor(FactorKind::Xor, {false}, {0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(project_factor(FactorKind::Imply, {false, false, false}, {0.1, 0.2, 0.3}),
                  std::invalid_argument);
}

TEST_CASE("factor projections are idempotent") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  std::uniform_int_distribution<int> coin(0, 1);
  for (FactorKind kind : kAllKinds) {
    for (int trial = 0; trial < 50; ++trial) {
      std::uniform_int_distribution<int> size_of(1, 6);
      int n = kind == FactorKind::Imply ? 2 : size_of(rng);
      std::vector<double> v(static_cast<std::size_t>(n));
      std::vector<bool> negations(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = value(rng);
        negations[static_cast<std::size_t>(i)] = coin(rng) == 1;
      }
      auto once = project_factor(kind, negations, v);
      auto twice = project_factor(kind, negations, once);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(once[static_cast<std::size_t>(i)] - twice[static_cast<std::size_t>(i)]) <=
              1e-9);
    }
  }
}

TEST_CASE("factor projections are feasible") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  std::uniform_int_distribution<int> coin(0, 1);
  for (FactorKind kind : kAllKinds) {
    for (int trial = 0; trial < 100; ++trial) {
      std::uniform_int_distribution<int> size_of(1, 6);
      int n = kind == FactorKind::Imply ? 2 : size_of(rng);
      std::vector<double> v(static_cast<std::size_t>(n));
      std::vector<bool> negations(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = value(rng);
        negations[static_cast<std::size_t>(i)] = coin(rng) == 1;
      }
      auto u = project_factor(kind, negations, v);
      CHECK(feasible(kind, negations, u, 1e-9));
    }
  }
}

TEST_CASE("factor projections beat every point of a 1e-2 polytope grid") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  std::uniform_int_distribution<int> coin(0, 1);
  for (FactorKind kind : kAllKinds) {
    for (int trial = 0; trial < 8; ++trial) {
      // sizes kept small enough for the exhaustive grid to stay cheap
      std::uniform_int_distribution<int> size_of(2, kind == FactorKind::Or ? 3 : 4);
      int n = kind == FactorKind::Imply ? 2 : size_of(rng);
      std::vector<double> v(static_cast<std::size_t>(n));
      std::vector<bool> negations(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = value(rng);
        negations[static_cast<std::size_t>(i)] = coin(rng) == 1;
      }
      auto u = project_factor(kind, negations, v);
      auto oracle = grid_project(kind, negations, v, 100);
      CHECK(sq_dist(u, v) <= sq_dist(oracle, v) + 1e-9);
    }
  }
}
