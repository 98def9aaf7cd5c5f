#include "typedcrf/factor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <span>

#include "typedcrf/errors.hpp"

namespace typedcrf {

const char* to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::Xor: return "XOR";
    case FactorKind::AtMostOne: return "AT_MOST_ONE";
    case FactorKind::Or: return "OR";
    case FactorKind::Imply: return "IMPLY";
  }
  return "?";
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Integral: return "integral";
    case SolveStatus::Fractional: return "fractional";
    case SolveStatus::MaxIterations: return "max_iterations";
  }
  return "?";
}

int FactorGraph::add_variable(double potential) {
  potentials_.push_back(potential);
  return static_cast<int>(potentials_.size()) - 1;
}

void FactorGraph::add_to_potential(int variable, double delta) {
  potentials_.at(variable) += delta;
}

void FactorGraph::add_factor(FactorKind kind, std::vector<Literal> literals) {
  if (literals.empty())
    throw std::invalid_argument("factor needs at least one literal");
  if (kind == FactorKind::Imply && literals.size() != 2)
    throw std::invalid_argument("IMPLY factor needs exactly two literals");
  for (std::size_t a = 0; a < literals.size(); ++a) {
    if (literals[a].variable < 0 || literals[a].variable >= num_variables())
      throw std::invalid_argument("factor literal references unknown variable");
    for (std::size_t b = a + 1; b < literals.size(); ++b)
      if (literals[a].variable == literals[b].variable)
        throw std::invalid_argument("duplicate variable within one factor");
  }
  factors_.push_back(Factor{kind, std::move(literals)});
}

bool factor_satisfied(const Factor& factor, const std::vector<int>& assignment) {
  auto value = [&](const Literal& lit) {
    int x = assignment[static_cast<std::size_t>(lit.variable)];
    return lit.negated ? 1 - x : x;
  };
  switch (factor.kind) {
    case FactorKind::Imply:
      return value(factor.literals[0]) <= value(factor.literals[1]);
    default: {
      int sum = 0;
      for (const Literal& lit : factor.literals) sum += value(lit);
      if (factor.kind == FactorKind::Xor) return sum == 1;
      if (factor.kind == FactorKind::AtMostOne) return sum <= 1;
      return sum >= 1;  // Or
    }
  }
}

bool satisfies_all(const FactorGraph& g, const std::vector<int>& assignment) {
  for (const Factor& factor : g.factors())
    if (!factor_satisfied(factor, assignment)) return false;
  return true;
}

namespace {

// In-place projection onto {u >= 0, sum u = target}. `scratch` is reused
// across calls to avoid reallocation in the solver loop. Factors are tiny, so
// insertion sort beats std::sort on the common path.
void sort_descending(std::vector<double>& values) {
  if (values.size() > 32) {
    std::sort(values.begin(), values.end(), std::greater<double>());
    return;
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    double x = values[i];
    std::size_t j = i;
    while (j > 0 && values[j - 1] < x) {
      values[j] = values[j - 1];
      --j;
    }
    values[j] = x;
  }
}

void project_simplex_in_place(std::span<double> v, double target,
                              std::vector<double>& scratch) {
  scratch.assign(v.begin(), v.end());
  sort_descending(scratch);
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < scratch.size(); ++j) {
    cumulative += scratch[j];
    double candidate = (cumulative - target) / static_cast<double>(j + 1);
    if (scratch[j] - candidate > 0.0) threshold = candidate;
  }
  for (double& x : v) x = std::max(x - threshold, 0.0);
}

double clip01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Projection onto the factor polytope, applied to already-flipped values.
void project_base_polytope(FactorKind kind, std::span<double> v,
                           std::vector<double>& scratch) {
  switch (kind) {
    case FactorKind::Xor:
      project_simplex_in_place(v, 1.0, scratch);
      return;
    case FactorKind::AtMostOne: {
      double clipped_sum = 0.0;
      for (double x : v) clipped_sum += clip01(x);
      if (clipped_sum <= 1.0) {
        for (double& x : v) x = clip01(x);
      } else {
        // Sum constraint active; on that face the box bounds are implied.
        project_simplex_in_place(v, 1.0, scratch);
      }
      return;
    }
    case FactorKind::Or: {
      double clipped_sum = 0.0;
      for (double x : v) clipped_sum += clip01(x);
      if (clipped_sum >= 1.0) {
        for (double& x : v) x = clip01(x);
      } else {
        project_simplex_in_place(v, 1.0, scratch);
      }
      return;
    }
    case FactorKind::Imply: {
      double a = clip01(v[0]);
      double b = clip01(v[1]);
      if (a <= b) {
        v[0] = a;
        v[1] = b;
      } else {
        double t = clip01(0.5 * (v[0] + v[1]));
        v[0] = t;
        v[1] = t;
      }
      return;
    }
  }
  throw UnsupportedFactorError("unsupported factor kind");
}

void project_factor_in_place(FactorKind kind, std::span<const std::uint8_t> negated,
                             std::span<double> v, std::vector<double>& scratch) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (negated[i]) v[i] = 1.0 - v[i];
  project_base_polytope(kind, v, scratch);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (negated[i]) v[i] = 1.0 - v[i];
}

}  // namespace

std::vector<double> project_simplex(std::vector<double> v, double target_sum) {
  if (v.empty()) throw std::invalid_argument("project_simplex: empty vector");
  if (!(target_sum > 0.0) || target_sum > static_cast<double>(v.size()))
    throw std::invalid_argument("project_simplex: target_sum out of range");
  std::vector<double> scratch;
  project_simplex_in_place(std::span<double>(v), target_sum, scratch);
  return v;
}

std::vector<double> project_factor(FactorKind kind,
                                   const std::vector<bool>& negations,
                                   std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("project_factor: empty vector");
  if (negations.size() != v.size())
    throw std::invalid_argument("project_factor: negations/values size mismatch");
  if (kind == FactorKind::Imply && v.size() != 2)
    throw std::invalid_argument("project_factor: IMPLY takes two values");
  std::vector<std::uint8_t> negated(negations.size());
  for (std::size_t i = 0; i < negations.size(); ++i) negated[i] = negations[i];
  std::vector<double> scratch;
  project_factor_in_place(kind, negated, std::span<double>(v), scratch);
  return v;
}

namespace {

// Flat link layout of a factor graph, built once per solve.
struct LinkLayout {
  std::vector<int> factor_offset;       // per factor, into link arrays
  std::vector<int> factor_size;
  std::vector<FactorKind> factor_kind;
  std::vector<int> link_variable;
  std::vector<std::uint8_t> link_negated;
  std::vector<int> degree;              // per variable, number of links
  int num_links = 0;
};

LinkLayout build_layout(const FactorGraph& g) {
  LinkLayout layout;
  layout.degree.assign(static_cast<std::size_t>(g.num_variables()), 0);
  layout.factor_offset.reserve(g.factors().size());
  for (const Factor& factor : g.factors()) {
    layout.factor_offset.push_back(layout.num_links);
    layout.factor_size.push_back(static_cast<int>(factor.literals.size()));
    layout.factor_kind.push_back(factor.kind);
    for (const Literal& lit : factor.literals) {
      layout.link_variable.push_back(lit.variable);
      layout.link_negated.push_back(lit.negated ? 1 : 0);
      ++layout.degree[static_cast<std::size_t>(lit.variable)];
      ++layout.num_links;
    }
  }
  return layout;
}

// Maximum of c.u over the factor polytope (negations folded in), via the
// vertex enumeration of each polytope. Used for the Lagrangian dual bound.
double factor_vertex_max(FactorKind kind, std::span<const double> c,
                         std::span<const std::uint8_t> negated) {
  double offset = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  double positive_sum = 0.0;
  const std::size_t n = c.size();
  // After the flip w = 1-u on negated coordinates, the objective is
  // offset + sum tilde_c[i] * w[i] with tilde_c = (+/-) c.
  auto tilde = [&](std::size_t i) { return negated[i] ? -c[i] : c[i]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (negated[i]) offset += c[i];
    double t = tilde(i);
    best = std::max(best, t);
    positive_sum += std::max(t, 0.0);
  }
  switch (kind) {
    case FactorKind::Xor: return offset + best;
    case FactorKind::AtMostOne: return offset + std::max(best, 0.0);
    case FactorKind::Or:
      return offset + (positive_sum > 0.0 ? positive_sum : best);
    case FactorKind::Imply: {
      // Feasible flipped pairs: (0,0), (0,1), (1,1).
      double ta = tilde(0), tb = tilde(1);
      return offset + std::max({0.0, tb, ta + tb});
    }
  }
  throw UnsupportedFactorError("unsupported factor kind");
}

}  // namespace

InferenceResult solve_map(const FactorGraph& g, const AdmmSettings& settings) {
  if (!(settings.penalty > 0.0))
    throw std::invalid_argument("solve_map: penalty must be positive");
  if (!(settings.residual_tolerance > 0.0))
    throw std::invalid_argument("solve_map: residual_tolerance must be positive");
  if (settings.max_iterations < 1)
    throw std::invalid_argument("solve_map: max_iterations must be positive");

  const int n = g.num_variables();
  const std::vector<double>& theta = g.potentials();
  const LinkLayout layout = build_layout(g);
  const double eta = settings.penalty;
  const double tol = settings.residual_tolerance;
  const int num_factors = static_cast<int>(g.factors().size());

  InferenceResult result;
  result.posteriors.assign(static_cast<std::size_t>(n), 0.5);
  result.assignment.assign(static_cast<std::size_t>(n), 0);

  // Feasible objectives can never drop below the all-worst-case value, so a
  // dual bound under it is an infeasibility certificate.
  double feasible_floor = 0.0;
  double abs_sum = 0.0;
  for (double t : theta) {
    feasible_floor += std::min(t, 0.0);
    abs_sum += std::abs(t);
  }
  const double infeasible_cutoff = feasible_floor - 1e-6 * (1.0 + abs_sum) - 1e-3;

  std::vector<double>& z = result.posteriors;
  for (int i = 0; i < n; ++i)
    if (layout.degree[static_cast<std::size_t>(i)] == 0)
      z[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)] > 0.0 ? 1.0 : 0.0;

  std::vector<double> local(static_cast<std::size_t>(layout.num_links), 0.0);
  std::vector<double> dual(static_cast<std::size_t>(layout.num_links), 0.0);
  std::vector<double> z_sum(static_cast<std::size_t>(n), 0.0);
  std::vector<double> scratch;
  std::vector<double> dual_scores;
  std::vector<int> rounded(static_cast<std::size_t>(n), 0);

  // Per-link share of the variable potential, scaled for the projection step.
  std::vector<double> link_share(static_cast<std::size_t>(layout.num_links));
  for (int m = 0; m < layout.num_links; ++m) {
    int i = layout.link_variable[static_cast<std::size_t>(m)];
    link_share[static_cast<std::size_t>(m)] =
        theta[static_cast<std::size_t>(i)] /
        (static_cast<double>(layout.degree[static_cast<std::size_t>(i)]) * eta);
  }

  double best_bound = std::numeric_limits<double>::infinity();
  double degree_zero_bound = 0.0;
  for (int i = 0; i < n; ++i)
    if (layout.degree[static_cast<std::size_t>(i)] == 0)
      degree_zero_bound += std::max(theta[static_cast<std::size_t>(i)], 0.0);

  auto round_posteriors = [&]() {
    for (int i = 0; i < n; ++i)
      rounded[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] > 0.5 ? 1 : 0;
  };
  auto rounded_value = [&]() {
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      if (rounded[static_cast<std::size_t>(i)]) v += theta[static_cast<std::size_t>(i)];
    return v;
  };
  auto compute_dual_bound = [&]() {
    double bound = degree_zero_bound;
    for (int j = 0; j < num_factors; ++j) {
      int off = layout.factor_offset[static_cast<std::size_t>(j)];
      int size = layout.factor_size[static_cast<std::size_t>(j)];
      dual_scores.resize(static_cast<std::size_t>(size));
      for (int l = 0; l < size; ++l) {
        int m = off + l;
        int i = layout.link_variable[static_cast<std::size_t>(m)];
        dual_scores[static_cast<std::size_t>(l)] =
            theta[static_cast<std::size_t>(i)] /
                static_cast<double>(layout.degree[static_cast<std::size_t>(i)]) -
            eta * dual[static_cast<std::size_t>(m)];
      }
      bound += factor_vertex_max(
          layout.factor_kind[static_cast<std::size_t>(j)],
          std::span<const double>(dual_scores.data(), static_cast<std::size_t>(size)),
          std::span<const std::uint8_t>(layout.link_negated.data() + off,
                                        static_cast<std::size_t>(size)));
    }
    return bound;
  };

  auto finalize_integral = [&](double value) {
    for (int i = 0; i < n; ++i)
      z[static_cast<std::size_t>(i)] = static_cast<double>(rounded[static_cast<std::size_t>(i)]);
    result.assignment = rounded;
    result.rounded_objective = value;
    result.relaxed_objective = best_bound;
    result.status = SolveStatus::Integral;
  };

  const int check_period = 10;
  int iteration = 0;
  bool residuals_converged = false;

  for (iteration = 0; iteration < settings.max_iterations; ++iteration) {
    // Broadcast: each factor projects its dual-adjusted scores in place.
    for (int j = 0; j < num_factors; ++j) {
      int off = layout.factor_offset[static_cast<std::size_t>(j)];
      int size = layout.factor_size[static_cast<std::size_t>(j)];
      double* slot = local.data() + off;
      for (int l = 0; l < size; ++l) {
        int m = off + l;
        int i = layout.link_variable[static_cast<std::size_t>(m)];
        slot[l] = z[static_cast<std::size_t>(i)] - dual[static_cast<std::size_t>(m)] +
                  link_share[static_cast<std::size_t>(m)];
      }
      project_factor_in_place(
          layout.factor_kind[static_cast<std::size_t>(j)],
          std::span<const std::uint8_t>(layout.link_negated.data() + off,
                                        static_cast<std::size_t>(size)),
          std::span<double>(slot, static_cast<std::size_t>(size)), scratch);
    }

    // Gather: average local copies into the global posteriors.
    std::fill(z_sum.begin(), z_sum.end(), 0.0);
    for (int m = 0; m < layout.num_links; ++m)
      z_sum[static_cast<std::size_t>(layout.link_variable[static_cast<std::size_t>(m)])] +=
          local[static_cast<std::size_t>(m)];
    double dual_residual_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      int deg = layout.degree[static_cast<std::size_t>(i)];
      double zi = deg > 0 ? z_sum[static_cast<std::size_t>(i)] / static_cast<double>(deg)
                          : (theta[static_cast<std::size_t>(i)] > 0.0 ? 1.0 : 0.0);
      double diff = zi - z[static_cast<std::size_t>(i)];
      dual_residual_sq += static_cast<double>(deg) * diff * diff;
      z[static_cast<std::size_t>(i)] = zi;
    }

    // Dual step: scaled duals absorb the disagreement.
    double primal_residual_sq = 0.0;
    for (int m = 0; m < layout.num_links; ++m) {
      double diff = local[static_cast<std::size_t>(m)] -
                    z[static_cast<std::size_t>(layout.link_variable[static_cast<std::size_t>(m)])];
      dual[static_cast<std::size_t>(m)] += diff;
      primal_residual_sq += diff * diff;
    }

    double denom = std::max(layout.num_links, 1);
    double primal_residual = std::sqrt(primal_residual_sq / denom);
    double dual_residual = std::sqrt(dual_residual_sq / denom);
    residuals_converged = primal_residual < tol && dual_residual < tol;

    bool last = iteration + 1 == settings.max_iterations;
    if (iteration % check_period == 0 || residuals_converged || last) {
      best_bound = std::min(best_bound, compute_dual_bound());
      if (best_bound < infeasible_cutoff)
        throw UnsatisfiableError("hard-constraint system is infeasible");
      round_posteriors();
      if (satisfies_all(g, rounded)) {
        double value = rounded_value();
        if (best_bound - value <= tol * (1.0 + std::abs(best_bound))) {
          result.iterations = iteration + 1;
          finalize_integral(value);
          return result;
        }
      }
    }
    if (residuals_converged) break;
  }
  result.iterations = std::min(iteration + 1, settings.max_iterations);

  if (best_bound == std::numeric_limits<double>::infinity())
    best_bound = compute_dual_bound();
  if (best_bound < infeasible_cutoff)
    throw UnsatisfiableError("hard-constraint system is infeasible");

  round_posteriors();
  result.assignment = rounded;
  result.rounded_objective = rounded_value();
  result.relaxed_objective = best_bound;

  bool near_binary = true;
  for (int i = 0; i < n; ++i) {
    double zi = z[static_cast<std::size_t>(i)];
    if (std::min(zi, 1.0 - zi) > tol) {
      near_binary = false;
      break;
    }
  }
  if (near_binary && satisfies_all(g, rounded))
    result.status = SolveStatus::Integral;
  else
    result.status = residuals_converged ? SolveStatus::Fractional : SolveStatus::MaxIterations;
  return result;
}

std::pair<std::vector<int>, double> exhaustive_map(const FactorGraph& g) {
  const int n = g.num_variables();
  if (n > 24) throw CapacityError("exhaustive_map supports at most 24 variables");
  const std::vector<double>& theta = g.potentials();

  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  std::vector<int> best;
  double best_value = -std::numeric_limits<double>::infinity();

  const std::uint64_t total = n == 0 ? 1 : (std::uint64_t{1} << n);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    // Bit (n-1-i) drives x_i so that increasing mask enumerates assignments
    // in lexicographic order; the first maximizer found is the lex-smallest.
    for (int i = 0; i < n; ++i)
      assignment[static_cast<std::size_t>(i)] =
          static_cast<int>((mask >> (n - 1 - i)) & 1u);
    if (!satisfies_all(g, assignment)) continue;
    double value = 0.0;
    for (int i = 0; i < n; ++i)
      if (assignment[static_cast<std::size_t>(i)]) value += theta[static_cast<std::size_t>(i)];
    if (value > best_value) {
      best_value = value;
      best = assignment;
    }
  }
  if (best.empty() && n > 0 && best_value == -std::numeric_limits<double>::infinity())
    throw UnsatisfiableError("no feasible assignment");
  if (n == 0) return {std::vector<int>{}, 0.0};
  return {best, best_value};
}

}  // namespace typedcrf
