#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace typedcrf {

// Hard logic factors over (possibly negated) binary literals.
// Xor: exactly one literal true. AtMostOne / Or: at most / at least one
// literal true. Imply: two literals, antecedent then consequent.
enum class FactorKind { Xor, AtMostOne, Or, Imply };

const char* to_string(FactorKind kind);

struct Literal {
  int variable = 0;
  bool negated = false;
};

struct Factor {
  FactorKind kind = FactorKind::Xor;
  std::vector<Literal> literals;
};

// A binary variable contributes `potential` to the objective when assigned 1
// and nothing when assigned 0. Variable ids are dense, 0..n-1.
class FactorGraph {
 public:
  int add_variable(double potential);

  // Enforces: at least one literal, no duplicate variable within the factor,
  // all variables present in the graph, Imply has exactly two literals.
  void add_factor(FactorKind kind, std::vector<Literal> literals);

  int num_variables() const { return static_cast<int>(potentials_.size()); }
  const std::vector<double>& potentials() const { return potentials_; }
  const std::vector<Factor>& factors() const { return factors_; }

  void add_to_potential(int variable, double delta);

 private:
  std::vector<double> potentials_;
  std::vector<Factor> factors_;
};

struct AdmmSettings {
  double penalty = 0.1;          // ADMM step size, fixed over the run
  int max_iterations = 1000;
  double residual_tolerance = 1e-6;
  std::uint64_t seed = 0;        // reserved for tie-breaking; solver is deterministic
};

enum class SolveStatus { Integral, Fractional, MaxIterations };

const char* to_string(SolveStatus status);

struct InferenceResult {
  std::vector<double> posteriors;   // in [0,1], one per variable
  std::vector<int> assignment;      // posteriors rounded, threshold 0.5, ties -> 0
  double relaxed_objective = 0.0;   // upper bound on the relaxation optimum
  double rounded_objective = 0.0;   // objective of `assignment`
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
};

// Euclidean projection of v onto {u : u >= 0, sum u = target_sum}.
// Sort-based thresholding, O(n log n), exact.
std::vector<double> project_simplex(std::vector<double> v, double target_sum = 1.0);

// Flips negated coordinates (u -> 1-u), projects onto the factor's polytope,
// flips back. Polytopes: Xor {u in [0,1]^n : sum = 1}, AtMostOne {sum <= 1},
// Or {sum >= 1}, Imply {(a,b) in [0,1]^2 : a <= b}.
std::vector<double> project_factor(FactorKind kind,
                                   const std::vector<bool>& negations,
                                   std::vector<double> v);

// Approximate MAP by consensus ADMM over the local polytope relaxation.
// Each iteration projects every factor's dual-adjusted local scores onto its
// polytope, averages local copies into global posteriors, and updates the
// scaled duals by the disagreement. Stops when both residual norms fall below
// residual_tolerance, when a rounded assignment is certified optimal against
// the dual bound, or at max_iterations. Throws UnsatisfiableError when the
// dual bound proves the hard-constraint system infeasible.
InferenceResult solve_map(const FactorGraph& g, const AdmmSettings& settings = {});

// Exact oracle: enumerates all 2^n assignments (n <= 24), discards infeasible
// ones, returns a maximizer with lexicographically-smallest tie-break.
std::pair<std::vector<int>, double> exhaustive_map(const FactorGraph& g);

bool factor_satisfied(const Factor& factor, const std::vector<int>& assignment);
bool satisfies_all(const FactorGraph& g, const std::vector<int>& assignment);

}  // namespace typedcrf
