#pragma once

#include <string>
#include <vector>

#include "typedcrf/crf_types.hpp"
#include "typedcrf/factor_graph.hpp"

namespace typedcrf {

// One (type, node, state) indicator, possibly negated.
struct ConstraintLiteral {
  int type = 0;
  int node = 0;
  int state = 0;
  bool negated = false;
};

// A first-order-logic constraint over node states, enforced at inference
// time by compiling it into a hard factor over the unrolled binary variables.
struct NodeStateConstraint {
  FactorKind op = FactorKind::AtMostOne;
  std::vector<ConstraintLiteral> literals;
};

// One factor per constraint, literals resolved through the block index.
// Throws InvalidConstraintError when a literal does not resolve.
std::vector<Factor> compile(const std::vector<NodeStateConstraint>& constraints,
                            const BlockIndex& blocks);

// True iff every constraint is satisfied by the indicators induced by y.
bool check(const std::vector<NodeStateConstraint>& constraints, const Labeling& y);

// Textual format, one constraint per line:
//   OPERATOR type:node:state[!] ...
// where '!' marks a negated literal.
std::vector<NodeStateConstraint> parse_constraints(const std::string& text);
std::string format_constraints(const std::vector<NodeStateConstraint>& constraints);

}  // namespace typedcrf
