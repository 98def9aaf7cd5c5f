#include "typedcrf/constraints.hpp"

#include <sstream>

#include "typedcrf/errors.hpp"

namespace typedcrf {

namespace {

void validate_constraint(const NodeStateConstraint& c) {
  if (c.literals.empty())
    throw InvalidConstraintError("constraint needs at least one literal");
  if (c.op == FactorKind::Imply && c.literals.size() != 2)
    throw InvalidConstraintError("IMPLY constraint needs exactly two literals");
}

void resolve_check(const ConstraintLiteral& lit, const BlockIndex& blocks) {
  if (lit.type < 0 || lit.type >= static_cast<int>(blocks.node_offset.size()))
    throw InvalidConstraintError("constraint references an unknown type");
  const auto& offsets = blocks.node_offset[static_cast<std::size_t>(lit.type)];
  if (lit.node < 0 || lit.node >= static_cast<int>(offsets.size()))
    throw InvalidConstraintError("constraint references an unknown node");
  if (lit.state < 0 || lit.state >= blocks.labels[static_cast<std::size_t>(lit.type)])
    throw InvalidConstraintError("constraint references an out-of-range state");
}

}  // namespace

std::vector<Factor> compile(const std::vector<NodeStateConstraint>& constraints,
                            const BlockIndex& blocks) {
  std::vector<Factor> factors;
  factors.reserve(constraints.size());
  for (const NodeStateConstraint& c : constraints) {
    validate_constraint(c);
    Factor factor;
    factor.kind = c.op;
    factor.literals.reserve(c.literals.size());
    for (const ConstraintLiteral& lit : c.literals) {
      resolve_check(lit, blocks);
      factor.literals.push_back({blocks.variable(lit.type, lit.node, lit.state), lit.negated});
    }
    factors.push_back(std::move(factor));
  }
  return factors;
}

bool check(const std::vector<NodeStateConstraint>& constraints, const Labeling& y) {
  for (const NodeStateConstraint& c : constraints) {
    validate_constraint(c);
    auto value = [&](const ConstraintLiteral& lit) {
      bool on = y[static_cast<std::size_t>(lit.type)][static_cast<std::size_t>(lit.node)] ==
                lit.state;
      return (on != lit.negated) ? 1 : 0;
    };
    if (c.op == FactorKind::Imply) {
      if (value(c.literals[0]) > value(c.literals[1])) return false;
      continue;
    }
    int sum = 0;
    for (const ConstraintLiteral& lit : c.literals) sum += value(lit);
    if (c.op == FactorKind::Xor && sum != 1) return false;
    if (c.op == FactorKind::AtMostOne && sum > 1) return false;
    if (c.op == FactorKind::Or && sum < 1) return false;
  }
  return true;
}

namespace {

FactorKind parse_operator(const std::string& token, std::size_t line) {
  if (token == "XOR") return FactorKind::Xor;
  if (token == "AT_MOST_ONE") return FactorKind::AtMostOne;
  if (token == "OR") return FactorKind::Or;
  if (token == "IMPLY") return FactorKind::Imply;
  if (token == "XOR_OUT" || token == "OR_OUT" || token == "AND_OUT")
    throw ParseError("soft constraint operator '" + token + "' is not supported", line);
  throw ParseError("unknown constraint operator '" + token + "'", line);
}

ConstraintLiteral parse_literal(std::string token, std::size_t line) {
  ConstraintLiteral lit;
  if (!token.empty() && token.back() == '!') {
    lit.negated = true;
    token.pop_back();
  }
  std::istringstream in(token);
  char c1 = 0, c2 = 0;
  if (!(in >> lit.type >> c1 >> lit.node >> c2 >> lit.state) || c1 != ':' || c2 != ':' ||
      !in.eof())
    throw ParseError("bad constraint literal '" + token + "'", line);
  return lit;
}

}  // namespace

std::vector<NodeStateConstraint> parse_constraints(const std::string& text) {
  std::vector<NodeStateConstraint> constraints;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream tokens(line);
    std::string op;
    if (!(tokens >> op) || op.front() == '#') continue;
    NodeStateConstraint c;
    c.op = parse_operator(op, line_number);
    std::string token;
    while (tokens >> token) c.literals.push_back(parse_literal(token, line_number));
    if (c.literals.empty())
      throw ParseError("constraint without literals", line_number);
    if (c.op == FactorKind::Imply && c.literals.size() != 2)
      throw ParseError("IMPLY needs exactly two literals", line_number);
    constraints.push_back(std::move(c));
  }
  return constraints;
}

std::string format_constraints(const std::vector<NodeStateConstraint>& constraints) {
  std::ostringstream out;
  for (const NodeStateConstraint& c : constraints) {
    out << to_string(c.op);
    for (const ConstraintLiteral& lit : c.literals) {
      out << ' ' << lit.type << ':' << lit.node << ':' << lit.state;
      if (lit.negated) out << '!';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace typedcrf
