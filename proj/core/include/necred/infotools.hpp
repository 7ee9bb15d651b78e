#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "necred/code.hpp"
#include "necred/graph.hpp"
#include "necred/types.hpp"

namespace necred {

/// Discrete joint pmf over named variables, stored as exact rationals.
/// Entropy-style queries are evaluated in double precision (base 2).
class JointDistribution {
public:
  JointDistribution(std::vector<std::string> variables,
                    std::map<std::vector<std::uint64_t>, Rational> pmf);

  /// Normalizes integer weights into an exact pmf.
  static JointDistribution from_weights(std::vector<std::string> variables,
                                        std::map<std::vector<std::uint64_t>, std::uint64_t> w);

  /// Accepts floating-point probabilities summing to 1 within 1e-12; each
  /// double converts exactly, the total is renormalized.
  static JointDistribution from_probabilities(std::vector<std::string> variables,
                                              std::map<std::vector<std::uint64_t>, double> p);

  const std::vector<std::string>& variables() const { return vars_; }
  const std::map<std::vector<std::uint64_t>, Rational>& pmf() const { return pmf_; }

  /// Marginal pmf of a variable subset (order follows `vars`).
  std::map<std::vector<std::uint64_t>, Rational> marginal(
      const std::vector<std::string>& vars) const;

private:
  std::vector<std::size_t> indices_of(const std::vector<std::string>& vars) const;

  std::vector<std::string> vars_;
  std::map<std::vector<std::uint64_t>, Rational> pmf_;
};

/// Shannon entropy of the marginal on `vars`, in bits; 0 log 0 = 0.
double entropy(const JointDistribution& dist, const std::vector<std::string>& vars);

/// I(X;Z) = H(X) + H(Z) - H(X,Z), in bits.
double mutual_information(const JointDistribution& dist, const std::vector<std::string>& x,
                          const std::vector<std::string>& z);

struct TriangleReport {
  double lhs = 0;  // I(X;Z)
  double rhs = 0;  // I(X;Y) + I(Y;Z) - H(Y)
  bool holds = false;
};

/// Checks I(X;Z) >= I(X;Y) + I(Y;Z) - H(Y) within 1e-9.
TriangleReport triangle_bound_check(const JointDistribution& dist,
                                    const std::vector<std::string>& x,
                                    const std::vector<std::string>& y,
                                    const std::vector<std::string>& z);

/// Message ensembles for edge-signal statistics.
struct MessageDistribution {
  enum class Kind {
    uniform_messages,  // uniform over the whole message space
    uniform_subset,    // uniform over `subset`
    uniform_a_tuples,  // uniform a-tuple injected on the a edges (gadget only)
  };
  Kind kind = Kind::uniform_messages;
  std::vector<std::uint64_t> subset;

  static MessageDistribution uniform() { return {}; }
  static MessageDistribution over(std::vector<std::uint64_t> messages) {
    return {Kind::uniform_subset, std::move(messages)};
  }
  static MessageDistribution uniform_a() { return {Kind::uniform_a_tuples, {}}; }
};

/// Joint pmf of the listed edge signals under zero-pattern evaluation of the
/// given message ensemble.
JointDistribution edge_joint_distribution(const NetworkCode& code, const NECInstance& inst,
                                          const std::vector<EdgeId>& edges,
                                          const MessageDistribution& mdist);

struct BoundParams {
  int n = 1;
  double eps = 0.0;
  int l = 1;
  int k = 1;
  bool uniform_a = false;
};

struct BoundReport {
  double value = 0.0;       // raw lower bound on I(z;z') in bits (may be negative)
  double normalized = 0.0;  // value / n
  double eps_prime = 0.0;
  bool domain_ok = true;    // eps' < 1 and l*eps' < 1
  bool vacuous = true;      // domain failure or value <= 0
};

/// Evaluates the closed-form lower bound
///   (1-e'-1/l)(1-le')(n + log2(1-e')) - (1/l + le')n
///   - e'n/((1-e')(1-le')) - 1 - 2ke'n/(1-e'),   e' = 4*eps,
/// scaled by (1-e') when uniform_a is set. Reports the raw value plus a
/// vacuity flag instead of clamping.
BoundReport rate_lower_bound(const BoundParams& p);

}  // namespace necred
