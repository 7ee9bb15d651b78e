#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "necred/code.hpp"
#include "necred/evaluate.hpp"
#include "necred/graph.hpp"

namespace necred {

/// The gadget edges and nodes of one branch of a reduced instance.
struct BranchWiring {
  struct Branch {
    NodeId fanout;    // u_i
    NodeId combiner;  // B_i
    NodeId pair_source;    // s_i (head of z)
    NodeId pair_terminal;  // t_i (tail of z')
    EdgeId a, x, y, z, zp, b;
  };

  NodeId source;    // s
  NodeId terminal;  // t
  std::vector<Branch> branches;  // branch i at index i-1

  int k() const { return static_cast<int>(branches.size()); }

  /// Recovers the wiring from an instance's role tags. Throws
  /// std::invalid_argument when the roles do not describe a well-formed
  /// gadget.
  static BranchWiring from_instance(const NECInstance& inst);
};

struct ReduceResult {
  NECInstance instance;
  BranchWiring wiring;
};

/// Builds the single-source/single-terminal gadget around a k-unicast
/// instance: fresh nodes s, t, u_i, B_i; unit edges a_i: s->u_i,
/// x_i, y_i: u_i->B_i, z_i: u_i->s_i, z'_i: t_i->B_i, b_i: B_i->t; the
/// adversary holds every singleton except the a and b edges.
ReduceResult reduce(const UnicastInstance& inst);

/// Recovers the embedded unicast instance of a reduced instance (the
/// original network with pairs (s_i, t_i) in branch order).
UnicastInstance embedded_unicast(const NECInstance& reduced);

/// Structural requirements beyond validate_instance for an instance to be a
/// canonical reduce() image: gadget nodes carry only their role edges and the
/// adversary is exactly the singletons over everything but the a/b edges.
/// Empty result means the instance qualifies.
std::vector<std::string> reduced_instance_diagnostics(const NECInstance& inst);

struct LiftResult {
  NetworkCode code;
  bool premise_ok = false;  // the unicast code was zero-error
  std::optional<UnicastCounterexample> premise_counterexample;
};

/// Repetition-plus-majority lifting: the source splits its kn-bit message,
/// each branch carries M_i on a/x/y/z, the embedded network runs the unicast
/// code with each pair source fed from z_i, z'_i applies the pair terminal's
/// decoder, and B_i outputs the bitwise majority of (x_i, y_i, z'_i). The
/// unicast zero-error premise is checked and reported, never enforced:
/// callers decide what a violated premise means for them.
LiftResult lift_code(const NetworkCode& ucode, const UnicastInstance& uinst,
                     const NECInstance& reduced);

/// Per-branch value maps on [0, 2^n) recovered from zero-pattern simulation.
/// Each is a permutation when the source code is zero-error at rate k.
struct BijectionChain {
  struct Branch {
    std::vector<std::uint64_t> a_to_x, x_to_b, b_to_zp, a_to_z;
  };
  std::vector<Branch> branches;
};

/// First broken functional/injective/total relation found while building the
/// chain, with the two messages exhibiting it.
struct BijectionViolation {
  int branch = 0;                 // 1-based
  std::string relation;           // e.g. "x_1 not injective in a_1"
  std::uint64_t witness_m1 = 0;
  std::uint64_t witness_m2 = 0;
};

/// Simulates all messages under the zero pattern and checks that per branch
/// a->x, a->y, a->z, x->b and b->z' are total bijections of [0, 2^n).
std::variant<BijectionChain, BijectionViolation> build_bijection_chain(
    const NetworkCode& ncode, const NECInstance& reduced);

bool is_permutation(const std::vector<std::uint64_t>& map);

/// Rewrites each z_i to relay its received a_i verbatim, composing the old
/// z table into every function that read z_i. Terminal-observable behavior
/// is unchanged.
NetworkCode normalize_z_to_identity(const NetworkCode& ncode, const NECInstance& reduced);

struct ExtractResult {
  NetworkCode unicast_code;
  BijectionChain chain;
  bool normalized = false;  // the z := a rewrite was applied first
};

struct ExtractPremiseFailure {
  NecCounterexample counterexample;
};

using ExtractOutcome = std::variant<ExtractResult, ExtractPremiseFailure, BijectionViolation>;

/// Full code extraction: verifies the zero-error premise, builds the
/// bijection chain, and emits the unicast code in which each pair source
/// injects its z-signal through sigma_i = (a_i -> z_i) and each pair terminal
/// decodes through the inverse chain z' -> b -> x -> a.
ExtractOutcome extract_code(const NetworkCode& ncode, const NECInstance& reduced, int jobs = 1);

}  // namespace necred
