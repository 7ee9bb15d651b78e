#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "necred/graph.hpp"

namespace necred {

/// One input of an encoding or decoding function: either the received value
/// of an incoming edge of the function's node, or a source-message slot.
struct CodeInput {
  enum class Kind { edge, message };
  Kind kind = Kind::edge;
  EdgeId edge;   // kind == edge
  int slot = 0;  // kind == message

  static CodeInput for_edge(EdgeId id) { return {Kind::edge, std::move(id), 0}; }
  static CodeInput for_message(int slot) { return {Kind::message, {}, slot}; }

  friend bool operator==(const CodeInput&, const CodeInput&) = default;
};

/// An explicit function table. Inputs are indexed row-major in listed order:
/// with input alphabets A_1..A_r, the row of values (v_1..v_r) is
/// ((v_1*A_2 + v_2)*A_3 + v_3)... — the first input is most significant.
struct FunctionTable {
  std::vector<CodeInput> inputs;
  std::vector<std::uint64_t> table;

  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
};

/// A deterministic network code of block length n. Edge e carries values in
/// [0, 2^(c_e * n)). Message slots are packed little-endian into a single
/// message integer: slot i of width w_i occupies bits [sum w_j (j<i), ...).
/// A unicast code has k slots of n bits each (message_bits = k*n); an NEC
/// code has one slot of message_bits bits.
struct NetworkCode {
  int n = 1;
  int message_bits = 1;
  std::map<EdgeId, FunctionTable> edge_functions;
  std::map<NodeId, FunctionTable> decoders;

  friend bool operator==(const NetworkCode&, const NetworkCode&) = default;
};

/// Adversarial error signal: edge -> value in the edge alphabet. The support
/// is the set of edges with a nonzero value; zero entries are dropped by
/// normalize().
struct ErrorPattern {
  std::map<EdgeId, std::uint64_t> values;

  std::uint64_t value(const EdgeId& e) const {
    auto it = values.find(e);
    return it == values.end() ? 0 : it->second;
  }
  std::vector<EdgeId> support() const {
    std::vector<EdgeId> out;
    for (const auto& [e, v] : values)
      if (v != 0) out.push_back(e);
    return out;
  }
  void normalize() {
    for (auto it = values.begin(); it != values.end();)
      it = it->second == 0 ? values.erase(it) : std::next(it);
  }

  friend bool operator==(const ErrorPattern&, const ErrorPattern&) = default;
};

/// Full record of one evaluation: per-edge transmitted and received values
/// (received = transmitted XOR error) and per-terminal decoded messages.
struct EvalTrace {
  std::map<EdgeId, std::uint64_t> transmitted;
  std::map<EdgeId, std::uint64_t> received;
  std::map<NodeId, std::uint64_t> decoded;
};

}  // namespace necred
