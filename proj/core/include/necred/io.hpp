#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "necred/code.hpp"
#include "necred/graph.hpp"

namespace necred {

/// Schema or validity failure while reading a document. Messages carry the
/// offending JSON path or byte position.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Instance = std::variant<UnicastInstance, NECInstance>;

/// Reads an instance document (format_version "1", kind "unicast" or "nec").
/// Unknown fields are rejected; the instance must pass validate_instance.
Instance parse_instance(const std::string& text);

/// Canonical serialization: sorted object keys, two-space indent, trailing
/// newline, adversary sets in canonical order. parse . serialize is the
/// identity on canonical documents, byte for byte.
std::string serialize_instance(const Instance& inst);
std::string serialize_instance(const UnicastInstance& inst);
std::string serialize_instance(const NECInstance& inst);

/// Reads a code document. Structural checks only; pass an instance to
/// validate table shapes against it.
NetworkCode parse_code(const std::string& text);
NetworkCode parse_code(const std::string& text, const Instance& inst);

std::string serialize_code(const NetworkCode& code);

}  // namespace necred
