#include "necred/io.hpp"

#include <set>

#include <json.hpp>

#include "necred/adversary.hpp"
#include "necred/evaluate.hpp"

namespace necred {

namespace {

using nlohmann::json;

void require_fields(const json& obj, const std::string& where,
                    const std::set<std::string>& required,
                    const std::set<std::string>& optional = {}) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& f : required)
    if (!obj.contains(f)) throw ParseError(where + ": missing field '" + f + "'");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!required.count(key) && !optional.count(key))
      throw ParseError(where + ": unknown field '" + key + "'");
  }
}

std::string get_string(const json& obj, const std::string& field, const std::string& where) {
  const auto& v = obj.at(field);
  if (!v.is_string()) throw ParseError(where + "." + field + ": expected a string");
  return v.get<std::string>();
}

std::int64_t get_int(const json& obj, const std::string& field, const std::string& where) {
  const auto& v = obj.at(field);
  if (!v.is_number_integer() || v.is_number_float())
    throw ParseError(where + "." + field + ": expected an integer");
  return v.get<std::int64_t>();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

NetworkGraph graph_from_json(const json& doc) {
  NetworkGraph g;
  const auto& nodes = doc.at("nodes");
  if (!nodes.is_array()) throw ParseError("nodes: expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_string())
      throw ParseError("nodes[" + std::to_string(i) + "]: expected a string");
    g.nodes.push_back(nodes[i].get<std::string>());
  }
  const auto& edges = doc.at("edges");
  if (!edges.is_array()) throw ParseError("edges: expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    require_fields(edges[i], where, {"id", "from", "to", "capacity"});
    Edge e;
    e.id = get_string(edges[i], "id", where);
    e.from = get_string(edges[i], "from", where);
    e.to = get_string(edges[i], "to", where);
    const auto cap = get_int(edges[i], "capacity", where);
    if (cap < 1 || cap > 62) throw ParseError(where + ".capacity: must be in [1, 62]");
    e.capacity = static_cast<int>(cap);
    if (e.id.rfind("msg:", 0) == 0)
      throw ParseError(where + ".id: edge ids must not start with 'msg:'");
    g.edges.push_back(std::move(e));
  }
  return g;
}

json graph_to_json(const NetworkGraph& g) {
  json doc;
  doc["nodes"] = g.nodes;
  json edges = json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"capacity", e.capacity}});
  doc["edges"] = edges;
  return doc;
}

void check_valid(const ValidationReport& rep) {
  if (!rep.ok()) throw ParseError("instance invalid: " + rep.violations.front());
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("instance: expected an object");
  const std::string kind =
      doc.contains("kind") && doc.at("kind").is_string() ? doc.at("kind").get<std::string>() : "";

  if (kind == "unicast") {
    require_fields(doc, "instance", {"format_version", "kind", "nodes", "edges", "pairs"});
    if (get_string(doc, "format_version", "instance") != "1")
      throw ParseError("instance.format_version: expected \"1\"");
    UnicastInstance inst;
    inst.graph = graph_from_json(doc);
    const auto& pairs = doc.at("pairs");
    if (!pairs.is_array()) throw ParseError("pairs: expected an array");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string where = "pairs[" + std::to_string(i) + "]";
      require_fields(pairs[i], where, {"source", "terminal"});
      inst.pairs.push_back(
          {get_string(pairs[i], "source", where), get_string(pairs[i], "terminal", where)});
    }
    check_valid(validate_instance(inst));
    return inst;
  }

  if (kind == "nec") {
    require_fields(doc, "instance",
                   {"format_version", "kind", "nodes", "edges", "source", "terminal",
                    "adversary"},
                   {"roles"});
    if (get_string(doc, "format_version", "instance") != "1")
      throw ParseError("instance.format_version: expected \"1\"");
    NECInstance inst;
    inst.graph = graph_from_json(doc);
    inst.source = get_string(doc, "source", "instance");
    inst.terminal = get_string(doc, "terminal", "instance");
    const auto& adv = doc.at("adversary");
    if (!adv.is_array()) throw ParseError("adversary: expected an array of edge-id arrays");
    for (std::size_t i = 0; i < adv.size(); ++i) {
      if (!adv[i].is_array())
        throw ParseError("adversary[" + std::to_string(i) + "]: expected an array");
      std::vector<EdgeId> set;
      for (const auto& id : adv[i]) {
        if (!id.is_string())
          throw ParseError("adversary[" + std::to_string(i) + "]: expected edge-id strings");
        set.push_back(id.get<std::string>());
      }
      inst.adversary.push_back(std::move(set));
    }
    if (doc.contains("roles")) {
      const auto& roles = doc.at("roles");
      if (!roles.is_object()) throw ParseError("roles: expected an object");
      for (const auto& [edge, tag] : roles.items()) {
        const std::string where = "roles." + edge;
        require_fields(tag, where, {"role", "branch"});
        RoleTag rt;
        if (!branch_role_from_string(get_string(tag, "role", where), rt.role))
          throw ParseError(where + ".role: unknown role");
        const auto b = get_int(tag, "branch", where);
        if (b < 0) throw ParseError(where + ".branch: must be nonnegative");
        rt.branch = static_cast<int>(b);
        inst.roles.emplace(edge, rt);
      }
    }
    check_valid(validate_instance(inst));
    return inst;
  }

  throw ParseError("instance.kind: expected \"unicast\" or \"nec\"");
}

std::string serialize_instance(const UnicastInstance& inst) {
  json doc = graph_to_json(inst.graph);
  doc["format_version"] = "1";
  doc["kind"] = "unicast";
  json pairs = json::array();
  for (const auto& p : inst.pairs)
    pairs.push_back({{"source", p.source}, {"terminal", p.terminal}});
  doc["pairs"] = pairs;
  return doc.dump(2) + "\n";
}

std::string serialize_instance(const NECInstance& inst) {
  json doc = graph_to_json(inst.graph);
  doc["format_version"] = "1";
  doc["kind"] = "nec";
  doc["source"] = inst.source;
  doc["terminal"] = inst.terminal;
  AdversaryClass adv(inst.graph, inst.adversary);
  doc["adversary"] = adv.to_edge_ids(inst.graph);
  if (!inst.roles.empty()) {
    json roles = json::object();
    for (const auto& [edge, tag] : inst.roles)
      roles[edge] = {{"role", to_string(tag.role)}, {"branch", tag.branch}};
    doc["roles"] = roles;
  }
  return doc.dump(2) + "\n";
}

std::string serialize_instance(const Instance& inst) {
  return std::visit([](const auto& i) { return serialize_instance(i); }, inst);
}

NetworkCode parse_code(const std::string& text) {
  json doc = parse_json(text);
  require_fields(doc, "code",
                 {"format_version", "n", "message_bits", "edge_functions", "decoders"});
  if (get_string(doc, "format_version", "code") != "1")
    throw ParseError("code.format_version: expected \"1\"");
  NetworkCode code;
  const auto n = get_int(doc, "n", "code");
  if (n < 1 || n > 62) throw ParseError("code.n: must be in [1, 62]");
  code.n = static_cast<int>(n);
  const auto mb = get_int(doc, "message_bits", "code");
  if (mb < 1 || mb > 62) throw ParseError("code.message_bits: must be in [1, 62]");
  code.message_bits = static_cast<int>(mb);

  auto parse_table = [&](const json& fn, const std::string& where, bool allow_message) {
    require_fields(fn, where, {"inputs", "table"});
    FunctionTable out;
    const auto& inputs = fn.at("inputs");
    if (!inputs.is_array()) throw ParseError(where + ".inputs: expected an array");
    for (const auto& in : inputs) {
      if (!in.is_string()) throw ParseError(where + ".inputs: expected strings");
      const std::string s = in.get<std::string>();
      if (s.rfind("msg:", 0) == 0) {
        if (!allow_message) throw ParseError(where + ".inputs: decoders cannot read messages");
        try {
          std::size_t pos = 0;
          const int slot = std::stoi(s.substr(4), &pos);
          if (pos != s.size() - 4 || slot < 0) throw std::invalid_argument("");
          out.inputs.push_back(CodeInput::for_message(slot));
        } catch (const std::exception&) {
          throw ParseError(where + ".inputs: malformed message slot '" + s + "'");
        }
      } else {
        out.inputs.push_back(CodeInput::for_edge(s));
      }
    }
    const auto& table = fn.at("table");
    if (!table.is_array()) throw ParseError(where + ".table: expected an array");
    for (const auto& v : table) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ParseError(where + ".table: expected nonnegative integers");
      out.table.push_back(v.get<std::uint64_t>());
    }
    return out;
  };

  const auto& fns = doc.at("edge_functions");
  if (!fns.is_object()) throw ParseError("edge_functions: expected an object");
  for (const auto& [edge, fn] : fns.items())
    code.edge_functions.emplace(edge, parse_table(fn, "edge_functions." + edge, true));

  const auto& decoders = doc.at("decoders");
  if (!decoders.is_object()) throw ParseError("decoders: expected an object");
  for (const auto& [node, fn] : decoders.items())
    code.decoders.emplace(node, parse_table(fn, "decoders." + node, false));

  return code;
}

NetworkCode parse_code(const std::string& text, const Instance& inst) {
  NetworkCode code = parse_code(text);
  try {
    std::visit(
        [&](const auto& i) {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, UnicastInstance>) CodeShape::for_unicast(code, i);
          else CodeShape::for_nec(code, i);
        },
        inst);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return code;
}

std::string serialize_code(const NetworkCode& code) {
  json doc;
  doc["format_version"] = "1";
  doc["n"] = code.n;
  doc["message_bits"] = code.message_bits;

  auto table_to_json = [](const FunctionTable& fn) {
    json out;
    json inputs = json::array();
    for (const auto& in : fn.inputs) {
      if (in.kind == CodeInput::Kind::message)
        inputs.push_back("msg:" + std::to_string(in.slot));
      else inputs.push_back(in.edge);
    }
    out["inputs"] = inputs;
    out["table"] = fn.table;
    return out;
  };

  json fns = json::object();
  for (const auto& [edge, fn] : code.edge_functions) fns[edge] = table_to_json(fn);
  doc["edge_functions"] = fns;
  json decoders = json::object();
  for (const auto& [node, fn] : code.decoders) decoders[node] = table_to_json(fn);
  doc["decoders"] = decoders;
  return doc.dump(2) + "\n";
}

}  // namespace necred
