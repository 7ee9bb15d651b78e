// Command-line front end: every subcommand prints a JSON report on stdout
// and encodes its verdict in the exit status.
//   0  success / feasible / holds
//   1  verified negative (counterexample, infeasible, violated bound)
//   2  usage error, malformed input, or size refusal

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "necred/adversary.hpp"
#include "necred/audit.hpp"
#include "necred/evaluate.hpp"
#include "necred/infotools.hpp"
#include "necred/io.hpp"
#include "necred/oracle.hpp"
#include "necred/reduction.hpp"

using nlohmann::json;
using namespace necred;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

json rational_json(const Rational& r) {
  json j;
  j["exact"] = r.str();
  j["real"] = r.convert_to<double>();
  return j;
}

json pattern_json(const ErrorPattern& p) {
  json j = json::object();
  for (const auto& [edge, value] : p.values)
    if (value != 0) j[edge] = value;
  return j;
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

NetworkCode load_code(const std::string& path, const Instance& inst) {
  return parse_code(read_file(path), inst);
}

const NECInstance& as_nec(const Instance& inst) {
  if (!std::holds_alternative<NECInstance>(inst))
    throw std::invalid_argument("expected an nec instance");
  return std::get<NECInstance>(inst);
}

const UnicastInstance& as_unicast(const Instance& inst) {
  if (!std::holds_alternative<UnicastInstance>(inst))
    throw std::invalid_argument("expected a unicast instance");
  return std::get<UnicastInstance>(inst);
}

struct CommonOpts {
  std::string instance_path;
  std::string code_path;
  std::string out_path;
  int jobs = 1;
};

int cmd_reduce(const CommonOpts& opt) {
  auto inst = load_instance(opt.instance_path);
  auto result = reduce(as_unicast(inst));
  auto cut = min_cut(result.instance.graph, result.instance.source, result.instance.terminal);

  json report;
  report["command"] = "reduce";
  report["nodes"] = result.instance.graph.nodes.size();
  report["edges"] = result.instance.graph.edges.size();
  report["adversary_sets"] = result.instance.adversary.size();
  report["source"] = result.instance.source;
  report["terminal"] = result.instance.terminal;
  report["min_cut"] = cut.value;
  const std::string doc = serialize_instance(result.instance);
  if (!opt.out_path.empty()) {
    write_file(opt.out_path, doc);
    report["out"] = opt.out_path;
  } else {
    report["instance"] = json::parse(doc);
  }
  emit(report);
  return kExitOk;
}

int cmd_lift(const CommonOpts& opt, bool force) {
  auto inst = load_instance(opt.instance_path);
  const auto& uinst = as_unicast(inst);
  auto code = load_code(opt.code_path, inst);
  auto reduced = reduce(uinst);
  auto lifted = lift_code(code, uinst, reduced.instance);

  json report;
  report["command"] = "lift";
  report["premise_ok"] = lifted.premise_ok;
  if (!lifted.premise_ok) {
    report["error"] = "premise violated: unicast code not zero-error";
    json cex;
    cex["message"] = lifted.premise_counterexample->message;
    cex["message_tuple"] = lifted.premise_counterexample->message_tuple;
    cex["failed_terminal"] = lifted.premise_counterexample->failed_terminal;
    cex["decoded"] = lifted.premise_counterexample->decoded;
    report["counterexample"] = cex;
  }
  const bool emit_code = lifted.premise_ok || force;
  if (emit_code) {
    report["forced"] = !lifted.premise_ok;
    const std::string doc = serialize_code(lifted.code);
    if (!opt.out_path.empty()) {
      write_file(opt.out_path, doc);
      report["out"] = opt.out_path;
    } else {
      report["code"] = json::parse(doc);
    }
  }
  emit(report);
  return lifted.premise_ok ? kExitOk : kExitNegative;
}

json chain_json(const BijectionChain& chain) {
  json branches = json::array();
  for (const auto& br : chain.branches) {
    json b;
    b["a_to_x"] = br.a_to_x;
    b["x_to_b"] = br.x_to_b;
    b["b_to_zp"] = br.b_to_zp;
    b["a_to_z"] = br.a_to_z;
    branches.push_back(b);
  }
  return branches;
}

int cmd_extract(const CommonOpts& opt) {
  auto inst = load_instance(opt.instance_path);
  const auto& nec = as_nec(inst);
  auto code = load_code(opt.code_path, inst);
  auto outcome = extract_code(code, nec, opt.jobs);

  json report;
  report["command"] = "extract";
  if (auto* ok = std::get_if<ExtractResult>(&outcome)) {
    report["ok"] = true;
    report["normalized"] = ok->normalized;
    report["chain"] = chain_json(ok->chain);
    const std::string doc = serialize_code(ok->unicast_code);
    if (!opt.out_path.empty()) {
      write_file(opt.out_path, doc);
      report["out"] = opt.out_path;
    } else {
      report["code"] = json::parse(doc);
    }
    emit(report);
    return kExitOk;
  }
  report["ok"] = false;
  if (auto* premise = std::get_if<ExtractPremiseFailure>(&outcome)) {
    report["error"] = "premise violated: nec code not zero-error";
    json cex;
    cex["message"] = premise->counterexample.message;
    cex["pattern"] = pattern_json(premise->counterexample.pattern);
    cex["decoded"] = premise->counterexample.decoded;
    report["counterexample"] = cex;
  } else {
    const auto& v = std::get<BijectionViolation>(outcome);
    report["error"] = "bijection chain violated";
    report["violation"] = {{"branch", v.branch},
                           {"relation", v.relation},
                           {"witnesses", {v.witness_m1, v.witness_m2}}};
  }
  emit(report);
  return kExitNegative;
}

int cmd_verify(const CommonOpts& opt) {
  auto inst = load_instance(opt.instance_path);
  auto code = load_code(opt.code_path, inst);

  json report;
  report["command"] = "verify";
  if (std::holds_alternative<NECInstance>(inst)) {
    auto result = check_zero_error(code, std::get<NECInstance>(inst), opt.jobs);
    report["ok"] = result.ok();
    report["evaluations"] = result.evaluations.str();
    if (!result.ok()) {
      json cex;
      cex["message"] = result.counterexample->message;
      cex["pattern"] = pattern_json(result.counterexample->pattern);
      cex["decoded"] = result.counterexample->decoded;
      report["counterexample"] = cex;
    }
    emit(report);
    return result.ok() ? kExitOk : kExitNegative;
  }
  auto result = check_unicast_zero_error(code, std::get<UnicastInstance>(inst), opt.jobs);
  report["ok"] = result.ok();
  report["evaluations"] = result.evaluations.str();
  if (!result.ok()) {
    json cex;
    cex["message"] = result.counterexample->message;
    cex["message_tuple"] = result.counterexample->message_tuple;
    cex["failed_terminal"] = result.counterexample->failed_terminal;
    cex["decoded"] = result.counterexample->decoded;
    report["counterexample"] = cex;
  }
  emit(report);
  return result.ok() ? kExitOk : kExitNegative;
}

json message_list_json(const std::vector<std::uint64_t>& messages) {
  constexpr std::size_t kListCap = 4096;
  json j;
  j["count"] = messages.size();
  if (messages.size() <= kListCap) j["members"] = messages;
  return j;
}

int cmd_classify(const CommonOpts& opt) {
  auto inst = load_instance(opt.instance_path);
  const auto& nec = as_nec(inst);
  auto code = load_code(opt.code_path, inst);
  auto cls = classify_messages(code, nec, opt.jobs);

  json report;
  report["command"] = "classify";
  report["n"] = cls.n;
  report["k"] = cls.k;
  report["good"] = message_list_json(cls.good);
  report["bad"] = message_list_json(cls.bad);
  report["poor"] = message_list_json(cls.poor);
  report["circle"] = message_list_json(cls.circle);
  report["epsilon"] = rational_json(cls.epsilon);
  report["epsilon_prime"] = rational_json(cls.epsilon_prime);
  emit(report);
  return cls.epsilon == 0 ? kExitOk : kExitNegative;
}

int cmd_audit(const CommonOpts& opt, int l) {
  auto inst = load_instance(opt.instance_path);
  const auto& nec = as_nec(inst);
  auto code = load_code(opt.code_path, inst);
  auto cls = classify_messages(code, nec, opt.jobs);
  auto sets = compute_signal_sets(code, nec, cls, l);
  auto audit = audit_counting_bounds(cls, sets, l);

  json report;
  report["command"] = "audit";
  report["l"] = l;
  report["epsilon"] = rational_json(cls.epsilon);
  json rows = json::array();
  for (const auto& r : audit.rows) {
    rows.push_back({{"name", r.name},
                    {"lhs", rational_json(r.lhs)},
                    {"rhs", rational_json(r.rhs)},
                    {"direction", r.direction},
                    {"holds", r.holds}});
  }
  report["rows"] = rows;
  report["all_hold"] = audit.all_hold();
  emit(report);
  return audit.all_hold() ? kExitOk : kExitNegative;
}

int cmd_oracle(const CommonOpts& opt, int n, int rate_bits, const std::string& budget_str,
               double max_seconds, const std::string& hint_path, bool no_shortcut) {
  auto inst = load_instance(opt.instance_path);
  SearchBudget budget;
  budget.n = n;
  if (!budget_str.empty()) budget.max_codes = BigInt(budget_str);
  budget.max_seconds = max_seconds;

  const auto t0 = std::chrono::steady_clock::now();
  SearchVerdict verdict;
  if (std::holds_alternative<UnicastInstance>(inst)) {
    verdict = search_unicast(std::get<UnicastInstance>(inst), budget, opt.jobs);
  } else {
    if (rate_bits < 1) throw std::invalid_argument("--rate-bits is required for nec instances");
    NecSearchOptions options;
    options.jobs = opt.jobs;
    options.allow_reduction_shortcut = !no_shortcut;
    NetworkCode hint;
    if (!hint_path.empty()) {
      hint = load_code(hint_path, inst);
      options.witness_hint = &hint;
    }
    verdict = search_nec(std::get<NECInstance>(inst), rate_bits, budget, options);
  }
  // Timing goes to stderr: the stdout report stays byte-deterministic.
  std::cerr << "oracle: " << verdict.strategy << " finished in "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
            << "s\n";

  json report;
  report["command"] = "oracle";
  report["n"] = verdict.n;
  report["space_size"] = verdict.space_size.str();
  report["strategy"] = verdict.strategy;
  if (verdict.hint_rejected) report["hint_rejected"] = true;
  switch (verdict.kind) {
    case SearchVerdict::Kind::feasible: {
      report["verdict"] = "feasible";
      if (verdict.witness_index) report["witness_index"] = verdict.witness_index->str();
      const std::string doc = serialize_code(*verdict.witness);
      if (!opt.out_path.empty()) {
        write_file(opt.out_path, doc);
        report["out"] = opt.out_path;
      } else {
        report["witness"] = json::parse(doc);
      }
      emit(report);
      return kExitOk;
    }
    case SearchVerdict::Kind::infeasible:
      report["verdict"] = "infeasible at n=" + std::to_string(verdict.n);
      emit(report);
      return kExitNegative;
    case SearchVerdict::Kind::exhausted:
    default:
      report["verdict"] = "exhausted-budget";
      report["detail"] = verdict.detail;
      emit(report);
      return kExitUsage;
  }
}

int cmd_info(const CommonOpts& opt, const std::string& dist_name,
             const std::string& edges_csv) {
  auto inst = load_instance(opt.instance_path);
  const auto& nec = as_nec(inst);
  auto code = load_code(opt.code_path, inst);

  MessageDistribution mdist;
  if (dist_name == "uniform") {
    mdist = MessageDistribution::uniform();
  } else if (dist_name == "circle") {
    auto cls = classify_messages(code, nec, opt.jobs);
    if (cls.circle.empty()) throw std::invalid_argument("circle message set is empty");
    mdist = MessageDistribution::over(cls.circle);
  } else if (dist_name == "uniform-a") {
    mdist = MessageDistribution::uniform_a();
  } else {
    throw std::invalid_argument("--dist must be uniform, circle or uniform-a");
  }

  json report;
  report["command"] = "info";
  report["dist"] = dist_name;

  if (!edges_csv.empty()) {
    std::vector<EdgeId> edges;
    std::stringstream ss(edges_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) edges.push_back(item);
    auto dist = edge_joint_distribution(code, nec, edges, mdist);
    json pmf = json::array();
    for (const auto& [tuple, p] : dist.pmf())
      pmf.push_back({{"values", tuple}, {"p", rational_json(p)}});
    report["edges"] = edges;
    report["pmf"] = pmf;
    report["entropy"] = entropy(dist, dist.variables());
    emit(report);
    return kExitOk;
  }

  BranchWiring wiring = BranchWiring::from_instance(nec);
  json branches = json::array();
  bool saturated = true;
  for (int i = 0; i < wiring.k(); ++i) {
    const auto& br = wiring.branches[i];
    auto dist = edge_joint_distribution(code, nec, {br.z, br.zp}, mdist);
    const double mi = mutual_information(dist, {br.z}, {br.zp});
    const double hz = entropy(dist, {br.z});
    const double hzp = entropy(dist, {br.zp});
    saturated = saturated && std::abs(mi - code.n) <= 1e-9;
    branches.push_back({{"branch", i + 1},
                        {"I_z_zp", mi},
                        {"H_z", hz},
                        {"H_zp", hzp}});
  }
  report["n"] = code.n;
  report["branches"] = branches;
  report["saturated"] = saturated;
  emit(report);
  return saturated ? kExitOk : kExitNegative;
}

int cmd_bound(int n, double eps, int l, int k, bool uniform_a) {
  BoundParams params{n, eps, l, k, uniform_a};
  auto rep = rate_lower_bound(params);

  json report;
  report["command"] = "bound";
  report["n"] = n;
  report["eps"] = eps;
  report["l"] = l;
  report["k"] = k;
  report["uniform_a"] = uniform_a;
  report["eps_prime"] = rep.eps_prime;
  report["domain_ok"] = rep.domain_ok;
  report["vacuous"] = rep.vacuous;
  if (rep.domain_ok) {
    report["value"] = rep.value;
    report["normalized"] = rep.normalized;
  } else {
    report["value"] = nullptr;
    report["normalized"] = nullptr;
  }
  emit(report);
  return rep.vacuous ? kExitNegative : kExitOk;
}

int cmd_mincut(const CommonOpts& opt, const std::string& src, const std::string& dst) {
  auto inst = load_instance(opt.instance_path);
  json report;
  report["command"] = "mincut";

  auto cut_json = [](const CutReport& cut) {
    return json{{"value", cut.value}, {"cut_edges", cut.cut_edges}};
  };

  if (!src.empty() || !dst.empty()) {
    if (src.empty() || dst.empty())
      throw std::invalid_argument("--source and --terminal must be given together");
    const NetworkGraph& g = std::holds_alternative<NECInstance>(inst)
                                ? std::get<NECInstance>(inst).graph
                                : std::get<UnicastInstance>(inst).graph;
    auto cut = min_cut(g, src, dst);
    report["cut"] = cut_json(cut);
    emit(report);
    return cut.value > 0 ? kExitOk : kExitNegative;
  }

  if (std::holds_alternative<NECInstance>(inst)) {
    const auto& nec = std::get<NECInstance>(inst);
    auto cut = min_cut(nec.graph, nec.source, nec.terminal);
    report["cut"] = cut_json(cut);
    emit(report);
    return cut.value > 0 ? kExitOk : kExitNegative;
  }

  const auto& uni = std::get<UnicastInstance>(inst);
  json cuts = json::array();
  bool positive = true;
  for (const auto& p : uni.pairs) {
    auto cut = min_cut(uni.graph, p.source, p.terminal);
    positive = positive && cut.value > 0;
    cuts.push_back({{"source", p.source},
                    {"terminal", p.terminal},
                    {"cut", cut_json(cut)}});
  }
  report["pairs"] = cuts;
  emit(report);
  return positive ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiple-unicast to network-error-correction reduction toolkit"};
  app.require_subcommand(1);

  CommonOpts opt;
  int n = 1;
  int rate_bits = 0;
  int l = 2;
  int k = 1;
  double eps = 0.0;
  std::string budget_str;
  double max_seconds = 600.0;
  std::string hint_path;
  std::string dist_name = "uniform";
  std::string edges_csv;
  std::string src, dst;
  bool force = false;
  bool no_shortcut = false;
  bool uniform_a = false;

  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("--instance", opt.instance_path, "instance JSON file")->required();
  };
  auto add_code = [&](CLI::App* cmd) {
    cmd->add_option("--code", opt.code_path, "code JSON file")->required();
  };
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out_path, "output file path");
  };
  auto add_jobs = [&](CLI::App* cmd) {
    cmd->add_option("--jobs", opt.jobs, "parallel worker hint")->check(CLI::PositiveNumber);
  };

  auto* creduce = app.add_subcommand("reduce", "build the gadget instance for a unicast problem");
  add_instance(creduce);
  add_out(creduce);

  auto* clift = app.add_subcommand("lift", "lift a unicast code onto the gadget instance");
  add_instance(clift);
  add_code(clift);
  add_out(clift);
  clift->add_flag("--force", force, "emit the lifted code even if the premise fails");

  auto* cextract = app.add_subcommand("extract", "extract a unicast code from a gadget code");
  add_instance(cextract);
  add_code(cextract);
  add_out(cextract);
  add_jobs(cextract);

  auto* cverify = app.add_subcommand("verify", "exhaustive zero-error check");
  add_instance(cverify);
  add_code(cverify);
  add_jobs(cverify);

  auto* cclassify = app.add_subcommand("classify", "good/bad/poor message classification");
  add_instance(cclassify);
  add_code(cclassify);
  add_jobs(cclassify);

  auto* caudit = app.add_subcommand("audit", "counting-bound audit of a classification");
  add_instance(caudit);
  add_code(caudit);
  add_jobs(caudit);
  caudit->add_option("--l", l, "level-set parameter (default 2)")->check(CLI::PositiveNumber);

  auto* coracle = app.add_subcommand("oracle", "brute-force feasibility search");
  add_instance(coracle);
  add_out(coracle);
  add_jobs(coracle);
  coracle->add_option("--n", n, "block length")->check(CLI::PositiveNumber);
  coracle->add_option("--rate-bits", rate_bits, "message bits (nec instances)");
  coracle->add_option("--budget", budget_str, "max candidate encoders (default 100000000)");
  coracle->add_option("--max-seconds", max_seconds, "wall-clock cap");
  coracle->add_option("--hint", hint_path, "candidate witness to verify first");
  coracle->add_flag("--no-reduction-shortcut", no_shortcut,
                    "disable the gadget-aware decision strategy");

  auto* cinfo = app.add_subcommand("info", "per-branch mutual information report");
  add_instance(cinfo);
  add_code(cinfo);
  add_jobs(cinfo);
  cinfo->add_option("--dist", dist_name, "message ensemble: uniform, circle or uniform-a");
  cinfo->add_option("--edges", edges_csv, "comma-separated edges for a joint distribution");

  auto* cbound = app.add_subcommand("bound", "closed-form rate bound evaluator");
  cbound->add_option("--n", n, "block length")->check(CLI::PositiveNumber)->required();
  cbound->add_option("--eps", eps, "error probability")->required();
  cbound->add_option("--l", l, "level parameter")->check(CLI::PositiveNumber)->required();
  cbound->add_option("--k", k, "branch count")->check(CLI::PositiveNumber)->required();
  cbound->add_flag("--uniform-a", uniform_a, "apply the independent-input correction factor");

  auto* cmincut = app.add_subcommand("mincut", "max-flow min-cut report");
  add_instance(cmincut);
  cmincut->add_option("--source", src, "override source node");
  cmincut->add_option("--terminal", dst, "override terminal node");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    json err;
    err["error"] = e.what();
    emit(err);
    return kExitUsage;
  }

  try {
    if (creduce->parsed()) return cmd_reduce(opt);
    if (clift->parsed()) return cmd_lift(opt, force);
    if (cextract->parsed()) return cmd_extract(opt);
    if (cverify->parsed()) return cmd_verify(opt);
    if (cclassify->parsed()) return cmd_classify(opt);
    if (caudit->parsed()) return cmd_audit(opt, l);
    if (coracle->parsed())
      return cmd_oracle(opt, n, rate_bits, budget_str, max_seconds, hint_path, no_shortcut);
    if (cinfo->parsed()) return cmd_info(opt, dist_name, edges_csv);
    if (cbound->parsed()) return cmd_bound(n, eps, l, k, uniform_a);
    if (cmincut->parsed()) return cmd_mincut(opt, src, dst);
  } catch (const SizeRefusal& e) {
    json err;
    err["error"] = e.what();
    err["size"] = e.size().str();
    emit(err);
    return kExitUsage;
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    emit(err);
    return kExitUsage;
  }
  return kExitUsage;
}
