#include "necred/infotools.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "necred/evaluate.hpp"
#include "necred/reduction.hpp"

namespace necred {

JointDistribution::JointDistribution(std::vector<std::string> variables,
                                     std::map<std::vector<std::uint64_t>, Rational> pmf)
    : vars_(std::move(variables)), pmf_(std::move(pmf)) {
  Rational total = 0;
  for (const auto& [tuple, p] : pmf_) {
    if (tuple.size() != vars_.size())
      throw std::invalid_argument("pmf tuple arity does not match variable count");
    if (p < 0) throw std::invalid_argument("negative probability");
    total += p;
  }
  if (total != 1) throw std::invalid_argument("pmf does not sum to 1");
}

JointDistribution JointDistribution::from_weights(
    std::vector<std::string> variables, std::map<std::vector<std::uint64_t>, std::uint64_t> w) {
  BigInt total = 0;
  for (const auto& [tuple, weight] : w) total += weight;
  if (total == 0) throw std::invalid_argument("all weights are zero");
  std::map<std::vector<std::uint64_t>, Rational> pmf;
  for (const auto& [tuple, weight] : w)
    if (weight != 0) pmf.emplace(tuple, Rational(BigInt(weight), total));
  return JointDistribution(std::move(variables), std::move(pmf));
}

JointDistribution JointDistribution::from_probabilities(
    std::vector<std::string> variables, std::map<std::vector<std::uint64_t>, double> p) {
  Rational total = 0;
  std::map<std::vector<std::uint64_t>, Rational> pmf;
  for (const auto& [tuple, prob] : p) {
    if (prob < 0) throw std::invalid_argument("negative probability");
    if (prob == 0) continue;
    Rational r(prob);  // doubles convert exactly
    pmf.emplace(tuple, r);
    total += r;
  }
  if (boost::multiprecision::abs(Rational(total - 1)).convert_to<double>() > 1e-12)
    throw std::invalid_argument("pmf does not sum to 1 within 1e-12");
  for (auto& [tuple, prob] : pmf) prob /= total;
  return JointDistribution(std::move(variables), std::move(pmf));
}

std::vector<std::size_t> JointDistribution::indices_of(
    const std::vector<std::string>& vars) const {
  std::vector<std::size_t> idx;
  idx.reserve(vars.size());
  for (const auto& v : vars) {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) throw std::invalid_argument("unknown variable name: " + v);
    idx.push_back(static_cast<std::size_t>(it - vars_.begin()));
  }
  return idx;
}

std::map<std::vector<std::uint64_t>, Rational> JointDistribution::marginal(
    const std::vector<std::string>& vars) const {
  auto idx = indices_of(vars);
  std::map<std::vector<std::uint64_t>, Rational> out;
  std::vector<std::uint64_t> key(idx.size());
  for (const auto& [tuple, p] : pmf_) {
    for (std::size_t j = 0; j < idx.size(); ++j) key[j] = tuple[idx[j]];
    out[key] += p;
  }
  return out;
}

double entropy(const JointDistribution& dist, const std::vector<std::string>& vars) {
  double h = 0;
  for (const auto& [tuple, p] : dist.marginal(vars)) {
    const double pd = p.convert_to<double>();
    if (pd > 0) h -= pd * std::log2(pd);
  }
  return h;
}

double mutual_information(const JointDistribution& dist, const std::vector<std::string>& x,
                          const std::vector<std::string>& z) {
  for (const auto& vx : x)
    for (const auto& vz : z)
      if (vx == vz) throw std::invalid_argument("variable groups must be disjoint: " + vx);
  std::vector<std::string> xz = x;
  xz.insert(xz.end(), z.begin(), z.end());
  return entropy(dist, x) + entropy(dist, z) - entropy(dist, xz);
}

TriangleReport triangle_bound_check(const JointDistribution& dist,
                                    const std::vector<std::string>& x,
                                    const std::vector<std::string>& y,
                                    const std::vector<std::string>& z) {
  TriangleReport rep;
  rep.lhs = mutual_information(dist, x, z);
  rep.rhs = mutual_information(dist, x, y) + mutual_information(dist, y, z) - entropy(dist, y);
  rep.holds = rep.lhs >= rep.rhs - 1e-9;
  return rep;
}

JointDistribution edge_joint_distribution(const NetworkCode& code, const NECInstance& inst,
                                          const std::vector<EdgeId>& edges,
                                          const MessageDistribution& mdist) {
  auto shape = CodeShape::for_nec(code, inst);
  GraphIndex ix(inst.graph);
  std::vector<int> watch;
  std::vector<std::string> names;
  for (const auto& id : edges) {
    int e = ix.edge_index(id);
    if (e < 0) throw std::invalid_argument("unknown edge: " + id);
    watch.push_back(e);
    names.push_back(id);
  }

  std::map<std::vector<std::uint64_t>, std::uint64_t> counts;
  const std::vector<std::uint64_t> no_error;

  if (mdist.kind == MessageDistribution::Kind::uniform_a_tuples) {
    // Replace the a encoders with injected values and run the rest of the
    // code unchanged under the zero pattern.
    BranchWiring wiring = BranchWiring::from_instance(inst);
    const int k = wiring.k();
    const int n = code.n;
    if (code.message_bits != k * n)
      throw std::invalid_argument("uniform-a injection requires a rate-k code");
    if (k * n > 40) throw SizeRefusal("a-tuple space too large", BigInt(1) << (k * n));
    NetworkCode injected = code;
    for (int i = 0; i < k; ++i) {
      FunctionTable fn;
      fn.inputs = {CodeInput::for_message(0)};
      fn.table.resize(pow2(code.message_bits));
      injected.edge_functions[wiring.branches[i].a] = std::move(fn);
    }
    auto inj_shape = CodeShape::for_nec(injected, inst);
    // One a-tuple per message value: slot packing equals tuple packing.
    for (int i = 0; i < k; ++i) {
      auto& table = injected.edge_functions[wiring.branches[i].a].table;
      for (std::uint64_t m = 0; m < table.size(); ++m)
        table[m] = (m >> (i * n)) & (pow2(n) - 1);
    }
    CompiledCode cc(inj_shape);
    std::vector<std::uint64_t> key(watch.size());
    for (std::uint64_t m = 0; m < pow2(k * n); ++m) {
      cc.run({m}, no_error);
      for (std::size_t j = 0; j < watch.size(); ++j) key[j] = cc.received()[watch[j]];
      ++counts[key];
    }
    return JointDistribution::from_weights(std::move(names), std::move(counts));
  }

  std::vector<std::uint64_t> support;
  if (mdist.kind == MessageDistribution::Kind::uniform_subset) {
    support = mdist.subset;
    if (support.empty()) throw std::invalid_argument("empty message subset");
  } else {
    if (code.message_bits > 40)
      throw SizeRefusal("message space too large", BigInt(1) << code.message_bits);
    support.resize(pow2(code.message_bits));
    std::iota(support.begin(), support.end(), 0);
  }

  CompiledCode cc(shape);
  std::vector<std::uint64_t> key(watch.size());
  for (std::uint64_t m : support) {
    if (m >= pow2(code.message_bits)) throw std::invalid_argument("message out of range");
    cc.run(shape.unpack_message(m), no_error);
    for (std::size_t j = 0; j < watch.size(); ++j) key[j] = cc.received()[watch[j]];
    ++counts[key];
  }
  return JointDistribution::from_weights(std::move(names), std::move(counts));
}

BoundReport rate_lower_bound(const BoundParams& p) {
  if (p.n < 1 || p.l < 1 || p.k < 1) throw std::invalid_argument("n, l, k must be positive");
  if (p.eps < 0) throw std::invalid_argument("eps must be nonnegative");

  BoundReport rep;
  rep.eps_prime = 4.0 * p.eps;
  const double ep = rep.eps_prime;
  const double n = p.n;
  const double l = p.l;
  const double k = p.k;

  if (ep >= 1.0 || l * ep >= 1.0) {
    rep.domain_ok = false;
    rep.vacuous = true;
    rep.value = std::numeric_limits<double>::quiet_NaN();
    rep.normalized = rep.value;
    return rep;
  }

  const double term1 = (1.0 - ep - 1.0 / l) * (1.0 - l * ep) * (n + std::log2(1.0 - ep));
  const double term2 = (1.0 / l + l * ep) * n;
  const double term3 = ep * n / ((1.0 - ep) * (1.0 - l * ep));
  const double term4 = 1.0;
  const double term5 = 2.0 * k * ep * n / (1.0 - ep);
  double value = term1 - term2 - term3 - term4 - term5;
  if (p.uniform_a) value *= 1.0 - ep;

  rep.value = value;
  rep.normalized = value / n;
  rep.vacuous = !(value > 0.0);
  return rep;
}

}  // namespace necred
