#include "qhom/weighted.hpp"

#include <sstream>

#include "qhom/util.hpp"

namespace qhom {
namespace {

double tau_sq(const Mat& m, int d) { return m.squaredNorm() / d; }

std::string tuple_str(const Tuple& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) os << ',';
    os << t[i];
  }
  return os.str();
}

std::string key_str(const Structure& source, const ConstraintKey& key) {
  return source.symbol(key.first).name + "(" + tuple_str(key.second) + ")";
}

void require_explicit(const StructurePtr& source) {
  if (!source) throw InputError("strategy has no source structure");
  if (source->is_lazy() || source->is_completion()) {
    throw InputError("defects are defined over explicit source structures");
  }
}

// Resolves the target symbol matching a source constraint and lists the
// satisfying answers in a fixed order.
std::vector<Tuple> satisfying_answers(const Structure& source,
                                      const Structure& target, int sym) {
  const int ts = target.symbol_index(source.symbol(sym).name);
  if (ts < 0) {
    throw InputError("target has no relation named " + source.symbol(sym).name);
  }
  std::vector<Tuple> out;
  target.for_each_tuple(ts, [&](const Tuple& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

ConstraintWeights resolve_weights(const StrategyRep& s,
                                  const ConstraintWeights* weights) {
  if (!weights) return uniform_constraint_weights(s.source);
  Rational total(0);
  for (const auto& [key, w] : *weights) {
    if (w < Rational(0)) throw InputError("constraint weights must be nonnegative");
    if (key.first < 0 ||
        key.first >= static_cast<int>(s.source->signature().size()) ||
        !s.source->contains(key.first, key.second)) {
      throw InputError("weight attached to a nonexistent constraint");
    }
    total = total + w;
  }
  if (!(total == Rational(1))) throw InputError("constraint weights must sum to 1");
  return *weights;
}

PairWeights resolve_pair_weights(const StrategyRep& s,
                                 const PairWeights* weights) {
  if (!weights) return uniform_pair_weights(s.source);
  Rational total(0);
  for (const auto& [key, w] : *weights) {
    if (w < Rational(0)) throw InputError("pair weights must be nonnegative");
    for (const ConstraintKey* k : {&key.first, &key.second}) {
      if (k->first < 0 ||
          k->first >= static_cast<int>(s.source->signature().size()) ||
          !s.source->contains(k->first, k->second)) {
        throw InputError("weight attached to a nonexistent constraint pair");
      }
    }
    total = total + w;
  }
  if (!(total == Rational(1))) throw InputError("pair weights must sum to 1");
  return *weights;
}

bool conflicting(const Tuple& vars1, const Tuple& ans1, const Tuple& vars2,
                 const Tuple& ans2) {
  for (size_t i = 0; i < vars1.size(); ++i) {
    for (size_t j = 0; j < vars2.size(); ++j) {
      if (vars1[i] == vars2[j] && ans1[i] != ans2[j]) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<ConstraintKey> constraints_of(const StructurePtr& source) {
  require_explicit(source);
  std::vector<ConstraintKey> out;
  for (int s = 0; s < static_cast<int>(source->signature().size()); ++s) {
    source->for_each_tuple(s, [&](const Tuple& t) {
      out.push_back({s, t});
      return true;
    });
  }
  if (out.empty()) throw InputError("structure has no constraints");
  return out;
}

ConstraintWeights uniform_constraint_weights(const StructurePtr& source) {
  const std::vector<ConstraintKey> keys = constraints_of(source);
  ConstraintWeights out;
  const Rational w(1, static_cast<int64_t>(keys.size()));
  for (const ConstraintKey& k : keys) out[k] = w;
  return out;
}

PairWeights uniform_pair_weights(const StructurePtr& source) {
  const std::vector<ConstraintKey> keys = constraints_of(source);
  PairWeights out;
  const Rational w(1, static_cast<int64_t>(keys.size() * keys.size()));
  for (const ConstraintKey& k1 : keys) {
    for (const ConstraintKey& k2 : keys) out[{k1, k2}] = w;
  }
  return out;
}

const Mat& StrategyRep::variable(Elem a, Elem b) const {
  auto it = variables.find({a, b});
  if (it == variables.end()) {
    throw InputError("strategy has no variable measurement for (" +
                     std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  return it->second;
}

const Mat& StrategyRep::constraint(const ConstraintKey& key,
                                   const Tuple& answer) const {
  auto it = constraints.find(key);
  if (it == constraints.end()) {
    throw InputError("strategy has no measurement for constraint " +
                     key_str(*source, key));
  }
  auto jt = it->second.find(answer);
  if (jt == it->second.end()) {
    throw InputError("constraint " + key_str(*source, key) +
                     " has no outcome (" + tuple_str(answer) + ")");
  }
  return jt->second;
}

StrategyRep product_strategy(const PvmRepresentation& rep) {
  require_explicit(rep.source);
  StrategyRep s;
  s.source = rep.source;
  s.target = rep.target;
  s.dimension = rep.dimension;
  s.variables = rep.matrices;
  for (const ConstraintKey& key : constraints_of(rep.source)) {
    const std::vector<Tuple> answers =
        satisfying_answers(*rep.source, *rep.target, key.first);
    std::map<Tuple, Mat> family;
    for (const Tuple& ans : answers) {
      Mat prod = Mat::Identity(rep.dimension, rep.dimension);
      for (size_t i = 0; i < ans.size(); ++i) {
        prod *= rep.at(key.second[i], ans[i]);
      }
      family[ans] = std::move(prod);
    }
    s.constraints[key] = std::move(family);
  }
  return s;
}

ViolationReport check_strategy(const StrategyRep& s, double tol) {
  require_explicit(s.source);
  if (!s.target) throw InputError("strategy has no target structure");
  if (s.dimension <= 0) throw InputError("strategy dimension must be positive");
  ViolationReport report;
  const Mat identity = Mat::Identity(s.dimension, s.dimension);
  auto add = [&](double residual, const std::string& what) {
    ++report.checks;
    if (residual > report.max_residual) report.max_residual = residual;
    if (residual > tol) report.violations.push_back({what, residual});
  };
  auto check_family = [&](const std::vector<const Mat*>& family,
                          const std::string& what) {
    Mat sum = Mat::Zero(s.dimension, s.dimension);
    for (const Mat* m : family) {
      if (m->rows() != s.dimension || m->cols() != s.dimension) {
        throw InputError(what + " has a matrix of the wrong shape");
      }
      add((*m - m->adjoint()).norm(), what + ": not hermitian");
      add((*m * *m - *m).norm(), what + ": not idempotent");
      sum += *m;
    }
    add((sum - identity).norm(), what + ": does not sum to the identity");
  };

  const Elem nb = s.target->domain_size();
  for (Elem a = 0; a < s.source->domain_size(); ++a) {
    std::vector<const Mat*> family;
    for (Elem b = 0; b < nb; ++b) family.push_back(&s.variable(a, b));
    check_family(family, "variable " + std::to_string(a));
  }
  for (const ConstraintKey& key : constraints_of(s.source)) {
    const std::vector<Tuple> answers =
        satisfying_answers(*s.source, *s.target, key.first);
    std::vector<const Mat*> family;
    for (const Tuple& ans : answers) family.push_back(&s.constraint(key, ans));
    check_family(family, "constraint " + key_str(*s.source, key));
  }
  return report;
}

DefectReport defect_assignment(const StrategyRep& s,
                               const ConstraintWeights* weights) {
  const ConstraintWeights w = resolve_weights(s, weights);
  DefectReport report;
  const Elem nb = s.target->domain_size();
  for (const auto& [key, pi] : w) {
    const int ts = s.target->symbol_index(s.source->symbol(key.first).name);
    if (ts < 0) {
      throw InputError("target has no relation named " +
                       s.source->symbol(key.first).name);
    }
    const size_t n = key.second.size();
    uint64_t total = 1;
    for (size_t i = 0; i < n; ++i) total *= static_cast<uint64_t>(nb);
    double value = 0.0;
    Tuple ans(n);
    for (uint64_t e = 0; e < total; ++e) {
      uint64_t rest = e;
      for (size_t i = 0; i < n; ++i) {
        ans[i] = static_cast<Elem>(rest % static_cast<uint64_t>(nb));
        rest /= static_cast<uint64_t>(nb);
      }
      if (s.target->contains(ts, ans)) continue;
      Mat prod = Mat::Identity(s.dimension, s.dimension);
      for (size_t i = 0; i < n; ++i) prod *= s.variable(key.second[i], ans[i]);
      value += tau_sq(prod, s.dimension);
      ++report.checks;
    }
    const double wd = pi.to_double();
    report.terms.push_back({key_str(*s.source, key), wd, value});
    report.defect += wd * value;
  }
  return report;
}

DefectReport defect_cv(const StrategyRep& s, const ConstraintWeights* weights) {
  const ConstraintWeights w = resolve_weights(s, weights);
  DefectReport report;
  const Mat identity = Mat::Identity(s.dimension, s.dimension);
  for (const auto& [key, pi] : w) {
    const std::vector<Tuple> answers =
        satisfying_answers(*s.source, *s.target, key.first);
    const size_t n = key.second.size();
    double value = 0.0;
    for (const Tuple& ans : answers) {
      const Mat& phi = s.constraint(key, ans);
      for (size_t i = 0; i < n; ++i) {
        value += tau_sq(phi * (identity - s.variable(key.second[i], ans[i])),
                        s.dimension);
        ++report.checks;
      }
    }
    const double wd = pi.to_double() / static_cast<double>(n);
    report.terms.push_back({key_str(*s.source, key), wd, value});
    report.defect += wd * value;
  }
  return report;
}

DefectReport defect_cc(const StrategyRep& s, const PairWeights* weights) {
  const PairWeights w = resolve_pair_weights(s, weights);
  DefectReport report;
  const size_t ncons = constraints_of(s.source).size();
  double unweighted = 0.0;
  for (const auto& [pair, pi] : w) {
    const auto& [k1, k2] = pair;
    const std::vector<Tuple> answers1 =
        satisfying_answers(*s.source, *s.target, k1.first);
    const std::vector<Tuple> answers2 =
        satisfying_answers(*s.source, *s.target, k2.first);
    double value = 0.0;
    for (const Tuple& a1 : answers1) {
      for (const Tuple& a2 : answers2) {
        if (!conflicting(k1.second, a1, k2.second, a2)) continue;
        value += tau_sq(s.constraint(k1, a1) * s.constraint(k2, a2),
                        s.dimension);
        ++report.checks;
      }
    }
    const double wd = pi.to_double();
    report.terms.push_back(
        {key_str(*s.source, k1) + " x " + key_str(*s.source, k2), wd, value});
    report.defect += wd * value;
    unweighted += value;
  }
  report.pair_averaged = unweighted / static_cast<double>(ncons * ncons);
  return report;
}

DefectReport comm_defect(const StrategyRep& s, Elem x, Elem y) {
  if (x < 0 || x >= s.source->domain_size() || y < 0 ||
      y >= s.source->domain_size()) {
    throw InputError("comm defect element out of range");
  }
  DefectReport report;
  const Elem nb = s.target->domain_size();
  for (Elem a = 0; a < nb; ++a) {
    for (Elem b = 0; b < nb; ++b) {
      const Mat& p = s.variable(x, a);
      const Mat& q = s.variable(y, b);
      const double value = tau_sq(p * q - q * p, s.dimension);
      report.terms.push_back({"[p^" + std::to_string(x) + "_" +
                                  std::to_string(a) + ", p^" +
                                  std::to_string(y) + "_" + std::to_string(b) +
                                  "]",
                              1.0, value});
      report.defect += value;
      ++report.checks;
    }
  }
  return report;
}

StrategyRep magic_square_two_qubit_strategy() {
  return product_strategy(magic_square_two_qubit_rep());
}

}  // namespace qhom
