#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhom/rational.hpp"
#include "qhom/repalg.hpp"
#include "qhom/structure.hpp"

namespace qhom {

// A constraint of an explicit structure: a populated relation symbol (by
// index into the source signature) together with one of its tuples.
using ConstraintKey = std::pair<int, Tuple>;

// Rational distribution over the constraints of a structure (or, for the
// constraint-constraint flavor, over ordered pairs of constraints).  Weights
// must be nonnegative and sum to one.
using ConstraintWeights = std::map<ConstraintKey, Rational>;
using PairWeights = std::map<std::pair<ConstraintKey, ConstraintKey>, Rational>;

std::vector<ConstraintKey> constraints_of(const StructurePtr& source);
ConstraintWeights uniform_constraint_weights(const StructurePtr& source);
PairWeights uniform_pair_weights(const StructurePtr& source);

// A finite-dimensional strategy for the CSP given by an explicit source
// structure over a target structure: one PVM {p^a_b}_{b in B} per source
// element a (the variable measurements) and one PVM {Phi^{R,t}_s}_{s in R^B}
// per constraint (the constraint measurements).
struct StrategyRep {
  StructurePtr source;
  StructurePtr target;
  int dimension = 0;
  std::map<std::pair<Elem, Elem>, Mat> variables;
  std::map<ConstraintKey, std::map<Tuple, Mat>> constraints;

  const Mat& variable(Elem a, Elem b) const;
  const Mat& constraint(const ConstraintKey& key, const Tuple& answer) const;
};

// Builds a strategy from variable measurements alone, taking each constraint
// measurement to be the product of its variables' projections:
// Phi^{R,t}_s = p^{t_1}_{s_1} ... p^{t_n}_{s_n}.  This yields genuine PVMs
// exactly when tuple-mates commute, which check_strategy verifies.
StrategyRep product_strategy(const PvmRepresentation& rep);

// Verifies that every variable and constraint family is a PVM.  The 1e-8
// default is intentionally looser than defect tolerances; defects are
// reported, PVM-ness is a precondition.
ViolationReport check_strategy(const StrategyRep& s, double tol = 1e-8);

struct DefectTerm {
  std::string description;
  double weight = 0.0;  // the multiplier actually applied to `value`
  double value = 0.0;
};

struct DefectReport {
  double defect = 0.0;
  std::vector<DefectTerm> terms;
  uint64_t checks = 0;
  // Constraint-constraint only: the unweighted sum of all pair values
  // divided by the squared number of constraints.  Coincides with `defect`
  // under the uniform pair distribution.
  std::optional<double> pair_averaged;
};

// All norms below are the normalized trace norm ||M||_tau^2 = ||M||_F^2 / d.

// Sum over constraints (R, t) with weight pi of
//   sum_{s in B^n \ R^B} || p^{t_1}_{s_1} ... p^{t_n}_{s_n} ||_tau^2.
DefectReport defect_assignment(const StrategyRep& s,
                               const ConstraintWeights* weights = nullptr);

// Sum over constraints (R, t) with weight pi / arity(R) of
//   sum_{s in R^B} sum_i || Phi^{R,t}_s (I - p^{t_i}_{s_i}) ||_tau^2.
DefectReport defect_cv(const StrategyRep& s,
                       const ConstraintWeights* weights = nullptr);

// Sum over ordered constraint pairs with weight pi of
//   sum over conflicting answer pairs (s, s') of || Phi_s Phi'_{s'} ||_tau^2,
// where (s, s') conflicts when some shared variable t_i = t'_j receives
// different values s_i != s'_j.
DefectReport defect_cc(const StrategyRep& s,
                       const PairWeights* weights = nullptr);

// Sum over target values a, b of || [p^x_a, p^y_b] ||_tau^2 for two source
// elements x and y.  Symmetric in x and y.
DefectReport comm_defect(const StrategyRep& s, Elem x, Elem y);

// The two-qubit magic square strategy: variables from the observable grid
// representation, constraints as products of the (commuting) row and column
// marginals.  All three defect flavors vanish on it.
StrategyRep magic_square_two_qubit_strategy();

}  // namespace qhom
