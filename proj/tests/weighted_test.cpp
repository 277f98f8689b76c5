#include "qhom/weighted.hpp"

#include <cmath>

#include "doctest.h"
#include "qhom/rational.hpp"
#include "qhom/repalg.hpp"
#include "qhom/structure.hpp"
#include "qhom/util.hpp"

namespace {

using namespace qhom;

TEST_CASE("constraint enumeration and uniform weights") {
  StructurePtr ms = make_magic_square();
  std::vector<ConstraintKey> keys = constraints_of(ms);
  CHECK(keys.size() == 6);
  CHECK(keys.front().first == ms->symbol_index(lr_name(0, 3)));

  ConstraintWeights w = uniform_constraint_weights(ms);
  REQUIRE(w.size() == 6);
  Rational total(0);
  for (const auto& [key, r] : w) {
    CHECK(r == Rational(1, 6));
    total += r;
  }
  CHECK(total == Rational(1));

  PairWeights pw = uniform_pair_weights(ms);
  CHECK(pw.size() == 36);
  Rational ptotal(0);
  for (const auto& [key, r] : pw) ptotal += r;
  CHECK(ptotal == Rational(1));
}

TEST_CASE("the two-qubit strategy is a clean measurement family") {
  StrategyRep s = magic_square_two_qubit_strategy();
  CHECK(s.dimension == 4);
  CHECK(s.variables.size() == 18);
  CHECK(s.constraints.size() == 6);
  for (const auto& [key, family] : s.constraints) CHECK(family.size() == 4);

  ViolationReport r = check_strategy(s);
  CHECK(r.clean(1e-8));
  CHECK(r.checks > 0);
}

TEST_CASE("every defect flavor vanishes on the two-qubit strategy") {
  StrategyRep s = magic_square_two_qubit_strategy();

  DefectReport assign = defect_assignment(s);
  CHECK(assign.defect < 1e-9);
  CHECK(assign.checks > 0);
  CHECK_FALSE(assign.pair_averaged.has_value());

  DefectReport cv = defect_cv(s);
  CHECK(cv.defect < 1e-9);

  DefectReport cc = defect_cc(s);
  CHECK(cc.defect < 1e-9);
  REQUIRE(cc.pair_averaged.has_value());
  CHECK(*cc.pair_averaged == doctest::Approx(cc.defect).epsilon(1e-9));
}

TEST_CASE("anticommuting grid variables have commutation defect one") {
  StrategyRep s = magic_square_two_qubit_strategy();
  // variables 1 and 5 of the grid: observables I(x)Z and I(x)X
  DefectReport r = comm_defect(s, 0, 4);
  REQUIRE(r.terms.size() == 4);
  for (const DefectTerm& t : r.terms) {
    CHECK(t.weight == 1.0);
    CHECK(t.value == doctest::Approx(0.25).epsilon(1e-9));
  }
  CHECK(r.defect == doctest::Approx(1.0).epsilon(1e-9));

  // symmetry in the two arguments
  DefectReport swapped = comm_defect(s, 4, 0);
  CHECK(swapped.defect == doctest::Approx(r.defect).epsilon(1e-12));

  // variables sharing a line commute
  DefectReport row = comm_defect(s, 0, 1);
  CHECK(row.defect < 1e-9);

  CHECK_THROWS_AS(comm_defect(s, 0, 9), InputError);
}

TEST_CASE("custom weights rescale the defect terms") {
  StrategyRep s = magic_square_two_qubit_strategy();
  StructurePtr ms = s.source;
  std::vector<ConstraintKey> keys = constraints_of(ms);
  REQUIRE(keys.size() == 6);

  // all the weight on one constraint
  ConstraintWeights w;
  for (const ConstraintKey& k : keys) w[k] = Rational(0);
  w[keys[0]] = Rational(1);
  DefectReport r = defect_assignment(s, &w);
  CHECK(r.defect < 1e-9);

  // weights must sum to one ...
  w[keys[0]] = Rational(1, 2);
  CHECK_THROWS_AS(defect_assignment(s, &w), InputError);
  // ... be nonnegative ...
  w[keys[0]] = Rational(3, 2);
  w[keys[1]] = Rational(-1, 2);
  CHECK_THROWS_AS(defect_cv(s, &w), InputError);
  // ... and name actual constraints
  ConstraintWeights stray;
  stray[{0, {0, 1, 3}}] = Rational(1);
  CHECK_THROWS_AS(defect_assignment(s, &stray), InputError);
}

TEST_CASE("a product strategy from a single-coordinate representation") {
  // At theta = 0 the two blocks of the magic unitary coincide, every pair of
  // variable projections commutes, and the product constraints form genuine
  // PVMs with no defect of any flavor.
  {
    MagicUnitary u = block_magic_unitary(0.0);
    PvmRepresentation rep = magic_unitary_rep(u, 0, 2);
    StrategyRep s = product_strategy(rep);
    CHECK(s.dimension == 2);
    CHECK(s.source == rep.source);
    CHECK(check_strategy(s).clean(1e-8));
    CHECK(defect_assignment(s).defect < 1e-9);
    CHECK(defect_cv(s).defect < 1e-9);
    CHECK(defect_cc(s).defect < 1e-9);
  }

  // At theta = 0.3 projections from different blocks no longer commute, so
  // products across blocks are not projections and the constraint families
  // fail the PVM checks.  The assignment defect still vanishes exactly
  // (products over a forbidden answer are zero), which localizes the damage
  // in the cv and cc defects.
  {
    MagicUnitary u = block_magic_unitary(0.3);
    PvmRepresentation rep = magic_unitary_rep(u, 0, 2);
    StrategyRep s = product_strategy(rep);
    CHECK_FALSE(check_strategy(s).clean(1e-8));
    CHECK(defect_assignment(s).defect < 1e-9);
    CHECK(defect_cv(s).defect > 1e-3);
    CHECK(defect_cc(s).defect > 1e-3);

    // rows of the same block commute with each other ...
    CHECK(comm_defect(s, 0, 1).defect < 1e-12);
    // ... while a cross-block pair picks up sin^2(2 theta): four answer pairs
    // with || [p, q] ||_F^2 = sin^2(2 theta) / 2 each, in dimension 2
    double cross = comm_defect(s, 0, 2).defect;
    double expected = std::pow(std::sin(0.6), 2);
    CHECK(std::abs(cross - expected) < 1e-9);
  }
}

TEST_CASE("a misaligned strategy picks up nonzero defect") {
  // genuine PVMs throughout, but the variables copy each other (breaking the
  // edge constraints) and one constraint measures in a rotated basis
  StructurePtr k2 = make_clique(2);
  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  Mat q0(2, 2), q1(2, 2);
  q0 << 0.5, 0.5, 0.5, 0.5;
  q1 << 0.5, -0.5, -0.5, 0.5;

  StrategyRep s;
  s.source = k2;
  s.target = k2;
  s.dimension = 2;
  for (Elem a = 0; a < 2; ++a) {
    s.variables[{a, 0}] = p0;
    s.variables[{a, 1}] = p1;
  }
  std::vector<ConstraintKey> keys = constraints_of(k2);
  REQUIRE(keys.size() == 2);
  s.constraints[keys[0]] = {{{0, 1}, p0}, {{1, 0}, p1}};
  s.constraints[keys[1]] = {{{0, 1}, q0}, {{1, 0}, q1}};
  CHECK(check_strategy(s).clean(1e-8));

  // both edges break exactly on the diagonal answers (0,0) and (1,1), each
  // with squared trace norm 1/2, under weight 1/2 per edge
  DefectReport assign = defect_assignment(s);
  CHECK(assign.defect == doctest::Approx(1.0).epsilon(1e-9));

  // the constraint measurements disagree with the variables and each other
  CHECK(defect_cv(s).defect > 0.05);
  DefectReport cc = defect_cc(s);
  CHECK(cc.defect > 0.05);
  REQUIRE(cc.pair_averaged.has_value());
  CHECK(*cc.pair_averaged == doctest::Approx(cc.defect).epsilon(1e-9));
}

TEST_CASE("lazy sources are rejected") {
  MagicUnitary u = block_magic_unitary(0.3);
  PvmRepresentation rep = magic_unitary_rep(u, 3, 7);
  REQUIRE(rep.source->is_lazy());
  CHECK_THROWS_AS(product_strategy(rep), InputError);
}

}  // namespace
