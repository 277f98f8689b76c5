#include "qhom/todd_coxeter.hpp"

#include <set>

#include "doctest.h"
#include "qhom/fpgroups.hpp"
#include "qhom/structure.hpp"
#include "qhom/util.hpp"

namespace {

using namespace qhom;

GroupPresentation cyclic(int n) {
  GroupPresentation g;
  g.generators = {"a"};
  Word w;
  for (int i = 0; i < n; ++i) w.push_back(1);
  g.relators = {w};
  return g;
}

GroupPresentation sym3() {
  // <a, b | a^2, b^2, (ab)^3>
  GroupPresentation g;
  g.generators = {"a", "b"};
  g.relators = {{1, 1}, {2, 2}, {1, 2, 1, 2, 1, 2}};
  return g;
}

TEST_CASE("cyclic group enumeration") {
  CosetTable t = todd_coxeter(cyclic(6));
  REQUIRE(t.status() == TcStatus::complete);
  CHECK(t.live_cosets() == 6);
  CHECK(t.generator_count() == 1);

  // the action of a is a 6-cycle through every coset
  std::set<std::uint32_t> seen;
  std::uint32_t c = 0;
  for (int i = 0; i < 6; ++i) {
    seen.insert(c);
    c = t.step(c, 1);
  }
  CHECK(c == 0);
  CHECK(seen.size() == 6);
  // inverse steps undo forward steps
  CHECK(t.step(t.step(0, 1), -1) == 0);
  CHECK(t.trace(0, {1, 1, 1, 1, 1, 1}) == 0);
  CHECK(group_order(cyclic(6)) == 6);
}

TEST_CASE("coset spaces of a subgroup") {
  CosetTable t = todd_coxeter(sym3(), {{1}});
  REQUIRE(t.status() == TcStatus::complete);
  CHECK(t.live_cosets() == 3);
  // coset 0 is fixed by the subgroup generator
  CHECK(t.step(0, 1) == 0);
  CHECK(group_order(sym3()) == 6);
}

TEST_CASE("standardized numbering is stable under retracing") {
  // cosets appear in breadth-first order of their first definition, so the
  // table is a canonical function of the presentation
  CosetTable t = todd_coxeter(sym3());
  CHECK(t.live_cosets() == 6);
  CHECK(t.step(0, 1) == 1);  // the first newly defined coset
  CHECK(t.total_defined() >= t.live_cosets());
}

TEST_CASE("the trivial group collapses to one coset") {
  GroupPresentation g;
  g.generators = {"a"};
  g.relators = {{1}};
  CHECK(group_order(g) == 1);
}

TEST_CASE("enumeration limits are reported, not fatal") {
  GroupPresentation free2;
  free2.generators = {"a", "b"};
  TcOptions opt;
  opt.max_cosets = 50;
  CosetTable t = todd_coxeter(free2, {}, opt);
  CHECK(t.status() == TcStatus::exceeded_limit);
  CHECK_FALSE(group_order(free2, opt).has_value());
  CHECK(word_is_trivial(free2, {1, -1}, opt) == Triviality::inconclusive);
}

TEST_CASE("word problems in small quotients") {
  GroupPresentation g = cyclic(2);
  CHECK(word_is_trivial(g, {1, 1}) == Triviality::yes);
  CHECK(word_is_trivial(g, {1}) == Triviality::no);
  CHECK(word_is_trivial(g, {}) == Triviality::yes);
}

TEST_CASE("order of the single-equation constraint group") {
  SolutionGroupMap m = solution_group(make_single_equation(), false);
  CHECK(group_order(m.group) == 8);
  // J is nontrivial: the equation is classically satisfiable but not forced
  Word j = {m.j_generator + 1};
  CHECK(word_is_trivial(m.group, j) == Triviality::no);
}

TEST_CASE("homogenisation preserves the group order") {
  Homogenisation h = homogenise(make_single_equation());
  SolutionGroupMap m = solution_group(h.structure, true);
  CHECK(group_order(m.group) == 8);
}

TEST_CASE("order of the magic-square constraint group") {
  SolutionGroupMap m = solution_group(make_magic_square(), false);
  CHECK(group_order(m.group) == 32);

  // an inconsistent classical system with a perfect operator assignment:
  // J stays away from the identity
  Word j = {m.j_generator + 1};
  CHECK(word_is_trivial(m.group, j) == Triviality::no);
  Word w15 = parse_word(m.group, "[x1,x5]J^-1");
  CHECK(word_is_trivial(m.group, w15) == Triviality::yes);
  Word w24 = parse_word(m.group, "[x2,x4]J^-1");
  CHECK(word_is_trivial(m.group, w24) == Triviality::yes);
  Word w12 = parse_word(m.group, "[x1,x2]");
  CHECK(word_is_trivial(m.group, w12) == Triviality::yes);
}

TEST_CASE("amalgamated identifications cut the order down") {
  GroupPresentation c4 = cyclic(4);
  // forcing a = b collapses the free square to a single C4
  GroupPresentation collapsed = combine(c4, c4, {{{1}, {1}}});
  CHECK(group_order(collapsed) == 4);
  // gluing a^2 onto the generator of a C2 absorbs the second factor
  GroupPresentation absorbed = combine(c4, cyclic(2), {{{1, 1}, {1}}});
  CHECK(group_order(absorbed) == 4);
}

TEST_CASE("quotients shrink the enumeration") {
  SolutionGroupMap m = solution_group(make_magic_square(), false);
  // a relator that already holds changes nothing
  GroupPresentation q =
      quotient_by_normal_closure(m.group, {parse_word(m.group, "[x1,x5]J^-1")});
  CHECK(group_order(q) == 32);
  // killing the central letter folds the group onto its abelianization
  GroupPresentation qj = quotient_by_normal_closure(m.group, {{m.j_generator + 1}});
  CHECK(group_order(qj) == 16);
  // [x2, x4] equals J here, so the two quotients agree
  GroupPresentation qc =
      quotient_by_normal_closure(m.group, {parse_word(m.group, "[x2,x4]")});
  CHECK(group_order(qc) == 16);
}

}  // namespace
