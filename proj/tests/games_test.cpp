#include "qhom/games.hpp"

#include <array>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "qhom/homsearch.hpp"
#include "qhom/rational.hpp"
#include "qhom/structure.hpp"
#include "qhom/util.hpp"

namespace {

using namespace qhom;

// Unpruned exhaustive synchronous value: every question answered by any
// element of the full answer list.
Rational brute_force_synchronous(const Game& game) {
  const int nq = static_cast<int>(game.alice_questions.size());
  const int na = static_cast<int>(game.alice_answers.size());
  std::vector<int> pick(nq, 0);
  Rational best(0);
  for (;;) {
    Rational total(0);
    for (const auto& [qs, w] : game.distribution) {
      if (game.accepts(pick[qs.first], pick[qs.second], qs.first, qs.second)) {
        total += w;
      }
    }
    if (best < total) best = total;
    int i = 0;
    while (i < nq && ++pick[i] == na) pick[i++] = 0;
    if (i == nq) break;
  }
  return best;
}

TEST_CASE("assignment games ask edges and check colors") {
  StructurePtr k3 = make_clique(3);
  Game g = build_game(Game::Kind::assignment, k3, k3);
  CHECK(g.kind == Game::Kind::assignment);
  CHECK(g.synchronous);
  CHECK(g.alice_questions == std::vector<std::string>{"0", "1", "2"});
  CHECK(g.bob_questions == g.alice_questions);
  CHECK(g.alice_answers == g.bob_answers);
  CHECK(g.alice_answers.size() == 3);
  CHECK(g.distribution.size() == 6);
  Rational total(0);
  for (const auto& [q, w] : g.distribution) total += w;
  CHECK(total == Rational(1));

  // asked an edge, equal answers lose and distinct answers win
  CHECK(g.accepts(0, 1, 0, 1));
  CHECK_FALSE(g.accepts(1, 1, 0, 1));
  // pairs outside the support reject by default, so the game is synchronous
  CHECK_FALSE(g.accepts(0, 0, 0, 0));
}

TEST_CASE("the triangle colors itself but not with two colors") {
  StructurePtr k3 = make_clique(3);
  Game self = build_game(Game::Kind::assignment, k3, k3);
  GameValue v = classical_value(self, true);
  CHECK(v.exact());
  CHECK(v.value == Rational(1));
  CHECK(v.strategies == 27);

  Game two = build_game(Game::Kind::assignment, k3, make_clique(2));
  GameValue sync = classical_value(two, true);
  CHECK(sync.exact());
  CHECK(sync.value == Rational(2, 3));
  CHECK(sync.strategies == 8);

  // decoupled players can cheat a loopless game
  GameValue apart = classical_value(two, false);
  CHECK(apart.exact());
  CHECK(apart.value == Rational(1));
  CHECK(sync.value < apart.value);
}

TEST_CASE("synchronous assignment value is one exactly when a map exists") {
  const std::vector<std::pair<StructurePtr, StructurePtr>> pairs = {
      {make_clique(2), make_clique(3)},
      {make_clique(3), make_clique(3)},
      {make_clique(3), make_clique(2)},
      {make_clique(4), make_clique(3)},
      {make_clique(2), make_clique(2)},
  };
  for (const auto& [src, tgt] : pairs) {
    const bool hom = enumerate_homomorphisms(src, tgt).count > 0;
    Game g = build_game(Game::Kind::assignment, src, tgt);
    GameValue v = classical_value(g, true);
    REQUIRE(v.exact());
    CHECK((v.value == Rational(1)) == hom);
  }
}

TEST_CASE("constraint-variable games align tuples with values") {
  StructurePtr ms = make_magic_square();
  Game g = build_game(Game::Kind::constraint_variable, ms, lin_for(*ms));
  CHECK(g.kind == Game::Kind::constraint_variable);
  CHECK_FALSE(g.synchronous);
  CHECK(g.alice_questions.size() == 6);
  CHECK(g.bob_questions.size() == 9);
  CHECK(g.alice_questions[0] == "LR(0,3)(1,2,3)");
  CHECK(g.bob_answers == std::vector<std::string>{"0", "1"});
  Rational total(0);
  for (const auto& [q, w] : g.distribution) total += w;
  CHECK(total == Rational(1));

  // different question sets admit no synchronous strategy
  CHECK_THROWS_AS(classical_value(g, true), InputError);

  // the system is inconsistent, so perfect play is impossible, yet one
  // violated line can only be caught at one of its three variables
  GameValue v = classical_value(g, false);
  REQUIRE(v.exact());
  CHECK(v.value < Rational(1));
  CHECK(Rational(17, 18) <= v.value);
}

TEST_CASE("constraint-constraint games agree on shared variables") {
  StructurePtr ms = make_magic_square();
  Game g = build_game(Game::Kind::constraint_constraint, ms, lin_for(*ms));
  CHECK(g.synchronous);
  CHECK(g.alice_questions.size() == 6);
  // answers run over every value tuple, not only the satisfying ones
  CHECK(g.alice_answers.size() == 8);
  CHECK(g.distribution.size() == 36);

  GameValue v = classical_value(g, true);
  REQUIRE(v.exact());
  CHECK(v.value == Rational(17, 18));
  // pruning keeps only the four satisfying answers per question
  CHECK(v.strategies == 4096);

  // pruning does not change the optimum
  CHECK(brute_force_synchronous(g) == Rational(17, 18));

  // unrestricted play gains nothing here
  GameValue apart = classical_value(g, false);
  REQUIRE(apart.exact());
  CHECK(apart.value == Rational(17, 18));
}

TEST_CASE("a consistent system plays its constraint game perfectly") {
  StructurePtr eq = make_single_equation();
  Game g = build_game(Game::Kind::constraint_constraint, eq, lin_for(*eq));
  GameValue v = classical_value(g, true);
  REQUIRE(v.exact());
  CHECK(v.value == Rational(1));
}

TEST_CASE("budget exhaustion returns a lower bound") {
  StructurePtr ms = make_magic_square();
  Game g = build_game(Game::Kind::constraint_constraint, ms, lin_for(*ms));
  GameOptions opt;
  opt.strategy_budget = 100;
  GameValue v = classical_value(g, true, opt);
  CHECK(v.status == SearchStatus::budget_exhausted);
  CHECK_FALSE(v.exact());
  CHECK(v.strategies == 100);
  CHECK(v.value <= Rational(17, 18));
}

TEST_CASE("custom weights reshape the distribution") {
  StructurePtr k3 = make_clique(3);
  std::vector<ConstraintKey> keys = constraints_of(k3);
  REQUIRE(keys.size() == 6);
  ConstraintWeights w;
  for (const ConstraintKey& k : keys) w[k] = Rational(0);
  w[keys[0]] = Rational(1, 2);
  w[keys[1]] = Rational(1, 2);
  Game g = build_game(Game::Kind::assignment, k3, k3, &w);
  Rational total(0);
  for (const auto& [q, weight] : g.distribution) total += weight;
  CHECK(total == Rational(1));
  GameValue v = classical_value(g, true);
  CHECK(v.value == Rational(1));

  // weight kinds must match the flavor
  PairWeights pw = uniform_pair_weights(k3);
  CHECK_THROWS_AS(build_game(Game::Kind::assignment, k3, k3, nullptr, &pw),
                  InputError);
  CHECK_THROWS_AS(
      build_game(Game::Kind::constraint_constraint, k3, k3, &w, nullptr),
      InputError);
}

TEST_CASE("assignment games require binary constraints") {
  StructurePtr ms = make_magic_square();
  CHECK_THROWS_AS(build_game(Game::Kind::assignment, ms, lin_for(*ms)),
                  InputError);
}

}  // namespace
