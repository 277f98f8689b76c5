#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qhom/homsearch.hpp"
#include "qhom/rational.hpp"
#include "qhom/structure.hpp"
#include "qhom/weighted.hpp"

namespace qhom {

// A two-player one-round game: the referee draws a question pair (x, y) from
// `distribution` (indices into the question lists), receives answers (a, b)
// (indices into the answer lists), and accepts when (a, b, x, y) lies in
// `accept`.  The predicate is total: pairs outside `accept` are rejected.
struct Game {
  enum class Kind { assignment, constraint_variable, constraint_constraint };

  Kind kind = Kind::assignment;
  bool synchronous = false;
  std::vector<std::string> alice_questions;
  std::vector<std::string> bob_questions;
  std::vector<std::string> alice_answers;
  std::vector<std::string> bob_answers;
  std::map<std::pair<int, int>, Rational> distribution;
  std::set<std::array<int, 4>> accept;  // (a, b, x, y)

  bool accepts(int a, int b, int x, int y) const {
    return accept.count({a, b, x, y}) > 0;
  }
};

// Builds the game of the CSP given by an explicit source structure over a
// target structure.
//
//  - assignment: questions are the source elements (the source must be a
//    2-CSP), answers are the target elements; the referee draws a constraint
//    and asks its two variables, accepting when the answer pair satisfies
//    every constraint on that variable pair.
//  - constraint_variable: Alice is asked a constraint and answers a
//    satisfying tuple, Bob is asked one of its variables and answers a
//    value; they must agree wherever the variable occurs.
//  - constraint_constraint: both players are asked constraints and answer
//    tuples; answers must satisfy their constraints and agree on shared
//    variables.  This game is synchronous.
//
// `weights` / `pair_weights` give the constraint distribution (uniform when
// null); only the flavor's own kind of weights may be passed.
Game build_game(Game::Kind kind, const StructurePtr& source,
                const StructurePtr& target,
                const ConstraintWeights* weights = nullptr,
                const PairWeights* pair_weights = nullptr);

struct GameOptions {
  // Number of deterministic strategies examined before giving up.
  uint64_t strategy_budget = 1000000;
};

struct GameValue {
  Rational value;          // exact when complete, else a lower bound
  SearchStatus status = SearchStatus::complete;
  uint64_t strategies = 0;

  bool exact() const { return status == SearchStatus::complete; }
};

// The classical value: the maximum acceptance probability over deterministic
// strategies.  With `synchronous_only` both players use the same function
// (requires matching question and answer sets).  For constraint games,
// answers that violate the asked constraint are dominated and pruned.
// If the budget runs out the best value found so far is returned with
// status budget_exhausted.
GameValue classical_value(const Game& game, bool synchronous_only = false,
                          const GameOptions& options = {});

}  // namespace qhom
