#include "qhom/games.hpp"

#include <algorithm>
#include <sstream>

#include "qhom/util.hpp"

namespace qhom {
namespace {

std::string join_labels(const Structure& st, const Tuple& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) os << ',';
    os << st.label(t[i]);
  }
  return os.str();
}

std::string constraint_label(const Structure& source, const ConstraintKey& key) {
  return source.symbol(key.first).name + "(" + join_labels(source, key.second) +
         ")";
}

// The flat answer list for tuple-answer games: every target tuple of every
// arity a populated source relation has, in arity order, each arity
// enumerated with the last coordinate fastest.
struct TupleAnswers {
  std::vector<Tuple> tuples;
  std::vector<std::string> labels;
  std::map<Tuple, int> index;
};

TupleAnswers tuple_answers(const Structure& source, const Structure& target) {
  std::set<size_t> arities;
  for (int s = 0; s < static_cast<int>(source.signature().size()); ++s) {
    if (source.tuple_count(s) > 0) {
      arities.insert(static_cast<size_t>(source.symbol(s).arity));
    }
  }
  TupleAnswers out;
  const Elem nb = target.domain_size();
  for (size_t ar : arities) {
    uint64_t total = 1;
    for (size_t i = 0; i < ar; ++i) {
      if (total > 100000 / static_cast<uint64_t>(nb)) {
        throw InputError("answer tuple space too large");
      }
      total *= static_cast<uint64_t>(nb);
    }
    Tuple t(ar, 0);
    for (uint64_t e = 0; e < total; ++e) {
      // decode with the last coordinate fastest
      uint64_t r = e;
      for (size_t i = ar; i-- > 0;) {
        t[i] = static_cast<Elem>(r % static_cast<uint64_t>(nb));
        r /= static_cast<uint64_t>(nb);
      }
      if (out.index.find(t) == out.index.end()) {
        out.index[t] = static_cast<int>(out.tuples.size());
        out.tuples.push_back(t);
        out.labels.push_back(join_labels(target, t));
      }
    }
  }
  return out;
}

int target_symbol(const Structure& source, const Structure& target, int sym) {
  const int ts = target.symbol_index(source.symbol(sym).name);
  if (ts < 0) {
    throw InputError("target has no relation named " + source.symbol(sym).name);
  }
  return ts;
}

void finish(Game& game) {
  Rational total(0);
  for (const auto& [pair, w] : game.distribution) {
    if (w < Rational(0)) throw InputError("distribution weights must be nonnegative");
    total = total + w;
  }
  if (!(total == Rational(1))) {
    throw InputError("question distribution must sum to 1");
  }
  game.synchronous = game.alice_questions == game.bob_questions &&
                     game.alice_answers == game.bob_answers;
  if (game.synchronous) {
    for (const auto& e : game.accept) {
      if (e[2] == e[3] && e[0] != e[1]) {
        game.synchronous = false;
        break;
      }
    }
  }
}

Game build_assignment(const StructurePtr& source, const StructurePtr& target,
                      const ConstraintWeights& weights) {
  for (int s = 0; s < static_cast<int>(source->signature().size()); ++s) {
    if (source->tuple_count(s) > 0 && source->symbol(s).arity != 2) {
      throw InputError("assignment games need a source whose constraints are binary");
    }
  }
  Game game;
  game.kind = Game::Kind::assignment;
  const Elem na = source->domain_size();
  const Elem nb = target->domain_size();
  for (Elem a = 0; a < na; ++a) {
    game.alice_questions.push_back(source->label(a));
  }
  game.bob_questions = game.alice_questions;
  for (Elem b = 0; b < nb; ++b) {
    game.alice_answers.push_back(target->label(b));
  }
  game.bob_answers = game.alice_answers;
  for (const auto& [key, pi] : weights) {
    const std::pair<int, int> q{static_cast<int>(key.second[0]),
                                static_cast<int>(key.second[1])};
    auto [it, inserted] = game.distribution.try_emplace(q, pi);
    if (!inserted) it->second = it->second + pi;
  }
  for (const auto& [q, w] : game.distribution) {
    std::vector<int> checks;
    for (int s = 0; s < static_cast<int>(source->signature().size()); ++s) {
      if (source->tuple_count(s) == 0) continue;
      if (source->contains(s, {q.first, q.second})) {
        checks.push_back(target_symbol(*source, *target, s));
      }
    }
    for (Elem a = 0; a < nb; ++a) {
      for (Elem b = 0; b < nb; ++b) {
        bool ok = true;
        for (int ts : checks) {
          if (!target->contains(ts, {a, b})) {
            ok = false;
            break;
          }
        }
        if (ok) {
          game.accept.insert({static_cast<int>(a), static_cast<int>(b),
                              q.first, q.second});
        }
      }
    }
  }
  finish(game);
  return game;
}

Game build_constraint_variable(const StructurePtr& source,
                               const StructurePtr& target,
                               const ConstraintWeights& weights) {
  Game game;
  game.kind = Game::Kind::constraint_variable;
  const std::vector<ConstraintKey> keys = constraints_of(source);
  std::map<ConstraintKey, int> key_index;
  for (const ConstraintKey& k : keys) {
    key_index[k] = static_cast<int>(game.alice_questions.size());
    game.alice_questions.push_back(constraint_label(*source, k));
  }
  for (Elem a = 0; a < source->domain_size(); ++a) {
    game.bob_questions.push_back(source->label(a));
  }
  const TupleAnswers answers = tuple_answers(*source, *target);
  game.alice_answers = answers.labels;
  for (Elem b = 0; b < target->domain_size(); ++b) {
    game.bob_answers.push_back(target->label(b));
  }
  for (const auto& [key, pi] : weights) {
    const int ci = key_index.at(key);
    const size_t ar = key.second.size();
    for (Elem y : std::set<Elem>(key.second.begin(), key.second.end())) {
      int occurrences = 0;
      for (Elem x : key.second) {
        if (x == y) ++occurrences;
      }
      const Rational share =
          pi * Rational(occurrences, static_cast<int64_t>(ar));
      auto [it, inserted] =
          game.distribution.try_emplace({ci, static_cast<int>(y)}, share);
      if (!inserted) it->second = it->second + share;
    }
  }
  for (const auto& [q, w] : game.distribution) {
    const ConstraintKey& key = keys[static_cast<size_t>(q.first)];
    const Elem y = static_cast<Elem>(q.second);
    const int ts = target_symbol(*source, *target, key.first);
    for (size_t ai = 0; ai < answers.tuples.size(); ++ai) {
      const Tuple& ans = answers.tuples[ai];
      if (ans.size() != key.second.size()) continue;
      if (!target->contains(ts, ans)) continue;
      for (Elem b = 0; b < target->domain_size(); ++b) {
        bool ok = true;
        for (size_t i = 0; i < key.second.size(); ++i) {
          if (key.second[i] == y && ans[i] != b) {
            ok = false;
            break;
          }
        }
        if (ok) {
          game.accept.insert({static_cast<int>(ai), static_cast<int>(b),
                              q.first, q.second});
        }
      }
    }
  }
  finish(game);
  return game;
}

Game build_constraint_constraint(const StructurePtr& source,
                                 const StructurePtr& target,
                                 const PairWeights& weights) {
  Game game;
  game.kind = Game::Kind::constraint_constraint;
  const std::vector<ConstraintKey> keys = constraints_of(source);
  std::map<ConstraintKey, int> key_index;
  for (const ConstraintKey& k : keys) {
    key_index[k] = static_cast<int>(game.alice_questions.size());
    game.alice_questions.push_back(constraint_label(*source, k));
  }
  game.bob_questions = game.alice_questions;
  const TupleAnswers answers = tuple_answers(*source, *target);
  game.alice_answers = answers.labels;
  game.bob_answers = answers.labels;
  for (const auto& [pair, pi] : weights) {
    game.distribution[{key_index.at(pair.first), key_index.at(pair.second)}] =
        pi;
  }
  uint64_t work = game.distribution.size() * answers.tuples.size() *
                  answers.tuples.size();
  if (work > 20000000) throw InputError("game too large to materialize");
  for (const auto& [q, w] : game.distribution) {
    const ConstraintKey& k1 = keys[static_cast<size_t>(q.first)];
    const ConstraintKey& k2 = keys[static_cast<size_t>(q.second)];
    const int ts1 = target_symbol(*source, *target, k1.first);
    const int ts2 = target_symbol(*source, *target, k2.first);
    for (size_t ai = 0; ai < answers.tuples.size(); ++ai) {
      const Tuple& a1 = answers.tuples[ai];
      if (a1.size() != k1.second.size() || !target->contains(ts1, a1)) continue;
      for (size_t bi = 0; bi < answers.tuples.size(); ++bi) {
        const Tuple& a2 = answers.tuples[bi];
        if (a2.size() != k2.second.size() || !target->contains(ts2, a2)) {
          continue;
        }
        bool ok = true;
        for (size_t i = 0; ok && i < k1.second.size(); ++i) {
          for (size_t j = 0; j < k2.second.size(); ++j) {
            if (k1.second[i] == k2.second[j] && a1[i] != a2[j]) {
              ok = false;
              break;
            }
          }
        }
        if (ok) {
          game.accept.insert({static_cast<int>(ai), static_cast<int>(bi),
                              q.first, q.second});
        }
      }
    }
  }
  finish(game);
  return game;
}

}  // namespace

Game build_game(Game::Kind kind, const StructurePtr& source,
                const StructurePtr& target, const ConstraintWeights* weights,
                const PairWeights* pair_weights) {
  if (!source || !target) throw InputError("game needs both structures");
  if (kind == Game::Kind::constraint_constraint) {
    if (weights) {
      throw InputError("the constraint-constraint flavor takes pair weights");
    }
    PairWeights w = pair_weights ? *pair_weights : uniform_pair_weights(source);
    if (pair_weights) {
      Rational total(0);
      for (const auto& [key, v] : *pair_weights) {
        if (v < Rational(0)) throw InputError("weights must be nonnegative");
        for (const ConstraintKey* k : {&key.first, &key.second}) {
          if (!source->contains(k->first, k->second)) {
            throw InputError("weight attached to a nonexistent constraint");
          }
        }
        total = total + v;
      }
      if (!(total == Rational(1))) {
        throw InputError("pair weights must sum to 1");
      }
    }
    return build_constraint_constraint(source, target, w);
  }
  if (pair_weights) {
    throw InputError("pair weights only apply to the constraint-constraint flavor");
  }
  ConstraintWeights w =
      weights ? *weights : uniform_constraint_weights(source);
  if (weights) {
    Rational total(0);
    for (const auto& [key, v] : w) {
      if (v < Rational(0)) throw InputError("weights must be nonnegative");
      if (!source->contains(key.first, key.second)) {
        throw InputError("weight attached to a nonexistent constraint");
      }
      total = total + v;
    }
    if (!(total == Rational(1))) throw InputError("weights must sum to 1");
  }
  if (kind == Game::Kind::assignment) return build_assignment(source, target, w);
  return build_constraint_variable(source, target, w);
}

GameValue classical_value(const Game& game, bool synchronous_only,
                          const GameOptions& options) {
  const int nqa = static_cast<int>(game.alice_questions.size());
  const int nqb = static_cast<int>(game.bob_questions.size());
  const int naa = static_cast<int>(game.alice_answers.size());
  const int nab = static_cast<int>(game.bob_answers.size());
  if (nqa == 0 || nqb == 0 || naa == 0 || nab == 0) {
    throw InputError("game has empty question or answer sets");
  }

  // An answer that no accepting entry ever uses for a question is dominated:
  // every term it touches is already zero, so dropping it never lowers the
  // maximum.  For constraint questions this prunes to the satisfying tuples.
  std::vector<std::vector<int>> alice_cand(static_cast<size_t>(nqa));
  std::vector<std::vector<int>> bob_cand(static_cast<size_t>(nqb));
  {
    std::vector<std::set<int>> av(static_cast<size_t>(nqa));
    std::vector<std::set<int>> bv(static_cast<size_t>(nqb));
    for (const auto& e : game.accept) {
      av[static_cast<size_t>(e[2])].insert(e[0]);
      bv[static_cast<size_t>(e[3])].insert(e[1]);
    }
    if (synchronous_only) {
      // the same function serves both roles, so usefulness on either side
      // keeps an answer alive
      for (int x = 0; x < nqa; ++x) {
        av[static_cast<size_t>(x)].insert(bv[static_cast<size_t>(x)].begin(),
                                          bv[static_cast<size_t>(x)].end());
      }
    }
    for (int x = 0; x < nqa; ++x) {
      alice_cand[static_cast<size_t>(x)].assign(
          av[static_cast<size_t>(x)].begin(), av[static_cast<size_t>(x)].end());
      if (alice_cand[static_cast<size_t>(x)].empty()) {
        alice_cand[static_cast<size_t>(x)].push_back(0);
      }
    }
    for (int y = 0; y < nqb; ++y) {
      bob_cand[static_cast<size_t>(y)].assign(
          bv[static_cast<size_t>(y)].begin(), bv[static_cast<size_t>(y)].end());
      if (bob_cand[static_cast<size_t>(y)].empty()) {
        bob_cand[static_cast<size_t>(y)].push_back(0);
      }
    }
  }

  GameValue result;
  result.value = Rational(0);

  if (synchronous_only) {
    if (game.alice_questions != game.bob_questions ||
        game.alice_answers != game.bob_answers) {
      throw InputError(
          "synchronous evaluation needs matching question and answer sets");
    }
    std::vector<size_t> pick(static_cast<size_t>(nqa), 0);
    bool done = false;
    while (!done) {
      if (result.strategies >= options.strategy_budget) {
        result.status = SearchStatus::budget_exhausted;
        return result;
      }
      ++result.strategies;
      Rational total(0);
      for (const auto& [q, w] : game.distribution) {
        const int fx = alice_cand[static_cast<size_t>(q.first)]
                                 [pick[static_cast<size_t>(q.first)]];
        const int fy = alice_cand[static_cast<size_t>(q.second)]
                                 [pick[static_cast<size_t>(q.second)]];
        if (game.accepts(fx, fy, q.first, q.second)) total = total + w;
      }
      if (result.value < total) result.value = total;
      size_t i = 0;
      while (i < pick.size()) {
        if (++pick[i] < alice_cand[i].size()) break;
        pick[i] = 0;
        ++i;
      }
      done = i == pick.size();
    }
    return result;
  }

  // group the distribution by Bob's question so his best response can be
  // taken independently per question once Alice's function is fixed
  std::vector<std::vector<std::pair<int, Rational>>> by_bob(
      static_cast<size_t>(nqb));
  for (const auto& [q, w] : game.distribution) {
    by_bob[static_cast<size_t>(q.second)].push_back({q.first, w});
  }

  std::vector<size_t> pick(static_cast<size_t>(nqa), 0);
  bool done = false;
  while (!done) {
    if (result.strategies >= options.strategy_budget) {
      result.status = SearchStatus::budget_exhausted;
      return result;
    }
    ++result.strategies;
    Rational total(0);
    for (int y = 0; y < nqb; ++y) {
      if (by_bob[static_cast<size_t>(y)].empty()) continue;
      Rational best(0);
      for (int b : bob_cand[static_cast<size_t>(y)]) {
        Rational sum(0);
        for (const auto& [x, w] : by_bob[static_cast<size_t>(y)]) {
          const int fx =
              alice_cand[static_cast<size_t>(x)][pick[static_cast<size_t>(x)]];
          if (game.accepts(fx, b, x, y)) sum = sum + w;
        }
        if (best < sum) best = sum;
      }
      total = total + best;
    }
    if (result.value < total) result.value = total;
    size_t i = 0;
    while (i < pick.size()) {
      if (++pick[i] < alice_cand[i].size()) break;
      pick[i] = 0;
      ++i;
    }
    done = i == pick.size();
  }
  return result;
}

}  // namespace qhom
