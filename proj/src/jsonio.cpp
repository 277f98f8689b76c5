#include "qhom/jsonio.hpp"

#include <fstream>
#include <sstream>

#include "qhom/util.hpp"

namespace qhom {
namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::string ids_str(const Tuple& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) os << ',';
    os << t[i];
  }
  return os.str();
}

Tuple ids_parse(const std::string& s) {
  Tuple out;
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, ',')) {
    try {
      out.push_back(std::stoll(part));
    } catch (const std::exception&) {
      throw InputError("bad id list \"" + s + "\"");
    }
  }
  return out;
}

Rational rational_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer()) {
    throw InputError("weights must be [numerator, denominator] pairs");
  }
  return Rational(j[0].get<int64_t>(), j[1].get<int64_t>());
}

ConstraintKey constraint_key_from(const Json& j, const StructurePtr& source) {
  const std::string name = field(j, "relation").get<std::string>();
  const int sym = source->symbol_index(name);
  if (sym < 0) throw InputError("no relation named " + name);
  ConstraintKey key{sym, field(j, "tuple").get<Tuple>()};
  if (!source->contains(key.first, key.second)) {
    throw InputError("tuple (" + ids_str(key.second) + ") is not in " + name);
  }
  return key;
}

std::map<std::pair<Elem, Elem>, Mat> matrix_family_from(const Json& j) {
  std::map<std::pair<Elem, Elem>, Mat> out;
  if (!j.is_object()) throw InputError("matrix table must be an object");
  for (const auto& [key, value] : j.items()) {
    const Tuple ids = ids_parse(key);
    if (ids.size() != 2) throw InputError("matrix key \"" + key + "\" is not \"a,b\"");
    out[{ids[0], ids[1]}] = matrix_from_json(value);
  }
  return out;
}

Json matrix_family_to(const std::map<std::pair<Elem, Elem>, Mat>& family) {
  Json out = Json::object();
  for (const auto& [key, m] : family) {
    out[std::to_string(key.first) + "," + std::to_string(key.second)] =
        matrix_to_json(m);
  }
  return out;
}

}  // namespace

Json structure_to_json(const StructurePtr& st) {
  if (!st) throw InputError("no structure to serialize");
  if (st->is_power()) {
    Json j;
    j["power_of"] = structure_to_json(st->power_base());
    j["exponent"] = st->power_exponent();
    return j;
  }
  if (st->distinct_symbol() >= 0) {
    if (!st->is_completion()) {
      throw InputError("cannot serialize an implicit relation without provenance");
    }
    Json j;
    j["completion_of"] = structure_to_json(st->completion_base());
    return j;
  }
  Json j;
  j["domain_size"] = st->domain_size();
  Json sig = Json::array();
  Json rels = Json::object();
  for (int s = 0; s < static_cast<int>(st->signature().size()); ++s) {
    const RelationSymbol& sym = st->symbol(s);
    sig.push_back(Json::array({sym.name, sym.arity}));
    Json tuples = Json::array();
    st->for_each_tuple(s, [&](const Tuple& t) {
      tuples.push_back(t);
      return true;
    });
    rels[sym.name] = std::move(tuples);
  }
  j["signature"] = std::move(sig);
  j["relations"] = std::move(rels);
  if (!st->labels().empty()) {
    Json labels = Json::object();
    for (const auto& [e, name] : st->labels()) labels[std::to_string(e)] = name;
    j["labels"] = std::move(labels);
  }
  return j;
}

StructurePtr structure_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("structure must be a JSON object");
  if (j.contains("power_of")) {
    const StructurePtr base = structure_from_json(j.at("power_of"));
    const int exponent = field(j, "exponent").get<int>();
    return Structure::power(base, exponent);
  }
  if (j.contains("completion_of")) {
    return completion(structure_from_json(j.at("completion_of")));
  }
  const Elem domain = field(j, "domain_size").get<Elem>();
  std::vector<RelationSymbol> signature;
  for (const Json& entry : field(j, "signature")) {
    if (!entry.is_array() || entry.size() != 2) {
      throw InputError("signature entries must be [name, arity]");
    }
    signature.push_back({entry[0].get<std::string>(), entry[1].get<int>()});
  }
  std::map<std::string, std::vector<Tuple>> relations;
  for (const auto& [name, tuples] : field(j, "relations").items()) {
    std::vector<Tuple>& list = relations[name];
    for (const Json& t : tuples) list.push_back(t.get<Tuple>());
  }
  std::map<Elem, std::string> labels;
  if (j.contains("labels")) {
    for (const auto& [key, name] : j.at("labels").items()) {
      try {
        labels[std::stoll(key)] = name.get<std::string>();
      } catch (const std::exception&) {
        throw InputError("label keys must be element ids");
      }
    }
  }
  return std::make_shared<Structure>(domain, std::move(signature),
                                     std::move(relations), std::move(labels));
}

Json group_to_json(const GroupPresentation& g) {
  Json j;
  j["generators"] = g.generators;
  j["relators"] = g.relators;
  return j;
}

GroupPresentation group_from_json(const Json& j) {
  GroupPresentation g;
  g.generators = field(j, "generators").get<std::vector<std::string>>();
  if (g.generators.empty()) throw InputError("group needs at least one generator");
  for (size_t i = 0; i < g.generators.size(); ++i) {
    if (g.generators[i].empty()) throw InputError("generator names must be nonempty");
    for (size_t k = i + 1; k < g.generators.size(); ++k) {
      if (g.generators[i] == g.generators[k]) {
        throw InputError("duplicate generator name " + g.generators[i]);
      }
    }
  }
  const int n = static_cast<int>(g.generators.size());
  for (const Json& rel : field(j, "relators")) {
    Word w = rel.get<Word>();
    for (int letter : w) {
      if (letter == 0 || letter > n || letter < -n) {
        throw InputError("relator letter out of range");
      }
    }
    g.relators.push_back(std::move(w));
  }
  return g;
}

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError("matrix rows must all have the same length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& cell = row[static_cast<size_t>(c)];
      if (!cell.is_array() || cell.size() != 2) {
        throw InputError("matrix entries must be [re, im] pairs");
      }
      m(r, c) = std::complex<double>(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

Json representation_to_json(const PvmRepresentation& rep) {
  Json j;
  j["source"] = structure_to_json(rep.source);
  j["target"] = structure_to_json(rep.target);
  j["dimension"] = rep.dimension;
  j["oracular"] = rep.oracular;
  j["matrices"] = matrix_family_to(rep.matrices);
  return j;
}

PvmRepresentation representation_from_json(const Json& j) {
  PvmRepresentation rep;
  rep.source = structure_from_json(field(j, "source"));
  rep.target = structure_from_json(field(j, "target"));
  rep.dimension = field(j, "dimension").get<int>();
  rep.oracular = j.contains("oracular") && j.at("oracular").get<bool>();
  rep.matrices = matrix_family_from(field(j, "matrices"));
  return rep;
}

Json strategy_to_json(const StrategyRep& s) {
  Json j;
  j["source"] = structure_to_json(s.source);
  j["target"] = structure_to_json(s.target);
  j["dimension"] = s.dimension;
  j["variables"] = matrix_family_to(s.variables);
  Json cons = Json::object();
  for (const auto& [key, family] : s.constraints) {
    const std::string& name = s.source->symbol(key.first).name;
    if (name.find(':') != std::string::npos ||
        name.find('|') != std::string::npos) {
      throw InputError("relation name " + name + " cannot be used in strategy keys");
    }
    for (const auto& [answer, m] : family) {
      cons[name + ":" + ids_str(key.second) + "|" + ids_str(answer)] =
          matrix_to_json(m);
    }
  }
  j["constraints"] = std::move(cons);
  return j;
}

StrategyRep strategy_from_json(const Json& j) {
  StrategyRep s;
  s.source = structure_from_json(field(j, "source"));
  s.target = structure_from_json(field(j, "target"));
  s.dimension = field(j, "dimension").get<int>();
  s.variables = matrix_family_from(field(j, "variables"));
  for (const auto& [key, value] : field(j, "constraints").items()) {
    const size_t colon = key.find(':');
    const size_t bar = key.find('|', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || bar == std::string::npos) {
      throw InputError("constraint key \"" + key +
                       "\" is not \"relation:tuple|answer\"");
    }
    const std::string name = key.substr(0, colon);
    const int sym = s.source->symbol_index(name);
    if (sym < 0) throw InputError("no relation named " + name);
    const Tuple src = ids_parse(key.substr(colon + 1, bar - colon - 1));
    const Tuple answer = ids_parse(key.substr(bar + 1));
    s.constraints[{sym, src}][answer] = matrix_from_json(value);
  }
  return s;
}

Json game_to_json(const Game& game) {
  Json j;
  switch (game.kind) {
    case Game::Kind::assignment:
      j["kind"] = "assignment";
      break;
    case Game::Kind::constraint_variable:
      j["kind"] = "constraint-variable";
      break;
    case Game::Kind::constraint_constraint:
      j["kind"] = "constraint-constraint";
      break;
  }
  j["synchronous"] = game.synchronous;
  j["alice_questions"] = game.alice_questions;
  j["bob_questions"] = game.bob_questions;
  j["alice_answers"] = game.alice_answers;
  j["bob_answers"] = game.bob_answers;
  Json dist = Json::array();
  for (const auto& [q, w] : game.distribution) {
    dist.push_back(Json::array({q.first, q.second, w.num(), w.den()}));
  }
  j["distribution"] = std::move(dist);
  Json accept = Json::array();
  for (const auto& e : game.accept) {
    accept.push_back(Json::array({e[0], e[1], e[2], e[3]}));
  }
  j["accept"] = std::move(accept);
  return j;
}

Game game_from_json(const Json& j) {
  Game game;
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "assignment") {
    game.kind = Game::Kind::assignment;
  } else if (kind == "constraint-variable") {
    game.kind = Game::Kind::constraint_variable;
  } else if (kind == "constraint-constraint") {
    game.kind = Game::Kind::constraint_constraint;
  } else {
    throw InputError("unknown game kind \"" + kind + "\"");
  }
  game.alice_questions =
      field(j, "alice_questions").get<std::vector<std::string>>();
  game.bob_questions = field(j, "bob_questions").get<std::vector<std::string>>();
  game.alice_answers = field(j, "alice_answers").get<std::vector<std::string>>();
  game.bob_answers = field(j, "bob_answers").get<std::vector<std::string>>();
  const int nqa = static_cast<int>(game.alice_questions.size());
  const int nqb = static_cast<int>(game.bob_questions.size());
  const int naa = static_cast<int>(game.alice_answers.size());
  const int nab = static_cast<int>(game.bob_answers.size());
  Rational total(0);
  for (const Json& entry : field(j, "distribution")) {
    if (!entry.is_array() || entry.size() != 4) {
      throw InputError("distribution entries must be [x, y, num, den]");
    }
    const int x = entry[0].get<int>();
    const int y = entry[1].get<int>();
    if (x < 0 || x >= nqa || y < 0 || y >= nqb) {
      throw InputError("distribution question out of range");
    }
    const Rational w(entry[2].get<int64_t>(), entry[3].get<int64_t>());
    if (w < Rational(0)) throw InputError("distribution weights must be nonnegative");
    auto [it, inserted] = game.distribution.try_emplace({x, y}, w);
    if (!inserted) it->second = it->second + w;
    total = total + w;
  }
  if (!(total == Rational(1))) {
    throw InputError("question distribution must sum to 1");
  }
  for (const Json& entry : field(j, "accept")) {
    if (!entry.is_array() || entry.size() != 4) {
      throw InputError("accept entries must be [a, b, x, y]");
    }
    const int a = entry[0].get<int>();
    const int b = entry[1].get<int>();
    const int x = entry[2].get<int>();
    const int y = entry[3].get<int>();
    if (a < 0 || a >= naa || b < 0 || b >= nab || x < 0 || x >= nqa || y < 0 ||
        y >= nqb) {
      throw InputError("accept entry out of range");
    }
    game.accept.insert({a, b, x, y});
  }
  if (j.contains("synchronous")) {
    game.synchronous = j.at("synchronous").get<bool>();
  } else {
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
  return game;
}

ConstraintWeights constraint_weights_from_json(const Json& j,
                                               const StructurePtr& source) {
  ConstraintWeights out;
  for (const Json& entry : field(j, "weights")) {
    const ConstraintKey key = constraint_key_from(entry, source);
    auto [it, inserted] = out.try_emplace(key, rational_from(field(entry, "weight")));
    if (!inserted) throw InputError("duplicate weight for a constraint");
  }
  return out;
}

PairWeights pair_weights_from_json(const Json& j, const StructurePtr& source) {
  PairWeights out;
  for (const Json& entry : field(j, "pair_weights")) {
    const ConstraintKey first = constraint_key_from(field(entry, "first"), source);
    const ConstraintKey second = constraint_key_from(field(entry, "second"), source);
    auto [it, inserted] = out.try_emplace(std::make_pair(first, second),
                                          rational_from(field(entry, "weight")));
    if (!inserted) throw InputError("duplicate weight for a constraint pair");
  }
  return out;
}

std::vector<Word> words_from_json(const Json& j, const GroupPresentation& g) {
  std::vector<Word> out;
  for (const Json& entry : field(j, "words")) {
    if (entry.is_string()) {
      out.push_back(parse_word(g, entry.get<std::string>()));
      continue;
    }
    Word w = entry.get<Word>();
    const int n = static_cast<int>(g.generators.size());
    for (int letter : w) {
      if (letter == 0 || letter > n || letter < -n) {
        throw InputError("word letter out of range");
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

Json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw InputError("failed to parse " + path + ": " + e.what());
  }
  return j;
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw InputError("failed to write " + path);
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return hex_digest(buf.str());
}

}  // namespace qhom
