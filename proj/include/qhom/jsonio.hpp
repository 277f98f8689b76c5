#pragma once

#include <string>

#include "json.hpp"
#include "qhom/fpgroups.hpp"
#include "qhom/games.hpp"
#include "qhom/repalg.hpp"
#include "qhom/structure.hpp"
#include "qhom/weighted.hpp"

namespace qhom {

using Json = nlohmann::json;

// Structures serialize explicitly as
//   {"domain_size": n, "signature": [["LR(0,3)", 3], ...],
//    "relations": {"LR(0,3)": [[0,1,2], ...], ...}, "labels": [...]}
// with two derived forms kept symbolic:
//   {"power_of": <structure>, "exponent": k}   for Cartesian powers, and
//   {"completion_of": <structure>}             for completions whose
// distinctness relation is held implicitly.  Explicitly materialized
// completions serialize as plain explicit structures.
Json structure_to_json(const StructurePtr& st);
StructurePtr structure_from_json(const Json& j);

// {"generators": ["x1", ...], "relators": [[1, 1], [2, -1, ...], ...]}
// with the letter encoding used throughout: k > 0 is generator k-1,
// -k its inverse.
Json group_to_json(const GroupPresentation& g);
GroupPresentation group_from_json(const Json& j);

// Dense row-major complex matrices: [[[re, im], ...], ...].
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

// {"source": ..., "target": ..., "dimension": d, "oracular": b,
//  "matrices": {"a,b": <matrix>, ...}}
Json representation_to_json(const PvmRepresentation& rep);
PvmRepresentation representation_from_json(const Json& j);

// Like a representation but with both measurement families; constraint keys
// are "<relation>:<source tuple>|<answer tuple>" with ids joined by commas.
Json strategy_to_json(const StrategyRep& s);
StrategyRep strategy_from_json(const Json& j);

// {"kind": ..., "synchronous": b, "alice_questions": [...], ...,
//  "distribution": [[x, y, num, den], ...], "accept": [[a, b, x, y], ...]}
Json game_to_json(const Game& game);
Game game_from_json(const Json& j);

// Weight files:
//   {"weights": [{"relation": "LR(0,3)", "tuple": [0,1,2],
//                 "weight": [num, den]}, ...]}
//   {"pair_weights": [{"first": {"relation": ..., "tuple": ...},
//                      "second": {...}, "weight": [num, den]}, ...]}
ConstraintWeights constraint_weights_from_json(const Json& j,
                                               const StructurePtr& source);
PairWeights pair_weights_from_json(const Json& j, const StructurePtr& source);

// Subgroup generator files: {"words": [...]} where each entry is either a
// letter array or an expression string such as "[x1,x5]J^-1".
std::vector<Word> words_from_json(const Json& j, const GroupPresentation& g);

Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

// FNV-1a digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace qhom
