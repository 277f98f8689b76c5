#pragma once

#include <cstdint>
#include <vector>

#include "qhom/structure.hpp"

namespace qhom {

enum class SearchStatus { complete, budget_exhausted };

struct SearchOptions {
  std::uint64_t node_budget = 100000000;  // assignment attempts before giving up
  int threads = 1;                        // > 1 splits the first value choice
  bool store_maps = true;
  std::uint64_t max_results = 0;  // stop after this many maps; 0 = all
};

struct SearchResult {
  SearchStatus status = SearchStatus::complete;
  std::uint64_t count = 0;
  std::uint64_t nodes = 0;
  std::vector<std::vector<Elem>> maps;  // lexicographic order when stored

  bool complete() const { return status == SearchStatus::complete; }
};

// Backtracking enumeration of maps dom(a) -> dom(b) preserving every
// relation. A partial map survives only while each touched source tuple
// still extends to some target tuple. Unary source relations are folded
// into per-element candidate lists up front, so only values that pass them
// count against the node budget. With max_results set, elements are
// assigned in id order and the lexicographically least maps are found
// first; unlimited runs are free to assign in a most-constrained-first
// order instead.
SearchResult enumerate_homomorphisms(const StructurePtr& a, const StructurePtr& b,
                                     const SearchOptions& options = {});

// Homomorphisms base^exponent -> base.
SearchResult enumerate_polymorphisms(const StructurePtr& base, int exponent,
                                     const SearchOptions& options = {});

struct ProjectionDecomposition {
  bool projective = false;
  int coordinate = -1;          // least coordinate that works
  std::vector<Elem> bijection;  // sigma with map = sigma after that projection
};

// Tests whether a map out of a power structure factors through a single
// coordinate followed by a bijection of the base domain.
ProjectionDecomposition decompose_projection(const StructurePtr& power,
                                             const std::vector<Elem>& map);

}  // namespace qhom
