#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qhom/structure.hpp"

namespace qhom {

// A word over the generators of a presentation. Letter g > 0 is generator
// g - 1, letter -g is its inverse. The empty word is the identity.
using Word = std::vector<int>;

Word inverse_word(const Word& w);

// [u, v] = u v u^-1 v^-1
Word commutator_word(const Word& u, const Word& v);

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  int generator_index(const std::string& name) const;
  std::size_t letter_count() const;
};

std::string word_to_string(const Word& w, const GroupPresentation& g);

// Parses expressions like "x1 x2^-1 [x1,x5]J^-1 (x2 x4)^3". Generator names
// are matched greedily, longest name first, so names may contain spaces or
// parentheses of their own (as the permutation labels do).
Word parse_word(const GroupPresentation& g, const std::string& expr);

struct SolutionGroupMap {
  GroupPresentation group;
  std::vector<int> generator_of;  // element id -> generator index
  int j_generator = -1;           // index of J, or -1 in homogeneous mode
};

// The involutive presentation attached to a system of parity constraints:
// one generator per element, squares, one product relator per constraint
// tuple, and commutators for the distinct entries of each tuple. With
// homogeneous = false a central generator J is added and odd constraints
// close with J^-1; with homogeneous = true the structure must be
// homogeneous and J is omitted.
SolutionGroupMap solution_group(const StructurePtr& a, bool homogeneous);

// Free product with optional amalgamation: generator lists are concatenated
// (second list renamed on collision), relators are united, and each pair
// (u, v) contributes u^-1 v with v shifted onto the second block.
GroupPresentation combine(const GroupPresentation& g1, const GroupPresentation& g2,
                          const std::vector<std::pair<Word, Word>>& amalgamations);

GroupPresentation quotient_by_normal_closure(const GroupPresentation& g,
                                             const std::vector<Word>& extra_relators);

}  // namespace qhom
