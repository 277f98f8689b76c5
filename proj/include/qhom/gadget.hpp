#pragma once

#include <cstdint>
#include <vector>

#include "qhom/structure.hpp"

namespace qhom {

// The power structure A^(|A|^2) with two distinguished elements: coordinates
// are indexed by pairs (a, b) of base elements in lexicographic order, x is
// the tuple whose (a, b) coordinate is a and y the one whose coordinate is b.
struct GadgetCandidate {
  StructurePtr base;
  StructurePtr structure;  // lazy when the relations outgrow the threshold
  Elem x = -1;
  Elem y = -1;
  int exponent = 0;
};

GadgetCandidate build_commutativity_gadget(
    const StructurePtr& base,
    std::uint64_t materialize_threshold = Structure::kDefaultMaterializeThreshold);

struct GadgetVerifyOptions {
  std::uint64_t samples = 10000;  // per witness, when full checking is infeasible
  std::uint64_t seed = 0;
};

struct GadgetWitness {
  Elem a = -1, b = -1;     // the value pair this witness realizes
  int coordinate = -1;     // projection coordinate, = index of (a, b)
  bool value_ok = false;   // f(x) = a and f(y) = b
  bool hom_ok = false;     // projection preserves the checked tuples
  std::uint64_t checks = 0;
};

struct GadgetReport {
  bool all_valid = false;
  bool sampled = false;  // tuple checks were sampled rather than exhaustive
  std::vector<GadgetWitness> witnesses;
};

// For every pair (a, b) exhibits the projection onto coordinate (a, b) as a
// classical witness taking x to a and y to b, and checks it is a
// homomorphism: exhaustively over all constraint tuples when the power is
// explicit, otherwise on seeded random tuples assembled coordinatewise.
GadgetReport verify_gadget_property_i(const GadgetCandidate& g,
                                      const GadgetVerifyOptions& options = {});

// The rigid homogeneous component used to pin a structure's elements: the
// homogenised magic square joined to two disjoint copies of the involution
// catalog, glued by LR(0,2) equalities onto variables 1, 5 and 2, 4.
struct CollapseBlock {
  StructurePtr structure;  // 220 elements
  Elem anchor = -1;        // magic-square variable "1"
  Elem j = -1;             // the homogenisation element
};

CollapseBlock collapse_block();

// The full pinning pipeline over a linear structure, every stage kept.
struct SeparationPipeline {
  Homogenisation homogenised;  // stage 1: remove odd tuples
  CollapseBlock block;         // stage 2: the rigid component
  StructurePtr glued;          // stage 3: one block copy glued per element
  StructurePtr lin;            // parity template for the encoding
  StructurePtr graph;          // encode_graph(glued, lin)
  StructurePtr completed;      // stage 4: completion of the graph
};

SeparationPipeline build_separation_structure(const StructurePtr& a);

}  // namespace qhom
