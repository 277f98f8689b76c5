#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qhom/util.hpp"

namespace qhom {

using Elem = std::int64_t;
using Tuple = std::vector<Elem>;

struct RelationSymbol {
  std::string name;
  int arity = 0;
  friend bool operator==(const RelationSymbol&, const RelationSymbol&) = default;
};

// Parity-constraint symbols are named "LR(b,n)": tuples of arity n whose
// entries sum to b over Z2.
std::string lr_name(int rhs, int arity);
// Returns true and fills (rhs, arity) when `name` has the "LR(b,n)" form.
bool parse_lr_name(const std::string& name, int& rhs, int& arity);

// Explicit tuple set, stored lexicographically sorted and deduplicated.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::vector<Tuple> tuples);
  const std::vector<Tuple>& tuples() const { return tuples_; }
  bool contains(const Tuple& t) const;
  std::size_t size() const { return tuples_.size(); }

 private:
  std::vector<Tuple> tuples_;
};

class Structure;
using StructurePtr = std::shared_ptr<const Structure>;

// A finite relational structure.  Elements are 0..domain_size-1; display names
// live in labels.  A structure is either explicit (tuple sets in memory) or a
// lazy power of a base structure, where membership is answered coordinatewise.
// Materialized powers keep their (base, exponent) provenance.  One relation
// may instead be implicit "all distinct pairs" (the completion symbol over a
// domain too large to list), answered semantically.
class Structure {
 public:
  Structure(Elem domain_size, std::vector<RelationSymbol> signature,
            std::map<std::string, std::vector<Tuple>> relations,
            std::map<Elem, std::string> labels = {});

  static constexpr std::uint64_t kDefaultMaterializeThreshold = 100000;

  // A^k.  Explicit when the domain and every relation fit under the threshold,
  // lazy otherwise.  Power elements encode coordinate tuples in little-endian
  // mixed radix: e = sum_i x_i * |A|^i.
  static StructurePtr power(StructurePtr base, int exponent,
                            std::uint64_t materialize_threshold = kDefaultMaterializeThreshold);

  Elem domain_size() const { return domain_size_; }
  const std::vector<RelationSymbol>& signature() const { return signature_; }
  int symbol_index(const std::string& name) const;  // -1 when absent
  const RelationSymbol& symbol(int i) const { return signature_.at(i); }

  bool is_lazy() const { return lazy_; }
  bool is_power() const { return power_base_ != nullptr; }
  const StructurePtr& power_base() const;
  int power_exponent() const;

  bool is_completion() const { return completion_base_ != nullptr; }
  const StructurePtr& completion_base() const;
  // Index of the implicit all-distinct-pairs symbol, or -1 when every
  // relation is represented directly.
  int distinct_symbol() const { return distinct_symbol_; }

  std::uint64_t tuple_count(int sym) const;
  bool contains(int sym, const Tuple& t) const;
  // Visits tuples in deterministic order until fn returns false.
  void for_each_tuple(int sym, const std::function<bool(const Tuple&)>& fn) const;
  std::vector<Tuple> materialized_tuples(int sym, std::uint64_t cap) const;
  const Relation& explicit_relation(int sym) const;

  const std::map<Elem, std::string>& labels() const { return labels_; }
  std::string label(Elem e) const;
  // First element carrying this label, or -1.
  Elem element_by_label(const std::string& label) const;

  bool is_linear() const;       // every nonempty symbol has the LR(b,n) form
  bool is_homogeneous() const;  // linear with no nonempty LR(1,n)

  // Power element coding; valid only for powers.
  Tuple decode(Elem e) const;
  Elem encode(const Tuple& coords) const;

 private:
  friend StructurePtr completion(const StructurePtr&, std::uint64_t);
  Structure() = default;
  void validate_tuple(int arity, const Tuple& t) const;

  Elem domain_size_ = 0;
  std::vector<RelationSymbol> signature_;
  std::vector<Relation> relations_;  // empty when lazy_
  std::map<Elem, std::string> labels_;

  bool lazy_ = false;
  StructurePtr power_base_;
  int power_exponent_ = 0;
  StructurePtr completion_base_;
  int distinct_symbol_ = -1;
};

// Deterministic builders.
StructurePtr make_clique(int n);              // K_n over symbol "E"
StructurePtr make_magic_square();             // nine variables, five even rows/columns, one odd column
StructurePtr make_a7();                       // order-two elements of A7 with product-one triples
StructurePtr make_single_equation();          // one odd constraint on three variables

// Indices of the two distinguished generators-to-be inside make_a7()'s domain:
// (1 2)(3 4) and (2 3)(5 6).
std::pair<Elem, Elem> a7_distinguished();

// The Boolean parity template over exactly the symbols of `symbols`: each
// LR(b,n) holds the arity-n bit tuples summing to b mod 2.
StructurePtr make_lin(const std::vector<RelationSymbol>& symbols);
// LIN instantiated for the nonempty symbols of a linear structure.
StructurePtr lin_for(const Structure& a);

// Adds the fresh binary symbol "E" = {(a,b) : a != b}, explicit while the
// pair count fits under the threshold and implicit beyond it.  Errors when
// "E" is already in the signature.
StructurePtr completion(const StructurePtr& a,
                        std::uint64_t materialize_threshold =
                            Structure::kDefaultMaterializeThreshold);

struct Homogenisation {
  StructurePtr structure;
  Elem j = -1;  // the added element
};

// Adds one element j, turns every odd tuple (a1..an) into the even tuple
// (a1..an, j) of arity n+1, and anchors every original element to j through
// the even tuples (a, j, a, j).  The output has no odd tuples.
Homogenisation homogenise(const StructurePtr& a);

// Constraint-incidence colored graph of source A and target B over the same
// signature.  Vertices are element-value pairs (a, b) plus constraint
// vertices (R, s, t) with s in R^A, t in R^B and t constant wherever s is;
// (a, b) is adjacent to (R, s, t) when some position carries (a, b).  Unary
// colors: "C_v<a>" holds the pairs at a, "C_c<k>" the k-th constraint block.
// The edge symbol is "edge", stored symmetrically.  Ids interleave: the
// pair vertices of each source element are followed by the constraint
// blocks whose last incident element it is, so an id-order scan meets every
// constraint as soon as its inputs are available.
StructurePtr encode_graph(const StructurePtr& a, const StructurePtr& b);

// Disjoint union with element offsets; same-name symbols merge, and the extra
// tuples (each over the combined domain) are appended to their symbol.  Labels
// are prefixed per component when prefixes are given.
StructurePtr disjoint_union(const std::vector<StructurePtr>& parts,
                            const std::vector<std::string>& label_prefixes,
                            const std::map<std::string, std::vector<Tuple>>& extra_tuples);

// Number of assignments dom(A) -> Z2 satisfying every parity constraint,
// by elimination over GF(2).  Errors when the structure is not linear or the
// count overflows 64 bits.
std::uint64_t classical_solution_count(const StructurePtr& a);

}  // namespace qhom
