#include "qhom/homsearch.hpp"

#include <algorithm>

#include "doctest.h"
#include "qhom/structure.hpp"
#include "qhom/util.hpp"

namespace {

using namespace qhom;

StructurePtr edgeless(Elem n) {
  return std::make_shared<Structure>(n, std::vector<RelationSymbol>{},
                                     std::map<std::string, std::vector<Tuple>>{});
}

TEST_CASE("clique endomorphisms are exactly the permutations") {
  StructurePtr k3 = make_clique(3);
  SearchResult r = enumerate_homomorphisms(k3, k3);
  CHECK(r.complete());
  CHECK(r.count == 6);
  REQUIRE(r.maps.size() == 6);
  CHECK(std::is_sorted(r.maps.begin(), r.maps.end()));
  for (const auto& m : r.maps) {
    std::vector<Elem> sorted = m;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<Elem>{0, 1, 2});
  }
  CHECK(r.nodes > 0);
}

TEST_CASE("no homomorphism into a smaller clique") {
  SearchResult r = enumerate_homomorphisms(make_clique(3), make_clique(2));
  CHECK(r.complete());
  CHECK(r.count == 0);
  CHECK(r.maps.empty());
}

TEST_CASE("edge maps into a triangle") {
  SearchResult r = enumerate_homomorphisms(make_clique(2), make_clique(3));
  CHECK(r.complete());
  CHECK(r.count == 6);
}

TEST_CASE("unconstrained maps are all counted") {
  SearchResult r = enumerate_homomorphisms(edgeless(2), edgeless(3));
  CHECK(r.count == 9);
  CHECK(r.maps.front() == std::vector<Elem>{0, 0});
  CHECK(r.maps.back() == std::vector<Elem>{2, 2});
}

TEST_CASE("a missing target symbol is an input error") {
  CHECK_THROWS_AS(enumerate_homomorphisms(make_clique(2), edgeless(2)), InputError);
}

TEST_CASE("node budget exhaustion is reported") {
  SearchOptions opt;
  opt.node_budget = 2;
  SearchResult r = enumerate_homomorphisms(make_clique(3), make_clique(3), opt);
  CHECK(r.status == SearchStatus::budget_exhausted);
  CHECK_FALSE(r.complete());
  CHECK(r.nodes <= 2);
}

TEST_CASE("result limits stop the search early") {
  SearchOptions opt;
  opt.max_results = 2;
  SearchResult r = enumerate_homomorphisms(make_clique(3), make_clique(3), opt);
  CHECK(r.complete());
  CHECK(r.count == 2);
  REQUIRE(r.maps.size() == 2);
  // the first two in lexicographic order
  CHECK(r.maps[0] == std::vector<Elem>{0, 1, 2});
  CHECK(r.maps[1] == std::vector<Elem>{0, 2, 1});
}

TEST_CASE("counting without storing maps") {
  SearchOptions opt;
  opt.store_maps = false;
  SearchResult r = enumerate_homomorphisms(make_clique(3), make_clique(3), opt);
  CHECK(r.count == 6);
  CHECK(r.maps.empty());
}

TEST_CASE("threaded search agrees with the single-threaded one") {
  StructurePtr k4 = make_clique(4);
  SearchResult one = enumerate_homomorphisms(k4, k4);
  SearchOptions opt;
  opt.threads = 3;
  SearchResult many = enumerate_homomorphisms(k4, k4, opt);
  CHECK(many.complete());
  CHECK(many.count == one.count);
  CHECK(many.maps == one.maps);

  opt.max_results = 5;
  SearchResult capped = enumerate_homomorphisms(k4, k4, opt);
  CHECK(capped.count == 5);
  REQUIRE(capped.maps.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(capped.maps[i] == one.maps[i]);
}

TEST_CASE("implicit inequality constraints force injectivity") {
  // both sides implicit: tracked with a used-value bitmap
  StructurePtr src = completion(edgeless(3), 5);
  StructurePtr tgt = completion(edgeless(3), 5);
  REQUIRE(src->distinct_symbol() >= 0);
  SearchResult r = enumerate_homomorphisms(src, tgt);
  CHECK(r.count == 6);

  // implicit source against an explicit target relation
  StructurePtr tgt4 = completion(edgeless(4));
  REQUIRE(tgt4->distinct_symbol() == -1);
  SearchResult inj = enumerate_homomorphisms(src, tgt4);
  CHECK(inj.count == 24);

  // explicit source against an implicit target
  StructurePtr src_explicit = completion(edgeless(3));
  SearchResult back = enumerate_homomorphisms(src_explicit, tgt);
  CHECK(back.count == 6);
}

TEST_CASE("binary polymorphisms of the triangle") {
  SearchResult r = enumerate_polymorphisms(make_clique(3), 2);
  CHECK(r.complete());
  CHECK(r.count == 12);
  StructurePtr sq = Structure::power(make_clique(3), 2);
  for (const auto& m : r.maps) {
    ProjectionDecomposition d = decompose_projection(sq, m);
    CHECK(d.projective);
    CHECK((d.coordinate == 0 || d.coordinate == 1));
  }
}

TEST_CASE("unary polymorphisms are automorphisms for a clique") {
  SearchResult r = enumerate_polymorphisms(make_clique(3), 1);
  CHECK(r.count == 6);
}

TEST_CASE("majority breaks projectivity for the one-edge graph") {
  StructurePtr k2 = make_clique(2);
  SearchResult r = enumerate_polymorphisms(k2, 3);
  CHECK(r.count == 16);

  StructurePtr cube = Structure::power(k2, 3);
  std::vector<Elem> maj(8);
  for (Elem e = 0; e < 8; ++e) {
    int ones = (e & 1) + ((e >> 1) & 1) + ((e >> 2) & 1);
    maj[e] = ones >= 2 ? 1 : 0;
  }
  ProjectionDecomposition d = decompose_projection(cube, maj);
  CHECK_FALSE(d.projective);
  CHECK(d.coordinate == -1);

  // a flipped projection is still projective
  std::vector<Elem> flip(8);
  for (Elem e = 0; e < 8; ++e) flip[e] = 1 - ((e >> 1) & 1);
  ProjectionDecomposition p = decompose_projection(cube, flip);
  CHECK(p.projective);
  CHECK(p.coordinate == 1);
  CHECK(p.bijection == std::vector<Elem>{1, 0});
}

TEST_CASE("projection decomposition validates its input") {
  StructurePtr k3 = make_clique(3);
  CHECK_THROWS_AS(decompose_projection(k3, std::vector<Elem>(3, 0)), InputError);
  StructurePtr sq = Structure::power(k3, 2);
  CHECK_THROWS_AS(decompose_projection(sq, std::vector<Elem>(4, 0)), InputError);
}

}  // namespace
