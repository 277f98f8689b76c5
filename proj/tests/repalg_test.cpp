#include "qhom/repalg.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qhom/structure.hpp"
#include "qhom/util.hpp"

namespace {

using namespace qhom;

double comm_norm(const Mat& a, const Mat& b) { return (a * b - b * a).norm(); }

TEST_CASE("the two-qubit observable grid is a clean oracular representation") {
  PvmRepresentation rep = magic_square_two_qubit_rep();
  CHECK(rep.dimension == 4);
  CHECK(rep.oracular);
  CHECK(rep.source->domain_size() == 9);
  CHECK(rep.target->domain_size() == 2);
  CHECK(rep.matrices.size() == 18);

  ViolationReport r = check_representation(rep);
  CHECK(r.clean(1e-9));
  CHECK(r.max_residual < 1e-12);
  CHECK_FALSE(r.sampled);
  CHECK(r.checks > 0);
  CHECK(r.violations.empty());
}

TEST_CASE("tampering with one projection is detected") {
  PvmRepresentation rep = magic_square_two_qubit_rep();
  rep.matrices[{0, 0}] = 0.5 * rep.matrices[{0, 0}];
  ViolationReport r = check_representation(rep);
  CHECK_FALSE(r.clean(1e-9));
  CHECK_FALSE(r.violations.empty());
  CHECK(r.max_residual > 0.1);
}

TEST_CASE("representation lookups and shape validation") {
  PvmRepresentation rep = magic_square_two_qubit_rep();
  CHECK(rep.at(0, 0).rows() == 4);
  CHECK_THROWS_AS(rep.at(0, 5), InputError);

  rep.matrices.erase({3, 1});
  CHECK_THROWS_AS(check_representation(rep), InputError);

  PvmRepresentation wrong = magic_square_two_qubit_rep();
  wrong.matrices[{2, 1}] = Mat::Identity(2, 2);
  CHECK_THROWS_AS(check_representation(wrong), InputError);
}

TEST_CASE("characters of homomorphisms are one-dimensional representations") {
  StructurePtr k3 = make_clique(3);
  PvmRepresentation id = character_of_hom(k3, k3, {0, 1, 2});
  CHECK(id.dimension == 1);
  CHECK(check_representation(id).clean(1e-9));
  CHECK(id.at(1, 1)(0, 0) == std::complex<double>(1.0, 0.0));
  CHECK(id.at(1, 2)(0, 0) == std::complex<double>(0.0, 0.0));

  // a rotation is a homomorphism, a collapse is not
  PvmRepresentation rot = character_of_hom(k3, k3, {1, 2, 0});
  CHECK(check_representation(rot).clean(1e-9));
  CHECK_THROWS_AS(character_of_hom(k3, k3, {0, 0, 1}), InputError);
  CHECK_THROWS_AS(character_of_hom(k3, k3, {0, 1}), InputError);
  CHECK_THROWS_AS(character_of_hom(k3, k3, {0, 1, 3}), InputError);
}

TEST_CASE("composition tensors the factors and chains the maps") {
  StructurePtr k3 = make_clique(3);
  PvmRepresentation f = character_of_hom(k3, k3, {1, 2, 0});
  PvmRepresentation g = character_of_hom(k3, k3, {2, 0, 1});
  PvmRepresentation fg = compose(f, g);
  CHECK(fg.dimension == 1);
  CHECK(check_representation(fg).clean(1e-9));
  // g after f is the identity
  for (Elem a = 0; a < 3; ++a)
    for (Elem b = 0; b < 3; ++b)
      CHECK(std::abs(fg.at(a, b)(0, 0) - std::complex<double>(a == b ? 1.0 : 0.0)) < 1e-12);

  // composing with an identity character only pads the dimension
  PvmRepresentation ms = magic_square_two_qubit_rep();
  PvmRepresentation lin_id =
      character_of_hom(ms.target, ms.target, {0, 1});
  PvmRepresentation padded = compose(ms, lin_id);
  CHECK(padded.dimension == 4);
  CHECK((padded.at(4, 1) - ms.at(4, 1)).norm() < 1e-12);
  CHECK(check_representation(padded).clean(1e-9));

  CHECK_THROWS_AS(compose(ms, f), InputError);
}

TEST_CASE("block magic unitaries pass their own checks") {
  MagicUnitary u = block_magic_unitary(0.3);
  CHECK(u.n == 4);
  CHECK(u.d == 2);
  CHECK(check_magic_unitary(u).clean(1e-8));
  CHECK(u.at(0, 0)(0, 0) == std::complex<double>(1.0, 0.0));
  CHECK_THROWS_AS(u.at(4, 0), InputError);

  MagicUnitary broken = u;
  broken.entries[0][0] = Mat::Zero(2, 2);
  CHECK_FALSE(check_magic_unitary(broken).clean(1e-8));
}

TEST_CASE("the off-block commutator follows the rotation angle") {
  const double pi = std::numbers::pi;
  MagicUnitary quarter = block_magic_unitary(pi / 4);
  const double norm = comm_norm(quarter.at(0, 0), quarter.at(2, 2));
  CHECK(norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(norm > 0.1);

  MagicUnitary aligned = block_magic_unitary(0.0);
  CHECK(comm_norm(aligned.at(0, 0), aligned.at(2, 2)) < 1e-12);
  CHECK(check_magic_unitary(aligned).clean(1e-8));
}

TEST_CASE("magic unitaries induce single-coordinate representations") {
  MagicUnitary u = block_magic_unitary(0.7);
  PvmRepresentation rep = magic_unitary_rep(u, 0, 2);
  CHECK(rep.source->is_power());
  CHECK(rep.source->domain_size() == 16);
  CHECK(rep.target->domain_size() == 4);
  CHECK(rep.dimension == 2);
  CHECK_FALSE(rep.oracular);
  CHECK(check_representation(rep).clean(1e-9));

  // the matrix only sees the chosen coordinate
  for (Elem x1 = 0; x1 < 4; ++x1) {
    const Elem e = rep.source->encode({2, x1});
    CHECK((rep.at(e, 1) - u.at(2, 1)).norm() < 1e-12);
  }

  PvmRepresentation second = magic_unitary_rep(u, 1, 2);
  const Elem e = second.source->encode({2, 3});
  CHECK((second.at(e, 1) - u.at(3, 1)).norm() < 1e-12);

  CHECK_THROWS_AS(magic_unitary_rep(u, 2, 2), InputError);
  CHECK_THROWS_AS(magic_unitary_rep(u, -1, 2), InputError);
  MagicUnitary broken = u;
  broken.entries[1][1] = Mat::Zero(2, 2);
  CHECK_THROWS_AS(magic_unitary_rep(broken, 0, 2), InputError);
}

TEST_CASE("coordinate projections are additive and central") {
  const double pi = std::numbers::pi;
  MagicUnitary u = block_magic_unitary(pi / 4);
  PvmRepresentation rep = magic_unitary_rep(u, 0, 3);

  Mat empty = pi_projection(rep, {});
  Mat first = pi_projection(rep, {0});
  Mat second = pi_projection(rep, {1});
  Mat third = pi_projection(rep, {2});
  Mat all = pi_projection(rep, {0, 1, 2});

  CHECK(empty.norm() < 1e-12);
  CHECK((first + second + third - Mat::Identity(2, 2)).norm() < 1e-9);
  CHECK((all - Mat::Identity(2, 2)).norm() < 1e-9);
  // projections: hermitian idempotents
  for (const Mat* m : {&first, &second, &third}) {
    CHECK((*m - m->adjoint()).norm() < 1e-12);
    CHECK((*m * *m - *m).norm() < 1e-12);
  }
  // additivity over a disjoint split
  Mat pairror = pi_projection(rep, {0, 2});
  CHECK((pairror - first - third).norm() < 1e-9);
  // centrality against the generating matrices
  for (const auto& [key, mat] : rep.matrices) {
    CHECK(comm_norm(first, mat) < 1e-9);
  }

  CHECK_THROWS_AS(pi_projection(rep, {3}), InputError);
  PvmRepresentation ms = magic_square_two_qubit_rep();
  CHECK_THROWS_AS(pi_projection(ms, {0}), InputError);
}

TEST_CASE("sampled verification of a lazy power source") {
  MagicUnitary u = block_magic_unitary(0.4);
  PvmRepresentation rep = magic_unitary_rep(u, 3, 7);
  CHECK(rep.source->is_lazy());
  CheckOptions opt;
  opt.materialize_cap = 1000;
  opt.samples = 50;
  opt.seed = 11;
  ViolationReport r = check_representation(rep, opt);
  CHECK(r.sampled);
  CHECK(r.clean(1e-9));

  ViolationReport again = check_representation(rep, opt);
  CHECK(again.checks == r.checks);
  CHECK(again.max_residual == r.max_residual);
}

}  // namespace
