#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qhom/structure.hpp"

namespace qhom {

using Mat = Eigen::MatrixXcd;

// A finite-dimensional *-representation of the morphism algebra between two
// structures: for every pair (a, b) of a source element and a target element
// there is a d x d matrix P_{a,b}.  For a genuine representation each family
// {P_{a,b}}_b is a PVM (hermitian idempotents summing to the identity) and
// the product P_{a1,b1} ... P_{an,bn} vanishes whenever (a1..an) lies in a
// source relation but (b1..bn) does not lie in the corresponding target
// relation.  `oracular` additionally requires matrices attached to mates of
// a common source tuple to commute.
struct PvmRepresentation {
  StructurePtr source;
  StructurePtr target;
  int dimension = 0;
  bool oracular = false;
  std::map<std::pair<Elem, Elem>, Mat> matrices;

  const Mat& at(Elem a, Elem b) const;
};

struct Violation {
  std::string description;
  double residual = 0.0;
};

// Outcome of a verification pass.  `violations` lists only the checks whose
// residual exceeded the tolerance; `max_residual` is the maximum over all
// checks performed, so the report is clean exactly when max_residual <= tol.
struct ViolationReport {
  std::vector<Violation> violations;
  double max_residual = 0.0;
  bool sampled = false;       // true when source tuples were sampled
  uint64_t checks = 0;        // number of residuals computed

  bool clean(double tol) const { return max_residual <= tol; }
};

struct CheckOptions {
  double tol = 1e-9;
  // When the source stores a relation lazily, at most `materialize_cap`
  // tuples are enumerated exhaustively; beyond that, `samples` random tuples
  // are drawn with the given seed.
  uint64_t materialize_cap = 100000;
  uint64_t samples = 10000;
  uint64_t seed = 0;
};

ViolationReport check_representation(const PvmRepresentation& rep,
                                     const CheckOptions& options = {});

// Tensor composition: given representations for (A, B) and (B, C), the
// matrices Q_{a,c} = sum_b P1_{a,b} (x) P2_{b,c} form a representation for
// (A, C).  The Kronecker factors are ordered first (x) second.
PvmRepresentation compose(const PvmRepresentation& rep1,
                          const PvmRepresentation& rep2);

// The one-dimensional representation attached to a homomorphism f: A -> B,
// with P_{a,b} = [f(a) = b].  Throws InputError if `image` (element a of the
// source mapped to image[a]) is not a homomorphism.
PvmRepresentation character_of_hom(const StructurePtr& source,
                                   const StructurePtr& target,
                                   const std::vector<Elem>& image);

// An n x n grid of d x d projections whose rows and columns each sum to the
// identity.
struct MagicUnitary {
  int n = 0;
  int d = 0;
  std::vector<std::vector<Mat>> entries;  // entries[i][j], n x n

  const Mat& at(int i, int j) const;
};

ViolationReport check_magic_unitary(const MagicUnitary& u, double tol = 1e-8);

// The 4 x 4 block magic unitary with 2 x 2 entries built from a pair of rank
// one projections p = diag(1, 0) and q = R(theta) diag(1, 0) R(theta)^T:
//
//   [ p   1-p  0    0  ]
//   [ 1-p  p   0    0  ]
//   [ 0    0   q   1-q ]
//   [ 0    0  1-q   q  ]
//
// For generic theta the off-block entries u_11 and u_33 do not commute.
MagicUnitary block_magic_unitary(double theta);

// Representation of the morphism algebra for (K_n^k, K_n) induced by a magic
// unitary: P_{x,a} = u[x[coordinate]][a], depending only on one coordinate
// of the source tuple.  `coordinate` is 0-based and must lie in [0, k).
PvmRepresentation magic_unitary_rep(const MagicUnitary& u, int coordinate,
                                    int arity, double tol = 1e-8);

// For a representation of a power morphism algebra, the projection
// Pi_S = sum_a P_{x,a} P_{y,a} built from the canonical tuple pair with
// x_i = 0 for all i and y_i = 0 exactly when i is in `subset`.  For
// magic-unitary representations Pi_S is a projection, commutes with every
// P_{z,a}, and is additive in disjoint subsets.
Mat pi_projection(const PvmRepresentation& rep,
                  const std::vector<int>& subset);

// The four-dimensional oracular representation of the morphism algebra for
// (magic square, LIN) built from the familiar two-qubit observable grid
//
//   I(x)Z  Z(x)I  Z(x)Z
//   X(x)I  I(x)X  X(x)X
//   X(x)Z  Z(x)X  Y(x)Y
//
// with P_{a,b} = (I + (-1)^b O_a) / 2.  Every defining product vanishes and
// tuple-mates commute, so check_representation is clean at 1e-9.
PvmRepresentation magic_square_two_qubit_rep();

}  // namespace qhom
