#include "qhom/repalg.hpp"

#include <cmath>
#include <sstream>

#include "qhom/util.hpp"

namespace qhom {
namespace {

using Complex = std::complex<double>;

Mat kron(const Mat& x, const Mat& y) {
  Mat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      out.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
    }
  }
  return out;
}

std::string tuple_str(const Tuple& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) os << ',';
    os << t[i];
  }
  return os.str();
}

struct Recorder {
  ViolationReport& report;
  double tol;

  void add(double residual, const std::string& description) {
    ++report.checks;
    if (residual > report.max_residual) report.max_residual = residual;
    if (residual > tol) report.violations.push_back({description, residual});
  }
};

// Enumerates the tuples of a populated source relation, either exhaustively
// or (for lazy relations past the cap) by seeded sampling of coordinatewise
// products of base tuples.
template <typename Fn>
void for_each_source_tuple(const Structure& source, int sym,
                           const CheckOptions& options, bool* sampled,
                           Fn&& fn) {
  const uint64_t count = source.tuple_count(sym);
  if (!source.is_lazy() || count <= options.materialize_cap) {
    source.for_each_tuple(sym, [&](const Tuple& t) {
      fn(t);
      return true;
    });
    return;
  }
  if (!source.is_power()) {
    throw InputError("cannot sample tuples of a non-power lazy relation");
  }
  *sampled = true;
  const StructurePtr base = source.power_base();
  const std::vector<Tuple> pool =
      base->materialized_tuples(sym, options.materialize_cap);
  if (pool.empty()) return;
  const int k = source.power_exponent();
  const size_t arity = pool.front().size();
  SplitMix64 rng(options.seed ^ fnv1a64(source.symbol(sym).name));
  for (uint64_t s = 0; s < options.samples; ++s) {
    std::vector<const Tuple*> picks(k);
    for (int i = 0; i < k; ++i) picks[i] = &pool[rng.below(pool.size())];
    Tuple t(arity);
    for (size_t pos = 0; pos < arity; ++pos) {
      Tuple coords(k);
      for (int i = 0; i < k; ++i) coords[i] = (*picks[i])[pos];
      t[pos] = source.encode(coords);
    }
    fn(t);
  }
}

// Walks all target tuples of length `arity` that do NOT satisfy the target
// relation `sym`.
template <typename Fn>
void for_each_nonsatisfying(const Structure& target, int sym, size_t arity,
                            Fn&& fn) {
  const Elem nb = target.domain_size();
  uint64_t total = 1;
  for (size_t i = 0; i < arity; ++i) {
    if (total > 1000000 / static_cast<uint64_t>(nb)) {
      throw InputError("target tuple space too large to enumerate");
    }
    total *= static_cast<uint64_t>(nb);
  }
  Tuple b(arity, 0);
  for (uint64_t e = 0; e < total; ++e) {
    uint64_t rest = e;
    for (size_t i = 0; i < arity; ++i) {
      b[i] = static_cast<Elem>(rest % static_cast<uint64_t>(nb));
      rest /= static_cast<uint64_t>(nb);
    }
    if (!target.contains(sym, b)) fn(b);
  }
}

Mat two_qubit(const Mat& first, const Mat& second) {
  return kron(first, second);
}

}  // namespace

const Mat& PvmRepresentation::at(Elem a, Elem b) const {
  auto it = matrices.find({a, b});
  if (it == matrices.end()) {
    throw InputError("representation has no matrix for (" +
                     std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  return it->second;
}

ViolationReport check_representation(const PvmRepresentation& rep,
                                     const CheckOptions& options) {
  if (!rep.source || !rep.target) {
    throw InputError("representation is missing source or target");
  }
  if (rep.dimension <= 0) throw InputError("representation dimension must be positive");
  const Elem na = rep.source->domain_size();
  const Elem nb = rep.target->domain_size();
  for (Elem a = 0; a < na; ++a) {
    for (Elem b = 0; b < nb; ++b) {
      const Mat& m = rep.at(a, b);
      if (m.rows() != rep.dimension || m.cols() != rep.dimension) {
        throw InputError("matrix for (" + std::to_string(a) + ", " +
                         std::to_string(b) + ") has the wrong shape");
      }
    }
  }

  ViolationReport report;
  Recorder rec{report, options.tol};
  const Mat identity = Mat::Identity(rep.dimension, rep.dimension);

  for (Elem a = 0; a < na; ++a) {
    Mat row_sum = Mat::Zero(rep.dimension, rep.dimension);
    for (Elem b = 0; b < nb; ++b) {
      const Mat& m = rep.at(a, b);
      rec.add((m - m.adjoint()).norm(),
              "P(" + std::to_string(a) + "," + std::to_string(b) +
                  ") is not hermitian");
      rec.add((m * m - m).norm(),
              "P(" + std::to_string(a) + "," + std::to_string(b) +
                  ") is not idempotent");
      row_sum += m;
    }
    rec.add((row_sum - identity).norm(),
            "PVM for source element " + std::to_string(a) +
                " does not sum to the identity");
  }

  for (int s = 0; s < static_cast<int>(rep.source->signature().size()); ++s) {
    if (rep.source->tuple_count(s) == 0) continue;
    const RelationSymbol& sym = rep.source->symbol(s);
    const int ts = rep.target->symbol_index(sym.name);
    if (ts < 0) {
      throw InputError("target has no relation named " + sym.name);
    }
    for_each_source_tuple(
        *rep.source, s, options, &report.sampled, [&](const Tuple& a) {
          for_each_nonsatisfying(*rep.target, ts, a.size(), [&](const Tuple& b) {
            Mat prod = identity;
            for (size_t i = 0; i < a.size(); ++i) prod *= rep.at(a[i], b[i]);
            rec.add(prod.norm(), "product over " + sym.name + "(" +
                                     tuple_str(a) + ") -> (" + tuple_str(b) +
                                     ") does not vanish");
          });
          if (rep.oracular) {
            for (size_t i = 0; i < a.size(); ++i) {
              for (size_t j = i + 1; j < a.size(); ++j) {
                for (Elem b1 = 0; b1 < nb; ++b1) {
                  for (Elem b2 = 0; b2 < nb; ++b2) {
                    const Mat& x = rep.at(a[i], b1);
                    const Mat& y = rep.at(a[j], b2);
                    rec.add((x * y - y * x).norm(),
                            "tuple-mates P(" + std::to_string(a[i]) + "," +
                                std::to_string(b1) + ") and P(" +
                                std::to_string(a[j]) + "," +
                                std::to_string(b2) + ") do not commute");
                  }
                }
              }
            }
          }
        });
  }
  return report;
}

PvmRepresentation compose(const PvmRepresentation& rep1,
                          const PvmRepresentation& rep2) {
  if (!rep1.target || !rep2.source ||
      rep1.target->domain_size() != rep2.source->domain_size()) {
    throw InputError("composition requires rep1's target to match rep2's source");
  }
  PvmRepresentation out;
  out.source = rep1.source;
  out.target = rep2.target;
  out.dimension = rep1.dimension * rep2.dimension;
  out.oracular = rep1.oracular && rep2.oracular;
  const Elem na = rep1.source->domain_size();
  const Elem nmid = rep1.target->domain_size();
  const Elem nc = rep2.target->domain_size();
  for (Elem a = 0; a < na; ++a) {
    for (Elem c = 0; c < nc; ++c) {
      Mat sum = Mat::Zero(out.dimension, out.dimension);
      for (Elem b = 0; b < nmid; ++b) {
        sum += kron(rep1.at(a, b), rep2.at(b, c));
      }
      out.matrices[{a, c}] = std::move(sum);
    }
  }
  return out;
}

PvmRepresentation character_of_hom(const StructurePtr& source,
                                   const StructurePtr& target,
                                   const std::vector<Elem>& image) {
  if (!source || !target) throw InputError("character requires both structures");
  const Elem na = source->domain_size();
  const Elem nb = target->domain_size();
  if (static_cast<Elem>(image.size()) != na) {
    throw InputError("image must assign every source element");
  }
  for (Elem v : image) {
    if (v < 0 || v >= nb) throw InputError("image value out of range");
  }
  for (int s = 0; s < static_cast<int>(source->signature().size()); ++s) {
    if (source->tuple_count(s) == 0) continue;
    const RelationSymbol& sym = source->symbol(s);
    const int ts = target->symbol_index(sym.name);
    if (ts < 0) throw InputError("target has no relation named " + sym.name);
    if (source->tuple_count(s) > 1000000) {
      throw InputError("source relation too large to verify the map");
    }
    source->for_each_tuple(s, [&](const Tuple& t) {
      Tuple mapped(t.size());
      for (size_t i = 0; i < t.size(); ++i) mapped[i] = image[t[i]];
      if (!target->contains(ts, mapped)) {
        throw InputError("map is not a homomorphism: it breaks " + sym.name +
                         "(" + tuple_str(t) + ")");
      }
      return true;
    });
  }
  PvmRepresentation out;
  out.source = source;
  out.target = target;
  out.dimension = 1;
  for (Elem a = 0; a < na; ++a) {
    for (Elem b = 0; b < nb; ++b) {
      Mat m(1, 1);
      m(0, 0) = (image[a] == b) ? Complex(1, 0) : Complex(0, 0);
      out.matrices[{a, b}] = std::move(m);
    }
  }
  return out;
}

const Mat& MagicUnitary::at(int i, int j) const {
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw InputError("magic unitary index out of range");
  }
  return entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
}

ViolationReport check_magic_unitary(const MagicUnitary& u, double tol) {
  if (u.n <= 0 || u.d <= 0) throw InputError("magic unitary sizes must be positive");
  if (u.entries.size() != static_cast<size_t>(u.n)) {
    throw InputError("magic unitary has the wrong number of rows");
  }
  for (const auto& row : u.entries) {
    if (row.size() != static_cast<size_t>(u.n)) {
      throw InputError("magic unitary has a ragged row");
    }
    for (const Mat& m : row) {
      if (m.rows() != u.d || m.cols() != u.d) {
        throw InputError("magic unitary entry has the wrong shape");
      }
    }
  }
  ViolationReport report;
  Recorder rec{report, tol};
  const Mat identity = Mat::Identity(u.d, u.d);
  for (int i = 0; i < u.n; ++i) {
    for (int j = 0; j < u.n; ++j) {
      const Mat& m = u.at(i, j);
      rec.add((m - m.adjoint()).norm(), "entry (" + std::to_string(i) + "," +
                                            std::to_string(j) +
                                            ") is not hermitian");
      rec.add((m * m - m).norm(), "entry (" + std::to_string(i) + "," +
                                      std::to_string(j) +
                                      ") is not idempotent");
    }
  }
  for (int i = 0; i < u.n; ++i) {
    Mat row_sum = Mat::Zero(u.d, u.d);
    Mat col_sum = Mat::Zero(u.d, u.d);
    for (int j = 0; j < u.n; ++j) {
      row_sum += u.at(i, j);
      col_sum += u.at(j, i);
    }
    rec.add((row_sum - identity).norm(),
            "row " + std::to_string(i) + " does not sum to the identity");
    rec.add((col_sum - identity).norm(),
            "column " + std::to_string(i) + " does not sum to the identity");
  }
  return report;
}

MagicUnitary block_magic_unitary(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat p = Mat::Zero(2, 2);
  p(0, 0) = 1.0;
  Mat q(2, 2);
  q(0, 0) = c * c;
  q(0, 1) = c * s;
  q(1, 0) = c * s;
  q(1, 1) = s * s;
  const Mat identity = Mat::Identity(2, 2);
  const Mat zero = Mat::Zero(2, 2);
  MagicUnitary u;
  u.n = 4;
  u.d = 2;
  u.entries = {{p, identity - p, zero, zero},
               {identity - p, p, zero, zero},
               {zero, zero, q, identity - q},
               {zero, zero, identity - q, q}};
  return u;
}

PvmRepresentation magic_unitary_rep(const MagicUnitary& u, int coordinate,
                                    int arity, double tol) {
  ViolationReport check = check_magic_unitary(u, tol);
  if (!check.clean(tol)) {
    throw InputError("invalid magic unitary: max residual " +
                     std::to_string(check.max_residual));
  }
  if (arity < 1) throw InputError("arity must be at least 1");
  if (coordinate < 0 || coordinate >= arity) {
    throw InputError("coordinate out of range for the given arity");
  }
  const StructurePtr base = make_clique(u.n);
  const StructurePtr source = Structure::power(base, arity);
  uint64_t tuples = 1;
  for (int i = 0; i < arity; ++i) {
    if (tuples > 65536 / static_cast<uint64_t>(u.n)) {
      throw InputError("source domain too large to store the matrices");
    }
    tuples *= static_cast<uint64_t>(u.n);
  }
  PvmRepresentation rep;
  rep.source = source;
  rep.target = base;
  rep.dimension = u.d;
  for (uint64_t e = 0; e < tuples; ++e) {
    const Tuple x = source->decode(static_cast<Elem>(e));
    for (Elem a = 0; a < u.n; ++a) {
      rep.matrices[{static_cast<Elem>(e), a}] =
          u.at(static_cast<int>(x[static_cast<size_t>(coordinate)]),
               static_cast<int>(a));
    }
  }
  return rep;
}

Mat pi_projection(const PvmRepresentation& rep,
                  const std::vector<int>& subset) {
  if (!rep.source || !rep.source->is_power()) {
    throw InputError("pi projection needs a representation over a power");
  }
  const int k = rep.source->power_exponent();
  for (int i : subset) {
    if (i < 0 || i >= k) throw InputError("subset coordinate out of range");
  }
  Tuple x(static_cast<size_t>(k), 0);
  Tuple y(static_cast<size_t>(k), 1);
  for (int i : subset) y[static_cast<size_t>(i)] = 0;
  const Elem xe = rep.source->encode(x);
  const Elem ye = rep.source->encode(y);
  const Elem nb = rep.target->domain_size();
  Mat sum = Mat::Zero(rep.dimension, rep.dimension);
  for (Elem a = 0; a < nb; ++a) sum += rep.at(xe, a) * rep.at(ye, a);
  return sum;
}

PvmRepresentation magic_square_two_qubit_rep() {
  Mat identity = Mat::Identity(2, 2);
  Mat pauli_x = Mat::Zero(2, 2);
  pauli_x(0, 1) = 1.0;
  pauli_x(1, 0) = 1.0;
  Mat pauli_y = Mat::Zero(2, 2);
  pauli_y(0, 1) = Complex(0, -1);
  pauli_y(1, 0) = Complex(0, 1);
  Mat pauli_z = Mat::Zero(2, 2);
  pauli_z(0, 0) = 1.0;
  pauli_z(1, 1) = -1.0;

  const std::vector<Mat> grid = {
      two_qubit(identity, pauli_z), two_qubit(pauli_z, identity),
      two_qubit(pauli_z, pauli_z),  two_qubit(pauli_x, identity),
      two_qubit(identity, pauli_x), two_qubit(pauli_x, pauli_x),
      two_qubit(pauli_x, pauli_z),  two_qubit(pauli_z, pauli_x),
      two_qubit(pauli_y, pauli_y)};

  PvmRepresentation rep;
  rep.source = make_magic_square();
  rep.target = lin_for(*rep.source);
  rep.dimension = 4;
  rep.oracular = true;
  const Mat id4 = Mat::Identity(4, 4);
  for (Elem a = 0; a < 9; ++a) {
    for (Elem b = 0; b < 2; ++b) {
      const double sign = (b == 0) ? 1.0 : -1.0;
      rep.matrices[{a, b}] = (id4 + sign * grid[static_cast<size_t>(a)]) / 2.0;
    }
  }
  return rep;
}

}  // namespace qhom
