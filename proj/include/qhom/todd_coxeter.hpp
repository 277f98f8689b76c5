#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qhom/fpgroups.hpp"

namespace qhom {

enum class TcStatus { complete, exceeded_limit };

struct TcOptions {
  std::uint64_t max_cosets = 1000000;
};

// A closed, standardized coset table over some subgroup. Coset 0 is the
// subgroup itself; step/trace give the right action of generators on cosets
// and require a complete enumeration.
class CosetTable {
 public:
  TcStatus status() const { return status_; }
  std::uint64_t live_cosets() const { return rows_; }
  std::uint64_t total_defined() const { return total_defined_; }
  int generator_count() const { return ngens_; }

  std::uint32_t step(std::uint32_t coset, int letter) const;
  std::uint32_t trace(std::uint32_t coset, const Word& w) const;

 private:
  friend class Enumerator;
  TcStatus status_ = TcStatus::exceeded_limit;
  int ngens_ = 0;
  std::uint64_t rows_ = 0;
  std::uint64_t total_defined_ = 0;
  std::vector<std::int32_t> table_;  // rows_ * 2 * ngens_, column 2g / 2g+1
};

// Coset enumeration over the subgroup generated by the given words
// (relator-based scanning with immediate coincidence handling). On success
// live_cosets() is the index of the subgroup.
CosetTable todd_coxeter(const GroupPresentation& g, const std::vector<Word>& subgroup = {},
                        const TcOptions& options = {});

// Order of the presented group, or nullopt when enumeration hits the limit.
std::optional<std::uint64_t> group_order(const GroupPresentation& g,
                                         const TcOptions& options = {});

enum class Triviality { yes, no, inconclusive };

// Decides w = 1 by the action on the coset of the trivial subgroup;
// inconclusive when the enumeration exceeds its limit.
Triviality word_is_trivial(const GroupPresentation& g, const Word& w,
                           const TcOptions& options = {});

}  // namespace qhom
