#include "qhom/todd_coxeter.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "qhom/util.hpp"

namespace qhom {

namespace {

constexpr std::int32_t kUndef = -1;

struct LimitExceeded {};

}  // namespace

// Relator-scanning enumeration with immediate coincidence handling. The
// table keeps mirrored entries (row a, column x) = b iff (row b, x^-1) = a;
// coincidences are resolved through a union-find over cosets whose queue is
// drained before any scan continues.
class Enumerator {
 public:
  Enumerator(const GroupPresentation& g, const std::vector<Word>& subgroup,
             const TcOptions& options)
      : ngens_(static_cast<int>(g.generators.size())),
        ncols_(2 * ngens_),
        max_cosets_(options.max_cosets) {
    auto check = [&](const Word& w) {
      for (int l : w)
        if (l == 0 || std::abs(l) > ngens_)
          throw InputError("enumeration: word letter outside the generator range");
    };
    for (const Word& w : g.relators) check(w);
    for (const Word& w : subgroup) check(w);
    relators_.reserve(g.relators.size());
    for (const Word& w : g.relators) relators_.push_back(columns(w));
    for (const Word& w : subgroup) subgroup_.push_back(columns(w));
  }

  CosetTable run() {
    CosetTable out;
    out.ngens_ = ngens_;
    new_row();
    try {
      for (const auto& w : subgroup_) scan_and_fill(0, w);  // coset 0 never dies
      std::uint32_t alpha = 0;
      while (alpha < rows()) {
        if (alive(alpha)) {
          bool died = false;
          for (const auto& r : relators_) {
            scan_and_fill(alpha, r);
            if (!alive(alpha)) { died = true; break; }
          }
          if (!died)
            for (int c = 0; c < ncols_; ++c)
              if (at(alpha, c) == kUndef) define(alpha, c);
        }
        ++alpha;
        if (dead_ > live_ && dead_ > 4096) alpha = compact(alpha);
      }
    } catch (const LimitExceeded&) {
      out.status_ = TcStatus::exceeded_limit;
      out.rows_ = live_;
      out.total_defined_ = total_defined_;
      return out;
    }
    compact(0);
    standardize();
    out.status_ = TcStatus::complete;
    out.rows_ = rows();
    out.total_defined_ = total_defined_;
    out.table_ = std::move(table_);
    return out;
  }

 private:
  using ColWord = std::vector<int>;  // column indices

  ColWord columns(const Word& w) const {
    ColWord out;
    out.reserve(w.size());
    for (int l : w) out.push_back(l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1);
    return out;
  }

  static int inv(int col) { return col ^ 1; }

  std::uint32_t rows() const { return static_cast<std::uint32_t>(p_.size()); }
  bool alive(std::uint32_t k) const { return p_[k] == k; }

  std::int32_t& at(std::uint32_t row, int col) { return table_[row * ncols_ + col]; }
  std::int32_t at(std::uint32_t row, int col) const { return table_[row * ncols_ + col]; }

  std::uint32_t new_row() {
    if (live_ >= max_cosets_) throw LimitExceeded{};
    std::uint32_t k = rows();
    p_.push_back(k);
    table_.insert(table_.end(), ncols_, kUndef);
    ++live_;
    ++total_defined_;
    return k;
  }

  std::uint32_t define(std::uint32_t alpha, int col) {
    std::uint32_t delta = new_row();
    at(alpha, col) = static_cast<std::int32_t>(delta);
    at(delta, inv(col)) = static_cast<std::int32_t>(alpha);
    return delta;
  }

  std::uint32_t rep(std::uint32_t k) {
    std::uint32_t root = k;
    while (p_[root] != root) root = p_[root];
    while (p_[k] != root) {
      std::uint32_t next = p_[k];
      p_[k] = root;
      k = next;
    }
    return root;
  }

  void merge(std::uint32_t a, std::uint32_t b) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    p_[b] = a;
    --live_;
    ++dead_;
    queue_.push_back(b);
  }

  void coincidence(std::uint32_t a, std::uint32_t b) {
    merge(a, b);
    while (!queue_.empty()) {
      std::uint32_t gamma = queue_.front();
      queue_.pop_front();
      for (int c = 0; c < ncols_; ++c) {
        std::int32_t delta = at(gamma, c);
        if (delta == kUndef) continue;
        at(static_cast<std::uint32_t>(delta), inv(c)) = kUndef;
        std::uint32_t mu = rep(gamma);
        std::uint32_t nu = rep(static_cast<std::uint32_t>(delta));
        if (at(mu, c) != kUndef) {
          merge(nu, static_cast<std::uint32_t>(at(mu, c)));
        } else if (at(nu, inv(c)) != kUndef) {
          merge(mu, static_cast<std::uint32_t>(at(nu, inv(c))));
        } else {
          at(mu, c) = static_cast<std::int32_t>(nu);
          at(nu, inv(c)) = static_cast<std::int32_t>(mu);
        }
      }
    }
  }

  void scan_and_fill(std::uint32_t alpha, const ColWord& w) {
    int i = 0, j = static_cast<int>(w.size()) - 1;
    std::uint32_t f = alpha, b = alpha;
    for (;;) {
      while (i <= j && at(f, w[i]) != kUndef) f = static_cast<std::uint32_t>(at(f, w[i++]));
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && at(b, inv(w[j])) != kUndef)
        b = static_cast<std::uint32_t>(at(b, inv(w[j--])));
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (j == i) {
        at(f, w[i]) = static_cast<std::int32_t>(b);
        at(b, inv(w[i])) = static_cast<std::int32_t>(f);
        return;
      }
      define(f, w[i]);
    }
  }

  // Drops dead rows, renumbering the survivors in order; returns the new
  // index to resume from (the count of live rows before the cursor).
  std::uint32_t compact(std::uint32_t cursor) {
    std::vector<std::int32_t> old2new(rows(), kUndef);
    std::uint32_t next = 0, resumed = 0;
    for (std::uint32_t k = 0; k < rows(); ++k) {
      if (k == cursor) resumed = next;
      if (alive(k)) old2new[k] = static_cast<std::int32_t>(next++);
    }
    if (cursor >= rows()) resumed = next;
    std::vector<std::int32_t> packed(static_cast<std::size_t>(next) * ncols_, kUndef);
    for (std::uint32_t k = 0; k < rows(); ++k) {
      if (old2new[k] == kUndef) continue;
      for (int c = 0; c < ncols_; ++c) {
        std::int32_t t = at(k, c);
        packed[static_cast<std::size_t>(old2new[k]) * ncols_ + c] =
            t == kUndef ? kUndef : old2new[static_cast<std::uint32_t>(t)];
      }
    }
    table_ = std::move(packed);
    p_.resize(next);
    for (std::uint32_t k = 0; k < next; ++k) p_[k] = k;
    dead_ = 0;
    return resumed;
  }

  // Renumbers cosets in breadth-first order from coset 0 so equal subgroup
  // data always yields the identical table.
  void standardize() {
    if (ncols_ == 0) return;
    std::vector<std::int32_t> order(rows(), kUndef);
    std::vector<std::uint32_t> bfs = {0};
    order[0] = 0;
    std::int32_t next = 1;
    for (std::size_t qi = 0; qi < bfs.size(); ++qi) {
      std::uint32_t k = bfs[qi];
      for (int c = 0; c < ncols_; ++c) {
        std::int32_t t = at(k, c);
        if (t != kUndef && order[static_cast<std::uint32_t>(t)] == kUndef) {
          order[static_cast<std::uint32_t>(t)] = next++;
          bfs.push_back(static_cast<std::uint32_t>(t));
        }
      }
    }
    std::vector<std::int32_t> out(table_.size(), kUndef);
    for (std::uint32_t k = 0; k < rows(); ++k)
      for (int c = 0; c < ncols_; ++c) {
        std::int32_t t = at(k, c);
        out[static_cast<std::size_t>(order[k]) * ncols_ + c] =
            t == kUndef ? kUndef : order[static_cast<std::uint32_t>(t)];
      }
    table_ = std::move(out);
  }

  int ngens_;
  int ncols_;
  std::uint64_t max_cosets_;
  std::vector<ColWord> relators_;
  std::vector<ColWord> subgroup_;
  std::vector<std::int32_t> table_;
  std::vector<std::uint32_t> p_;
  std::deque<std::uint32_t> queue_;
  std::uint64_t live_ = 0;
  std::uint64_t dead_ = 0;
  std::uint64_t total_defined_ = 0;
};

std::uint32_t CosetTable::step(std::uint32_t coset, int letter) const {
  if (status_ != TcStatus::complete)
    throw InputError("coset table: incomplete enumeration has no action");
  if (letter == 0 || std::abs(letter) > ngens_)
    throw InputError("coset table: letter outside the generator range");
  if (coset >= rows_) throw InputError("coset table: coset out of range");
  int col = letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1;
  return static_cast<std::uint32_t>(table_[coset * 2 * ngens_ + col]);
}

std::uint32_t CosetTable::trace(std::uint32_t coset, const Word& w) const {
  for (int l : w) coset = step(coset, l);
  return coset;
}

CosetTable todd_coxeter(const GroupPresentation& g, const std::vector<Word>& subgroup,
                        const TcOptions& options) {
  if (options.max_cosets == 0) throw InputError("enumeration: max cosets must be positive");
  if (options.max_cosets > static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max()))
    throw InputError("enumeration: max cosets exceeds the table index range");
  return Enumerator(g, subgroup, options).run();
}

std::optional<std::uint64_t> group_order(const GroupPresentation& g, const TcOptions& options) {
  CosetTable t = todd_coxeter(g, {}, options);
  if (t.status() != TcStatus::complete) return std::nullopt;
  return t.live_cosets();
}

Triviality word_is_trivial(const GroupPresentation& g, const Word& w, const TcOptions& options) {
  CosetTable t = todd_coxeter(g, {}, options);
  if (t.status() != TcStatus::complete) return Triviality::inconclusive;
  return t.trace(0, w) == 0 ? Triviality::yes : Triviality::no;
}

}  // namespace qhom
