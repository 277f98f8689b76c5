#include "qhom/homsearch.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "qhom/util.hpp"

namespace qhom {
namespace {

// How an implicit all-distinct-pairs source relation is enforced: not at
// all, as plain injectivity (target side implicit too), or by membership of
// every ordered pair of images in an explicit target relation.
enum class PairMode { none, injective, explicit_pairs };

struct Instance {
  // cap on tuples pulled out of a lazy relation for the scan lists
  static constexpr std::uint64_t kMaterializeCap = 10000000;
  // partial-tuple extendability scans iterate the whole target list, so they
  // only pay for themselves on small relations
  static constexpr std::uint64_t kPartialScanCap = 4096;

  Elem na = 0, nb = 0;
  StructurePtr target;
  struct Block {
    std::vector<Tuple> src;
    std::vector<Tuple> tgt;     // scan list for partial tuples; may be absent
    bool tgt_scan = false;      // tgt is populated
    bool tgt_distinct = false;  // target side is the implicit inequality
    int tgt_sym = -1;
  };
  std::vector<Block> blocks;
  // (block, tuple index) pairs touching each source element
  std::vector<std::vector<std::pair<int, int>>> touching;
  PairMode pair_mode = PairMode::none;
  Relation pair_rel;
  // per-element image candidates narrowed by unary source relations; an
  // element stays unconstrained (full target range) until one names it
  std::vector<char> constrained;
  std::vector<std::vector<Elem>> cand;
  // assignment order: order[d] is the element assigned at depth d and
  // rank[e] its depth; id order unless the caller allows reordering
  std::vector<Elem> order;
  std::vector<Elem> rank;

  Instance(const StructurePtr& a, const StructurePtr& b, bool reorder) {
    if (!a || !b) throw InputError("search: null structure");
    na = a->domain_size();
    nb = b->domain_size();
    target = b;
    touching.resize(na);
    constrained.assign(na, 0);
    cand.resize(na);
    for (std::size_t s = 0; s < a->signature().size(); ++s) {
      if (a->tuple_count(static_cast<int>(s)) == 0) continue;
      const auto& sym = a->signature()[s];
      int bs = b->symbol_index(sym.name);
      if (bs < 0 || b->symbol(bs).arity != sym.arity)
        throw InputError("search: target lacks symbol " + sym.name);
      if (static_cast<int>(s) == a->distinct_symbol()) {
        if (bs == b->distinct_symbol()) {
          pair_mode = PairMode::injective;
        } else {
          pair_mode = PairMode::explicit_pairs;
          pair_rel = Relation(b->materialized_tuples(bs, kMaterializeCap));
        }
        continue;
      }
      if (sym.arity == 1 && bs != b->distinct_symbol() &&
          b->tuple_count(bs) <= kMaterializeCap) {
        // fold unary constraints into the candidate lists instead of checking
        // them tuple by tuple during the descent
        std::vector<char> member(nb, 0);
        for (const Tuple& t : b->materialized_tuples(bs, kMaterializeCap)) member[t[0]] = 1;
        for (const Tuple& t : a->materialized_tuples(static_cast<int>(s), kMaterializeCap)) {
          Elem v = t[0];
          if (!constrained[v]) {
            constrained[v] = 1;
            for (Elem w = 0; w < nb; ++w)
              if (member[w]) cand[v].push_back(w);
          } else {
            std::erase_if(cand[v], [&](Elem w) { return !member[w]; });
          }
        }
        continue;
      }
      Block blk;
      blk.tgt_sym = bs;
      blk.src = a->materialized_tuples(static_cast<int>(s), kMaterializeCap);
      if (bs == b->distinct_symbol()) {
        blk.tgt_distinct = true;
      } else if (b->tuple_count(bs) <= kPartialScanCap) {
        blk.tgt = b->materialized_tuples(bs, kPartialScanCap);
        blk.tgt_scan = true;
      }
      int bi = static_cast<int>(blocks.size());
      for (std::size_t t = 0; t < blk.src.size(); ++t) {
        Tuple uniq = blk.src[t];
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (Elem e : uniq) touching[e].push_back({bi, static_cast<int>(t)});
      }
      blocks.push_back(std::move(blk));
    }
    if (reorder) {
      closure_order();
    } else {
      order.resize(na);
      rank.resize(na);
      for (Elem e = 0; e < na; ++e) order[e] = rank[e] = e;
    }
  }

  // Greedy most-constrained-first order: always assign next an element that
  // completes as many source tuples as possible, so a wrong image dies on a
  // full-tuple check immediately instead of deep in the tree.  Ties go to
  // the element touching the most nearly-complete tuples, then to id order.
  void closure_order() {
    order.resize(na);
    rank.resize(na);
    std::uint64_t joint = 0;
    for (const Block& blk : blocks)
      for (const Tuple& t : blk.src) joint += t.size() > 1;
    if (joint == 0) {
      for (Elem e = 0; e < na; ++e) order[e] = rank[e] = e;
      return;
    }

    // distinct-element counts per (block, tuple), kept in touching's shape
    std::vector<std::vector<int>> open(blocks.size());
    for (std::size_t bi = 0; bi < blocks.size(); ++bi)
      open[bi].assign(blocks[bi].src.size(), 0);
    for (Elem e = 0; e < na; ++e)
      for (auto [bi, ti] : touching[e]) ++open[bi][ti];

    std::vector<std::int64_t> closing(na, 0), near(na, 0);
    for (Elem e = 0; e < na; ++e)
      for (auto [bi, ti] : touching[e]) {
        if (open[bi][ti] == 1) ++closing[e];
        if (open[bi][ti] == 2) ++near[e];
      }

    std::vector<char> placed(na, 0);
    for (Elem d = 0; d < na; ++d) {
      Elem best = -1;
      for (Elem e = 0; e < na; ++e) {
        if (placed[e]) continue;
        if (best < 0 || closing[e] > closing[best] ||
            (closing[e] == closing[best] && near[e] > near[best]))
          best = e;
      }
      placed[best] = 1;
      order[d] = best;
      rank[best] = d;
      for (auto [bi, ti] : touching[best]) {
        int left = --open[bi][ti];
        if (left == 0 || left > 2) continue;
        const Tuple& t = blocks[bi].src[ti];
        for (std::size_t i = 0; i < t.size(); ++i) {
          Elem u = t[i];
          bool repeat = false;
          for (std::size_t k = 0; k < i && !repeat; ++k) repeat = t[k] == u;
          if (repeat || placed[u]) continue;
          if (left == 1) {
            ++closing[u];
            --near[u];
          } else {
            ++near[u];
          }
        }
      }
    }
  }

  // True while the tuple, with every element assigned by depth mapped via
  // img, can still reach some target tuple.
  bool extendable(const Block& blk, const Tuple& src, Elem depth,
                  const std::vector<Elem>& img) const {
    bool full = true;
    for (Elem e : src)
      if (rank[e] > depth) { full = false; break; }
    if (blk.tgt_distinct) return full ? img[src[0]] != img[src[1]] : nb >= 2;
    if (full) {
      Tuple mapped(src.size());
      for (std::size_t i = 0; i < src.size(); ++i) mapped[i] = img[src[i]];
      return target->contains(blk.tgt_sym, mapped);
    }
    if (!blk.tgt_scan) return true;  // no scan list, prune on full tuples only
    for (const Tuple& cand : blk.tgt) {
      bool ok = true;
      for (std::size_t i = 0; i < src.size(); ++i)
        if (rank[src[i]] <= depth && cand[i] != img[src[i]]) { ok = false; break; }
      if (ok) return true;
    }
    return false;
  }
};

class Dfs {
 public:
  Dfs(const Instance& inst, std::uint64_t budget, bool store, std::uint64_t limit)
      : inst_(inst), budget_(budget), store_(store), limit_(limit), img_(inst.na, -1) {
    if (inst_.pair_mode == PairMode::injective) used_.assign(inst_.nb, 0);
  }

  // Runs the search with the first assigned element pinned to first_value
  // (or unpinned when first_value < 0).
  SearchResult run(Elem first_value) {
    SearchResult out;
    if (first_value >= 0) {
      Elem v = inst_.order[0];
      if (inst_.constrained[v] &&
          !std::binary_search(inst_.cand[v].begin(), inst_.cand[v].end(), first_value))
        return out;
      img_[v] = first_value;
      ++out.nodes;
      if (consistent(0)) {
        if (!used_.empty()) used_[first_value] = 1;
        descend(1, out);
        if (!used_.empty()) used_[first_value] = 0;
      }
      img_[v] = -1;
    } else {
      descend(0, out);
    }
    if (exhausted_) out.status = SearchStatus::budget_exhausted;
    return out;
  }

 private:
  bool consistent(Elem depth) const {
    Elem v = inst_.order[depth];
    switch (inst_.pair_mode) {
      case PairMode::none:
        break;
      case PairMode::injective:
        if (used_[img_[v]]) return false;
        break;
      case PairMode::explicit_pairs:
        for (Elem d = 0; d < depth; ++d) {
          Elem u = inst_.order[d];
          if (!inst_.pair_rel.contains({img_[u], img_[v]}) ||
              !inst_.pair_rel.contains({img_[v], img_[u]}))
            return false;
        }
        break;
    }
    for (auto [bi, ti] : inst_.touching[v])
      if (!inst_.extendable(inst_.blocks[bi], inst_.blocks[bi].src[ti], depth, img_))
        return false;
    return true;
  }

  void descend(Elem depth, SearchResult& out) {
    if (exhausted_ || satisfied_) return;
    if (depth == inst_.na) {
      ++out.count;
      if (store_) out.maps.push_back(img_);
      if (limit_ && out.count >= limit_) satisfied_ = true;
      return;
    }
    Elem v = inst_.order[depth];
    const std::vector<Elem>* list = inst_.constrained[v] ? &inst_.cand[v] : nullptr;
    Elem span = list ? static_cast<Elem>(list->size()) : inst_.nb;
    for (Elem i = 0; i < span; ++i) {
      Elem w = list ? (*list)[i] : i;
      if (out.nodes >= budget_) { exhausted_ = true; return; }
      ++out.nodes;
      img_[v] = w;
      if (consistent(depth)) {
        if (!used_.empty()) used_[w] = 1;
        descend(depth + 1, out);
        if (!used_.empty()) used_[w] = 0;
      }
      if (exhausted_ || satisfied_) return;
    }
    img_[v] = -1;
  }

  const Instance& inst_;
  std::uint64_t budget_;
  bool store_;
  std::uint64_t limit_;
  std::vector<Elem> img_;
  std::vector<char> used_;  // sized nb only in injective mode
  bool exhausted_ = false;
  bool satisfied_ = false;  // the requested number of maps was found
};

}  // namespace

SearchResult enumerate_homomorphisms(const StructurePtr& a, const StructurePtr& b,
                                     const SearchOptions& options) {
  if (options.node_budget == 0) throw InputError("search: node budget must be positive");
  // with a result limit the id-order guarantee decides which maps are kept,
  // so the closure reordering only kicks in for unlimited enumeration
  Instance inst(a, b, options.max_results == 0);
  int threads = std::max(1, options.threads);
  threads = std::min<int>(threads, static_cast<int>(inst.nb));
  if (inst.na == 0) threads = 1;  // nothing to split on

  if (threads == 1) {
    SearchResult out =
        Dfs(inst, options.node_budget, options.store_maps, options.max_results)
            .run(-1);
    std::sort(out.maps.begin(), out.maps.end());
    return out;
  }

  // split on the image of element 0; every split runs to completion so the
  // merged result does not depend on thread scheduling
  std::vector<SearchResult> parts(inst.nb);
  std::uint64_t per = options.node_budget / static_cast<std::uint64_t>(inst.nb) + 1;
  std::vector<std::thread> pool;
  std::atomic<int> cursor{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int w = cursor.fetch_add(1);
        if (w >= static_cast<int>(inst.nb)) return;
        parts[w] = Dfs(inst, per, options.store_maps, options.max_results).run(w);
      }
    });
  for (auto& th : pool) th.join();

  SearchResult out;
  for (const SearchResult& part : parts) {
    out.count += part.count;
    out.nodes += part.nodes;
    if (part.status == SearchStatus::budget_exhausted) out.status = SearchStatus::budget_exhausted;
    out.maps.insert(out.maps.end(), part.maps.begin(), part.maps.end());
  }
  std::sort(out.maps.begin(), out.maps.end());
  if (options.max_results && out.count > options.max_results) {
    // each split honors the limit on its own; trim the merge the same way
    out.count = options.max_results;
    if (options.store_maps) out.maps.resize(options.max_results);
  }
  return out;
}

SearchResult enumerate_polymorphisms(const StructurePtr& base, int exponent,
                                     const SearchOptions& options) {
  return enumerate_homomorphisms(Structure::power(base, exponent), base, options);
}

ProjectionDecomposition decompose_projection(const StructurePtr& power,
                                             const std::vector<Elem>& map) {
  if (!power || !power->is_power()) throw InputError("decompose: structure is not a power");
  if (static_cast<Elem>(map.size()) != power->domain_size())
    throw InputError("decompose: map size does not match the domain");
  Elem nb = power->power_base()->domain_size();
  int k = power->power_exponent();

  for (int i = 0; i < k; ++i) {
    std::vector<Elem> sigma(nb, -1);
    bool ok = true;
    for (Elem e = 0; e < power->domain_size() && ok; ++e) {
      Elem key = power->decode(e)[i];
      if (sigma[key] < 0)
        sigma[key] = map[e];
      else if (sigma[key] != map[e])
        ok = false;
    }
    if (!ok) continue;
    std::vector<bool> hit(nb, false);
    for (Elem v : sigma) {
      if (v < 0 || v >= nb || hit[v]) { ok = false; break; }
      hit[v] = true;
    }
    if (ok) return {true, i, std::move(sigma)};
  }
  return {};
}

}  // namespace qhom
