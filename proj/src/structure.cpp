#include "qhom/structure.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <set>

namespace qhom {
namespace {

using i128 = __int128;

std::uint64_t checked_pow(std::uint64_t base, int exp, bool& overflow) {
  i128 v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= static_cast<i128>(base);
    if (v > static_cast<i128>(UINT64_MAX)) { overflow = true; return UINT64_MAX; }
  }
  overflow = false;
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::string lr_name(int rhs, int arity) {
  return "LR(" + std::to_string(rhs) + "," + std::to_string(arity) + ")";
}

bool parse_lr_name(const std::string& name, int& rhs, int& arity) {
  if (name.size() < 7 || name.rfind("LR(", 0) != 0 || name.back() != ')') return false;
  auto comma = name.find(',');
  if (comma == std::string::npos) return false;
  std::string b = name.substr(3, comma - 3);
  std::string n = name.substr(comma + 1, name.size() - comma - 2);
  if (b.empty() || n.empty()) return false;
  for (char c : b) if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  for (char c : n) if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  rhs = std::stoi(b);
  arity = std::stoi(n);
  return rhs == 0 || rhs == 1;
}

Relation::Relation(std::vector<Tuple> tuples) : tuples_(std::move(tuples)) {
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

bool Relation::contains(const Tuple& t) const {
  return std::binary_search(tuples_.begin(), tuples_.end(), t);
}

Structure::Structure(Elem domain_size, std::vector<RelationSymbol> signature,
                     std::map<std::string, std::vector<Tuple>> relations,
                     std::map<Elem, std::string> labels)
    : domain_size_(domain_size), signature_(std::move(signature)), labels_(std::move(labels)) {
  if (domain_size_ <= 0) throw InputError("structure: domain size must be positive");
  std::set<std::string> seen;
  for (const auto& s : signature_) {
    if (s.arity <= 0) throw InputError("structure: symbol " + s.name + " has nonpositive arity");
    if (!seen.insert(s.name).second)
      throw InputError("structure: duplicate symbol " + s.name);
  }
  relations_.resize(signature_.size());
  for (auto& [name, tuples] : relations) {
    int idx = symbol_index(name);
    if (idx < 0) throw InputError("structure: relation for unknown symbol " + name);
    for (const auto& t : tuples) validate_tuple(signature_[idx].arity, t);
    relations_[idx] = Relation(std::move(tuples));
  }
  for (const auto& [e, _] : labels_)
    if (e < 0 || e >= domain_size_) throw InputError("structure: label for out-of-range element");
}

void Structure::validate_tuple(int arity, const Tuple& t) const {
  if (static_cast<int>(t.size()) != arity)
    throw InputError("structure: tuple arity mismatch");
  for (Elem e : t)
    if (e < 0 || e >= domain_size_) throw InputError("structure: element id out of range");
}

int Structure::symbol_index(const std::string& name) const {
  for (std::size_t i = 0; i < signature_.size(); ++i)
    if (signature_[i].name == name) return static_cast<int>(i);
  return -1;
}

StructurePtr Structure::power(StructurePtr base, int exponent,
                              std::uint64_t materialize_threshold) {
  if (!base) throw InputError("power: null base");
  if (base->is_lazy()) throw InputError("power: base must be explicit");
  if (exponent < 1) throw InputError("power: exponent must be >= 1");
  bool dome_overflow = false;
  std::uint64_t dome = checked_pow(static_cast<std::uint64_t>(base->domain_size()),
                                   exponent, dome_overflow);
  if (dome_overflow || dome > static_cast<std::uint64_t>(INT64_MAX))
    throw InputError("power: domain too large to address");

  bool small = dome <= materialize_threshold;
  if (small) {
    for (std::size_t s = 0; s < base->signature().size(); ++s) {
      bool ovf = false;
      std::uint64_t cnt = checked_pow(base->tuple_count(static_cast<int>(s)), exponent, ovf);
      if (ovf || cnt > materialize_threshold) { small = false; break; }
    }
  }

  auto out = std::shared_ptr<Structure>(new Structure());
  out->domain_size_ = static_cast<Elem>(dome);
  out->signature_ = base->signature();
  out->power_base_ = base;
  out->power_exponent_ = exponent;
  if (!small) {
    out->lazy_ = true;
    return out;
  }
  out->relations_.resize(out->signature_.size());
  for (std::size_t s = 0; s < out->signature_.size(); ++s) {
    std::vector<Tuple> tuples;
    out->lazy_ = true;  // borrow the lazy iterator to materialize
    out->for_each_tuple(static_cast<int>(s), [&](const Tuple& t) {
      tuples.push_back(t);
      return true;
    });
    out->lazy_ = false;
    out->relations_[s] = Relation(std::move(tuples));
  }
  return out;
}

const StructurePtr& Structure::power_base() const {
  if (!is_power()) throw InputError("structure: not a power");
  return power_base_;
}

const StructurePtr& Structure::completion_base() const {
  if (!is_completion()) throw InputError("structure: not a completion");
  return completion_base_;
}

int Structure::power_exponent() const {
  if (!is_power()) throw InputError("structure: not a power");
  return power_exponent_;
}

std::uint64_t Structure::tuple_count(int sym) const {
  if (sym < 0 || sym >= static_cast<int>(signature_.size()))
    throw InputError("structure: bad symbol index");
  if (sym == distinct_symbol_)
    return static_cast<std::uint64_t>(domain_size_) *
           static_cast<std::uint64_t>(domain_size_ - 1);
  if (!lazy_) return relations_[sym].size();
  bool ovf = false;
  std::uint64_t cnt = checked_pow(power_base_->tuple_count(sym), power_exponent_, ovf);
  return ovf ? UINT64_MAX : cnt;
}

bool Structure::contains(int sym, const Tuple& t) const {
  if (sym < 0 || sym >= static_cast<int>(signature_.size()))
    throw InputError("structure: bad symbol index");
  validate_tuple(signature_[sym].arity, t);
  if (sym == distinct_symbol_) return t[0] != t[1];
  if (!lazy_) return relations_[sym].contains(t);
  // coordinatewise membership in the base
  int arity = signature_[sym].arity;
  std::vector<Tuple> coords(t.size());
  for (std::size_t p = 0; p < t.size(); ++p) coords[p] = decode(t[p]);
  Tuple proj(arity);
  for (int i = 0; i < power_exponent_; ++i) {
    for (int p = 0; p < arity; ++p) proj[p] = coords[p][i];
    if (!power_base_->contains(sym, proj)) return false;
  }
  return true;
}

void Structure::for_each_tuple(int sym, const std::function<bool(const Tuple&)>& fn) const {
  if (sym < 0 || sym >= static_cast<int>(signature_.size()))
    throw InputError("structure: bad symbol index");
  if (sym == distinct_symbol_) {
    Tuple t(2);
    for (Elem x = 0; x < domain_size_; ++x)
      for (Elem y = 0; y < domain_size_; ++y) {
        if (x == y) continue;
        t[0] = x;
        t[1] = y;
        if (!fn(t)) return;
      }
    return;
  }
  if (!lazy_) {
    for (const Tuple& t : relations_[sym].tuples())
      if (!fn(t)) return;
    return;
  }
  const auto& base_tuples = power_base_->explicit_relation(sym).tuples();
  if (base_tuples.empty()) return;
  int arity = signature_[sym].arity;
  int k = power_exponent_;
  // odometer over k base tuples, coordinate 0 fastest (matches the element coding)
  std::vector<std::size_t> pick(k, 0);
  Tuple out(arity), coords(k);
  for (;;) {
    for (int p = 0; p < arity; ++p) {
      for (int i = 0; i < k; ++i) coords[i] = base_tuples[pick[i]][p];
      out[p] = encode(coords);
    }
    if (!fn(out)) return;
    int i = 0;
    while (i < k && ++pick[i] == base_tuples.size()) pick[i++] = 0;
    if (i == k) return;
  }
}

std::vector<Tuple> Structure::materialized_tuples(int sym, std::uint64_t cap) const {
  if (tuple_count(sym) > cap)
    throw InputError("structure: relation " + signature_.at(sym).name +
                     " too large to materialize");
  std::vector<Tuple> out;
  out.reserve(tuple_count(sym));
  for_each_tuple(sym, [&](const Tuple& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

const Relation& Structure::explicit_relation(int sym) const {
  if (lazy_) throw InputError("structure: lazy relation has no explicit tuple set");
  if (sym < 0 || sym >= static_cast<int>(signature_.size()))
    throw InputError("structure: bad symbol index");
  if (sym == distinct_symbol_)
    throw InputError("structure: implicit relation has no explicit tuple set");
  return relations_[sym];
}

std::string Structure::label(Elem e) const {
  auto it = labels_.find(e);
  return it == labels_.end() ? std::to_string(e) : it->second;
}

Elem Structure::element_by_label(const std::string& label) const {
  for (const auto& [e, l] : labels_)
    if (l == label) return e;
  return -1;
}

bool Structure::is_linear() const {
  for (std::size_t s = 0; s < signature_.size(); ++s) {
    if (tuple_count(static_cast<int>(s)) == 0) continue;
    int rhs = 0, arity = 0;
    if (!parse_lr_name(signature_[s].name, rhs, arity)) return false;
    if (arity != signature_[s].arity) return false;
  }
  return true;
}

bool Structure::is_homogeneous() const {
  if (!is_linear()) return false;
  for (std::size_t s = 0; s < signature_.size(); ++s) {
    if (tuple_count(static_cast<int>(s)) == 0) continue;
    int rhs = 0, arity = 0;
    parse_lr_name(signature_[s].name, rhs, arity);
    if (rhs == 1) return false;
  }
  return true;
}

Tuple Structure::decode(Elem e) const {
  if (!is_power()) throw InputError("structure: decode on a non-power");
  Elem base = power_base_->domain_size();
  Tuple out(power_exponent_);
  for (int i = 0; i < power_exponent_; ++i) {
    out[i] = e % base;
    e /= base;
  }
  return out;
}

Elem Structure::encode(const Tuple& coords) const {
  if (!is_power()) throw InputError("structure: encode on a non-power");
  if (static_cast<int>(coords.size()) != power_exponent_)
    throw InputError("structure: encode arity mismatch");
  Elem base = power_base_->domain_size();
  Elem e = 0;
  for (int i = power_exponent_ - 1; i >= 0; --i) {
    if (coords[i] < 0 || coords[i] >= base) throw InputError("structure: encode coordinate out of range");
    e = e * base + coords[i];
  }
  return e;
}

StructurePtr make_clique(int n) {
  if (n < 1) throw InputError("clique: need at least one vertex");
  std::vector<Tuple> edges;
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      if (a != b) edges.push_back({a, b});
  return std::make_shared<Structure>(
      n, std::vector<RelationSymbol>{{"E", 2}},
      std::map<std::string, std::vector<Tuple>>{{"E", std::move(edges)}});
}

StructurePtr make_magic_square() {
  std::vector<Tuple> even = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}};
  std::vector<Tuple> odd = {{2, 5, 8}};
  std::map<Elem, std::string> labels;
  for (Elem e = 0; e < 9; ++e) labels[e] = std::to_string(e + 1);
  return std::make_shared<Structure>(
      9,
      std::vector<RelationSymbol>{{lr_name(0, 3), 3}, {lr_name(1, 3), 3}},
      std::map<std::string, std::vector<Tuple>>{{lr_name(0, 3), std::move(even)},
                                                {lr_name(1, 3), std::move(odd)}},
      std::move(labels));
}

namespace {

// An order-two even permutation of seven points: two disjoint transpositions,
// canonically keyed as (a<b, c<d, (a,b) < (c,d)).
struct PairInvolution {
  std::array<int, 4> key;  // a, b, c, d; 1-based points

  std::array<int, 8> as_perm() const {  // 1-based images
    std::array<int, 8> p{};
    for (int i = 1; i <= 7; ++i) p[i] = i;
    p[key[0]] = key[1]; p[key[1]] = key[0];
    p[key[2]] = key[3]; p[key[3]] = key[2];
    return p;
  }

  std::string cycles() const {
    return "(" + std::to_string(key[0]) + " " + std::to_string(key[1]) + ")(" +
           std::to_string(key[2]) + " " + std::to_string(key[3]) + ")";
  }
};

std::vector<PairInvolution> pair_involutions() {
  std::vector<PairInvolution> out;
  for (int a = 1; a <= 7; ++a)
    for (int b = a + 1; b <= 7; ++b)
      for (int c = 1; c <= 7; ++c)
        for (int d = c + 1; d <= 7; ++d) {
          if (std::array<int, 2>{a, b} >= std::array<int, 2>{c, d}) continue;
          if (c == a || c == b || d == a || d == b) continue;
          out.push_back(PairInvolution{{a, b, c, d}});
        }
  std::sort(out.begin(), out.end(),
            [](const PairInvolution& x, const PairInvolution& y) { return x.key < y.key; });
  return out;
}

}  // namespace

StructurePtr make_a7() {
  auto invs = pair_involutions();
  std::map<std::array<int, 8>, Elem> index_of;
  for (std::size_t i = 0; i < invs.size(); ++i) index_of[invs[i].as_perm()] = static_cast<Elem>(i);

  std::vector<Tuple> triples;
  for (std::size_t i = 0; i < invs.size(); ++i) {
    auto pi = invs[i].as_perm();
    for (std::size_t j = 0; j < invs.size(); ++j) {
      if (i == j) continue;
      auto pj = invs[j].as_perm();
      std::array<int, 8> prod{};
      for (int x = 1; x <= 7; ++x) prod[x] = pi[pj[x]];
      // the triple closes iff the product is again order two in the domain
      auto it = index_of.find(prod);
      if (it == index_of.end()) continue;
      // (prod)^-1 = prod for an involution, so (i, j, it) multiplies to one
      triples.push_back({static_cast<Elem>(i), static_cast<Elem>(j), it->second});
    }
  }

  std::map<Elem, std::string> labels;
  for (std::size_t i = 0; i < invs.size(); ++i) labels[static_cast<Elem>(i)] = invs[i].cycles();
  return std::make_shared<Structure>(
      static_cast<Elem>(invs.size()),
      std::vector<RelationSymbol>{{lr_name(0, 3), 3}},
      std::map<std::string, std::vector<Tuple>>{{lr_name(0, 3), std::move(triples)}},
      std::move(labels));
}

std::pair<Elem, Elem> a7_distinguished() {
  auto a7 = make_a7();
  Elem a1 = a7->element_by_label("(1 2)(3 4)");
  Elem a2 = a7->element_by_label("(2 3)(5 6)");
  if (a1 < 0 || a2 < 0) throw std::logic_error("a7 catalog lost its distinguished elements");
  return {a1, a2};
}

StructurePtr make_single_equation() {
  return std::make_shared<Structure>(
      3, std::vector<RelationSymbol>{{lr_name(1, 3), 3}},
      std::map<std::string, std::vector<Tuple>>{{lr_name(1, 3), {{0, 1, 2}}}},
      std::map<Elem, std::string>{{0, "x1"}, {1, "x2"}, {2, "x3"}});
}

StructurePtr make_lin(const std::vector<RelationSymbol>& symbols) {
  std::map<std::string, std::vector<Tuple>> rels;
  for (const auto& s : symbols) {
    int rhs = 0, arity = 0;
    if (!parse_lr_name(s.name, rhs, arity) || arity != s.arity)
      throw InputError("lin: symbol " + s.name + " is not a parity symbol");
    std::vector<Tuple> tuples;
    for (Elem bits = 0; bits < (Elem(1) << arity); ++bits) {
      int parity = 0;
      Tuple t(arity);
      for (int p = 0; p < arity; ++p) {
        t[p] = (bits >> p) & 1;
        parity ^= static_cast<int>(t[p]);
      }
      if (parity == rhs) tuples.push_back(std::move(t));
    }
    rels[s.name] = std::move(tuples);
  }
  return std::make_shared<Structure>(2, symbols, std::move(rels),
                                     std::map<Elem, std::string>{{0, "0"}, {1, "1"}});
}

StructurePtr lin_for(const Structure& a) {
  if (!a.is_linear()) throw InputError("lin: source structure is not linear");
  std::vector<RelationSymbol> symbols;
  for (std::size_t s = 0; s < a.signature().size(); ++s)
    if (a.tuple_count(static_cast<int>(s)) > 0) symbols.push_back(a.signature()[s]);
  if (symbols.empty()) throw InputError("lin: source structure has no constraints");
  return make_lin(symbols);
}

StructurePtr completion(const StructurePtr& a, std::uint64_t materialize_threshold) {
  if (!a) throw InputError("completion: null structure");
  if (a->is_lazy()) throw InputError("completion: structure must be explicit");
  if (a->symbol_index("E") >= 0)
    throw InputError("completion: signature already contains the symbol E");
  Elem n = a->domain_size();
  std::uint64_t pairs =
      static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1);

  std::vector<RelationSymbol> sig = a->signature();
  sig.push_back({"E", 2});
  std::map<std::string, std::vector<Tuple>> rels;
  for (std::size_t s = 0; s < a->signature().size(); ++s)
    rels[a->signature()[s].name] = a->explicit_relation(static_cast<int>(s)).tuples();

  if (pairs <= materialize_threshold) {
    std::vector<Tuple> ineq;
    ineq.reserve(pairs);
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        if (x != y) ineq.push_back({x, y});
    rels["E"] = std::move(ineq);
  }
  auto out = std::make_shared<Structure>(n, std::move(sig), std::move(rels), a->labels());
  out->completion_base_ = a;
  if (pairs > materialize_threshold)
    out->distinct_symbol_ = out->symbol_index("E");
  return out;
}

Homogenisation homogenise(const StructurePtr& a) {
  if (!a) throw InputError("homogenise: null structure");
  if (!a->is_linear()) throw InputError("homogenise: structure is not linear");
  if (a->is_lazy()) throw InputError("homogenise: structure must be explicit");
  Elem j = a->domain_size();

  std::map<std::pair<int, int>, std::vector<Tuple>> even;  // (arity) keyed tuples
  auto add = [&](int arity, Tuple t) { even[{arity, 0}].push_back(std::move(t)); };

  for (std::size_t s = 0; s < a->signature().size(); ++s) {
    if (a->tuple_count(static_cast<int>(s)) == 0) continue;
    int rhs = 0, arity = 0;
    parse_lr_name(a->signature()[s].name, rhs, arity);
    for (const Tuple& t : a->explicit_relation(static_cast<int>(s)).tuples()) {
      if (rhs == 0) {
        add(arity, t);
      } else {
        Tuple ext = t;
        ext.push_back(j);
        add(arity + 1, std::move(ext));
      }
    }
  }
  for (Elem e = 0; e < a->domain_size(); ++e) add(4, {e, j, e, j});

  std::vector<RelationSymbol> sig;
  std::map<std::string, std::vector<Tuple>> rels;
  for (auto& [key, tuples] : even) {
    std::string name = lr_name(0, key.first);
    sig.push_back({name, key.first});
    rels[name] = std::move(tuples);
  }
  std::map<Elem, std::string> labels = a->labels();
  labels[j] = "j";
  return {std::make_shared<Structure>(j + 1, std::move(sig), std::move(rels), std::move(labels)),
          j};
}

StructurePtr encode_graph(const StructurePtr& a, const StructurePtr& b) {
  if (!a || !b) throw InputError("encode: null structure");
  if (a->is_lazy()) throw InputError("encode: source must be explicit");
  if (b->is_lazy()) throw InputError("encode: target must be explicit");
  for (std::size_t s = 0; s < a->signature().size(); ++s) {
    if (a->tuple_count(static_cast<int>(s)) == 0) continue;
    int bs = b->symbol_index(a->signature()[s].name);
    if (bs < 0 || b->symbol(bs).arity != a->signature()[s].arity)
      throw InputError("encode: target lacks symbol " + a->signature()[s].name);
  }

  Elem na = a->domain_size(), nb = b->domain_size();

  // group source tuples by their largest element so each constraint block
  // can be numbered right after the pair vertices it depends on
  std::vector<std::vector<std::pair<int, const Tuple*>>> due(na);
  for (std::size_t s = 0; s < a->signature().size(); ++s) {
    if (a->tuple_count(static_cast<int>(s)) == 0) continue;
    for (const Tuple& src : a->explicit_relation(static_cast<int>(s)).tuples())
      due[*std::max_element(src.begin(), src.end())].push_back({static_cast<int>(s), &src});
  }

  std::vector<Elem> pair_start(na);
  std::vector<RelationSymbol> sig;
  std::map<std::string, std::vector<Tuple>> rels;
  std::map<Elem, std::string> labels;
  std::vector<Tuple> edges;
  Elem next_vertex = 0;
  int block = 0;

  for (Elem x = 0; x < na; ++x) {
    std::string color = "C_v" + std::to_string(x);
    sig.push_back({color, 1});
    std::vector<Tuple> members;
    pair_start[x] = next_vertex;
    for (Elem v = 0; v < nb; ++v) {
      members.push_back({next_vertex});
      labels[next_vertex] = a->label(x) + "=" + b->label(v);
      ++next_vertex;
    }
    rels[color] = std::move(members);

    for (auto [s, src] : due[x]) {
      int bs = b->symbol_index(a->signature()[s].name);
      int arity = a->signature()[s].arity;
      std::string cname = "C_c" + std::to_string(block++);
      std::vector<Tuple> cmembers;
      for (const Tuple& tgt : b->explicit_relation(bs).tuples()) {
        bool compatible = true;
        for (int i = 0; i < arity && compatible; ++i)
          for (int k = i + 1; k < arity && compatible; ++k)
            if ((*src)[i] == (*src)[k] && tgt[i] != tgt[k]) compatible = false;
        if (!compatible) continue;
        Elem v = next_vertex++;
        cmembers.push_back({v});
        std::string lab = a->signature()[s].name + "(";
        for (int i = 0; i < arity; ++i) lab += (i ? "," : "") + a->label((*src)[i]);
        lab += ")=";
        for (int i = 0; i < arity; ++i) lab += (i ? "," : "") + b->label(tgt[i]);
        labels[v] = lab;
        for (int i = 0; i < arity; ++i) {
          Elem u = pair_start[(*src)[i]] + tgt[i];
          edges.push_back({u, v});
          edges.push_back({v, u});
        }
      }
      sig.push_back({cname, 1});
      rels[cname] = std::move(cmembers);
    }
  }
  sig.push_back({"edge", 2});
  rels["edge"] = std::move(edges);
  return std::make_shared<Structure>(next_vertex, std::move(sig), std::move(rels),
                                     std::move(labels));
}

StructurePtr disjoint_union(const std::vector<StructurePtr>& parts,
                            const std::vector<std::string>& label_prefixes,
                            const std::map<std::string, std::vector<Tuple>>& extra_tuples) {
  if (parts.empty()) throw InputError("union: no parts");
  if (!label_prefixes.empty() && label_prefixes.size() != parts.size())
    throw InputError("union: prefix count mismatch");

  Elem total = 0;
  std::vector<Elem> offset(parts.size());
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (!parts[p] || parts[p]->is_lazy()) throw InputError("union: parts must be explicit");
    offset[p] = total;
    total += parts[p]->domain_size();
  }

  std::vector<RelationSymbol> sig;
  std::map<std::string, std::vector<Tuple>> rels;
  auto ensure_symbol = [&](const RelationSymbol& s) {
    for (const auto& have : sig) {
      if (have.name == s.name) {
        if (have.arity != s.arity) throw InputError("union: arity clash on " + s.name);
        return;
      }
    }
    sig.push_back(s);
  };

  std::map<Elem, std::string> labels;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Structure& part = *parts[p];
    for (std::size_t s = 0; s < part.signature().size(); ++s) {
      ensure_symbol(part.signature()[s]);
      auto& bucket = rels[part.signature()[s].name];
      for (Tuple t : part.explicit_relation(static_cast<int>(s)).tuples()) {
        for (Elem& e : t) e += offset[p];
        bucket.push_back(std::move(t));
      }
    }
    std::string prefix = label_prefixes.empty() ? std::string() : label_prefixes[p];
    for (Elem e = 0; e < part.domain_size(); ++e)
      labels[e + offset[p]] = prefix.empty() ? part.label(e) : prefix + ":" + part.label(e);
  }
  for (const auto& [name, tuples] : extra_tuples) {
    if (tuples.empty()) continue;
    int arity = static_cast<int>(tuples.front().size());
    ensure_symbol({name, arity});
    auto& bucket = rels[name];
    bucket.insert(bucket.end(), tuples.begin(), tuples.end());
  }
  return std::make_shared<Structure>(total, std::move(sig), std::move(rels), std::move(labels));
}

std::uint64_t classical_solution_count(const StructurePtr& a) {
  if (!a) throw InputError("solution count: null structure");
  if (!a->is_linear()) throw InputError("solution count: structure is not linear");
  Elem n = a->domain_size();
  std::size_t words = static_cast<std::size_t>(n) / 64 + 1;  // last bit = rhs
  std::vector<std::vector<std::uint64_t>> rows;
  auto bit = [&](std::vector<std::uint64_t>& row, Elem i) { row[i / 64] ^= 1ull << (i % 64); };

  for (std::size_t s = 0; s < a->signature().size(); ++s) {
    if (a->tuple_count(static_cast<int>(s)) == 0) continue;
    int rhs = 0, arity = 0;
    parse_lr_name(a->signature()[s].name, rhs, arity);
    a->for_each_tuple(static_cast<int>(s), [&](const Tuple& t) {
      std::vector<std::uint64_t> row(words, 0);
      for (Elem e : t) bit(row, e);
      if (rhs) bit(row, n);
      rows.push_back(std::move(row));
      return true;
    });
  }

  std::size_t rank = 0;
  for (Elem col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !((rows[pivot][col / 64] >> (col % 64)) & 1)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || !((rows[r][col / 64] >> (col % 64)) & 1)) continue;
      for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
    }
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r) {
    bool zero = true;
    for (std::size_t w = 0; w < words && zero; ++w)
      if (w + 1 < words ? rows[r][w] : rows[r][w] & ~(1ull << (n % 64))) zero = false;
    if (zero && ((rows[r][n / 64] >> (n % 64)) & 1)) return 0;  // 0 = 1 row
  }
  Elem freedom = n - static_cast<Elem>(rank);
  if (freedom > 63) throw InputError("solution count: more than 2^63 solutions");
  return 1ull << freedom;
}

}  // namespace qhom
