#include "qhom/gadget.hpp"

#include <string>

#include "qhom/util.hpp"

namespace qhom {

GadgetCandidate build_commutativity_gadget(const StructurePtr& base,
                                           std::uint64_t materialize_threshold) {
  if (!base) throw InputError("gadget: null base");
  if (base->is_lazy()) throw InputError("gadget: base must be explicit");
  Elem n = base->domain_size();
  if (n > 46340) throw InputError("gadget: base too large for a squared exponent");
  int k = static_cast<int>(n * n);

  GadgetCandidate g;
  g.base = base;
  g.exponent = k;
  g.structure = Structure::power(base, k, materialize_threshold);
  // coordinate i holds the pair (i / n, i % n)
  Tuple xs(k), ys(k);
  for (int i = 0; i < k; ++i) {
    xs[i] = i / n;
    ys[i] = i % n;
  }
  g.x = g.structure->encode(xs);
  g.y = g.structure->encode(ys);
  return g;
}

GadgetReport verify_gadget_property_i(const GadgetCandidate& g,
                                      const GadgetVerifyOptions& options) {
  if (!g.base || !g.structure || !g.structure->is_power())
    throw InputError("gadget: malformed candidate");
  const Structure& power = *g.structure;
  const Structure& base = *g.base;
  Elem n = base.domain_size();

  GadgetReport report;
  report.sampled = power.is_lazy();
  Tuple xs = power.decode(g.x), ys = power.decode(g.y);

  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      GadgetWitness w;
      w.a = a;
      w.b = b;
      w.coordinate = static_cast<int>(a * n + b);
      w.value_ok = xs[w.coordinate] == a && ys[w.coordinate] == b;
      w.hom_ok = true;

      for (std::size_t s = 0; s < power.signature().size(); ++s) {
        int sym = static_cast<int>(s);
        if (power.tuple_count(sym) == 0) continue;
        int arity = power.signature()[s].arity;
        Tuple image(arity);
        if (!report.sampled) {
          power.for_each_tuple(sym, [&](const Tuple& t) {
            for (int i = 0; i < arity; ++i) image[i] = power.decode(t[i])[w.coordinate];
            ++w.checks;
            if (!base.contains(sym, image)) w.hom_ok = false;
            return w.hom_ok;
          });
        } else {
          // seeded per witness and symbol so every witness sees its own
          // reproducible sample of product tuples
          SplitMix64 rng(options.seed ^ fnv1a64(power.signature()[s].name) ^
                         (static_cast<std::uint64_t>(w.coordinate) << 32));
          std::vector<Tuple> pool;
          base.for_each_tuple(sym, [&](const Tuple& t) {
            pool.push_back(t);
            return true;
          });
          if (pool.empty()) continue;
          int exp = power.power_exponent();
          std::vector<Tuple> coords(exp);
          Tuple member(arity);
          Tuple digits(exp);
          for (std::uint64_t it = 0; it < options.samples; ++it) {
            for (int c = 0; c < exp; ++c)
              coords[c] = pool[static_cast<std::size_t>(rng.below(pool.size()))];
            for (int i = 0; i < arity; ++i) {
              for (int c = 0; c < exp; ++c) digits[c] = coords[c][i];
              member[i] = power.encode(digits);
            }
            ++w.checks;
            if (!power.contains(sym, member)) { w.hom_ok = false; break; }
            for (int i = 0; i < arity; ++i) image[i] = coords[w.coordinate][i];
            if (!base.contains(sym, image)) { w.hom_ok = false; break; }
          }
        }
        if (!w.hom_ok) break;
      }
      report.witnesses.push_back(w);
    }

  report.all_valid = true;
  for (const GadgetWitness& w : report.witnesses)
    if (!w.value_ok || !w.hom_ok) report.all_valid = false;
  return report;
}

CollapseBlock collapse_block() {
  Homogenisation ms = homogenise(make_magic_square());
  StructurePtr a7 = make_a7();
  auto [a1, a2] = a7_distinguished();

  Elem ms_size = ms.structure->domain_size();           // 10
  Elem c1 = ms_size, c2 = ms_size + a7->domain_size();  // copy offsets
  // identification tuples: copy one onto variables 1 and 5, copy two onto
  // variables 2 and 4 (0-based ids 0, 4, 1, 3)
  std::map<std::string, std::vector<Tuple>> glue{
      {lr_name(0, 2),
       {{c1 + a1, 0}, {c1 + a2, 4}, {c2 + a1, 1}, {c2 + a2, 3}}}};

  CollapseBlock block;
  block.structure =
      disjoint_union({ms.structure, a7, a7}, {"ms", "a7a", "a7b"}, glue);
  block.anchor = 0;
  block.j = ms.j;
  return block;
}

SeparationPipeline build_separation_structure(const StructurePtr& a) {
  if (!a) throw InputError("separation: null structure");
  if (!a->is_linear()) throw InputError("separation: structure is not linear");

  SeparationPipeline p;
  p.homogenised = homogenise(a);
  p.block = collapse_block();

  Elem n = a->domain_size();  // block copy per original element
  Elem hsize = p.homogenised.structure->domain_size();
  Elem bsize = p.block.structure->domain_size();

  std::vector<StructurePtr> parts = {p.homogenised.structure};
  std::vector<std::string> prefixes = {""};
  std::vector<Tuple> glue;
  for (Elem e = 0; e < n; ++e) {
    Elem off = hsize + e * bsize;
    parts.push_back(p.block.structure);
    prefixes.push_back("b" + std::to_string(e));
    glue.push_back({e, off + p.block.anchor});
    glue.push_back({p.homogenised.j, off + p.block.j});
  }
  p.glued = disjoint_union(parts, prefixes,
                           {{lr_name(0, 2), std::move(glue)}});
  p.lin = lin_for(*p.glued);
  p.graph = encode_graph(p.glued, p.lin);
  p.completed = completion(p.graph);
  return p;
}

}  // namespace qhom
