#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qhom/fpgroups.hpp"
#include "qhom/gadget.hpp"
#include "qhom/games.hpp"
#include "qhom/homsearch.hpp"
#include "qhom/jsonio.hpp"
#include "qhom/repalg.hpp"
#include "qhom/structure.hpp"
#include "qhom/todd_coxeter.hpp"
#include "qhom/util.hpp"
#include "qhom/weighted.hpp"

namespace {

using namespace qhom;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInconclusive = 2;

struct Ctx {
  // global options
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::uint64_t max_cosets = 1000000;
  std::uint64_t node_budget = 100000000;
  int threads = 1;

  std::string command;
  Json inputs = Json::object();
  Json outcome = Json::object();
  int exit_code = kExitOk;
};

Tuple parse_ids(const std::string& s) {
  Tuple out;
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, ',')) {
    try {
      out.push_back(std::stoll(part));
    } catch (const std::exception&) {
      throw InputError("bad id list \"" + s + "\"");
    }
  }
  return out;
}

Json load_input(Ctx& ctx, const std::string& flag, const std::string& path) {
  ctx.inputs[flag] = file_digest(path);
  return load_json(path);
}

StructurePtr load_structure(Ctx& ctx, const std::string& flag,
                            const std::string& path) {
  return structure_from_json(load_input(ctx, flag, path));
}

// Writes `payload` to `out` when a path was given (recording path and
// digest), otherwise embeds it into the outcome under `key`.
void emit(Ctx& ctx, const std::string& out, const char* key,
          const Json& payload) {
  if (out.empty()) {
    ctx.outcome[key] = payload;
  } else {
    save_json(out, payload);
    ctx.outcome["out"] = out;
    ctx.outcome["digest"] = file_digest(out);
  }
}

Json rational_json(const Rational& r) {
  return Json{{"num", r.num()}, {"den", r.den()}, {"value", r.to_double()}};
}

Json violation_report_json(const ViolationReport& report, double tol) {
  Json j;
  j["max_residual"] = report.max_residual;
  j["checks"] = report.checks;
  j["sampled"] = report.sampled;
  j["clean"] = report.clean(tol);
  Json list = Json::array();
  for (const Violation& v : report.violations) {
    list.push_back(Json{{"description", v.description}, {"residual", v.residual}});
  }
  j["violations"] = std::move(list);
  return j;
}

Json defect_report_json(const DefectReport& report) {
  Json j;
  j["defect"] = report.defect;
  j["checks"] = report.checks;
  Json terms = Json::array();
  for (const DefectTerm& t : report.terms) {
    terms.push_back(Json{
        {"description", t.description}, {"weight", t.weight}, {"value", t.value}});
  }
  j["terms"] = std::move(terms);
  if (report.pair_averaged) j["pair_averaged"] = *report.pair_averaged;
  return j;
}

Json search_result_json(const SearchResult& result, bool with_maps) {
  Json j;
  j["status"] = result.complete() ? "complete" : "budget_exhausted";
  j["count"] = result.count;
  j["nodes"] = result.nodes;
  if (with_maps) j["maps"] = result.maps;
  return j;
}

const char* catalog_help =
    "catalog name: complete (with --n), lin (with --like), magic-square, "
    "a7, single-equation";

StructurePtr build_catalog(const std::string& name, int n,
                           const StructurePtr& like) {
  if (name == "complete") {
    if (n <= 0) throw InputError("--name complete needs --n");
    return make_clique(n);
  }
  if (name == "lin") {
    if (!like) throw InputError("--name lin needs --like <structure>");
    return lin_for(*like);
  }
  if (name == "magic-square") return make_magic_square();
  if (name == "a7") return make_a7();
  if (name == "single-equation") return make_single_equation();
  throw InputError("unknown catalog name \"" + name + "\"");
}

void add_structure_summary(Ctx& ctx, const StructurePtr& st) {
  ctx.outcome["domain_size"] = st->domain_size();
  ctx.outcome["lazy"] = st->is_lazy();
  Json sig = Json::array();
  for (const RelationSymbol& sym : st->signature()) {
    sig.push_back(Json::array({sym.name, sym.arity}));
  }
  ctx.outcome["signature"] = std::move(sig);
}

// ---------------------------------------------------------------- struct ---

void register_struct(CLI::App& app, Ctx& ctx) {
  CLI::App* group = app.add_subcommand("struct", "build and transform structures");
  group->require_subcommand(1);
  group->fallthrough();

  {
    CLI::App* cmd = group->add_subcommand("build", catalog_help);
    cmd->fallthrough();
    auto name = std::make_shared<std::string>();
    auto n = std::make_shared<int>(0);
    auto like = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--name", *name, "catalog entry")->required();
    cmd->add_option("--n", *n, "size for the complete graph");
    cmd->add_option("--like", *like, "structure whose parity symbols to use");
    cmd->add_option("--out", *out, "write the structure here");
    cmd->callback([&ctx, name, n, like, out] {
      StructurePtr base;
      if (!like->empty()) base = load_structure(ctx, "--like", *like);
      StructurePtr st = build_catalog(*name, *n, base);
      add_structure_summary(ctx, st);
      emit(ctx, *out, "structure", structure_to_json(st));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand("catalog", "list the built-in structures");
    cmd->fallthrough();
    cmd->callback([&ctx] {
      Json list = Json::array();
      for (const char* name : {"magic-square", "a7", "single-equation"}) {
        StructurePtr st = build_catalog(name, 0, nullptr);
        list.push_back(Json{{"name", name}, {"domain_size", st->domain_size()}});
      }
      list.push_back(Json{{"name", "complete"}, {"parameter", "--n"}});
      list.push_back(Json{{"name", "lin"}, {"parameter", "--like"}});
      ctx.outcome["catalog"] = std::move(list);
    });
  }
  {
    CLI::App* cmd = group->add_subcommand("power", "Cartesian power of a structure");
    cmd->fallthrough();
    auto base = std::make_shared<std::string>();
    auto exponent = std::make_shared<int>(0);
    auto threshold =
        std::make_shared<std::uint64_t>(Structure::kDefaultMaterializeThreshold);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--base", *base, "base structure")->required();
    cmd->add_option("--exponent", *exponent, "power exponent")->required();
    cmd->add_option("--threshold", *threshold, "materialization threshold");
    cmd->add_option("--out", *out, "write the power here");
    cmd->callback([&ctx, base, exponent, threshold, out] {
      StructurePtr b = load_structure(ctx, "--base", *base);
      StructurePtr st = Structure::power(b, *exponent, *threshold);
      add_structure_summary(ctx, st);
      emit(ctx, *out, "structure", structure_to_json(st));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "complete", "add the all-distinct-pairs relation E");
    cmd->fallthrough();
    auto in = std::make_shared<std::string>();
    auto threshold =
        std::make_shared<std::uint64_t>(Structure::kDefaultMaterializeThreshold);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--in", *in, "structure to complete")->required();
    cmd->add_option("--threshold", *threshold, "materialization threshold");
    cmd->add_option("--out", *out, "write the completion here");
    cmd->callback([&ctx, in, threshold, out] {
      StructurePtr st = completion(load_structure(ctx, "--in", *in), *threshold);
      add_structure_summary(ctx, st);
      ctx.outcome["implicit_distinct"] = st->distinct_symbol() >= 0;
      emit(ctx, *out, "structure", structure_to_json(st));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "homogenise", "rewrite odd constraints through a fresh anchored element");
    cmd->fallthrough();
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--in", *in, "linear structure")->required();
    cmd->add_option("--out", *out, "write the result here");
    cmd->callback([&ctx, in, out] {
      Homogenisation h = homogenise(load_structure(ctx, "--in", *in));
      add_structure_summary(ctx, h.structure);
      ctx.outcome["j"] = h.j;
      emit(ctx, *out, "structure", structure_to_json(h.structure));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "encode", "constraint-incidence graph of a source over a target");
    cmd->fallthrough();
    auto source = std::make_shared<std::string>();
    auto target = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--source", *source, "source structure")->required();
    cmd->add_option("--target", *target,
                    "target structure (parity template of the source when omitted)");
    cmd->add_option("--out", *out, "write the graph here");
    cmd->callback([&ctx, source, target, out] {
      StructurePtr a = load_structure(ctx, "--source", *source);
      StructurePtr b = target->empty() ? lin_for(*a)
                                       : load_structure(ctx, "--target", *target);
      StructurePtr st = encode_graph(a, b);
      add_structure_summary(ctx, st);
      emit(ctx, *out, "structure", structure_to_json(st));
    });
  }
}

// ------------------------------------------------------------- hom / poly ---

void register_hom(CLI::App& app, Ctx& ctx) {
  CLI::App* group = app.add_subcommand("hom", "homomorphism search");
  group->require_subcommand(1);
  group->fallthrough();
  CLI::App* cmd = group->add_subcommand("enumerate", "all maps source -> target");
  cmd->fallthrough();
  auto source = std::make_shared<std::string>();
  auto target = std::make_shared<std::string>();
  auto limit = std::make_shared<std::uint64_t>(0);
  auto count_only = std::make_shared<bool>(false);
  cmd->add_option("--source", *source, "source structure")->required();
  cmd->add_option("--target", *target, "target structure")->required();
  cmd->add_option("--limit", *limit, "stop after this many maps");
  cmd->add_flag("--count-only", *count_only, "do not keep the maps");
  cmd->callback([&ctx, source, target, limit, count_only] {
    StructurePtr a = load_structure(ctx, "--source", *source);
    StructurePtr b = load_structure(ctx, "--target", *target);
    SearchOptions options;
    options.node_budget = ctx.node_budget;
    options.threads = ctx.threads;
    options.store_maps = !*count_only;
    options.max_results = *limit;
    SearchResult result = enumerate_homomorphisms(a, b, options);
    ctx.outcome = search_result_json(result, !*count_only);
    if (!result.complete()) ctx.exit_code = kExitInconclusive;
  });
}

void register_poly(CLI::App& app, Ctx& ctx) {
  CLI::App* group = app.add_subcommand("poly", "polymorphism search");
  group->require_subcommand(1);
  group->fallthrough();
  CLI::App* cmd =
      group->add_subcommand("enumerate", "all maps base^arity -> base");
  cmd->fallthrough();
  auto base = std::make_shared<std::string>();
  auto arity = std::make_shared<int>(0);
  auto limit = std::make_shared<std::uint64_t>(0);
  auto count_only = std::make_shared<bool>(false);
  auto decompose = std::make_shared<bool>(false);
  cmd->add_option("--base", *base, "base structure")->required();
  cmd->add_option("--arity", *arity, "power exponent")->required();
  cmd->add_option("--limit", *limit, "stop after this many maps");
  cmd->add_flag("--count-only", *count_only, "do not keep the maps");
  cmd->add_flag("--decompose", *decompose,
                "factor each map through a coordinate projection");
  cmd->callback([&ctx, base, arity, limit, count_only, decompose] {
    StructurePtr b = load_structure(ctx, "--base", *base);
    SearchOptions options;
    options.node_budget = ctx.node_budget;
    options.threads = ctx.threads;
    options.store_maps = !*count_only || *decompose;
    options.max_results = *limit;
    SearchResult result = enumerate_polymorphisms(b, *arity, options);
    ctx.outcome = search_result_json(result, !*count_only);
    if (*decompose) {
      StructurePtr power = Structure::power(b, *arity);
      Json list = Json::array();
      bool all = true;
      for (const std::vector<Elem>& map : result.maps) {
        ProjectionDecomposition d = decompose_projection(power, map);
        all = all && d.projective;
        list.push_back(Json{{"projective", d.projective},
                            {"coordinate", d.coordinate},
                            {"bijection", d.bijection}});
      }
      ctx.outcome["decompositions"] = std::move(list);
      ctx.outcome["all_projective"] = all;
    }
    if (!result.complete()) ctx.exit_code = kExitInconclusive;
  });
}

// ----------------------------------------------------------------- gadget ---

Json gadget_to_json(const GadgetCandidate& g) {
  Json j;
  j["base"] = structure_to_json(g.base);
  j["exponent"] = g.exponent;
  j["x"] = g.x;
  j["y"] = g.y;
  return j;
}

GadgetCandidate gadget_from_json(const Json& j) {
  GadgetCandidate g;
  g.base = structure_from_json(j.at("base"));
  g.exponent = j.at("exponent").get<int>();
  g.structure = Structure::power(g.base, g.exponent);
  g.x = j.at("x").get<Elem>();
  g.y = j.at("y").get<Elem>();
  return g;
}

void register_gadget(CLI::App& app, Ctx& ctx) {
  CLI::App* group =
      app.add_subcommand("gadget", "commutativity gadgets and the pinning pipeline");
  group->require_subcommand(1);
  group->fallthrough();
  {
    CLI::App* cmd = group->add_subcommand(
        "build", "the power structure with its two distinguished elements");
    cmd->fallthrough();
    auto base = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--base", *base, "base structure")->required();
    cmd->add_option("--out", *out, "write the gadget here");
    cmd->callback([&ctx, base, out] {
      GadgetCandidate g =
          build_commutativity_gadget(load_structure(ctx, "--base", *base));
      ctx.outcome["exponent"] = g.exponent;
      ctx.outcome["domain_size"] = g.structure->domain_size();
      ctx.outcome["lazy"] = g.structure->is_lazy();
      ctx.outcome["x"] = g.x;
      ctx.outcome["y"] = g.y;
      ctx.outcome["x_tuple"] = g.structure->decode(g.x);
      ctx.outcome["y_tuple"] = g.structure->decode(g.y);
      emit(ctx, *out, "gadget", gadget_to_json(g));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "verify", "exhibit a projection witness for every value pair");
    cmd->fallthrough();
    auto gadget = std::make_shared<std::string>();
    auto samples = std::make_shared<std::uint64_t>(10000);
    cmd->add_option("--gadget", *gadget, "gadget file")->required();
    cmd->add_option("--samples", *samples, "tuples sampled per witness when lazy");
    cmd->callback([&ctx, gadget, samples] {
      GadgetCandidate g = gadget_from_json(load_input(ctx, "--gadget", *gadget));
      GadgetVerifyOptions options;
      options.samples = *samples;
      options.seed = ctx.seed;
      GadgetReport report = verify_gadget_property_i(g, options);
      ctx.outcome["all_valid"] = report.all_valid;
      ctx.outcome["sampled"] = report.sampled;
      Json witnesses = Json::array();
      for (const GadgetWitness& w : report.witnesses) {
        witnesses.push_back(Json{{"a", w.a},
                                 {"b", w.b},
                                 {"coordinate", w.coordinate},
                                 {"value_ok", w.value_ok},
                                 {"hom_ok", w.hom_ok},
                                 {"checks", w.checks}});
      }
      ctx.outcome["witnesses"] = std::move(witnesses);
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "separation", "the pinned constraint graph of a linear structure");
    cmd->fallthrough();
    auto lin = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto graph_out = std::make_shared<std::string>();
    cmd->add_option("--lin", *lin, "linear structure")->required();
    cmd->add_option("--out", *out, "write the completed graph here");
    cmd->add_option("--graph-out", *graph_out,
                    "also write the graph before completion");
    cmd->callback([&ctx, lin, out, graph_out] {
      SeparationPipeline pipe =
          build_separation_structure(load_structure(ctx, "--lin", *lin));
      ctx.outcome["homogenised_size"] = pipe.homogenised.structure->domain_size();
      ctx.outcome["j"] = pipe.homogenised.j;
      ctx.outcome["block_size"] = pipe.block.structure->domain_size();
      ctx.outcome["glued_size"] = pipe.glued->domain_size();
      ctx.outcome["graph_size"] = pipe.graph->domain_size();
      ctx.outcome["implicit_distinct"] = pipe.completed->distinct_symbol() >= 0;
      if (!graph_out->empty()) {
        save_json(*graph_out, structure_to_json(pipe.graph));
        ctx.outcome["graph_out"] = *graph_out;
        ctx.outcome["graph_digest"] = file_digest(*graph_out);
      }
      emit(ctx, *out, "structure", structure_to_json(pipe.completed));
    });
  }
}

// ------------------------------------------------------------------ group ---

void register_group(CLI::App& app, Ctx& ctx) {
  CLI::App* group = app.add_subcommand("group", "finitely presented group tools");
  group->require_subcommand(1);
  group->fallthrough();
  {
    CLI::App* cmd = group->add_subcommand(
        "solution", "the involutive presentation of a parity system");
    cmd->fallthrough();
    auto lin = std::make_shared<std::string>();
    auto homogeneous = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--lin", *lin, "linear structure")->required();
    cmd->add_flag("--homogeneous", *homogeneous,
                  "omit J (requires a homogeneous structure)");
    cmd->add_option("--out", *out, "write the presentation here");
    cmd->callback([&ctx, lin, homogeneous, out] {
      SolutionGroupMap map =
          solution_group(load_structure(ctx, "--lin", *lin), *homogeneous);
      ctx.outcome["generators"] = map.group.generators.size();
      ctx.outcome["relators"] = map.group.relators.size();
      ctx.outcome["j_generator"] = map.j_generator;
      emit(ctx, *out, "group", group_to_json(map.group));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand("tc", "coset enumeration");
    cmd->fallthrough();
    auto file = std::make_shared<std::string>();
    auto subgroup = std::make_shared<std::string>();
    cmd->add_option("--group", *file, "presentation file")->required();
    cmd->add_option("--subgroup", *subgroup, "words generating the subgroup");
    cmd->callback([&ctx, file, subgroup] {
      GroupPresentation g = group_from_json(load_input(ctx, "--group", *file));
      std::vector<Word> sub;
      if (!subgroup->empty()) {
        sub = words_from_json(load_input(ctx, "--subgroup", *subgroup), g);
      }
      CosetTable table = todd_coxeter(g, sub, {ctx.max_cosets});
      const bool complete = table.status() == TcStatus::complete;
      ctx.outcome["status"] = complete ? "complete" : "exceeded_limit";
      ctx.outcome["live_cosets"] = table.live_cosets();
      ctx.outcome["total_defined"] = table.total_defined();
      if (complete && sub.empty()) ctx.outcome["order"] = table.live_cosets();
      if (!complete) ctx.exit_code = kExitInconclusive;
    });
  }
  {
    CLI::App* cmd = group->add_subcommand("word", "decide whether a word is trivial");
    cmd->fallthrough();
    auto file = std::make_shared<std::string>();
    auto expr = std::make_shared<std::string>();
    cmd->add_option("--group", *file, "presentation file")->required();
    cmd->add_option("--word", *expr, "expression such as \"[x1,x5]J^-1\"")
        ->required();
    cmd->callback([&ctx, file, expr] {
      GroupPresentation g = group_from_json(load_input(ctx, "--group", *file));
      Word w = parse_word(g, *expr);
      Triviality t = word_is_trivial(g, w, {ctx.max_cosets});
      ctx.outcome["word"] = word_to_string(w, g);
      ctx.outcome["trivial"] = t == Triviality::yes          ? "yes"
                               : t == Triviality::no         ? "no"
                                                             : "inconclusive";
      if (t == Triviality::inconclusive) ctx.exit_code = kExitInconclusive;
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "combine", "free product, optionally amalgamated");
    cmd->fallthrough();
    auto g1 = std::make_shared<std::string>();
    auto g2 = std::make_shared<std::string>();
    auto amalgamate = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--g1", *g1, "first presentation")->required();
    cmd->add_option("--g2", *g2, "second presentation")->required();
    cmd->add_option("--amalgamate", *amalgamate,
                    "file with {\"pairs\": [[word1, word2], ...]}");
    cmd->add_option("--out", *out, "write the combined presentation here");
    cmd->callback([&ctx, g1, g2, amalgamate, out] {
      GroupPresentation a = group_from_json(load_input(ctx, "--g1", *g1));
      GroupPresentation b = group_from_json(load_input(ctx, "--g2", *g2));
      std::vector<std::pair<Word, Word>> pairs;
      if (!amalgamate->empty()) {
        const Json j = load_input(ctx, "--amalgamate", *amalgamate);
        if (!j.contains("pairs") || !j.at("pairs").is_array()) {
          throw InputError("amalgamation file needs a \"pairs\" array");
        }
        for (const Json& entry : j.at("pairs")) {
          if (!entry.is_array() || entry.size() != 2) {
            throw InputError("amalgamation entries must be [word1, word2]");
          }
          Json first = Json{{"words", Json::array({entry[0]})}};
          Json second = Json{{"words", Json::array({entry[1]})}};
          pairs.push_back({words_from_json(first, a).front(),
                           words_from_json(second, b).front()});
        }
      }
      GroupPresentation combined = combine(a, b, pairs);
      ctx.outcome["generators"] = combined.generators.size();
      ctx.outcome["relators"] = combined.relators.size();
      emit(ctx, *out, "group", group_to_json(combined));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "quotient", "impose extra relators");
    cmd->fallthrough();
    auto file = std::make_shared<std::string>();
    auto exprs = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--group", *file, "presentation file")->required();
    cmd->add_option("--relator", *exprs, "extra relator expression (repeatable)")
        ->required();
    cmd->add_option("--out", *out, "write the quotient here");
    cmd->callback([&ctx, file, exprs, out] {
      GroupPresentation g = group_from_json(load_input(ctx, "--group", *file));
      std::vector<Word> extra;
      for (const std::string& e : *exprs) extra.push_back(parse_word(g, e));
      GroupPresentation q = quotient_by_normal_closure(g, extra);
      ctx.outcome["generators"] = q.generators.size();
      ctx.outcome["relators"] = q.relators.size();
      emit(ctx, *out, "group", group_to_json(q));
    });
  }
}

// -------------------------------------------------------------------- rep ---

void register_rep(CLI::App& app, Ctx& ctx) {
  CLI::App* group =
      app.add_subcommand("rep", "measurement families over structure pairs");
  group->require_subcommand(1);
  group->fallthrough();
  {
    CLI::App* cmd = group->add_subcommand("check", "verify the defining relations");
    cmd->fallthrough();
    auto file = std::make_shared<std::string>();
    auto samples = std::make_shared<std::uint64_t>(10000);
    cmd->add_option("--rep", *file, "representation file")->required();
    cmd->add_option("--samples", *samples, "samples per lazy relation");
    cmd->callback([&ctx, file, samples] {
      PvmRepresentation rep =
          representation_from_json(load_input(ctx, "--rep", *file));
      CheckOptions options;
      options.tol = ctx.tol;
      options.samples = *samples;
      options.seed = ctx.seed;
      ctx.outcome = violation_report_json(check_representation(rep, options), ctx.tol);
    });
  }
  {
    CLI::App* cmd = group->add_subcommand("compose", "tensor composition");
    cmd->fallthrough();
    auto f1 = std::make_shared<std::string>();
    auto f2 = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--rep1", *f1, "representation for (A, B)")->required();
    cmd->add_option("--rep2", *f2, "representation for (B, C)")->required();
    cmd->add_option("--out", *out, "write the composition here");
    cmd->callback([&ctx, f1, f2, out] {
      PvmRepresentation rep = compose(
          representation_from_json(load_input(ctx, "--rep1", *f1)),
          representation_from_json(load_input(ctx, "--rep2", *f2)));
      ctx.outcome["dimension"] = rep.dimension;
      emit(ctx, *out, "representation", representation_to_json(rep));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "character", "the one-dimensional representation of a homomorphism");
    cmd->fallthrough();
    auto source = std::make_shared<std::string>();
    auto target = std::make_shared<std::string>();
    auto map = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--source", *source, "source structure")->required();
    cmd->add_option("--target", *target, "target structure")->required();
    cmd->add_option("--map", *map, "images as \"b0,b1,...\"")->required();
    cmd->add_option("--out", *out, "write the character here");
    cmd->callback([&ctx, source, target, map, out] {
      PvmRepresentation rep =
          character_of_hom(load_structure(ctx, "--source", *source),
                           load_structure(ctx, "--target", *target),
                           parse_ids(*map));
      ctx.outcome["dimension"] = rep.dimension;
      emit(ctx, *out, "representation", representation_to_json(rep));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "magic-unitary", "representation induced by the 4x4 block magic unitary");
    cmd->fallthrough();
    auto theta = std::make_shared<double>(0.0);
    auto coordinate = std::make_shared<int>(0);
    auto arity = std::make_shared<int>(2);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--theta", *theta, "rotation angle of the second block")
        ->required();
    cmd->add_option("--coordinate", *coordinate, "coordinate the entries depend on");
    cmd->add_option("--arity", *arity, "power exponent of the source");
    cmd->add_option("--out", *out, "write the representation here");
    cmd->callback([&ctx, theta, coordinate, arity, out] {
      MagicUnitary u = block_magic_unitary(*theta);
      PvmRepresentation rep = magic_unitary_rep(u, *coordinate, *arity);
      ctx.outcome["dimension"] = rep.dimension;
      ctx.outcome["n"] = u.n;
      const Mat c = u.at(0, 0) * u.at(2, 2) - u.at(2, 2) * u.at(0, 0);
      ctx.outcome["entry_commutator_norm"] = c.norm();
      emit(ctx, *out, "representation", representation_to_json(rep));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "pi", "the subset projection of a power representation");
    cmd->fallthrough();
    auto file = std::make_shared<std::string>();
    auto subset = std::make_shared<std::string>();
    cmd->add_option("--rep", *file, "representation file")->required();
    cmd->add_option("--subset", *subset, "coordinates as \"0,2\" (empty set when omitted)");
    cmd->callback([&ctx, file, subset] {
      PvmRepresentation rep =
          representation_from_json(load_input(ctx, "--rep", *file));
      std::vector<int> coords;
      for (Elem e : parse_ids(*subset)) coords.push_back(static_cast<int>(e));
      Mat pi = pi_projection(rep, coords);
      ctx.outcome["projection"] = matrix_to_json(pi);
      ctx.outcome["hermitian_residual"] = (pi - pi.adjoint()).norm();
      ctx.outcome["idempotent_residual"] = (pi * pi - pi).norm();
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "grid", "the two-qubit magic square strategy and representation");
    cmd->fallthrough();
    auto rep_out = std::make_shared<std::string>();
    auto strategy_out = std::make_shared<std::string>();
    cmd->add_option("--rep-out", *rep_out, "write the representation here");
    cmd->add_option("--strategy-out", *strategy_out, "write the strategy here");
    cmd->callback([&ctx, rep_out, strategy_out] {
      PvmRepresentation rep = magic_square_two_qubit_rep();
      StrategyRep strategy = magic_square_two_qubit_strategy();
      ctx.outcome["dimension"] = rep.dimension;
      ctx.outcome["max_residual"] = check_representation(rep, {ctx.tol}).max_residual;
      if (!rep_out->empty()) {
        save_json(*rep_out, representation_to_json(rep));
        ctx.outcome["rep_out"] = *rep_out;
        ctx.outcome["rep_digest"] = file_digest(*rep_out);
      }
      if (!strategy_out->empty()) {
        save_json(*strategy_out, strategy_to_json(strategy));
        ctx.outcome["strategy_out"] = *strategy_out;
        ctx.outcome["strategy_digest"] = file_digest(*strategy_out);
      }
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "defect", "weighted defect of a strategy");
    cmd->fallthrough();
    auto flavor = std::make_shared<std::string>();
    auto file = std::make_shared<std::string>();
    auto weights = std::make_shared<std::string>();
    auto pair_weights = std::make_shared<std::string>();
    cmd->add_option("--flavor", *flavor, "assignment, cv, or cc")->required();
    cmd->add_option("--strategy", *file, "strategy file")->required();
    cmd->add_option("--weights", *weights, "constraint weights file");
    cmd->add_option("--pair-weights", *pair_weights, "constraint pair weights file");
    cmd->callback([&ctx, flavor, file, weights, pair_weights] {
      StrategyRep s = strategy_from_json(load_input(ctx, "--strategy", *file));
      DefectReport report;
      if (*flavor == "assignment" || *flavor == "cv") {
        if (!pair_weights->empty()) {
          throw InputError("pair weights only apply to the cc flavor");
        }
        ConstraintWeights w;
        const ConstraintWeights* wp = nullptr;
        if (!weights->empty()) {
          w = constraint_weights_from_json(load_input(ctx, "--weights", *weights),
                                           s.source);
          wp = &w;
        }
        report = *flavor == "assignment" ? defect_assignment(s, wp)
                                         : defect_cv(s, wp);
      } else if (*flavor == "cc") {
        if (!weights->empty()) {
          throw InputError("the cc flavor takes pair weights");
        }
        PairWeights w;
        const PairWeights* wp = nullptr;
        if (!pair_weights->empty()) {
          w = pair_weights_from_json(
              load_input(ctx, "--pair-weights", *pair_weights), s.source);
          wp = &w;
        }
        report = defect_cc(s, wp);
      } else {
        throw InputError("unknown flavor \"" + *flavor + "\"");
      }
      ctx.outcome = defect_report_json(report);
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "commdef", "commutation defect of two variables");
    cmd->fallthrough();
    auto file = std::make_shared<std::string>();
    auto x = std::make_shared<Elem>(0);
    auto y = std::make_shared<Elem>(0);
    cmd->add_option("--strategy", *file, "strategy file")->required();
    cmd->add_option("--x", *x, "first source element")->required();
    cmd->add_option("--y", *y, "second source element")->required();
    cmd->callback([&ctx, file, x, y] {
      StrategyRep s = strategy_from_json(load_input(ctx, "--strategy", *file));
      ctx.outcome = defect_report_json(comm_defect(s, *x, *y));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand(
        "strategy-check", "verify every measurement family of a strategy");
    cmd->fallthrough();
    auto file = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(1e-8);
    cmd->add_option("--strategy", *file, "strategy file")->required();
    cmd->add_option("--pvm-tol", *tol, "PVM tolerance");
    cmd->callback([&ctx, file, tol] {
      StrategyRep s = strategy_from_json(load_input(ctx, "--strategy", *file));
      ctx.outcome = violation_report_json(check_strategy(s, *tol), *tol);
    });
  }
}

// ------------------------------------------------------------------- game ---

void register_game(CLI::App& app, Ctx& ctx) {
  CLI::App* group = app.add_subcommand("game", "nonlocal games of a CSP");
  group->require_subcommand(1);
  group->fallthrough();
  {
    CLI::App* cmd = group->add_subcommand("build", "materialize a game");
    cmd->fallthrough();
    auto kind = std::make_shared<std::string>();
    auto source = std::make_shared<std::string>();
    auto target = std::make_shared<std::string>();
    auto weights = std::make_shared<std::string>();
    auto pair_weights = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--kind", *kind,
                    "assignment, constraint-variable, or constraint-constraint")
        ->required();
    cmd->add_option("--source", *source, "source structure")->required();
    cmd->add_option("--target", *target, "target structure")->required();
    cmd->add_option("--weights", *weights, "constraint weights file");
    cmd->add_option("--pair-weights", *pair_weights, "pair weights file");
    cmd->add_option("--out", *out, "write the game here");
    cmd->callback([&ctx, kind, source, target, weights, pair_weights, out] {
      Game::Kind k;
      if (*kind == "assignment") {
        k = Game::Kind::assignment;
      } else if (*kind == "constraint-variable") {
        k = Game::Kind::constraint_variable;
      } else if (*kind == "constraint-constraint") {
        k = Game::Kind::constraint_constraint;
      } else {
        throw InputError("unknown game kind \"" + *kind + "\"");
      }
      StructurePtr a = load_structure(ctx, "--source", *source);
      StructurePtr b = load_structure(ctx, "--target", *target);
      ConstraintWeights w;
      const ConstraintWeights* wp = nullptr;
      if (!weights->empty()) {
        w = constraint_weights_from_json(load_input(ctx, "--weights", *weights), a);
        wp = &w;
      }
      PairWeights pw;
      const PairWeights* pwp = nullptr;
      if (!pair_weights->empty()) {
        pw = pair_weights_from_json(
            load_input(ctx, "--pair-weights", *pair_weights), a);
        pwp = &pw;
      }
      Game game = build_game(k, a, b, wp, pwp);
      ctx.outcome["synchronous"] = game.synchronous;
      ctx.outcome["alice_questions"] = game.alice_questions.size();
      ctx.outcome["bob_questions"] = game.bob_questions.size();
      ctx.outcome["alice_answers"] = game.alice_answers.size();
      ctx.outcome["bob_answers"] = game.bob_answers.size();
      ctx.outcome["support"] = game.distribution.size();
      emit(ctx, *out, "game", game_to_json(game));
    });
  }
  {
    CLI::App* cmd = group->add_subcommand("value", "classical value of a game");
    cmd->fallthrough();
    auto file = std::make_shared<std::string>();
    auto synchronous = std::make_shared<bool>(false);
    auto budget = std::make_shared<std::uint64_t>(1000000);
    cmd->add_option("--game", *file, "game file")->required();
    cmd->add_flag("--synchronous", *synchronous,
                  "restrict both players to one shared function");
    cmd->add_option("--budget", *budget, "strategies examined before giving up");
    cmd->callback([&ctx, file, synchronous, budget] {
      Game game = game_from_json(load_input(ctx, "--game", *file));
      GameValue result = classical_value(game, *synchronous, {*budget});
      ctx.outcome["value"] = rational_json(result.value);
      ctx.outcome["exact"] = result.exact();
      ctx.outcome["strategies"] = result.strategies;
      ctx.outcome["status"] =
          result.exact() ? "complete" : "budget_exhausted";
      if (!result.exact()) ctx.exit_code = kExitInconclusive;
    });
  }
}

}  // namespace

int main(int argc, char** argv) {
  Ctx ctx;
  {
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) {
      if (i) cmd << ' ';
      cmd << argv[i];
    }
    ctx.command = cmd.str();
  }

  CLI::App app{"algebraic toolkit for constraint systems and their symmetries"};
  app.require_subcommand(1);
  app.add_option("--seed", ctx.seed, "seed for every sampling path");
  app.add_option("--tol", ctx.tol, "residual tolerance");
  app.add_option("--max-cosets", ctx.max_cosets, "coset enumeration limit");
  app.add_option("--node-budget", ctx.node_budget, "homomorphism search budget");
  app.add_option("--threads", ctx.threads, "search threads");

  register_struct(app, ctx);
  register_hom(app, ctx);
  register_poly(app, ctx);
  register_gadget(app, ctx);
  register_group(app, ctx);
  register_rep(app, ctx);
  register_game(app, ctx);

  const auto start = std::chrono::steady_clock::now();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    Json report{{"command", ctx.command}, {"error", e.what()}};
    std::cout << report.dump(2) << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    Json report{{"command", ctx.command}, {"error", e.what()}};
    std::cout << report.dump(2) << '\n';
    return kExitInputError;
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;

  Json report;
  report["command"] = ctx.command;
  report["inputs"] = ctx.inputs;
  report["seed"] = ctx.seed;
  report["outcome"] = ctx.outcome;
  report["wall_time_s"] = elapsed.count();
  std::cout << report.dump(2) << '\n';
  return ctx.exit_code;
}
