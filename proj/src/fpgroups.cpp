#include "qhom/fpgroups.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "qhom/util.hpp"

namespace qhom {

Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

Word commutator_word(const Word& u, const Word& v) {
  Word out = u;
  out.insert(out.end(), v.begin(), v.end());
  Word ui = inverse_word(u), vi = inverse_word(v);
  out.insert(out.end(), ui.begin(), ui.end());
  out.insert(out.end(), vi.begin(), vi.end());
  return out;
}

int GroupPresentation::generator_index(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == name) return static_cast<int>(i);
  return -1;
}

std::size_t GroupPresentation::letter_count() const {
  std::size_t n = 0;
  for (const Word& w : relators) n += w.size();
  return n;
}

std::string word_to_string(const Word& w, const GroupPresentation& g) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int idx = std::abs(w[i]) - 1;
    if (idx < 0 || idx >= static_cast<int>(g.generators.size()))
      throw InputError("word: letter outside the generator range");
    if (i) out += ' ';
    out += g.generators[idx];
    if (w[i] < 0) out += "^-1";
  }
  return out;
}

namespace {

class WordParser {
 public:
  WordParser(const GroupPresentation& g, const std::string& text) : g_(g), text_(text) {
    // longest-first so that e.g. "x12" is never read as "x1" "2"
    order_.resize(g_.generators.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      return g_.generators[a].size() > g_.generators[b].size();
    });
  }

  Word parse() {
    Word w = sequence(0);
    skip_space();
    if (pos_ != text_.size())
      throw InputError("word: unexpected character at offset " + std::to_string(pos_));
    return w;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool lookahead(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  // depth > 0 means we are inside brackets and stop at ',' ']' ')'
  Word sequence(int depth) {
    Word out;
    for (;;) {
      skip_space();
      if (pos_ == text_.size()) break;
      char c = text_[pos_];
      if (depth > 0 && (c == ',' || c == ']' || c == ')')) break;
      Word f = factor(depth);
      out.insert(out.end(), f.begin(), f.end());
    }
    return out;
  }

  Word factor(int depth) {
    skip_space();
    Word base;
    if (text_[pos_] == '[') {
      ++pos_;
      Word u = sequence(depth + 1);
      if (!lookahead(',')) throw InputError("word: expected ',' in commutator");
      ++pos_;
      Word v = sequence(depth + 1);
      if (!lookahead(']')) throw InputError("word: expected ']' in commutator");
      ++pos_;
      base = commutator_word(u, v);
    } else if (text_[pos_] == '(' && !starts_generator()) {
      ++pos_;
      base = sequence(depth + 1);
      if (!lookahead(')')) throw InputError("word: expected ')'");
      ++pos_;
    } else {
      int gen = match_generator();
      if (gen < 0)
        throw InputError("word: no generator matches at offset " + std::to_string(pos_));
      base = {gen + 1};
    }
    return power(base);
  }

  bool starts_generator() {
    for (int idx : order_)
      if (text_.compare(pos_, g_.generators[idx].size(), g_.generators[idx]) == 0) return true;
    return false;
  }

  int match_generator() {
    for (int idx : order_) {
      const std::string& name = g_.generators[idx];
      if (text_.compare(pos_, name.size(), name) == 0) {
        pos_ += name.size();
        return idx;
      }
    }
    return -1;
  }

  Word power(Word base) {
    skip_space();
    if (pos_ == text_.size() || text_[pos_] != '^') return base;
    ++pos_;
    skip_space();
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    if (pos_ == text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw InputError("word: expected exponent digits");
    long long e = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      e = e * 10 + (text_[pos_] - '0');
      if (e > 1000000) throw InputError("word: exponent too large");
      ++pos_;
    }
    Word unit = neg ? inverse_word(base) : base;
    Word out;
    for (long long i = 0; i < e; ++i) out.insert(out.end(), unit.begin(), unit.end());
    return out;
  }

  const GroupPresentation& g_;
  const std::string& text_;
  std::size_t pos_ = 0;
  std::vector<int> order_;
};

}  // namespace

Word parse_word(const GroupPresentation& g, const std::string& expr) {
  return WordParser(g, expr).parse();
}

SolutionGroupMap solution_group(const StructurePtr& a, bool homogeneous) {
  if (!a) throw InputError("solution group: null structure");
  if (!a->is_linear()) throw InputError("solution group: structure is not linear");
  if (homogeneous && !a->is_homogeneous())
    throw InputError("solution group: homogeneous mode needs a homogeneous structure");
  if (a->is_lazy()) throw InputError("solution group: structure must be explicit");

  SolutionGroupMap out;
  GroupPresentation& g = out.group;
  out.generator_of.resize(a->domain_size());
  for (Elem e = 0; e < a->domain_size(); ++e) {
    out.generator_of[e] = static_cast<int>(g.generators.size());
    g.generators.push_back("x" + a->label(e));
  }
  if (!homogeneous) {
    out.j_generator = static_cast<int>(g.generators.size());
    g.generators.push_back("J");
  }

  std::set<Word> seen;
  auto push = [&](Word w) {
    if (seen.insert(w).second) g.relators.push_back(std::move(w));
  };
  auto letter = [&](int gen) { return gen + 1; };

  for (Elem e = 0; e < a->domain_size(); ++e)
    push({letter(out.generator_of[e]), letter(out.generator_of[e])});
  if (!homogeneous) {
    push({letter(out.j_generator), letter(out.j_generator)});
    for (Elem e = 0; e < a->domain_size(); ++e)
      push(commutator_word({letter(out.generator_of[e])}, {letter(out.j_generator)}));
  }

  for (std::size_t s = 0; s < a->signature().size(); ++s) {
    if (a->tuple_count(static_cast<int>(s)) == 0) continue;
    int rhs = 0, arity = 0;
    parse_lr_name(a->signature()[s].name, rhs, arity);
    for (const Tuple& t : a->explicit_relation(static_cast<int>(s)).tuples()) {
      Word product;
      for (Elem e : t) product.push_back(letter(out.generator_of[e]));
      if (rhs == 1) product.push_back(-letter(out.j_generator));
      push(std::move(product));
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j) {
          if (t[i] == t[j]) continue;
          Elem lo = std::min(t[i], t[j]), hi = std::max(t[i], t[j]);
          push(commutator_word({letter(out.generator_of[lo])}, {letter(out.generator_of[hi])}));
        }
    }
  }
  return out;
}

GroupPresentation combine(const GroupPresentation& g1, const GroupPresentation& g2,
                          const std::vector<std::pair<Word, Word>>& amalgamations) {
  GroupPresentation out;
  out.generators = g1.generators;
  std::set<std::string> used(out.generators.begin(), out.generators.end());
  for (const std::string& name : g2.generators) {
    std::string pick = name;
    while (used.count(pick)) pick += "'";
    used.insert(pick);
    out.generators.push_back(pick);
  }
  int shift = static_cast<int>(g1.generators.size());
  auto shifted = [&](const Word& w) {
    Word s;
    s.reserve(w.size());
    for (int l : w) s.push_back(l > 0 ? l + shift : l - shift);
    return s;
  };

  out.relators = g1.relators;
  for (const Word& w : g2.relators) out.relators.push_back(shifted(w));
  for (const auto& [u, v] : amalgamations) {
    Word rel = inverse_word(u);
    Word sv = shifted(v);
    rel.insert(rel.end(), sv.begin(), sv.end());
    out.relators.push_back(std::move(rel));
  }
  return out;
}

GroupPresentation quotient_by_normal_closure(const GroupPresentation& g,
                                             const std::vector<Word>& extra_relators) {
  GroupPresentation out = g;
  for (const Word& w : extra_relators) {
    for (int l : w)
      if (l == 0 || std::abs(l) > static_cast<int>(g.generators.size()))
        throw InputError("quotient: relator letter outside the generator range");
    out.relators.push_back(w);
  }
  return out;
}

}  // namespace qhom
