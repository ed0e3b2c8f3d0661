// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Reader and writer for the organic SMILES subset: organic-subset atoms,
// bracket atoms, branches, ring closures (incl. %nn), and reaction strings
// "reactants>agents>products". Stereo markers and atom maps are parsed and
// discarded. Hydrogens stay implicit (an atom feature, never a graph node).

#ifndef RXNGRAPH_SMILES_HPP
#define RXNGRAPH_SMILES_HPP

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rxngraph/chem.hpp"
#include "rxngraph/errors.hpp"

namespace rxngraph {

namespace detail {

// Default valence lists; the lowest entry consistent with the bond sum wins.
inline const std::vector<int>* valence_list(const std::string& element) {
  static const std::map<std::string, std::vector<int>> kValences = {
      {"H", {1}},  {"B", {3}},        {"C", {4}},  {"N", {3}},
      {"O", {2}},  {"F", {1}},        {"Si", {4}}, {"P", {3, 5}},
      {"S", {2, 4, 6}},               {"Cl", {1}}, {"Br", {1}},
      {"I", {1}},
  };
  auto it = kValences.find(element);
  return it == kValences.end() ? nullptr : &it->second;
}

// Valence shifted by formal charge, element-group dependent.
inline int charge_adjusted_valence(const std::string& element, int valence,
                                   int charge) {
  if (element == "B") return valence - charge;
  if (element == "C" || element == "Si" || element == "H")
    return valence - std::abs(charge);
  // N, P, O, S, halogens: cations gain a bond, anions lose one.
  return valence + charge;
}

struct PendingAtom {
  Atom atom;
  bool from_bracket = false;
  int explicit_h = 0;       // only meaningful when from_bracket
  std::size_t offset = 0;   // where the atom token started
};

class SmilesParser {
 public:
  explicit SmilesParser(std::string_view text) : s_(text) {}

  MolecularGraph parse() {
    if (s_.empty()) throw ParseError("empty molecule", 0);
    while (pos_ < s_.size()) step();
    finish();
    return mol_;
  }

 private:
  [[noreturn]] void fail(const std::string& why, std::size_t at) const {
    throw ParseError(why, at);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void step() {
    const char c = s_[pos_];
    switch (c) {
      case '(':
        if (prev_ < 0) fail("branch before any atom", pos_);
        stack_.push_back(prev_);
        ++pos_;
        break;
      case ')':
        if (stack_.empty()) fail("unmatched ')'", pos_);
        if (pending_bond_) fail("dangling bond before ')'", pos_);
        prev_ = stack_.back();
        stack_.pop_back();
        ++pos_;
        break;
      case '-': case '=': case '#': case ':': case '/': case '\\':
        if (pending_bond_) fail("two bond symbols in a row", pos_);
        if (prev_ < 0) fail("bond symbol before any atom", pos_);
        pending_bond_ = c;
        pending_bond_pos_ = pos_;
        ++pos_;
        break;
      case '.':
        fail("'.' not allowed inside a molecule fragment", pos_);
      case '%': {
        if (pos_ + 2 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
            !std::isdigit(static_cast<unsigned char>(s_[pos_ + 2])))
          fail("'%' ring closure needs two digits", pos_);
        const int num = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
        ring_closure(num, pos_);
        pos_ += 3;
        break;
      }
      case '[':
        add_atom(parse_bracket_atom());
        break;
      default:
        if (std::isdigit(static_cast<unsigned char>(c))) {
          ring_closure(c - '0', pos_);
          ++pos_;
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
          add_atom(parse_organic_atom());
        } else {
          fail(std::string("unexpected character '") + c + "'", pos_);
        }
    }
  }

  PendingAtom parse_organic_atom() {
    PendingAtom p;
    p.offset = pos_;
    const std::string_view rest = s_.substr(pos_);
    auto take = [&](std::string_view tok, const char* element, bool aromatic) {
      if (rest.substr(0, tok.size()) != tok) return false;
      p.atom.element = element;
      p.atom.aromatic = aromatic;
      pos_ += tok.size();
      return true;
    };
    if (take("Cl", "Cl", false) || take("Br", "Br", false) ||
        take("B", "B", false) || take("C", "C", false) ||
        take("N", "N", false) || take("O", "O", false) ||
        take("P", "P", false) || take("S", "S", false) ||
        take("F", "F", false) || take("I", "I", false) ||
        take("b", "B", true) || take("c", "C", true) ||
        take("n", "N", true) || take("o", "O", true) ||
        take("p", "P", true) || take("s", "S", true))
      return p;
    fail(std::string("unknown atom token '") + s_[pos_] + "'", pos_);
  }

  PendingAtom parse_bracket_atom() {
    PendingAtom p;
    p.offset = pos_;
    p.from_bracket = true;
    const std::size_t open = pos_;
    ++pos_;  // '['

    // Isotope label: parsed and discarded.
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;

    if (pos_ >= s_.size()) fail("unterminated bracket atom", open);
    if (s_[pos_] == '*') fail("wildcard atoms are not supported", pos_);
    if (!std::isalpha(static_cast<unsigned char>(s_[pos_])))
      fail("expected element symbol in bracket", pos_);

    // Element symbol: one letter plus optional lowercase second letter.
    std::string token(1, s_[pos_]);
    ++pos_;
    if (pos_ < s_.size() && std::islower(static_cast<unsigned char>(s_[pos_]))) {
      // A lowercase letter is part of the symbol unless it is a lone 'h'
      // (never valid) -- two-letter symbols like Cl, Br, Se, na are taken whole.
      token += s_[pos_];
      ++pos_;
    }
    const bool aromatic = std::islower(static_cast<unsigned char>(token[0])) != 0;
    token[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
    // 'H' as hcount must not be swallowed into a symbol: [CH4] parses C then H4.
    if (token.size() == 2 && token[1] == 'H' ) {
      // impossible: second letter is lowercase by construction
    }
    p.atom.element = token;
    p.atom.aromatic = aromatic;
    if (aromatic) {
      static const std::array<const char*, 6> kAromaticOk = {"B", "C", "N", "O", "P", "S"};
      bool ok = p.atom.is_other();  // unusual aromatic elements pass through as "other"
      for (const char* e : kAromaticOk) ok = ok || token == e;
      if (!ok) fail("element cannot be aromatic: " + token, p.offset);
    }

    // Chirality: parsed, discarded.
    if (peek() == '@') {
      ++pos_;
      if (peek() == '@') ++pos_;
    }

    // Explicit hydrogen count.
    if (peek() == 'H') {
      ++pos_;
      int h = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        h = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          h = h * 10 + (s_[pos_] - '0');
          ++pos_;
        }
      }
      if (h > 8) fail("hydrogen count above 8", p.offset);
      p.explicit_h = h;
    }

    // Formal charge: '+'/'-' runs or a single signed digit count.
    if (peek() == '+' || peek() == '-') {
      const char sign_char = s_[pos_];
      const int sign = sign_char == '+' ? 1 : -1;
      int count = 0;
      while (peek() == sign_char) {
        ++count;
        ++pos_;
      }
      if (count == 1 && std::isdigit(static_cast<unsigned char>(peek()))) {
        count = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          count = count * 10 + (s_[pos_] - '0');
          ++pos_;
        }
      }
      if (count > 4) fail("formal charge magnitude above 4", p.offset);
      p.atom.formal_charge = sign * count;
    }

    // Atom-map number: parsed, discarded.
    if (peek() == ':') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        fail("atom map ':' needs digits", pos_);
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }

    if (peek() != ']') fail("unsupported bracket content", pos_);
    ++pos_;
    return p;
  }

  void add_atom(const PendingAtom& p) {
    const int idx = mol_.num_atoms();
    mol_.atoms.push_back(p.atom);
    from_bracket_.push_back(p.from_bracket);
    explicit_h_.push_back(p.explicit_h);
    atom_offset_.push_back(p.offset);
    if (prev_ >= 0) make_bond(prev_, idx, consume_pending_bond(), p.offset);
    else if (pending_bond_) fail("dangling bond", pending_bond_pos_);
    prev_ = idx;
  }

  std::optional<char> consume_pending_bond() {
    std::optional<char> b;
    if (pending_bond_) b = *pending_bond_;
    pending_bond_.reset();
    return b;
  }

  BondOrder resolve_order(int u, int v, std::optional<char> symbol,
                          std::size_t at) const {
    if (symbol) {
      switch (*symbol) {
        case '-': return BondOrder::Single;
        case '/': case '\\': return BondOrder::Single;  // stereo discarded
        case '=': return BondOrder::Double;
        case '#': return BondOrder::Triple;
        case ':':
          if (!mol_.atoms[u].aromatic || !mol_.atoms[v].aromatic)
            fail("aromatic bond between non-aromatic atoms", at);
          return BondOrder::Aromatic;
      }
    }
    // Default: aromatic between two aromatic atoms, single otherwise.
    return (mol_.atoms[u].aromatic && mol_.atoms[v].aromatic)
               ? BondOrder::Aromatic
               : BondOrder::Single;
  }

  void make_bond(int u, int v, std::optional<char> symbol, std::size_t at) {
    if (u == v) fail("self bond", at);
    if (mol_.bond_between(u, v)) fail("duplicate bond between atom pair", at);
    Bond b;
    b.u = std::min(u, v);
    b.v = std::max(u, v);
    b.order = resolve_order(u, v, symbol, at);
    mol_.bonds.push_back(b);
  }

  void ring_closure(int num, std::size_t at) {
    if (prev_ < 0) fail("ring closure before any atom", at);
    auto bond = consume_pending_bond();
    auto it = open_rings_.find(num);
    if (it == open_rings_.end()) {
      open_rings_[num] = {prev_, bond, at};
      return;
    }
    const OpenRing open = it->second;
    open_rings_.erase(it);
    std::optional<char> symbol;
    if (open.bond && bond && *open.bond != *bond)
      fail("ring closure bond symbols disagree", at);
    symbol = open.bond ? open.bond : bond;
    make_bond(open.atom, prev_, symbol, at);
  }

  void finish() {
    if (pending_bond_) fail("dangling bond at end of input", pending_bond_pos_);
    if (!stack_.empty()) fail("unclosed '('", s_.size());
    if (!open_rings_.empty())
      fail("unbalanced ring closure " + std::to_string(open_rings_.begin()->first),
           open_rings_.begin()->second.offset);
    if (mol_.atoms.empty()) fail("empty molecule", 0);
    assign_hydrogens();
  }

  void assign_hydrogens() {
    const int n = mol_.num_atoms();
    std::vector<int> bond_sum(n, 0), conn(n, 0);
    for (const Bond& b : mol_.bonds) {
      bond_sum[b.u] += bond_order_units(b.order);
      bond_sum[b.v] += bond_order_units(b.order);
      ++conn[b.u];
      ++conn[b.v];
    }
    for (int i = 0; i < n; ++i) {
      Atom& a = mol_.atoms[i];
      const std::vector<int>* valences = detail::valence_list(a.element);
      if (from_bracket_[i]) {
        a.implicit_h = explicit_h_[i];
        a.radical_electrons = 0;
        if (valences && !a.aromatic) {
          const int occupied = bond_sum[i] + a.implicit_h;
          int chosen = -1;
          for (int v : *valences) {
            const int adj = detail::charge_adjusted_valence(a.element, v, a.formal_charge);
            if (adj >= occupied) {
              chosen = adj;
              break;
            }
          }
          if (chosen < 0)
            fail("valence overflow on bracket atom " + a.element, atom_offset_[i]);
          a.radical_electrons = chosen - occupied;
        }
        continue;
      }
      // Organic-subset atom: infer hydrogens from the lowest consistent valence.
      if (a.aromatic) {
        a.implicit_h = (a.element == "C" && bond_sum[i] == 2) ? 1 : 0;
        a.radical_electrons = 0;
        continue;
      }
      if (!valences) fail("no valence model for " + a.element, atom_offset_[i]);
      int chosen = -1;
      for (int v : *valences) {
        if (v >= bond_sum[i]) {
          chosen = v;
          break;
        }
      }
      if (chosen < 0) fail("valence overflow on atom " + a.element, atom_offset_[i]);
      a.implicit_h = chosen - bond_sum[i];
      a.radical_electrons = 0;
    }
    // Aromatic bonds imply aromatic endpoints; explicit ':' already checked,
    // ring-closure defaults can only produce aromatic when both ends are.
  }

  struct OpenRing {
    int atom;
    std::optional<char> bond;
    std::size_t offset;
  };

  std::string_view s_;
  std::size_t pos_ = 0;
  MolecularGraph mol_;
  std::vector<bool> from_bracket_;
  std::vector<int> explicit_h_;
  std::vector<std::size_t> atom_offset_;
  std::vector<int> stack_;
  int prev_ = -1;
  std::optional<char> pending_bond_;
  std::size_t pending_bond_pos_ = 0;
  std::map<int, OpenRing> open_rings_;
};

}  // namespace detail

inline MolecularGraph parse_molecule(std::string_view smiles) {
  return detail::SmilesParser(smiles).parse();
}

// "reactants>agents>products". Agent molecules are appended to the reactant
// list and flagged; the hypergraph has no third role for them.
inline Reaction parse_reaction(std::string_view smirks) {
  Reaction rxn;
  rxn.source_text = std::string(smirks);

  std::vector<std::size_t> seps;
  for (std::size_t i = 0; i < smirks.size(); ++i)
    if (smirks[i] == '>') seps.push_back(i);
  if (seps.size() != 2)
    throw ParseError("expected exactly two '>' separators, found " +
                         std::to_string(seps.size()),
                     seps.empty() ? smirks.size() : seps.back());

  const std::string_view left = smirks.substr(0, seps[0]);
  const std::string_view agents = smirks.substr(seps[0] + 1, seps[1] - seps[0] - 1);
  const std::string_view right = smirks.substr(seps[1] + 1);
  if (left.empty()) throw ParseError("empty reactant side", 0);
  if (right.empty()) throw ParseError("empty product side", seps[1] + 1);

  int fragment = 0;
  auto parse_side = [&](std::string_view side, std::size_t base,
                        std::vector<MolecularGraph>& out) {
    std::size_t start = 0;
    while (true) {
      std::size_t dot = side.find('.', start);
      const std::string_view frag =
          side.substr(start, dot == std::string_view::npos ? dot : dot - start);
      if (frag.empty())
        throw ParseError("empty molecule fragment", base + start, fragment);
      try {
        out.push_back(parse_molecule(frag));
      } catch (const ParseError& e) {
        throw ParseError::in_fragment(e, fragment, base + start);
      }
      ++fragment;
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
  };

  parse_side(left, 0, rxn.reactants);
  rxn.reactant_is_agent.assign(rxn.reactants.size(), false);
  if (!agents.empty()) {
    std::vector<MolecularGraph> agent_mols;
    parse_side(agents, seps[0] + 1, agent_mols);
    for (auto& m : agent_mols) {
      rxn.reactants.push_back(std::move(m));
      rxn.reactant_is_agent.push_back(true);
    }
  }
  parse_side(right, seps[1] + 1, rxn.products);
  return rxn;
}

namespace detail {

// H count the parser would infer for a plain organic-subset token in this
// bond environment; nullopt when the atom cannot be written without brackets.
inline std::optional<int> inferred_plain_h(const MolecularGraph& m, int idx) {
  const Atom& a = m.atoms[idx];
  if (a.formal_charge != 0 || a.radical_electrons != 0 || a.is_other()) return std::nullopt;
  static const std::array<const char*, 10> kOrganic = {"B", "C", "N", "O", "P",
                                                       "S", "F", "Cl", "Br", "I"};
  bool organic = false;
  for (const char* e : kOrganic) organic = organic || a.element == e;
  if (!organic) return std::nullopt;
  int sum = 0;
  for (const auto& [nbr, order] : m.neighbors(idx)) {
    (void)nbr;
    sum += bond_order_units(order);
  }
  if (a.aromatic) {
    static const std::array<const char*, 6> kAromaticOk = {"B", "C", "N", "O", "P", "S"};
    bool ok = false;
    for (const char* e : kAromaticOk) ok = ok || a.element == e;
    if (!ok) return std::nullopt;
    return (a.element == "C" && sum == 2) ? 1 : 0;
  }
  const std::vector<int>* valences = valence_list(a.element);
  for (int v : *valences)
    if (v >= sum) return v - sum;
  return std::nullopt;
}

inline std::string atom_token(const MolecularGraph& m, int idx) {
  const Atom& a = m.atoms[idx];
  auto plain_h = inferred_plain_h(m, idx);
  std::string sym = a.element;
  if (a.aromatic) {
    for (char& c : sym) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (plain_h && *plain_h == a.implicit_h) return sym;
  // Bracket form: element, H count, charge. Radicals re-derive from valence.
  std::string out = "[" + sym;
  if (a.implicit_h == 1) out += "H";
  else if (a.implicit_h > 1) out += "H" + std::to_string(a.implicit_h);
  if (a.formal_charge != 0) {
    out += a.formal_charge > 0 ? '+' : '-';
    if (std::abs(a.formal_charge) > 1) out += std::to_string(std::abs(a.formal_charge));
  }
  out += "]";
  return out;
}

inline std::string bond_token(const MolecularGraph& m, int u, int v, BondOrder o) {
  const bool both_aromatic = m.atoms[u].aromatic && m.atoms[v].aromatic;
  switch (o) {
    case BondOrder::Single: return both_aromatic ? "-" : "";
    case BondOrder::Aromatic: return "";  // default between aromatic atoms
    case BondOrder::Double: return "=";
    case BondOrder::Triple: return "#";
  }
  return "";
}

}  // namespace detail

// Serializes to a SMILES string that re-parses to an isomorphic graph.
// No canonicalization: the traversal order is whatever DFS from atom 0 gives.
inline std::string write_molecule(const MolecularGraph& mol) {
  if (mol.atoms.empty()) throw InputError("write_molecule: empty molecule");
  const int n = mol.num_atoms();

  // Ring-closure digits for non-tree edges, discovered by DFS.
  std::vector<bool> visited(n, false);
  std::vector<std::vector<std::pair<int, BondOrder>>> tree_children(n);
  std::map<std::pair<int, int>, BondOrder> back_edges;  // (u,v) discovery order
  std::vector<std::pair<int, int>> order_stack;

  // Iterative DFS keeping child order deterministic (neighbor list order).
  std::vector<int> parent(n, -1);
  std::vector<int> dfs_stack = {0};
  visited[0] = true;
  std::vector<int> visit_order;
  while (!dfs_stack.empty()) {
    const int u = dfs_stack.back();
    dfs_stack.pop_back();
    visit_order.push_back(u);
    auto nbrs = mol.neighbors(u);
    // push in reverse so the first neighbor is visited first
    for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {
      const auto [v, ord] = *it;
      if (!visited[v]) {
        visited[v] = true;
        parent[v] = u;
        tree_children[u].emplace_back(v, ord);
        dfs_stack.push_back(v);
      } else if (v != parent[u]) {
        const auto key = std::minmax(u, v);
        back_edges.try_emplace({key.first, key.second}, ord);
      }
    }
  }
  for (bool v : visited)
    if (!v) throw InputError("write_molecule: molecule is not connected");

  // Assign ring numbers per atom.
  std::map<std::pair<int, int>, int> ring_no;
  int next_ring = 1;
  std::vector<std::vector<std::pair<int, int>>> ring_marks(n);  // atom -> (number, other)
  for (const auto& [edge, ord] : back_edges) {
    (void)ord;
    if (next_ring > 99) throw InputError("write_molecule: too many rings");
    ring_no[edge] = next_ring;
    ring_marks[edge.first].emplace_back(next_ring, edge.second);
    ring_marks[edge.second].emplace_back(next_ring, edge.first);
    ++next_ring;
  }

  std::string out;
  // Recursive emit via explicit lambda recursion.
  auto emit = [&](auto&& self, int u) -> void {
    out += detail::atom_token(mol, u);
    for (const auto& [num, other] : ring_marks[u]) {
      const auto key = std::minmax(u, other);
      out += detail::bond_token(mol, key.first, key.second,
                                back_edges.at({key.first, key.second}));
      if (num > 9) out += "%";
      out += std::to_string(num);
    }
    const auto& kids = tree_children[u];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const auto [v, ord] = kids[i];
      const bool last = i + 1 == kids.size();
      if (!last) out += "(";
      out += detail::bond_token(mol, u, v, ord);
      self(self, v);
      if (!last) out += ")";
    }
  };
  emit(emit, 0);
  return out;
}

}  // namespace rxngraph

#endif  // RXNGRAPH_SMILES_HPP
