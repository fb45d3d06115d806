#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simpkit/chains.hpp"
#include "simpkit/simpset.hpp"

namespace simpkit {

// Freely reduced word in generators 0..n-1; letters are (generator, +1 | -1).
class GroupWord {
 public:
  using Letter = std::pair<int, int>;

  GroupWord() = default;
  explicit GroupWord(std::vector<Letter> letters) {
    for (const auto& l : letters) push(l);
  }
  static GroupWord letter(int g, int exponent = 1) {
    if (exponent != 1 && exponent != -1) throw std::invalid_argument("letter exponent must be +1 or -1");
    return GroupWord({{g, exponent}});
  }
  static GroupWord power(int g, long e) {
    GroupWord w;
    for (long k = 0; k < (e < 0 ? -e : e); ++k) w.push({g, e < 0 ? -1 : 1});
    return w;
  }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t length() const { return letters_.size(); }

  GroupWord inverse() const {
    GroupWord w;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back({it->first, -it->second});
    return w;
  }
  friend GroupWord operator*(GroupWord a, const GroupWord& b) {
    for (const auto& l : b.letters_) a.push(l);
    return a;
  }
  bool operator==(const GroupWord&) const = default;

  // Conjugate to a cyclically reduced word.
  GroupWord cyclically_reduced() const {
    std::size_t lo = 0, hi = letters_.size();
    while (hi - lo >= 2 && letters_[lo].first == letters_[hi - 1].first && letters_[lo].second == -letters_[hi - 1].second)
      ++lo, --hi;
    GroupWord w;
    w.letters_.assign(letters_.begin() + static_cast<long>(lo), letters_.begin() + static_cast<long>(hi));
    return w;
  }

  std::vector<Int> exponent_sum(int generators) const {
    std::vector<Int> v(generators);
    for (const auto& [g, e] : letters_) {
      if (g < 0 || g >= generators) throw std::out_of_range("letter outside the generator set");
      v[g] += e;
    }
    return v;
  }

  // Homomorphic extension of generator images.
  template <class Image>
  GroupWord substitute(Image&& image) const {
    GroupWord w;
    for (const auto& [g, e] : letters_) w = w * (e > 0 ? image(g) : image(g).inverse());
    return w;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (letters_.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < letters_.size();) {
      std::size_t j = i;
      while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
      long e = static_cast<long>(j - i) * letters_[i].second;
      if (!s.empty()) s += " ";
      s += names.at(letters_[i].first);
      if (e != 1) s += "^" + std::to_string(e);
      i = j;
    }
    return s;
  }

 private:
  void push(const Letter& l) {
    if (!letters_.empty() && letters_.back().first == l.first && letters_.back().second == -l.second)
      letters_.pop_back();
    else
      letters_.push_back(l);
  }
  std::vector<Letter> letters_;
};

// Membership of x in the column lattice of r.
inline bool in_lattice(const IntMatrix& r, const std::vector<Int>& x) {
  if (static_cast<int>(x.size()) != r.rows()) throw std::invalid_argument("in_lattice: size mismatch");
  SmithForm s = smith_normal_form(r);
  for (int i = 0; i < r.rows(); ++i) {
    Int ux = 0;
    for (int j = 0; j < r.rows(); ++j) ux += s.U(i, j) * x[j];
    if (i < s.rank ? ux % s.D(i, i) != 0 : ux != 0) return false;
  }
  return true;
}

// Degreewise presented simplicial group, explicit in degrees 0..max_degree.
// Abelian presentations carry integer images (columns) and integer relators instead of words.
class SimplicialGroupPresentation {
 public:
  struct Level {
    std::vector<std::string> generators;
    std::vector<GroupWord> relators;
    std::vector<std::vector<GroupWord>> face;        // face[i][g], i = 0..n, absent in degree 0
    std::vector<std::vector<GroupWord>> degeneracy;  // degeneracy[i][g] in degree n+1, absent at the top
    IntMatrix relations{0, 0};                      // abelian: generators x relators
    std::vector<IntMatrix> face_matrix;              // abelian: face_matrix[i] of shape |G_{n-1}| x |G_n|
    std::vector<IntMatrix> degeneracy_matrix;        // abelian: |G_{n+1}| x |G_n|
  };

  SimplicialGroupPresentation(bool abelian, std::vector<Level> levels) : abelian_(abelian), levels_(std::move(levels)) {
    if (levels_.empty()) throw std::invalid_argument("presentation needs at least degree 0");
    for (int n = 0; n <= max_degree(); ++n) shape_check(n);
  }

  bool abelian() const { return abelian_; }
  int max_degree() const { return static_cast<int>(levels_.size()) - 1; }
  const Level& level(int n) const {
    if (n < 0 || n > max_degree())
      throw std::out_of_range("degree " + std::to_string(n) + " is beyond the truncation depth " +
                              std::to_string(max_degree()));
    return levels_[n];
  }
  int rank(int n) const { return static_cast<int>(level(n).generators.size()); }

  GroupWord face(int n, int i, const GroupWord& w) const {
    return w.substitute([&](int g) { return level(n).face.at(i).at(g); });
  }
  GroupWord degeneracy(int n, int i, const GroupWord& w) const {
    return w.substitute([&](int g) { return level(n).degeneracy.at(i).at(g); });
  }
  std::vector<Int> face(int n, int i, const std::vector<Int>& x) const { return apply(level(n).face_matrix.at(i), x); }
  std::vector<Int> degeneracy(int n, int i, const std::vector<Int>& x) const {
    return apply(level(n).degeneracy_matrix.at(i), x);
  }

  // Exhaustive check of the simplicial identities on generators, and that relators map to relators.
  // Word presentations with relators are compared as reduced words, which is sufficient but not necessary.
  void validate() const {
    auto fail = [](const std::string& rule, int n, int g) {
      throw std::logic_error("simplicial identity " + rule + " fails on generator " + std::to_string(g) +
                             " in degree " + std::to_string(n));
    };
    for (int n = 0; n <= max_degree(); ++n) {
      const bool up = n + 1 <= max_degree(), up2 = n + 2 <= max_degree();
      for (int g = 0; g < rank(n); ++g) {
        if (abelian_) {
          std::vector<Int> x(rank(n));
          x[g] = 1;
          auto same = [&](int m, const std::vector<Int>& a, const std::vector<Int>& b) {
            std::vector<Int> diff(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) diff[k] = a[k] - b[k];
            return in_lattice(level(m).relations, diff);
          };
          for (int j = 0; j <= n && n >= 2; ++j)
            for (int i = 0; i < j; ++i)
              if (!same(n - 2, face(n - 1, i, face(n, j, x)), face(n - 1, j - 1, face(n, i, x)))) fail("d_i d_j", n, g);
          for (int j = 0; j <= n && up; ++j) {
            auto sj = degeneracy(n, j, x);
            for (int i = 0; i <= n + 1; ++i) {
              std::vector<Int> rhs = i < j ? degeneracy(n - 1, j - 1, face(n, i, x))
                                     : i <= j + 1 ? x
                                                  : degeneracy(n - 1, j, face(n, i - 1, x));
              if (!same(n, face(n + 1, i, sj), rhs)) fail("d_i s_j", n, g);
            }
            for (int i = 0; i <= j && up2; ++i)
              if (!same(n + 2, degeneracy(n + 1, i, sj), degeneracy(n + 1, j + 1, degeneracy(n, i, x))))
                fail("s_i s_j", n, g);
          }
        } else {
          GroupWord x = GroupWord::letter(g);
          for (int j = 0; j <= n && n >= 2; ++j)
            for (int i = 0; i < j; ++i)
              if (face(n - 1, i, face(n, j, x)) != face(n - 1, j - 1, face(n, i, x))) fail("d_i d_j", n, g);
          for (int j = 0; j <= n && up; ++j) {
            GroupWord sj = degeneracy(n, j, x);
            for (int i = 0; i <= n + 1; ++i) {
              GroupWord rhs = i < j ? degeneracy(n - 1, j - 1, face(n, i, x))
                              : i <= j + 1 ? x
                                           : degeneracy(n - 1, j, face(n, i - 1, x));
              if (face(n + 1, i, sj) != rhs) fail("d_i s_j", n, g);
            }
            for (int i = 0; i <= j && up2; ++i)
              if (degeneracy(n + 1, i, sj) != degeneracy(n + 1, j + 1, degeneracy(n, i, x))) fail("s_i s_j", n, g);
          }
        }
      }
      if (abelian_) {
        const IntMatrix& r = level(n).relations;
        for (int c = 0; c < r.cols(); ++c) {
          for (int i = 0; i <= n && n >= 1; ++i)
            if (!in_lattice(level(n - 1).relations, face(n, i, r.column(c)))) fail("relator preservation d_i", n, c);
          for (int i = 0; i <= n && up; ++i)
            if (!in_lattice(level(n + 1).relations, degeneracy(n, i, r.column(c)))) fail("relator preservation s_i", n, c);
        }
      }
    }
  }

 private:
  static std::vector<Int> apply(const IntMatrix& m, const std::vector<Int>& x) {
    if (static_cast<int>(x.size()) != m.cols()) throw std::invalid_argument("vector has the wrong rank");
    std::vector<Int> y(m.rows());
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) y[r] += m(r, c) * x[c];
    return y;
  }

  void shape_check(int n) const {
    const Level& l = levels_[n];
    const int g = static_cast<int>(l.generators.size());
    auto bad = [&](const std::string& what) {
      throw std::invalid_argument("degree " + std::to_string(n) + ": " + what);
    };
    const std::size_t faces = n == 0 ? 0 : n + 1, degens = n < max_degree() ? n + 1 : 0;
    if (abelian_) {
      if (l.relations.rows() != g) bad("relation matrix has the wrong number of rows");
      if (l.face_matrix.size() != faces || l.degeneracy_matrix.size() != degens) bad("wrong number of structure maps");
      for (const auto& m : l.face_matrix)
        if (m.cols() != g || m.rows() != static_cast<int>(levels_[n - 1].generators.size())) bad("face matrix shape");
      for (const auto& m : l.degeneracy_matrix)
        if (m.cols() != g || m.rows() != static_cast<int>(levels_[n + 1].generators.size())) bad("degeneracy matrix shape");
    } else {
      if (l.face.size() != faces || l.degeneracy.size() != degens) bad("wrong number of structure maps");
      auto check = [&](const std::vector<std::vector<GroupWord>>& maps, int target) {
        for (const auto& images : maps) {
          if (static_cast<int>(images.size()) != g) bad("structure map misses generators");
          for (const auto& w : images)
            for (const auto& [x, e] : w.letters())
              if (x < 0 || x >= static_cast<int>(levels_[target].generators.size())) bad("image uses unknown generator");
        }
      };
      if (n > 0) check(l.face, n - 1);
      if (n < max_degree()) check(l.degeneracy, n + 1);
      for (const auto& r : l.relators)
        for (const auto& [x, e] : r.letters())
          if (x < 0 || x >= g) bad("relator uses unknown generator");
    }
  }

  bool abelian_;
  std::vector<Level> levels_;
};

// Exponent sums replace words; relators become relation columns.
inline SimplicialGroupPresentation abelianize(const SimplicialGroupPresentation& p) {
  if (p.abelian()) return p;
  std::vector<SimplicialGroupPresentation::Level> levels;
  for (int n = 0; n <= p.max_degree(); ++n) {
    const auto& src = p.level(n);
    SimplicialGroupPresentation::Level l;
    l.generators = src.generators;
    const int g = p.rank(n);
    std::vector<std::vector<Int>> cols;
    for (const auto& r : src.relators) cols.push_back(r.exponent_sum(g));
    l.relations = IntMatrix::from_columns(g, cols);
    auto matrix = [&](const std::vector<GroupWord>& images, int target) {
      std::vector<std::vector<Int>> c;
      for (const auto& w : images) c.push_back(w.exponent_sum(target));
      return IntMatrix::from_columns(target, c);
    };
    for (const auto& images : src.face) l.face_matrix.push_back(matrix(images, p.rank(n - 1)));
    for (const auto& images : src.degeneracy) l.degeneracy_matrix.push_back(matrix(images, p.rank(n + 1)));
    levels.push_back(std::move(l));
  }
  return SimplicialGroupPresentation(true, std::move(levels));
}

// Constant simplicial group Z/N (N = 0 gives Z, N = 1 the trivial group) through max_degree.
inline SimplicialGroupPresentation constant_cyclic(long order, int max_degree) {
  if (order < 0) throw std::invalid_argument("cyclic order must be nonnegative");
  std::vector<SimplicialGroupPresentation::Level> levels;
  for (int n = 0; n <= max_degree; ++n) {
    SimplicialGroupPresentation::Level l;
    l.generators = {"g"};
    l.relations = order == 0 ? IntMatrix(1, 0) : IntMatrix{{order}};
    l.face_matrix.assign(n == 0 ? 0 : n + 1, IntMatrix::identity(1));
    l.degeneracy_matrix.assign(n < max_degree ? n + 1 : 0, IntMatrix::identity(1));
    levels.push_back(std::move(l));
  }
  return SimplicialGroupPresentation(true, std::move(levels));
}

inline SimplicialGroupPresentation zero_group(int max_degree) {
  std::vector<SimplicialGroupPresentation::Level> levels;
  for (int n = 0; n <= max_degree; ++n) {
    SimplicialGroupPresentation::Level l;
    l.face_matrix.assign(n == 0 ? 0 : n + 1, IntMatrix(0, 0));
    l.degeneracy_matrix.assign(n < max_degree ? n + 1 : 0, IntMatrix(0, 0));
    levels.push_back(std::move(l));
  }
  return SimplicialGroupPresentation(true, std::move(levels));
}

// Spanning tree of the 1-skeleton, as simplex indices of the edges.
struct MaximalTree {
  int root = -1;
  std::vector<int> edges;
  bool contains(int simplex) const { return std::find(edges.begin(), edges.end(), simplex) != edges.end(); }
};

namespace detail {

inline std::pair<int, int> edge_ends(const FinSimplicialSet& k, int e) {
  const auto& s = k.simplex(e);
  return {s.faces[1].base, s.faces[0].base};
}

inline void check_tree(const FinSimplicialSet& k, const MaximalTree& t) {
  const auto& vertices = k.nondegenerate(0);
  if (t.root < 0 || t.root >= static_cast<int>(k.simplices().size()) || k.simplex(t.root).dim != 0)
    throw std::invalid_argument("tree root is not a vertex");
  if (t.edges.size() + 1 != vertices.size()) throw std::invalid_argument("tree does not span every vertex exactly once");
  std::map<int, std::vector<int>> adj;
  for (int e : t.edges) {
    if (e < 0 || e >= static_cast<int>(k.simplices().size()) || k.simplex(e).dim != 1)
      throw std::invalid_argument("tree edge is not an edge of the simplicial set");
    auto [a, b] = edge_ends(k, e);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> seen{t.root}, queue{t.root};
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    for (int w : adj[v])
      if (std::find(seen.begin(), seen.end(), w) == seen.end()) seen.push_back(w), queue.push_back(w);
  }
  if (seen.size() != vertices.size()) throw std::invalid_argument("tree is not connected");
}

}  // namespace detail

// Breadth-first spanning tree from x0, visiting vertices and edges in storage order.
inline MaximalTree maximal_tree(const FinSimplicialSet& k, const std::string& x0) {
  int root = k.find(x0);
  if (k.simplex(root).dim != 0) throw std::invalid_argument("basepoint '" + x0 + "' is not a vertex");
  MaximalTree t{root, {}};
  std::map<int, bool> reached{{root, true}};
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : k.nondegenerate(1)) {
      auto [a, b] = detail::edge_ends(k, e);
      int other = a == v ? b : b == v ? a : -1;
      if (other < 0 || reached[other]) continue;
      reached[other] = true;
      t.edges.push_back(e);
      queue.push_back(other);
    }
  }
  for (int v : k.nondegenerate(0))
    if (!reached[v])
      throw std::invalid_argument("simplicial set is not connected: vertex '" + k.simplex(v).id +
                                  "' is unreachable from '" + x0 + "'");
  return t;
}

// Kan loop group in degrees 0..depth: generators are the (n+1)-cells outside s_0 and the tree.
inline SimplicialGroupPresentation loop_group(const FinSimplicialSet& k, const MaximalTree& tree, int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  if (depth + 1 > k.max_degree())
    throw std::invalid_argument("loop group to depth " + std::to_string(depth) + " needs max_degree >= " +
                                std::to_string(depth + 1));
  detail::check_tree(k, tree);
  std::vector<std::map<Cell, int>> index(depth + 1);
  std::vector<SimplicialGroupPresentation::Level> levels(depth + 1);
  for (int n = 0; n <= depth; ++n)
    for (const Cell& c : k.cells(n + 1)) {
      if (c.eta[1] == 0 || tree.contains(c.base)) continue;
      index[n].emplace(c, static_cast<int>(levels[n].generators.size()));
      levels[n].generators.push_back(k.describe(c));
    }
  auto word = [&](int n, const Cell& c) {
    auto it = index[n].find(c);
    if (it != index[n].end()) return GroupWord::letter(it->second);
    if (c.eta[1] != 0 && !tree.contains(c.base)) throw std::logic_error("cell missing from the loop group basis");
    return GroupWord();
  };
  for (int n = 0; n <= depth; ++n) {
    auto& l = levels[n];
    std::vector<Cell> gens(l.generators.size());
    for (const auto& [c, g] : index[n]) gens[g] = c;
    if (n > 0) {
      l.face.assign(n + 1, {});
      for (const Cell& c : gens) {
        l.face[0].push_back(word(n - 1, k.face(c, 1)) * word(n - 1, k.face(c, 0)).inverse());
        for (int i = 1; i <= n; ++i) l.face[i].push_back(word(n - 1, k.face(c, i + 1)));
      }
    }
    if (n < depth) {
      l.degeneracy.assign(n + 1, {});
      for (const Cell& c : gens)
        for (int i = 0; i <= n; ++i) l.degeneracy[i].push_back(word(n + 1, degenerate(c, i + 1)));
    }
  }
  return SimplicialGroupPresentation(false, std::move(levels));
}

inline SimplicialGroupPresentation loop_group(const FinSimplicialSet& k, const std::string& x0, int depth) {
  return loop_group(k, maximal_tree(k, x0), depth);
}

// Finitely presented group after Tietze elimination, with its abelianization.
struct GroupSummary {
  bool abelian = false;
  std::vector<std::string> generators;
  std::vector<GroupWord> relators;
  HomologyGroup abelianization;

  bool trivial() const { return abelian ? abelianization.trivial() : generators.empty(); }
  std::optional<int> free_rank() const {
    if (abelian) return std::nullopt;
    return relators.empty() ? std::optional<int>(static_cast<int>(generators.size())) : std::nullopt;
  }
  std::string str() const {
    if (abelian || trivial()) return abelianization.str();
    if (relators.empty()) return generators.size() == 1 ? "Z" : "F" + std::to_string(generators.size());
    std::string s = "<";
    for (std::size_t i = 0; i < generators.size(); ++i) s += (i ? ", " : "") + generators[i];
    s += " |";
    for (std::size_t i = 0; i < relators.size(); ++i) s += (i ? ", " : " ") + relators[i].str(generators);
    return s + ">";
  }
};

namespace detail {

inline HomologyGroup abelian_quotient(int generators, const IntMatrix& relations) {
  SmithForm s = smith_normal_form(relations);
  return {generators - s.rank, invariant_factors_above_one(s)};
}

// Removes generators that occur exactly once in some relator.
inline void tietze(std::vector<std::string>& gens, std::vector<GroupWord>& rels) {
  for (bool progress = true; progress;) {
    progress = false;
    std::vector<GroupWord> kept;
    for (auto& r : rels) {
      GroupWord c = r.cyclically_reduced();
      if (!c.empty() && std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
    }
    rels = std::move(kept);
    for (std::size_t ri = 0; ri < rels.size() && !progress; ++ri) {
      const auto& letters = rels[ri].letters();
      for (std::size_t pos = 0; pos < letters.size(); ++pos) {
        int x = letters[pos].first;
        if (std::count_if(letters.begin(), letters.end(), [&](const auto& l) { return l.first == x; }) != 1) continue;
        // r = u x^e v, so x^e = u^-1 v^-1 = (v u)^-1.
        std::vector<GroupWord::Letter> vu(letters.begin() + static_cast<long>(pos) + 1, letters.end());
        vu.insert(vu.end(), letters.begin(), letters.begin() + static_cast<long>(pos));
        GroupWord value = GroupWord(vu).inverse();
        if (letters[pos].second < 0) value = value.inverse();
        auto shift = [x](int g) { return GroupWord::letter(g > x ? g - 1 : g); };
        value = value.substitute(shift);
        std::vector<GroupWord> next;
        for (std::size_t rj = 0; rj < rels.size(); ++rj)
          if (rj != ri) next.push_back(rels[rj].substitute([&](int g) { return g == x ? value : shift(g); }));
        rels = std::move(next);
        gens.erase(gens.begin() + x);
        progress = true;
        break;
      }
    }
  }
}

}  // namespace detail

// Coequalizer of d_0, d_1 : P_1 -> P_0 in groups.
inline GroupSummary pi0_of_group(const SimplicialGroupPresentation& p) {
  if (p.max_degree() < 1) throw std::invalid_argument("pi_0 needs degrees 0 and 1");
  GroupSummary out;
  out.abelian = p.abelian();
  const int g = p.rank(0);
  if (p.abelian()) {
    const auto& l0 = p.level(0);
    const auto& l1 = p.level(1);
    IntMatrix rel = IntMatrix::hcat(l0.relations, l1.face_matrix[0] + (-l1.face_matrix[1]));
    out.generators = l0.generators;
    out.abelianization = detail::abelian_quotient(g, rel);
    return out;
  }
  out.generators = p.level(0).generators;
  out.relators = p.level(0).relators;
  for (int x = 0; x < p.rank(1); ++x)
    out.relators.push_back(p.level(1).face[0][x] * p.level(1).face[1][x].inverse());
  std::vector<std::vector<Int>> cols;
  for (const auto& r : out.relators) cols.push_back(r.exponent_sum(g));
  out.abelianization = detail::abelian_quotient(g, IntMatrix::from_columns(g, cols));
  detail::tietze(out.generators, out.relators);
  return out;
}

namespace detail {

// Alternating face sum P_n -> P_{n-1} on generators.
inline IntMatrix alternating_boundary(const SimplicialGroupPresentation& p, int n) {
  IntMatrix d(n == 0 ? 0 : p.rank(n - 1), p.rank(n));
  for (int i = 0; i <= n && n > 0; ++i) d = d + (i % 2 ? -p.level(n).face_matrix[i] : p.level(n).face_matrix[i]);
  return d;
}

}  // namespace detail

// pi_i of a simplicial abelian group as homology of its unnormalized complex.
inline HomologyGroup simplicial_abelian_homotopy(const SimplicialGroupPresentation& p, int i) {
  if (!p.abelian()) throw std::invalid_argument("homotopy via chains needs an abelian presentation");
  if (i < 0) throw std::invalid_argument("homotopy degree must be nonnegative");
  if (i + 1 > p.max_degree())
    throw std::invalid_argument("pi_" + std::to_string(i) + " needs the presentation through degree " +
                                std::to_string(i + 1) + ", but it stops at " + std::to_string(p.max_degree()));
  IntMatrix target = i == 0 ? IntMatrix(0, 0) : p.level(i - 1).relations;
  return presented_homology(detail::alternating_boundary(p, i), target, detail::alternating_boundary(p, i + 1),
                            p.level(i).relations);
}

// Degreewise finite simplicial group with elements 0..order-1, identity 0.
class FiniteSimplicialGroup {
 public:
  struct Level {
    int order = 1;
    std::vector<int> product;                  // product[a * order + b]
    std::vector<int> inverse;
    std::vector<std::vector<int>> face;        // face[i][a] in degree n-1
    std::vector<std::vector<int>> degeneracy;  // degeneracy[i][a] in degree n+1
    std::vector<std::string> names;
  };

  explicit FiniteSimplicialGroup(std::vector<Level> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw std::invalid_argument("finite group needs degree 0");
  }

  // The constant simplicial group on a multiplication table with identity 0.
  static FiniteSimplicialGroup constant(const std::vector<std::vector<int>>& table, int max_degree,
                                        std::vector<std::string> names = {}) {
    const int order = static_cast<int>(table.size());
    if (order == 0) throw std::invalid_argument("empty multiplication table");
    Level l;
    l.order = order;
    l.inverse.assign(order, -1);
    for (int a = 0; a < order; ++a) {
      if (static_cast<int>(table[a].size()) != order) throw std::invalid_argument("multiplication table is not square");
      for (int b = 0; b < order; ++b) {
        int c = table[a][b];
        if (c < 0 || c >= order) throw std::invalid_argument("multiplication table entry out of range");
        l.product.push_back(c);
        if (c == 0) l.inverse[a] = b;
      }
    }
    for (int a = 0; a < order; ++a)
      if (table[0][a] != a || table[a][0] != a || l.inverse[a] < 0)
        throw std::invalid_argument("element 0 is not a two-sided identity with inverses");
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c)
          if (table[table[a][b]][c] != table[a][table[b][c]]) throw std::invalid_argument("multiplication is not associative");
    if (names.empty())
      for (int a = 0; a < order; ++a) names.push_back(std::to_string(a));
    l.names = std::move(names);
    std::vector<int> id(order);
    for (int a = 0; a < order; ++a) id[a] = a;
    std::vector<Level> levels;
    for (int n = 0; n <= max_degree; ++n) {
      Level x = l;
      x.face.assign(n == 0 ? 0 : n + 1, id);
      x.degeneracy.assign(n < max_degree ? n + 1 : 0, id);
      levels.push_back(std::move(x));
    }
    return FiniteSimplicialGroup(std::move(levels));
  }

  static FiniteSimplicialGroup cyclic(int order, int max_degree) {
    if (order < 1) throw std::invalid_argument("cyclic order must be positive");
    std::vector<std::vector<int>> t(order, std::vector<int>(order));
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b) t[a][b] = (a + b) % order;
    return constant(t, max_degree);
  }

  int max_degree() const { return static_cast<int>(levels_.size()) - 1; }
  const Level& level(int n) const {
    if (n < 0 || n > max_degree()) throw std::out_of_range("group degree outside the truncation");
    return levels_[n];
  }
  int order(int n) const { return level(n).order; }
  int mul(int n, int a, int b) const { return level(n).product[a * order(n) + b]; }
  int inv(int n, int a) const { return level(n).inverse[a]; }
  int face(int n, int i, int a) const { return level(n).face.at(i).at(a); }
  int degeneracy(int n, int i, int a) const { return level(n).degeneracy.at(i).at(a); }
  const std::string& name(int n, int a) const { return level(n).names.at(a); }

 private:
  std::vector<Level> levels_;
};

// Enumerates a degreewise finite abelian presentation; rejects infinite degrees.
inline FiniteSimplicialGroup finite_group(const SimplicialGroupPresentation& presented) {
  SimplicialGroupPresentation p = abelianize(presented);
  struct Coordinates {
    SmithForm snf;
    std::vector<long> moduli;  // nontrivial cyclic factors
    std::vector<int> rows;     // their row indices in U
    IntMatrix basis{0, 0};     // columns: lifts of the factor generators
  };
  std::vector<Coordinates> coords;
  std::vector<FiniteSimplicialGroup::Level> levels;
  for (int n = 0; n <= p.max_degree(); ++n) {
    const int g = p.rank(n);
    Coordinates c{smith_normal_form(p.level(n).relations), {}, {}, IntMatrix(g, 0)};
    if (c.snf.rank < g) throw std::invalid_argument("group is infinite in degree " + std::to_string(n));
    std::vector<std::vector<Rat>> u(g, std::vector<Rat>(g));
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) u[i][j] = c.snf.U(i, j);
    std::vector<std::vector<Int>> lifts;
    Rat det = determinant(u);
    for (int i = 0; i < g; ++i) {
      if (c.snf.D(i, i) == 1) continue;
      if (!c.snf.D(i, i).fits_slong_p() || c.snf.D(i, i) > 1 << 20) throw std::invalid_argument("group is too large");
      c.moduli.push_back(c.snf.D(i, i).get_si());
      c.rows.push_back(i);
      // Column i of U^{-1} by Cramer's rule; U is unimodular.
      std::vector<Int> col(g);
      for (int r = 0; r < g; ++r) {
        auto m = u;
        for (int k = 0; k < g; ++k) m[k][r] = k == i ? 1 : 0;
        Rat x = determinant(m) / det;
        col[r] = x.get_num();
      }
      lifts.push_back(col);
    }
    c.basis = IntMatrix::from_columns(g, lifts);
    coords.push_back(std::move(c));
  }
  auto order_of = [&](int n) {
    long o = 1;
    for (long m : coords[n].moduli) o *= m;
    if (o > 1 << 16) throw std::invalid_argument("group is too large to enumerate");
    return static_cast<int>(o);
  };
  auto digits = [&](int n, int a) {
    std::vector<long> d;
    for (long m : coords[n].moduli) d.push_back(a % m), a = static_cast<int>(a / m);
    return d;
  };
  auto encode = [&](int n, const std::vector<Int>& x) {
    const auto& c = coords[n];
    long a = 0, scale = 1;
    for (std::size_t f = 0; f < c.moduli.size(); ++f) {
      Int v = 0;
      for (int j = 0; j < p.rank(n); ++j) v += c.snf.U(c.rows[f], j) * x[j];
      Int r;
      mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(c.moduli[f]));
      a += r.get_si() * scale;
      scale *= c.moduli[f];
    }
    return static_cast<int>(a);
  };
  auto lift = [&](int n, int a) {
    std::vector<Int> x(p.rank(n));
    auto d = digits(n, a);
    for (std::size_t f = 0; f < d.size(); ++f)
      for (int j = 0; j < p.rank(n); ++j) x[j] += coords[n].basis(j, static_cast<int>(f)) * d[f];
    return x;
  };
  for (int n = 0; n <= p.max_degree(); ++n) {
    FiniteSimplicialGroup::Level l;
    l.order = order_of(n);
    for (int a = 0; a < l.order; ++a) {
      auto da = digits(n, a);
      std::string name;
      for (std::size_t f = 0; f < da.size(); ++f) name += (f ? ":" : "") + std::to_string(da[f]);
      l.names.push_back(name.empty() ? "0" : name);
      for (int b = 0; b < l.order; ++b) {
        auto db = digits(n, b);
        long s = 0, scale = 1;
        for (std::size_t f = 0; f < da.size(); ++f) {
          s += ((da[f] + db[f]) % coords[n].moduli[f]) * scale;
          scale *= coords[n].moduli[f];
        }
        l.product.push_back(static_cast<int>(s));
        if (s == 0) l.inverse.push_back(b);
      }
    }
    auto image = [&](int target, auto&& map) {
      std::vector<int> out;
      for (int a = 0; a < l.order; ++a) out.push_back(encode(target, map(lift(n, a))));
      return out;
    };
    for (int i = 0; i <= n && n > 0; ++i)
      l.face.push_back(image(n - 1, [&](const std::vector<Int>& x) { return p.face(n, i, x); }));
    for (int i = 0; i <= n && n < p.max_degree(); ++i)
      l.degeneracy.push_back(image(n + 1, [&](const std::vector<Int>& x) { return p.degeneracy(n, i, x); }));
    levels.push_back(std::move(l));
  }
  return FiniteSimplicialGroup(std::move(levels));
}

namespace detail {

using Tuple = std::vector<int>;

struct TupleSimplicialSet {
  std::function<std::vector<Tuple>(int)> tuples;
  std::function<Tuple(const Tuple&, int, int)> face;        // (x, n, i)
  std::function<Tuple(const Tuple&, int, int)> degeneracy;  // (x, n, i)
  std::function<std::string(const Tuple&, int)> name;
};

inline std::vector<Tuple> product_tuples(const std::vector<int>& orders) {
  std::vector<Tuple> out{{}};
  for (int o : orders) {
    std::vector<Tuple> next;
    for (const auto& t : out)
      for (int a = 0; a < o; ++a) {
        Tuple u = t;
        u.push_back(a);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

// Checks the simplicial identities on tuples and extracts nondegenerate cells in normal form.
inline FinSimplicialSet extract(const TupleSimplicialSet& t, int max_degree) {
  auto fail = [&](const std::string& rule, const Tuple& x, int n) {
    throw std::logic_error("simplicial identity " + rule + " fails on " + t.name(x, n));
  };
  for (int n = 0; n <= max_degree; ++n)
    for (const Tuple& x : t.tuples(n)) {
      for (int j = 0; j <= n && n >= 2; ++j)
        for (int i = 0; i < j; ++i)
          if (t.face(t.face(x, n, j), n - 1, i) != t.face(t.face(x, n, i), n - 1, j - 1)) fail("d_i d_j", x, n);
      if (n + 1 > max_degree) continue;
      for (int j = 0; j <= n; ++j) {
        Tuple sj = t.degeneracy(x, n, j);
        for (int i = 0; i <= n + 1; ++i) {
          Tuple rhs = i < j ? t.degeneracy(t.face(x, n, i), n - 1, j - 1)
                      : i <= j + 1 ? x
                                   : t.degeneracy(t.face(x, n, i - 1), n - 1, j);
          if (t.face(sj, n + 1, i) != rhs) fail("d_i s_j", x, n);
        }
        for (int i = 0; i <= j && n + 2 <= max_degree; ++i)
          if (t.degeneracy(sj, n + 1, i) != t.degeneracy(t.degeneracy(x, n, i), n + 1, j + 1)) fail("s_i s_j", x, n);
      }
    }
  FinSimplicialSet out(max_degree);
  std::vector<std::map<Tuple, int>> ids(max_degree + 1);
  auto normal_form = [&](Tuple x, int n) -> Cell {
    std::vector<int> repeated;
    for (int j = 0; j < n; ++j)
      if (t.degeneracy(t.face(x, n, j), n - 1, j) == x) repeated.push_back(j);
    MonotoneMap eta(n + 1, 0);
    for (int p = 1; p <= n; ++p)
      eta[p] = eta[p - 1] + (std::find(repeated.begin(), repeated.end(), p - 1) == repeated.end() ? 1 : 0);
    int m = n;
    for (auto it = repeated.rbegin(); it != repeated.rend(); ++it) x = t.face(x, m--, *it);
    auto found = ids[m].find(x);
    if (found == ids[m].end()) throw std::logic_error("normal form reached an unregistered tuple");
    return {found->second, eta};
  };
  for (int n = 0; n <= max_degree; ++n)
    for (const Tuple& x : t.tuples(n)) {
      bool degenerate_tuple = false;
      for (int j = 0; j < n && !degenerate_tuple; ++j)
        degenerate_tuple = t.degeneracy(t.face(x, n, j), n - 1, j) == x;
      if (degenerate_tuple) continue;
      std::vector<Cell> faces;
      for (int i = 0; i <= n && n > 0; ++i) faces.push_back(normal_form(t.face(x, n, i), n - 1));
      ids[n].emplace(x, out.add_simplex(t.name(x, n), n, std::move(faces)));
    }
  return out;
}

inline std::string tuple_name(const FiniteSimplicialGroup& g, const Tuple& x, int top) {
  if (x.empty()) return "*";
  std::string s = "(";
  for (std::size_t p = 0; p < x.size(); ++p) s += (p ? "," : "") + g.name(top - static_cast<int>(p), x[p]);
  return s + ")";
}

// The total space: (g_n, ..., g_0).
inline TupleSimplicialSet w_tuples(const FiniteSimplicialGroup& g) {
  TupleSimplicialSet t;
  t.tuples = [&g](int n) {
    std::vector<int> orders;
    for (int p = 0; p <= n; ++p) orders.push_back(g.order(n - p));
    return product_tuples(orders);
  };
  t.face = [&g](const Tuple& x, int n, int i) {
    Tuple y;
    if (i == n) {
      for (int p = 0; p < n; ++p) y.push_back(g.face(n - p, n - p, x[p]));
      return y;
    }
    for (int p = 0; p < i; ++p) y.push_back(g.face(n - p, i - p, x[p]));
    y.push_back(g.mul(n - i - 1, g.face(n - i, 0, x[i]), x[i + 1]));
    for (int p = i + 2; p <= n; ++p) y.push_back(x[p]);
    return y;
  };
  t.degeneracy = [&g](const Tuple& x, int n, int i) {
    Tuple y;
    for (int p = 0; p <= i; ++p) y.push_back(g.degeneracy(n - p, i - p, x[p]));
    y.push_back(0);
    for (int p = i + 1; p <= n; ++p) y.push_back(x[p]);
    return y;
  };
  t.name = [&g](const Tuple& x, int n) { return tuple_name(g, x, n); };
  return t;
}

// The classifying complex: (g_{n-1}, ..., g_0) with the twisted inner faces.
inline TupleSimplicialSet wbar_tuples(const FiniteSimplicialGroup& g) {
  TupleSimplicialSet t;
  t.tuples = [&g](int n) {
    std::vector<int> orders;
    for (int p = 0; p < n; ++p) orders.push_back(g.order(n - 1 - p));
    return product_tuples(orders);
  };
  t.face = [&g](const Tuple& x, int n, int i) {
    Tuple y;
    if (i == 0) return Tuple(x.begin() + 1, x.end());
    if (i == n) {
      for (int p = 0; p < n - 1; ++p) y.push_back(g.face(n - 1 - p, n - 1 - p, x[p]));
      return y;
    }
    for (int p = 0; p < i - 1; ++p) y.push_back(g.face(n - 1 - p, i - 1 - p, x[p]));
    y.push_back(g.mul(n - i - 1, g.face(n - i, 0, x[i - 1]), x[i]));
    for (int p = i + 1; p < n; ++p) y.push_back(x[p]);
    return y;
  };
  t.degeneracy = [&g](const Tuple& x, int n, int i) {
    Tuple y;
    for (int p = 0; p < i; ++p) y.push_back(g.degeneracy(n - 1 - p, i - 1 - p, x[p]));
    y.push_back(0);
    for (int p = i; p < n; ++p) y.push_back(x[p]);
    return y;
  };
  t.name = [&g](const Tuple& x, int n) { return tuple_name(g, x, n - 1); };
  return t;
}

}  // namespace detail

inline FinSimplicialSet w_total(const FiniteSimplicialGroup& g, int depth) {
  if (depth > g.max_degree()) throw std::invalid_argument("group is not explicit through the requested depth");
  return detail::extract(detail::w_tuples(g), depth);
}

inline FinSimplicialSet wbar(const FiniteSimplicialGroup& g, int depth) {
  if (depth - 1 > g.max_degree()) throw std::invalid_argument("group is not explicit through the requested depth");
  return detail::extract(detail::wbar_tuples(g), depth);
}

inline FinSimplicialSet w_total(const SimplicialGroupPresentation& p, int depth) { return w_total(finite_group(p), depth); }
inline FinSimplicialSet wbar(const SimplicialGroupPresentation& p, int depth) { return wbar(finite_group(p), depth); }

struct FibrationDegree {
  int degree = 0;
  bool free_action = false;
  bool orbit_bijection = false;
  bool quotient_simplicial = false;
  int total_cells = 0;
  int orbits = 0;
  bool ok() const { return free_action && orbit_bijection && quotient_simplicial; }
};

struct FibrationReport {
  std::vector<FibrationDegree> degrees;
  bool ok() const {
    return std::all_of(degrees.begin(), degrees.end(), [](const FibrationDegree& d) { return d.ok(); });
  }
};

// WG -> WbarG: freeness of the first-slot action, orbits versus classifying cells, and compatibility with faces.
inline FibrationReport check_principal_fibration(const FiniteSimplicialGroup& g, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (depth > g.max_degree()) throw std::invalid_argument("group is not explicit through the requested depth");
  auto wb = detail::wbar_tuples(g);
  auto wt = detail::w_tuples(g);
  FibrationReport report;
  for (int n = 0; n <= depth; ++n) {
    FibrationDegree d;
    d.degree = n;
    auto cells = wt.tuples(n);
    d.total_cells = static_cast<int>(cells.size());
    d.free_action = true;
    std::map<detail::Tuple, detail::Tuple> orbit_of;  // cell -> orbit representative
    for (const auto& x : cells) {
      detail::Tuple rep = x;
      for (int h = 0; h < g.order(n); ++h) {
        detail::Tuple y = x;
        y[0] = g.mul(n, h, x[0]);
        if (h != 0 && y == x) d.free_action = false;
        rep = std::min(rep, y);
      }
      orbit_of[x] = rep;
    }
    std::map<detail::Tuple, detail::Tuple> image;  // orbit representative -> classifying cell
    d.orbit_bijection = true;
    for (const auto& [x, rep] : orbit_of) {
      detail::Tuple q(x.begin() + 1, x.end());
      auto [it, fresh] = image.emplace(rep, q);
      if (!fresh && it->second != q) d.orbit_bijection = false;
    }
    d.orbits = static_cast<int>(image.size());
    std::set<detail::Tuple> hit;
    for (const auto& [rep, q] : image) hit.insert(q);
    if (hit.size() != image.size() || hit.size() != wb.tuples(n).size()) d.orbit_bijection = false;
    d.quotient_simplicial = true;
    for (const auto& x : cells)
      for (int i = 0; i <= n && n > 0; ++i) {
        detail::Tuple fx = wt.face(x, n, i);
        detail::Tuple lhs(fx.begin() + 1, fx.end());
        if (lhs != wb.face(detail::Tuple(x.begin() + 1, x.end()), n, i)) d.quotient_simplicial = false;
      }
    report.degrees.push_back(d);
  }
  return report;
}

}  // namespace simpkit
