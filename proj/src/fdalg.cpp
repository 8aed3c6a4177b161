#include "genbase/fdalg.hpp"

#include <algorithm>
#include <set>

#include "genbase/linalg.hpp"

namespace genbase {

namespace {

using Word = std::vector<int>; // arrow indices, display order

int wstart_of(const IceQuiver& q, const Word& w) { return q.arrows[w.back()].src; }
int wend_of(const IceQuiver& q, const Word& w) { return q.arrows[w.front()].tgt; }

std::map<std::string, int> arrow_id_map(const IceQuiver& q) {
  std::map<std::string, int> idx;
  for (int i = 0; i < static_cast<int>(q.arrows.size()); ++i) {
    idx[q.arrows[i].display_id()] = i;
  }
  return idx;
}

// Path order: length first, then lexicographic by the rank of the arrow ids.
std::vector<int> arrow_rank(const IceQuiver& q) {
  std::vector<std::pair<std::string, int>> ids;
  for (int i = 0; i < static_cast<int>(q.arrows.size()); ++i) {
    ids.emplace_back(q.arrows[i].display_id(), i);
  }
  std::sort(ids.begin(), ids.end());
  std::vector<int> rank(ids.size());
  for (int r = 0; r < static_cast<int>(ids.size()); ++r) rank[ids[r].second] = r;
  return rank;
}

struct WordLess {
  const std::vector<int>* rank;
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t k = 0; k < a.size(); ++k) {
      if ((*rank)[a[k]] != (*rank)[b[k]]) return (*rank)[a[k]] < (*rank)[b[k]];
    }
    return false;
  }
};

std::string word_label(const IceQuiver& q, const Word& w) {
  std::string s;
  for (size_t k = 0; k < w.size(); ++k) {
    if (k) s += "*";
    s += q.arrows[w[k]].display_id();
  }
  return s;
}

// All composable nonempty words of length <= n, shortest first.
std::vector<Word> enumerate_words(const IceQuiver& q, int n) {
  std::vector<std::vector<int>> by_tgt(q.n + 1);
  for (int i = 0; i < static_cast<int>(q.arrows.size()); ++i) {
    by_tgt[q.arrows[i].tgt].push_back(i);
  }
  std::vector<Word> all;
  std::vector<Word> cur;
  for (int i = 0; i < static_cast<int>(q.arrows.size()); ++i) cur.push_back({i});
  for (int len = 1; len <= n && !cur.empty(); ++len) {
    all.insert(all.end(), cur.begin(), cur.end());
    std::vector<Word> nxt;
    for (const Word& w : cur) {
      for (int a : by_tgt[q.arrows[w.back()].src]) {
        Word w2 = w;
        w2.push_back(a);
        nxt.push_back(std::move(w2));
      }
    }
    cur = std::move(nxt);
  }
  return all;
}

struct RelIdx {
  int rstart = 0;
  int rend = 0;
  size_t minlen = 0;
  std::vector<std::pair<Rat, Word>> terms;
};

struct Block {
  std::vector<Word> cols; // all words of the block, largest first
  std::map<Word, int> col_of;
  std::map<int, std::map<int, Rat>> pivots;   // leading column -> row, lead coef 1
  std::map<int, std::map<int, Rat>> resolved; // pivot column -> normal-form coords
};

struct ElimResult {
  std::map<std::pair<int, int>, Block> blocks; // keyed by (wend, wstart)
  std::set<Word> nfs;
};

void insert_row(Block& b, std::map<int, Rat> row) {
  while (!row.empty()) {
    auto lead = row.begin();
    auto it = b.pivots.find(lead->first);
    if (it == b.pivots.end()) {
      Rat lc = lead->second;
      for (auto& [k, v] : row) v /= lc;
      b.pivots.emplace(lead->first, std::move(row));
      return;
    }
    Rat f = lead->second;
    for (const auto& [k, v] : it->second) row[k] -= f * v;
    for (auto itr = row.begin(); itr != row.end();) {
      itr = is_zero(itr->second) ? row.erase(itr) : std::next(itr);
    }
  }
}

// Row space of {p * r * q} truncated at the length bound, eliminated per
// block with pivots on the largest words, so normal forms are the smallest.
ElimResult run_elimination(const IceQuiver& q, const std::vector<int>& rank,
                           const std::vector<RelIdx>& rels, int trunc) {
  ElimResult res;
  std::vector<Word> words = enumerate_words(q, trunc);
  for (const Word& w : words) {
    res.blocks[{wend_of(q, w), wstart_of(q, w)}].cols.push_back(w);
  }
  WordLess less{&rank};
  for (auto& [key, b] : res.blocks) {
    std::sort(b.cols.begin(), b.cols.end(),
              [&](const Word& x, const Word& y) { return less(y, x); });
    for (int c = 0; c < static_cast<int>(b.cols.size()); ++c) b.col_of[b.cols[c]] = c;
  }

  std::vector<std::vector<const Word*>> by_start(q.n + 1), by_end(q.n + 1);
  for (const Word& w : words) {
    by_start[wstart_of(q, w)].push_back(&w);
    by_end[wend_of(q, w)].push_back(&w);
  }

  for (const RelIdx& rel : rels) {
    std::vector<const Word*> lefts = {nullptr};
    for (const Word* w : by_start[rel.rend]) lefts.push_back(w);
    std::vector<const Word*> rights = {nullptr};
    for (const Word* w : by_end[rel.rstart]) rights.push_back(w);
    for (const Word* p : lefts) {
      size_t plen = p ? p->size() : 0;
      if (plen + rel.minlen > static_cast<size_t>(trunc)) break;
      for (const Word* s : rights) {
        size_t slen = s ? s->size() : 0;
        if (plen + rel.minlen + slen > static_cast<size_t>(trunc)) break;
        auto key = std::make_pair(p ? wend_of(q, *p) : rel.rend,
                                  s ? wstart_of(q, *s) : rel.rstart);
        auto bit = res.blocks.find(key);
        if (bit == res.blocks.end()) continue;
        Block& b = bit->second;
        std::map<int, Rat> row;
        for (const auto& [coef, t] : rel.terms) {
          size_t len = plen + t.size() + slen;
          if (len > static_cast<size_t>(trunc)) continue;
          Word full;
          full.reserve(len);
          if (p) full.insert(full.end(), p->begin(), p->end());
          full.insert(full.end(), t.begin(), t.end());
          if (s) full.insert(full.end(), s->begin(), s->end());
          row[b.col_of.at(full)] += coef;
        }
        for (auto itr = row.begin(); itr != row.end();) {
          itr = is_zero(itr->second) ? row.erase(itr) : std::next(itr);
        }
        if (!row.empty()) insert_row(b, std::move(row));
      }
    }
  }

  // Resolve every pivot to pure normal-form coordinates. Entries of a pivot
  // row sit on strictly larger column indices (smaller words), so walking
  // pivots from the largest column downward meets only resolved references.
  for (auto& [key, b] : res.blocks) {
    for (auto it = b.pivots.rbegin(); it != b.pivots.rend(); ++it) {
      int c = it->first;
      std::map<int, Rat> r;
      for (const auto& [k, v] : it->second) {
        if (k == c) continue;
        auto pit = b.resolved.find(k);
        if (pit != b.resolved.end()) {
          for (const auto& [k2, v2] : pit->second) r[k2] -= v * v2;
        } else {
          r[k] -= v;
        }
      }
      for (auto itr = r.begin(); itr != r.end();) {
        itr = is_zero(itr->second) ? r.erase(itr) : std::next(itr);
      }
      b.resolved.emplace(c, std::move(r));
    }
    for (int c = 0; c < static_cast<int>(b.cols.size()); ++c) {
      if (!b.pivots.count(c)) res.nfs.insert(b.cols[c]);
    }
  }
  return res;
}

std::vector<std::vector<Rat>> rref_rows(std::vector<std::vector<Rat>> rows, int width) {
  if (rows.empty()) return {};
  Mat<Rat> m = rat_mat(static_cast<int>(rows.size()), width);
  for (int i = 0; i < m.nr; ++i) {
    for (int j = 0; j < width; ++j) m.at(i, j) = rows[i][j];
  }
  rref(m);
  std::vector<std::vector<Rat>> out;
  for (int i = 0; i < m.nr; ++i) {
    bool nonzero = false;
    for (int j = 0; j < width; ++j) {
      if (!is_zero(m.at(i, j))) {
        nonzero = true;
        break;
      }
    }
    if (!nonzero) continue;
    std::vector<Rat> r(width);
    for (int j = 0; j < width; ++j) r[j] = m.at(i, j);
    out.push_back(std::move(r));
  }
  return out;
}

AlgebraPtr build_algebra(const IceQuiver& q, std::vector<PathCombination> relations,
                         int bound) {
  if (bound < 1) throw std::invalid_argument("length bound must be >= 1");
  std::map<std::string, int> idx = arrow_id_map(q);
  std::vector<RelIdx> rels;
  for (const PathCombination& r : relations) {
    RelIdx ri;
    ri.minlen = static_cast<size_t>(bound) + 2;
    for (const auto& [coef, ids] : r.terms) {
      Word w;
      for (const std::string& id : ids) {
        auto it = idx.find(id);
        if (it == idx.end()) throw std::invalid_argument("unknown arrow id: " + id);
        w.push_back(it->second);
      }
      ri.minlen = std::min(ri.minlen, w.size());
      ri.terms.emplace_back(coef, std::move(w));
    }
    if (ri.terms.empty()) continue;
    ri.rstart = wstart_of(q, ri.terms.front().second);
    ri.rend = wend_of(q, ri.terms.front().second);
    rels.push_back(std::move(ri));
  }

  std::vector<int> rank = arrow_rank(q);
  ElimResult low = run_elimination(q, rank, rels, bound);
  ElimResult high = run_elimination(q, rank, rels, bound + 1);
  if (low.nfs != high.nfs) {
    throw StabilizationError("path reduction did not stabilize at length bound " +
                             std::to_string(bound) +
                             ": raise the bound (the quotient may be infinite-dimensional)");
  }

  int max_nf = 0;
  for (const Word& w : high.nfs) max_nf = std::max(max_nf, static_cast<int>(w.size()));

  // Products of two normal forms must stay inside the reduction universe.
  ElimResult wide;
  const ElimResult* use = &high;
  if (2 * max_nf > bound + 1) {
    wide = run_elimination(q, rank, rels, 2 * max_nf);
    if (wide.nfs != high.nfs) {
      throw StabilizationError(
          "normal forms changed when extending the reduction universe "
          "(stabilization check failed internally)");
    }
    use = &wide;
  }

  auto alg = std::make_shared<FDAlgebra>();
  alg->quiver = q;
  alg->relations = std::move(relations);
  alg->max_basis_length = max_nf;
  for (int v = 1; v <= q.n; ++v) {
    alg->original_vertex.push_back(v);
    alg->basis.push_back({v, v, 0, {}, "e" + std::to_string(v)});
  }
  std::vector<Word> nfs(high.nfs.begin(), high.nfs.end());
  WordLess less{&rank};
  std::sort(nfs.begin(), nfs.end(), less);
  std::map<Word, int> nf_at;
  for (const Word& w : nfs) {
    nf_at[w] = alg->dim();
    alg->basis.push_back({wstart_of(q, w), wend_of(q, w), static_cast<int>(w.size()), w,
                          word_label(q, w)});
  }
  for (int i = 0; i < static_cast<int>(q.arrows.size()); ++i) {
    auto it = nf_at.find(Word{i});
    if (it == nf_at.end()) {
      throw std::logic_error("arrow eliminated by relations (input not admissible)");
    }
    alg->arrow_elem.push_back(it->second);
  }

  auto coords_of_word = [&](const Word& full) {
    const Block& b = use->blocks.at({wend_of(q, full), wstart_of(q, full)});
    int col = b.col_of.at(full);
    std::map<int, Rat> out;
    auto pit = b.resolved.find(col);
    if (pit == b.resolved.end()) {
      out[nf_at.at(full)] = 1;
    } else {
      for (const auto& [c2, v] : pit->second) out[nf_at.at(b.cols[c2])] = v;
    }
    return out;
  };

  int d = alg->dim();
  alg->dense_storage = d <= 64;
  if (alg->dense_storage) alg->dense_mult.assign(static_cast<size_t>(d) * d, {});
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (alg->basis[i].wstart != alg->basis[j].wend) continue;
      std::map<int, Rat> c;
      if (i < q.n) {
        c[j] = 1;
      } else if (j < q.n) {
        c[i] = 1;
      } else {
        Word full = alg->basis[i].arrows;
        full.insert(full.end(), alg->basis[j].arrows.begin(), alg->basis[j].arrows.end());
        c = coords_of_word(full);
      }
      if (c.empty()) continue;
      if (alg->dense_storage) {
        std::vector<Rat> row(d, Rat(0));
        for (const auto& [k, v] : c) row[k] = v;
        alg->dense_mult[static_cast<size_t>(i) * d + j] = std::move(row);
      } else {
        alg->sparse_mult[{i, j}] = std::move(c);
      }
    }
  }
  return alg;
}

} // namespace

std::map<int, Rat> FDAlgebra::mult(int i, int j) const {
  std::map<int, Rat> out;
  if (dense_storage) {
    const auto& row = dense_mult[static_cast<size_t>(i) * dim() + j];
    for (int k = 0; k < static_cast<int>(row.size()); ++k) {
      if (!is_zero(row[k])) out[k] = row[k];
    }
  } else {
    auto it = sparse_mult.find({i, j});
    if (it != sparse_mult.end()) out = it->second;
  }
  return out;
}

void FDAlgebra::mult_acc(int i, int j, const Rat& c, std::vector<Rat>& acc) const {
  if (is_zero(c)) return;
  if (dense_storage) {
    const auto& row = dense_mult[static_cast<size_t>(i) * dim() + j];
    for (int k = 0; k < static_cast<int>(row.size()); ++k) {
      if (!is_zero(row[k])) acc[k] += c * row[k];
    }
  } else {
    auto it = sparse_mult.find({i, j});
    if (it == sparse_mult.end()) return;
    for (const auto& [k, v] : it->second) acc[k] += c * v;
  }
}

std::vector<int> FDAlgebra::block(int end_vertex, int start_vertex) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i) {
    if (basis[i].wend == end_vertex && basis[i].wstart == start_vertex) out.push_back(i);
  }
  return out;
}

std::vector<Rat> FDAlgebra::reduce_path(const std::vector<std::string>& ids) const {
  if (ids.empty()) throw std::invalid_argument("cannot reduce an empty path");
  std::map<std::string, int> idx = arrow_id_map(quiver);
  std::vector<int> w;
  for (const std::string& id : ids) {
    auto it = idx.find(id);
    if (it == idx.end()) throw std::invalid_argument("unknown arrow id: " + id);
    w.push_back(it->second);
  }
  for (size_t p = 0; p + 1 < w.size(); ++p) {
    if (quiver.arrows[w[p]].src != quiver.arrows[w[p + 1]].tgt) {
      throw std::invalid_argument("path is not composable at position " + std::to_string(p));
    }
  }
  std::vector<Rat> acc(dim(), Rat(0));
  acc[arrow_elem[w[0]]] = 1;
  for (size_t k = 1; k < w.size(); ++k) {
    std::vector<Rat> nxt(dim(), Rat(0));
    for (int i = 0; i < dim(); ++i) {
      if (!is_zero(acc[i])) mult_acc(i, arrow_elem[w[k]], acc[i], nxt);
    }
    acc = std::move(nxt);
  }
  return acc;
}

std::vector<Rat> FDAlgebra::reduce(const PathCombination& r) const {
  std::vector<Rat> acc(dim(), Rat(0));
  for (const auto& [coef, ids] : r.terms) {
    std::vector<Rat> t = reduce_path(ids);
    for (int i = 0; i < dim(); ++i) acc[i] += coef * t[i];
  }
  return acc;
}

AlgebraPtr from_relations(const IceQuiver& q, const std::vector<PathCombination>& relations,
                          int length_bound) {
  std::vector<PathCombination> validated;
  for (const PathCombination& r : relations) {
    validated.push_back(make_path_combination(q, r.terms));
  }
  return build_algebra(q, std::move(validated), length_bound);
}

AlgebraPtr jacobian_algebra(const IceQuiver& q, const Potential& w, int length_bound) {
  Potential canon = make_potential(q, w.terms);
  std::vector<PathCombination> rels;
  for (const Arrow& a : q.arrows) {
    PathCombination d = cyclic_derivative(q, canon, a.display_id());
    if (!d.terms.empty()) rels.push_back(std::move(d));
  }
  return build_algebra(q, std::move(rels), length_bound);
}

AlgebraPtr opposite(const AlgebraPtr& alg) {
  if (auto cached = alg->opposite_cache.lock()) return cached;
  auto op = std::make_shared<FDAlgebra>();
  op->quiver = alg->quiver;
  for (Arrow& a : op->quiver.arrows) std::swap(a.src, a.tgt);
  op->basis = alg->basis;
  for (AlgebraElem& e : op->basis) {
    std::swap(e.wstart, e.wend);
    std::reverse(e.arrows.begin(), e.arrows.end());
    if (!e.arrows.empty()) {
      e.label = word_label(op->quiver, e.arrows);
    }
  }
  op->arrow_elem = alg->arrow_elem;
  for (const PathCombination& r : alg->relations) {
    PathCombination rr = r;
    for (auto& [coef, ids] : rr.terms) std::reverse(ids.begin(), ids.end());
    op->relations.push_back(std::move(rr));
  }
  op->original_vertex = alg->original_vertex;
  op->max_basis_length = alg->max_basis_length;
  op->presented_by_quiver = alg->presented_by_quiver;
  int d = alg->dim();
  op->dense_storage = alg->dense_storage;
  if (op->dense_storage) {
    op->dense_mult.assign(static_cast<size_t>(d) * d, {});
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        op->dense_mult[static_cast<size_t>(i) * d + j] =
            alg->dense_mult[static_cast<size_t>(j) * d + i];
      }
    }
  } else {
    for (const auto& [key, v] : alg->sparse_mult) {
      op->sparse_mult[{key.second, key.first}] = v;
    }
  }
  op->opposite_cache = alg;
  alg->opposite_cache = op;
  return op;
}

AlgebraPtr corner(const AlgebraPtr& alg, const std::vector<int>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("corner vertex set is empty");
  std::set<int> vs;
  for (int v : vertices) {
    if (v < 1 || v > alg->quiver.n) {
      throw std::invalid_argument("corner vertex out of range: " + std::to_string(v));
    }
    vs.insert(v);
  }
  std::vector<int> s(vs.begin(), vs.end());
  std::vector<int> cnum(alg->quiver.n + 1, 0);
  for (int k = 0; k < static_cast<int>(s.size()); ++k) cnum[s[k]] = k + 1;

  std::vector<int> induced;
  std::vector<int> cidx(alg->dim(), -1);
  for (int i = 0; i < alg->dim(); ++i) {
    if (cnum[alg->basis[i].wstart] > 0 && cnum[alg->basis[i].wend] > 0) {
      cidx[i] = static_cast<int>(induced.size());
      induced.push_back(i);
    }
  }

  auto c = std::make_shared<FDAlgebra>();
  c->presented_by_quiver = false;
  for (int i : induced) {
    AlgebraElem e = alg->basis[i];
    e.wstart = cnum[e.wstart];
    e.wend = cnum[e.wend];
    e.arrows.clear();
    c->basis.push_back(std::move(e));
    c->max_basis_length = std::max(c->max_basis_length, alg->basis[i].length);
  }
  for (int v : s) c->original_vertex.push_back(alg->original_vertex[v - 1]);

  int d = c->dim();
  c->dense_storage = d <= 64;
  if (c->dense_storage) c->dense_mult.assign(static_cast<size_t>(d) * d, {});
  for (int ci = 0; ci < d; ++ci) {
    for (int cj = 0; cj < d; ++cj) {
      int i = induced[ci];
      int j = induced[cj];
      if (alg->basis[i].wstart != alg->basis[j].wend) continue;
      std::map<int, Rat> m = alg->mult(i, j);
      std::map<int, Rat> out;
      for (const auto& [k, v] : m) {
        if (cidx[k] < 0) throw std::logic_error("corner product left the corner");
        out[cidx[k]] = v;
      }
      if (out.empty()) continue;
      if (c->dense_storage) {
        std::vector<Rat> row(d, Rat(0));
        for (const auto& [k, v] : out) row[k] = v;
        c->dense_mult[static_cast<size_t>(ci) * d + cj] = std::move(row);
      } else {
        c->sparse_mult[{ci, cj}] = std::move(out);
      }
    }
  }

  // Presentation quiver: one arrow per basis vector of rad / rad^2.
  std::vector<int> rad;
  for (int ci = 0; ci < d; ++ci) {
    if (c->basis[ci].length > 0) rad.push_back(ci);
  }
  std::vector<int> rpos(d, -1);
  for (int r = 0; r < static_cast<int>(rad.size()); ++r) rpos[rad[r]] = r;
  std::vector<std::vector<Rat>> span;
  for (int ci : rad) {
    for (int cj : rad) {
      if (c->basis[ci].wstart != c->basis[cj].wend) continue;
      std::map<int, Rat> m = c->mult(ci, cj);
      if (m.empty()) continue;
      std::vector<Rat> row(rad.size(), Rat(0));
      for (const auto& [k, v] : m) {
        if (rpos[k] < 0) throw std::logic_error("radical product has a degree-zero part");
        row[rpos[k]] = v;
      }
      span.push_back(std::move(row));
    }
  }
  span = rref_rows(std::move(span), static_cast<int>(rad.size()));
  std::vector<Arrow> gens;
  for (int ci : rad) {
    std::vector<std::vector<Rat>> probe = span;
    std::vector<Rat> unit(rad.size(), Rat(0));
    unit[rpos[ci]] = 1;
    probe.push_back(unit);
    auto reduced = rref_rows(std::move(probe), static_cast<int>(rad.size()));
    if (reduced.size() == span.size()) continue; // already in the span
    span = std::move(reduced);
    gens.push_back({c->basis[ci].label, 0, c->basis[ci].wstart, c->basis[ci].wend});
    c->arrow_elem.push_back(ci);
  }
  c->quiver = IceQuiver{static_cast<int>(s.size()), static_cast<int>(s.size()), gens};
  return c;
}

bool check_relations(const FDAlgebra& alg, const Potential& w) {
  for (const Arrow& a : alg.quiver.arrows) {
    PathCombination d = cyclic_derivative(alg.quiver, w, a.display_id());
    if (d.terms.empty()) continue;
    for (const Rat& v : alg.reduce(d)) {
      if (!is_zero(v)) return false;
    }
  }
  // Nilpotency of the radical: powers must strictly shrink down to zero.
  int d = alg.dim();
  int n = alg.quiver.n;
  std::vector<std::vector<Rat>> span;
  for (int i = n; i < d; ++i) {
    std::vector<Rat> unit(d, Rat(0));
    unit[i] = 1;
    span.push_back(std::move(unit));
  }
  span = rref_rows(std::move(span), d);
  while (!span.empty()) {
    std::vector<std::vector<Rat>> prods;
    for (const auto& v : span) {
      for (int j = n; j < d; ++j) {
        std::vector<Rat> acc(d, Rat(0));
        for (int i = 0; i < d; ++i) {
          if (!is_zero(v[i])) alg.mult_acc(i, j, v[i], acc);
        }
        bool nonzero = false;
        for (const Rat& x : acc) {
          if (!is_zero(x)) {
            nonzero = true;
            break;
          }
        }
        if (nonzero) prods.push_back(std::move(acc));
      }
    }
    auto nxt = rref_rows(std::move(prods), d);
    if (nxt.size() >= span.size()) return false;
    span = std::move(nxt);
  }
  return true;
}

} // namespace genbase
