#include "genbase/modrep.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace genbase {

namespace {

std::map<std::string, int> arrow_index_map(const IceQuiver& q) {
  std::map<std::string, int> idx;
  for (size_t i = 0; i < q.arrows.size(); ++i)
    idx[q.arrows[i].display_id()] = static_cast<int>(i);
  return idx;
}

void require_alg(const AlgebraPtr& alg) {
  if (!alg) throw std::invalid_argument("module: null algebra");
}

void require_same(const Module& a, const Module& b, const char* what) {
  if (a.alg.get() != b.alg.get())
    throw std::invalid_argument(std::string("module: mixed algebras in ") + what);
}

void require_vertex(const AlgebraPtr& alg, int v, const char* what) {
  if (v < 1 || v > alg->quiver.n)
    throw std::invalid_argument(std::string(what) + ": vertex out of range: " + std::to_string(v));
}

template <class K>
Mat<K> word_action_t(const ModuleT<K>& m, const std::vector<int>& arrows, int end_vertex) {
  if (arrows.empty()) return mat_identity(m.dim_at(end_vertex), m.zero);
  const auto& qa = m.alg->quiver.arrows;
  if (qa[static_cast<size_t>(arrows.front())].tgt != end_vertex)
    throw std::invalid_argument("module: word does not end at the stated vertex");
  Mat<K> acc = m.action[static_cast<size_t>(arrows[0])];
  for (size_t k = 1; k < arrows.size(); ++k) {
    if (qa[static_cast<size_t>(arrows[k])].tgt != qa[static_cast<size_t>(arrows[k - 1])].src)
      throw std::invalid_argument("module: word is not composable");
    acc = mat_mul(m.action[static_cast<size_t>(arrows[k])], acc);
  }
  return acc;
}

template <class K>
bool mat_is_zero(const Mat<K>& m) {
  for (const K& v : m.a)
    if (!is_zero(v)) return false;
  return true;
}

// The action factors through the algebra iff the defining relations act by
// zero and every composable path acts exactly as its normal-form class.
// Checking paths up to one beyond the longest basis path pins down all
// longer products, since those reduce through the checked lengths.
template <class K>
void validate_module(const ModuleT<K>& m, const std::function<K(const Rat&)>& conv) {
  const FDAlgebra& alg = *m.alg;
  const IceQuiver& q = alg.quiver;
  if (!alg.presented_by_quiver)
    throw std::invalid_argument("module: corner algebras do not host module categories");
  if (static_cast<int>(m.dims.size()) != q.n)
    throw std::invalid_argument("module: dimension vector length mismatch");
  for (int d : m.dims)
    if (d < 0) throw std::invalid_argument("module: negative dimension");
  if (m.action.size() != q.arrows.size())
    throw std::invalid_argument("module: one action matrix per arrow required");
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    if (m.action[k].nr != m.dim_at(q.arrows[k].src) || m.action[k].nc != m.dim_at(q.arrows[k].tgt))
      throw std::invalid_argument("module: action matrix shape mismatch for arrow " +
                                  q.arrows[k].display_id());
  }
  std::map<std::string, int> idx = arrow_index_map(q);
  for (const PathCombination& r : alg.relations) {
    Mat<K> acc;
    bool first = true;
    for (const auto& [coef, ids] : r.terms) {
      std::vector<int> w;
      for (const std::string& s : ids) w.push_back(idx.at(s));
      Mat<K> t = mat_scale(word_action_t(m, w, q.arrows[static_cast<size_t>(w.front())].tgt),
                           conv(coef));
      if (first) {
        acc = std::move(t);
        first = false;
      } else {
        acc = mat_add(acc, t);
      }
    }
    if (!first && !mat_is_zero(acc))
      throw std::invalid_argument("module: a defining relation does not act by zero");
  }
  std::map<std::vector<int>, int> basis_word;
  for (int b = 0; b < alg.dim(); ++b)
    if (alg.basis[static_cast<size_t>(b)].length > 0)
      basis_word.emplace(alg.basis[static_cast<size_t>(b)].arrows, b);
  std::vector<Mat<K>> elem_act(static_cast<size_t>(alg.dim()));
  std::vector<char> have_elem(static_cast<size_t>(alg.dim()), 0);
  auto act_of_elem = [&](int b) -> const Mat<K>& {
    auto bi = static_cast<size_t>(b);
    if (!have_elem[bi]) {
      const AlgebraElem& e = alg.basis[bi];
      if (e.length == 0) {
        int d = m.dim_at(e.wstart);
        Mat<K> id(d, d, m.zero);
        for (int i = 0; i < d; ++i) id.at(i, i) = conv(Rat(1));
        elem_act[bi] = std::move(id);
      } else {
        elem_act[bi] = word_action_t(m, e.arrows, e.wend);
      }
      have_elem[bi] = 1;
    }
    return elem_act[bi];
  };
  struct Gen {
    std::vector<int> w;    // arrow indices in display order
    Mat<K> act;            // action of the word
    std::vector<Rat> cls;  // normal-form class over the algebra basis
  };
  std::vector<Gen> cur;
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    Gen g;
    g.w = {static_cast<int>(k)};
    g.act = m.action[k];
    g.cls.assign(static_cast<size_t>(alg.dim()), Rat(0));
    g.cls[static_cast<size_t>(alg.arrow_elem[k])] = 1;
    cur.push_back(std::move(g));
  }
  for (int len = 2; len <= alg.max_basis_length + 1 && !cur.empty(); ++len) {
    std::vector<Gen> next;
    for (const Gen& g : cur) {
      for (size_t k = 0; k < q.arrows.size(); ++k) {
        if (q.arrows[static_cast<size_t>(g.w.back())].src != q.arrows[k].tgt) continue;
        Gen h;
        h.w = g.w;
        h.w.push_back(static_cast<int>(k));
        h.act = mat_mul(m.action[k], g.act);
        h.cls.assign(static_cast<size_t>(alg.dim()), Rat(0));
        int ak = alg.arrow_elem[k];
        for (int b = 0; b < alg.dim(); ++b)
          if (!is_zero(g.cls[static_cast<size_t>(b)]))
            alg.mult_acc(b, ak, g.cls[static_cast<size_t>(b)], h.cls);
        if (!basis_word.count(h.w)) {
          Mat<K> rhs(h.act.nr, h.act.nc, m.zero);
          for (int b = 0; b < alg.dim(); ++b)
            if (!is_zero(h.cls[static_cast<size_t>(b)]))
              rhs = mat_add(rhs, mat_scale(act_of_elem(b), conv(h.cls[static_cast<size_t>(b)])));
          if (!(rhs == h.act))
            throw std::invalid_argument(
                "module: the action does not factor through the algebra");
        }
        next.push_back(std::move(h));
      }
    }
    cur = std::move(next);
  }
}

// Pivot columns of f, as columns of the original matrix.
Mat<Rat> column_space_basis(const Mat<Rat>& f) {
  Mat<Rat> r = f;
  std::vector<int> pivots = rref(r);
  Mat<Rat> b = rat_mat(f.nr, static_cast<int>(pivots.size()));
  for (size_t k = 0; k < pivots.size(); ++k)
    for (int i = 0; i < f.nr; ++i) b.at(i, static_cast<int>(k)) = f.at(i, pivots[k]);
  return b;
}

// Extends an independent set of columns to a basis by unit vectors and
// returns the projection onto the complement in those coordinates.
Mat<Rat> complement_projection(const Mat<Rat>& im, int dim) {
  int r = im.nc;
  Mat<Rat> probe = mat_hcat(im, mat_identity(dim, Rat(0)));
  std::vector<int> pivots = rref(probe);
  Mat<Rat> full = im;
  for (int p : pivots) {
    if (p < r) continue;
    Mat<Rat> unit = rat_mat(dim, 1);
    unit.at(p - r, 0) = Rat(1);
    full = mat_hcat(full, unit);
  }
  if (full.nc != dim) throw std::logic_error("module: basis completion failed");
  auto inv = mat_solve(full, mat_identity(dim, Rat(0)));
  if (!inv) throw std::logic_error("module: basis completion not invertible");
  Mat<Rat> proj = rat_mat(dim - r, dim);
  for (int i = r; i < dim; ++i)
    for (int j = 0; j < dim; ++j) proj.at(i - r, j) = inv->at(i, j);
  return proj;
}

struct CoverData {
  std::vector<int> t0;
  ModuleMorphism cover;
};

// Projective cover P(t0) -> m with one summand per top generator, vertices
// ascending; the generators are unit vectors complementing the radical.
CoverData projective_cover(const Module& m) {
  const IceQuiver& q = m.alg->quiver;
  std::vector<int> t0;
  std::vector<std::pair<int, int>> gens; // (vertex, coordinate)
  for (int v = 1; v <= q.n; ++v) {
    int d = m.dim_at(v);
    Mat<Rat> rad = rat_mat(d, 0);
    for (size_t k = 0; k < q.arrows.size(); ++k)
      if (q.arrows[k].src == v) rad = mat_hcat(rad, m.action[k]);
    Mat<Rat> radb = column_space_basis(rad);
    Mat<Rat> probe = mat_hcat(radb, mat_identity(d, Rat(0)));
    std::vector<int> pivots = rref(probe);
    for (int p : pivots) {
      if (p < radb.nc) continue;
      t0.push_back(v);
      gens.emplace_back(v, p - radb.nc);
    }
  }
  Module p0 = projective_sum(m.alg, t0);
  std::map<int, Mat<Rat>> act_cache;
  auto act = [&](int b) -> const Mat<Rat>& {
    auto it = act_cache.find(b);
    if (it == act_cache.end()) it = act_cache.emplace(b, elem_action(m, b)).first;
    return it->second;
  };
  std::vector<Mat<Rat>> mats;
  for (int u = 1; u <= q.n; ++u) {
    auto lay = proj_layout(m.alg, t0, u);
    Mat<Rat> f = rat_mat(m.dim_at(u), static_cast<int>(lay.size()));
    for (size_t c = 0; c < lay.size(); ++c) {
      auto [s, b] = lay[c];
      const Mat<Rat>& w = act(b);
      for (int i = 0; i < f.nr; ++i) f.at(i, static_cast<int>(c)) = w.at(i, gens[static_cast<size_t>(s)].second);
    }
    mats.push_back(std::move(f));
  }
  return {t0, ModuleMorphism{p0, m, std::move(mats)}};
}

std::pair<Module, ModuleMorphism> image_of(const ModuleMorphism& f) {
  const Module& n = f.target;
  const IceQuiver& q = n.alg->quiver;
  Module im{n.alg, std::vector<int>(static_cast<size_t>(q.n), 0), {}, Rat(0)};
  std::vector<Mat<Rat>> inc;
  for (int v = 1; v <= q.n; ++v) {
    Mat<Rat> b = column_space_basis(f.mats[static_cast<size_t>(v - 1)]);
    im.dims[static_cast<size_t>(v - 1)] = b.nc;
    inc.push_back(std::move(b));
  }
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    int i = q.arrows[k].src, j = q.arrows[k].tgt;
    auto x = mat_solve(inc[static_cast<size_t>(i - 1)],
                       mat_mul(n.action[k], inc[static_cast<size_t>(j - 1)]));
    if (!x) throw std::logic_error("module: image not closed under the action");
    im.action.push_back(std::move(*x));
  }
  return {im, ModuleMorphism{im, n, std::move(inc)}};
}

Rat horner(const std::vector<Rat>& p, const Rat& x) {
  Rat acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<Int> divisors_of(Int x) {
  std::vector<std::pair<Int, int>> fac;
  Int d = 2;
  while (d * d <= x && d < 100000) {
    if (x % d == 0) {
      int e = 0;
      while (x % d == 0) {
        x /= d;
        ++e;
      }
      fac.emplace_back(d, e);
    }
    d += (d == 2) ? 1 : 2;
  }
  if (x > 1) fac.emplace_back(x, 1);
  std::vector<Int> divs{Int(1)};
  for (const auto& [pr, e] : fac) {
    size_t base = divs.size();
    Int pk(1);
    for (int i = 1; i <= e; ++i) {
      pk *= pr;
      for (size_t b = 0; b < base; ++b) {
        divs.push_back(divs[b] * pk);
        if (divs.size() > 1024) return divs;
      }
    }
  }
  return divs;
}

// All rational roots of a polynomial given constant term first.
std::vector<Rat> rational_roots(const std::vector<Rat>& p) {
  size_t k0 = 0;
  while (k0 < p.size() && is_zero(p[k0])) ++k0;
  std::vector<Rat> roots;
  if (k0 >= p.size()) return roots;
  if (k0 > 0) roots.push_back(Rat(0));
  std::vector<Rat> q(p.begin() + static_cast<long>(k0), p.end());
  if (q.size() <= 1) return roots;
  Int scale(1);
  for (const Rat& c : q) scale = lcm(scale, denominator(c));
  Int a0 = numerator(Rat(q.front() * scale));
  Int an = numerator(Rat(q.back() * scale));
  for (const Int& u : divisors_of(abs(a0)))
    for (const Int& v : divisors_of(abs(an)))
      for (int sgn : {1, -1}) {
        Int uu = u;
        if (sgn < 0) uu = -uu;
        Rat cand(uu, v);
        if (is_zero(horner(q, cand))) roots.push_back(cand);
      }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

Mat<Rat> mat_pow(Mat<Rat> base, int e) {
  Mat<Rat> r = mat_identity(base.nr, Rat(0));
  while (e > 0) {
    if (e & 1) r = mat_mul(r, base);
    e >>= 1;
    if (e > 0) base = mat_mul(base, base);
  }
  return r;
}

int gram_rank(const std::vector<ModuleMorphism>& endos) {
  int k = static_cast<int>(endos.size());
  Mat<Rat> g = rat_mat(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Rat t(0);
      for (size_t v = 0; v < endos[static_cast<size_t>(i)].mats.size(); ++v) {
        const Mat<Rat>& a = endos[static_cast<size_t>(i)].mats[v];
        const Mat<Rat>& b = endos[static_cast<size_t>(j)].mats[v];
        for (int r = 0; r < a.nr; ++r)
          for (int c = 0; c < a.nc; ++c) t += a.at(r, c) * b.at(c, r);
      }
      g.at(i, j) = t;
      g.at(j, i) = t;
    }
  return mat_rank(g);
}

int64_t rand_coeff(std::mt19937_64& rng, int h) {
  return static_cast<int64_t>(rng() % static_cast<uint64_t>(2 * h + 1)) - h;
}

nlohmann::json rat_to_json(const Rat& x) {
  Int num = numerator(x), den = denominator(x);
  if (den == 1 && num <= 9007199254740992LL && num >= -9007199254740992LL)
    return num.convert_to<int64_t>();
  return x.str();
}

Rat rat_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rat(j.get<int64_t>());
  if (j.is_string()) return Rat(j.get<std::string>());
  throw std::invalid_argument("module: rational entries must be integers or strings");
}

} // namespace

Mat<Rat> word_action(const Module& m, const std::vector<int>& arrows, int end_vertex) {
  return word_action_t(m, arrows, end_vertex);
}

Mat<Rat> elem_action(const Module& m, int basis_index) {
  const AlgebraElem& e = m.alg->basis[static_cast<size_t>(basis_index)];
  return word_action_t(m, e.arrows, e.wend);
}

Module make_module(const AlgebraPtr& alg, std::vector<int> dims, std::vector<Mat<Rat>> action) {
  require_alg(alg);
  Module m{alg, std::move(dims), std::move(action), Rat(0)};
  validate_module<Rat>(m, [](const Rat& c) { return c; });
  return m;
}

ModuleP make_module_fp(const AlgebraPtr& alg, std::vector<int> dims, std::vector<Mat<Fp>> action,
                       uint32_t p) {
  require_alg(alg);
  if (p < 2) throw std::invalid_argument("module: modulus must be at least 2");
  ModuleP m{alg, std::move(dims), std::move(action), Fp{0, p}};
  validate_module<Fp>(m, [p](const Rat& c) {
    auto v = fp_from_rat(c, p);
    if (!v) throw std::invalid_argument("module: relation coefficient undefined mod p");
    return *v;
  });
  return m;
}

Module zero_module(const AlgebraPtr& alg) {
  require_alg(alg);
  Module m{alg, std::vector<int>(static_cast<size_t>(alg->quiver.n), 0), {}, Rat(0)};
  for (size_t k = 0; k < alg->quiver.arrows.size(); ++k) m.action.push_back(rat_mat(0, 0));
  return m;
}

Module simple_module(const AlgebraPtr& alg, int v) {
  require_alg(alg);
  require_vertex(alg, v, "simple_module");
  Module m{alg, std::vector<int>(static_cast<size_t>(alg->quiver.n), 0), {}, Rat(0)};
  m.dims[static_cast<size_t>(v - 1)] = 1;
  for (const Arrow& a : alg->quiver.arrows) m.action.push_back(rat_mat(m.dim_at(a.src), m.dim_at(a.tgt)));
  return m;
}

std::vector<std::pair<int, int>> proj_layout(const AlgebraPtr& alg,
                                             const std::vector<int>& vertices, int v) {
  require_alg(alg);
  std::vector<std::pair<int, int>> lay;
  for (size_t s = 0; s < vertices.size(); ++s)
    for (int b : alg->block(vertices[s], v)) lay.emplace_back(static_cast<int>(s), b);
  return lay;
}

std::vector<std::pair<int, int>> inj_layout(const AlgebraPtr& alg,
                                            const std::vector<int>& vertices, int v) {
  require_alg(alg);
  std::vector<std::pair<int, int>> lay;
  for (size_t s = 0; s < vertices.size(); ++s)
    for (int b : alg->block(v, vertices[s])) lay.emplace_back(static_cast<int>(s), b);
  return lay;
}

Module projective_sum(const AlgebraPtr& alg, const std::vector<int>& vertices) {
  require_alg(alg);
  for (int v : vertices) require_vertex(alg, v, "projective_sum");
  const IceQuiver& q = alg->quiver;
  Module m{alg, std::vector<int>(static_cast<size_t>(q.n), 0), {}, Rat(0)};
  std::vector<std::map<std::pair<int, int>, int>> pos(static_cast<size_t>(q.n));
  std::vector<std::vector<std::pair<int, int>>> lay(static_cast<size_t>(q.n));
  for (int v = 1; v <= q.n; ++v) {
    lay[static_cast<size_t>(v - 1)] = proj_layout(alg, vertices, v);
    m.dims[static_cast<size_t>(v - 1)] = static_cast<int>(lay[static_cast<size_t>(v - 1)].size());
    for (size_t i = 0; i < lay[static_cast<size_t>(v - 1)].size(); ++i)
      pos[static_cast<size_t>(v - 1)][lay[static_cast<size_t>(v - 1)][i]] = static_cast<int>(i);
  }
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    int i = q.arrows[k].src, j = q.arrows[k].tgt;
    Mat<Rat> a = rat_mat(m.dim_at(i), m.dim_at(j));
    int ae = alg->arrow_elem[k];
    for (int c = 0; c < a.nc; ++c) {
      auto [s, b] = lay[static_cast<size_t>(j - 1)][static_cast<size_t>(c)];
      for (const auto& [kk, coef] : alg->mult(b, ae))
        a.at(pos[static_cast<size_t>(i - 1)].at({s, kk}), c) = coef;
    }
    m.action.push_back(std::move(a));
  }
  return m;
}

Module injective_sum(const AlgebraPtr& alg, const std::vector<int>& vertices) {
  require_alg(alg);
  for (int v : vertices) require_vertex(alg, v, "injective_sum");
  const IceQuiver& q = alg->quiver;
  Module m{alg, std::vector<int>(static_cast<size_t>(q.n), 0), {}, Rat(0)};
  std::vector<std::map<std::pair<int, int>, int>> pos(static_cast<size_t>(q.n));
  std::vector<std::vector<std::pair<int, int>>> lay(static_cast<size_t>(q.n));
  for (int v = 1; v <= q.n; ++v) {
    lay[static_cast<size_t>(v - 1)] = inj_layout(alg, vertices, v);
    m.dims[static_cast<size_t>(v - 1)] = static_cast<int>(lay[static_cast<size_t>(v - 1)].size());
    for (size_t i = 0; i < lay[static_cast<size_t>(v - 1)].size(); ++i)
      pos[static_cast<size_t>(v - 1)][lay[static_cast<size_t>(v - 1)][i]] = static_cast<int>(i);
  }
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    int i = q.arrows[k].src, j = q.arrows[k].tgt;
    Mat<Rat> a = rat_mat(m.dim_at(i), m.dim_at(j));
    int ae = alg->arrow_elem[k];
    for (int r = 0; r < a.nr; ++r) {
      auto [s, b] = lay[static_cast<size_t>(i - 1)][static_cast<size_t>(r)];
      for (const auto& [kk, coef] : alg->mult(ae, b))
        a.at(r, pos[static_cast<size_t>(j - 1)].at({s, kk})) = coef;
    }
    m.action.push_back(std::move(a));
  }
  return m;
}

Module projective_module(const AlgebraPtr& alg, int v) { return projective_sum(alg, {v}); }

Module injective_module(const AlgebraPtr& alg, int v) { return injective_sum(alg, {v}); }

Module direct_sum(const Module& a, const Module& b) {
  require_same(a, b, "direct_sum");
  const IceQuiver& q = a.alg->quiver;
  Module m{a.alg, {}, {}, Rat(0)};
  for (int v = 1; v <= q.n; ++v) m.dims.push_back(a.dim_at(v) + b.dim_at(v));
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    const Mat<Rat>& x = a.action[k];
    const Mat<Rat>& y = b.action[k];
    Mat<Rat> d = rat_mat(x.nr + y.nr, x.nc + y.nc);
    for (int i = 0; i < x.nr; ++i)
      for (int j = 0; j < x.nc; ++j) d.at(i, j) = x.at(i, j);
    for (int i = 0; i < y.nr; ++i)
      for (int j = 0; j < y.nc; ++j) d.at(x.nr + i, x.nc + j) = y.at(i, j);
    m.action.push_back(std::move(d));
  }
  return m;
}

ModuleMorphism make_morphism(Module source, Module target, std::vector<Mat<Rat>> mats) {
  require_same(source, target, "make_morphism");
  const IceQuiver& q = source.alg->quiver;
  if (static_cast<int>(mats.size()) != q.n)
    throw std::invalid_argument("morphism: one matrix per vertex required");
  for (int v = 1; v <= q.n; ++v)
    if (mats[static_cast<size_t>(v - 1)].nr != target.dim_at(v) ||
        mats[static_cast<size_t>(v - 1)].nc != source.dim_at(v))
      throw std::invalid_argument("morphism: matrix shape mismatch at vertex " + std::to_string(v));
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    int i = q.arrows[k].src, j = q.arrows[k].tgt;
    if (mat_mul(mats[static_cast<size_t>(i - 1)], source.action[k]) !=
        mat_mul(target.action[k], mats[static_cast<size_t>(j - 1)]))
      throw std::invalid_argument("morphism: matrices do not intertwine the actions");
  }
  return {std::move(source), std::move(target), std::move(mats)};
}

ModuleMorphism zero_morphism(Module source, Module target) {
  require_same(source, target, "zero_morphism");
  std::vector<Mat<Rat>> mats;
  for (int v = 1; v <= source.alg->quiver.n; ++v)
    mats.push_back(rat_mat(target.dim_at(v), source.dim_at(v)));
  return {std::move(source), std::move(target), std::move(mats)};
}

ModuleMorphism identity_morphism(Module m) {
  std::vector<Mat<Rat>> mats;
  for (int v = 1; v <= m.alg->quiver.n; ++v) mats.push_back(mat_identity(m.dim_at(v), Rat(0)));
  Module src = m;
  return {std::move(src), std::move(m), std::move(mats)};
}

ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f) {
  if (f.target.alg.get() != g.source.alg.get() || f.target.dims != g.source.dims)
    throw std::invalid_argument("morphism: composition endpoint mismatch");
  std::vector<Mat<Rat>> mats;
  for (size_t v = 0; v < f.mats.size(); ++v) mats.push_back(mat_mul(g.mats[v], f.mats[v]));
  return {f.source, g.target, std::move(mats)};
}

std::vector<ModuleMorphism> hom_basis(const Module& m, const Module& n) {
  require_same(m, n, "hom_basis");
  const IceQuiver& q = m.alg->quiver;
  std::vector<int> off(static_cast<size_t>(q.n) + 1, 0);
  for (int v = 1; v <= q.n; ++v)
    off[static_cast<size_t>(v)] = off[static_cast<size_t>(v - 1)] + n.dim_at(v) * m.dim_at(v);
  int unknowns = off[static_cast<size_t>(q.n)];
  int rows = 0;
  for (const Arrow& a : q.arrows) rows += n.dim_at(a.src) * m.dim_at(a.tgt);
  Mat<Rat> eq = rat_mat(rows, unknowns);
  int row = 0;
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    int i = q.arrows[k].src, j = q.arrows[k].tgt;
    for (int r = 0; r < n.dim_at(i); ++r)
      for (int c = 0; c < m.dim_at(j); ++c) {
        for (int s = 0; s < m.dim_at(i); ++s) {
          Rat v = m.action[k].at(s, c);
          if (!is_zero(v)) eq.at(row, off[static_cast<size_t>(i - 1)] + r * m.dim_at(i) + s) += v;
        }
        for (int t = 0; t < n.dim_at(j); ++t) {
          Rat v = n.action[k].at(r, t);
          if (!is_zero(v)) eq.at(row, off[static_cast<size_t>(j - 1)] + t * m.dim_at(j) + c) -= v;
        }
        ++row;
      }
  }
  Mat<Rat> ns = nullspace(eq);
  std::vector<ModuleMorphism> basis;
  for (int b = 0; b < ns.nc; ++b) {
    std::vector<Mat<Rat>> mats;
    for (int v = 1; v <= q.n; ++v) {
      Mat<Rat> f = rat_mat(n.dim_at(v), m.dim_at(v));
      for (int r = 0; r < f.nr; ++r)
        for (int c = 0; c < f.nc; ++c)
          f.at(r, c) = ns.at(off[static_cast<size_t>(v - 1)] + r * m.dim_at(v) + c, b);
      mats.push_back(std::move(f));
    }
    basis.push_back(ModuleMorphism{m, n, std::move(mats)});
  }
  return basis;
}

int hom_dim(const Module& m, const Module& n) {
  require_same(m, n, "hom_dim");
  if (m.total_dim() == 0 || n.total_dim() == 0) return 0;
  Presentation p = minimal_projective_presentation(m);
  int s_count = static_cast<int>(p.t1.size());
  int cols = 0, rows = 0;
  std::vector<int> coff, roff;
  for (int r : p.t0) {
    coff.push_back(cols);
    cols += n.dim_at(r);
  }
  for (int s : p.t1) {
    roff.push_back(rows);
    rows += n.dim_at(s);
  }
  if (s_count == 0) return cols;
  auto x = proj_morphism_coords(p.f, p.t1, p.t0);
  std::map<int, Mat<Rat>> cache;
  auto act = [&](int b) -> const Mat<Rat>& {
    auto it = cache.find(b);
    if (it == cache.end()) it = cache.emplace(b, elem_action(n, b)).first;
    return it->second;
  };
  Mat<Rat> map = rat_mat(rows, cols);
  for (size_t r = 0; r < p.t0.size(); ++r)
    for (size_t s = 0; s < p.t1.size(); ++s) {
      const std::vector<Rat>& coords = x[r * p.t1.size() + s];
      for (size_t b = 0; b < coords.size(); ++b) {
        if (is_zero(coords[b])) continue;
        const Mat<Rat>& w = act(static_cast<int>(b));
        for (int rr = 0; rr < w.nr; ++rr)
          for (int cc = 0; cc < w.nc; ++cc)
            map.at(roff[s] + rr, coff[r] + cc) += coords[b] * w.at(rr, cc);
      }
    }
  return cols - mat_rank(map);
}

std::pair<Module, ModuleMorphism> kernel(const ModuleMorphism& f) {
  const Module& m = f.source;
  const IceQuiver& q = m.alg->quiver;
  Module ker{m.alg, std::vector<int>(static_cast<size_t>(q.n), 0), {}, Rat(0)};
  std::vector<Mat<Rat>> inc;
  for (int v = 1; v <= q.n; ++v) {
    Mat<Rat> b = nullspace(f.mats[static_cast<size_t>(v - 1)]);
    ker.dims[static_cast<size_t>(v - 1)] = b.nc;
    inc.push_back(std::move(b));
  }
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    int i = q.arrows[k].src, j = q.arrows[k].tgt;
    auto x = mat_solve(inc[static_cast<size_t>(i - 1)],
                       mat_mul(m.action[k], inc[static_cast<size_t>(j - 1)]));
    if (!x) throw std::logic_error("module: kernel not closed under the action");
    ker.action.push_back(std::move(*x));
  }
  ModuleMorphism incl{ker, m, std::move(inc)};
  return {std::move(ker), std::move(incl)};
}

std::pair<Module, ModuleMorphism> cokernel(const ModuleMorphism& f) {
  const Module& n = f.target;
  const IceQuiver& q = n.alg->quiver;
  Module cok{n.alg, std::vector<int>(static_cast<size_t>(q.n), 0), {}, Rat(0)};
  std::vector<Mat<Rat>> proj;
  for (int v = 1; v <= q.n; ++v) {
    Mat<Rat> im = column_space_basis(f.mats[static_cast<size_t>(v - 1)]);
    Mat<Rat> p = complement_projection(im, n.dim_at(v));
    cok.dims[static_cast<size_t>(v - 1)] = p.nr;
    proj.push_back(std::move(p));
  }
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    int i = q.arrows[k].src, j = q.arrows[k].tgt;
    Mat<Rat> rhs = mat_mul(proj[static_cast<size_t>(i - 1)], n.action[k]);
    auto xt = mat_solve(mat_transpose(proj[static_cast<size_t>(j - 1)]), mat_transpose(rhs));
    if (!xt) throw std::logic_error("module: cokernel action not induced");
    cok.action.push_back(mat_transpose(*xt));
  }
  ModuleMorphism pr{n, cok, std::move(proj)};
  return {std::move(cok), std::move(pr)};
}

std::vector<int> top_dims(const Module& m) {
  const IceQuiver& q = m.alg->quiver;
  std::vector<int> t;
  for (int v = 1; v <= q.n; ++v) {
    Mat<Rat> h = rat_mat(m.dim_at(v), 0);
    for (size_t k = 0; k < q.arrows.size(); ++k)
      if (q.arrows[k].src == v) h = mat_hcat(h, m.action[k]);
    t.push_back(m.dim_at(v) - mat_rank(h));
  }
  return t;
}

std::vector<int> socle_dims(const Module& m) {
  const IceQuiver& q = m.alg->quiver;
  std::vector<int> s;
  for (int v = 1; v <= q.n; ++v) {
    Mat<Rat> h = rat_mat(0, m.dim_at(v));
    for (size_t k = 0; k < q.arrows.size(); ++k)
      if (q.arrows[k].tgt == v) h = mat_vcat(h, m.action[k]);
    s.push_back(m.dim_at(v) - mat_rank(h));
  }
  return s;
}

Presentation minimal_projective_presentation(const Module& m) {
  Presentation p;
  CoverData c0 = projective_cover(m);
  p.t0 = c0.t0;
  auto [omega, incl] = kernel(c0.cover);
  CoverData c1 = projective_cover(omega);
  p.t1 = c1.t0;
  p.f = compose(incl, c1.cover);
  p.cover = std::move(c0.cover);
  return p;
}

Copresentation minimal_injective_copresentation(const Module& m) {
  Module dm = dual(m);
  Presentation p = minimal_projective_presentation(dm);
  Copresentation c;
  c.i0 = p.t0;
  c.i1 = p.t1;
  Module i0 = injective_sum(m.alg, c.i0);
  Module i1 = injective_sum(m.alg, c.i1);
  std::vector<Mat<Rat>> g, em;
  for (size_t v = 0; v < p.f.mats.size(); ++v) g.push_back(mat_transpose(p.f.mats[v]));
  for (size_t v = 0; v < p.cover.mats.size(); ++v) em.push_back(mat_transpose(p.cover.mats[v]));
  c.embed = ModuleMorphism{m, i0, std::move(em)};
  c.g = ModuleMorphism{std::move(i0), std::move(i1), std::move(g)};
  return c;
}

Module ar_translate(const Module& m) {
  Presentation p = minimal_projective_presentation(m);
  if (p.t1.empty()) return zero_module(m.alg);
  auto x = proj_morphism_coords(p.f, p.t1, p.t0);
  AlgebraPtr aop = opposite(m.alg);
  auto elems = proj_hom_elems(aop, p.t0, p.t1);
  std::vector<Rat> coords;
  for (const ProjHomElem& e : elems)
    coords.push_back(x[static_cast<size_t>(e.s) * p.t1.size() + static_cast<size_t>(e.r)]
                      [static_cast<size_t>(e.elem)]);
  ModuleMorphism fop = proj_morphism(aop, p.t0, p.t1, coords);
  Module cok = cokernel(fop).first;
  return dual(cok);
}

int ext1_dim(const Module& m, const Module& n) {
  require_same(m, n, "ext1_dim");
  if (m.total_dim() == 0 || n.total_dim() == 0) return 0;
  CoverData c0 = projective_cover(m);
  auto [omega, incl] = kernel(c0.cover);
  if (omega.total_dim() == 0) return 0;
  int h = static_cast<int>(hom_basis(omega, n).size());
  const IceQuiver& q = m.alg->quiver;
  std::map<int, Mat<Rat>> cache;
  auto act = [&](int b) -> const Mat<Rat>& {
    auto it = cache.find(b);
    if (it == cache.end()) it = cache.emplace(b, elem_action(n, b)).first;
    return it->second;
  };
  std::vector<std::vector<std::pair<int, int>>> lay(static_cast<size_t>(q.n));
  for (int u = 1; u <= q.n; ++u) lay[static_cast<size_t>(u - 1)] = proj_layout(m.alg, c0.t0, u);
  int cols = 0;
  for (int u = 1; u <= q.n; ++u) cols += n.dim_at(u) * omega.dim_at(u);
  int gens = 0;
  for (int v : c0.t0) gens += n.dim_at(v);
  Mat<Rat> restr = rat_mat(gens, cols);
  int row = 0;
  for (size_t s = 0; s < c0.t0.size(); ++s) {
    int v = c0.t0[s];
    for (int unit = 0; unit < n.dim_at(v); ++unit) {
      int coloff = 0;
      for (int u = 1; u <= q.n; ++u) {
        const auto& lu = lay[static_cast<size_t>(u - 1)];
        const Mat<Rat>& iota = incl.mats[static_cast<size_t>(u - 1)];
        for (int c = 0; c < omega.dim_at(u); ++c)
          for (size_t pos = 0; pos < lu.size(); ++pos) {
            if (lu[pos].first != static_cast<int>(s)) continue;
            Rat w = iota.at(static_cast<int>(pos), c);
            if (is_zero(w)) continue;
            const Mat<Rat>& a = act(lu[pos].second);
            for (int r = 0; r < n.dim_at(u); ++r)
              restr.at(row, coloff + r * omega.dim_at(u) + c) += w * a.at(r, unit);
          }
        coloff += n.dim_at(u) * omega.dim_at(u);
      }
      ++row;
    }
  }
  return h - mat_rank(restr);
}

Module dual(const Module& m) {
  AlgebraPtr aop = opposite(m.alg);
  Module d{aop, m.dims, {}, Rat(0)};
  for (size_t k = 0; k < m.action.size(); ++k) d.action.push_back(mat_transpose(m.action[k]));
  return d;
}

int end_mod_rad_dim(const Module& m) {
  if (m.total_dim() == 0) return 0;
  return gram_rank(hom_basis(m, m));
}

std::vector<Module> decompose(const Module& m, uint64_t seed) {
  std::vector<Module> out;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::function<void(const Module&)> rec = [&](const Module& cur) {
    if (cur.total_dim() == 0) return;
    std::vector<ModuleMorphism> endos = hom_basis(cur, cur);
    if (gram_rank(endos) == 1) {
      out.push_back(cur);
      return;
    }
    int total = cur.total_dim();
    int budget = 40 + 8 * static_cast<int>(endos.size());
    for (int round = 0; round < budget; ++round) {
      std::vector<Mat<Rat>> phi;
      if (round < static_cast<int>(endos.size())) {
        phi = endos[static_cast<size_t>(round)].mats;
      } else {
        int h = 1 + round / 16;
        std::vector<Rat> cs;
        bool nonzero = false;
        for (size_t k = 0; k < endos.size(); ++k) {
          cs.push_back(Rat(rand_coeff(rng, h)));
          if (!is_zero(cs.back())) nonzero = true;
        }
        if (!nonzero) continue;
        for (int v = 1; v <= cur.alg->quiver.n; ++v) {
          Mat<Rat> f = rat_mat(cur.dim_at(v), cur.dim_at(v));
          for (size_t k = 0; k < endos.size(); ++k)
            if (!is_zero(cs[k]))
              f = mat_add(f, mat_scale(endos[k].mats[static_cast<size_t>(v - 1)], cs[k]));
          phi.push_back(std::move(f));
        }
      }
      Mat<Rat> tot = rat_mat(total, total);
      int offd = 0;
      for (const Mat<Rat>& f : phi) {
        for (int i = 0; i < f.nr; ++i)
          for (int j = 0; j < f.nc; ++j) tot.at(offd + i, offd + j) = f.at(i, j);
        offd += f.nr;
      }
      for (const Rat& lam : rational_roots(charpoly(tot))) {
        std::vector<Mat<Rat>> pw;
        for (const Mat<Rat>& f : phi) {
          Mat<Rat> shifted = mat_sub(f, mat_scale(mat_identity(f.nr, Rat(0)), lam));
          pw.push_back(mat_pow(std::move(shifted), total));
        }
        ModuleMorphism fit{cur, cur, pw};
        Module ker = kernel(fit).first;
        int kt = ker.total_dim();
        if (kt == 0 || kt == total) continue;
        Module img = image_of(fit).first;
        rec(ker);
        rec(img);
        return;
      }
    }
    throw std::runtime_error("decompose: retry budget exhausted on a module with End/rad dimension " +
                             std::to_string(gram_rank(endos)));
  };
  rec(m);
  return out;
}

bool is_isomorphic(const Module& m, const Module& n) {
  require_same(m, n, "is_isomorphic");
  if (m.dims != n.dims) return false;
  if (m.total_dim() == 0) return true;
  std::vector<ModuleMorphism> h = hom_basis(m, n);
  if (h.empty()) return false;
  std::mt19937_64 rng(0x15eedULL);
  for (int round = 0; round < 64; ++round) {
    int hh = 1 + round / 16;
    std::vector<Rat> cs;
    for (size_t k = 0; k < h.size(); ++k) cs.push_back(Rat(rand_coeff(rng, hh)));
    bool ok = true;
    for (int v = 1; v <= m.alg->quiver.n && ok; ++v) {
      Mat<Rat> f = rat_mat(n.dim_at(v), m.dim_at(v));
      for (size_t k = 0; k < h.size(); ++k)
        if (!is_zero(cs[k])) f = mat_add(f, mat_scale(h[k].mats[static_cast<size_t>(v - 1)], cs[k]));
      if (mat_rank(f) != m.dim_at(v)) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

namespace {

Int floor_div_int(const Int& a, const Int& b) {
  Int q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

// Canonical basis of the full-rank lattice spanned by the given integer
// columns: lower-triangular column Hermite normal form with positive diagonal
// and off-diagonal entries in each row reduced into [0, pivot).
std::vector<std::vector<Int>> hermite_basis(std::vector<std::vector<Int>> cols, int d) {
  int pivot = 0;
  for (int r = 0; r < d; ++r) {
    for (;;) {
      int best = -1;
      for (size_t j = static_cast<size_t>(pivot); j < cols.size(); ++j) {
        if (cols[j][static_cast<size_t>(r)] == 0) continue;
        if (best < 0 || abs(cols[j][static_cast<size_t>(r)]) <
                            abs(cols[static_cast<size_t>(best)][static_cast<size_t>(r)]))
          best = static_cast<int>(j);
      }
      if (best < 0) break;
      std::swap(cols[static_cast<size_t>(pivot)], cols[static_cast<size_t>(best)]);
      bool clean = true;
      const Int& h = cols[static_cast<size_t>(pivot)][static_cast<size_t>(r)];
      for (size_t j = static_cast<size_t>(pivot) + 1; j < cols.size(); ++j) {
        if (cols[j][static_cast<size_t>(r)] == 0) continue;
        Int q = cols[j][static_cast<size_t>(r)] / h;
        for (int i = 0; i < d; ++i)
          cols[j][static_cast<size_t>(i)] -= q * cols[static_cast<size_t>(pivot)][static_cast<size_t>(i)];
        if (cols[j][static_cast<size_t>(r)] != 0) clean = false;
      }
      if (clean) break;
    }
    if (static_cast<size_t>(pivot) >= cols.size() || cols[static_cast<size_t>(pivot)][static_cast<size_t>(r)] == 0)
      throw std::logic_error("module: saturated lattice lost full rank");
    if (cols[static_cast<size_t>(pivot)][static_cast<size_t>(r)] < 0)
      for (int i = 0; i < d; ++i) cols[static_cast<size_t>(pivot)][static_cast<size_t>(i)] =
          -cols[static_cast<size_t>(pivot)][static_cast<size_t>(i)];
    const Int& h = cols[static_cast<size_t>(pivot)][static_cast<size_t>(r)];
    for (int j = 0; j < pivot; ++j) {
      Int q = floor_div_int(cols[static_cast<size_t>(j)][static_cast<size_t>(r)], h);
      if (q == 0) continue;
      for (int i = 0; i < d; ++i)
        cols[static_cast<size_t>(j)][static_cast<size_t>(i)] -= q * cols[static_cast<size_t>(pivot)][static_cast<size_t>(i)];
    }
    ++pivot;
  }
  cols.resize(static_cast<size_t>(d));
  return cols;
}

// Canonical rational basis matrix (columns) of the lattice generated by the
// columns of g; canonical because HNF(D * L) / D does not depend on the
// common denominator D chosen.
Mat<Rat> lattice_canon(const Mat<Rat>& g) {
  if (g.nr == 0) return rat_mat(0, 0);
  Int den = 1;
  for (const Rat& x : g.a) den = lcm(den, denominator(x));
  std::vector<std::vector<Int>> cols(static_cast<size_t>(g.nc), std::vector<Int>(static_cast<size_t>(g.nr)));
  for (int j = 0; j < g.nc; ++j)
    for (int i = 0; i < g.nr; ++i)
      cols[static_cast<size_t>(j)][static_cast<size_t>(i)] = numerator(g.at(i, j) * Rat(den));
  auto h = hermite_basis(std::move(cols), g.nr);
  Mat<Rat> b = rat_mat(g.nr, g.nr);
  for (int j = 0; j < g.nr; ++j)
    for (int i = 0; i < g.nr; ++i)
      b.at(i, j) = Rat(h[static_cast<size_t>(j)][static_cast<size_t>(i)], den);
  return b;
}

} // namespace

Module integral_form(const Module& m) {
  require_alg(m.alg);
  const IceQuiver& q = m.alg->quiver;
  std::vector<Mat<Rat>> basis;
  for (int v = 1; v <= q.n; ++v) basis.push_back(mat_identity(m.dim_at(v), Rat(0)));
  // Saturate: ascending chain of lattices inside the span of all word images
  // of the standard lattice, which the nilpotent radical keeps finite.
  for (;;) {
    bool changed = false;
    for (size_t k = 0; k < q.arrows.size(); ++k) {
      int i = q.arrows[k].src, j = q.arrows[k].tgt;
      if (m.dim_at(i) == 0 || m.dim_at(j) == 0) continue;
      Mat<Rat> img = mat_mul(m.action[k], basis[static_cast<size_t>(j) - 1]);
      Mat<Rat> next = lattice_canon(mat_hcat(basis[static_cast<size_t>(i) - 1], img));
      if (!(next == basis[static_cast<size_t>(i) - 1])) {
        basis[static_cast<size_t>(i) - 1] = std::move(next);
        changed = true;
      }
    }
    if (!changed) break;
  }
  std::vector<Mat<Rat>> action;
  for (size_t k = 0; k < q.arrows.size(); ++k) {
    int i = q.arrows[k].src, j = q.arrows[k].tgt;
    auto x = mat_solve(basis[static_cast<size_t>(i) - 1],
                       mat_mul(m.action[k], basis[static_cast<size_t>(j) - 1]));
    if (!x) throw std::logic_error("module: lattice basis is singular");
    for (const Rat& v : x->a)
      if (denominator(v) != 1) throw std::logic_error("module: saturated lattice is not stable");
    action.push_back(std::move(*x));
  }
  // Primitivity: divide out content common to every matrix written towards a
  // vertex, rescaling that vertex's lattice, so reductions mod small primes
  // stay as generic as a vertex rescaling can make them. Bounded passes; each
  // rescaling is an isomorphism.
  auto content = [](const Mat<Rat>& a) {
    Int g = 0;
    for (const Rat& v : a.a) g = gcd(g, numerator(v));
    return abs(g);
  };
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    for (int v = 1; v <= q.n; ++v) {
      if (m.dim_at(v) == 0) continue;
      Int t = 0;
      for (size_t k = 0; k < q.arrows.size(); ++k) {
        if (q.arrows[k].src != v || q.arrows[k].tgt == v) continue;
        Int c = content(action[k]);
        if (c != 0) t = gcd(t, c);
      }
      if (t <= 1) continue;
      for (size_t k = 0; k < q.arrows.size(); ++k) {
        if (q.arrows[k].src == q.arrows[k].tgt) continue;
        if (q.arrows[k].src == v)
          for (Rat& x : action[k].a) x /= Rat(t);
        else if (q.arrows[k].tgt == v)
          for (Rat& x : action[k].a) x *= Rat(t);
      }
      changed = true;
    }
    if (!changed) break;
  }
  return make_module(m.alg, m.dims, std::move(action));
}

std::optional<ModuleP> module_mod_p(const Module& m, uint32_t p) {
  if (p < 2) throw std::invalid_argument("module: modulus must be at least 2");
  ModuleP r{m.alg, m.dims, {}, Fp{0, p}};
  for (const Mat<Rat>& a : m.action) {
    Mat<Fp> b = fp_mat(a.nr, a.nc, p);
    for (int i = 0; i < a.nr; ++i)
      for (int j = 0; j < a.nc; ++j) {
        auto v = fp_from_rat(a.at(i, j), p);
        if (!v) return std::nullopt;
        b.at(i, j) = *v;
      }
    if (mat_rank(a) != mat_rank(b)) return std::nullopt;
    r.action.push_back(std::move(b));
  }
  return r;
}

ModuleP reduce_mod_p(const Module& m, uint32_t p) {
  if (p < 2) throw std::invalid_argument("module: modulus must be at least 2");
  std::vector<Mat<Fp>> action;
  for (const Mat<Rat>& a : m.action) {
    Mat<Fp> b = fp_mat(a.nr, a.nc, p);
    for (int i = 0; i < a.nr; ++i)
      for (int j = 0; j < a.nc; ++j) {
        auto v = fp_from_rat(a.at(i, j), p);
        if (!v) throw std::invalid_argument("module: denominator divisible by the modulus");
        b.at(i, j) = *v;
      }
    action.push_back(std::move(b));
  }
  return make_module_fp(m.alg, m.dims, std::move(action), p);
}

std::vector<ProjHomElem> proj_hom_elems(const AlgebraPtr& alg, const std::vector<int>& src,
                                        const std::vector<int>& dst) {
  require_alg(alg);
  std::vector<ProjHomElem> elems;
  for (size_t r = 0; r < dst.size(); ++r)
    for (size_t s = 0; s < src.size(); ++s)
      for (int e : alg->block(dst[r], src[s]))
        elems.push_back({static_cast<int>(r), static_cast<int>(s), e});
  return elems;
}

ModuleMorphism proj_morphism(const AlgebraPtr& alg, const std::vector<int>& src,
                             const std::vector<int>& dst, const std::vector<Rat>& coords) {
  require_alg(alg);
  auto elems = proj_hom_elems(alg, src, dst);
  if (coords.size() != elems.size())
    throw std::invalid_argument("proj_morphism: coordinate count mismatch");
  Module s = projective_sum(alg, src);
  Module d = projective_sum(alg, dst);
  const IceQuiver& q = alg->quiver;
  std::vector<std::vector<std::pair<int, int>>> lays(static_cast<size_t>(q.n)),
      layd(static_cast<size_t>(q.n));
  std::vector<std::map<std::pair<int, int>, int>> posd(static_cast<size_t>(q.n));
  for (int u = 1; u <= q.n; ++u) {
    lays[static_cast<size_t>(u - 1)] = proj_layout(alg, src, u);
    layd[static_cast<size_t>(u - 1)] = proj_layout(alg, dst, u);
    for (size_t i = 0; i < layd[static_cast<size_t>(u - 1)].size(); ++i)
      posd[static_cast<size_t>(u - 1)][layd[static_cast<size_t>(u - 1)][i]] = static_cast<int>(i);
  }
  std::vector<Mat<Rat>> mats;
  for (int u = 1; u <= q.n; ++u)
    mats.push_back(rat_mat(d.dim_at(u), s.dim_at(u)));
  for (size_t k = 0; k < elems.size(); ++k) {
    if (is_zero(coords[k])) continue;
    const ProjHomElem& e = elems[k];
    for (int u = 1; u <= q.n; ++u) {
      const auto& lu = lays[static_cast<size_t>(u - 1)];
      for (size_t c = 0; c < lu.size(); ++c) {
        if (lu[c].first != e.s) continue;
        for (const auto& [kk, coef] : alg->mult(e.elem, lu[c].second))
          mats[static_cast<size_t>(u - 1)].at(posd[static_cast<size_t>(u - 1)].at({e.r, kk}),
                                              static_cast<int>(c)) += coords[k] * coef;
      }
    }
  }
  return {std::move(s), std::move(d), std::move(mats)};
}

std::vector<std::vector<Rat>> proj_morphism_coords(const ModuleMorphism& f,
                                                   const std::vector<int>& src,
                                                   const std::vector<int>& dst) {
  const AlgebraPtr& alg = f.source.alg;
  size_t dim = static_cast<size_t>(alg->dim());
  std::vector<std::vector<Rat>> x(dst.size() * src.size(), std::vector<Rat>(dim, Rat(0)));
  for (size_t s = 0; s < src.size(); ++s) {
    int v = src[s];
    auto lay = proj_layout(alg, src, v);
    int col = -1;
    for (size_t i = 0; i < lay.size(); ++i)
      if (lay[i].first == static_cast<int>(s) && lay[i].second == alg->idempotent_index(v))
        col = static_cast<int>(i);
    if (col < 0) throw std::logic_error("proj_morphism_coords: missing idempotent coordinate");
    auto layd = proj_layout(alg, dst, v);
    for (size_t i = 0; i < layd.size(); ++i) {
      Rat e = f.mats[static_cast<size_t>(v - 1)].at(static_cast<int>(i), col);
      if (is_zero(e)) continue;
      auto [r, b] = layd[i];
      x[static_cast<size_t>(r) * src.size() + s][static_cast<size_t>(b)] = e;
    }
  }
  return x;
}

nlohmann::json module_to_json(const Module& m) {
  nlohmann::json j;
  j["dim"] = m.dims;
  nlohmann::json mats = nlohmann::json::object();
  for (size_t k = 0; k < m.action.size(); ++k) {
    Mat<Rat> t = mat_transpose(m.action[k]);
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < t.nr; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < t.nc; ++c) row.push_back(rat_to_json(t.at(i, c)));
      rows.push_back(std::move(row));
    }
    mats[m.alg->quiver.arrows[k].display_id()] = std::move(rows);
  }
  j["mats"] = std::move(mats);
  j["field"] = "Q";
  return j;
}

nlohmann::json module_to_json(const ModuleP& m) {
  nlohmann::json j;
  j["dim"] = m.dims;
  nlohmann::json mats = nlohmann::json::object();
  for (size_t k = 0; k < m.action.size(); ++k) {
    Mat<Fp> t = mat_transpose(m.action[k]);
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < t.nr; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < t.nc; ++c) row.push_back(t.at(i, c).v);
      rows.push_back(std::move(row));
    }
    mats[m.alg->quiver.arrows[k].display_id()] = std::move(rows);
  }
  j["mats"] = std::move(mats);
  j["field"] = {{"Fq", m.zero.p}};
  return j;
}

namespace {

template <class K, class Entry>
std::vector<Mat<K>> mats_from_json(const AlgebraPtr& alg, const std::vector<int>& dims,
                                   const nlohmann::json& j, K zero, const Entry& entry) {
  if (!j.contains("mats") || !j["mats"].is_object())
    throw std::invalid_argument("module: missing mats object");
  std::vector<Mat<K>> action;
  for (const Arrow& a : alg->quiver.arrows) {
    int di = dims.at(static_cast<size_t>(a.src - 1));
    int dj = dims.at(static_cast<size_t>(a.tgt - 1));
    Mat<K> m(di, dj, zero);
    std::string key = a.display_id();
    if (j["mats"].contains(key)) {
      const nlohmann::json& rows = j["mats"][key];
      if (!rows.is_array() || static_cast<int>(rows.size()) != dj)
        throw std::invalid_argument("module: matrix for " + key + " must have " +
                                    std::to_string(dj) + " rows");
      for (int r = 0; r < dj; ++r) {
        if (!rows[static_cast<size_t>(r)].is_array() ||
            static_cast<int>(rows[static_cast<size_t>(r)].size()) != di)
          throw std::invalid_argument("module: matrix for " + key + " must have " +
                                      std::to_string(di) + " columns");
        for (int c = 0; c < di; ++c) m.at(c, r) = entry(rows[static_cast<size_t>(r)][static_cast<size_t>(c)]);
      }
    }
    action.push_back(std::move(m));
  }
  return action;
}

std::vector<int> dims_from_json(const AlgebraPtr& alg, const nlohmann::json& j) {
  if (!j.contains("dim") || !j["dim"].is_array())
    throw std::invalid_argument("module: missing dim array");
  std::vector<int> dims = j["dim"].get<std::vector<int>>();
  if (static_cast<int>(dims.size()) != alg->quiver.n)
    throw std::invalid_argument("module: dim length must match the vertex count");
  return dims;
}

} // namespace

Module module_from_json(const AlgebraPtr& alg, const nlohmann::json& j) {
  require_alg(alg);
  if (!j.contains("field") || !(j["field"].is_string() && j["field"] == "Q"))
    throw std::invalid_argument("module: expected field Q");
  std::vector<int> dims = dims_from_json(alg, j);
  auto action = mats_from_json<Rat>(alg, dims, j, Rat(0),
                                    [](const nlohmann::json& e) { return rat_from_json(e); });
  return make_module(alg, std::move(dims), std::move(action));
}

ModuleP module_fp_from_json(const AlgebraPtr& alg, const nlohmann::json& j) {
  require_alg(alg);
  if (!j.contains("field") || !j["field"].is_object() || !j["field"].contains("Fq"))
    throw std::invalid_argument("module: expected a finite field tag");
  uint32_t p = j["field"]["Fq"].get<uint32_t>();
  if (p < 2) throw std::invalid_argument("module: modulus must be at least 2");
  std::vector<int> dims = dims_from_json(alg, j);
  auto action = mats_from_json<Fp>(alg, dims, j, Fp{0, p}, [p](const nlohmann::json& e) {
    if (!e.is_number_integer()) throw std::invalid_argument("module: finite field entries must be integers");
    return fp_make(e.get<int64_t>(), p);
  });
  return make_module_fp(alg, std::move(dims), std::move(action), p);
}

} // namespace genbase
