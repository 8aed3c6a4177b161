#include "genbase/homalg.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <tuple>

namespace genbase {

namespace {

constexpr uint64_t kSeedMix = 0x9e3779b97f4a7c15ULL;

// Dense coordinates of a morphism between projective sums, indexed
// [r * |src| + s] over the algebra basis, as in proj_morphism_coords.
using Coords = std::vector<std::vector<Rat>>;

int delta_mult_to_int(const Int& x) {
  if (x > 1000000 || x < -1000000)
    throw std::invalid_argument("delta: entry too large to realize as a projective sum");
  return static_cast<int>(x);
}

Rat random_height(std::mt19937_64& rng, int height) {
  uint64_t span = 2 * static_cast<uint64_t>(height) + 1;
  return Rat(static_cast<long long>(rng() % span) - height);
}

Coords empty_coords(const AlgebraPtr& alg, size_t pairs) {
  return Coords(pairs, std::vector<Rat>(static_cast<size_t>(alg->dim()), Rat(0)));
}

// One random coordinate draw for Hom(P(p1), P(p0)).
Coords random_draw(const AlgebraPtr& alg, const std::vector<int>& p1, const std::vector<int>& p0,
                   const std::vector<ProjHomElem>& elems, std::mt19937_64& rng, int height) {
  Coords x = empty_coords(alg, p0.size() * p1.size());
  for (const ProjHomElem& e : elems)
    x[static_cast<size_t>(e.r) * p1.size() + static_cast<size_t>(e.s)]
     [static_cast<size_t>(e.elem)] = random_height(rng, height);
  return x;
}

ModuleMorphism morphism_of_coords(const AlgebraPtr& alg, const std::vector<int>& p1,
                                  const std::vector<int>& p0,
                                  const std::vector<ProjHomElem>& elems, const Coords& x) {
  std::vector<Rat> coords(elems.size(), Rat(0));
  for (size_t k = 0; k < elems.size(); ++k)
    coords[k] = x[static_cast<size_t>(elems[k].r) * p1.size() + static_cast<size_t>(elems[k].s)]
                 [static_cast<size_t>(elems[k].elem)];
  return proj_morphism(alg, p1, p0, coords);
}

// dim Hom(P(fp1), P(gp0)) minus the rank of (h1, h0) -> g h1 - h0 f, with all
// Hom spaces in algebra coordinates and compositions through the stored
// multiplication.
int e_dim_coords(const AlgebraPtr& alg, const std::vector<int>& fp1, const std::vector<int>& fp0,
                 const Coords& xf, const std::vector<int>& gp1, const std::vector<int>& gp0,
                 const Coords& xg) {
  struct BlockPos {
    int offset = 0;
    std::map<int, int> pos; // algebra basis index -> row within the block
  };
  std::vector<BlockPos> bp(gp0.size() * fp1.size());
  int rows = 0;
  for (size_t r = 0; r < gp0.size(); ++r)
    for (size_t s = 0; s < fp1.size(); ++s) {
      BlockPos& e = bp[r * fp1.size() + s];
      e.offset = rows;
      int k = 0;
      for (int b : alg->block(gp0[r], fp1[s])) e.pos.emplace(b, k++);
      rows += k;
    }
  std::vector<ProjHomElem> e1 = proj_hom_elems(alg, fp1, gp1);
  std::vector<ProjHomElem> e0 = proj_hom_elems(alg, fp0, gp0);
  Mat<Rat> z = rat_mat(rows, static_cast<int>(e1.size() + e0.size()));
  std::vector<Rat> acc(static_cast<size_t>(alg->dim()));
  // Unit h1 at (t over gp1, s over fp1, b): block (r, s) of g h1 is xg[r][t] b.
  for (size_t k = 0; k < e1.size(); ++k) {
    int t = e1[k].r, s = e1[k].s, b = e1[k].elem;
    for (size_t r = 0; r < gp0.size(); ++r) {
      std::fill(acc.begin(), acc.end(), Rat(0));
      const std::vector<Rat>& xv = xg[r * gp1.size() + static_cast<size_t>(t)];
      for (int c = 0; c < alg->dim(); ++c)
        if (!is_zero(xv[static_cast<size_t>(c)]))
          alg->mult_acc(c, b, xv[static_cast<size_t>(c)], acc);
      const BlockPos& e = bp[r * fp1.size() + static_cast<size_t>(s)];
      for (const auto& [bi, row] : e.pos)
        z.at(e.offset + row, static_cast<int>(k)) = acc[static_cast<size_t>(bi)];
    }
  }
  // Unit h0 at (r over gp0, t over fp0, el): block (r, s) of -h0 f is -el xf[t][s].
  for (size_t k = 0; k < e0.size(); ++k) {
    int r = e0[k].r, t = e0[k].s, el = e0[k].elem;
    for (size_t s = 0; s < fp1.size(); ++s) {
      std::fill(acc.begin(), acc.end(), Rat(0));
      const std::vector<Rat>& xv = xf[static_cast<size_t>(t) * fp1.size() + s];
      for (int c = 0; c < alg->dim(); ++c)
        if (!is_zero(xv[static_cast<size_t>(c)]))
          alg->mult_acc(el, c, xv[static_cast<size_t>(c)], acc);
      const BlockPos& e = bp[static_cast<size_t>(r) * fp1.size() + s];
      for (const auto& [bi, row] : e.pos)
        z.at(e.offset + row, static_cast<int>(e1.size() + k)) = -acc[static_cast<size_t>(bi)];
    }
  }
  return rows - mat_rank(z);
}

// Nakayama image of the coordinates: each left multiplication P_u -> P_v by g
// becomes, at every vertex w, the transpose of right multiplication by g from
// the block (w, v) to the block (w, u).
ModuleMorphism nu_from_coords(const AlgebraPtr& alg, const std::vector<int>& p1,
                              const std::vector<int>& p0, const Coords& x) {
  Module src = injective_sum(alg, p1);
  Module tgt = injective_sum(alg, p0);
  std::vector<Mat<Rat>> mats;
  std::vector<Rat> acc(static_cast<size_t>(alg->dim()));
  for (int w = 1; w <= alg->quiver.n; ++w) {
    Mat<Rat> m = rat_mat(tgt.dim_at(w), src.dim_at(w));
    int roff = 0;
    for (size_t r = 0; r < p0.size(); ++r) {
      const std::vector<int>& brow = alg->block(w, p0[r]);
      int coff = 0;
      for (size_t s = 0; s < p1.size(); ++s) {
        const std::vector<int>& bcol = alg->block(w, p1[s]);
        const std::vector<Rat>& g = x[r * p1.size() + s];
        for (size_t i = 0; i < brow.size(); ++i) {
          std::fill(acc.begin(), acc.end(), Rat(0));
          for (int c = 0; c < alg->dim(); ++c)
            if (!is_zero(g[static_cast<size_t>(c)]))
              alg->mult_acc(brow[i], c, g[static_cast<size_t>(c)], acc);
          for (size_t j = 0; j < bcol.size(); ++j)
            m.at(roff + static_cast<int>(i), coff + static_cast<int>(j)) =
                acc[static_cast<size_t>(bcol[j])];
        }
        coff += static_cast<int>(bcol.size());
      }
      roff += static_cast<int>(brow.size());
    }
    mats.push_back(std::move(m));
  }
  return make_morphism(src, tgt, mats);
}

void check_same_algebra(const TwoTermComplex& f, const TwoTermComplex& g) {
  if (!f.f.source.alg || f.f.source.alg != g.f.source.alg)
    throw std::invalid_argument("e_dim: complexes over different algebras");
}

struct SampleKey {
  std::vector<int> kernel_dims;
  int e_self = 0;

  bool operator<(const SampleKey& o) const {
    return std::tie(kernel_dims, e_self) < std::tie(o.kernel_dims, o.e_self);
  }
};

} // namespace

std::pair<std::vector<int>, std::vector<int>> delta_split(const DeltaVector& d) {
  std::vector<int> p0;
  std::vector<int> p1;
  for (size_t v = 0; v < d.g.size(); ++v) {
    const Int& x = d.g[v];
    if (x > 0)
      p0.insert(p0.end(), static_cast<size_t>(delta_mult_to_int(x)), static_cast<int>(v) + 1);
    else if (x < 0)
      p1.insert(p1.end(), static_cast<size_t>(delta_mult_to_int(-x)), static_cast<int>(v) + 1);
  }
  return {p0, p1};
}

int e_dim(const TwoTermComplex& f, const TwoTermComplex& g) {
  check_same_algebra(f, g);
  const AlgebraPtr& alg = f.f.source.alg;
  Coords xf = proj_morphism_coords(f.f, f.p1, f.p0);
  Coords xg = proj_morphism_coords(g.f, g.p1, g.p0);
  return e_dim_coords(alg, f.p1, f.p0, xf, g.p1, g.p0, xg);
}

int e_dim_coker(const TwoTermComplex& f, const TwoTermComplex& g) {
  check_same_algebra(f, g);
  const AlgebraPtr& alg = f.f.source.alg;
  Module n = cokernel(g.f).first;
  Coords xf = proj_morphism_coords(f.f, f.p1, f.p0);
  std::vector<std::optional<Mat<Rat>>> act(static_cast<size_t>(alg->dim()));
  auto action_of = [&](int b) -> const Mat<Rat>& {
    auto bi = static_cast<size_t>(b);
    if (!act[bi]) act[bi] = elem_action(n, b);
    return *act[bi];
  };
  int rows = 0;
  int cols = 0;
  std::vector<int> roff(f.p1.size());
  std::vector<int> coff(f.p0.size());
  for (size_t s = 0; s < f.p1.size(); ++s) {
    roff[s] = rows;
    rows += n.dim_at(f.p1[s]);
  }
  for (size_t r = 0; r < f.p0.size(); ++r) {
    coff[r] = cols;
    cols += n.dim_at(f.p0[r]);
  }
  // Restriction along f in Yoneda coordinates: block (s, r) is the action of
  // the (r, s) coordinate of f on n.
  Mat<Rat> z = rat_mat(rows, cols);
  for (size_t r = 0; r < f.p0.size(); ++r)
    for (size_t s = 0; s < f.p1.size(); ++s) {
      const std::vector<Rat>& xv = xf[r * f.p1.size() + s];
      Mat<Rat> blk = rat_mat(n.dim_at(f.p1[s]), n.dim_at(f.p0[r]));
      for (int b : alg->block(f.p0[r], f.p1[s]))
        if (!is_zero(xv[static_cast<size_t>(b)]))
          blk = mat_add(blk, mat_scale(action_of(b), xv[static_cast<size_t>(b)]));
      for (int i = 0; i < blk.nr; ++i)
        for (int j = 0; j < blk.nc; ++j) z.at(roff[s] + i, coff[r] + j) = blk.at(i, j);
    }
  return rows - mat_rank(z);
}

ModuleMorphism nu_morphism(const TwoTermComplex& c) {
  if (!c.f.source.alg) throw std::invalid_argument("nu_morphism: complex without an algebra");
  Coords x = proj_morphism_coords(c.f, c.p1, c.p0);
  return nu_from_coords(c.f.source.alg, c.p1, c.p0, x);
}

std::pair<TwoTermComplex, GenericStats> generic_sample(const AlgebraPtr& alg,
                                                       const DeltaVector& d, int trials,
                                                       uint64_t seed, int height) {
  if (!alg) throw std::invalid_argument("generic_sample: null algebra");
  if (static_cast<int>(d.g.size()) != alg->quiver.n)
    throw std::invalid_argument("generic_sample: delta length does not match the vertex count");
  if (trials < 1) throw std::invalid_argument("generic_sample: trials must be at least 1");
  if (height < 1) throw std::invalid_argument("generic_sample: height must be at least 1");
  auto [p0, p1] = delta_split(d);
  std::vector<ProjHomElem> elems = proj_hom_elems(alg, p1, p0);
  std::mt19937_64 rng(seed ^ kSeedMix);
  std::optional<SampleKey> best;
  Coords best_x;
  int last_improve = 0;
  for (int t = 0; t < trials; ++t) {
    Coords x = random_draw(alg, p1, p0, elems, rng, height);
    SampleKey key;
    key.kernel_dims = kernel(nu_from_coords(alg, p1, p0, x)).first.dims;
    key.e_self = e_dim_coords(alg, p1, p0, x, p1, p0, x);
    if (!best || key < *best) {
      best = key;
      best_x = std::move(x);
      last_improve = t;
    }
  }
  TwoTermComplex c{p1, p0, morphism_of_coords(alg, p1, p0, elems, best_x)};
  GenericStats st;
  st.delta = d;
  st.samples = trials;
  st.min_kernel_dim = best->kernel_dims;
  st.e_self = best->e_self;
  Module m = cokernel(c.f).first;
  st.hom_tau = hom_dim(m, ar_translate(m));
  st.stable = trials >= 2 && last_improve <= trials - 2;
  return {std::move(c), std::move(st)};
}

namespace {

struct DrawnComplex {
  std::vector<int> p0;
  std::vector<int> p1;
  Coords x;
};

DrawnComplex draw_complex(const AlgebraPtr& alg, const DeltaVector& d, std::mt19937_64& rng,
                          int height = 97) {
  DrawnComplex out;
  std::tie(out.p0, out.p1) = delta_split(d);
  std::vector<ProjHomElem> elems = proj_hom_elems(alg, out.p1, out.p0);
  out.x = random_draw(alg, out.p1, out.p0, elems, rng, height);
  return out;
}

// Vanishing of a sampled E-invariant certifies vanishing of the generic one,
// so a split confirmed in both orders is sound; a missed split only coarsens
// the output.
bool split_certified(const AlgebraPtr& alg, const DrawnComplex& a, const DrawnComplex& b) {
  if (e_dim_coords(alg, a.p1, a.p0, a.x, b.p1, b.p0, b.x) != 0) return false;
  return e_dim_coords(alg, b.p1, b.p0, b.x, a.p1, a.p0, a.x) == 0;
}

void decompose_rec(const AlgebraPtr& alg, const DeltaVector& d, std::mt19937_64& rng,
                   std::vector<DeltaVector>& out) {
  int support = 0;
  Int weight = 0;
  for (const Int& x : d.g) {
    if (x != 0) ++support;
    weight += x > 0 ? x : Int(-x);
  }
  if (support == 0) return;
  if (support == 1 && weight == 1) {
    out.push_back(d);
    return;
  }
  std::vector<int> radix(d.g.size());
  for (size_t v = 0; v < d.g.size(); ++v)
    radix[v] = delta_mult_to_int(d.g[v] < 0 ? Int(-d.g[v]) : d.g[v]);
  std::vector<int> t(d.g.size(), 0);
  for (;;) {
    // advance the mixed-radix counter over the box between 0 and d
    size_t i = 0;
    while (i < t.size() && t[i] == radix[i]) t[i++] = 0;
    if (i == t.size()) break;
    ++t[i];
    bool all_full = true;
    for (size_t v = 0; v < t.size(); ++v)
      if (t[v] != radix[v]) {
        all_full = false;
        break;
      }
    if (all_full) continue;
    DeltaVector d1;
    DeltaVector d2;
    d1.g.resize(d.g.size());
    d2.g.resize(d.g.size());
    for (size_t v = 0; v < d.g.size(); ++v) {
      d1.g[v] = d.g[v] < 0 ? Int(-t[v]) : Int(t[v]);
      d2.g[v] = d.g[v] - d1.g[v];
    }
    DrawnComplex a = draw_complex(alg, d1, rng);
    DrawnComplex b = draw_complex(alg, d2, rng);
    if (split_certified(alg, a, b)) {
      decompose_rec(alg, d1, rng, out);
      decompose_rec(alg, d2, rng, out);
      return;
    }
  }
  out.push_back(d);
}

} // namespace

std::vector<DeltaVector> canonical_decomposition(const AlgebraPtr& alg, const DeltaVector& d,
                                                 uint64_t seed) {
  if (!alg) throw std::invalid_argument("canonical_decomposition: null algebra");
  if (static_cast<int>(d.g.size()) != alg->quiver.n)
    throw std::invalid_argument(
        "canonical_decomposition: delta length does not match the vertex count");
  std::mt19937_64 rng(seed ^ kSeedMix);
  std::vector<DeltaVector> out;
  decompose_rec(alg, d, rng, out);
  std::sort(out.begin(), out.end(), [](const DeltaVector& a, const DeltaVector& b) { return b < a; });
  DeltaVector total;
  total.g.assign(d.g.size(), Int(0));
  for (const DeltaVector& s : out)
    for (size_t v = 0; v < s.g.size(); ++v) total.g[v] += s.g[v];
  if (!(total == d)) throw std::logic_error("canonical_decomposition: summands do not sum back");
  std::vector<DrawnComplex> drawn;
  drawn.reserve(out.size());
  for (const DeltaVector& s : out) drawn.push_back(draw_complex(alg, s, rng));
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < out.size(); ++j) {
      if (i == j) continue;
      if (!is_sign_coherent(out[i], out[j]))
        throw std::logic_error("canonical_decomposition: summands are not sign coherent");
      if (e_dim_coords(alg, drawn[i].p1, drawn[i].p0, drawn[i].x, drawn[j].p1, drawn[j].p0,
                       drawn[j].x) != 0)
        throw std::logic_error("canonical_decomposition: summand E-invariant does not vanish");
    }
  return out;
}

bool is_sign_coherent(const DeltaVector& a, const DeltaVector& b) {
  if (a.g.size() != b.g.size())
    throw std::invalid_argument("is_sign_coherent: length mismatch");
  for (size_t v = 0; v < a.g.size(); ++v) {
    if (a.g[v] > 0 && b.g[v] < 0) return false;
    if (a.g[v] < 0 && b.g[v] > 0) return false;
  }
  return true;
}

DeltaVector mutate_delta(const DeltaVector& d, int i, const IceQuiver& q) {
  if (static_cast<int>(d.g.size()) != q.n)
    throw std::invalid_argument("mutate_delta: delta length does not match the vertex count");
  if (i < 1 || i > q.n) throw std::invalid_argument("mutate_delta: vertex out of range");
  if (q.is_frozen(i)) throw std::invalid_argument("mutate_delta: cannot mutate a frozen vertex");
  const Int gi = d.g[static_cast<size_t>(i) - 1];
  const Int gplus = gi > 0 ? gi : Int(0);
  const Int gminus = gi < 0 ? Int(-gi) : Int(0);
  DeltaVector out = d;
  for (const Arrow& a : q.arrows) {
    if (a.src == i && a.tgt != i) out.g[static_cast<size_t>(a.tgt) - 1] -= gminus;
    if (a.tgt == i && a.src != i) out.g[static_cast<size_t>(a.src) - 1] += gplus;
  }
  out.g[static_cast<size_t>(i) - 1] = -gi;
  return out;
}

DeltaVector project_frozen(const DeltaVector& d, const IceQuiver& q) {
  if (static_cast<int>(d.g.size()) != q.n)
    throw std::invalid_argument("project_frozen: delta length does not match the vertex count");
  DeltaVector out;
  out.g.assign(d.g.begin(), d.g.begin() + q.m);
  return out;
}

DeltaVector lift_frozen(const DeltaVector& dbar, const AlgebraPtr& alg, int trials,
                        uint64_t seed, int height) {
  if (!alg) throw std::invalid_argument("lift_frozen: null algebra");
  const IceQuiver& q = alg->quiver;
  if (static_cast<int>(dbar.g.size()) != q.m)
    throw std::invalid_argument("lift_frozen: delta length does not match the mutable count");
  if (trials < 1) throw std::invalid_argument("lift_frozen: trials must be at least 1");
  if (height < 1) throw std::invalid_argument("lift_frozen: height must be at least 1");
  DeltaVector full;
  full.g = dbar.g;
  full.g.resize(static_cast<size_t>(q.n), Int(0));
  if (q.m == q.n) return full;
  auto [p0, p1] = delta_split(full);
  if (p1.empty()) return full;
  AlgebraPtr aop = opposite(alg);
  std::vector<ProjHomElem> elems = proj_hom_elems(alg, p1, p0);
  std::vector<ProjHomElem> elems_op = proj_hom_elems(aop, p0, p1);
  std::mt19937_64 rng(seed ^ kSeedMix);
  std::optional<std::vector<int>> best;
  int last_improve = 0;
  for (int t = 0; t < trials; ++t) {
    Coords x = random_draw(alg, p1, p0, elems, rng, height);
    // Transport to the opposite algebra as in ar_translate and take the
    // cokernel of the transposed morphism there.
    std::vector<Rat> cop(elems_op.size(), Rat(0));
    for (size_t k = 0; k < elems_op.size(); ++k)
      cop[k] = x[static_cast<size_t>(elems_op[k].s) * p1.size() +
                 static_cast<size_t>(elems_op[k].r)][static_cast<size_t>(elems_op[k].elem)];
    Module c = cokernel(proj_morphism(aop, p0, p1, cop)).first;
    // Frozen multiplicity at j: dimension of the top of the cokernel at j
    // over the corner algebra on the frozen vertices.
    std::vector<int> mv;
    for (int j = q.m + 1; j <= q.n; ++j) {
      std::optional<Mat<Rat>> rad;
      for (int b = 0; b < aop->dim(); ++b) {
        const AlgebraElem& e = aop->basis[static_cast<size_t>(b)];
        if (e.length < 1 || e.wstart != j || e.wend <= q.m) continue;
        Mat<Rat> act = elem_action(c, b);
        rad = rad ? mat_hcat(*rad, act) : std::move(act);
      }
      int rank = rad ? mat_rank(*rad) : 0;
      mv.push_back(c.dim_at(j) - rank);
    }
    if (!best || mv < *best) {
      best = std::move(mv);
      last_improve = t;
    }
  }
  if (trials < 2 || last_improve > trials - 2)
    throw StabilizationError(
        "lift_frozen: frozen multiplicities did not stabilize within the trial budget");
  for (int j = q.m + 1; j <= q.n; ++j)
    full.g[static_cast<size_t>(j) - 1] = (*best)[static_cast<size_t>(j - q.m) - 1];
  return full;
}

namespace {

nlohmann::json int_to_json(const Int& x) {
  static const Int kSafe = Int(1) << 53;
  if (x <= kSafe && x >= -kSafe) return static_cast<long long>(x);
  return x.str();
}

Int int_from_json(const nlohmann::json& e) {
  if (e.is_number_integer()) return Int(e.get<long long>());
  if (e.is_string()) return Int(e.get<std::string>());
  throw std::invalid_argument("delta: entries must be integers or integer strings");
}

} // namespace

nlohmann::json delta_to_json(const DeltaVector& d) {
  nlohmann::json g = nlohmann::json::array();
  for (const Int& x : d.g) g.push_back(int_to_json(x));
  return nlohmann::json{{"g", g}};
}

DeltaVector delta_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("g") || !j["g"].is_array())
    throw std::invalid_argument("delta: expected an object with a g array");
  DeltaVector d;
  for (const auto& e : j["g"]) d.g.push_back(int_from_json(e));
  return d;
}

nlohmann::json stats_to_json(const GenericStats& s) {
  return nlohmann::json{{"delta", delta_to_json(s.delta)},
                        {"samples", s.samples},
                        {"min_kernel_dim", s.min_kernel_dim},
                        {"e_self", s.e_self},
                        {"hom_tau", s.hom_tau},
                        {"stable", s.stable}};
}

} // namespace genbase
