#include "geoflow/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

namespace geoflow {

GroupElement GroupElement::translation(double length) {
  double e = std::exp(0.5 * length);
  return {e, 0.0, 0.0, 1.0 / e, {}};
}

GroupElement GroupElement::rotation(double phi) {
  double ch = std::cos(0.5 * phi), sh = std::sin(0.5 * phi);
  return {ch, sh, -sh, ch, {}};
}

GroupElement GroupElement::compose(const GroupElement& o) const {
  GroupElement r;
  r.a = a * o.a + b * o.c;
  r.b = a * o.b + b * o.d;
  r.c = c * o.a + d * o.c;
  r.d = c * o.b + d * o.d;
  r.word = word;
  r.word.insert(r.word.end(), o.word.begin(), o.word.end());
  return r;
}

GroupElement GroupElement::inverse() const {
  GroupElement r{d, -b, -c, a, {}};
  r.word.reserve(word.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    r.word.push_back(static_cast<std::int16_t>(-*it));
  return r;
}

bool GroupElement::same_as(const GroupElement& o, double tol) const {
  double scale = 1.0;
  for (double v : {a, b, c, d, o.a, o.b, o.c, o.d})
    scale = std::max(scale, std::fabs(v));
  auto close = [&](double s) {
    return std::fabs(a - s * o.a) <= tol * scale &&
           std::fabs(b - s * o.b) <= tol * scale &&
           std::fabs(c - s * o.c) <= tol * scale &&
           std::fabs(d - s * o.d) <= tol * scale;
  };
  return close(1.0) || close(-1.0);
}

Mobius GroupElement::mobius() const {
  // Cayley conjugation of the SL(2,R) action into SU(1,1)
  return {cplx(0.5 * (a + d), 0.5 * (b - c)), cplx(0.5 * (a - d), -0.5 * (b + c))};
}

std::pair<BoundaryPoint, BoundaryPoint> GroupElement::axis_endpoints() const {
  if (!is_hyperbolic()) throw NonHyperbolic("axis_endpoints: |trace| <= 2");
  Mobius m = mobius();
  cplx bb = std::conj(m.b);
  if (std::abs(bb) < 1e-15) throw NonHyperbolic("axis_endpoints: degenerate");
  // fixed points of (a w + b)/(conj(b) w + conj(a)) on |w| = 1
  cplx A = bb, B = std::conj(m.a) - m.a, C = -m.b;
  cplx disc = std::sqrt(B * B - 4.0 * A * C);
  cplx w1 = (-B + disc) / (2.0 * A);
  cplx w2 = (-B - disc) / (2.0 * A);
  BoundaryPoint p1(std::arg(w1)), p2(std::arg(w2));
  // attracting fixed point has |derivative| < 1
  if (m.boundary_deriv(p1.theta) < 1.0) return {p2, p1};
  return {p1, p2};
}

double translation_length(const GroupElement& g) {
  double t = std::fabs(g.trace());
  if (t <= 2.0 + 1e-9)
    throw NonHyperbolic("translation_length: element is not hyperbolic");
  return 2.0 * std::acosh(0.5 * t);
}

std::vector<GroupElement> GroupPreset::symmetric_generators() const {
  std::vector<GroupElement> out;
  out.reserve(2 * generators.size());
  for (std::size_t i = 0; i < generators.size(); ++i) {
    GroupElement g = generators[i];
    g.word = {static_cast<std::int16_t>(i + 1)};
    out.push_back(g);
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    GroupElement g = generators[i].inverse();
    g.word = {static_cast<std::int16_t>(-(static_cast<int>(i) + 1))};
    out.push_back(g);
  }
  return out;
}

double GroupPreset::max_generator_displacement(const DiskPoint& o) const {
  double m = 0.0;
  for (const auto& g : generators) m = std::max(m, g.displacement(o));
  return m;
}

bool GroupPreset::in_domain(const DiskPoint& z, double tol) const {
  DiskPoint o(0, 0);
  double dz = hyp_dist(z, o);
  for (const auto& g : symmetric_generators()) {
    if (dz > hyp_dist(z, g.apply(o)) + tol) return false;
  }
  return true;
}

double GroupPreset::domain_area() const {
  if (!cocompact())
    throw std::logic_error("domain_area: preset has infinite-volume quotient");
  return geodesic_polygon_area(domain_vertices);
}

namespace {

GroupElement conj_by_rotation(double phi, const GroupElement& g) {
  GroupElement r = GroupElement::rotation(phi);
  GroupElement out = r.compose(g).compose(r.inverse());
  out.word.clear();
  return out;
}

void validate_schottky(const GroupPreset& p) {
  // ping-pong heuristic: isometric circles of all generators and inverses
  // must be pairwise disjoint
  struct Circ {
    cplx c;
    double r;
  };
  std::vector<Circ> circles;
  for (const auto& g : p.symmetric_generators()) {
    Mobius m = g.mobius();
    cplx bb = std::conj(m.b);
    if (std::abs(bb) < 1e-12)
      throw std::invalid_argument("schottky preset: generator fixes the origin");
    circles.push_back({-std::conj(m.a) / bb, 1.0 / std::abs(bb)});
  }
  for (std::size_t i = 0; i < circles.size(); ++i)
    for (std::size_t j = i + 1; j < circles.size(); ++j) {
      bool inverse_pair = (j == i + p.generators.size());
      if (inverse_pair) continue;  // same axis: circles sit on opposite sides
      if (std::abs(circles[i].c - circles[j].c) <= circles[i].r + circles[j].r)
        throw std::invalid_argument(
            "schottky preset: isometric circles are not disjoint");
    }
}

GroupPreset make_octagon() {
  GroupPreset p;
  p.name = "genus2-octagon";
  p.kind = GroupKind::CocompactSurface;
  p.relator_aware = true;
  // regular octagon with vertex angle pi/4: circumradius by bisection on the
  // angle relation cot(alpha/2) = cosh(R) tan(pi/8)
  double t8 = std::tan(M_PI / 8.0);
  auto vertex_angle = [&](double R) { return 2.0 * std::atan(1.0 / (std::cosh(R) * t8)); };
  double lo = 0.1, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (vertex_angle(mid) > M_PI / 4.0)
      lo = mid;
    else
      hi = mid;
  }
  double R = 0.5 * (lo + hi);
  p.circumradius = R;
  p.apothem = std::asinh(std::sinh(R) * std::sin(M_PI / 8.0));
  // side-pairing translations along the four axes through opposite side
  // midpoints, by twice the apothem
  GroupElement t = GroupElement::translation(2.0 * p.apothem);
  for (int k = 0; k < 4; ++k)
    p.generators.push_back(conj_by_rotation(k * M_PI / 4.0, t));
  double rv = std::tanh(0.5 * R);
  for (int k = 0; k < 8; ++k)
    p.domain_vertices.push_back(std::polar(rv, M_PI / 8.0 + k * M_PI / 4.0));
  return p;
}

GroupPreset make_schottky(int n) {
  GroupPreset p;
  p.name = "schottky" + std::to_string(n);
  p.kind = GroupKind::SchottkyFree;
  double len = (n == 2) ? 2.0 : 4.0;
  GroupElement t = GroupElement::translation(len);
  for (int k = 0; k < n; ++k)
    p.generators.push_back(conj_by_rotation(k * M_PI / n, t));
  validate_schottky(p);
  return p;
}

GroupPreset make_cyclic() {
  GroupPreset p;
  p.name = "cyclic";
  p.kind = GroupKind::SchottkyFree;
  p.generators.push_back(GroupElement::translation(2.0));
  return p;
}

}  // namespace

GroupPreset preset(const std::string& name) {
  if (name == "genus2-octagon") return make_octagon();
  if (name == "schottky2") return make_schottky(2);
  if (name == "schottky3") return make_schottky(3);
  if (name == "cyclic") return make_cyclic();
  throw UnknownPreset("unknown preset: " + name);
}

namespace {

constexpr double kDedupQuantum = 1e-7;

struct MatKey {
  std::int64_t k[4];
  bool operator==(const MatKey& o) const {
    return k[0] == o.k[0] && k[1] == o.k[1] && k[2] == o.k[2] && k[3] == o.k[3];
  }
};

struct MatKeyHash {
  std::size_t operator()(const MatKey& m) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int i = 0; i < 4; ++i) {
      h ^= static_cast<std::uint64_t>(m.k[i]);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

struct SignNormalized {
  double v[4];
  explicit SignNormalized(const GroupElement& g) {
    v[0] = g.a; v[1] = g.b; v[2] = g.c; v[3] = g.d;
    int imax = 0;
    for (int i = 1; i < 4; ++i)
      if (std::fabs(v[i]) > std::fabs(v[imax])) imax = i;
    if (v[imax] < 0.0)
      for (auto& x : v) x = -x;
  }
  MatKey key() const {
    MatKey m;
    for (int i = 0; i < 4; ++i) m.k[i] = std::llround(v[i] / kDedupQuantum);
    return m;
  }
  // keys whose cell boundary this matrix sits close to (straddle guard)
  std::vector<MatKey> probe_keys() const {
    MatKey base = key();
    std::vector<MatKey> keys{base};
    for (int i = 0; i < 4; ++i) {
      double f = v[i] / kDedupQuantum - static_cast<double>(base.k[i]);
      if (std::fabs(f) > 0.5 - 1e-3) {
        std::size_t cur = keys.size();
        for (std::size_t j = 0; j < cur; ++j) {
          MatKey alt = keys[j];
          alt.k[i] += (f > 0.0) ? 1 : -1;
          keys.push_back(alt);
        }
      }
    }
    return keys;
  }
};

class Dedup {
 public:
  // returns true when the element was new
  bool insert(const GroupElement& g) {
    SignNormalized sn(g);
    for (const MatKey& k : sn.probe_keys()) {
      auto it = buckets_.find(k);
      if (it == buckets_.end()) continue;
      for (std::size_t idx : it->second)
        if (store_[idx].same_as(g, 1e-8)) return false;
    }
    store_.push_back(g);
    store_.back().word.clear();
    buckets_[sn.key()].push_back(store_.size() - 1);
    return true;
  }
  std::size_t size() const { return store_.size(); }

 private:
  std::unordered_map<MatKey, std::vector<std::size_t>, MatKeyHash> buckets_;
  std::vector<GroupElement> store_;
};

}  // namespace

OrbitTable enumerate_orbit(const GroupPreset& g, const DiskPoint& o, double R,
                           const OrbitBudget& budget) {
  if (!(R > 0.0)) throw std::invalid_argument("enumerate_orbit: R must be > 0");
  const bool free_group = (g.kind == GroupKind::SchottkyFree);
  const double slack = 2.0 * g.max_generator_displacement(o);
  const double prune = R + slack;
  auto gens = g.symmetric_generators();
  const int ng = static_cast<int>(gens.size());

  OrbitTable table;
  table.origin = o;
  table.radius = R;
  table.entries.push_back({GroupElement::identity(), 0.0});

  Dedup seen;
  std::deque<GroupElement> queue;
  GroupElement id = GroupElement::identity();
  seen.insert(id);
  queue.push_back(id);
  std::size_t visited = 1;

  while (!queue.empty()) {
    GroupElement cur = queue.front();
    queue.pop_front();
    std::int16_t last = cur.word.empty() ? 0 : cur.word.back();
    for (int i = 0; i < ng; ++i) {
      if (free_group && last != 0 && gens[i].word[0] == -last) continue;
      GroupElement nxt = cur.compose(gens[i]);
      double disp = nxt.displacement(o);
      if (disp > prune) continue;
      if (!free_group && !seen.insert(nxt)) continue;
      ++visited;
      if (visited > budget.max_visited)
        throw BudgetExceeded("enumerate_orbit: visited-node budget exceeded");
      if (disp <= R) {
        table.entries.push_back({nxt, disp});
        if (table.entries.size() > budget.max_entries)
          throw BudgetExceeded("enumerate_orbit: entry budget exceeded");
      }
      queue.push_back(std::move(nxt));
    }
  }

  std::sort(table.entries.begin(), table.entries.end(),
            [](const OrbitEntry& x, const OrbitEntry& y) {
              if (x.disp != y.disp) return x.disp < y.disp;
              return x.g.word < y.g.word;
            });
  return table;
}

namespace {

std::vector<std::int16_t> canonical_rotation(const std::vector<std::int16_t>& w) {
  std::vector<std::int16_t> best = w;
  std::vector<std::int16_t> cur = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

std::size_t cyclic_period(const std::vector<std::int16_t>& w) {
  for (std::size_t p = 1; p < w.size(); ++p) {
    if (w.size() % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < w.size() && ok; ++i) ok = (w[i] == w[i % p]);
    if (ok) return p;
  }
  return w.size();
}

std::string word_key(const std::vector<std::int16_t>& w) {
  std::string s;
  for (auto v : w) {
    s += std::to_string(v);
    s += ',';
  }
  return s;
}

std::vector<ConjClass> conj_classes_free(const GroupPreset& g, double t,
                                         const ConjClassOptions& opts) {
  auto gens = g.symmetric_generators();
  const int ng = static_cast<int>(gens.size());
  std::set<std::string> keys;
  std::vector<ConjClass> out;
  std::size_t words_tried = 0;

  std::vector<int> letters;
  GroupElement acc = GroupElement::identity();
  std::vector<GroupElement> stack{acc};

  // translation length is not monotone in word length (commutator powers dip
  // below shorter words), so a fixed idle-length stop is unsound and a full
  // scan is exponential. Track the smallest observed length-per-letter rate
  // and scan while n * 0.9 * min_rate could still reach t.
  double min_rate = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= 64; ++n) {
    if (static_cast<double>(n) > t / (0.9 * min_rate) + 1.0) break;
    // enumerate reduced words of length n
    std::vector<int> idx(n, 0);
    std::vector<GroupElement> pref(n + 1);
    pref[0] = GroupElement::identity();
    std::size_t depth = 0;
    while (true) {
      if (idx[depth] >= ng) {
        if (depth == 0) break;
        idx[depth] = 0;
        --depth;
        ++idx[depth];
        continue;
      }
      // reduced: no backtracking against the previous letter
      if (depth > 0 &&
          gens[idx[depth]].word[0] == -pref[depth].word.back()) {
        ++idx[depth];
        continue;
      }
      pref[depth + 1] = pref[depth].compose(gens[idx[depth]]);
      if (depth + 1 < n) {
        ++depth;
        continue;
      }
      // full word
      if (++words_tried > 20'000'000)
        throw BudgetExceeded("conj_classes_up_to: word budget exceeded");
      const GroupElement& w = pref[n];
      bool cyc_reduced = (n == 1) || (w.word.front() != -w.word.back());
      if (cyc_reduced && w.is_hyperbolic()) {
        double len = translation_length(w);
        min_rate = std::min(min_rate, len / static_cast<double>(n));
        if (len <= t + 1e-12) {
          auto canon = canonical_rotation(w.word);
          std::string key = word_key(canon);
          if (!keys.count(key)) {
            keys.insert(key);
            ConjClass cc;
            cc.representative = w;
            cc.length = len;
            cc.primitive = (cyclic_period(canon) == canon.size());
            cc.multiplicity_key = key;
            out.push_back(std::move(cc));
          }
        }
      }
      ++idx[depth];
    }
    (void)opts;
  }
  std::sort(out.begin(), out.end(), [](const ConjClass& x, const ConjClass& y) {
    if (x.length != y.length) return x.length < y.length;
    return x.multiplicity_key < y.multiplicity_key;
  });
  return out;
}

std::vector<ConjClass> conj_classes_surface(const GroupPreset& g, double t,
                                            const ConjClassOptions& opts) {
  DiskPoint o(0, 0);
  // a conjugate whose axis crosses the Dirichlet domain has displacement at
  // most 2 acosh(cosh(t/2) cosh(circumradius))
  double rc = g.circumradius;
  double r_cand =
      2.0 * std::acosh(std::cosh(0.5 * t) * std::cosh(rc)) + 0.2;
  OrbitTable table = enumerate_orbit(g, o, r_cand, opts.budget);

  double search_radius =
      opts.conj_search_radius > 0.0 ? opts.conj_search_radius : (2.0 * t / 3.0 + 4.0);
  std::vector<const GroupElement*> conjugators;
  for (const auto& e : table.entries)
    if (e.disp <= search_radius) conjugators.push_back(&e.g);

  struct Cand {
    const GroupElement* g;
    double len;
  };
  std::vector<Cand> cands;
  for (const auto& e : table.entries) {
    if (!e.g.is_hyperbolic()) continue;
    double len = translation_length(e.g);
    if (len <= t + 1e-9) cands.push_back({&e.g, len});
  }
  std::sort(cands.begin(), cands.end(),
            [](const Cand& x, const Cand& y) { return x.len < y.len; });

  std::vector<ConjClass> out;
  std::size_t i = 0;
  while (i < cands.size()) {
    std::size_t j = i;
    while (j < cands.size() && cands[j].len - cands[i].len < 1e-6) ++j;
    // union-find within the equal-length cluster
    std::vector<int> parent(j - i);
    for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = static_cast<int>(k);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t p = i; p < j; ++p) {
      for (std::size_t q = p + 1; q < j; ++q) {
        if (find(static_cast<int>(p - i)) == find(static_cast<int>(q - i))) continue;
        for (const GroupElement* h : conjugators) {
          GroupElement conj = h->compose(*cands[p].g).compose(h->inverse());
          if (conj.same_as(*cands[q].g, 1e-8)) {
            parent[find(static_cast<int>(p - i))] = find(static_cast<int>(q - i));
            break;
          }
        }
      }
    }
    for (std::size_t k = 0; k < parent.size(); ++k) {
      if (find(static_cast<int>(k)) != static_cast<int>(k)) continue;
      ConjClass cc;
      cc.representative = *cands[i + k].g;
      cc.length = cands[i + k].len;
      cc.primitive = true;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "L%.6f|T%.6f", cc.length,
                    std::fabs(cc.representative.trace()));
      cc.multiplicity_key = buf;
      out.push_back(std::move(cc));
    }
    i = j;
  }
  // power detection: integer length-ratio against shorter classes
  std::vector<double> lengths;
  for (const auto& c : out) lengths.push_back(c.length);
  for (auto& c : out) {
    for (double l0 : lengths) {
      if (l0 >= c.length - 1e-6) break;
      double m = c.length / l0;
      if (std::fabs(m - std::round(m)) < 1e-6 && std::round(m) >= 2.0) {
        c.primitive = false;
        break;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<ConjClass> conj_classes_up_to(const GroupPreset& g, double t,
                                          const ConjClassOptions& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("conj_classes_up_to: t must be > 0");
  if (g.kind == GroupKind::SchottkyFree) return conj_classes_free(g, t, opts);
  return conj_classes_surface(g, t, opts);
}

std::pair<DiskPoint, GroupElement> fold_to_domain(const GroupPreset& g,
                                                  const DiskPoint& z) {
  DiskPoint o(0, 0);
  auto gens = g.symmetric_generators();
  DiskPoint cur = z;
  GroupElement acc = GroupElement::identity();
  for (std::size_t step = 0; step < 1'000'000; ++step) {
    double best = hyp_dist(cur, o);
    int best_i = -1;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      double d = hyp_dist(gens[i].apply(cur), o);
      if (d < best - 1e-12) {
        best = d;
        best_i = static_cast<int>(i);
      }
    }
    if (best_i < 0) {
      return {cur, acc};
    }
    cur = gens[best_i].apply(cur);
    acc = gens[best_i].compose(acc);
  }
  throw FoldingFailed("fold_to_domain: no convergence after 1e6 steps");
}

std::pair<UnitTangent, GroupElement> fold_to_domain(const GroupPreset& g,
                                                    const UnitTangent& v) {
  auto [z, gamma] = fold_to_domain(g, v.base);
  (void)z;
  return {gamma.apply(v), gamma};
}

}  // namespace geoflow
