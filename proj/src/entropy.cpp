#include "ndist/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "ndist/catalogue.hpp"
#include "ndist/errors.hpp"
#include "ndist/parallel.hpp"

namespace ndist {

bool Partition::well_formed(std::size_t cloud_size) const {
  std::vector<char> seen(cloud_size, 0);
  for (const auto& c : cells) {
    if (c.empty()) return false;
    for (std::size_t i : c) {
      if (i >= cloud_size || seen[i]) return false;
      seen[i] = 1;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
}

Partition partition_from_cells(std::vector<std::vector<std::size_t>> cells, std::size_t cloud_size) {
  Partition P;
  cells.erase(std::remove_if(cells.begin(), cells.end(), [](const auto& c) { return c.empty(); }), cells.end());
  P.cells = std::move(cells);
  P.cell_of.assign(cloud_size, 0);
  for (std::size_t c = 0; c < P.cells.size(); ++c) {
    P.labels.push_back(std::to_string(c));
    for (std::size_t i : P.cells[c]) {
      if (i >= cloud_size) throw ParameterError("partition cell index outside the cloud");
      P.cell_of[i] = c;
    }
  }
  if (!P.well_formed(cloud_size)) throw ParameterError("cells are not a partition of the cloud");
  return P;
}

namespace {

// Groups indices by key in order of first appearance.
template <typename Key>
Partition group_by(const std::vector<Key>& keys, const std::vector<std::string>& key_text) {
  Partition P;
  std::map<Key, std::size_t> slot;
  P.cell_of.resize(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto [it, fresh] = slot.try_emplace(keys[i], P.cells.size());
    if (fresh) {
      P.cells.emplace_back();
      P.labels.push_back(key_text[i]);
    }
    P.cells[it->second].push_back(i);
    P.cell_of[i] = it->second;
  }
  return P;
}

}  // namespace

Partition make_partition(const System& sys, const PointCloud& cloud, Labeler labeler) {
  if (!labeler) throw ParameterError("partition needs a labeler");
  std::vector<int> lab(cloud.size());
  std::vector<std::string> text(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    lab[i] = labeler(sys.resolve(cloud[i]));
    text[i] = std::to_string(lab[i]);
  }
  Partition P = group_by(lab, text);
  P.labeler = std::move(labeler);
  return P;
}

Labeler arc_labeler(int k) {
  if (k < 1) throw ParameterError("arc count must be positive");
  return [k](const Point& p) {
    double a;
    if (auto c = p.get_if<Circle>()) a = c->x;
    else if (auto an = p.get_if<Annulus>()) a = an->theta;
    else throw InvalidPoint("arc partition needs circle or annulus points");
    return std::min(k - 1, static_cast<int>(std::floor(wrap_unit(a) * k)));
  };
}

Labeler cylinder_labeler() {
  return [](const Point& p) {
    auto s = p.get_if<Symbol>();
    if (!s) throw InvalidPoint("cylinder partition needs symbol points");
    return static_cast<int>(s->at(0));
  };
}

Labeler grid_labeler(int a, int b) {
  if (a < 1 || b < 1) throw ParameterError("grid partition sizes must be positive");
  return [a, b](const Point& p) {
    auto t = p.get_if<Torus>();
    if (!t) throw InvalidPoint("grid partition needs torus points");
    const int i = std::min(a - 1, static_cast<int>(std::floor(wrap_unit(t->x) * a)));
    const int j = std::min(b - 1, static_cast<int>(std::floor(wrap_unit(t->y) * b)));
    return i * b + j;
  };
}

std::string to_string(MeasureGenerator g) {
  switch (g) {
    case MeasureGenerator::orbit: return "orbit";
    case MeasureGenerator::uniform: return "uniform";
    case MeasureGenerator::supplied: return "supplied";
  }
  return {};
}

std::string to_string(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::partition_limit: return "partition_limit";
    case EntropyMethod::word_count: return "word_count";
    case EntropyMethod::ks_bound: return "ks_bound";
  }
  return {};
}

EmpiricalMeasure EmpiricalMeasure::uniform(std::size_t m) {
  if (m == 0) throw MeasureError("uniform measure on an empty cloud");
  EmpiricalMeasure mu;
  mu.weights.assign(m, 1.0 / static_cast<double>(m));
  mu.generator = MeasureGenerator::uniform;
  return mu;
}

namespace {

void check_weights(const std::vector<double>& w) {
  if (w.empty()) throw MeasureError("empty weight vector");
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw MeasureError("negative or non-finite weight");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw MeasureError("weights sum to " + format_real(sum) + ", not 1");
}

}  // namespace

EmpiricalMeasure EmpiricalMeasure::supplied(std::vector<double> weights) {
  check_weights(weights);
  EmpiricalMeasure mu;
  mu.weights = std::move(weights);
  mu.generator = MeasureGenerator::supplied;
  return mu;
}

OrbitSample orbit_measure(const System& sys, const Point& x, std::size_t length) {
  if (length == 0) throw MeasureError("orbit length must be positive");
  OrbitSample s;
  s.cloud.provenance = Provenance::orbit;
  s.cloud.system_id = sys.id();
  s.cloud.points.resize(length);
  for (std::size_t t = 0; t < length; ++t) s.cloud.points[t] = sys.iterate(x, static_cast<std::int64_t>(t));
  s.cloud.named.emplace_back("start", 0);
  s.measure = EmpiricalMeasure::uniform(length);
  s.measure.generator = MeasureGenerator::orbit;
  s.measure.orbit_length = length;
  return s;
}

double partition_entropy(const std::vector<double>& weights) {
  check_weights(weights);
  double h = 0.0;
  for (double w : weights)
    if (w > 0.0) h -= w * std::log(w);
  return h;
}

double partition_entropy(const Partition& P, const EmpiricalMeasure& mu) {
  std::vector<double> mass(P.size(), 0.0);
  if (mu.weights.size() != P.cell_of.size()) throw MeasureError("measure and partition sizes differ");
  for (std::size_t i = 0; i < P.cell_of.size(); ++i) mass[P.cell_of[i]] += mu.weights[i];
  check_weights(mu.weights);
  double h = 0.0;
  for (double w : mass)
    if (w > 0.0) h -= w * std::log(w);
  return h;
}

namespace {

double cloud_mesh(const System& sys, const std::vector<Point>& res) {
  double mesh = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    double nn = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < res.size(); ++j)
      if (j != i) nn = std::min(nn, sys.distance(res[i], res[j]));
    if (std::isfinite(nn)) mesh = std::max(mesh, nn);
  }
  return mesh;
}

// labels[i][k] = cell of f^k x_i, k < n
struct Itineraries {
  std::vector<std::vector<int>> labels;
  double max_snap = 0.0;
};

Itineraries itineraries(const Partition& P, const System& sys, int n, const PointCloud& cloud) {
  if (n < 1) throw ParameterError("refinement depth must be at least 1");
  if (P.cell_of.size() != cloud.size()) throw ParameterError("partition and cloud sizes differ");
  const std::size_t m = cloud.size();
  Itineraries it;
  it.labels.assign(m, std::vector<int>(static_cast<std::size_t>(n)));
  if (P.labeler) {
    parallel_for(m, [&](std::size_t i) {
      for (int k = 0; k < n; ++k) it.labels[i][static_cast<std::size_t>(k)] = P.labeler(sys.resolve(sys.iterate(cloud[i], k)));
    });
    return it;
  }
  std::vector<Point> res(m);
  std::unordered_map<std::string, std::size_t> exact;
  for (std::size_t i = 0; i < m; ++i) {
    res[i] = sys.resolve(cloud[i]);
    exact.emplace(to_string(cloud[i]), i);
  }
  const double mesh = P.mesh > 0.0 ? P.mesh : cloud_mesh(sys, res);
  std::vector<double> snap(m, 0.0);
  std::vector<int> bad_k(m, -1);
  parallel_for(m, [&](std::size_t i) {
    for (int k = 0; k < n; ++k) {
      const Point y = sys.iterate(cloud[i], k);
      std::size_t best = 0;
      double bd = 0.0;
      if (auto e = exact.find(to_string(y)); e != exact.end()) {
        best = e->second;
      } else {
        const Point ry = sys.resolve(y);
        bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
          const double d = sys.distance(ry, res[j]);
          if (d < bd) {
            bd = d;
            best = j;
          }
        }
      }
      if (bd > mesh / 2) {
        bad_k[i] = k;
        return;
      }
      snap[i] = std::max(snap[i], bd);
      it.labels[i][static_cast<std::size_t>(k)] = static_cast<int>(P.cell_of[best]);
    }
  });
  for (std::size_t i = 0; i < m; ++i)
    if (bad_k[i] >= 0)
      throw RefinementError("f^" + std::to_string(bad_k[i]) + " of cloud point " + std::to_string(i) +
                            " lies farther than mesh/2 from the cloud");
  it.max_snap = *std::max_element(snap.begin(), snap.end());
  return it;
}

}  // namespace

Partition refine_partition(const Partition& P, const System& sys, int n, const PointCloud& cloud) {
  const auto it = itineraries(P, sys, n, cloud);
  std::vector<std::string> text(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::string s;
    for (int l : it.labels[i]) {
      if (!s.empty()) s += '.';
      s += P.labels[static_cast<std::size_t>(l)];
    }
    text[i] = std::move(s);
  }
  Partition R = group_by(it.labels, text);
  R.labeler = {};
  R.mesh = P.mesh;
  R.max_snap = it.max_snap;
  return R;
}

EntropyEstimate metric_entropy_estimate(const System& sys, const Partition& P, const EmpiricalMeasure& mu,
                                        const PointCloud& cloud, int n_max) {
  if (n_max < 4) throw ParameterError("n_max must be at least 4");
  if (mu.weights.size() != cloud.size()) throw MeasureError("measure and cloud sizes differ");
  check_weights(mu.weights);
  const auto it = itineraries(P, sys, n_max, cloud);
  const std::size_t m = cloud.size();

  EntropyEstimate est;
  est.method = EntropyMethod::partition_limit;
  est.params = {{"system", sys.id()},
                {"cells", P.size()},
                {"cloud_size", m},
                {"measure", to_string(mu.generator)},
                {"orbit_length", mu.orbit_length},
                {"n_max", n_max},
                {"max_snap", it.max_snap},
                {"estimator", "mean of the last three (1/n) H(P^n)"}};

  std::vector<std::size_t> cls(m, 0);
  for (int n = 1; n <= n_max; ++n) {
    std::map<std::pair<std::size_t, int>, std::size_t> ids;
    std::vector<double> mass;
    for (std::size_t i = 0; i < m; ++i) {
      auto [pos, fresh] = ids.try_emplace({cls[i], it.labels[i][static_cast<std::size_t>(n - 1)]}, mass.size());
      if (fresh) mass.push_back(0.0);
      cls[i] = pos->second;
      mass[cls[i]] += mu.weights[i];
    }
    double h = 0.0;
    for (double w : mass)
      if (w > 0.0) h -= w * std::log(w);
    est.raw.push_back(h);
    est.per_n.push_back(h / n);
    est.cells.push_back(mass.size());
  }
  for (std::size_t k = 1; k < est.per_n.size(); ++k)
    if (est.per_n[k] > est.per_n[k - 1] + 1e-9) est.monotone = false;
  const auto& a = est.per_n;
  est.value = (a[a.size() - 1] + a[a.size() - 2] + a[a.size() - 3]) / 3.0;
  return est;
}

EntropyEstimate word_count_entropy(const System& sys, const PointCloud& cloud, int n) {
  if (!dynamic_cast<const ShiftSystem*>(&sys)) throw ParameterError("word_count_entropy needs the shift system");
  if (n < 1 || n > 20) throw ParameterError("word length must be in [1,20]");
  if (cloud.size() == 0) throw ParameterError("empty cloud");
  EntropyEstimate est;
  est.method = EntropyMethod::word_count;
  est.params = {{"system", sys.id()}, {"cloud_size", cloud.size()}, {"n", n}};
  for (int len = 1; len <= n; ++len) {
    std::vector<char> seen(std::size_t{1} << len, 0);
    std::size_t count = 0;
    for (const auto& p : cloud.points) {
      auto s = p.get_if<Symbol>();
      if (!s) throw InvalidPoint("word count needs symbol points");
      // windows left of this range repeat with the left fill's period, right of it with the right fill's
      const std::int64_t lo = s->offset - len - static_cast<std::int64_t>(s->left_fill.size());
      const std::int64_t hi = s->end() + static_cast<std::int64_t>(s->right_fill.size());
      for (std::int64_t i = lo; i < hi; ++i) {
        std::size_t code = 0;
        for (int k = 0; k < len; ++k) code = (code << 1) | s->at(i + k);
        if (!seen[code]) {
          seen[code] = 1;
          ++count;
        }
      }
    }
    const double h = std::log(static_cast<double>(count));
    est.raw.push_back(h);
    est.per_n.push_back(h / len);
    est.cells.push_back(count);
  }
  for (std::size_t k = 1; k < est.per_n.size(); ++k)
    if (est.per_n[k] > est.per_n[k - 1] + 1e-9) est.monotone = false;
  est.value = est.per_n.back();
  return est;
}

Point de_bruijn_point(int n) {
  if (n < 1 || n > 20) throw ParameterError("de Bruijn order must be in [1,20]");
  // Lyndon-word concatenation for the binary alphabet
  Symbols seq;
  std::vector<int> a(static_cast<std::size_t>(n) + 1, 0);
  std::function<void(int, int)> gen = [&](int t, int p) {
    if (t > n) {
      if (n % p == 0)
        for (int j = 1; j <= p; ++j) seq.push_back(static_cast<std::uint8_t>(a[static_cast<std::size_t>(j)]));
      return;
    }
    a[static_cast<std::size_t>(t)] = a[static_cast<std::size_t>(t - p)];
    gen(t + 1, p);
    for (int b = a[static_cast<std::size_t>(t - p)] + 1; b < 2; ++b) {
      a[static_cast<std::size_t>(t)] = b;
      gen(t + 1, t);
    }
  };
  gen(1, 1);
  for (int j = 0; j < n - 1; ++j) seq.push_back(seq[static_cast<std::size_t>(j)]);
  return canonical(Symbol::finite(std::move(seq), 0));
}

GeometricPartition geometric_partition(const System& sys, const PointCloud& cloud, const EmpiricalMeasure& mu,
                                       double r, std::size_t center) {
  if (!(r > 0.0 && r < std::exp(-1.0))) throw ParameterError("r must lie in (0, 1/e)");
  if (center >= cloud.size()) throw ParameterError("center outside the cloud");
  if (mu.weights.size() != cloud.size()) throw MeasureError("measure and cloud sizes differ");
  check_weights(mu.weights);
  const std::size_t m = cloud.size();
  const Point z = sys.resolve(cloud[center]);
  std::vector<double> d(m);
  parallel_for(m, [&](std::size_t i) { d[i] = i == center ? 0.0 : sys.distance(sys.resolve(cloud[i]), z); });
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (d[a] != d[b]) return d[a] < d[b];
    return (a == center) > (b == center);
  });

  // groups of equal distance; cum[j] = mass of groups 0..j without z
  std::vector<std::size_t> group_end;
  std::vector<double> group_radius, cum;
  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = order[k];
    if (i != center) acc += mu.weights[i];
    if (k + 1 == m || d[order[k + 1]] != d[i]) {
      group_end.push_back(k + 1);
      group_radius.push_back(d[i]);
      cum.push_back(acc);
    }
  }

  GeometricPartition g;
  g.shell_mass.push_back(1.0 - mu.weights[center]);
  std::vector<std::size_t> level(m, 0);  // largest n with the point in S_n
  std::size_t prev_end = m;
  std::size_t n = 1;
  for (;; ++n) {
    if (n > 4000) throw ConstructionError("nested balls did not close around the center by n = 4000");
    const double cap = std::pow(r, static_cast<double>(n));
    const auto pos = std::upper_bound(cum.begin(), cum.end(), cap);
    if (pos == cum.begin())
      throw ConstructionError("no ball around the center has mass <= r^" + std::to_string(n) + " (n = " +
                              std::to_string(n) + ")");
    const std::size_t j = static_cast<std::size_t>(pos - cum.begin()) - 1;
    const std::size_t end = std::min(group_end[j], prev_end);
    for (std::size_t k = 0; k < end; ++k) level[order[k]] = n;
    g.radii.push_back(group_radius[j]);
    g.shell_mass.push_back(cum[j]);
    prev_end = end;
    if (cum[j] == 0.0) break;
  }
  const std::size_t K = n;  // S_K carries no mass off the center; it joins E_0

  std::vector<std::vector<std::size_t>> cells(K);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lv = (i == center || level[i] == K) ? 0 : level[i];
    cells[lv].push_back(i);
  }
  for (const auto& c : cells) {
    double w = 0.0;
    for (std::size_t i : c) w += mu.weights[i];
    g.cell_mass.push_back(w);
    if (w > 0.0) g.entropy -= w * std::log(w);
  }
  g.partition = partition_from_cells(std::move(cells), m);
  return g;
}

double ks_series_bound() {
  const double e = std::exp(1.0);
  return e / ((e - 1.0) * (e - 1.0));
}

double ks_closing_bound(double r) {
  if (!(r > 0.0 && r < 0.5)) throw ParameterError("closing bound needs 0 < r < 1/2");
  return std::log((1.0 - r) / (1.0 - 2.0 * r)) - r * std::log(r) / ((1.0 - r) * (1.0 - r));
}

KsAudit ks_bound_audit(const System& sys, const PointCloud& cloud, const EmpiricalMeasure& mu,
                       const std::vector<double>& r_list, std::size_t center) {
  for (double r : r_list)
    if (!(r > 0.0 && r < std::exp(-1.0))) throw ParameterError("every r must lie in (0, 1/e); got " + format_real(r));
  KsAudit audit;
  bool all_ok = true;
  for (double r : r_list) {
    KsRow row;
    row.r = r;
    row.closing_bound = ks_closing_bound(r);
    try {
      const auto g = geometric_partition(sys, cloud, mu, r, center);
      row.constructed = true;
      row.entropy = g.entropy;
      row.cells = g.partition.size();
      row.within_series_bound = g.entropy <= ks_series_bound() + 1e-9;
      row.within_closing_bound = g.entropy <= row.closing_bound + 1e-9;
      row.chain_ok = true;
      for (std::size_t k = 1; k < g.cell_mass.size(); ++k) {
        const double w = g.cell_mass[k];
        const double term = w > 0.0 ? -w * std::log(w) : 0.0;
        if (term > static_cast<double>(k) * std::pow(r, static_cast<double>(k)) * -std::log(r) + 1e-12) row.chain_ok = false;
      }
    } catch (const ConstructionError& e) {
      row.error = e.what();
    }
    all_ok = all_ok && row.constructed && row.within_series_bound && row.within_closing_bound && row.chain_ok;
    audit.rows.push_back(row);
  }
  // closing bound along r_list sorted toward 0
  std::vector<double> rs = r_list;
  std::sort(rs.begin(), rs.end(), std::greater<>());
  audit.closing_decreasing = true;
  for (std::size_t k = 1; k < rs.size(); ++k)
    if (!(ks_closing_bound(rs[k]) < ks_closing_bound(rs[k - 1]))) audit.closing_decreasing = false;
  audit.closing_at_tiny_r = ks_closing_bound(1e-12);
  audit.passed = all_ok && audit.closing_decreasing && audit.closing_at_tiny_r < 1e-9;
  return audit;
}

}  // namespace ndist
