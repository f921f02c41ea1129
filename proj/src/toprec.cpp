#include "umx/toprec.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace umx {

CorrelatorTable::CorrelatorTable(const TraceFunctional& trace, int max_genus)
    : trace_(&trace), alg_(&trace.algebra()), max_genus_(max_genus), order_(trace.order_cap()) {
  if (max_genus_ < 0) throw std::invalid_argument("genus bound must be >= 0");
}

ScalarSeries CorrelatorTable::eval(int k, int g, const std::vector<Polynomial>& args) const {
  if (static_cast<int>(args.size()) != k)
    throw std::invalid_argument("argument count must equal k");
  ScalarSeries acc(order_);
  std::vector<Monomial> ms(static_cast<std::size_t>(k));
  std::function<void(int, const Scalar&)> expand = [&](int slot, const Scalar& coef) {
    if (slot == k) {
      ScalarSeries s = eval(k, g, ms);
      for (int n = 0; n <= order_; ++n) acc.add(n, coef * s.coeff(n));
      return;
    }
    for (const auto& [m, c] : args[static_cast<std::size_t>(slot)].terms()) {
      ms[static_cast<std::size_t>(slot)] = m;
      expand(slot + 1, coef * c);
    }
  };
  expand(0, Scalar(1));
  return acc;
}

ScalarSeries CorrelatorTable::eval(int k, int g, const std::vector<Monomial>& args) const {
  const Normalized nk = normalize(k, g, args);
  ScalarSeries out(order_);
  switch (nk.kind) {
    case KeyKind::kZero:
      break;
    case KeyKind::kConstantTrace:
      out.set(0, alg_->sigma_of(g, nk.key.ms[0]));
      break;
    case KeyKind::kRegular:
      for (int n = 0; n <= order_; ++n) out.set(n, coeff_of(nk.key, n));
      break;
  }
  return out;
}

Scalar CorrelatorTable::eval_coeff(int k, int g, const std::vector<Monomial>& args, int n) const {
  if (n < 0 || n > order_) throw std::out_of_range("coupling order outside the series cap");
  const Normalized nk = normalize(k, g, args);
  switch (nk.kind) {
    case KeyKind::kZero:
      return Scalar(0);
    case KeyKind::kConstantTrace:
      return n == 0 ? alg_->sigma_of(g, nk.key.ms[0]) : Scalar(0);
    case KeyKind::kRegular:
      return coeff_of(nk.key, n);
  }
  return Scalar(0);
}

CorrelatorTable::Normalized CorrelatorTable::normalize(int k, int g,
                                                       const std::vector<Monomial>& args) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (g < 0 || g > max_genus_) throw std::out_of_range("genus outside the configured bound");
  if (static_cast<int>(args.size()) != k)
    throw std::invalid_argument("argument count must equal k");

  Normalized nk{KeyKind::kRegular, Key{k, g, {}}};
  nk.key.ms.reserve(args.size());
  for (const auto& m : args) nk.key.ms.push_back(alg_->canonical_cyclic(m));

  if (k == 1) {
    // One-point function of a constant is the deterministic trace: sigma_g,
    // independent of the coupling.
    if (nk.key.ms[0].degree() == 0) nk.kind = KeyKind::kConstantTrace;
    return nk;
  }
  // A deterministic slot kills every higher cumulant.
  for (const auto& m : nk.key.ms) {
    if (m.degree() == 0) {
      nk.kind = KeyKind::kZero;
      return nk;
    }
  }
  std::sort(nk.key.ms.begin(), nk.key.ms.end(), MonoLess{alg_});
  return nk;
}

Scalar CorrelatorTable::coeff_of(const Key& key, int n) const {
  auto& slot = memo_[key];
  if (slot.empty()) slot.resize(static_cast<std::size_t>(order_) + 1);
  if (slot[static_cast<std::size_t>(n)]) return *slot[static_cast<std::size_t>(n)];
  Scalar v = compute_coeff(key, n);
  // Unordered-map node addresses are stable across the recursive inserts
  // made by compute_coeff, so `slot` is still valid here.
  slot[static_cast<std::size_t>(n)] = v;
  return v;
}

const CorrelatorTable::Prep& CorrelatorTable::prep_of(const Monomial& m, int need) const {
  auto it = prep_.find(m);
  if (it != prep_.end() && it->second.order >= need) return it->second;
  OperatorContext ctx = trace_->context();
  ctx.n_max = need;
  Prep pr{need, xi_inverse(ctx, Polynomial::mono(*alg_, m)), {}};
  pr.d.reserve(static_cast<std::size_t>(need) + 1);
  for (int a = 0; a <= need; ++a) pr.d.push_back(delta_bar(pr.x.coeff(a)));
  if (it == prep_.end()) it = prep_.emplace(m, std::move(pr)).first;
  else it->second = std::move(pr);
  return it->second;
}

Scalar CorrelatorTable::pair_coeff(const std::vector<TensorPoly>& d, int k1, int g1,
                                   const std::vector<Monomial>& e1, int k2, int g2,
                                   const std::vector<Monomial>& e2, int n) const {
  Scalar acc(0);
  for (int a = 0; a <= n; ++a) {
    for (const auto& [qq, c] : d[static_cast<std::size_t>(a)].terms()) {
      std::vector<Monomial> a1{qq[0]};
      a1.insert(a1.end(), e1.begin(), e1.end());
      std::vector<Monomial> a2{qq[1]};
      a2.insert(a2.end(), e2.begin(), e2.end());
      for (int i = 0; a + i <= n; ++i) {
        const Scalar s1 = eval_coeff(k1, g1, a1, i);
        if (s1.is_zero()) continue;
        acc += c * s1 * eval_coeff(k2, g2, a2, n - a - i);
      }
    }
  }
  return acc;
}

Scalar CorrelatorTable::joined_coeff(const std::vector<TensorPoly>& d, int k, int g,
                                     const std::vector<Monomial>& extra, int n) const {
  Scalar acc(0);
  for (int a = 0; a <= n; ++a) {
    for (const auto& [qq, c] : d[static_cast<std::size_t>(a)].terms()) {
      std::vector<Monomial> slots{qq[0], qq[1]};
      slots.insert(slots.end(), extra.begin(), extra.end());
      acc += c * eval_coeff(k, g, slots, n - a);
    }
  }
  return acc;
}

Scalar CorrelatorTable::compute_coeff(const Key& key, int n) const {
  const int k = key.k;
  const int g = key.g;

  if (k == 1 && g == 0) return trace_->eval(n, key.ms[0]);

  const Prep& pr = prep_of(key.ms[0], n);
  Scalar acc(0);

  if (k == 1) {
    // Genus splits across the two Laplacian slots, plus the next cumulant
    // down in genus on the joined slots.
    for (int l = 1; l <= g - 1; ++l) acc -= pair_coeff(pr.d, 1, l, {}, 1, g - l, {}, n);
    acc -= joined_coeff(pr.d, 2, g - 1, {}, n);
    return acc;
  }

  const std::vector<Monomial> rest(key.ms.begin() + 1, key.ms.end());
  const int n_rest = k - 1;

  // Single-trace contraction against the positive-genus one-point functions.
  for (int f = 1; f <= g; ++f) {
    for (int a = 0; a <= n; ++a) {
      for (const auto& [qq, c] : pr.d[static_cast<std::size_t>(a)].terms()) {
        std::vector<Monomial> keep0{qq[0]};
        keep0.insert(keep0.end(), rest.begin(), rest.end());
        std::vector<Monomial> keep1{qq[1]};
        keep1.insert(keep1.end(), rest.begin(), rest.end());
        for (int b = 0; a + b <= n; ++b) {
          const int c_rem = n - a - b;
          const Scalar s1 = eval_coeff(1, f, {qq[1]}, b);
          if (!s1.is_zero()) acc -= c * s1 * eval_coeff(k, g - f, keep0, c_rem);
          const Scalar s0 = eval_coeff(1, f, {qq[0]}, b);
          if (!s0.is_zero()) acc -= c * s0 * eval_coeff(k, g - f, keep1, c_rem);
        }
      }
    }
  }

  // Splits of the remaining arguments between the two Laplacian slots, over
  // nonempty proper subsets only: the empty and full splits are exactly the
  // contractions already absorbed into the inverted operator.
  for (unsigned mask = 1; mask + 1 < (1u << n_rest); ++mask) {
    std::vector<Monomial> in, out;
    for (int j = 0; j < n_rest; ++j)
      (((mask >> j) & 1u) ? in : out).push_back(rest[static_cast<std::size_t>(j)]);
    for (int f = 0; f <= g; ++f)
      acc -= pair_coeff(pr.d, static_cast<int>(in.size()) + 1, f, in,
                        static_cast<int>(out.size()) + 1, g - f, out, n);
  }

  // Gradient pairing against each remaining argument, dropping that slot.
  for (int j = 0; j < n_rest; ++j) {
    const Polynomial w = Polynomial::mono(*alg_, rest[static_cast<std::size_t>(j)]);
    std::vector<Monomial> others;
    others.reserve(static_cast<std::size_t>(n_rest) - 1);
    for (int l = 0; l < n_rest; ++l)
      if (l != j) others.push_back(rest[static_cast<std::size_t>(l)]);
    for (int a = 0; a <= n; ++a) {
      const Polynomial ps = p_bar(w, pr.x.coeff(a));
      for (const auto& [m, c] : ps.terms()) {
        std::vector<Monomial> slots{m};
        slots.insert(slots.end(), others.begin(), others.end());
        acc -= c * eval_coeff(k - 1, g, slots, n - a);
      }
    }
  }

  // One handle down: the (k+1)-point correlator at genus g-1 on the joined
  // Laplacian slots.
  if (g >= 1) acc -= joined_coeff(pr.d, k + 1, g - 1, rest, n);

  return acc;
}

ScalarSeries free_energy_series(const Polynomial& V, int g, int d_max) {
  if (d_max < 0) throw std::invalid_argument("series order must be >= 0");
  ScalarSeries f(d_max);
  if (d_max == 0 || V.is_zero()) return f;
  const TraceFunctional trace(V.algebra(), V, d_max - 1);
  const CorrelatorTable table(trace, g);
  const ScalarSeries one_point = table.eval(1, g, std::vector<Polynomial>{V});
  for (int d = 0; d + 1 <= d_max; ++d)
    f.set(d + 1, one_point.coeff(d) * Scalar(Rat(1, d + 1)));
  return f;
}

ScalarSeries clt_variance(const Polynomial& V, const Polynomial& p, int n_max) {
  if (!(p == p.star())) throw std::invalid_argument("statistic must be selfadjoint");
  const TraceFunctional trace(p.algebra(), V, n_max);
  const Polynomial pp = p.project_pos();
  ScalarSeries out(n_max);
  if (pp.is_zero()) return out;
  OperatorContext ctx = trace.context();
  const PolySeries x = xi_inverse(ctx, pp);
  for (int a = 0; a <= n_max; ++a) {
    const Polynomial w = p_bar(pp, x.coeff(a));
    for (int b = 0; a + b <= n_max; ++b) out.add(a + b, Scalar(-1) * trace.eval(b, w));
  }
  return out;
}

std::vector<Rat> hciz_series_sd(
    const std::map<std::string, std::vector<std::vector<Rat>>>& moments, int g, int d_max) {
  for (const auto& [name, rows] : moments) {
    (void)rows;
    if (name != "x" && name != "y")
      throw std::invalid_argument("moment data names unknown generator " + name);
  }
  if (!moments.count("x") || !moments.count("y"))
    throw std::invalid_argument("moment data must cover generators x and y");
  auto sigma = std::make_shared<MomentSigma>(g, moments);
  const Algebra alg(1, {{"x", true, -1}, {"y", true, -1}}, sigma);
  Monomial v;
  v.ls = {alg.gen_letter(0), alg.u_letter(1, +1), alg.gen_letter(1), alg.u_letter(1, -1)};
  const Polynomial V = Polynomial::mono(alg, v);
  const ScalarSeries f = free_energy_series(V, g, d_max);
  std::vector<Rat> out;
  out.reserve(static_cast<std::size_t>(d_max) + 1);
  for (int d = 0; d <= d_max; ++d) {
    const Scalar& c = f.coeff(d);
    if (!c.is_real()) throw std::logic_error("free energy coefficient is not real");
    out.push_back(c.re);
  }
  return out;
}

}  // namespace umx
