#include "umx/calculus.hpp"

#include <stdexcept>

namespace umx {
namespace {

void check_var(const Algebra& alg, int i) {
  if (i < 1 || i > alg.num_unitary()) throw std::invalid_argument("variable index out of range");
}

}  // namespace

TensorPoly partial_d(int i, const Polynomial& p) {
  const Algebra& alg = p.algebra();
  check_var(alg, i);
  TensorPoly out(alg, 2);
  const Letter up = alg.u_letter(i, +1), um = alg.u_letter(i, -1);
  for (const auto& [w, c] : p.terms()) {
    const std::size_t n = w.ls.size();
    for (std::size_t j = 0; j < n; ++j) {
      if (w.ls[j] == up) out.add_term(w.sub(0, j + 1), w.sub(j + 1, n), c);
      else if (w.ls[j] == um) out.add_term(w.sub(0, j), w.sub(j, n), -c);
    }
  }
  return out;
}

Polynomial cyclic_d(int i, const Polynomial& p) {
  const Algebra& alg = p.algebra();
  check_var(alg, i);
  Polynomial out(alg);
  const Letter up = alg.u_letter(i, +1), um = alg.u_letter(i, -1);
  for (const auto& [w, c] : p.terms()) {
    for (std::size_t j = 0; j < w.ls.size(); ++j) {
      if (w.ls[j] == up) out.add_term(rotation_ending_at(alg, w, j), c);
      else if (w.ls[j] == um) out.add_term(rotation_starting_at(alg, w, j), -c);
    }
  }
  return out;
}

Polynomial number_op(const Polynomial& p) {
  Polynomial out(p.algebra());
  for (const auto& [w, c] : p.terms()) out.add_term(w, Scalar(Rat(w.degree())) * c);
  return out;
}

Polynomial number_op_inverse(const Polynomial& p) {
  Polynomial out(p.algebra());
  for (const auto& [w, c] : p.terms()) {
    if (w.degree() == 0) throw std::domain_error("number operator is singular on degree-0 terms");
    out.add_term(w, Scalar(Rat(1, w.degree())) * c);
  }
  return out;
}

TensorPoly reduced_laplacian(const Polynomial& p) {
  const Algebra& alg = p.algebra();
  TensorPoly out(alg, 2);
  std::vector<Letter> q;
  auto cut = [&alg, &q](std::size_t a, std::size_t b) {
    return alg.reduce(std::vector<Letter>(q.begin() + static_cast<std::ptrdiff_t>(a),
                                          q.begin() + static_cast<std::ptrdiff_t>(b)));
  };
  for (const auto& [w, c] : p.terms()) {
    const std::size_t n = w.ls.size();
    for (std::size_t j = 0; j < n; ++j) {
      const Letter l0 = w.ls[j];
      if (!letter_is_unitary(l0)) continue;
      // Work on the formal cyclic shift, not its reduced form: factors that
      // straddle the rotation seam must still be seen (they carry the terms
      // that compensate the number operator on words that cyclically cancel).
      // Each extracted factor is reduced on its own.
      q.clear();
      q.reserve(n);
      if (letter_usign(l0) > 0) {
        // shift p2 p1 u_i, distinguished letter last
        q.insert(q.end(), w.ls.begin() + static_cast<std::ptrdiff_t>(j) + 1, w.ls.end());
        q.insert(q.end(), w.ls.begin(), w.ls.begin() + static_cast<std::ptrdiff_t>(j));
        q.push_back(l0);
        const std::size_t len = q.size();
        for (std::size_t l = 0; l + 1 < len; ++l) {
          if (q[l] == l0) out.add_term(cut(0, l + 1), cut(l + 1, len), c);
          else if (q[l] == -l0) out.add_term(cut(0, l), cut(l + 1, len - 1), -c);
        }
      } else {
        // shift u_i^{-1} p2 p1, distinguished letter first
        q.push_back(l0);
        q.insert(q.end(), w.ls.begin() + static_cast<std::ptrdiff_t>(j) + 1, w.ls.end());
        q.insert(q.end(), w.ls.begin(), w.ls.begin() + static_cast<std::ptrdiff_t>(j));
        const std::size_t len = q.size();
        for (std::size_t l = 1; l < len; ++l) {
          if (q[l] == -l0) out.add_term(cut(1, l), cut(l + 1, len), -c);
          else if (q[l] == l0) out.add_term(cut(0, l), cut(l, len), c);
        }
      }
    }
  }
  return out;
}

Polynomial contract_T(const TraceFn& tau, const Polynomial& p) {
  const Algebra& alg = p.algebra();
  Polynomial out(alg);
  const TensorPoly d = reduced_laplacian(p);
  for (const auto& [k, c] : d.terms()) {
    const Scalar t2 = tau(k[1]);
    if (!t2.is_zero()) out.add_term(k[0], c * t2);
    const Scalar t1 = tau(k[0]);
    if (!t1.is_zero()) out.add_term(k[1], c * t1);
  }
  return out;
}

Polynomial perturb_P(const Polynomial& W, const Polynomial& p) {
  const Algebra& alg = p.algebra();
  Polynomial out(alg);
  for (int i = 1; i <= alg.num_unitary(); ++i) {
    const Polynomial dw = cyclic_d(i, W);
    if (dw.is_zero()) continue;
    const Polynomial dp = cyclic_d(i, p);
    if (dp.is_zero()) continue;
    out += dw * dp;
  }
  return out;
}

TensorPoly hash_insert(const TensorPoly& s, const TensorPoly& T) {
  if (s.rank() != 2) throw std::invalid_argument("hash insert needs a rank-2 left factor");
  TensorPoly out(s.algebra(), T.rank() + 2);
  for (const auto& [ks, cs] : s.terms())
    for (const auto& [kt, ct] : T.terms()) {
      TensorPoly::Key key;
      key.reserve(static_cast<std::size_t>(T.rank()) + 2);
      key.push_back(ks[0]);
      key.insert(key.end(), kt.begin(), kt.end());
      key.push_back(ks[1]);
      out.add_term(std::move(key), cs * ct);
    }
  return out;
}

TensorPoly delta_bar(const Polynomial& p) { return reduced_laplacian(number_op_inverse(p)); }

Polynomial t_bar(const TraceFn& tau, const Polynomial& p) { return contract_T(tau, number_op_inverse(p)); }

Polynomial p_bar(const Polynomial& W, const Polynomial& p) { return perturb_P(W, number_op_inverse(p)); }

namespace {

Polynomial fundamental(const TraceFn& tau, const Polynomial& W, const Polynomial& p, const Rat& t_weight) {
  if (!p.constant_part().is_zero()) throw std::domain_error("fundamental operators act on no-constant-term input");
  Polynomial out = p;
  Polynomial tb = t_bar(tau, p).project_pos();
  tb *= Scalar(t_weight);
  out += tb;
  if (!W.is_zero()) out += p_bar(W, p).project_pos();
  return out;
}

}  // namespace

Polynomial psi_apply(const TraceFn& tau, const Polynomial& W, const Polynomial& p) {
  return fundamental(tau, W, p, Rat(1, 2));
}

Polynomial xi_apply(const TraceFn& tau, const Polynomial& W, const Polynomial& p) {
  return fundamental(tau, W, p, Rat(1));
}

Polynomial xi_apply_series(const OperatorContext& ctx, const PolySeries& x, int order) {
  if (order < 0 || order > ctx.n_max) throw std::out_of_range("coupling order out of range");
  Polynomial out = x.coeff(order);
  for (int a = 0; a <= order; ++a) {
    const Polynomial& xb = x.coeff(order - a);
    if (xb.is_zero()) continue;
    TraceFn tau_a = [&ctx, a](const Monomial& m) { return ctx.trace(a, m); };
    out += t_bar(tau_a, xb).project_pos();
  }
  if (order >= 1 && !ctx.V.is_zero() && !x.coeff(order - 1).is_zero())
    out += p_bar(ctx.V, x.coeff(order - 1)).project_pos();
  return out;
}

PolySeries xi_inverse(const OperatorContext& ctx, const Polynomial& p) {
  const Algebra& alg = *ctx.alg;
  if (!p.constant_part().is_zero()) throw std::domain_error("xi inversion needs no-constant-term input");
  PolySeries X(alg, ctx.n_max);
  TraceFn tau0 = [&ctx](const Monomial& m) { return ctx.trace(0, m); };
  for (int n = 0; n <= ctx.n_max; ++n) {
    Polynomial rhs = n == 0 ? p : Polynomial(alg);
    for (int a = 1; a <= n; ++a) {
      const Polynomial& xb = X.coeff(n - a);
      if (xb.is_zero()) continue;
      TraceFn tau_a = [&ctx, a](const Monomial& m) { return ctx.trace(a, m); };
      rhs -= t_bar(tau_a, xb).project_pos();
      if (a == 1 && !ctx.V.is_zero()) rhs -= p_bar(ctx.V, xb).project_pos();
    }
    // Neumann sum in the strictly degree-lowering order-0 block.
    Polynomial acc = rhs;
    Polynomial y = rhs;
    int chain = 0;
    const int budget = rhs.degree();
    while (!y.is_zero()) {
      if (++chain > budget)
        throw std::logic_error("degree-lowering chain exceeded its budget");
      Polynomial z = t_bar(tau0, y).project_pos();
      z *= Scalar(-1);
      y = std::move(z);
      acc += y;
    }
    X.coeff(n) = std::move(acc);
  }
  return X;
}

ContractionMargin contraction_margin(const Rat& xi, const Polynomial& V, int K_rank) {
  if (xi <= 1) throw std::invalid_argument("xi must exceed 1");
  if (K_rank < 1) throw std::invalid_argument("K must be >= 1");
  ContractionMargin out;
  out.K = Rat(4) * (xi + 1) / (xi * (xi - 1));
  const Polynomial PV = V.project_pos();
  if (PV.is_zero()) {
    out.smallness_ok = true;
    return out;
  }
  const int d = V.degree();
  out.K += PV.l1_exact() * Rat(d) * rat_pow(xi, d);
  const Rat bound = Rat(7, 66) / (Rat(d) * rat_pow(Rat(2), static_cast<unsigned long>(K_rank - 1) * d) * rat_pow(Rat(12), d));
  out.smallness_ok = V.l1_exact() < bound;
  return out;
}

}  // namespace umx
