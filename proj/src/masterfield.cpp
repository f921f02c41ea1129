#include "umx/masterfield.hpp"

#include <stdexcept>

namespace umx {

TraceFunctional::TraceFunctional(const Algebra& alg, Polynomial V, int n_max, bool real_ensemble)
    : alg_(&alg), V_(std::move(V)), n_max_(n_max) {
  if (n_max_ < 0) throw std::invalid_argument("order cap must be >= 0");
  if (real_ensemble && !is_cyclically_selfadjoint(V_))
    throw std::invalid_argument("potential is not selfadjoint up to cyclic symmetry");
  dv_.reserve(static_cast<std::size_t>(alg.num_unitary()) + 1);
  dv_.emplace_back(alg);  // unused slot 0
  for (int i = 1; i <= alg.num_unitary(); ++i) dv_.push_back(cyclic_d(i, V_));
}

bool TraceFunctional::is_cyclically_selfadjoint(const Polynomial& V) {
  const Algebra& alg = V.algebra();
  // Pure-constant terms are themselves traces of products, so rotate the
  // underlying generator word to its minimal representative before comparing.
  auto canon = [&alg](const Monomial& m) {
    Monomial c = alg.canonical_cyclic(m);
    if (c.size() == 1 && !letter_is_unitary(c.ls[0])) {
      const BWord& w = alg.word(letter_cid(c.ls[0]));
      BWord best = w;
      BWord rot = w;
      for (std::size_t k = 1; k < w.size(); ++k) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
      }
      if (best != w) c.ls[0] = const_letter(alg.intern(best));
    }
    return c;
  };
  Polynomial diff(alg);
  const Polynomial vs = V.star();
  for (const auto& [m, c] : V.terms()) diff.add_term(canon(m), c);
  for (const auto& [m, c] : vs.terms()) diff.add_term(canon(m), -c);
  return diff.is_zero();
}

Scalar TraceFunctional::eval(int order, const Monomial& m) const {
  if (order < 0) return Scalar(0);
  if (order > n_max_) throw std::out_of_range("coupling order exceeds the configured cap");
  return eval_canonical(order, alg_->canonical_cyclic(m));
}

Scalar TraceFunctional::eval(int order, const Polynomial& p) const {
  Scalar acc(0);
  for (const auto& [m, c] : p.terms()) acc += c * eval(order, m);
  return acc;
}

ScalarSeries TraceFunctional::eval_series(const Polynomial& p) const {
  ScalarSeries out(n_max_);
  for (int k = 0; k <= n_max_; ++k) out.set(k, eval(k, p));
  return out;
}

ScalarSeries TraceFunctional::eval_series(const TensorPoly& t) const {
  ScalarSeries out(n_max_);
  for (const auto& [key, c] : t.terms()) {
    ScalarSeries prod(n_max_);
    prod.set(0, c);
    for (const Monomial& slot : key) {
      ScalarSeries s(n_max_);
      for (int k = 0; k <= n_max_; ++k) s.set(k, eval(k, slot));
      prod = prod * s;
    }
    out += prod;
  }
  return out;
}

Scalar TraceFunctional::eval_canonical(int order, const Monomial& w) const {
  if (w.degree() == 0) return order == 0 ? alg_->sigma_of(0, w) : Scalar(0);
  Key key{order, w};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  // Designated occurrence: the last positive unitary letter if any (the word
  // is rotated to end there); otherwise the first inverse letter (the word is
  // rotated to start there).
  const std::size_t n = w.ls.size();
  std::size_t pos = n;
  for (std::size_t j = n; j-- > 0;) {
    if (letter_is_unitary(w.ls[j]) && letter_usign(w.ls[j]) > 0) {
      pos = j;
      break;
    }
  }
  Scalar acc(0);
  if (pos < n) {
    const Letter ui = w.ls[pos];
    const Monomial r = rotation_ending_at(*alg_, w, pos);
    const std::size_t len = r.ls.size();
    // r ends in u_i; isolating the boundary split of the defining equation:
    // tau(r) = -sum_{u_i at j<last} tau tau + sum_{u_i^{-1} at j} tau tau
    //          - t tau((cyclic_i V) r).
    for (std::size_t j = 0; j + 1 < len; ++j) {
      if (r.ls[j] == ui) {
        const Monomial a = r.sub(0, j + 1), b = r.sub(j + 1, len);
        for (int x = 0; x <= order; ++x) {
          const Scalar ta = eval(x, a);
          if (!ta.is_zero()) acc -= ta * eval(order - x, b);
        }
      } else if (r.ls[j] == -ui) {
        const Monomial a = r.sub(0, j), b = r.sub(j, len);
        for (int x = 0; x <= order; ++x) {
          const Scalar ta = eval(x, a);
          if (!ta.is_zero()) acc += ta * eval(order - x, b);
        }
      }
    }
    const Polynomial& dvi = dv_[static_cast<std::size_t>(letter_uvar(ui))];
    if (order >= 1 && !dvi.is_zero())
      acc -= eval(order - 1, dvi * Polynomial::mono(*alg_, r));
  } else {
    // Only inverse unitary letters; mirror recursion on the rotation starting
    // with u_i^{-1}:
    // tau(r) = +sum_{u_i at j} tau tau - sum_{u_i^{-1} at j>0} tau tau
    //          + t tau((cyclic_i V) r).
    for (pos = 0; pos < n; ++pos)
      if (letter_is_unitary(w.ls[pos])) break;
    const Letter ui = -w.ls[pos];  // the positive letter of the variable
    const Monomial r = rotation_starting_at(*alg_, w, pos);
    const std::size_t len = r.ls.size();
    for (std::size_t j = 1; j < len; ++j) {
      if (r.ls[j] == ui) {
        const Monomial a = r.sub(0, j + 1), b = r.sub(j + 1, len);
        for (int x = 0; x <= order; ++x) {
          const Scalar ta = eval(x, a);
          if (!ta.is_zero()) acc += ta * eval(order - x, b);
        }
      } else if (r.ls[j] == -ui) {
        const Monomial a = r.sub(0, j), b = r.sub(j, len);
        for (int x = 0; x <= order; ++x) {
          const Scalar ta = eval(x, a);
          if (!ta.is_zero()) acc -= ta * eval(order - x, b);
        }
      }
    }
    const Polynomial& dvi = dv_[static_cast<std::size_t>(letter_uvar(ui))];
    if (order >= 1 && !dvi.is_zero())
      acc += eval(order - 1, dvi * Polynomial::mono(*alg_, r));
  }
  memo_.emplace(std::move(key), acc);
  return acc;
}

Scalar FreenessOracle::eval(const Polynomial& p) const {
  Scalar acc(0);
  for (const auto& [m, c] : p.terms()) acc += c * eval(m);
  return acc;
}

Scalar FreenessOracle::eval(const Monomial& m) const {
  std::vector<Run> runs;
  runs.reserve(m.ls.size());
  for (Letter l : m.ls) {
    if (letter_is_unitary(l)) {
      const int v = letter_uvar(l);
      if (!runs.empty() && runs.back().var == v) runs.back().exp += letter_usign(l);
      else runs.push_back({v, letter_usign(l)});
    } else {
      runs.push_back({0, letter_cid(l)});
    }
  }
  return eval_runs(std::move(runs));
}

Scalar FreenessOracle::eval_runs(std::vector<Run> runs) const {
  // Normalize: drop trivial unitary runs, merge equal-algebra neighbours.
  for (std::size_t i = 0; i < runs.size();) {
    if (runs[i].var > 0 && runs[i].exp == 0) {
      runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(i));
      if (i > 0) --i;
      continue;
    }
    if (i + 1 < runs.size() && runs[i].var == runs[i + 1].var) {
      if (runs[i].var > 0) {
        runs[i].exp += runs[i + 1].exp;
      } else {
        runs[i].exp = alg_->concat(static_cast<int>(runs[i].exp), static_cast<int>(runs[i + 1].exp));
      }
      runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      continue;
    }
    ++i;
  }

  if (runs.empty()) return Scalar(1);
  if (runs.size() == 1) {
    const Run& r = runs[0];
    if (r.var > 0) return Scalar(0);  // nonzero power of a limit unitary
    return alg_->sigma().value(0, static_cast<int>(r.exp), *alg_);
  }

  RunKey key;
  key.reserve(2 * runs.size());
  for (const Run& r : runs) {
    key.push_back(r.var);
    key.push_back(r.exp);
  }
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  std::vector<std::size_t> cpos;
  for (std::size_t i = 0; i < runs.size(); ++i)
    if (runs[i].var == 0) cpos.push_back(i);

  Scalar acc(0);
  if (!cpos.empty()) {
    // Alternating products of centered factors have zero trace; unitary runs
    // are already centered, so expand over the constant positions replaced by
    // their traces:  0 = sum_T (-1)^|T| prod sigma * tau(word minus T).
    const std::size_t nsub = std::size_t{1} << cpos.size();
    for (std::size_t mask = 1; mask < nsub; ++mask) {
      Scalar coef(1);
      std::vector<Run> rest;
      rest.reserve(runs.size());
      int bits = 0;
      for (std::size_t i = 0, ci = 0; i < runs.size(); ++i) {
        if (ci < cpos.size() && cpos[ci] == i) {
          const bool drop = (mask >> ci) & 1u;
          ++ci;
          if (drop) {
            coef *= alg_->sigma().value(0, static_cast<int>(runs[i].exp), *alg_);
            ++bits;
            continue;
          }
        }
        rest.push_back(runs[i]);
      }
      if (coef.is_zero()) continue;
      if (bits % 2 == 0) coef *= Scalar(-1);
      acc += coef * eval_runs(std::move(rest));
    }
  }
  // No constant runs: an alternating product of centered unitary runs, zero.

  memo_.emplace(std::move(key), acc);
  return acc;
}

Scalar haar_trace(const Polynomial& p) {
  TraceFunctional tau(p.algebra(), Polynomial::zero(p.algebra()), 0);
  return tau.eval(0, p);
}

Scalar freeness_oracle(const Polynomial& p) { return FreenessOracle(p.algebra()).eval(p); }

ScalarSeries perturbative_trace(const Polynomial& V, const Polynomial& p, int n_max) {
  TraceFunctional tau(p.algebra(), V, n_max);
  return tau.eval_series(p);
}

}  // namespace umx
