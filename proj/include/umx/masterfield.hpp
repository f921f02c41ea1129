#ifndef UMX_MASTERFIELD_HPP
#define UMX_MASTERFIELD_HPP

#include <unordered_map>

#include "umx/calculus.hpp"
#include "umx/series.hpp"

namespace umx {

// The limit trace at leading order: unique unital trace with
// tau (x) tau(partial_i p) + t*tau((cyclic_i V) p) = 0 and tau|const = sigma_0,
// computed order-by-order in the coupling t by the boundary-split degree
// recursion, memoized on the canonical cyclic form.
class TraceFunctional {
 public:
  TraceFunctional(const Algebra& alg, Polynomial V, int n_max, bool real_ensemble = true);

  const Algebra& algebra() const { return *alg_; }
  const Polynomial& potential() const { return V_; }
  int order_cap() const { return n_max_; }

  Scalar eval(int order, const Monomial& m) const;
  Scalar eval(int order, const Polynomial& p) const;
  ScalarSeries eval_series(const Polynomial& p) const;
  // Product of per-slot series (rank 2: tau (x) tau).
  ScalarSeries eval_series(const TensorPoly& t) const;

  TraceFn order_fn(int k) const {
    return [this, k](const Monomial& m) { return eval(k, m); };
  }
  SeriesTraceFn series_fn() const {
    return [this](int k, const Monomial& m) { return eval(k, m); };
  }
  OperatorContext context() const { return OperatorContext{alg_, V_, n_max_, series_fn()}; }

  // Every monomial of V* is a cyclic shift of a monomial of V (with matching
  // coefficients); this makes the Gibbs weight real.
  static bool is_cyclically_selfadjoint(const Polynomial& V);

  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Key {
    int k;
    Monomial m;
    bool operator==(const Key& o) const { return k == o.k && m == o.m; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const {
      return MonomialHash{}(key.m) * 1000003u + static_cast<std::size_t>(key.k);
    }
  };

  Scalar eval_canonical(int order, const Monomial& m) const;

  const Algebra* alg_;
  Polynomial V_;
  int n_max_;
  std::vector<Polynomial> dv_;  // cyclic gradient of V, per variable
  mutable std::unordered_map<Key, Scalar, KeyHash> memo_;
};

// Independent combinatorial evaluator of the zero-potential trace from the
// centering rule for free independence of the constant algebra and each
// Laurent factor. Exponential in the number of constant-run positions.
class FreenessOracle {
 public:
  explicit FreenessOracle(const Algebra& alg) : alg_(&alg) {}

  Scalar eval(const Monomial& m) const;
  Scalar eval(const Polynomial& p) const;

  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Run {  // var > 0: u_var^exp; var == 0: constant word id in exp
    int var;
    long long exp;
  };
  using RunKey = std::vector<long long>;
  struct RunKeyHash {
    std::size_t operator()(const RunKey& k) const {
      std::size_t h = 0xcbf29ce484222325ull;
      for (long long v : k) {
        h ^= static_cast<std::size_t>(v);
        h *= 0x100000001b3ull;
      }
      return h;
    }
  };

  Scalar eval_runs(std::vector<Run> runs) const;

  const Algebra* alg_;
  mutable std::unordered_map<RunKey, Scalar, RunKeyHash> memo_;
};

Scalar haar_trace(const Polynomial& p);
Scalar freeness_oracle(const Polynomial& p);
ScalarSeries perturbative_trace(const Polynomial& V, const Polynomial& p, int n_max);

}  // namespace umx

#endif
