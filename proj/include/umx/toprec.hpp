#ifndef UMX_TOPREC_HPP
#define UMX_TOPREC_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "umx/calculus.hpp"
#include "umx/masterfield.hpp"

namespace umx {

// Genus expansion coefficients of the connected trace correlators:
// eval(k, g, {p_1,...,p_k}) is the N^{-2g} coefficient of the renormalized
// k-th classical cumulant N^{k-2} C(Tr p_1, ..., Tr p_k) of the coupling-t
// ensemble, as an exact series in t through the order cap of the underlying
// genus-0 trace.
//
// The (1,0) entry is the genus-0 trace itself. All other entries are filled
// on demand by the loop-equation recursion, which descends strictly in
// (g, k)-lexicographic order; entries are memoized per sorted tuple of
// cyclically canonical monomials, so the functional is symmetric in its k
// arguments by construction. A constant argument evaluates to sigma_g when
// k = 1 and kills the correlator when k >= 2 (cumulants involving a
// deterministic term vanish).
//
// Coefficients are computed one t-order at a time: the coefficient of t^n
// only ever consumes sub-coefficients whose orders sum to n, so evaluating
// through t^n needs sigma-moments only up to (argument degree in each
// constant generator) + n.
class CorrelatorTable {
 public:
  CorrelatorTable(const TraceFunctional& trace, int max_genus);

  const Algebra& algebra() const { return *alg_; }
  const TraceFunctional& leading_trace() const { return *trace_; }
  int max_genus() const { return max_genus_; }
  int order_cap() const { return order_; }
  std::size_t memo_size() const { return memo_.size(); }

  // Multilinear in each slot; args.size() must equal k.
  ScalarSeries eval(int k, int g, const std::vector<Polynomial>& args) const;
  ScalarSeries eval(int k, int g, const std::vector<Monomial>& args) const;
  // Single t-order coefficient.
  Scalar eval_coeff(int k, int g, const std::vector<Monomial>& args, int n) const;

 private:
  struct Key {
    int k;
    int g;
    std::vector<Monomial> ms;
    bool operator==(const Key& o) const { return k == o.k && g == o.g && ms == o.ms; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const {
      std::size_t h = 1469598103934665603ull;
      auto mix = [&h](std::size_t v) {
        h ^= v;
        h *= 1099511628211ull;
      };
      mix(static_cast<std::size_t>(key.k));
      mix(static_cast<std::size_t>(key.g));
      MonomialHash mh;
      for (const auto& m : key.ms) mix(mh(m));
      return h;
    }
  };
  enum class KeyKind { kRegular, kConstantTrace, kZero };
  struct Normalized {
    KeyKind kind;
    Key key;
  };
  // Inverted-operator image of a first-slot monomial and its Laplacian,
  // as t-series through `order` (extended on demand).
  struct Prep {
    int order;
    PolySeries x;
    std::vector<TensorPoly> d;
  };

  Normalized normalize(int k, int g, const std::vector<Monomial>& args) const;
  Scalar coeff_of(const Key& key, int n) const;
  Scalar compute_coeff(const Key& key, int n) const;
  const Prep& prep_of(const Monomial& m, int need) const;

  // Coefficient of t^n of sum_a t^a sum_{q0(x)q1 in d[a]}
  //   c * eval(k1,g1,{q0}+e1) * eval(k2,g2,{q1}+e2).
  Scalar pair_coeff(const std::vector<TensorPoly>& d, int k1, int g1,
                    const std::vector<Monomial>& e1, int k2, int g2,
                    const std::vector<Monomial>& e2, int n) const;
  // Coefficient of t^n of sum_a t^a sum_{q0(x)q1 in d[a]} c * eval(k,g,{q0,q1}+extra).
  Scalar joined_coeff(const std::vector<TensorPoly>& d, int k, int g,
                      const std::vector<Monomial>& extra, int n) const;

  const TraceFunctional* trace_;
  const Algebra* alg_;
  int max_genus_;
  int order_;
  mutable std::unordered_map<Key, std::vector<std::optional<Scalar>>, KeyHash> memo_;
  mutable std::unordered_map<Monomial, Prep, MonomialHash> prep_;
};

// F_g(t): genus-g coefficient of the free energy (1/N^2) log Z_N(t), exact
// through t^d_max. dF/dt equals the renormalized expectation of Tr V, so F_g
// is the term-wise t-antiderivative of the genus-g one-point function of V.
// V must be selfadjoint up to cyclic symmetry.
ScalarSeries free_energy_series(const Polynomial& V, int g, int d_max);

// Limit variance of the centered linear statistic Tr p under the coupling-t
// ensemble, as an exact series in t through t^n_max. Requires p = p*; the
// order-0 value is a limit of variances and must be >= 0.
ScalarSeries clt_variance(const Polynomial& V, const Polynomial& p, int n_max);

// Maclaurin coefficients [t^d] F_g(t), d = 0..d_max, for the two-source model
// V = x u1 y u1^{-1} over one unitary letter, with the trace on the constant
// subalgebra given by per-generator moment sequences
// (moments[name][g][j] = genus-g normalized moment of the j-th power; j = 0
// entries are 1 at genus 0 and 0 at higher genus). Moment rows must extend
// through power d_max. Entries are real.
std::vector<Rat> hciz_series_sd(
    const std::map<std::string, std::vector<std::vector<Rat>>>& moments, int g, int d_max);

}  // namespace umx

#endif
