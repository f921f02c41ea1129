#ifndef UMX_CALCULUS_HPP
#define UMX_CALCULUS_HPP

#include <functional>

#include "umx/series.hpp"

namespace umx {

// Evaluation of a single trace functional on monomials (one expansion order).
using TraceFn = std::function<Scalar(const Monomial&)>;
// Coefficient-of-t^order evaluation of a coupling-series-valued trace.
using SeriesTraceFn = std::function<Scalar(int order, const Monomial&)>;

// Free difference quotient: splits words at u_i^{+1} (keeping u_i in the left
// slot) and at u_i^{-1} (keeping u_i^{-1} in the right slot, with a sign).
TensorPoly partial_d(int i, const Polynomial& p);

// Cyclic derivative: opposite multiplication applied to the difference
// quotient; the sum of cyclic shifts ending in u_i minus those starting with
// u_i^{-1}.
Polynomial cyclic_d(int i, const Polynomial& p);

// Number operator D (monomial -> unitary-letter count times itself) and its
// inverse on polynomials with no degree-0 part.
Polynomial number_op(const Polynomial& p);
Polynomial number_op_inverse(const Polynomial& p);

// Reduced Laplacian: the rank-2 remainder of sum_i partial_i cyclic_i after
// the number operator is split off under a trace pairing.
TensorPoly reduced_laplacian(const Polynomial& p);

// T_tau = (Id (x) tau + tau (x) Id) Delta.
Polynomial contract_T(const TraceFn& tau, const Polynomial& p);

// P^W = sum_i (cyclic_i W)(cyclic_i p).
Polynomial perturb_P(const Polynomial& W, const Polynomial& p);

// (q1 (x) q2) # T = q1 (x) T (x) q2, rank 2 # rank k -> rank k+2.
TensorPoly hash_insert(const TensorPoly& s, const TensorPoly& T);

// Degree-regularized forms: X-bar = X D^{-1}, defined on no-constant-term
// input.
TensorPoly delta_bar(const Polynomial& p);
Polynomial t_bar(const TraceFn& tau, const Polynomial& p);
Polynomial p_bar(const Polynomial& W, const Polynomial& p);

// Context for the fundamental operators: a coupling-series trace tau, the
// potential V (coupled as t*V), and the series truncation order.
struct OperatorContext {
  const Algebra* alg;
  Polynomial V;
  int n_max;
  SeriesTraceFn trace;
};

// Fundamental operators at a fixed trace (single functional, no series):
// psi = Id + (1/2) Pi T-bar + Pi P-bar^W, xi = Id + Pi T-bar + Pi P-bar^W.
// The corrections are projected back onto the no-constant-term subspace,
// making both endomorphisms of it (the projection is invisible to any
// functional that annihilates constants, which is where these operators are
// inverted).
Polynomial psi_apply(const TraceFn& tau, const Polynomial& W, const Polynomial& p);
Polynomial xi_apply(const TraceFn& tau, const Polynomial& W, const Polynomial& p);

// Coefficient of t^order of xi at series trace tau and potential t*V.
Polynomial xi_apply_series(const OperatorContext& ctx, const PolySeries& x, int order);

// Per-order inversion of xi: returns the series X with xi(X) = p + O(t^{n+1}).
// Each order is a terminating Neumann sum in the strictly degree-lowering
// order-0 block; chain length is asserted against the input degree.
PolySeries xi_inverse(const OperatorContext& ctx, const Polynomial& p);

// K(xi,V) = 4(xi+1)/(xi(xi-1)) + |Pi V|_1 deg(V) xi^deg(V), and the smallness
// test |V|_1 < (7/66) / (deg(V) 2^((K-1)deg V) 12^deg V).
struct ContractionMargin {
  Rat K;
  bool smallness_ok;
};
ContractionMargin contraction_margin(const Rat& xi, const Polynomial& V, int K_rank);

}  // namespace umx

#endif
