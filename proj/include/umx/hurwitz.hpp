#ifndef UMX_HURWITZ_HPP
#define UMX_HURWITZ_HPP

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "umx/scalar.hpp"

namespace umx {

// Weakly decreasing positive parts summing to d.
using IntegerPartition = std::vector<int>;

// All partitions of d in descending-lexicographic order; 1 <= d <= 8.
std::vector<IntegerPartition> partitions(int d);

// Number of permutations of cycle type alpha: d! / prod(l^{m_l} m_l!).
mpz_class conjugacy_class_size(const IntegerPartition& alpha);

// Transitive monotone factorization counts between full conjugacy classes:
// triples (s, t, (a_1 b_1)...(a_r b_r)) with s of type alpha, t of type beta,
// a_i < b_i, b_1 <= ... <= b_r, (a_r b_r)...(a_1 b_1) s = t, the group
// generated by s and the transpositions transitive on the d symbols, and
// r = 2g - 2 + len(alpha) + len(beta). The count is |C_alpha| times the count
// at a fixed representative s (a class function by centrality of symmetric
// functions in the Jucys-Murphy elements). Zero whenever r < 0.
//
// The enumerator runs a dynamic program over the full symmetric group,
// splitting off non-transitive tuples by conditioning on the orbit of the
// first symbol; disjoint-support monotone tuples merge uniquely, so the
// splitting carries no interleaving factor.
class MonotoneEnumerator {
 public:
  // 1 <= d <= 6 (group enumeration budget); factorization lengths are
  // precomputed through r = max(0, 2 g_max - 2 + 2 d).
  explicit MonotoneEnumerator(int d, int g_max = 3);

  int degree() const { return d_; }
  int max_genus() const { return g_max_; }

  mpz_class count(int g, const IntegerPartition& alpha, const IntegerPartition& beta) const;

 private:
  // all_[n][ai]: counts[r][bi] of monotone tuples of length r from the
  // canonical representative of alpha over n symbols to any permutation of
  // type beta (no transitivity); conn_ restricts to transitive tuples.
  struct Grid {
    std::vector<std::vector<mpz_class>> counts;  // [r][beta index]
  };

  int d_;
  int g_max_;
  int r_max_;
  std::vector<std::vector<IntegerPartition>> parts_;  // per n = 0..d
  std::vector<std::map<IntegerPartition, int>> part_index_;
  std::vector<std::vector<Grid>> all_;
  std::vector<std::vector<Grid>> conn_;
};

// Convenience wrapper constructing a fresh enumerator sized for (g, alpha).
mpz_class monotone_count(int g, const IntegerPartition& alpha, const IntegerPartition& beta);

// Direct depth-first enumeration at an explicit representative (0-based image
// array), with transitivity checked per tuple; exponential, for cross-checks
// at small d. Returns |C_alpha| times the fixed-representative count.
mpz_class monotone_count_direct(int g, const IntegerPartition& beta,
                                const std::vector<int>& representative);

// Maclaurin coefficients [t^d] F_g(t), d = 0..d_max (d_max <= 6), of the
// genus-g free energy of the two-source model, assembled from factorization
// counts:
//   [t^d] F_g = (1/d!) sum_{alpha,beta |- d} (-1)^{len a + len b}
//               sigma_0(x^alpha) sigma_0(y^beta) H_g(alpha, beta),
// with sigma_0(x^alpha) = prod_i sigma_0(x^{alpha_i}) read from
// moments[name][0] (entry k is the k-th power moment; entry 0 must be 1).
// The factorization-count form of the series holds when
// the constant trace data is exact at every matrix size, which forces the
// higher-genus moment rows to vanish; nonzero rows at g >= 1 are rejected.
std::vector<Rat> hciz_series_hurwitz(
    const std::map<std::string, std::vector<std::vector<Rat>>>& moments, int g, int d_max);

}  // namespace umx

#endif
