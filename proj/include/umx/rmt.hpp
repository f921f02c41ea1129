#ifndef UMX_RMT_HPP
#define UMX_RMT_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "umx/polynomial.hpp"
#include "umx/rng.hpp"

namespace umx {

// N x N matrices standing in for the constant generators; the unitary
// variables are supplied per sample.
class RepresentationMap {
 public:
  RepresentationMap(const Algebra& alg, int N, std::vector<Eigen::MatrixXcd> gen_matrices);

  // Diagonal matrices cycling through the given spectra (pattern length must
  // divide N), so the normalized trace of every constant word is the same at
  // every size: the constant trace data is exact in N and the expansion of
  // constant traces has no corrections beyond order zero.
  static RepresentationMap block_spectra(const Algebra& alg, int N,
                                         const std::map<std::string, std::vector<Rat>>& patterns);

  const Algebra& algebra() const { return *alg_; }
  int size() const { return n_; }
  const Eigen::MatrixXcd& generator_matrix(int gen_index) const;
  // Operator norm (largest singular value).
  double generator_norm(int gen_index) const;

 private:
  const Algebra* alg_;
  int n_;
  std::vector<Eigen::MatrixXcd> mats_;
  std::vector<double> norms_;
};

// Haar-distributed unitary: QR of a complex Gaussian matrix (entries drawn
// row-major, real part first) with the diagonal phases of R pushed into Q so
// the factorization is unique and the law is exactly invariant.
Eigen::MatrixXcd sample_haar(int N, Xoshiro256pp& rng);

// Trace of the word with unitary letters replaced by the sampled matrices and
// constant letters by their representation; the empty word gives N.
std::complex<double> evaluate_word(const Monomial& m, const std::vector<Eigen::MatrixXcd>& U,
                                   const RepresentationMap& rho);
std::complex<double> evaluate_poly(const Polynomial& p, const std::vector<Eigen::MatrixXcd>& U,
                                   const RepresentationMap& rho);

enum class SamplerMode {
  kAuto,        // iid Haar when the action vanishes, Metropolis otherwise
  kIidHaar,     // requires a vanishing action
  kMetropolis,  // valid at zero coupling too (chain targeting the flat measure)
};

struct MetropolisParams {
  double step = 0.25;        // proposal scale; auto-tuned during burn-in to 30-60% acceptance
  int burn_in = 300;         // sweeps discarded before recording
  int sweeps_per_sample = 2; // thinning stride in full sweeps
};

// Ensemble on U(N)^m with density exp(N t Re Tr rho(V)) against product Haar.
struct EnsembleConfig {
  Polynomial V;
  RepresentationMap rho;
  double t = 0.0;
  std::uint64_t seed = 1;
  long samples = 10000;
  int chains = 1;
  SamplerMode mode = SamplerMode::kAuto;
  MetropolisParams mc{};
};

struct ChainStats {
  double acceptance = 1.0;  // post-burn-in acceptance rate (1 in iid mode)
  double step = 0.0;        // tuned proposal scale (0 in iid mode)
  long proposals = 0;
};

// Runs the chain with the derived stream for chain_index and hands every
// retained tuple to on_sample. Metropolis proposals multiply one variable at a
// time by the exponential of a scaled anti-Hermitian Gaussian; only the real
// part of the action is used, and the imaginary part of Tr rho(V) is required
// to stay below 1e-9 (the weight must be real for a cyclically selfadjoint V).
ChainStats run_chain(const EnsembleConfig& cfg, std::uint64_t chain_index,
                     const std::function<void(const std::vector<Eigen::MatrixXcd>&)>& on_sample);

struct TraceSamples {
  // rows[j][s]: trace of observable j at retained sample s, chains
  // concatenated in index order (independent of thread schedule).
  std::vector<std::vector<std::complex<double>>> rows;
  std::vector<ChainStats> chains;
};

// Parallel driver: chains are independent workers with derived seeds, merged
// in chain order. The serial variant drives the same kernel on one thread and
// produces bit-identical output; the benchmark tool compares the two.
TraceSamples sample_traces(const EnsembleConfig& cfg, const std::vector<Polynomial>& observables);
TraceSamples sample_traces_serial(const EnsembleConfig& cfg,
                                  const std::vector<Polynomial>& observables);

struct CumulantEstimate {
  std::complex<double> value;
  double std_error = 0.0;  // delete-1 jackknife
  int order = 1;
  long samples = 0;
};

// Mixed cumulant of k trace streams (k <= 4) by Moebius inversion over the
// partition lattice of the slots; error by delete-1 jackknife.
CumulantEstimate cumulant_from_streams(const std::vector<std::vector<std::complex<double>>>& streams);
CumulantEstimate estimate_cumulants(const EnsembleConfig& cfg, const std::vector<Polynomial>& args);

// Monte Carlo estimate of the loop-equation combination
//   W1 (x) W1(partial_i p) + W2(partial_i p) + N W1((cyclic_i tV) p),
// which vanishes in expectation under the Gibbs ensemble. The first two terms
// combine into the joint moment E[Tr q Tr r], so the whole residual is the
// mean of a per-sample observable.
CumulantEstimate sd_residual(const Monomial& p, int i, const EnsembleConfig& cfg);

// Nodes and weights of the n-point Gauss-Legendre rule on [0, 1].
std::vector<std::pair<double, double>> gauss_legendre(int n);

struct FreeEnergyEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int nodes = 0;
};

// Free energy by coupling-constant integration: F_N(t) = integral over s in
// [0, t] of the mean of (1/N) Tr rho(V) under the ensemble at coupling s,
// Gauss-Legendre quadrature with a fresh chain per node.
FreeEnergyEstimate thermo_free_energy(const EnsembleConfig& cfg, int grid);

struct TailTable {
  std::vector<double> deltas;
  std::vector<double> frequencies;  // P(|Tr rho(p) - mean| >= delta * deg p)
  double decay_rate = 0.0;          // c in the fitted envelope C exp(-c delta^2)
  double log_amplitude = 0.0;       // log C
  double sample_sd = 0.0;
  int degree = 0;
};

// Empirical deviation tails of Tr rho(p) on the scale delta * deg(p), with a
// least-squares Gaussian envelope fit of log-frequency against delta^2 over
// the grid points with nonzero frequency.
TailTable concentration_tail(const Monomial& p, const std::vector<double>& deltas,
                             const EnsembleConfig& cfg);

// Least-squares fit y = a + b / N^2; needs at least two distinct sizes.
std::pair<double, double> fit_one_over_n2(const std::vector<std::pair<int, double>>& points);

}  // namespace umx

#endif
