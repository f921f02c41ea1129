#include "umx/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "umx/calculus.hpp"
#include "umx/masterfield.hpp"

namespace umx {

namespace {

constexpr double kImTolerance = 1e-9;

std::complex<double> scalar_to_complex(const Scalar& s) { return s.to_complex(); }

}  // namespace

RepresentationMap::RepresentationMap(const Algebra& alg, int N,
                                     std::vector<Eigen::MatrixXcd> gen_matrices)
    : alg_(&alg), n_(N), mats_(std::move(gen_matrices)) {
  if (N < 1) throw std::invalid_argument("representation size must be positive");
  if (static_cast<int>(mats_.size()) != alg.num_generators())
    throw std::invalid_argument("need one matrix per constant generator");
  for (int i = 0; i < alg.num_generators(); ++i) {
    const auto& m = mats_[static_cast<std::size_t>(i)];
    if (m.rows() != N || m.cols() != N)
      throw std::invalid_argument("matrix for " + alg.generator(i).name + " is not N x N");
  }
  for (int i = 0; i < alg.num_generators(); ++i) {
    const Generator& g = alg.generator(i);
    const int adj = g.selfadjoint ? i : g.adjoint;
    const double mismatch =
        (mats_[static_cast<std::size_t>(adj)] - mats_[static_cast<std::size_t>(i)].adjoint())
            .cwiseAbs()
            .maxCoeff();
    if (mismatch > 1e-12)
      throw std::invalid_argument("matrix for " + g.name + " is not compatible with its adjoint");
  }
  norms_.reserve(mats_.size());
  for (const auto& m : mats_) norms_.push_back(m.operatorNorm());
}

RepresentationMap RepresentationMap::block_spectra(
    const Algebra& alg, int N, const std::map<std::string, std::vector<Rat>>& patterns) {
  std::vector<Eigen::MatrixXcd> mats;
  mats.reserve(static_cast<std::size_t>(alg.num_generators()));
  for (int i = 0; i < alg.num_generators(); ++i) {
    const std::string& name = alg.generator(i).name;
    auto it = patterns.find(name);
    if (it == patterns.end())
      throw std::invalid_argument("block_spectra: no pattern for generator " + name);
    const std::vector<Rat>& pat = it->second;
    if (pat.empty() || N % static_cast<int>(pat.size()) != 0)
      throw std::invalid_argument("block_spectra: pattern length of " + name +
                                  " must divide the matrix size");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
    for (int j = 0; j < N; ++j) m(j, j) = pat[static_cast<std::size_t>(j) % pat.size()].get_d();
    mats.push_back(std::move(m));
  }
  return RepresentationMap(alg, N, std::move(mats));
}

const Eigen::MatrixXcd& RepresentationMap::generator_matrix(int gen_index) const {
  if (gen_index < 0 || gen_index >= static_cast<int>(mats_.size()))
    throw std::invalid_argument("generator index out of range");
  return mats_[static_cast<std::size_t>(gen_index)];
}

double RepresentationMap::generator_norm(int gen_index) const {
  if (gen_index < 0 || gen_index >= static_cast<int>(norms_.size()))
    throw std::invalid_argument("generator index out of range");
  return norms_[static_cast<std::size_t>(gen_index)];
}

Eigen::MatrixXcd sample_haar(int N, Xoshiro256pp& rng) {
  if (N < 1) throw std::invalid_argument("matrix size must be positive");
  Eigen::MatrixXcd g(N, N);
  const double scale = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double re = rng.gauss();
      const double im = rng.gauss();
      g(i, j) = std::complex<double>(re * scale, im * scale);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < N; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : std::complex<double>(1.0, 0.0);
  }
  return q;
}

std::complex<double> evaluate_word(const Monomial& m, const std::vector<Eigen::MatrixXcd>& U,
                                   const RepresentationMap& rho) {
  const Algebra& alg = rho.algebra();
  const int N = rho.size();
  if (static_cast<int>(U.size()) != alg.num_unitary())
    throw std::invalid_argument("need one unitary matrix per variable");
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(N, N);
  for (Letter l : m.ls) {
    if (letter_is_unitary(l)) {
      const int var = letter_uvar(l);
      const auto& u = U[static_cast<std::size_t>(var - 1)];
      if (letter_usign(l) > 0) acc *= u;
      else acc *= u.adjoint();
    } else {
      for (uint8_t gi : alg.word(letter_cid(l))) acc *= rho.generator_matrix(gi);
    }
  }
  return acc.trace();
}

std::complex<double> evaluate_poly(const Polynomial& p, const std::vector<Eigen::MatrixXcd>& U,
                                   const RepresentationMap& rho) {
  std::complex<double> acc = 0.0;
  for (const auto& [m, c] : p.terms()) acc += scalar_to_complex(c) * evaluate_word(m, U, rho);
  return acc;
}

namespace {

struct ResolvedSampler {
  bool iid;
  int m;
};

ResolvedSampler resolve_sampler(const EnsembleConfig& cfg) {
  if (&cfg.V.algebra() != &cfg.rho.algebra())
    throw std::invalid_argument("potential and representation use different algebras");
  if (cfg.samples < 1) throw std::invalid_argument("sample budget must be positive");
  if (cfg.chains < 1) throw std::invalid_argument("chain count must be positive");
  const bool zero_action = cfg.t == 0.0 || cfg.V.is_zero();
  SamplerMode mode = cfg.mode;
  if (mode == SamplerMode::kAuto) mode = zero_action ? SamplerMode::kIidHaar : SamplerMode::kMetropolis;
  if (mode == SamplerMode::kIidHaar && !zero_action)
    throw std::invalid_argument("iid sampler requires a vanishing action");
  if (mode == SamplerMode::kMetropolis) {
    if (!(cfg.mc.step > 0.0)) throw std::invalid_argument("proposal step must be positive");
    if (cfg.mc.burn_in < 0 || cfg.mc.sweeps_per_sample < 1)
      throw std::invalid_argument("bad chain schedule");
    if (!TraceFunctional::is_cyclically_selfadjoint(cfg.V))
      throw std::invalid_argument("Gibbs weight is not real: potential is not selfadjoint up to cyclic symmetry");
  }
  return {mode == SamplerMode::kIidHaar, cfg.V.algebra().num_unitary()};
}

// Re Tr rho(V), insisting the imaginary part is numerical noise.
double real_action_trace(const EnsembleConfig& cfg, const std::vector<Eigen::MatrixXcd>& U) {
  const std::complex<double> z = evaluate_poly(cfg.V, U, cfg.rho);
  if (std::abs(z.imag()) > kImTolerance)
    throw std::runtime_error("non-real Gibbs action: Im Tr rho(V) = " + std::to_string(z.imag()));
  return z.real();
}

Eigen::MatrixXcd random_step_unitary(int N, double step, Xoshiro256pp& rng) {
  Eigen::MatrixXcd g(N, N);
  const double scale = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double re = rng.gauss();
      const double im = rng.gauss();
      g(i, j) = std::complex<double>(re * scale, im * scale);
    }
  const Eigen::MatrixXcd herm = (g + g.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  Eigen::VectorXcd phases(N);
  for (int k = 0; k < N; ++k) {
    const double a = step * es.eigenvalues()(k);
    phases(k) = std::complex<double>(std::cos(a), std::sin(a));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

long chain_share(long total, int chains, int index) {
  const long base = total / chains;
  const long rem = total % chains;
  return base + (index < rem ? 1 : 0);
}

}  // namespace

ChainStats run_chain(const EnsembleConfig& cfg, std::uint64_t chain_index,
                     const std::function<void(const std::vector<Eigen::MatrixXcd>&)>& on_sample) {
  const ResolvedSampler rs = resolve_sampler(cfg);
  const int N = cfg.rho.size();
  Xoshiro256pp rng = Xoshiro256pp::for_chain(cfg.seed, chain_index);
  const long quota = chain_share(cfg.samples, cfg.chains, static_cast<int>(chain_index));

  if (rs.iid) {
    std::vector<Eigen::MatrixXcd> U(static_cast<std::size_t>(rs.m));
    for (long s = 0; s < quota; ++s) {
      for (auto& u : U) u = sample_haar(N, rng);
      on_sample(U);
    }
    return ChainStats{1.0, 0.0, quota * rs.m};
  }

  std::vector<Eigen::MatrixXcd> U(static_cast<std::size_t>(rs.m),
                                  Eigen::MatrixXcd::Identity(N, N));
  double action = N * cfg.t * real_action_trace(cfg, U);
  double step = cfg.mc.step;

  long accepted = 0, proposed = 0;          // post-burn-in bookkeeping
  long tune_accepted = 0, tune_proposed = 0;  // sliding window during burn-in
  const long total_sweeps =
      cfg.mc.burn_in + quota * static_cast<long>(cfg.mc.sweeps_per_sample);
  long recorded = 0;

  for (long sweep = 0; sweep < total_sweeps && recorded < quota; ++sweep) {
    const bool burning = sweep < cfg.mc.burn_in;
    for (int j = 0; j < rs.m; ++j) {
      const Eigen::MatrixXcd w = random_step_unitary(N, step, rng);
      const Eigen::MatrixXcd old = U[static_cast<std::size_t>(j)];
      U[static_cast<std::size_t>(j)] = old * w;
      const double fresh = N * cfg.t * real_action_trace(cfg, U);
      const double logr = fresh - action;
      const double uu = rng.uniform01();
      const bool accept = logr >= 0.0 || uu < std::exp(logr);
      if (accept) action = fresh;
      else U[static_cast<std::size_t>(j)] = old;
      if (burning) {
        ++tune_proposed;
        tune_accepted += accept ? 1 : 0;
        if (tune_proposed >= 50) {
          const double rate = static_cast<double>(tune_accepted) / tune_proposed;
          if (rate > 0.6) step = std::min(step * 1.25, 4.0);
          else if (rate < 0.3) step = std::max(step * 0.8, 1e-4);
          tune_proposed = tune_accepted = 0;
        }
      } else {
        ++proposed;
        accepted += accept ? 1 : 0;
      }
    }
    if (!burning && (sweep - cfg.mc.burn_in + 1) % cfg.mc.sweeps_per_sample == 0) {
      on_sample(U);
      ++recorded;
    }
  }
  return ChainStats{proposed ? static_cast<double>(accepted) / proposed : 1.0, step, proposed};
}

namespace {

TraceSamples collect_traces(const EnsembleConfig& cfg, const std::vector<Polynomial>& observables,
                            bool threaded) {
  resolve_sampler(cfg);  // validate up front, before any thread starts
  for (const Polynomial& p : observables)
    if (&p.algebra() != &cfg.V.algebra())
      throw std::invalid_argument("observable uses a different algebra");

  const int k = static_cast<int>(observables.size());
  std::vector<std::vector<std::vector<std::complex<double>>>> per_chain(
      static_cast<std::size_t>(cfg.chains));
  std::vector<ChainStats> stats(static_cast<std::size_t>(cfg.chains));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (threaded)
#endif
  for (int c = 0; c < cfg.chains; ++c) {
    auto& local = per_chain[static_cast<std::size_t>(c)];
    local.assign(static_cast<std::size_t>(k), {});
    const long quota = chain_share(cfg.samples, cfg.chains, c);
    for (auto& row : local) row.reserve(static_cast<std::size_t>(quota));
    stats[static_cast<std::size_t>(c)] = run_chain(
        cfg, static_cast<std::uint64_t>(c), [&](const std::vector<Eigen::MatrixXcd>& U) {
          for (int j = 0; j < k; ++j)
            local[static_cast<std::size_t>(j)].push_back(evaluate_poly(observables[j], U, cfg.rho));
        });
  }
  (void)threaded;

  TraceSamples out;
  out.rows.assign(static_cast<std::size_t>(k), {});
  for (auto& row : out.rows) row.reserve(static_cast<std::size_t>(cfg.samples));
  for (int c = 0; c < cfg.chains; ++c)
    for (int j = 0; j < k; ++j) {
      auto& src = per_chain[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
      out.rows[static_cast<std::size_t>(j)].insert(out.rows[static_cast<std::size_t>(j)].end(),
                                                   src.begin(), src.end());
    }
  out.chains = std::move(stats);
  return out;
}

}  // namespace

TraceSamples sample_traces(const EnsembleConfig& cfg, const std::vector<Polynomial>& observables) {
  return collect_traces(cfg, observables, true);
}

TraceSamples sample_traces_serial(const EnsembleConfig& cfg,
                                  const std::vector<Polynomial>& observables) {
  return collect_traces(cfg, observables, false);
}

namespace {

// Set partitions of {0..k-1} as block bitmasks, with the Moebius weight
// (-1)^(B-1) (B-1)! of the partition lattice.
struct PartitionTerm {
  std::vector<unsigned> blocks;
  double moebius;
};

std::vector<PartitionTerm> set_partitions(int k) {
  std::vector<PartitionTerm> out;
  std::vector<int> assign(static_cast<std::size_t>(k), 0);
  auto emit = [&out, k](const std::vector<int>& a) {
    int nb = 0;
    for (int v : a) nb = std::max(nb, v + 1);
    std::vector<unsigned> blocks(static_cast<std::size_t>(nb), 0u);
    for (int i = 0; i < k; ++i) blocks[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])] |= 1u << i;
    double mu = 1.0;
    for (int b = 2; b < nb + 1; ++b) mu *= -(b - 1);
    out.push_back({std::move(blocks), mu});
  };
  // restricted growth strings
  std::function<void(int, int)> rec = [&](int i, int maxv) {
    if (i == k) {
      emit(assign);
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      assign[static_cast<std::size_t>(i)] = v;
      rec(i + 1, std::max(maxv, v));
    }
  };
  rec(0, -1);
  return out;
}

}  // namespace

CumulantEstimate cumulant_from_streams(
    const std::vector<std::vector<std::complex<double>>>& streams) {
  const int k = static_cast<int>(streams.size());
  if (k < 1 || k > 4) throw std::invalid_argument("cumulant order must be 1..4");
  const long S = static_cast<long>(streams[0].size());
  for (const auto& row : streams)
    if (static_cast<long>(row.size()) != S) throw std::invalid_argument("stream lengths differ");
  if (S < 100) throw std::invalid_argument("insufficient samples for the jackknife (need >= 100)");

  const unsigned full = (1u << k) - 1u;
  std::vector<std::vector<std::complex<double>>> prod(full + 1);
  std::vector<std::complex<double>> total(full + 1, 0.0);
  for (unsigned mask = 1; mask <= full; ++mask) {
    prod[mask].resize(static_cast<std::size_t>(S));
    const int low = __builtin_ctz(mask);
    const unsigned rest = mask & (mask - 1u) ? mask ^ (1u << low) : 0u;
    for (long s = 0; s < S; ++s) {
      std::complex<double> v = streams[static_cast<std::size_t>(low)][static_cast<std::size_t>(s)];
      if (rest) v *= prod[rest][static_cast<std::size_t>(s)];
      prod[mask][static_cast<std::size_t>(s)] = v;
    }
    for (long s = 0; s < S; ++s) total[mask] += prod[mask][static_cast<std::size_t>(s)];
  }

  const std::vector<PartitionTerm> parts = set_partitions(k);
  auto eval_at = [&](auto&& block_mean) {
    std::complex<double> acc = 0.0;
    for (const PartitionTerm& pt : parts) {
      std::complex<double> term = pt.moebius;
      for (unsigned b : pt.blocks) term *= block_mean(b);
      acc += term;
    }
    return acc;
  };

  const std::complex<double> value =
      eval_at([&](unsigned b) { return total[b] / static_cast<double>(S); });

  std::vector<std::complex<double>> loo(static_cast<std::size_t>(S));
  std::complex<double> loo_mean = 0.0;
  for (long s = 0; s < S; ++s) {
    const std::complex<double> v = eval_at([&](unsigned b) {
      return (total[b] - prod[b][static_cast<std::size_t>(s)]) / static_cast<double>(S - 1);
    });
    loo[static_cast<std::size_t>(s)] = v;
    loo_mean += v;
  }
  loo_mean /= static_cast<double>(S);
  double var_re = 0.0, var_im = 0.0;
  for (const auto& v : loo) {
    var_re += (v.real() - loo_mean.real()) * (v.real() - loo_mean.real());
    var_im += (v.imag() - loo_mean.imag()) * (v.imag() - loo_mean.imag());
  }
  const double scale = static_cast<double>(S - 1) / static_cast<double>(S);
  const double se = std::sqrt(scale * (var_re + var_im));
  return CumulantEstimate{value, se, k, S};
}

CumulantEstimate estimate_cumulants(const EnsembleConfig& cfg, const std::vector<Polynomial>& args) {
  if (args.empty()) throw std::invalid_argument("need at least one argument");
  return cumulant_from_streams(sample_traces(cfg, args).rows);
}

CumulantEstimate sd_residual(const Monomial& p, int i, const EnsembleConfig& cfg) {
  const Algebra& alg = cfg.V.algebra();
  if (i < 1 || i > alg.num_unitary()) throw std::invalid_argument("variable index out of range");
  const Polynomial pp = Polynomial::mono(alg, p);
  const TensorPoly split = partial_d(i, pp);
  const Polynomial drift = cyclic_d(i, cfg.V) * pp;

  std::vector<Polynomial> obs;
  std::vector<std::complex<double>> coef;
  for (const auto& [slots, c] : split.terms()) {
    obs.push_back(Polynomial::mono(alg, slots[0]));
    obs.push_back(Polynomial::mono(alg, slots[1]));
    coef.push_back(scalar_to_complex(c));
  }
  obs.push_back(drift);

  const TraceSamples ts = sample_traces(cfg, obs);
  const long S = static_cast<long>(ts.rows.empty() ? 0 : ts.rows.back().size());
  const double N = cfg.rho.size();
  std::vector<std::complex<double>> y(static_cast<std::size_t>(S), 0.0);
  for (long s = 0; s < S; ++s) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < coef.size(); ++j)
      acc += coef[j] * ts.rows[2 * j][static_cast<std::size_t>(s)] *
             ts.rows[2 * j + 1][static_cast<std::size_t>(s)];
    acc += N * cfg.t * ts.rows.back()[static_cast<std::size_t>(s)];
    y[static_cast<std::size_t>(s)] = acc;
  }
  return cumulant_from_streams({y});
}

std::vector<std::pair<double, double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature size must be positive");
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pm = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // map from [-1, 1] to [0, 1]
    out[static_cast<std::size_t>(n - 1 - i)] = {(x + 1.0) / 2.0, 1.0 / ((1.0 - x * x) * dp * dp)};
  }
  return out;
}

FreeEnergyEstimate thermo_free_energy(const EnsembleConfig& cfg, int grid) {
  if (grid < 8) throw std::invalid_argument("quadrature grid must have at least 8 nodes");
  resolve_sampler(cfg);
  if (cfg.t == 0.0 || cfg.V.is_zero()) return FreeEnergyEstimate{0.0, 0.0, grid};

  const auto rule = gauss_legendre(grid);
  const double N = cfg.rho.size();
  double value = 0.0, var = 0.0;
  for (int i = 0; i < grid; ++i) {
    EnsembleConfig node = cfg;
    node.t = cfg.t * rule[static_cast<std::size_t>(i)].first;
    node.seed = cfg.seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i + 1));
    const CumulantEstimate est = estimate_cumulants(node, {cfg.V});
    const double w = cfg.t * rule[static_cast<std::size_t>(i)].second;
    value += w * est.value.real() / N;
    var += (w * est.std_error / N) * (w * est.std_error / N);
  }
  return FreeEnergyEstimate{value, std::sqrt(var), grid};
}

TailTable concentration_tail(const Monomial& p, const std::vector<double>& deltas,
                             const EnsembleConfig& cfg) {
  if (deltas.empty()) throw std::invalid_argument("need a deviation grid");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] <= 0.0) throw std::invalid_argument("deviation scales must be positive");
    if (i && deltas[i] <= deltas[i - 1])
      throw std::invalid_argument("deviation grid must be strictly increasing");
  }
  const int deg = p.degree();
  if (deg < 1) throw std::invalid_argument("statistic needs at least one unitary letter");

  const TraceSamples ts = sample_traces(cfg, {Polynomial::mono(cfg.V.algebra(), p)});
  const auto& xs = ts.rows[0];
  const long S = static_cast<long>(xs.size());
  std::complex<double> mean = 0.0;
  for (const auto& x : xs) mean += x;
  mean /= static_cast<double>(S);
  std::vector<double> dev(static_cast<std::size_t>(S));
  double var = 0.0;
  for (long s = 0; s < S; ++s) {
    dev[static_cast<std::size_t>(s)] = std::abs(xs[static_cast<std::size_t>(s)] - mean);
    var += dev[static_cast<std::size_t>(s)] * dev[static_cast<std::size_t>(s)];
  }
  std::sort(dev.begin(), dev.end());

  TailTable out;
  out.deltas = deltas;
  out.degree = deg;
  out.sample_sd = std::sqrt(var / static_cast<double>(S));
  out.frequencies.reserve(deltas.size());
  for (double d : deltas) {
    const double threshold = d * deg;
    const auto it = std::lower_bound(dev.begin(), dev.end(), threshold);
    out.frequencies.push_back(static_cast<double>(dev.end() - it) / static_cast<double>(S));
  }

  // least squares of log f against delta^2 over the observed part of the tail
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (out.frequencies[i] <= 0.0) continue;
    const double zx = deltas[i] * deltas[i];
    const double zy = std::log(out.frequencies[i]);
    sx += zx;
    sy += zy;
    sxx += zx * zx;
    sxy += zx * zy;
    ++npts;
  }
  if (npts >= 2 && sxx * npts - sx * sx > 0.0) {
    const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    out.decay_rate = -slope;
    out.log_amplitude = (sy - slope * sx) / npts;
  } else {
    out.decay_rate = std::numeric_limits<double>::quiet_NaN();
    out.log_amplitude = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::pair<double, double> fit_one_over_n2(const std::vector<std::pair<int, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("need at least two sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [N, y] : points) {
    if (N < 1) throw std::invalid_argument("sizes must be positive");
    const double x = 1.0 / (static_cast<double>(N) * N);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  if (det <= 0.0) throw std::invalid_argument("sizes must be distinct");
  const double b = (n * sxy - sx * sy) / det;
  const double a = (sy - b * sx) / n;
  return {a, b};
}

}  // namespace umx
