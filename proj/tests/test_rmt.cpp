#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "umx/algebra.hpp"
#include "umx/polynomial.hpp"
#include "umx/rmt.hpp"
#include "umx/rng.hpp"
#include "umx/textio.hpp"

using namespace umx;

namespace {

std::shared_ptr<Algebra> xy_algebra() {
  std::vector<Generator> gens{{"x", true, -1}, {"y", true, -1}};
  std::map<std::string, std::vector<Rat>> patterns{
      {"x", {Rat(1, 2), Rat(1), Rat(-1, 4), Rat(3, 4)}},
      {"y", {Rat(1), Rat(1, 3), Rat(-1, 3), Rat(1, 5)}}};
  auto sigma = std::make_shared<DiagonalSigma>(4, patterns);
  return std::make_shared<Algebra>(2, gens, sigma);
}

std::shared_ptr<Algebra> pure_algebra(int num_unitary) {
  return std::make_shared<Algebra>(num_unitary, std::vector<Generator>{},
                                   std::make_shared<UnitSigma>());
}

Monomial word(const Algebra& alg, const std::vector<Letter>& ls) { return alg.reduce(ls); }

RepresentationMap xy_rho(const Algebra& alg, int N) {
  return RepresentationMap::block_spectra(
      alg, N,
      {{"x", {Rat(1, 2), Rat(1), Rat(-1, 4), Rat(3, 4)}},
       {"y", {Rat(1), Rat(1, 3), Rat(-1, 3), Rat(1, 5)}}});
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Batch means: robust against the autocorrelation of Metropolis output.
MeanSe batched(const std::vector<double>& xs, int batches = 40) {
  const long S = static_cast<long>(xs.size());
  const long len = S / batches;
  double total = 0.0;
  for (double v : xs) total += v;
  const double mean = total / static_cast<double>(S);
  double var = 0.0;
  for (int b = 0; b < batches; ++b) {
    double m = 0.0;
    for (long s = b * len; s < (b + 1) * len; ++s) m += xs[static_cast<std::size_t>(s)];
    m /= static_cast<double>(len);
    var += (m - mean) * (m - mean);
  }
  var /= static_cast<double>(batches - 1) * static_cast<double>(batches);
  return {mean, std::sqrt(var)};
}

std::vector<double> real_parts(const std::vector<std::complex<double>>& zs) {
  std::vector<double> out;
  out.reserve(zs.size());
  for (auto z : zs) out.push_back(z.real());
  return out;
}

}  // namespace

TEST_CASE("haar samples are unitary and seed-reproducible") {
  const int N = 9;
  Xoshiro256pp rng(42);
  const Eigen::MatrixXcd U = sample_haar(N, rng);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
  CHECK((U.adjoint() * U - I).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((U * U.adjoint() - I).cwiseAbs().maxCoeff() < 1e-12);

  Xoshiro256pp rng2(42);
  const Eigen::MatrixXcd V = sample_haar(N, rng2);
  CHECK((U - V).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXcd W = sample_haar(N, rng2);  // next draw from the same stream
  CHECK((U - W).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("haar law is invariant under a fixed rotation") {
  // |Tr U|^2 and |Tr PU|^2 must share the distribution; both means are 1.
  const int N = 6;
  const long S = 1500;
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(N, N);
  for (int i = 0; i < N; ++i) P(i, (i + 1) % N) = 1.0;

  Xoshiro256pp rng(777);
  std::vector<double> plain, rotated;
  for (long s = 0; s < S; ++s) {
    const Eigen::MatrixXcd U = sample_haar(N, rng);
    plain.push_back(std::norm(U.trace()));
    rotated.push_back(std::norm((P * U).trace()));
  }
  const MeanSe a = batched(plain);
  const MeanSe b = batched(rotated);
  CHECK(std::abs(a.mean - 1.0) < 3.0 * a.se);
  CHECK(std::abs(b.mean - 1.0) < 3.0 * b.se);
  CHECK(std::abs(a.mean - b.mean) < 3.0 * std::hypot(a.se, b.se));
}

TEST_CASE("word evaluation matches the block representation exactly") {
  auto alg = xy_algebra();
  const int N = 8;
  const RepresentationMap rho = xy_rho(*alg, N);

  Xoshiro256pp rng(5);
  std::vector<Eigen::MatrixXcd> U{sample_haar(N, rng), sample_haar(N, rng)};

  // Unit word and the reduced u1 u1^-1 both give N.
  CHECK(evaluate_word(word(*alg, {}), U, rho) == std::complex<double>(N, 0));
  CHECK(std::abs(evaluate_word(word(*alg, {alg->u_letter(1, +1), alg->u_letter(1, -1)}), U, rho) -
                 std::complex<double>(N, 0)) < 1e-12);

  // Constant words trace the diagonal patterns: Tr x = N * (pattern mean).
  const auto tx = evaluate_word(word(*alg, {alg->gen_letter(0)}), U, rho);
  CHECK(std::abs(tx - std::complex<double>(N * 0.5, 0)) < 1e-12);
  const auto tx2 = evaluate_word(word(*alg, {alg->gen_letter(0), alg->gen_letter(0)}), U, rho);
  CHECK(std::abs(tx2 - std::complex<double>(N * 15.0 / 32.0, 0)) < 1e-12);

  // Operator norms are the largest pattern moduli.
  CHECK(rho.generator_norm(0) == doctest::Approx(1.0));
  CHECK(rho.generator_norm(1) == doctest::Approx(1.0));

  // Normalized mixed traces obey the submultiplicative bound.
  const Monomial mixed = word(*alg, {alg->gen_letter(0), alg->u_letter(1, +1),
                                     alg->gen_letter(1), alg->u_letter(1, -1)});
  CHECK(std::abs(evaluate_word(mixed, U, rho)) / N <=
        rho.generator_norm(0) * rho.generator_norm(1) + 1e-12);

  // evaluate_poly is linear over the parsed combination.
  const Polynomial p = parse_poly(*alg, "2 x + u1 u1^-1");
  CHECK(std::abs(evaluate_poly(p, U, rho) - (2.0 * tx + std::complex<double>(N, 0))) < 1e-12);
}

TEST_CASE("block spectra require the pattern period to divide the size") {
  auto alg = xy_algebra();
  CHECK_THROWS_AS(xy_rho(*alg, 10), std::invalid_argument);
  CHECK_NOTHROW(xy_rho(*alg, 12));
  CHECK_THROWS_AS(RepresentationMap::block_spectra(*alg, 8, {{"x", {Rat(1)}}}),
                  std::invalid_argument);  // no pattern for y
}

TEST_CASE("parallel and serial drivers emit bit-identical streams") {
  auto alg = xy_algebra();
  const int N = 8;
  EnsembleConfig cfg{.V = parse_poly(*alg, "x u1 y u1^-1"),
                     .rho = xy_rho(*alg, N),
                     .t = 0.05,
                     .seed = 99,
                     .samples = 180,
                     .chains = 3,
                     .mode = SamplerMode::kMetropolis,
                     .mc = {.step = 0.3, .burn_in = 60, .sweeps_per_sample = 2}};
  const std::vector<Polynomial> obs{parse_poly(*alg, "u1 + u1^-1"), parse_poly(*alg, "x u1 y u1^-1")};

  const TraceSamples par = sample_traces(cfg, obs);
  const TraceSamples ser = sample_traces_serial(cfg, obs);
  const TraceSamples par2 = sample_traces(cfg, obs);

  REQUIRE(par.rows.size() == obs.size());
  REQUIRE(ser.rows.size() == obs.size());
  for (std::size_t j = 0; j < obs.size(); ++j) {
    REQUIRE(par.rows[j].size() == static_cast<std::size_t>(cfg.samples));
    REQUIRE(par.rows[j] == ser.rows[j]);   // exact, not approximate
    REQUIRE(par.rows[j] == par2.rows[j]);  // reruns are deterministic
  }
  REQUIRE(par.chains.size() == static_cast<std::size_t>(cfg.chains));
  for (std::size_t c = 0; c < par.chains.size(); ++c) {
    CHECK(par.chains[c].acceptance == ser.chains[c].acceptance);
    // The action is nearly flat at this coupling, so acceptance sits close
    // to one; the chain just has to be moving and book-keeping consistent.
    CHECK(par.chains[c].acceptance > 0.05);
    CHECK(par.chains[c].acceptance <= 1.0);
    CHECK(par.chains[c].proposals > 0);
  }
}

TEST_CASE("iid mode rejects a nonzero action") {
  auto alg = xy_algebra();
  EnsembleConfig cfg{.V = parse_poly(*alg, "x u1 y u1^-1"),
                     .rho = xy_rho(*alg, 4),
                     .t = 0.3,
                     .seed = 1,
                     .samples = 200,
                     .chains = 1,
                     .mode = SamplerMode::kIidHaar,
                     .mc = {}};
  CHECK_THROWS_AS(sample_traces(cfg, {parse_poly(*alg, "u1")}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_cumulants(cfg, {parse_poly(*alg, "u1")}), std::invalid_argument);
  cfg.t = 0.0;
  CHECK_NOTHROW(sample_traces(cfg, {parse_poly(*alg, "u1")}));
}

TEST_CASE("metropolis at zero coupling reproduces haar statistics") {
  auto alg = pure_algebra(1);
  const int N = 8;
  const RepresentationMap rho(*alg, N, {});
  const std::vector<Polynomial> obs{parse_poly(*alg, "u1")};

  EnsembleConfig iid{.V = Polynomial::zero(*alg),
                     .rho = rho,
                     .t = 0.0,
                     .seed = 31,
                     .samples = 1600,
                     .chains = 2,
                     .mode = SamplerMode::kIidHaar,
                     .mc = {}};
  EnsembleConfig mc = iid;
  mc.mode = SamplerMode::kMetropolis;
  mc.mc = {.step = 0.5, .burn_in = 200, .sweeps_per_sample = 3};

  auto spread = [](const TraceSamples& ts) {
    std::vector<double> sq;
    sq.reserve(ts.rows[0].size());
    for (auto z : ts.rows[0]) sq.push_back(std::norm(z));
    return batched(sq);
  };
  const MeanSe a = spread(sample_traces(iid, obs));
  const MeanSe b = spread(sample_traces(mc, obs));
  // E |Tr U|^2 = 1 for Haar on U(N).
  CHECK(std::abs(a.mean - 1.0) < 3.0 * a.se);
  CHECK(std::abs(b.mean - 1.0) < 3.0 * b.se);
}

TEST_CASE("standard errors shrink like the square root of the budget") {
  auto alg = pure_algebra(1);
  const RepresentationMap rho(*alg, 6, {});
  EnsembleConfig small{.V = Polynomial::zero(*alg),
                       .rho = rho,
                       .t = 0.0,
                       .seed = 12,
                       .samples = 400,
                       .chains = 1,
                       .mode = SamplerMode::kIidHaar,
                       .mc = {}};
  EnsembleConfig large = small;
  large.samples = 6400;

  const auto es = estimate_cumulants(small, {parse_poly(*alg, "u1 + u1^-1")});
  const auto el = estimate_cumulants(large, {parse_poly(*alg, "u1 + u1^-1")});
  CHECK(es.samples == 400);
  CHECK(el.samples == 6400);
  CHECK(el.std_error > 0.0);
  const double ratio = es.std_error / el.std_error;  // expected sqrt(16) = 4
  CHECK(ratio > 2.0);
  CHECK(ratio < 8.0);
}

TEST_CASE("cumulants of a deterministic stream vanish") {
  auto alg = xy_algebra();
  const int N = 8;
  EnsembleConfig cfg{.V = Polynomial::zero(*alg),
                     .rho = xy_rho(*alg, N),
                     .t = 0.0,
                     .seed = 7,
                     .samples = 300,
                     .chains = 1,
                     .mode = SamplerMode::kIidHaar,
                     .mc = {}};
  // Tr rho(x) never fluctuates, so the mean is exact and kappa_2 is zero.
  const Polynomial x = parse_poly(*alg, "x");
  const auto mean = estimate_cumulants(cfg, {x});
  CHECK(std::abs(mean.value - std::complex<double>(N * 0.5, 0)) < 1e-12);
  CHECK(mean.std_error < 1e-12);
  const auto var = estimate_cumulants(cfg, {x, x});
  CHECK(var.order == 2);
  CHECK(std::abs(var.value) < 1e-12);

  CHECK_THROWS_AS(estimate_cumulants(cfg, {}), std::invalid_argument);
  const std::vector<std::vector<std::complex<double>>> uneven{
      std::vector<std::complex<double>>(200, 1.0), std::vector<std::complex<double>>(199, 1.0)};
  CHECK_THROWS_AS(cumulant_from_streams(uneven), std::invalid_argument);
  CHECK_THROWS_AS(cumulant_from_streams({std::vector<std::complex<double>>(50, 1.0)}),
                  std::invalid_argument);  // jackknife needs at least 100
}

TEST_CASE("one-variable chain matches the circle quadrature") {
  // N = 1, V = u + u^-1: the weight is exp(2 t cos theta) on the circle, so
  // E[Re Tr U] has a deterministic quadrature value to compare against.
  auto alg = pure_algebra(1);
  const RepresentationMap rho(*alg, 1, {});
  const double t = 0.3;
  EnsembleConfig cfg{.V = parse_poly(*alg, "u1 + u1^-1"),
                     .rho = rho,
                     .t = t,
                     .seed = 2024,
                     .samples = 4000,
                     .chains = 2,
                     .mode = SamplerMode::kMetropolis,
                     .mc = {.step = 0.8, .burn_in = 300, .sweeps_per_sample = 3}};
  const TraceSamples ts = sample_traces(cfg, {parse_poly(*alg, "u1")});
  const MeanSe got = batched(real_parts(ts.rows[0]));

  const int K = 4096;  // periodic trapezoid: spectrally accurate here
  double num = 0.0, den = 0.0;
  for (int k = 0; k < K; ++k) {
    const double th = 2.0 * M_PI * k / K;
    const double w = std::exp(2.0 * t * std::cos(th));
    num += std::cos(th) * w;
    den += w;
  }
  const double expected = num / den;
  CHECK(std::abs(got.mean - expected) < 3.0 * got.se + 1e-3);
}

TEST_CASE("loop-equation residual is statistically zero") {
  auto alg = xy_algebra();
  const int N = 8;
  EnsembleConfig cfg{.V = parse_poly(*alg, "x u1 y u1^-1"),
                     .rho = xy_rho(*alg, N),
                     .t = 0.05,
                     .seed = 314,
                     .samples = 600,
                     .chains = 2,
                     .mode = SamplerMode::kMetropolis,
                     .mc = {.step = 0.3, .burn_in = 250, .sweeps_per_sample = 3}};
  for (const Monomial& p : {word(*alg, {alg->u_letter(1, +1)}),
                            word(*alg, {alg->u_letter(1, +1), alg->gen_letter(0)})}) {
    const CumulantEstimate r = sd_residual(p, 1, cfg);
    CHECK(std::abs(r.value) <= 3.0 * r.std_error + 1e-9);
  }
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  const auto rule = gauss_legendre(5);
  REQUIRE(rule.size() == 5);
  double wsum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    CHECK(rule[i].first > 0.0);
    CHECK(rule[i].first < 1.0);
    if (i > 0) CHECK(rule[i].first > rule[i - 1].first);
    wsum += rule[i].second;
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  // 5 nodes are exact through degree 9: integral of x^k on [0,1] is 1/(k+1).
  for (int k = 0; k <= 9; ++k) {
    double q = 0.0;
    for (const auto& [xnode, wnode] : rule) q += wnode * std::pow(xnode, k);
    CHECK(q == doctest::Approx(1.0 / (k + 1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("free-energy integration short-circuits at zero coupling") {
  auto alg = xy_algebra();
  EnsembleConfig cfg{.V = parse_poly(*alg, "x u1 y u1^-1"),
                     .rho = xy_rho(*alg, 4),
                     .t = 0.0,
                     .seed = 1,
                     .samples = 200,
                     .chains = 1,
                     .mode = SamplerMode::kAuto,
                     .mc = {}};
  const FreeEnergyEstimate fe = thermo_free_energy(cfg, 12);
  CHECK(fe.value == 0.0);
  CHECK(fe.std_error == 0.0);
  CHECK(fe.nodes == 12);
  CHECK_THROWS_AS(thermo_free_energy(cfg, 4), std::invalid_argument);
}

TEST_CASE("deviation tails thin out and fit a gaussian envelope") {
  auto alg = pure_algebra(1);
  const RepresentationMap rho(*alg, 16, {});
  EnsembleConfig cfg{.V = Polynomial::zero(*alg),
                     .rho = rho,
                     .t = 0.0,
                     .seed = 88,
                     .samples = 1500,
                     .chains = 1,
                     .mode = SamplerMode::kIidHaar,
                     .mc = {}};
  const Monomial u = word(*alg, {alg->u_letter(1, +1)});
  const TailTable tab = concentration_tail(u, {0.25, 0.5, 0.75, 1.0}, cfg);
  REQUIRE(tab.deltas.size() == 4);
  REQUIRE(tab.frequencies.size() == 4);
  CHECK(tab.degree == 1);
  CHECK(tab.sample_sd > 0.0);
  for (std::size_t i = 1; i < tab.frequencies.size(); ++i)
    CHECK(tab.frequencies[i] <= tab.frequencies[i - 1]);
  CHECK(tab.frequencies.back() < tab.frequencies.front());
  CHECK(tab.decay_rate > 0.0);

  CHECK_THROWS_AS(concentration_tail(u, {}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(concentration_tail(u, {0.5, 0.5}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(concentration_tail(word(*alg, {}), {0.5}, cfg), std::invalid_argument);
}

TEST_CASE("finite-size fit recovers a synthetic expansion") {
  std::vector<std::pair<int, double>> pts;
  for (int N : {8, 16, 32, 64}) pts.push_back({N, 2.5 - 0.7 / (static_cast<double>(N) * N)});
  const auto [a, b] = fit_one_over_n2(pts);
  CHECK(a == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(b == doctest::Approx(-0.7).epsilon(1e-6));

  CHECK_THROWS_AS(fit_one_over_n2({{8, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_one_over_n2({{8, 1.0}, {8, 2.0}}), std::invalid_argument);
}
