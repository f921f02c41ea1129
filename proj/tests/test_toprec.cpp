#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <memory>
#include <vector>

#include "umx/masterfield.hpp"
#include "umx/textio.hpp"
#include "umx/toprec.hpp"

using namespace umx;

namespace {

std::unique_ptr<Algebra> xy_algebra() {
  std::vector<Generator> gens{{"x", true, -1}, {"y", true, -1}};
  std::map<std::string, std::vector<Rat>> pats{
      {"x", {Rat(1, 2), Rat(1), Rat(-1, 4), Rat(3, 4)}},
      {"y", {Rat(1), Rat(1, 3), Rat(-1, 3), Rat(1, 5)}}};
  return std::make_unique<Algebra>(2, gens, std::make_shared<DiagonalSigma>(4, pats));
}

std::map<std::string, std::vector<std::vector<Rat>>> xy_moment_rows(int d_max, int g_max) {
  auto alg = xy_algebra();
  std::map<std::string, std::vector<std::vector<Rat>>> rows;
  for (const char* name : {"x", "y"}) {
    std::vector<Rat> genus0;
    for (int k = 0; k <= d_max; ++k) {
      std::string text = std::string(name);
      if (k != 1) text += "^" + std::to_string(k);
      const Scalar v = k == 0 ? Scalar(1) : haar_trace(parse_poly(*alg, text));
      genus0.push_back(v.re);
    }
    std::vector<std::vector<Rat>> table{genus0};
    // Diagonal patterns realize the trace exactly at every size, so every
    // higher-genus row vanishes.
    for (int g = 1; g <= g_max; ++g)
      table.emplace_back(static_cast<std::size_t>(d_max) + 1, Rat(0));
    rows[name] = std::move(table);
  }
  return rows;
}

}  // namespace

TEST_CASE("leading two-point coefficients reproduce Haar variances") {
  auto alg = xy_algebra();
  const TraceFunctional trace(*alg, Polynomial::zero(*alg), 0);
  const CorrelatorTable corr(trace, 1);
  auto two_point = [&](const char* a, const char* b) {
    return corr.eval(2, 0, std::vector<Polynomial>{parse_poly(*alg, a), parse_poly(*alg, b)})
        .coeff(0);
  };
  CHECK(two_point("u1", "u1^-1") == Scalar(1));
  CHECK(two_point("u1^2", "u1^-2") == Scalar(2));
  CHECK(two_point("u1^3", "u1^-3") == Scalar(3));
  CHECK(two_point("u1", "u1") == Scalar(0));
  CHECK(two_point("u1", "u2") == Scalar(0));
  // Exact covariance of Tr U with Tr(U U U^-1) = Tr U is again 1.
  CHECK(two_point("u1 u2 u2^-1", "u1^-1") == Scalar(1));
}

TEST_CASE("single-slot entries reduce to the trace and its genus data") {
  auto alg = xy_algebra();
  Polynomial V = parse_poly(*alg, "x u1 y u1^-1");
  V += V.star();
  const TraceFunctional trace(*alg, V, 3);
  const CorrelatorTable corr(trace, 1);
  const Polynomial p = parse_poly(*alg, "x u1 y u1^-1");
  CHECK(corr.eval(1, 0, std::vector<Polynomial>{p}) == trace.eval_series(p));
  // Exact constant-trace data: genus-1 corrections of constants vanish.
  CHECK(corr.eval(1, 1, std::vector<Polynomial>{parse_poly(*alg, "x^2")}).is_zero());
  CHECK(corr.eval(1, 0, std::vector<Polynomial>{Polynomial::one(*alg)}).coeff(0) == Scalar(1));
}

TEST_CASE("cumulants with a deterministic slot vanish") {
  auto alg = xy_algebra();
  Polynomial V = parse_poly(*alg, "x u1 y u1^-1");
  V += V.star();
  const TraceFunctional trace(*alg, V, 2);
  const CorrelatorTable corr(trace, 1);
  for (int g = 0; g <= 1; ++g) {
    CHECK(corr.eval(2, g,
                    std::vector<Polynomial>{parse_poly(*alg, "x^2"), parse_poly(*alg, "u1")})
              .is_zero());
    CHECK(corr.eval(3, g,
                    std::vector<Polynomial>{Polynomial::one(*alg), parse_poly(*alg, "u1"),
                                            parse_poly(*alg, "u1^-1")})
              .is_zero());
  }
}

TEST_CASE("correlators are symmetric in their slots") {
  auto alg = xy_algebra();
  Polynomial V = parse_poly(*alg, "x u1 y u1^-1");
  V += V.star();
  const TraceFunctional trace(*alg, V, 2);
  const CorrelatorTable corr(trace, 0);
  const Polynomial a = parse_poly(*alg, "u1 x");
  const Polynomial b = parse_poly(*alg, "y u1^-1");
  CHECK(corr.eval(2, 0, std::vector<Polynomial>{a, b}) ==
        corr.eval(2, 0, std::vector<Polynomial>{b, a}));
}

TEST_CASE("free energy series starts at the product of the means") {
  auto alg = xy_algebra();
  const Polynomial V = parse_poly(*alg, "x u1 y u1^-1");
  const ScalarSeries F0 = free_energy_series(V, 0, 4);
  CHECK(F0.coeff(0) == Scalar(0));
  CHECK(F0.coeff(1) == Scalar(Rat(3, 20)));  // sigma(x) sigma(y)
  CHECK(F0.coeff(2) == Scalar(Rat(1421, 57600)));
  CHECK(F0.coeff(3) == Scalar(Rat(-33, 64000)));
}

TEST_CASE("free energy derivative is the one-point function of the potential") {
  auto alg = xy_algebra();
  const Polynomial V = parse_poly(*alg, "x u1 y u1^-1");
  for (int g = 0; g <= 1; ++g) {
    const ScalarSeries F = free_energy_series(V, g, 4);
    const TraceFunctional trace(*alg, V, 4);
    const CorrelatorTable corr(trace, g);
    const ScalarSeries onept = corr.eval(1, g, std::vector<Polynomial>{V});
    for (int d = 1; d <= 4; ++d)
      CHECK(Scalar(Rat(d)) * F.coeff(d) == onept.coeff(d - 1));
  }
}

TEST_CASE("two-source series from loop equations matches both probe routes") {
  const auto rows = xy_moment_rows(4, 1);
  const std::vector<Rat> f0 = hciz_series_sd(rows, 0, 4);
  CHECK(f0[0] == Rat(0));
  CHECK(f0[1] == Rat(3, 20));
  CHECK(f0[2] == Rat(1421, 57600));
  CHECK(f0[3] == Rat(-33, 64000));
  const std::vector<Rat> f1 = hciz_series_sd(rows, 1, 4);
  CHECK(f1[2] == Rat(1421, 57600));  // d = 2 walk counts coincide across genus
  CHECK(f1[3] == Rat(-33, 12800));
}

TEST_CASE("two-source series rejects incomplete moment data") {
  auto rows = xy_moment_rows(4, 0);
  CHECK_THROWS_AS(hciz_series_sd(rows, 1, 4), std::invalid_argument);  // no genus-1 rows
  rows.erase("y");
  CHECK_THROWS_AS(hciz_series_sd(rows, 0, 4), std::invalid_argument);
}

TEST_CASE("limit variance of linear statistics at zero coupling") {
  auto alg = xy_algebra();
  const Polynomial zero = Polynomial::zero(*alg);
  CHECK(clt_variance(zero, parse_poly(*alg, "u1 + u1^-1"), 0).coeff(0) == Scalar(2));
  CHECK(clt_variance(zero, parse_poly(*alg, "u1^2 + u1^-2"), 0).coeff(0) == Scalar(4));
  CHECK_THROWS_AS(clt_variance(zero, parse_poly(*alg, "u1"), 0), std::invalid_argument);
}

TEST_CASE("genus bound of the table is enforced") {
  auto alg = xy_algebra();
  const TraceFunctional trace(*alg, Polynomial::zero(*alg), 0);
  const CorrelatorTable corr(trace, 0);
  CHECK_THROWS_AS(
      corr.eval(1, 1, std::vector<Polynomial>{parse_poly(*alg, "u1 u1^-1")}),
      std::out_of_range);
}
