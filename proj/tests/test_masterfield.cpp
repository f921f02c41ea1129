#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <memory>
#include <vector>

#include "umx/calculus.hpp"
#include "umx/masterfield.hpp"
#include "umx/textio.hpp"

using namespace umx;

namespace {

std::unique_ptr<Algebra> xy_algebra() {
  std::vector<Generator> gens{{"x", true, -1}, {"y", true, -1}};
  std::map<std::string, std::vector<Rat>> pats{
      {"x", {Rat(1, 2), Rat(1), Rat(-1, 4), Rat(3, 4)}},
      {"y", {Rat(1), Rat(1, 3), Rat(-1, 3), Rat(1, 5)}}};
  return std::make_unique<Algebra>(2, gens, std::make_shared<DiagonalSigma>(4, pats));
}

}  // namespace

TEST_CASE("zero-potential trace agrees with the freeness oracle on short words") {
  auto alg = xy_algebra();
  const TraceFunctional trace(*alg, Polynomial::zero(*alg), 0);
  const FreenessOracle oracle(*alg);
  const std::vector<Letter> alphabet{alg->u_letter(1, +1), alg->u_letter(1, -1),
                                     alg->u_letter(2, +1), alg->u_letter(2, -1),
                                     alg->gen_letter(0),   alg->gen_letter(1)};
  long count = 0;
  std::function<void(std::vector<Letter>&)> walk = [&](std::vector<Letter>& ls) {
    const Monomial m = alg->reduce(ls);
    ++count;
    CAPTURE(mono_str(*alg, m));
    REQUIRE(trace.eval(0, m) == oracle.eval(m));
    if (ls.size() == 4) return;
    for (Letter l : alphabet) {
      ls.push_back(l);
      walk(ls);
      ls.pop_back();
    }
  };
  std::vector<Letter> ls;
  walk(ls);
  CHECK(count == 1 + 6 + 36 + 216 + 1296);
}

TEST_CASE("conjugation by a free unitary factorizes the trace") {
  auto alg = xy_algebra();
  CHECK(haar_trace(parse_poly(*alg, "x u1 y u1^-1")) == Scalar(Rat(3, 20)));
  CHECK(freeness_oracle(parse_poly(*alg, "x u1 y u1^-1")) == Scalar(Rat(3, 20)));
  // Alternating centered words vanish: subtract each factor's mean first.
  const Polynomial centered = (parse_poly(*alg, "x - 1/2") * parse_poly(*alg, "u1")) *
                              (parse_poly(*alg, "y - 3/10") * parse_poly(*alg, "u1^-1"));
  CHECK(haar_trace(centered) == Scalar(0));
}

TEST_CASE("pure unitary words are centered at zero potential") {
  auto alg = xy_algebra();
  CHECK(haar_trace(parse_poly(*alg, "u1 u2 u1^-1 u2^-1")) == Scalar(0));
  CHECK(haar_trace(parse_poly(*alg, "u1^3")) == Scalar(0));
  CHECK(haar_trace(parse_poly(*alg, "u1 u1^-1")) == Scalar(1));
  CHECK(haar_trace(parse_poly(*alg, "x^2")) == Scalar(Rat(15, 32)));
}

TEST_CASE("coupling-series trace solves its loop equation order by order") {
  auto alg = xy_algebra();
  Polynomial V = parse_poly(*alg, "x u1 y u1^-1");
  V += V.star();
  const int n_max = 3;
  const TraceFunctional trace(*alg, V, n_max);
  for (const char* text : {"u1", "u1 x", "u1 y u1", "u2 x u1^-1"}) {
    const Polynomial p = parse_poly(*alg, text);
    for (int i = 1; i <= 2; ++i) {
      const ScalarSeries split = trace.eval_series(partial_d(i, p));
      const ScalarSeries drift = trace.eval_series(cyclic_d(i, V) * p);
      CAPTURE(text);
      CHECK(split.coeff(0) == Scalar(0));
      for (int n = 1; n <= n_max; ++n) CHECK(split.coeff(n) + drift.coeff(n - 1) == Scalar(0));
    }
  }
}

TEST_CASE("perturbative trace is invariant under constant shifts of the potential") {
  auto alg = xy_algebra();
  Polynomial V = parse_poly(*alg, "x u1 y u1^-1");
  V += V.star();
  Polynomial shifted = V + parse_poly(*alg, "x + 3/2 y - 7");
  const Polynomial p = parse_poly(*alg, "u1 x u1 y u1^-2");
  CHECK(perturbative_trace(V, p, 3) == perturbative_trace(shifted, p, 3));
}

TEST_CASE("cyclic selfadjointness detector matches hand classification") {
  auto alg = xy_algebra();
  // The star of x u1 y u1^-1 is u1 y u1^-1 x, one of its own rotations, so a
  // single conjugated pair already gives a real weight.
  CHECK(TraceFunctional::is_cyclically_selfadjoint(parse_poly(*alg, "x u1 y u1^-1")));
  CHECK(TraceFunctional::is_cyclically_selfadjoint(parse_poly(*alg, "u1 + u1^-1")));
  CHECK(TraceFunctional::is_cyclically_selfadjoint(parse_poly(*alg, "u1^2 + u1^-2")));
  CHECK_FALSE(TraceFunctional::is_cyclically_selfadjoint(parse_poly(*alg, "u1")));
  CHECK_FALSE(TraceFunctional::is_cyclically_selfadjoint(parse_poly(*alg, "x u1")));
  CHECK_FALSE(TraceFunctional::is_cyclically_selfadjoint(parse_poly(*alg, "x u1 y u2^-1")));
  CHECK_FALSE(TraceFunctional::is_cyclically_selfadjoint(parse_poly(*alg, "i u1 + i u1^-1")));
}

TEST_CASE("series memoization reuses cyclic canonical forms") {
  auto alg = xy_algebra();
  Polynomial V = parse_poly(*alg, "x u1 y u1^-1");
  V += V.star();
  const TraceFunctional trace(*alg, V, 2);
  const ScalarSeries a = trace.eval_series(parse_poly(*alg, "x u1 y u1^-1"));
  const ScalarSeries b = trace.eval_series(parse_poly(*alg, "u1^-1 x u1 y"));
  CHECK(a == b);  // trace property: invariant under cyclic rotation
  CHECK(a.coeff(0) == Scalar(Rat(3, 20)));
}
