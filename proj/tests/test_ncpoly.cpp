#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <string>

#include "umx/algebra.hpp"
#include "umx/polynomial.hpp"
#include "umx/textio.hpp"

using namespace umx;

namespace {

std::unique_ptr<Algebra> two_unitary_algebra() {
  std::vector<Generator> gens{{"x", true, -1}, {"y", true, -1}, {"a", false, 3}, {"as", false, 2}};
  return std::make_unique<Algebra>(2, gens, std::make_shared<UnitSigma>());
}

}  // namespace

TEST_CASE("reduction cancels inverse pairs and merges constant runs") {
  auto alg = two_unitary_algebra();
  CHECK(parse_poly(*alg, "u1 u2 u2^-1 x y u1^-1") == parse_poly(*alg, "u1 x y u1^-1"));
  CHECK(parse_poly(*alg, "u1 u1^-1") == Polynomial::one(*alg));
  CHECK(parse_poly(*alg, "x y") == parse_poly(*alg, "b[x y]"));
  // A cancellation that exposes a new inverse pair must cascade.
  CHECK(parse_poly(*alg, "u1 u2 u2^-1 u1^-1 x") == parse_poly(*alg, "x"));
}

TEST_CASE("product of polynomials reduces across the seam") {
  auto alg = two_unitary_algebra();
  const Polynomial l = parse_poly(*alg, "u1 x");
  const Polynomial r = parse_poly(*alg, "x u1^-1");
  CHECK(l * r == parse_poly(*alg, "u1 x^2 u1^-1"));
  CHECK(parse_poly(*alg, "u1") * parse_poly(*alg, "u1^-1") == Polynomial::one(*alg));
}

TEST_CASE("star reverses words, inverts unitaries, conjugates coefficients") {
  auto alg = two_unitary_algebra();
  CHECK(parse_poly(*alg, "u1 x").star() == parse_poly(*alg, "x u1^-1"));
  CHECK(parse_poly(*alg, "i u1 x").star() == parse_poly(*alg, "-i x u1^-1"));
  CHECK(parse_poly(*alg, "a").star() == parse_poly(*alg, "as"));
  CHECK(parse_poly(*alg, "u1 a u2").star() == parse_poly(*alg, "u2^-1 as u1^-1"));
  const Polynomial v = parse_poly(*alg, "x u1 y u1^-1 + u1 y u1^-1 x");
  CHECK(v.star() == v);  // cyclically selfadjoint pair written out
}

TEST_CASE("degree counts unitary letters only") {
  auto alg = two_unitary_algebra();
  CHECK(parse_poly(*alg, "x u1 y u1^-1").degree() == 2);
  CHECK(parse_poly(*alg, "b[x y x]").degree() == 0);
  CHECK(parse_poly(*alg, "u1^3 u2^-2").degree() == 5);
  CHECK(Polynomial::zero(*alg).degree() == -1);
}

TEST_CASE("norms weight words by unitary degree") {
  auto alg = two_unitary_algebra();
  const Polynomial p = parse_poly(*alg, "2 u1 + x");
  CHECK(p.l1_exact() == Rat(3));
  CHECK(p.xi_norm_exact(Rat(12)) == Rat(25));
  CHECK(parse_poly(*alg, "1/2 u1 u2").xi_norm_exact(Rat(2)) == Rat(2));
}

TEST_CASE("projections split fluctuation and constant parts") {
  auto alg = two_unitary_algebra();
  const Polynomial p = parse_poly(*alg, "3 + x + u1 y");
  CHECK(p.project_pos() == parse_poly(*alg, "u1 y"));
  CHECK(p.constant_part() == parse_poly(*alg, "3 + x"));
  CHECK(p.project_pos() + p.constant_part() == p);
}

TEST_CASE("canonical text round-trips and the printer is idempotent") {
  auto alg = two_unitary_algebra();
  for (const char* text : {"u1", "u1^-1", "x u1 y u1^-1", "1/2 - 3/4 u2^2", "b[x y] u1 as",
                           "(1/2+1/3i) u1 + (1/2-1/3i) u1^-1", "1"}) {
    const Polynomial p = parse_poly(*alg, text);
    const std::string canon = poly_str(p);
    CHECK(parse_poly(*alg, canon) == p);
    CHECK(poly_str(parse_poly(*alg, canon)) == canon);
  }
}

TEST_CASE("parse errors name the offending token") {
  auto alg = two_unitary_algebra();
  CHECK_THROWS_AS(parse_poly(*alg, "u1 +"), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly(*alg, "u3"), std::invalid_argument);  // only two unitaries
  CHECK_THROWS_AS(parse_poly(*alg, "zz"), std::invalid_argument);  // unknown generator
  try {
    parse_poly(*alg, "u1^oops");
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("parse error") != std::string::npos);
    CHECK(std::string(e.what()).find("u1^oops") != std::string::npos);
  }
}

TEST_CASE("mixed complex coefficients have no exact modulus") {
  CHECK(Scalar(Rat(-3, 4)).modulus_exact() == Rat(3, 4));
  CHECK(Scalar(Rat(0), Rat(-2)).modulus_exact() == Rat(2));
  CHECK_THROWS_AS(Scalar(Rat(1), Rat(1)).modulus_exact(), std::domain_error);
}

TEST_CASE("tensor terms enforce rank and weight by total degree") {
  auto alg = two_unitary_algebra();
  TensorPoly t(*alg, 2);
  const Monomial u = parse_poly(*alg, "u1").terms().begin()->first;
  const Monomial xu = parse_poly(*alg, "x u1").terms().begin()->first;
  t.add_term(u, xu, Scalar(Rat(1, 2)));
  CHECK(t.xi_norm_exact(Rat(2)) == Rat(2));  // (1/2) * 2^(1+1)
  CHECK_THROWS_AS(t.add_term(TensorPoly::Key{u}, Scalar(1)), std::invalid_argument);
  CHECK_THROWS_AS(TensorPoly(*alg, 1), std::invalid_argument);
}

TEST_CASE("diagonal trace data averages patterns and rejects oversize entries") {
  std::map<std::string, std::vector<Rat>> pats{{"x", {Rat(1, 2), Rat(-1, 2)}}};
  std::vector<Generator> gens{{"x", true, -1}};
  Algebra alg(1, gens, std::make_shared<DiagonalSigma>(2, pats));
  auto cid = [&alg](const char* text) {
    const Monomial m = parse_poly(alg, text).terms().begin()->first;
    REQUIRE(m.ls.size() == 1);
    return letter_cid(m.ls[0]);
  };
  CHECK(alg.sigma().value(0, cid("x"), alg) == Scalar(0));
  CHECK(alg.sigma().value(0, cid("x^2"), alg) == Scalar(Rat(1, 4)));
  CHECK(alg.sigma().value(1, cid("x^2"), alg) == Scalar(0));  // exact data: no corrections
  std::map<std::string, std::vector<Rat>> big{{"x", {Rat(3, 2), Rat(0)}}};
  CHECK_THROWS_AS(DiagonalSigma(2, big), std::invalid_argument);
}
