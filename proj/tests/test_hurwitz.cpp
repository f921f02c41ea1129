#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <vector>

#include "umx/hurwitz.hpp"

using namespace umx;

namespace {

// 0-based image array of the canonical permutation of cycle type alpha:
// consecutive blocks, each a forward cycle.
std::vector<int> canonical_representative(const IntegerPartition& alpha) {
  std::vector<int> rep;
  int pos = 0;
  for (int part : alpha) {
    for (int j = 0; j < part; ++j) rep.push_back(pos + (j + 1) % part);
    pos += part;
  }
  return rep;
}

}  // namespace

TEST_CASE("partition enumeration is complete and descending-lex ordered") {
  CHECK(partitions(1).size() == 1);
  CHECK(partitions(2).size() == 2);
  CHECK(partitions(3).size() == 3);
  CHECK(partitions(4).size() == 5);
  CHECK(partitions(5).size() == 7);
  CHECK(partitions(6).size() == 11);
  CHECK(partitions(8).size() == 22);
  const auto p4 = partitions(4);
  CHECK(p4.front() == IntegerPartition{4});
  CHECK(p4.back() == IntegerPartition{1, 1, 1, 1});
  for (std::size_t i = 0; i + 1 < p4.size(); ++i) CHECK(p4[i] > p4[i + 1]);
  CHECK_THROWS_AS(partitions(0), std::invalid_argument);
  CHECK_THROWS_AS(partitions(9), std::invalid_argument);
}

TEST_CASE("conjugacy class sizes follow the cycle-type formula") {
  CHECK(conjugacy_class_size({1, 1, 1}) == 1);
  CHECK(conjugacy_class_size({2, 1}) == 3);
  CHECK(conjugacy_class_size({3}) == 2);
  CHECK(conjugacy_class_size({2, 2}) == 3);
  CHECK(conjugacy_class_size({4}) == 6);
  CHECK(conjugacy_class_size({6}) == 120);
}

TEST_CASE("degree-one and degree-two counts are the calibration table") {
  CHECK(monotone_count(0, {1}, {1}) == 1);
  // One symbol admits no transpositions, so positive genus dies out.
  CHECK(monotone_count(1, {1}, {1}) == 0);
  for (const auto& a : partitions(2))
    for (const auto& b : partitions(2))
      for (int g = 0; g <= 1; ++g) CHECK(monotone_count(g, a, b) == 1);
}

TEST_CASE("frozen factorization counts at degrees three and four") {
  CHECK(monotone_count(0, {3}, {3}) == 2);
  CHECK(monotone_count(0, {3}, {1, 1, 1}) == 4);
  CHECK(monotone_count(0, {1, 1, 1}, {1, 1, 1}) == 8);
  CHECK(monotone_count(1, {3}, {3}) == 10);
  CHECK(monotone_count(1, {1, 1, 1}, {1, 1, 1}) == 40);
  CHECK(monotone_count(0, {4}, {4}) == 6);
  CHECK(monotone_count(0, {2, 2}, {2, 2}) == 18);
  CHECK(monotone_count(0, {1, 1, 1, 1}, {1, 1, 1, 1}) == 144);
  CHECK(monotone_count(1, {1, 1, 1, 1}, {1, 1, 1, 1}) == 1944);
}

TEST_CASE("counts are symmetric between source and target classes") {
  for (int d = 2; d <= 4; ++d) {
    const MonotoneEnumerator e(d, 1);
    for (const auto& a : partitions(d))
      for (const auto& b : partitions(d))
        for (int g = 0; g <= 1; ++g) CHECK(e.count(g, a, b) == e.count(g, b, a));
  }
}

TEST_CASE("dynamic program agrees with direct depth-first enumeration") {
  for (int d = 3; d <= 4; ++d) {
    for (const auto& a : partitions(d)) {
      const std::vector<int> rep = canonical_representative(a);
      for (const auto& b : partitions(d)) {
        for (int g = 0; g <= 1; ++g) {
          CAPTURE(d);
          CAPTURE(g);
          CHECK(monotone_count(g, a, b) == monotone_count_direct(g, b, rep));
        }
      }
    }
  }
}

TEST_CASE("enumerator validates its inputs") {
  CHECK_THROWS_AS(MonotoneEnumerator(7, 1), std::invalid_argument);
  CHECK_THROWS_AS(MonotoneEnumerator(0, 1), std::invalid_argument);
  const MonotoneEnumerator e(3, 1);
  // Walk length 2g - 2 + len + len beyond the precomputed budget is refused;
  // genus values whose length still fits inside the grid are answered.
  CHECK_THROWS_AS(e.count(4, {3}, {3}), std::invalid_argument);
  CHECK_THROWS_AS(e.count(0, {4}, {3}), std::invalid_argument);  // wrong degree
  CHECK_THROWS_AS(e.count(0, {2}, {2}), std::invalid_argument);  // wrong degree
  CHECK(e.count(0, {2, 1}, {1, 1, 1}) >= 0);  // r = 3, inside the budget
}

TEST_CASE("walk-count free energy rejects inexact higher-genus data") {
  std::map<std::string, std::vector<std::vector<Rat>>> rows{
      {"x", {{Rat(1), Rat(1, 2)}, {Rat(0), Rat(1, 7)}}},
      {"y", {{Rat(1), Rat(1, 3)}, {Rat(0), Rat(0)}}}};
  CHECK_THROWS_AS(hciz_series_hurwitz(rows, 1, 1), std::invalid_argument);
  rows["x"][1][1] = Rat(0);
  const std::vector<Rat> f1 = hciz_series_hurwitz(rows, 1, 1);
  CHECK(f1[0] == Rat(0));
  CHECK(f1[1] == Rat(0));  // d = 1, g = 1: no factorizations on one symbol
  const std::vector<Rat> f0 = hciz_series_hurwitz(rows, 0, 1);
  CHECK(f0[1] == Rat(1, 6));  // sigma(x) sigma(y) = 1/2 * 1/3
}
