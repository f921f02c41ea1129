#include "umx/hurwitz.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace umx {

namespace {

void partitions_rec(int remaining, int cap, IntegerPartition& cur,
                    std::vector<IntegerPartition>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(remaining, cap); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(remaining - part, part, cur, out);
    cur.pop_back();
  }
}

void check_partition(const IntegerPartition& p, const char* what) {
  int sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 1) throw std::invalid_argument(std::string(what) + ": parts must be positive");
    if (i && p[i] > p[i - 1])
      throw std::invalid_argument(std::string(what) + ": parts must be weakly decreasing");
    sum += p[i];
  }
  if (sum == 0) throw std::invalid_argument(std::string(what) + ": empty partition");
}

int partition_sum(const IntegerPartition& p) {
  return std::accumulate(p.begin(), p.end(), 0);
}

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Permutations over n symbols as 0-based image arrays, indexed by Lehmer rank.
using Perm = std::vector<std::uint8_t>;

int perm_count(int n) {
  int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int perm_rank(const Perm& p) {
  const int n = static_cast<int>(p.size());
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

Perm perm_unrank(int n, int rank) {
  std::vector<int> lehmer(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    lehmer[i] = rank % (n - i);
    rank /= (n - i);
  }
  std::vector<std::uint8_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  Perm p(n);
  for (int i = 0; i < n; ++i) {
    p[i] = pool[lehmer[i]];
    pool.erase(pool.begin() + lehmer[i]);
  }
  return p;
}

IntegerPartition cycle_type_of(const Perm& p) {
  const int n = static_cast<int>(p.size());
  std::vector<bool> seen(n, false);
  IntegerPartition type;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    type.push_back(len);
  }
  std::sort(type.rbegin(), type.rend());
  return type;
}

// Cycles on consecutive blocks, longest first: (3,2) -> (0 1 2)(3 4).
Perm canonical_of_type(int n, const IntegerPartition& type) {
  Perm p(n);
  int base = 0;
  for (int len : type) {
    for (int k = 0; k < len - 1; ++k) p[base + k] = static_cast<std::uint8_t>(base + k + 1);
    p[base + len - 1] = static_cast<std::uint8_t>(base);
    base += len;
  }
  return p;
}

}  // namespace

std::vector<IntegerPartition> partitions(int d) {
  if (d < 1 || d > 8) throw std::invalid_argument("partitions: d must be in [1, 8]");
  std::vector<IntegerPartition> out;
  IntegerPartition cur;
  partitions_rec(d, d, cur, out);
  return out;
}

mpz_class conjugacy_class_size(const IntegerPartition& alpha) {
  check_partition(alpha, "conjugacy_class_size");
  const int d = partition_sum(alpha);
  mpz_class z = 1;
  for (std::size_t i = 0; i < alpha.size();) {
    std::size_t j = i;
    while (j < alpha.size() && alpha[j] == alpha[i]) ++j;
    const int mult = static_cast<int>(j - i);
    for (int k = 0; k < mult; ++k) z *= alpha[i];
    z *= factorial(mult);
    i = j;
  }
  return factorial(d) / z;
}

MonotoneEnumerator::MonotoneEnumerator(int d, int g_max) : d_(d), g_max_(g_max) {
  if (d < 1 || d > 6) throw std::invalid_argument("MonotoneEnumerator: d must be in [1, 6]");
  if (g_max < 0) throw std::invalid_argument("MonotoneEnumerator: g_max must be nonnegative");
  r_max_ = std::max(0, 2 * g_max - 2 + 2 * d);

  parts_.resize(d + 1);
  part_index_.resize(d + 1);
  all_.resize(d + 1);
  conn_.resize(d + 1);
  for (int n = 1; n <= d; ++n) {
    parts_[n] = partitions(n);
    for (std::size_t i = 0; i < parts_[n].size(); ++i) part_index_[n][parts_[n][i]] = static_cast<int>(i);
  }

  // Tuple counts to each conjugacy class, by a dynamic program over the full
  // group: levels b ascending, any number of left factors (a b), a < b, per
  // level. Then transitive counts by peeling off the orbit of symbol 0.
  for (int n = 1; n <= d; ++n) {
    const int np = perm_count(n);
    const int nparts = static_cast<int>(parts_[n].size());

    std::vector<int> type_of(np);
    for (int r = 0; r < np; ++r) type_of[r] = part_index_[n].at(cycle_type_of(perm_unrank(n, r)));

    // act[b][a][rank] = rank of (a b) composed after the permutation.
    std::vector<std::vector<std::vector<int>>> act(n);
    for (int b = 1; b < n; ++b) {
      act[b].resize(b);
      for (int a = 0; a < b; ++a) {
        act[b][a].resize(np);
        for (int r = 0; r < np; ++r) {
          Perm p = perm_unrank(n, r);
          for (auto& img : p) {
            if (img == a) img = static_cast<std::uint8_t>(b);
            else if (img == b) img = static_cast<std::uint8_t>(a);
          }
          act[b][a][r] = perm_rank(p);
        }
      }
    }

    all_[n].resize(nparts);
    conn_[n].resize(nparts);
    for (int ai = 0; ai < nparts; ++ai) {
      const IntegerPartition& alpha = parts_[n][ai];

      std::vector<std::vector<mpz_class>> cur(r_max_ + 1, std::vector<mpz_class>(np));
      cur[0][perm_rank(canonical_of_type(n, alpha))] = 1;

      for (int b = 1; b < n; ++b) {
        std::vector<std::vector<mpz_class>> out = cur;
        std::vector<std::vector<mpz_class>> frontier = cur;
        for (int step = 1; step <= r_max_; ++step) {
          std::vector<std::vector<mpz_class>> next(r_max_ + 1, std::vector<mpz_class>(np));
          bool any = false;
          for (int r = 0; r < r_max_; ++r)
            for (int p = 0; p < np; ++p) {
              if (frontier[r][p] == 0) continue;
              any = true;
              for (int a = 0; a < b; ++a) next[r + 1][act[b][a][p]] += frontier[r][p];
            }
          if (!any) break;
          for (int r = 0; r <= r_max_; ++r)
            for (int p = 0; p < np; ++p) out[r][p] += next[r][p];
          frontier = std::move(next);
        }
        cur = std::move(out);
      }

      Grid grid;
      grid.counts.assign(r_max_ + 1, std::vector<mpz_class>(nparts));
      for (int r = 0; r <= r_max_; ++r)
        for (int p = 0; p < np; ++p)
          if (cur[r][p] != 0) grid.counts[r][type_of[p]] += cur[r][p];
      all_[n][ai] = grid;
    }

    // Transitive extraction. The orbit of symbol 0 under the generated group
    // is a union of cycles of the representative that includes its first
    // cycle; tuples split into a transitive tuple on that union and an
    // unrestricted tuple on the complement. Supports are disjoint, so the two
    // monotone words interleave in exactly one way and lengths just add.
    for (int ai = 0; ai < nparts; ++ai) {
      const IntegerPartition& alpha = parts_[n][ai];
      const int ncyc = static_cast<int>(alpha.size());
      Grid conn = all_[n][ai];

      for (unsigned mask = 0; mask + 1 < (1u << (ncyc - 1)); ++mask) {
        IntegerPartition in_type{alpha[0]}, out_type;
        for (int c = 1; c < ncyc; ++c) {
          if (mask & (1u << (c - 1))) in_type.push_back(alpha[c]);
          else out_type.push_back(alpha[c]);
        }
        const int n_in = partition_sum(in_type);
        const int n_out = n - n_in;
        const Grid& t_in = conn_[n_in][part_index_[n_in].at(in_type)];
        const Grid& a_out = all_[n_out][part_index_[n_out].at(out_type)];

        for (std::size_t bi_in = 0; bi_in < parts_[n_in].size(); ++bi_in)
          for (std::size_t bi_out = 0; bi_out < parts_[n_out].size(); ++bi_out) {
            IntegerPartition merged = parts_[n_in][bi_in];
            merged.insert(merged.end(), parts_[n_out][bi_out].begin(), parts_[n_out][bi_out].end());
            std::sort(merged.rbegin(), merged.rend());
            const int bi = part_index_[n].at(merged);
            for (int r1 = 0; r1 <= r_max_; ++r1) {
              if (t_in.counts[r1][bi_in] == 0) continue;
              for (int r2 = 0; r1 + r2 <= r_max_; ++r2) {
                if (a_out.counts[r2][bi_out] == 0) continue;
                conn.counts[r1 + r2][bi] -= t_in.counts[r1][bi_in] * a_out.counts[r2][bi_out];
              }
            }
          }
      }
      conn_[n][ai] = std::move(conn);
    }
  }
}

mpz_class MonotoneEnumerator::count(int g, const IntegerPartition& alpha,
                                    const IntegerPartition& beta) const {
  check_partition(alpha, "monotone count");
  check_partition(beta, "monotone count");
  if (g < 0) throw std::invalid_argument("monotone count: genus must be nonnegative");
  const int da = partition_sum(alpha);
  const int db = partition_sum(beta);
  if (da != db) throw std::invalid_argument("monotone count: |alpha| != |beta|");
  if (da != d_) throw std::invalid_argument("monotone count: partition size differs from enumerator degree");
  const int r = 2 * g - 2 + static_cast<int>(alpha.size()) + static_cast<int>(beta.size());
  if (r < 0) return 0;
  if (r > r_max_)
    throw std::invalid_argument("monotone count: genus exceeds the precomputed budget");
  const Grid& grid = conn_[d_][part_index_[d_].at(alpha)];
  return conjugacy_class_size(alpha) * grid.counts[r][part_index_[d_].at(beta)];
}

mpz_class monotone_count(int g, const IntegerPartition& alpha, const IntegerPartition& beta) {
  check_partition(alpha, "monotone_count");
  if (g < 0) throw std::invalid_argument("monotone_count: genus must be nonnegative");
  MonotoneEnumerator e(partition_sum(alpha), g);
  return e.count(g, alpha, beta);
}

namespace {

bool graph_connected(int n, const Perm& s0, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int i = 0; i < n; ++i) unite(i, s0[i]);
  for (const auto& [a, b] : edges) unite(a, b);
  int root = find(0);
  for (int i = 1; i < n; ++i)
    if (find(i) != root) return false;
  return true;
}

void direct_rec(int n, const Perm& s0, const IntegerPartition& beta, int remaining, int min_b,
                Perm& cur, std::vector<std::pair<int, int>>& edges, mpz_class& total) {
  if (remaining == 0) {
    if (cycle_type_of(cur) == beta && graph_connected(n, s0, edges)) ++total;
    return;
  }
  for (int b = min_b; b < n; ++b)
    for (int a = 0; a < b; ++a) {
      for (auto& img : cur) {
        if (img == a) img = static_cast<std::uint8_t>(b);
        else if (img == b) img = static_cast<std::uint8_t>(a);
      }
      edges.emplace_back(a, b);
      direct_rec(n, s0, beta, remaining - 1, b, cur, edges, total);
      edges.pop_back();
      for (auto& img : cur) {
        if (img == a) img = static_cast<std::uint8_t>(b);
        else if (img == b) img = static_cast<std::uint8_t>(a);
      }
    }
}

}  // namespace

mpz_class monotone_count_direct(int g, const IntegerPartition& beta,
                                const std::vector<int>& representative) {
  const int n = static_cast<int>(representative.size());
  if (n < 1 || n > 6) throw std::invalid_argument("monotone_count_direct: degree must be in [1, 6]");
  Perm s0(n);
  std::vector<bool> hit(n, false);
  for (int i = 0; i < n; ++i) {
    if (representative[i] < 0 || representative[i] >= n)
      throw std::invalid_argument("monotone_count_direct: bad image array");
    s0[i] = static_cast<std::uint8_t>(representative[i]);
    hit[representative[i]] = true;
  }
  for (bool h : hit)
    if (!h) throw std::invalid_argument("monotone_count_direct: image array is not a bijection");
  check_partition(beta, "monotone_count_direct");
  if (partition_sum(beta) != n)
    throw std::invalid_argument("monotone_count_direct: |beta| differs from the degree");
  const IntegerPartition alpha = cycle_type_of(s0);
  const int r = 2 * g - 2 + static_cast<int>(alpha.size()) + static_cast<int>(beta.size());
  if (r < 0) return 0;
  mpz_class total = 0;
  Perm cur = s0;
  std::vector<std::pair<int, int>> edges;
  direct_rec(n, s0, beta, r, 1, cur, edges, total);
  return conjugacy_class_size(alpha) * total;
}

std::vector<Rat> hciz_series_hurwitz(
    const std::map<std::string, std::vector<std::vector<Rat>>>& moments, int g, int d_max) {
  if (g < 0) throw std::invalid_argument("hciz_series_hurwitz: genus must be nonnegative");
  if (d_max < 0 || d_max > 6)
    throw std::invalid_argument("hciz_series_hurwitz: d_max must be in [0, 6]");
  for (const char* name : {"x", "y"})
    if (!moments.count(name))
      throw std::invalid_argument(std::string("hciz_series_hurwitz: missing moments for ") + name);
  for (const auto& [name, rows] : moments) {
    if (name != "x" && name != "y")
      throw std::invalid_argument("hciz_series_hurwitz: unexpected source " + name);
    if (rows.empty())
      throw std::invalid_argument("hciz_series_hurwitz: no moment rows for " + name);
    if (static_cast<int>(rows[0].size()) < d_max + 1)
      throw std::invalid_argument("hciz_series_hurwitz: need moments of " + name +
                                  " through power " + std::to_string(d_max));
    if (rows[0][0] != 1)
      throw std::invalid_argument("hciz_series_hurwitz: moment row g=0 of " + name +
                                  " must start with 1");
    for (std::size_t h = 1; h < rows.size(); ++h)
      for (const Rat& v : rows[h])
        if (v != 0)
          throw std::invalid_argument(
              "hciz_series_hurwitz: higher-genus moment rows must vanish for the "
              "factorization-count series");
  }

  std::vector<Rat> out(d_max + 1, Rat(0));
  if (d_max == 0) return out;

  auto sigma_pow = [&moments](const char* name, const IntegerPartition& p) {
    const std::vector<Rat>& row = moments.at(name)[0];
    Rat v(1);
    for (int part : p) v *= row[part];
    return v;
  };

  for (int d = 1; d <= d_max; ++d) {
    MonotoneEnumerator enumerator(d, g);
    const std::vector<IntegerPartition> ps = partitions(d);
    Rat sum(0);
    for (const IntegerPartition& alpha : ps) {
      const Rat sx = sigma_pow("x", alpha);
      if (sx == 0) continue;
      for (const IntegerPartition& beta : ps) {
        const Rat sy = sigma_pow("y", beta);
        if (sy == 0) continue;
        const mpz_class h = enumerator.count(g, alpha, beta);
        if (h == 0) continue;
        Rat term = sx * sy * Rat(h);
        if ((alpha.size() + beta.size()) % 2 != 0) term = -term;
        sum += term;
      }
    }
    out[d] = sum / Rat(factorial(d));
  }
  return out;
}

}  // namespace umx
