#ifndef UMX_ALGEBRA_HPP
#define UMX_ALGEBRA_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "umx/monomial.hpp"
#include "umx/scalar.hpp"

namespace umx {

class Algebra;

// Basis word of the constant *-algebra: a sequence of generator indices.
using BWord = std::vector<uint8_t>;

struct Generator {
  std::string name;
  bool selfadjoint = true;
  int adjoint = -1;  // index of the adjoint generator; -1 means self
};

// Trace data on the constant algebra: one linear functional per expansion
// order g = 0..max_genus, with value(0, unit) = 1 and value(g>=1, unit) = 0
// (the unit is handled by the Algebra, providers only see nonempty words).
class Sigma {
 public:
  virtual ~Sigma() = default;
  virtual int max_genus() const = 0;
  virtual Scalar value(int g, int word_id, const Algebra& alg) const = 0;
};

// The ambient algebra: free product of a constant *-algebra B (free on named
// generators, basis = words, product = concatenation, star = reversal) with
// the Laurent algebra on m unitary variables. Owns the interning pool for
// constant basis words and the trace data sigma.
class Algebra {
 public:
  Algebra(int num_unitary, std::vector<Generator> gens, std::shared_ptr<const Sigma> sigma)
      : m_(num_unitary), gens_(std::move(gens)), sigma_(std::move(sigma)) {
    if (m_ < 1) throw std::invalid_argument("need at least one unitary variable");
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      const std::string& n = gens_[i].name;
      if (n.empty() || n == "i" || n == "1" || !valid_name(n))
        throw std::invalid_argument("bad generator name: " + n);
      if (!name_index_.emplace(n, static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate generator name: " + n);
      if (!gens_[i].selfadjoint && gens_[i].adjoint < 0)
        throw std::invalid_argument("non-selfadjoint generator needs an adjoint: " + n);
    }
  }

  int num_unitary() const { return m_; }
  int num_generators() const { return static_cast<int>(gens_.size()); }
  const Generator& generator(int i) const { return gens_[static_cast<std::size_t>(i)]; }
  std::optional<int> generator_index(const std::string& name) const {
    auto it = name_index_.find(name);
    if (it == name_index_.end()) return std::nullopt;
    return it->second;
  }
  const Sigma& sigma() const { return *sigma_; }
  int max_genus() const { return sigma_->max_genus(); }

  // --- constant-word pool -------------------------------------------------
  int intern(const BWord& w) const {
    if (w.empty()) throw std::logic_error("unit is not a pooled word");
    auto it = pool_index_.find(w);
    if (it != pool_index_.end()) return it->second;
    int id = static_cast<int>(pool_.size());
    pool_.push_back(w);
    pool_index_.emplace(w, id);
    return id;
  }
  const BWord& word(int id) const { return pool_[static_cast<std::size_t>(id)]; }

  int concat(int a, int b) const {
    BWord w = word(a);
    const BWord& v = word(b);
    w.insert(w.end(), v.begin(), v.end());
    return intern(w);
  }
  int star_word(int id) const {
    const BWord& w = word(id);
    BWord r;
    r.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      const Generator& g = gens_[*it];
      r.push_back(static_cast<uint8_t>(g.selfadjoint ? *it : g.adjoint));
    }
    return intern(r);
  }

  Letter gen_letter(int gen_index) const {
    return const_letter(intern(BWord{static_cast<uint8_t>(gen_index)}));
  }
  Letter u_letter(int var, int sign) const {
    if (var < 1 || var > m_) throw std::invalid_argument("unitary index out of range");
    return unitary_letter(var, sign);
  }

  // --- canonical letter and word order ------------------------------------
  // Unitary letters precede constants; unitary letters sort by variable then
  // exponent (+1 before -1); constant letters sort by word length then by
  // generator indices.
  bool letter_less(Letter a, Letter b) const {
    const bool ua = letter_is_unitary(a), ub = letter_is_unitary(b);
    if (ua != ub) return ua;
    if (ua) {
      if (letter_uvar(a) != letter_uvar(b)) return letter_uvar(a) < letter_uvar(b);
      return letter_usign(a) > letter_usign(b);
    }
    const BWord& wa = word(letter_cid(a));
    const BWord& wb = word(letter_cid(b));
    if (wa.size() != wb.size()) return wa.size() < wb.size();
    return wa < wb;
  }

  bool mono_less(const Monomial& a, const Monomial& b) const {
    const std::size_t n = std::min(a.ls.size(), b.ls.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.ls[i] != b.ls[i]) return letter_less(a.ls[i], b.ls[i]);
    }
    return a.ls.size() < b.ls.size();
  }

  // --- word reduction and products ----------------------------------------
  // Restores the reduced form: cancels adjacent u v / u_v^{-1} pairs and
  // merges adjacent constant letters by concatenation.
  Monomial reduce(const std::vector<Letter>& raw) const {
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (Letter l : raw) {
      out.push_back(l);
      while (out.size() >= 2) {
        Letter y = out[out.size() - 1], x = out[out.size() - 2];
        if (letter_is_unitary(x) && letter_is_unitary(y) && x == -y) {
          out.pop_back();
          out.pop_back();
        } else if (letter_is_const(x) && letter_is_const(y)) {
          int id = concat(letter_cid(x), letter_cid(y));
          out.pop_back();
          out.back() = const_letter(id);
        } else {
          break;
        }
      }
    }
    return Monomial(std::move(out));
  }

  Monomial mul(const Monomial& a, const Monomial& b) const {
    std::vector<Letter> raw = a.ls;
    raw.insert(raw.end(), b.ls.begin(), b.ls.end());
    return reduce(raw);
  }

  Monomial star(const Monomial& a) const {
    std::vector<Letter> raw;
    raw.reserve(a.ls.size());
    for (auto it = a.ls.rbegin(); it != a.ls.rend(); ++it) {
      Letter l = *it;
      if (letter_is_unitary(l)) raw.push_back(-l);
      else raw.push_back(const_letter(star_word(letter_cid(l))));
    }
    return reduce(raw);
  }

  // Trace-equivalent form with nothing cancelling or merging across the word
  // boundary: a leading/trailing inverse unitary pair is cancelled, boundary
  // constants are merged (rotating the trailing constant to the front).
  Monomial cyclic_reduce(const Monomial& a) const {
    std::vector<Letter> w = a.ls;
    for (;;) {
      if (w.size() < 2) break;
      Letter f = w.front(), b = w.back();
      if (letter_is_unitary(f) && letter_is_unitary(b) && f == -b) {
        w.erase(w.begin());
        w.pop_back();
      } else if (letter_is_const(f) && letter_is_const(b)) {
        int id = concat(letter_cid(b), letter_cid(f));
        w.erase(w.begin());
        w.back() = const_letter(id);
        std::rotate(w.begin(), w.end() - 1, w.end());
      } else {
        break;
      }
    }
    return Monomial(std::move(w));
  }

  // Canonical representative of the trace orbit: cyclically reduced, then the
  // least rotation in canonical word order. Used as memo key by every trace.
  Monomial canonical_cyclic(const Monomial& a) const {
    Monomial r = cyclic_reduce(a);
    const std::size_t n = r.ls.size();
    if (n < 2) return r;
    Monomial best = r;
    std::vector<Letter> rot = r.ls;
    for (std::size_t k = 1; k < n; ++k) {
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
      Monomial cand{rot};
      if (mono_less(cand, best)) best = cand;
    }
    return best;
  }

  // --- degree bookkeeping ---------------------------------------------------
  // Per-variable (positive, negative) exponent counts.
  void degree_stats(const Monomial& a, std::vector<int>& plus, std::vector<int>& minus) const {
    plus.assign(static_cast<std::size_t>(m_) + 1, 0);
    minus.assign(static_cast<std::size_t>(m_) + 1, 0);
    for (Letter l : a.ls) {
      if (!letter_is_unitary(l)) continue;
      if (letter_usign(l) > 0) ++plus[static_cast<std::size_t>(letter_uvar(l))];
      else ++minus[static_cast<std::size_t>(letter_uvar(l))];
    }
  }

  bool balanced(const Monomial& a) const {
    std::vector<int> p, m;
    degree_stats(a, p, m);
    for (std::size_t v = 1; v < p.size(); ++v)
      if (p[v] != m[v]) return false;
    return true;
  }

  // --- trace data -----------------------------------------------------------
  // sigma on a degree-0 reduced monomial (empty word or one constant letter).
  Scalar sigma_of(int g, const Monomial& a) const {
    if (a.is_unit()) return g == 0 ? Scalar(1) : Scalar(0);
    if (a.ls.size() != 1 || !letter_is_const(a.ls[0]))
      throw std::logic_error("sigma_of needs a degree-0 reduced monomial");
    return sigma_->value(g, letter_cid(a.ls[0]), *this);
  }

  static bool valid_name(const std::string& n) {
    if (!(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_')) return false;
    for (char c : n)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    if (n[0] == 'u') {  // u<digits> is reserved for unitary letters
      bool all_digits = n.size() > 1;
      for (std::size_t i = 1; i < n.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(n[i]))) all_digits = false;
      if (all_digits) return false;
    }
    return true;
  }

 private:
  int m_;
  std::vector<Generator> gens_;
  std::map<std::string, int> name_index_;
  mutable std::vector<BWord> pool_;
  mutable std::map<BWord, int> pool_index_;
  std::shared_ptr<const Sigma> sigma_;
};

// ---------------------------------------------------------------------------
// Trace-data providers.

// Zero data beyond the unit: sigma_0 = counit on words of length 0 only.
// Handy for purely unitary computations.
class UnitSigma final : public Sigma {
 public:
  int max_genus() const override { return 0; }
  Scalar value(int, int, const Algebra&) const override { return Scalar(0); }
};

// Diagonal model: every generator is represented by a periodic diagonal
// pattern of rational entries; sigma_0(word) is the average over one period of
// the entrywise product, and all higher-order data vanishes. This is exactly
// the normalized matrix trace of the block-repeated representation at every
// matrix size divisible by the period.
class DiagonalSigma final : public Sigma {
 public:
  DiagonalSigma(int period, std::map<std::string, std::vector<Rat>> patterns, bool require_contractive = true)
      : period_(period), patterns_(std::move(patterns)) {
    if (period_ < 1) throw std::invalid_argument("period must be positive");
    for (auto& [name, v] : patterns_) {
      if (static_cast<int>(v.size()) != period_)
        throw std::invalid_argument("pattern length mismatch for " + name);
      if (require_contractive)
        for (const Rat& x : v)
          if (abs(x) > 1) throw std::invalid_argument("pattern entry exceeds unit norm for " + name);
    }
  }

  int max_genus() const override { return 0; }
  int period() const { return period_; }
  const std::vector<Rat>& pattern(const std::string& name) const {
    auto it = patterns_.find(name);
    if (it == patterns_.end()) throw std::invalid_argument("no pattern for generator " + name);
    return it->second;
  }

  Scalar value(int g, int word_id, const Algebra& alg) const override {
    if (g != 0) return Scalar(0);
    auto it = memo_.find(word_id);
    if (it != memo_.end()) return it->second;
    const BWord& w = alg.word(word_id);
    Rat acc(0);
    for (int k = 0; k < period_; ++k) {
      Rat prod(1);
      for (uint8_t gi : w) prod *= pattern(alg.generator(gi).name)[static_cast<std::size_t>(k)];
      acc += prod;
    }
    Scalar out(acc / period_);
    memo_.emplace(word_id, out);
    return out;
  }

 private:
  int period_;
  std::map<std::string, std::vector<Rat>> patterns_;
  mutable std::map<int, Scalar> memo_;
};

// Per-generator moment sequences m_g[k] ~ trace of the k-th power at expansion
// order g. Words factorize across generators by total power, with the order
// distributed over the factors (convolution); this realizes product-uniform
// pairing of the generator spectra. Requires m_0[0] = 1 and m_{g>=1}[0] = 0.
class MomentSigma final : public Sigma {
 public:
  MomentSigma(int max_genus, std::map<std::string, std::vector<std::vector<Rat>>> moments)
      : h_(max_genus), moments_(std::move(moments)) {
    if (h_ < 0) throw std::invalid_argument("max genus must be >= 0");
    for (auto& [name, rows] : moments_) {
      if (static_cast<int>(rows.size()) < h_ + 1)
        throw std::invalid_argument("need rows g=0.." + std::to_string(h_) + " for " + name);
      for (int g = 0; g < static_cast<int>(rows.size()); ++g) {
        if (rows[static_cast<std::size_t>(g)].empty())
          throw std::invalid_argument("empty moment row for " + name);
        const Rat& m0 = rows[static_cast<std::size_t>(g)][0];
        if ((g == 0 && m0 != 1) || (g > 0 && m0 != 0))
          throw std::invalid_argument("moment row g=" + std::to_string(g) + " of " + name +
                                      " must start with " + (g == 0 ? "1" : "0"));
      }
    }
  }

  int max_genus() const override { return h_; }

  Scalar value(int g, int word_id, const Algebra& alg) const override {
    if (g > h_) return Scalar(0);
    const BWord& w = alg.word(word_id);
    std::map<int, int> power;
    for (uint8_t gi : w) ++power[gi];
    // Distribute the order g over the generator factors.
    std::vector<std::pair<int, int>> ps(power.begin(), power.end());
    Rat acc = convolve(ps, 0, g, alg);
    return Scalar(acc);
  }

 private:
  Rat moment(int g, int gen, int k, const Algebra& alg) const {
    auto it = moments_.find(alg.generator(gen).name);
    if (it == moments_.end())
      throw std::invalid_argument("no moments for generator " + alg.generator(gen).name);
    const auto& row = it->second[static_cast<std::size_t>(g)];
    if (k >= static_cast<int>(row.size()))
      throw std::out_of_range("moment budget exceeded: need power " + std::to_string(k) +
                              " of " + alg.generator(gen).name);
    return row[static_cast<std::size_t>(k)];
  }

  Rat convolve(const std::vector<std::pair<int, int>>& ps, std::size_t i, int g, const Algebra& alg) const {
    if (i == ps.size()) return g == 0 ? Rat(1) : Rat(0);
    Rat acc(0);
    for (int gi = 0; gi <= g; ++gi) {
      Rat m = moment(gi, ps[i].first, ps[i].second, alg);
      if (m == 0) continue;
      acc += m * convolve(ps, i + 1, g - gi, alg);
    }
    return acc;
  }

  int h_;
  std::map<std::string, std::vector<std::vector<Rat>>> moments_;
};

// Explicit finite table of word values. Traciality of the provided data is
// validated on construction (all listed rotations of a word must agree).
class TableSigma final : public Sigma {
 public:
  TableSigma(int max_genus, std::map<std::pair<int, std::string>, Scalar> entries)
      : h_(max_genus), entries_(std::move(entries)) {}

  int max_genus() const override { return h_; }

  Scalar value(int g, int word_id, const Algebra& alg) const override {
    if (g > h_) return Scalar(0);
    const BWord& w = alg.word(word_id);
    // Look the word up under all rotations; traciality makes them equal.
    BWord rot = w;
    for (std::size_t k = 0; k < w.size(); ++k) {
      auto it = entries_.find({g, key(rot, alg)});
      if (it != entries_.end()) {
        if (k > 0) check_rotations(g, w, it->second, alg);
        return it->second;
      }
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    }
    throw std::out_of_range("trace table has no entry for required word");
  }

 private:
  static std::string key(const BWord& w, const Algebra& alg) {
    std::string s;
    for (uint8_t gi : w) {
      if (!s.empty()) s += ' ';
      s += alg.generator(gi).name;
    }
    return s;
  }
  void check_rotations(int g, const BWord& w, const Scalar& v, const Algebra& alg) const {
    BWord rot = w;
    for (std::size_t k = 0; k < w.size(); ++k) {
      auto it = entries_.find({g, key(rot, alg)});
      if (it != entries_.end() && !(it->second == v))
        throw std::invalid_argument("trace table is not tracial at word " + key(w, alg));
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    }
  }

  int h_;
  std::map<std::pair<int, std::string>, Scalar> entries_;
};

// Reduced cyclic shift of w ending at the letter w[j]: w[j+1..] w[0..j].
inline Monomial rotation_ending_at(const Algebra& alg, const Monomial& w, std::size_t j) {
  std::vector<Letter> raw;
  raw.reserve(w.ls.size());
  raw.insert(raw.end(), w.ls.begin() + static_cast<std::ptrdiff_t>(j) + 1, w.ls.end());
  raw.insert(raw.end(), w.ls.begin(), w.ls.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  return alg.reduce(raw);
}

// Reduced cyclic shift of w starting at the letter w[j]: w[j..] w[0..j).
inline Monomial rotation_starting_at(const Algebra& alg, const Monomial& w, std::size_t j) {
  std::vector<Letter> raw;
  raw.reserve(w.ls.size());
  raw.insert(raw.end(), w.ls.begin() + static_cast<std::ptrdiff_t>(j), w.ls.end());
  raw.insert(raw.end(), w.ls.begin(), w.ls.begin() + static_cast<std::ptrdiff_t>(j));
  return alg.reduce(raw);
}

}  // namespace umx

#endif
