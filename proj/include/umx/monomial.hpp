#ifndef UMX_MONOMIAL_HPP
#define UMX_MONOMIAL_HPP

#include <cstdint>
#include <cstddef>
#include <vector>

namespace umx {

// One letter of a reduced word. Encoding:
//   +v / -v            unitary generator u_v or its inverse, v in 1..m
//   kConstBase + id    one basis word of the constant algebra (interned id)
using Letter = int32_t;

inline constexpr Letter kConstBase = 1 << 20;

inline bool letter_is_unitary(Letter l) { return l > -kConstBase && l < kConstBase; }
inline bool letter_is_const(Letter l) { return l >= kConstBase; }
inline int letter_uvar(Letter l) { return l > 0 ? l : -l; }
inline int letter_usign(Letter l) { return l > 0 ? +1 : -1; }
inline int letter_cid(Letter l) { return l - kConstBase; }
inline Letter unitary_letter(int var, int sign) { return sign > 0 ? var : -var; }
inline Letter const_letter(int id) { return kConstBase + id; }

// A reduced word: no adjacent cancelling unitary pair, no adjacent constant
// letters. The empty word is the algebra unit.
struct Monomial {
  std::vector<Letter> ls;

  Monomial() = default;
  explicit Monomial(std::vector<Letter> v) : ls(std::move(v)) {}

  bool is_unit() const { return ls.empty(); }
  std::size_t size() const { return ls.size(); }

  // Number of unitary letters; constant letters do not count.
  int degree() const {
    int d = 0;
    for (Letter l : ls)
      if (letter_is_unitary(l)) ++d;
    return d;
  }

  bool is_constant() const { return degree() == 0; }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.ls == b.ls; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

  Monomial sub(std::size_t first, std::size_t last) const {  // [first, last)
    return Monomial(std::vector<Letter>(ls.begin() + first, ls.begin() + last));
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (Letter l : m.ls) {
      h ^= static_cast<uint32_t>(l);
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace umx

#endif
