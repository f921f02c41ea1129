#include "umx/textio.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace umx {
namespace {

[[noreturn]] void fail(const std::string& tok, const std::string& why) {
  throw std::invalid_argument("parse error at '" + tok + "': " + why);
}

bool is_rat_literal(const std::string& s) {
  if (s.empty() || !std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  bool slash = false;
  for (char c : s) {
    if (c == '/') {
      if (slash) return false;
      slash = true;
    } else if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

// "i", "rat", "rati", with no sign (signs are handled by the term splitter).
bool try_unsigned_scalar(const std::string& s, Scalar& out) {
  if (s == "i") {
    out = Scalar(Rat(0), Rat(1));
    return true;
  }
  if (!s.empty() && s.back() == 'i') {
    std::string body = s.substr(0, s.size() - 1);
    if (is_rat_literal(body)) {
      out = Scalar(Rat(0), rat_parse(body));
      return true;
    }
    return false;
  }
  if (is_rat_literal(s)) {
    out = Scalar(rat_parse(s));
    return true;
  }
  return false;
}

// Body of a parenthesized coefficient: "a", "a+bi", "a-bi", "bi", "i".
Scalar parse_paren_scalar(const std::string& body) {
  std::string s;
  for (char c : body)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) fail("()", "empty coefficient");
  bool neg_first = false;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg_first = s[0] == '-';
    pos = 1;
  }
  // Split at the first '+'/'-' after the leading sign, if any.
  std::size_t split = std::string::npos;
  for (std::size_t i = pos; i < s.size(); ++i)
    if (s[i] == '+' || s[i] == '-') {
      split = i;
      break;
    }
  auto one_part = [&](const std::string& part, bool neg) -> Scalar {
    Scalar v;
    if (!try_unsigned_scalar(part, v)) fail(part, "expected rational or imaginary literal");
    return neg ? -v : v;
  };
  if (split == std::string::npos) return one_part(s.substr(pos), neg_first);
  Scalar a = one_part(s.substr(pos, split - pos), neg_first);
  Scalar b = one_part(s.substr(split + 1), s[split] == '-');
  if (a.im != 0 || b.re != 0) fail(s, "expected 're im*i' ordering");
  return a + b;
}

struct Token {
  enum Kind { Sign, Coeff, Atom } kind;
  std::string text;  // for Sign: "+"/"-"; for Coeff: paren body; for Atom: raw
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
      ++i;
      continue;
    }
    if (c == '+' || c == '-') {
      out.push_back({Token::Sign, std::string(1, c)});
      ++i;
      continue;
    }
    if (c == '(') {
      std::size_t j = text.find(')', i);
      if (j == std::string::npos) fail(text.substr(i), "unclosed '('");
      out.push_back({Token::Coeff, text.substr(i + 1, j - i - 1)});
      i = j + 1;
      continue;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      std::string tok;
      while (j < n) {
        char d = text[j];
        if (d == '[') {  // bracketed basis word, spaces allowed inside
          std::size_t k = text.find(']', j);
          if (k == std::string::npos) fail(text.substr(i), "unclosed '['");
          tok += text.substr(j, k - j + 1);
          j = k + 1;
          continue;
        }
        bool ok = std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '^' || d == '/';
        if (d == '-' && j > i && text[j - 1] == '^') ok = true;  // exponent sign
        if (!ok) break;
        tok += d;
        ++j;
      }
      out.push_back({Token::Atom, tok});
      i = j;
      continue;
    }
    fail(std::string(1, c), "unexpected character");
  }
  return out;
}

// "name", "name^3", "u2^-1", "b[x y]^2", "1" -> letters appended to raw.
void parse_factor(const Algebra& alg, const std::string& tok, std::vector<Letter>& raw) {
  std::string base = tok;
  long expo = 1;
  if (auto caret = tok.rfind('^'); caret != std::string::npos && tok.find(']', caret) == std::string::npos) {
    base = tok.substr(0, caret);
    std::string e = tok.substr(caret + 1);
    if (e.empty() || (e == "-")) fail(tok, "missing exponent");
    try {
      expo = std::stol(e);
    } catch (const std::exception&) {
      fail(tok, "bad exponent");
    }
  }
  if (base == "1") {
    if (expo < 0) fail(tok, "the unit has no negative powers");
    return;
  }
  if (base.size() >= 2 && base[0] == 'u' && std::isdigit(static_cast<unsigned char>(base[1]))) {
    bool digits = true;
    for (std::size_t k = 1; k < base.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(base[k]))) digits = false;
    if (digits) {
      int var = std::stoi(base.substr(1));
      if (var < 1 || var > alg.num_unitary()) fail(tok, "unitary index out of range");
      int sign = expo >= 0 ? 1 : -1;
      for (long k = 0; k < (expo >= 0 ? expo : -expo); ++k) raw.push_back(alg.u_letter(var, sign));
      return;
    }
  }
  if (expo < 0) fail(tok, "constant letters have no negative powers");
  BWord w;
  if (base.size() >= 2 && base[0] == 'b' && base[1] == '[') {
    if (base.back() != ']') fail(tok, "malformed basis word");
    std::istringstream in(base.substr(2, base.size() - 3));
    std::string name;
    while (in >> name) {
      auto gi = alg.generator_index(name);
      if (!gi) fail(name, "unknown generator");
      w.push_back(static_cast<uint8_t>(*gi));
    }
    if (w.empty()) fail(tok, "empty basis word");
  } else {
    auto gi = alg.generator_index(base);
    if (!gi) fail(base, "unknown generator");
    w.push_back(static_cast<uint8_t>(*gi));
  }
  for (long k = 0; k < expo; ++k)
    for (uint8_t gi : w) raw.push_back(alg.gen_letter(gi));
}

}  // namespace

Polynomial parse_poly(const Algebra& alg, const std::string& text) {
  std::vector<Token> toks = tokenize(text);
  Polynomial out(alg);
  std::size_t i = 0;
  if (toks.empty()) fail(text, "empty polynomial");
  bool first = true;
  while (i < toks.size()) {
    Rat sign(1);
    if (toks[i].kind == Token::Sign) {
      if (toks[i].text == "-") sign = -1;
      ++i;
    } else if (!first) {
      fail(toks[i].text, "expected '+' or '-' between terms");
    }
    first = false;
    if (i >= toks.size()) fail("+", "dangling sign");

    Scalar coeff(1);
    bool have_coeff = false;
    if (toks[i].kind == Token::Coeff) {
      coeff = parse_paren_scalar(toks[i].text);
      have_coeff = true;
      ++i;
    } else if (toks[i].kind == Token::Atom) {
      Scalar v;
      if (try_unsigned_scalar(toks[i].text, v) && toks[i].text != "1") {
        coeff = v;
        have_coeff = true;
        ++i;
      }
    }

    std::vector<Letter> raw;
    bool have_factor = false;
    while (i < toks.size() && toks[i].kind == Token::Atom) {
      parse_factor(alg, toks[i].text, raw);
      have_factor = true;
      ++i;
    }
    if (i < toks.size() && toks[i].kind == Token::Coeff)
      fail("(" + toks[i].text + ")", "coefficient must precede its monomial");
    if (!have_factor && !have_coeff) fail(toks[i < toks.size() ? i : toks.size() - 1].text, "expected a term");
    out.add_term(alg.reduce(raw), Scalar(sign) * coeff);
  }
  return out;
}

std::string mono_str(const Algebra& alg, const Monomial& m) {
  if (m.is_unit()) return "1";
  std::string s;
  for (Letter l : m.ls) {
    if (!s.empty()) s += ' ';
    if (letter_is_unitary(l)) {
      s += "u" + std::to_string(letter_uvar(l));
      if (letter_usign(l) < 0) s += "^-1";
    } else {
      const BWord& w = alg.word(letter_cid(l));
      if (w.size() == 1) {
        s += alg.generator(w[0]).name;
      } else {
        s += "b[";
        for (std::size_t k = 0; k < w.size(); ++k) {
          if (k) s += ' ';
          s += alg.generator(w[k]).name;
        }
        s += ']';
      }
    }
  }
  return s;
}

std::string poly_str(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : p.terms()) {
    bool neg = false;
    std::string cs;
    if (c.is_real()) {
      neg = c.re < 0;
      Rat mag = abs(c.re);
      if (mag != 1 || m.is_unit()) cs = rat_str(mag);
    } else {
      cs = scalar_str(c);
    }
    std::string body = cs;
    if (!m.is_unit()) {
      if (!body.empty()) body += ' ';
      body += mono_str(p.algebra(), m);
    }
    if (s.empty()) s = (neg ? "-" : "") + body;
    else s += (neg ? " - " : " + ") + body;
  }
  return s;
}

std::string tensor_str(const TensorPoly& t) {
  if (t.is_zero()) return "0";
  const Algebra& alg = t.algebra();
  std::string s;
  for (const auto& [k, c] : t.terms()) {
    bool neg = false;
    std::string cs;
    if (c.is_real()) {
      neg = c.re < 0;
      Rat mag = abs(c.re);
      if (mag != 1) cs = rat_str(mag);
    } else {
      cs = scalar_str(c);
    }
    std::string body = cs;
    if (!body.empty()) body += ' ';
    for (std::size_t s = 0; s < k.size(); ++s) {
      if (s) body += " @ ";
      body += mono_str(alg, k[s]);
    }
    if (s.empty()) s = (neg ? "-" : "") + body;
    else s += (neg ? " - " : " + ") + body;
  }
  return s;
}

}  // namespace umx
