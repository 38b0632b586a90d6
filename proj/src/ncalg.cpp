#include "iqv/ncalg.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace iqv {

bool WordLess::operator()(const Word& a, const Word& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

NCPoly NCPoly::monomial(std::string alphabet, Word w, Scalar c) {
  NCPoly p(std::move(alphabet));
  p.add_term(w, c);
  return p;
}

NCPoly NCPoly::letter(std::string alphabet, const GenSym& s) {
  return monomial(std::move(alphabet), Word{s});
}

Scalar NCPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Scalar() : it->second;
}

void NCPoly::add_term(const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

namespace {

void require_same_alphabet(const NCPoly& a, const NCPoly& b, const char* op) {
  if (a.alphabet() != b.alphabet()) {
    throw std::invalid_argument(std::string("ncalg: ") + op +
                                ": alphabet mismatch, '" + a.alphabet() +
                                "' vs '" + b.alphabet() + "'");
  }
}

}  // namespace

NCPoly NCPoly::operator-() const {
  NCPoly r(alphabet_);
  for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
  return r;
}

NCPoly NCPoly::operator+(const NCPoly& o) const {
  NCPoly r = *this;
  r += o;
  return r;
}

NCPoly NCPoly::operator-(const NCPoly& o) const { return *this + (-o); }

NCPoly& NCPoly::operator+=(const NCPoly& o) {
  require_same_alphabet(*this, o, "add");
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

NCPoly NCPoly::operator*(const NCPoly& o) const {
  require_same_alphabet(*this, o, "mul");
  NCPoly r(alphabet_);
  for (const auto& [w1, c1] : terms_) {
    for (const auto& [w2, c2] : o.terms_) {
      Word w = w1;
      w.insert(w.end(), w2.begin(), w2.end());
      r.add_term(w, c1 * c2);
    }
  }
  return r;
}

NCPoly add(const NCPoly& p, const NCPoly& q) { return p + q; }

NCPoly scale(const Scalar& c, const NCPoly& p) {
  NCPoly r(p.alphabet());
  for (const auto& [w, pc] : p.terms()) r.add_term(w, c * pc);
  return r;
}

NCPoly mul(const NCPoly& p, const NCPoly& q) { return p * q; }

NCPoly reverse(const NCPoly& p) {
  NCPoly r(p.alphabet());
  for (const auto& [w, c] : p.terms()) {
    Word rev(w.rbegin(), w.rend());
    r.add_term(rev, c);
  }
  return r;
}

NCPoly substitute(const NCPoly& p, const std::string& target_alphabet,
                  const std::map<GenSym, NCPoly>& images,
                  bool bar_coefficients) {
  NCPoly r(target_alphabet);
  for (const auto& [w, c] : p.terms()) {
    NCPoly acc = NCPoly::one(target_alphabet);
    for (const GenSym& s : w) {
      auto it = images.find(s);
      if (it == images.end()) {
        std::ostringstream os;
        os << "ncalg: substitute: no image for symbol (" << s.kind << ","
           << s.index << "," << s.sign << ")";
        throw std::invalid_argument(os.str());
      }
      require_same_alphabet(r, it->second, "substitute");
      acc = acc * it->second;
    }
    Scalar sc = bar_coefficients ? c.bar() : c;
    r += scale(sc, acc);
  }
  return r;
}

std::optional<Weight> weight(const NCPoly& p, std::size_t rank,
                             const std::function<Weight(const GenSym&)>& wt) {
  std::optional<Weight> result;
  for (const auto& [w, c] : p.terms()) {
    (void)c;
    Weight sum = Weight::zero(rank);
    for (const GenSym& s : w) sum = sum + wt(s);
    if (!result) {
      result = sum;
    } else if (*result != sum) {
      return std::nullopt;
    }
  }
  if (!result) return Weight::zero(rank);
  return result;
}

std::vector<Word> enumerate_words(const std::vector<GenSym>& letters,
                                  const Weight& multiplicity) {
  if (letters.size() != multiplicity.rank()) {
    throw std::invalid_argument(
        "ncalg: enumerate_words: letter list and multiplicity rank differ");
  }
  if (!multiplicity.nonnegative()) return {};
  std::vector<int> idx;
  for (std::size_t t = 0; t < letters.size(); ++t) {
    for (long r = 0; r < multiplicity.v[t]; ++r) idx.push_back(int(t));
  }
  std::vector<Word> out;
  do {
    Word w;
    w.reserve(idx.size());
    for (int t : idx) w.push_back(letters[std::size_t(t)]);
    out.push_back(std::move(w));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

std::string NCPoly::to_text() const {
  std::string s = "{" + alphabet_ + "}";
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) s += '|';
    first = false;
    s += '<';
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (t) s += ' ';
      s += std::to_string(w[t].kind) + '.' + std::to_string(w[t].index) + '.' +
           std::to_string(w[t].sign);
    }
    s += '>';
    s += c.to_text();
  }
  return s;
}

namespace {

int parse_int(const std::string& s, std::size_t& pos, const char* what) {
  std::size_t start = pos;
  if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos == start) {
    throw std::invalid_argument(std::string("ncalg: from_text: expected ") +
                                what + " at offset " + std::to_string(start));
  }
  return std::stoi(s.substr(start, pos - start));
}

void expect_char(const std::string& s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c) {
    throw std::invalid_argument(std::string("ncalg: from_text: expected '") +
                                c + "' at offset " + std::to_string(pos));
  }
  ++pos;
}

}  // namespace

NCPoly NCPoly::from_text(const std::string& s) {
  std::size_t pos = 0;
  expect_char(s, pos, '{');
  std::size_t close = s.find('}', pos);
  if (close == std::string::npos) {
    throw std::invalid_argument("ncalg: from_text: unterminated alphabet tag");
  }
  NCPoly p(s.substr(pos, close - pos));
  pos = close + 1;
  while (pos < s.size()) {
    expect_char(s, pos, '<');
    Word w;
    while (pos < s.size() && s[pos] != '>') {
      if (!w.empty()) expect_char(s, pos, ' ');
      GenSym g;
      g.kind = parse_int(s, pos, "kind");
      expect_char(s, pos, '.');
      g.index = parse_int(s, pos, "index");
      expect_char(s, pos, '.');
      g.sign = parse_int(s, pos, "sign");
      w.push_back(g);
    }
    expect_char(s, pos, '>');
    std::size_t bar = s.find('|', pos);
    std::size_t end = bar == std::string::npos ? s.size() : bar;
    Scalar c = Scalar::from_text(s.substr(pos, end - pos));
    p.add_term(w, c);
    pos = end;
    if (bar != std::string::npos) ++pos;
  }
  return p;
}

}  // namespace iqv
