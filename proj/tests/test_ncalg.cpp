#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "iqv/ncalg.hpp"

using namespace iqv;

namespace {

const std::string kTag = "free";

GenSym sym(int kind, int index, int sign = +1) { return GenSym{kind, index, sign}; }

NCPoly let(int kind, int index, int sign = +1) {
  return NCPoly::letter(kTag, sym(kind, index, sign));
}

Scalar random_scalar(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> exp(-3, 3);
  std::uniform_int_distribution<long> co(-4, 4);
  std::uniform_int_distribution<int> nterms(1, 3);
  LaurentPoly p;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) p.set_coeff(exp(rng), Rational(co(rng)));
  if (p.is_zero()) p = LaurentPoly::constant(1);
  Scalar s = Scalar::from_poly(p);
  if (rng() % 4 == 0) s = s * (Scalar::q_power(1) - Scalar::q_power(-1)).inverse();
  return s;
}

NCPoly random_poly(std::mt19937_64& rng, int max_terms = 3, int max_len = 4) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> kind(0, 1);
  std::uniform_int_distribution<int> index(0, 2);
  NCPoly p(kTag);
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    Word w;
    int l = len(rng);
    for (int u = 0; u < l; ++u) {
      int s = rng() % 3 == 0 ? -1 : +1;
      w.push_back(sym(kind(rng), index(rng), s));
    }
    p.add_term(w, random_scalar(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("free algebra operations") {
  NCPoly x = let(0, 0);
  NCPoly y = let(0, 1);

  SUBCASE("distinct letters do not commute") {
    CHECK(mul(x, y) != mul(y, x));
    CHECK(mul(x, y).term_count() == 1);
  }

  SUBCASE("scaling by zero annihilates") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
      CHECK(scale(Scalar(0), random_poly(rng)).is_zero());
    }
  }

  SUBCASE("unit and zero") {
    NCPoly one = NCPoly::one(kTag);
    NCPoly zero(kTag);
    CHECK(mul(one, x) == x);
    CHECK(mul(x, one) == x);
    CHECK(add(x, zero) == x);
    CHECK(mul(zero, x).is_zero());
  }

  SUBCASE("ring axioms on random triples") {
    std::mt19937_64 rng(0xa1b2);
    for (int t = 0; t < 25; ++t) {
      NCPoly p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
      CHECK(add(p, q) == add(q, p));
      CHECK(mul(add(p, q), r) == add(mul(p, r), mul(q, r)));
      CHECK(mul(r, add(p, q)) == add(mul(r, p), mul(r, q)));
      CHECK(mul(mul(p, q), r) == mul(p, mul(q, r)));
      Scalar c = random_scalar(rng);
      CHECK(scale(c, mul(p, q)) == mul(scale(c, p), q));
      CHECK(p - p == NCPoly(kTag));
    }
  }

  SUBCASE("alphabet mismatch rejected") {
    NCPoly other = NCPoly::letter("other", sym(0, 0));
    CHECK_THROWS_AS(add(x, other), std::invalid_argument);
    CHECK_THROWS_AS(mul(x, other), std::invalid_argument);
    CHECK_THROWS_WITH_AS(mul(x, other),
                         doctest::Contains("alphabet mismatch"),
                         std::invalid_argument);
  }

  SUBCASE("no zero coefficients stored") {
    NCPoly p = x + y - x;
    CHECK(p.term_count() == 1);
    CHECK(p == y);
    CHECK(p.coeff(Word{sym(0, 0)}).is_zero());
  }
}

TEST_CASE("word ordering is degree then lexicographic") {
  WordLess less;
  Word empty;
  Word a{sym(0, 0)};
  Word b{sym(0, 1)};
  Word aa{sym(0, 0), sym(0, 0)};
  Word kinds{sym(1, 0)};
  Word signs_lo{sym(0, 0, -1)};
  CHECK(less(empty, a));
  CHECK(less(a, b));
  CHECK(less(b, aa));       // shorter word first regardless of letters
  CHECK(less(a, kinds));    // kind dominates index
  CHECK(less(signs_lo, a)); // sign -1 sorts before +1
  CHECK_FALSE(less(a, a));

  NCPoly p(kTag);
  p.add_term(aa, Scalar(1));
  p.add_term(a, Scalar(1));
  p.add_term(empty, Scalar(1));
  std::vector<std::size_t> lens;
  for (const auto& [w, c] : p.terms()) lens.push_back(w.size());
  CHECK(lens == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("reversal") {
  NCPoly x = let(0, 0), y = let(0, 1), z = let(0, 2);

  SUBCASE("single word reverses") {
    NCPoly xyz = mul(mul(x, y), z);
    NCPoly zyx = mul(mul(z, y), x);
    CHECK(reverse(xyz) == zyx);
  }

  SUBCASE("involution and anti-homomorphism") {
    std::mt19937_64 rng(0xc3d4);
    for (int t = 0; t < 25; ++t) {
      NCPoly p = random_poly(rng), q = random_poly(rng);
      CHECK(reverse(reverse(p)) == p);
      CHECK(reverse(mul(p, q)) == mul(reverse(q), reverse(p)));
      CHECK(reverse(add(p, q)) == add(reverse(p), reverse(q)));
    }
  }
}

TEST_CASE("substitution") {
  NCPoly x = let(0, 0), y = let(0, 1);

  SUBCASE("identity map reproduces the polynomial") {
    std::map<GenSym, NCPoly> id;
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 3; ++i)
        for (int s : {-1, +1}) id.emplace(sym(k, i, s), let(k, i, s));
    std::mt19937_64 rng(0xe5f6);
    for (int t = 0; t < 15; ++t) {
      NCPoly p = random_poly(rng);
      CHECK(substitute(p, kTag, id) == p);
    }
  }

  SUBCASE("zero polynomial maps to zero") {
    std::map<GenSym, NCPoly> none;
    NCPoly r = substitute(NCPoly(kTag), "other", none);
    CHECK(r.is_zero());
    CHECK(r.alphabet() == "other");
  }

  SUBCASE("missing image is an error") {
    std::map<GenSym, NCPoly> only_x{{sym(0, 0), let(0, 1)}};
    CHECK_THROWS_WITH_AS(substitute(y, kTag, only_x),
                         doctest::Contains("no image"), std::invalid_argument);
  }

  SUBCASE("multiplicative on random pairs") {
    std::map<GenSym, NCPoly> images;
    std::mt19937_64 rng(0x1234);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 3; ++i)
        for (int s : {-1, +1})
          images.emplace(sym(k, i, s), random_poly(rng, 2, 2));
    for (int t = 0; t < 10; ++t) {
      NCPoly p = random_poly(rng), q = random_poly(rng);
      CHECK(substitute(mul(p, q), kTag, images) ==
            mul(substitute(p, kTag, images), substitute(q, kTag, images)));
      CHECK(substitute(add(p, q), kTag, images) ==
            add(substitute(p, kTag, images), substitute(q, kTag, images)));
    }
  }

  SUBCASE("coefficient twist bar-conjugates scalars") {
    std::map<GenSym, NCPoly> id{{sym(0, 0), x}};
    Scalar q = Scalar::q_power(1);
    NCPoly p = scale(q, x);
    NCPoly twisted = substitute(p, kTag, id, /*bar_coefficients=*/true);
    CHECK(twisted == scale(Scalar::q_power(-1), x));
    // Semilinearity: applying the twist twice restores the original.
    CHECK(substitute(twisted, kTag, id, true) == p);
  }
}

TEST_CASE("weight grading") {
  // Letters (0,i) carry weight +alpha_i, letters (1,i) carry -alpha_i.
  auto wt = [](const GenSym& s) {
    Weight w = Weight::zero(3);
    w.v[std::size_t(s.index)] = s.kind == 0 ? 1 : -1;
    return w;
  };

  SUBCASE("homogeneous product") {
    NCPoly p = mul(let(0, 0), let(0, 1));
    auto w = weight(p, 3, wt);
    REQUIRE(w.has_value());
    CHECK(w->to_text() == "(1,1,0)");
  }

  SUBCASE("mixed directions are inhomogeneous") {
    NCPoly p = add(let(0, 0), let(1, 0));
    CHECK_FALSE(weight(p, 3, wt).has_value());
  }

  SUBCASE("empty word and zero polynomial have weight zero") {
    CHECK(weight(NCPoly::one(kTag), 3, wt) == Weight::zero(3));
    CHECK(weight(NCPoly(kTag), 3, wt) == Weight::zero(3));
  }
}

TEST_CASE("word enumeration by multiplicity") {
  std::vector<GenSym> letters{sym(0, 0), sym(0, 1)};

  SUBCASE("two letters once each") {
    auto words = enumerate_words(letters, Weight({1, 1}));
    REQUIRE(words.size() == 2);
    CHECK(words[0] == Word{sym(0, 0), sym(0, 1)});
    CHECK(words[1] == Word{sym(0, 1), sym(0, 0)});
  }

  SUBCASE("multinomial count") {
    CHECK(enumerate_words(letters, Weight({2, 1})).size() == 3);
    CHECK(enumerate_words(letters, Weight({2, 2})).size() == 6);
    std::vector<GenSym> three{sym(0, 0), sym(0, 1), sym(0, 2)};
    CHECK(enumerate_words(three, Weight({1, 1, 1})).size() == 6);
  }

  SUBCASE("zero weight gives the empty word") {
    auto words = enumerate_words(letters, Weight({0, 0}));
    REQUIRE(words.size() == 1);
    CHECK(words[0].empty());
  }

  SUBCASE("negative coordinate gives nothing") {
    CHECK(enumerate_words(letters, Weight({-1, 2})).empty());
  }

  SUBCASE("rank mismatch rejected") {
    CHECK_THROWS_AS(enumerate_words(letters, Weight({1, 1, 1})),
                    std::invalid_argument);
  }

  SUBCASE("output is sorted ascending in the letter order") {
    auto words = enumerate_words(letters, Weight({2, 1}));
    CHECK(words[0] == Word{sym(0, 0), sym(0, 0), sym(0, 1)});
    CHECK(words[1] == Word{sym(0, 0), sym(0, 1), sym(0, 0)});
    CHECK(words[2] == Word{sym(0, 1), sym(0, 0), sym(0, 0)});
  }
}

TEST_CASE("serialization round-trips bit-exactly") {
  std::mt19937_64 rng(0x5e71a);
  for (int t = 0; t < 30; ++t) {
    NCPoly p = random_poly(rng);
    std::string s = p.to_text();
    NCPoly back = NCPoly::from_text(s);
    CHECK(back == p);
    CHECK(back.to_text() == s);
  }
  CHECK(NCPoly(kTag).to_text() == "{free}");
  CHECK(NCPoly::from_text("{free}") == NCPoly(kTag));
  CHECK(NCPoly::one(kTag).to_text() == "{free}<>num:[(0,1)];den:[(0,1)]");

  CHECK_THROWS_AS(NCPoly::from_text("no-brace"), std::invalid_argument);
  CHECK_THROWS_AS(NCPoly::from_text("{free}<0.0>x"), std::invalid_argument);
  CHECK_THROWS_AS(NCPoly::from_text("{free"), std::invalid_argument);
}
