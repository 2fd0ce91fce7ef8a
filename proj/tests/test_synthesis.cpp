#include <doctest.h>

#include <random>

#include "kmu/analysis.hpp"
#include "oracle.hpp"

using namespace kmu;
using S = ExactScalar;

static FrameModel<S> catalog_model(const std::string& name) {
  for (auto& e : catalog<S>())
    if (e.name == name) return e.model;
  REQUIRE(false);
  return {};
}

static bool same_span(const std::vector<Vec<S>>& a, const std::vector<Vec<S>>& b, int dim) {
  if (a.size() != b.size()) return false;
  Matrix<S> bm = columns_to_matrix(b, dim);
  for (const auto& v : a)
    if (!span_coords(bm, v)) return false;
  return true;
}

TEST_CASE("round trip reproduces (phi, g) bit-exactly on every non-Sasakian catalog model") {
  for (const auto& e : catalog<S>()) {
    if (e.name == "heisenberg") continue;
    Analysis<S> an = analyze(structure_of(e.model), e.model);
    SynthesisParams<S> p = roundtrip_params(an.km);
    ContactStructure<S> out;
    if (p.mode == SynthMode::ab)
      out = synthesize_ab(e.model, *an.f_plus, *an.f_minus, p.a, p.b);
    else
      out = synthesize_c(e.model, *an.f_plus, *an.f_minus, p.c);
    CHECK(out.phi == e.model.phi);
    CHECK(out.metric == e.model.metric);
    CHECK(vec_equal(out.eta, e.model.eta));
  }
}

TEST_CASE("round trip parameter values") {
  auto values = [](const std::string& name) {
    auto m = catalog_model(name);
    return roundtrip_params(analyze(structure_of(m), m).km);
  };
  {
    auto p = values("class-I");  // lambda=3/2, mu=-3
    CHECK(p.mode == SynthMode::ab);
    CHECK(p.a == S(8));
    CHECK(p.b == S(2));
  }
  {
    auto p = values("class-IV");  // (kappa,mu) = (0,0)
    CHECK(p.mode == SynthMode::c);
    CHECK(p.c == S(4));
  }
  {
    auto p = values("class-V");  // (kappa,mu) = (0,4)
    CHECK(p.mode == SynthMode::c);
    CHECK(p.c == S(-4));
  }
  auto m = catalog_model("heisenberg");
  CHECK_THROWS_WITH_AS(roundtrip_params(analyze(structure_of(m), m).km),
                       doctest::Contains("SasakianInput"), Error);
}

TEST_CASE("a = b gives a Sasakian structure (all three criteria, same eta)") {
  auto m = catalog_model("class-I");
  Analysis<S> an = analyze(structure_of(m), m);
  ContactStructure<S> out = synthesize_ab(m, *an.f_plus, *an.f_minus, S(4), S(4));
  SasakianEvidence<S> ev = is_sasakian(out, m);
  CHECK(ev.value);
  CHECK(ev.nijenhuis_vanishes);
  CHECK(ev.covariant_identity);
  CHECK(ev.curvature_identity);
  CHECK(vec_equal(out.eta, m.eta));
  CHECK(fit_kappa_mu(out, m).kappa == S(1));
}

TEST_CASE("synthesized invariants follow the parameter law") {
  auto m = catalog_model("class-I");
  Analysis<S> an = analyze(structure_of(m), m);
  // ab = 16 throughout; five admissible pairs with a != b
  std::vector<std::pair<S, S>> pairs = {{S(8), S(2)},
                                        {S(2), S(8)},
                                        {S(16), S(1)},
                                        {S(1), S(16)},
                                        {S(32), S::from_rational(1, 2)}};
  for (auto& [a, b] : pairs) {
    ContactStructure<S> out = synthesize_ab(m, *an.f_plus, *an.f_minus, a, b);
    KappaMuReport<S> km = fit_kappa_mu(out, m);
    S d = a - b;
    CHECK(km.kappa == S(1) - d * d / S(16));
    CHECK(*km.mu == S(2) - (a + b) / S(2));
    S abs_d = d.sign() > 0 ? d : -d;
    CHECK(*km.boeckx == (a + b) / abs_d);
    CHECK(km.label == ClassLabel::I);
    // the eigen-foliations of the output are (F1, F2): D(lambda') is F1 when
    // a > b and F2 when a < b
    if ((a - b).sign() > 0) {
      CHECK(same_span(km.d_plus_basis, an.km.d_plus_basis, 3));
      CHECK(same_span(km.d_minus_basis, an.km.d_minus_basis, 3));
    } else {
      CHECK(same_span(km.d_plus_basis, an.km.d_minus_basis, 3));
      CHECK(same_span(km.d_minus_basis, an.km.d_plus_basis, 3));
    }
  }
}

TEST_CASE("internal h and phi laws on a synthesized structure") {
  auto m = catalog_model("class-I");
  Analysis<S> an = analyze(structure_of(m), m);
  S a(16), b(1);
  ContactStructure<S> out = synthesize_ab(m, *an.f_plus, *an.f_minus, a, b);
  Matrix<S> h = compute_h(out, m);
  S ev = (a - b) / S(4);
  FrameSplit<S> sp = make_split(m, an.f_plus->bundle, an.f_minus->bundle);
  for (const Vec<S>& x : an.f_plus->bundle.basis) {
    CHECK(vec_equal(mat_vec(h, x), vscale(ev, x)));
    // phi X = (2/a) [xi, X]_{TF2}
    Vec<S> want = vscale(S(2) / a, sp.proj2(bracket(m, m.xi, x)));
    CHECK(vec_equal(mat_vec(out.phi, x), want));
  }
  for (const Vec<S>& y : an.f_minus->bundle.basis)
    CHECK(vec_equal(mat_vec(h, y), vscale(-ev, y)));
}

TEST_CASE("synthesize_c on the half-flat classes") {
  {
    auto m = catalog_model("class-IV");
    Analysis<S> an = analyze(structure_of(m), m);
    ContactStructure<S> out = synthesize_c(m, *an.f_plus, *an.f_minus, S(2));
    KappaMuReport<S> km = fit_kappa_mu(out, m);
    CHECK(km.kappa == S::from_rational(3, 4));
    CHECK(*km.mu == S(1));
    CHECK(*km.boeckx == S(1));
    CHECK(km.label == ClassLabel::IV);
    // c = 4 reproduces R_{XY} xi = 0
    ContactStructure<S> flat = synthesize_c(m, *an.f_plus, *an.f_minus, S(4));
    FrameModel<S> eff = with_structure(m, flat);
    CurvatureTensor<S> R = curvature(levi_civita(eff), eff);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(vec_is_zero(R.apply(basis_vec<S>(3, i), basis_vec<S>(3, j), m.xi)));
  }
  {
    auto m = catalog_model("class-V");
    Analysis<S> an = analyze(structure_of(m), m);
    ContactStructure<S> out = synthesize_c(m, *an.f_plus, *an.f_minus, S(-2));
    KappaMuReport<S> km = fit_kappa_mu(out, m);
    CHECK(km.kappa == S::from_rational(3, 4));
    CHECK(*km.mu == S(3));  // mu = 2 - c/2
    CHECK(*km.boeckx == S(-1));
    CHECK(km.label == ClassLabel::V);
  }
}

TEST_CASE("synthesize_c range and class preconditions") {
  auto m4 = catalog_model("class-IV");
  Analysis<S> an4 = analyze(structure_of(m4), m4);
  CHECK_THROWS_WITH_AS(synthesize_c(m4, *an4.f_plus, *an4.f_minus, S(0)),
                       doctest::Contains("ParameterOutOfRange"), Error);
  CHECK_THROWS_WITH_AS(synthesize_c(m4, *an4.f_plus, *an4.f_minus, S(5)),
                       doctest::Contains("ParameterOutOfRange"), Error);
  CHECK_THROWS_WITH_AS(synthesize_c(m4, *an4.f_plus, *an4.f_minus, S(-1)),
                       doctest::Contains("ParameterOutOfRange"), Error);

  auto m1 = catalog_model("class-I");
  Analysis<S> an1 = analyze(structure_of(m1), m1);
  CHECK_THROWS_WITH_AS(synthesize_c(m1, *an1.f_plus, *an1.f_minus, S(2)),
                       doctest::Contains("|I_M| = 1"), Error);
}

TEST_CASE("sign case checks") {
  auto m = catalog_model("class-I");
  Analysis<S> an = analyze(structure_of(m), m);
  CHECK_THROWS_WITH_AS(synthesize_ab(m, *an.f_plus, *an.f_minus, S(-8), S(-2)),
                       doctest::Contains("SignCaseMismatch"), Error);
  CHECK_THROWS_WITH_AS(synthesize_ab(m, *an.f_plus, *an.f_minus, S(0), S(2)),
                       doctest::Contains("SignCaseMismatch"), Error);
  CHECK_THROWS_WITH_AS(synthesize_ab(m, *an.f_plus, *an.f_minus, S(-8), S(2)),
                       doctest::Contains("SignCaseMismatch"), Error);
  // right signs, wrong product: the proportionality hypothesis fails
  CHECK_THROWS_WITH_AS(synthesize_ab(m, *an.f_plus, *an.f_minus, S(2), S(2)),
                       doctest::Contains("proportionality"), Error);
}

TEST_CASE("admissible parameters per class") {
  auto params = [](const std::string& name) {
    auto m = catalog_model(name);
    return admissible_params(analyze(structure_of(m), m).km);
  };
  {
    auto p = params("class-I");  // kappa=-5/4, mu=-3
    CHECK(p.mode == SynthMode::ab);
    CHECK(*p.ab_product == S(16));
    CHECK(p.sign_a == 1);
    CHECK(p.sign_b == 1);
  }
  {
    auto p = params("class-II");  // kappa=-21/4, mu=5
    CHECK(*p.ab_product == S(-16));
    CHECK(p.sign_a == 1);
    CHECK(p.sign_b == -1);
  }
  {
    auto p = params("class-III");
    CHECK(p.sign_a == -1);
    CHECK(p.sign_b == -1);
  }
  {
    auto p = params("class-IV");
    CHECK(p.mode == SynthMode::c);
    CHECK(p.describe() == "c in (0, 4]");
  }
  {
    auto p = params("class-V");
    CHECK(p.describe() == "c in [-4, 0)");
  }
  auto m = catalog_model("heisenberg");
  CHECK_THROWS_WITH_AS(admissible_params(analyze(structure_of(m), m).km),
                       doctest::Contains("SasakianInput"), Error);
}

TEST_CASE("sasakianize") {
  {
    auto m = catalog_model("class-I");
    Analysis<S> an = analyze(structure_of(m), m);
    ContactStructure<S> out = sasakianize(m, an.km);  // a = b = 4
    CHECK(is_sasakian(out, m).value);
    CHECK(vec_equal(out.eta, m.eta));
  }
  {
    auto m = catalog_model("class-III");  // negative root: a = b = -4
    Analysis<S> an = analyze(structure_of(m), m);
    ContactStructure<S> out = sasakianize(m, an.km);
    CHECK(is_sasakian(out, m).value);
  }
  {
    auto m = catalog_model("class-II");  // |I_M| < 1
    Analysis<S> an = analyze(structure_of(m), m);
    CHECK_THROWS_WITH_AS(sasakianize(m, an.km), doctest::Contains("InvariantTooSmall"), Error);
  }
}

TEST_CASE("sasakianize with an irrational parameter stays exact") {
  // milnor(2,1): kappa=3/4, mu=-1, I_M=3; a = b = 2 sqrt(2)
  auto m = milnor_model<S>(S(2), S(1));
  Analysis<S> an = analyze(structure_of(m), m);
  CHECK(*an.km.boeckx == S(3));
  ContactStructure<S> out = sasakianize(m, an.km);
  CHECK(is_sasakian(out, m).value);
  bool has_radical = false;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!out.metric.at(i, j).is_rational()) has_radical = true;
  CHECK(has_radical);  // the computation genuinely lives in Q(sqrt(2))
}

TEST_CASE("synthesis parameters must stay inside the quadratic extension") {
  // lambda = sqrt(10) but a = b = sqrt(24) = 2 sqrt(6): a second radical
  auto m = kmu_test::twisted_model<S>(1, 7, 1);
  validate_model(m);
  Analysis<S> an = analyze(structure_of(m), m);
  CHECK(an.km.label == ClassLabel::I);
  CHECK(an.km.lambda * an.km.lambda == S(10));
  CHECK_THROWS_WITH_AS(sasakianize(m, an.km), doctest::Contains("NestedRadical"), Error);
}

TEST_CASE("irrational parameters in the same extension synthesize exactly") {
  // lambda = sqrt(2) and a = b = 2 sqrt(2): one shared discriminant
  auto m = kmu_test::twisted_model<S>(1, 3, 1);
  Analysis<S> an = analyze(structure_of(m), m);
  CHECK(an.km.label == ClassLabel::I);
  ContactStructure<S> out = sasakianize(m, an.km);
  CHECK(is_sasakian(out, m).value);
  CHECK(fit_kappa_mu(out, m).kappa == S(1));
}

TEST_CASE("round trip and tw on a model living in Q(sqrt(5))") {
  // twisted(1,1,0): kappa=-1/4, mu=1, lambda=sqrt(5)/2, class II
  auto m = kmu_test::twisted_model<S>(1, 1, 0);
  Analysis<S> an = analyze(structure_of(m), m);
  CHECK(an.km.label == ClassLabel::II);
  CHECK(!an.km.lambda.is_rational());

  SynthesisParams<S> p = roundtrip_params(an.km);  // a = 1+sqrt(5), b = 1-sqrt(5)
  CHECK(!p.a.is_rational());
  ContactStructure<S> out = synthesize_ab(m, *an.f_plus, *an.f_minus, p.a, p.b);
  CHECK(out.phi == m.phi);
  CHECK(out.metric == m.metric);

  // tw radicand 4(1-kappa)-(2-mu)^2 = 4 is a perfect square: a=2, b=-2
  ContactStructure<S> tw = tw_parallelize(m, an.km);
  KappaMuReport<S> km = fit_kappa_mu(tw, m);
  CHECK(km.kappa == S(0));
  CHECK(*km.mu == S(2));
  CHECK(*km.boeckx == S(0));
}

TEST_CASE("tw_parallelize") {
  {
    auto m = catalog_model("class-II");
    Analysis<S> an = analyze(structure_of(m), m);
    ContactStructure<S> out = tw_parallelize(m, an.km);  // a=4, b=-4
    KappaMuReport<S> km = fit_kappa_mu(out, m);
    CHECK(km.kappa == S(-3));
    CHECK(*km.mu == S(2));
    CHECK(*km.boeckx == S(0));
  }
  {
    auto m = catalog_model("class-I");
    Analysis<S> an = analyze(structure_of(m), m);
    CHECK_THROWS_WITH_AS(tw_parallelize(m, an.km), doctest::Contains("InvariantTooLarge"), Error);
  }
}

TEST_CASE("class preservation across random admissible parameters") {
  std::mt19937_64 rng(321);
  const char* names[] = {"class-I", "class-II", "class-III"};
  for (const char* name : names) {
    auto m = catalog_model(name);
    Analysis<S> an = analyze(structure_of(m), m);
    S ab = *admissible_params(an.km).ab_product;
    int sa = admissible_params(an.km).sign_a;
    for (int iter = 0; iter < 5; ++iter) {
      std::uniform_int_distribution<int> num(1, 12);
      S a = S(num(rng)) * S(sa);
      S b = ab / a;
      if (a == b) continue;
      ContactStructure<S> out = synthesize_ab(m, *an.f_plus, *an.f_minus, a, b);
      Analysis<S> fitted = analyze(out, m);
      CHECK(fitted.km.label == an.km.label);
    }
  }
}
