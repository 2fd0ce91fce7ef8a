// Test-only independent oracles. These deliberately avoid the library's
// Gram-solve / connection machinery: the Koszul coefficients are read off
// componentwise (valid for orthonormal frames) and the curvature expansion is
// written out directly, so engine results are checked against a second route.
#pragma once

#include <random>

#include "kmu/contact.hpp"

namespace kmu_test {

using kmu::FrameModel;
using kmu::Matrix;
using kmu::Vec;

// Gamma[i][j][k] = (1/2)(<[ei,ej],ek> - <[ej,ek],ei> + <[ek,ei],ej>), g = I.
template <typename S>
std::vector<S> koszul_oracle(const FrameModel<S>& m) {
  int d = m.dim;
  std::vector<S> gamma(static_cast<size_t>(d) * d * d, S(0));
  S half = S(1) / S(2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        gamma[(i * d + j) * d + k] =
            half * (m.c(i, j, k) - m.c(j, k, i) + m.c(k, i, j));
  return gamma;
}

// R_{ei ej} ek from a raw Gamma table, expanded term by term.
template <typename S>
Vec<S> curvature_oracle(const FrameModel<S>& m, const std::vector<S>& gamma, int i, int j, int k) {
  int d = m.dim;
  auto g = [&](int a, int b, int c) -> const S& { return gamma[(a * d + b) * d + c]; };
  Vec<S> out(d, S(0));
  for (int l = 0; l < d; ++l) {
    for (int p = 0; p < d; ++p) {
      out[p] += g(j, k, l) * g(i, l, p);  // nabla_i nabla_j ek
      out[p] -= g(i, k, l) * g(j, l, p);  // nabla_j nabla_i ek
      out[p] -= m.c(i, j, l) * g(l, k, p);  // nabla_{[ei,ej]} ek
    }
  }
  return out;
}

inline kmu::Rational random_rational(std::mt19937_64& rng, int max_abs_num = 6, int max_den = 3) {
  std::uniform_int_distribution<int> num(-max_abs_num, max_abs_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return kmu::make_rational(num(rng), den(rng));
}

// Valid contact metric model that satisfies every axiom and h-identity but is
// *not* a nullity space: brackets [e1,e2]=e3, [e2,e3]=2e1+e3, [e3,e1]=0
// (non-unimodular), standard phi, g = I. The eigen-fit is even consistent
// (kappa=3/4, mu=1) but R_{e2 e3} xi = e2 != 0 breaks the full residual.
template <typename S>
FrameModel<S> non_nullity_model() {
  FrameModel<S> m = kmu::milnor_model<S>(S(0), S(1));  // [e1,e2]=e3, [e2,e3]=2e1
  m.c(1, 2, 2) = S(1);  // [e2,e3] = 2 e1 + e3
  m.c(2, 1, 2) = S(-1);
  return m;
}

// Nullity models with irrational lambda: [e2,e3]=2e1,
// [e1,e2] = alpha e2 + beta e3, [e3,e1] = gamma e2 + alpha e3 (Jacobi holds
// for every such triple). lambda^2 = ((beta-gamma)^2 + 4 alpha^2)/4.
template <typename S>
FrameModel<S> twisted_model(long alpha, long beta, long gamma) {
  FrameModel<S> m = kmu::milnor_model<S>(S(0), S(0));
  m.structure_constants.assign(27, S(0));
  auto set_bracket = [&](int i, int j, Vec<S> v) {
    for (int k = 0; k < 3; ++k) {
      m.c(i, j, k) = v[k];
      m.c(j, i, k) = -v[k];
    }
  };
  set_bracket(1, 2, {S(2), S(0), S(0)});
  set_bracket(0, 1, {S(0), S(alpha), S(beta)});
  set_bracket(2, 0, {S(0), S(gamma), S(alpha)});
  return m;
}

}  // namespace kmu_test
