#ifndef HJET_TESTS_FIXTURES_HPP_
#define HJET_TESTS_FIXTURES_HPP_

#include <random>
#include <string>
#include <vector>

#include "hjet/geometry.hpp"
#include "hjet/poly_parse.hpp"

namespace fixtures {

using hjet::Distribution;
using hjet::MultiPoly;
using hjet::OneForm;
using hjet::QVector;
using hjet::Rational;
using hjet::VectorField;

inline Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

inline std::vector<MultiPoly> polys(const std::vector<std::string>& text, size_t dim) {
  std::vector<MultiPoly> out;
  const auto names = hjet::indexed_names("y", static_cast<uint32_t>(dim));
  for (const auto& t : text) out.push_back(hjet::parse_poly(t, names));
  return out;
}

inline OneForm form(const std::vector<std::string>& text) { return OneForm(polys(text, text.size())); }
inline VectorField field(const std::vector<std::string>& text) { return VectorField(polys(text, text.size())); }

inline QVector zeros(size_t n) { return QVector(n, Rational(0)); }

// dz - y dx on R^3 with coordinates (x, y, z).
inline Distribution contact() { return Distribution::from_coframe({form({"-y2", "0", "1"})}, zeros(3), 3); }

// dz - y dx, dy - w dx on R^4 with coordinates (x, y, z, w), generated by
// d_w and d_x + w d_y + y d_z.
inline Distribution engel() {
  return Distribution::with_generators({form({"-y2", "0", "1", "0"}), form({"-y4", "1", "0", "0"})},
                                       {field({"0", "0", "0", "1"}), field({"1", "y4", "y2", "0"})}, zeros(4), 4);
}

// span{d_x, d_y} = ker dz on R^3.
inline Distribution flat() { return Distribution::from_coframe({form({"0", "0", "1"})}, zeros(3), 3); }

// Rank 10 on R^14 (coordinates x1..x10, z1, z2, w1, w2), of type
// (0, 10, 12, 14) at the origin: dz1 - x1 dx2, dz2 - x3 dx4, dw1 - z1 dx5,
// dw2 - z2 dx6.
inline Distribution toy() {
  auto row = [](std::initializer_list<std::pair<size_t, std::string>> entries) {
    std::vector<std::string> c(14, "0");
    for (const auto& [i, s] : entries) c[i] = s;
    return form(c);
  };
  return Distribution::from_coframe({row({{10, "1"}, {1, "-y1"}}), row({{11, "1"}, {3, "-y3"}}),
                                     row({{12, "1"}, {4, "-y11"}}), row({{13, "1"}, {5, "-y12"}})},
                                    zeros(14), 14);
}

inline MultiPoly random_poly(std::mt19937_64& rng, uint32_t nvars, uint32_t max_deg, int terms, int range = 3) {
  std::uniform_int_distribution<int> coef(-range, range);
  std::uniform_int_distribution<uint32_t> var(0, nvars - 1);
  std::uniform_int_distribution<uint32_t> deg(0, max_deg);
  MultiPoly p = MultiPoly::zero(nvars);
  for (int t = 0; t < terms; ++t) {
    MultiPoly m(Rational(coef(rng)), nvars);
    const uint32_t d = deg(rng);
    for (uint32_t i = 0; i < d; ++i) m = m * MultiPoly::variable(nvars, var(rng));
    p += m;
  }
  return p;
}

// Corank-p coframe dy^{n+s} + sum_{mu < n} f_{s,mu} dy^mu with random
// polynomial f of degree <= max_deg; full rank everywhere.
inline Distribution random_distribution(std::mt19937_64& rng, size_t dim, size_t p, uint32_t max_deg = 2) {
  const size_t n = dim - p;
  const auto nv = static_cast<uint32_t>(dim);
  std::vector<OneForm> coframe;
  for (size_t s = 0; s < p; ++s) {
    std::vector<MultiPoly> c(dim, MultiPoly::zero(nv));
    c[n + s] = MultiPoly(Rational(1), nv);
    for (size_t mu = 0; mu < n; ++mu) c[mu] = random_poly(rng, nv, max_deg, 2);
    coframe.emplace_back(std::move(c));
  }
  std::uniform_int_distribution<int> pt(-2, 2);
  QVector base;
  for (size_t i = 0; i < dim; ++i) base.push_back(Rational(pt(rng)));
  return Distribution::from_coframe(std::move(coframe), std::move(base), dim);
}

}  // namespace fixtures

#endif  // HJET_TESTS_FIXTURES_HPP_
