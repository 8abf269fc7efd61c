#include "hjet/invop.hpp"

#include <algorithm>

#include "hjet/linalg.hpp"

namespace hjet {

namespace {

UniPoly compose(const MultiPoly& f, const PolyCurve& u) {
  if (f.is_zero()) return UniPoly();
  MultiPoly g = f;
  g.extend_nvars(static_cast<uint32_t>(u.dim()));
  return g.evaluate_in<UniPoly>(std::span<const UniPoly>(u.components()), UniPoly(Rational(1)));
}

RMatrix to_rat(const Matrix<UniPoly>& m) {
  return map_entries<RatFunc>(m, [](const UniPoly& p) { return RatFunc(p); });
}

Matrix<UniPoly> derivative(const Matrix<UniPoly>& m) {
  return map_entries<UniPoly>(m, [](const UniPoly& p) { return p.derivative(); });
}

Matrix<UniPoly> lambda_along(const Distribution& d, const PolyCurve& u) {
  const auto& cf = d.coframe();
  Matrix<UniPoly> l(cf.size(), u.dim());
  for (size_t s = 0; s < cf.size(); ++s)
    for (size_t mu = 0; mu < u.dim(); ++mu) l(s, mu) = compose(cf[s][mu], u);
  return l;
}

// (s, mu) -> sum_nu (d_mu lambda^s_nu o u) d_t u^nu
Matrix<UniPoly> l0_along(const Distribution& d, const PolyCurve& u) {
  const auto& cf = d.coframe();
  const PolyCurve udot = u.derivative();
  Matrix<UniPoly> l(cf.size(), u.dim());
  for (size_t s = 0; s < cf.size(); ++s)
    for (size_t mu = 0; mu < u.dim(); ++mu)
      for (size_t nu = 0; nu < u.dim(); ++nu) {
        const MultiPoly c = cf[s][nu].derivative(static_cast<uint32_t>(mu));
        if (!c.is_zero()) l(s, mu) += compose(c, u) * udot[nu];
      }
  return l;
}

Matrix<UniPoly> r_along(const Distribution& d, const PolyCurve& u) {
  const auto& cf = d.coframe();
  const PolyCurve udot = u.derivative();
  Matrix<UniPoly> r(cf.size(), u.dim());
  for (size_t s = 0; s < cf.size(); ++s)
    for (size_t mu = 0; mu < u.dim(); ++mu)
      for (size_t nu = 0; nu < u.dim(); ++nu) {
        if (nu == mu) continue;
        const MultiPoly c = cf[s].d_coefficient(nu, mu);
        if (!c.is_zero()) r(s, mu) += compose(c, u) * udot[nu];
      }
  return r;
}

// Lower bound for the distance from t0 to the nearest complex root of p,
// assuming p(t0) != 0.
Rational root_free_radius(const UniPoly& p, const Rational& t0) {
  const UniPoly s = p.shifted(t0);
  const Rational a0 = abs(s[0]);
  Rational top = 0;
  for (size_t k = 1; k < s.coefficients().size(); ++k) top = std::max(top, Rational(abs(s[k])));
  if (top == 0) return Rational(-1);
  Rational r = a0 / (a0 + top);
  r.canonicalize();
  return r;
}

}  // namespace

DiffOp::DiffOp(size_t target_dim, size_t source_dim, size_t order)
    : source(source_dim), target(target_dim), coeffs(order + 1, RMatrix(target_dim, source_dim)) {}

DiffOp DiffOp::identity(size_t n) {
  DiffOp op(n, n, 0);
  op.coeffs[0] = RMatrix::identity(n);
  return op;
}

DiffOp DiffOp::multiplication(const RMatrix& m) {
  DiffOp op(m.rows(), m.cols(), 0);
  op.coeffs[0] = m;
  return op;
}

size_t DiffOp::effective_order() const {
  for (size_t i = coeffs.size(); i-- > 1;)
    if (!coeffs[i].is_zero()) return i;
  return 0;
}

bool DiffOp::is_identity() const {
  if (source != target || coeffs.empty()) return false;
  if (coeffs[0] != RMatrix::identity(source)) return false;
  for (size_t i = 1; i < coeffs.size(); ++i)
    if (!coeffs[i].is_zero()) return false;
  return true;
}

RVector DiffOp::apply(const RVector& f) const {
  if (f.size() != source) throw InvopError("operand dimension mismatch");
  RVector out(target);
  RVector df = f;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    for (size_t b = 0; b < target; ++b)
      for (size_t a = 0; a < source; ++a)
        if (!coeffs[i](b, a).is_zero() && !df[a].is_zero()) out[b] += coeffs[i](b, a) * df[a];
    for (auto& x : df) x = x.derivative();
  }
  return out;
}

std::vector<QMatrix> DiffOp::at(const Rational& t) const {
  std::vector<QMatrix> out;
  for (const auto& c : coeffs) out.push_back(map_entries<Rational>(c, [&](const RatFunc& f) { return f.evaluate(t); }));
  return out;
}

RMatrix derivative(const RMatrix& m) {
  return map_entries<RatFunc>(m, [](const RatFunc& f) { return f.derivative(); });
}

DiffOp op_compose(const DiffOp& s, const DiffOp& r) {
  if (s.source != r.target) throw InvopError("composition dimension mismatch");
  DiffOp out(s.target, r.source, s.order() + r.order());
  for (size_t j = 0; j < r.coeffs.size(); ++j) {
    // derivs[e] = d_t^e R^j
    std::vector<RMatrix> derivs{r.coeffs[j]};
    for (size_t e = 1; e < s.coeffs.size(); ++e) derivs.push_back(derivative(derivs.back()));
    for (size_t m = 0; m < s.coeffs.size(); ++m) {
      if (s.coeffs[m].is_zero()) continue;
      for (size_t k = 0; k <= m; ++k) {
        if (derivs[m - k].is_zero()) continue;
        const RatFunc c(Rational(binomial(static_cast<long>(m), static_cast<long>(k))));
        out.coeffs[k + j] += (s.coeffs[m] * derivs[m - k]).scaled(c);
      }
    }
  }
  return out;
}

DiffOp op_adjoint(const DiffOp& s) {
  DiffOp out(s.source, s.target, s.order());
  for (size_t i = 0; i < s.coeffs.size(); ++i) {
    RMatrix d = s.coeffs[i].transpose();
    // d_t^i o f = sum_k C(i,k) f^{(i-k)} d_t^k
    std::vector<RMatrix> derivs{d};
    for (size_t e = 1; e <= i; ++e) derivs.push_back(derivative(derivs.back()));
    for (size_t k = 0; k <= i; ++k) {
      Rational c(binomial(static_cast<long>(i), static_cast<long>(k)));
      if (i % 2 == 1) c = -c;
      out.coeffs[k] += derivs[i - k].scaled(RatFunc(c));
    }
  }
  return out;
}

DiffOp linearization(const Distribution& d, const PolyCurve& u) {
  if (u.dim() != d.ambient_dim()) throw InvopError("curve dimension differs from the ambient dimension");
  DiffOp op(d.corank(), d.ambient_dim(), 1);
  op.coeffs[0] = to_rat(l0_along(d, u));
  op.coeffs[1] = to_rat(lambda_along(d, u));
  return op;
}

Matrix<UniPoly> regularity_matrix_along(const Distribution& d, const PolyCurve& u, size_t q) {
  if (u.dim() != d.ambient_dim()) throw InvopError("curve dimension differs from the ambient dimension");
  const size_t p = d.corank();
  const size_t n = d.ambient_dim();
  std::vector<Matrix<UniPoly>> r{r_along(d, u)}, l{lambda_along(d, u)};
  for (size_t k = 1; k <= q + 1; ++k) {
    r.push_back(derivative(r.back()));
    l.push_back(derivative(l.back()));
  }
  Matrix<UniPoly> a(p * (q + 2), n * (q + 1));
  for (size_t m = 0; m <= q; ++m) {
    for (size_t k = 0; k <= m + 1; ++k) {
      Matrix<UniPoly> blk(p, n);
      const Integer cr = binomial(static_cast<long>(m), static_cast<long>(k));
      const Integer cl = binomial(static_cast<long>(m), static_cast<long>(k) - 1);
      if (cr != 0) blk += r[m - k].scaled(UniPoly(Rational(cr)));
      if (cl != 0) blk += l[m - k + 1].scaled(UniPoly(Rational(cl)));
      a.set_block(k * p, m * n, blk);
    }
  }
  return a;
}

InverseResult solve_S(const Distribution& d, const PolyCurve& u, const Rational& t0, size_t q) {
  const size_t p = d.corank();
  const size_t n = d.ambient_dim();
  InverseResult res;
  res.q = q;
  res.t0 = t0;
  res.op = DiffOp(p, n, q);
  if (p == 0) {
    res.pivot_minor = UniPoly(Rational(1));
    res.whole_line = true;
    return res;
  }
  const Matrix<UniPoly> a = regularity_matrix_along(d, u, q);
  const QMatrix a0 = map_entries<Rational>(a, [&](const UniPoly& f) { return f.evaluate(t0); });
  const auto red = rref(a0);
  if (red.pivots.size() != a.rows()) {
    throw InvopError("jet at t0 is not W-regular at q = " + std::to_string(q) + " (rank " +
                     std::to_string(red.pivots.size()) + " of " + std::to_string(a.rows()) + ")");
  }
  res.pivot_columns = red.pivots;
  const Matrix<UniPoly> minor = a.select_columns(red.pivots);
  res.pivot_minor = bareiss(minor, [](const UniPoly& a, const UniPoly& b) {
                      UniPoly quo, rem;
                      UniPoly::divmod(a, b, quo, rem);
                      return quo;
                    }).det;
  const Rational radius = root_free_radius(res.pivot_minor, t0);
  if (radius < 0) {
    res.whole_line = true;
  } else {
    res.lo = t0 - radius;
    res.hi = t0 + radius;
  }
  // A(t) S^T = -E on the pivot columns; the other rows of S^T vanish.
  const RMatrix inv = right_inverse(to_rat(minor));
  const size_t rows = a.rows();
  RMatrix e(rows, p);
  for (size_t i = 0; i < p; ++i) e(i, i) = RatFunc(Rational(-1));
  const RMatrix st = inv * e;
  for (size_t idx = 0; idx < red.pivots.size(); ++idx) {
    const size_t col = red.pivots[idx];
    const size_t m = col / n, mu = col % n;
    for (size_t s = 0; s < p; ++s) res.op.coeffs[m](s, mu) = st(idx, s);
  }
  return res;
}

InverseResult build_M(const Distribution& d, const PolyCurve& u, const Rational& t0, size_t q) {
  InverseResult res = solve_S(d, u, t0, q);
  res.op = op_adjoint(res.op);
  return res;
}

}  // namespace hjet
