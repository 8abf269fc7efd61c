#include "hjet/jets.hpp"

#include "hjet/linalg.hpp"
#include "hjet/series.hpp"

namespace hjet {

namespace {

template <class S>
S zero_like() {
  return S(Rational(0));
}

template <class S>
TruncatedSeries<S> series_from(const CurveJet<S>& jet, size_t mu, size_t first, size_t order) {
  std::vector<S> derivs;
  derivs.reserve(order + 1);
  for (size_t k = first; k <= first + order; ++k) derivs.push_back(jet.d[k][mu]);
  return TruncatedSeries<S>::from_derivatives(derivs);
}

}  // namespace

template <class S>
CurveJet<S> CurveJet<S>::truncated(size_t new_order) const {
  if (new_order > order()) throw JetError("cannot truncate a jet to a higher order");
  CurveJet r;
  r.t0 = t0;
  r.d.assign(d.begin(), d.begin() + new_order + 1);
  return r;
}

template struct CurveJet<Rational>;
template struct CurveJet<MultiPoly>;

PolyJet to_poly_jet(const QJet& jet) {
  PolyJet r;
  r.t0 = jet.t0;
  for (const auto& v : jet.d) {
    std::vector<MultiPoly> row;
    for (const auto& x : v) row.emplace_back(x);
    r.d.push_back(std::move(row));
  }
  return r;
}

QJet specialize(const PolyJet& jet, const std::vector<Rational>& values) {
  std::map<uint32_t, Rational> assign;
  for (size_t k = 0; k < values.size(); ++k) assign.emplace(static_cast<uint32_t>(k), values[k]);
  QJet r;
  r.t0 = jet.t0;
  for (const auto& v : jet.d) {
    std::vector<Rational> row;
    for (const auto& x : v) {
      MultiPoly s = x.specialize(assign);
      if (!s.is_constant()) throw JetError("specialize: jet entry keeps unassigned indeterminates");
      row.push_back(s.constant_term());
    }
    r.d.push_back(std::move(row));
  }
  return r;
}

QVector PolyCurve::at(const Rational& t) const {
  QVector v;
  for (const auto& c : c_) v.push_back(c.evaluate(t));
  return v;
}

PolyCurve PolyCurve::derivative() const {
  std::vector<UniPoly> d;
  for (const auto& c : c_) d.push_back(c.derivative());
  return PolyCurve(std::move(d));
}

QJet PolyCurve::jet(const Rational& t0, size_t order) const {
  QJet j;
  j.t0 = t0;
  std::vector<UniPoly> cur = c_;
  for (size_t k = 0; k <= order; ++k) {
    QVector v;
    for (auto& c : cur) {
      v.push_back(c.evaluate(t0));
      c = c.derivative();
    }
    j.d.push_back(std::move(v));
  }
  return j;
}

std::string TauLabel::to_string() const {
  switch (kind) {
    case Kind::kZero:
      return "0";
    case Kind::kTau:
      return "tau^{" + std::to_string(s) + "," + std::to_string(j) + "}";
    case Kind::kVector: {
      std::string out = "(";
      for (size_t i = 0; i < vector.size(); ++i) out += (i ? "," : "") + hjet::to_string(vector[i]);
      return out + ")";
    }
  }
  return "?";
}

void TauAssignment::set(int q, TauLabel label) {
  if (label.is_zero()) {
    labels_.erase(q);
  } else {
    labels_[q] = std::move(label);
  }
}

TauLabel TauAssignment::at(int q) const {
  auto it = labels_.find(q);
  return it == labels_.end() ? TauLabel::zero() : it->second;
}

std::vector<int> TauAssignment::nonzero_levels() const {
  std::vector<int> out;
  for (const auto& [q, l] : labels_) out.push_back(q);
  return out;
}

QVector TauAssignment::resolve(int q, const AdaptedFrameData* frame, size_t dim) const {
  const TauLabel l = at(q);
  switch (l.kind) {
    case TauLabel::Kind::kZero:
      return QVector(dim, Rational(0));
    case TauLabel::Kind::kTau:
      if (frame == nullptr) throw JetError("tau label needs an adapted frame");
      if (l.s < 1 || l.s > static_cast<int>(frame->tau.size()) || l.j < 1 ||
          l.j > static_cast<int>(frame->tau[l.s - 1].size())) {
        throw JetError("tau label " + l.to_string() + " is not in the adapted frame");
      }
      return frame->tau[l.s - 1][l.j - 1];
    case TauLabel::Kind::kVector:
      if (l.vector.size() != dim) throw JetError("explicit tau vector has wrong dimension");
      return l.vector;
  }
  return {};
}

template <class S>
Matrix<S> pullback_jet(const std::vector<OneForm>& coframe, const CurveJet<S>& jet) {
  if (jet.order() < 1) throw JetError("pullback_jet needs a jet of order at least 1");
  const size_t n = jet.dim();
  const size_t alpha = jet.order() - 1;
  std::vector<TruncatedSeries<S>> u, udot;
  for (size_t mu = 0; mu < n; ++mu) {
    u.push_back(series_from(jet, mu, 0, alpha));
    udot.push_back(series_from(jet, mu, 1, alpha));
  }
  Matrix<S> out(coframe.size(), alpha + 1);
  for (size_t s = 0; s < coframe.size(); ++s) {
    if (coframe[s].dim() != n) throw JetError("pullback_jet: coframe arity differs from the jet");
    TruncatedSeries<S> acc(alpha);
    for (size_t mu = 0; mu < n; ++mu) {
      const MultiPoly& c = coframe[s][mu];
      if (c.is_zero() || udot[mu] == TruncatedSeries<S>(alpha)) continue;
      if (c.is_constant()) {
        acc += udot[mu] * c.constant_term();
      } else {
        MultiPoly f = c;
        f.extend_nvars(static_cast<uint32_t>(n));
        acc += series_compose<S>(f, u) * udot[mu];
      }
    }
    for (size_t k = 0; k <= alpha; ++k) out(s, k) = acc.derivative_at(k);
  }
  return out;
}

template Matrix<Rational> pullback_jet(const std::vector<OneForm>&, const QJet&);
template Matrix<MultiPoly> pullback_jet(const std::vector<OneForm>&, const PolyJet&);

template <class S>
CurveJet<S> tangency_solve(const Distribution& d, const std::vector<S>& first_jet, size_t alpha,
                           const std::vector<std::vector<S>>& free) {
  const size_t n = d.ambient_dim();
  const size_t p = d.corank();
  if (first_jet.size() != n) throw JetError("first jet has wrong dimension");
  const QMatrix lam = d.coframe_at(d.base_point());
  for (size_t s = 0; s < p; ++s) {
    S v = zero_like<S>();
    for (size_t mu = 0; mu < n; ++mu)
      if (!is_zero(lam(s, mu))) v += first_jet[mu] * lam(s, mu);
    if (!is_zero(v)) throw JetError("first jet is not tangent to the distribution");
  }
  const QMatrix rinv = p == 0 ? QMatrix(n, 0) : right_inverse(lam);
  const QMatrix kernel = kernel_basis(lam);

  CurveJet<S> jet;
  std::vector<S> base;
  for (const auto& c : d.base_point()) base.push_back(S(c));
  jet.d.push_back(std::move(base));
  jet.d.push_back(first_jet);
  for (size_t r = 1; r <= alpha; ++r) {
    jet.d.push_back(std::vector<S>(n, zero_like<S>()));
    const Matrix<S> lower = pullback_jet(d.coframe(), jet);
    std::vector<S>& next = jet.d.back();
    for (size_t mu = 0; mu < n; ++mu) {
      S v = zero_like<S>();
      for (size_t s = 0; s < p; ++s)
        if (!is_zero(rinv(mu, s)) && !is_zero(lower(s, r))) v -= lower(s, r) * rinv(mu, s);
      if (r <= free.size() && !free[r - 1].empty()) {
        if (free[r - 1].size() != kernel.cols()) throw JetError("free choice has wrong dimension");
        for (size_t i = 0; i < kernel.cols(); ++i)
          if (!is_zero(kernel(mu, i)) && !is_zero(free[r - 1][i])) v += free[r - 1][i] * kernel(mu, i);
      }
      next[mu] = std::move(v);
    }
  }
  return jet;
}

template QJet tangency_solve(const Distribution&, const std::vector<Rational>&, size_t,
                             const std::vector<std::vector<Rational>>&);
template PolyJet tangency_solve(const Distribution&, const std::vector<MultiPoly>&, size_t,
                                const std::vector<std::vector<MultiPoly>>&);

PolyJet symbolic_fiber(const Distribution& d, const QVector& first_jet, size_t alpha, const TauAssignment& tau,
                       const AdaptedFrameData* frame) {
  const size_t n = d.ambient_dim();
  const auto nv = static_cast<uint32_t>(alpha);
  const QMatrix lam = d.coframe_at(d.base_point());
  const auto red = rref(lam);
  std::vector<bool> is_pivot(n, false);
  for (size_t c : red.pivots) is_pivot[c] = true;
  std::vector<size_t> free_cols;
  for (size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  const QMatrix kernel = kernel_basis(lam);

  std::vector<std::vector<MultiPoly>> free(alpha);
  for (size_t q = 1; q <= alpha; ++q) {
    const QVector t = tau.resolve(static_cast<int>(q), frame, n);
    std::vector<Rational> coords;
    for (size_t c : free_cols) coords.push_back(t[c]);
    for (size_t mu = 0; mu < n; ++mu) {
      Rational v = 0;
      for (size_t i = 0; i < coords.size(); ++i) v += kernel(mu, i) * coords[i];
      if (v != t[mu]) throw JetError("tau^" + std::to_string(q) + " is not in D at the base point");
    }
    const MultiPoly xq = MultiPoly::variable(nv, static_cast<uint32_t>(q - 1));
    for (const auto& c : coords) free[q - 1].push_back(xq * c);
  }
  std::vector<MultiPoly> first;
  for (const auto& c : first_jet) first.emplace_back(c, nv);
  return tangency_solve<MultiPoly>(d, first, alpha, free);
}

VarNames x_names(size_t count) { return indexed_names("X", static_cast<uint32_t>(count)); }

}  // namespace hjet
