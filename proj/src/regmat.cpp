#include "hjet/regmat.hpp"

#include "hjet/linalg.hpp"
#include "hjet/series.hpp"

namespace hjet {

namespace {

template <class S>
TruncatedSeries<S> series_from(const CurveJet<S>& jet, size_t mu, size_t first, size_t order) {
  std::vector<S> derivs;
  for (size_t k = first; k <= first + order; ++k) derivs.push_back(jet.d[k][mu]);
  return TruncatedSeries<S>::from_derivatives(derivs);
}

template <class S>
TruncatedSeries<S> compose(const MultiPoly& f, const std::vector<TruncatedSeries<S>>& u, size_t order) {
  if (f.is_zero()) return TruncatedSeries<S>(order);
  if (f.is_constant()) return TruncatedSeries<S>(order, S(f.constant_term()));
  MultiPoly g = f;
  g.extend_nvars(static_cast<uint32_t>(u.size()));
  return series_compose<S>(g, u);
}

void check_arity(const std::vector<OneForm>& coframe, size_t n) {
  for (const auto& l : coframe)
    if (l.dim() != n) throw RegmatError("coframe arity differs from the jet");
}

}  // namespace

template <class S>
std::vector<Matrix<S>> block_R_derivatives(const std::vector<OneForm>& coframe, const CurveJet<S>& jet,
                                           size_t k_max) {
  if (jet.order() < k_max + 1) throw RegmatError("jet order too low for d_t^k R_u");
  const size_t n = jet.dim();
  check_arity(coframe, n);
  std::vector<TruncatedSeries<S>> u, udot;
  for (size_t mu = 0; mu < n; ++mu) {
    u.push_back(series_from(jet, mu, 0, k_max));
    udot.push_back(series_from(jet, mu, 1, k_max));
  }
  std::vector<Matrix<S>> out(k_max + 1, Matrix<S>(coframe.size(), n));
  for (size_t s = 0; s < coframe.size(); ++s) {
    for (size_t mu = 0; mu < n; ++mu) {
      TruncatedSeries<S> acc(k_max);
      for (size_t nu = 0; nu < n; ++nu) {
        if (nu == mu) continue;
        const MultiPoly c = coframe[s].d_coefficient(nu, mu);
        if (c.is_zero()) continue;
        acc += compose(c, u, k_max) * udot[nu];
      }
      for (size_t k = 0; k <= k_max; ++k) out[k](s, mu) = acc.derivative_at(k);
    }
  }
  return out;
}

template <class S>
std::vector<Matrix<S>> block_Lambda_derivatives(const std::vector<OneForm>& coframe, const CurveJet<S>& jet,
                                                size_t k_max) {
  if (jet.order() < k_max) throw RegmatError("jet order too low for d_t^k Lambda");
  const size_t n = jet.dim();
  check_arity(coframe, n);
  std::vector<TruncatedSeries<S>> u;
  for (size_t mu = 0; mu < n; ++mu) u.push_back(series_from(jet, mu, 0, k_max));
  std::vector<Matrix<S>> out(k_max + 1, Matrix<S>(coframe.size(), n));
  for (size_t s = 0; s < coframe.size(); ++s) {
    for (size_t mu = 0; mu < n; ++mu) {
      const TruncatedSeries<S> v = compose(coframe[s][mu], u, k_max);
      for (size_t k = 0; k <= k_max; ++k) out[k](s, mu) = v.derivative_at(k);
    }
  }
  return out;
}

template <class S>
RegularityMatrix<S> build_A(const std::vector<OneForm>& coframe, const CurveJet<S>& jet, size_t q) {
  if (jet.order() < q + 1) throw RegmatError("jet order too low for A at this q");
  const size_t p = coframe.size();
  const size_t n = jet.dim();
  const auto r = block_R_derivatives(coframe, jet, q);
  const auto l = block_Lambda_derivatives(coframe, jet, q + 1);
  RegularityMatrix<S> out;
  out.p = p;
  out.n_ambient = n;
  out.q = q;
  out.a = Matrix<S>(p * (q + 2), n * (q + 1));
  for (size_t m = 0; m <= q; ++m) {
    for (size_t k = 0; k <= m + 1; ++k) {
      Matrix<S> blk(p, n);
      const Integer cr = binomial(static_cast<long>(m), static_cast<long>(k));
      const Integer cl = binomial(static_cast<long>(m), static_cast<long>(k) - 1);
      if (cr != 0) blk += r[m - k].scaled(S(Rational(cr)));
      if (cl != 0) blk += l[m - k + 1].scaled(S(Rational(cl)));
      out.a.set_block(k * p, m * n, blk);
    }
  }
  return out;
}

template std::vector<QMatrix> block_R_derivatives(const std::vector<OneForm>&, const QJet&, size_t);
template std::vector<PolyMatrix> block_R_derivatives(const std::vector<OneForm>&, const PolyJet&, size_t);
template std::vector<QMatrix> block_Lambda_derivatives(const std::vector<OneForm>&, const QJet&, size_t);
template std::vector<PolyMatrix> block_Lambda_derivatives(const std::vector<OneForm>&, const PolyJet&, size_t);
template RegularityMatrix<Rational> build_A(const std::vector<OneForm>&, const QJet&, size_t);
template RegularityMatrix<MultiPoly> build_A(const std::vector<OneForm>&, const PolyJet&, size_t);

size_t min_q(long n, long p) {
  if (n < 1 || p < 0) throw std::invalid_argument("min_q needs n >= 1 and p >= 0");
  if (p <= n) return 0;
  return static_cast<size_t>((p - n + n - 1) / n);
}

bool underdetermined(long n, long p, long q) { return n * q > p - n; }

namespace {

void check_threshold(const Distribution& d, size_t q) {
  const long n = static_cast<long>(d.rank());
  const long p = static_cast<long>(d.corank());
  if (n * static_cast<long>(q) < p - n) {
    throw RegmatError("q = " + std::to_string(q) + " is below the threshold n q >= p - n (min q = " +
                      std::to_string(min_q(n, p)) + ")");
  }
}

}  // namespace

WVerdict is_W_regular(const Distribution& d, const QJet& jet, size_t q) {
  check_threshold(d, q);
  if (jet.order() < q + 1) throw RegmatError("jet order too low for A at this q");
  WVerdict v;
  v.rows = d.corank() * (q + 2);
  v.cols = d.ambient_dim() * (q + 1);
  v.injective = false;
  for (const auto& c : jet.d.at(1))
    if (!is_zero(c)) v.injective = true;
  const auto a = build_A(d, jet.truncated(q + 1), q);
  v.rank = exact_rank(a.a);
  v.regular = v.injective && v.rank == v.rows;
  if (!v.injective) {
    v.reason = "injectivity";
  } else if (!v.regular) {
    v.reason = "rank";
  }
  return v;
}

WVerdict is_W_regular(const Distribution& d, const PolyJet& jet, size_t q, const RankOptions& opts) {
  check_threshold(d, q);
  if (jet.order() < q + 1) throw RegmatError("jet order too low for A at this q");
  WVerdict v;
  v.rows = d.corank() * (q + 2);
  v.cols = d.ambient_dim() * (q + 1);
  v.probabilistic = true;
  for (const auto& c : jet.d.at(1))
    if (!c.is_zero()) v.injective = true;
  const auto a = build_A(d, jet.truncated(q + 1), q);
  std::mt19937_64 rng(opts.seed);
  v.rank = rank_probabilistic(a.a, opts.trials, opts.bound, rng);
  v.failure_bound = rank_failure_bound(a.a, opts.trials, opts.bound);
  v.regular = v.injective && v.rank == v.rows;
  if (!v.injective) {
    v.reason = "injectivity";
  } else if (!v.regular) {
    v.reason = "rank";
  }
  return v;
}

WVerdict is_in_W_alpha(const Distribution& d, const QJet& jet, size_t alpha, size_t q) {
  if (alpha < 2 * q) throw RegmatError("alpha must be at least 2q");
  if (jet.order() < alpha + 1) throw RegmatError("jet order too low for alpha");
  const auto pb = pullback_jet(d.coframe(), jet.truncated(alpha + 1));
  if (!pb.is_zero()) {
    WVerdict v;
    v.rows = d.corank() * (q + 2);
    v.cols = d.ambient_dim() * (q + 1);
    v.reason = "tangency";
    return v;
  }
  return is_W_regular(d, jet, q);
}

}  // namespace hjet
