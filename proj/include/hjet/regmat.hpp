#ifndef HJET_REGMAT_HPP_
#define HJET_REGMAT_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hjet/geometry.hpp"
#include "hjet/jets.hpp"
#include "hjet/matrix.hpp"

namespace hjet {

class RegmatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Level k: p x N matrix d_t^k [ dlambda^s(d_t u, d_mu) ] at t0; needs a jet
// of order >= k_max + 1.
template <class S>
std::vector<Matrix<S>> block_R_derivatives(const std::vector<OneForm>& coframe, const CurveJet<S>& jet,
                                           size_t k_max);

// Level k: p x N matrix d_t^k (lambda^s_mu o u) at t0; needs order >= k_max.
template <class S>
std::vector<Matrix<S>> block_Lambda_derivatives(const std::vector<OneForm>& coframe, const CurveJet<S>& jet,
                                                size_t k_max);

// A of shape p(q+2) x N(q+1); block (k, m) is
// C(m,k) d_t^{m-k} R_u + C(m,k-1) d_t^{m-k+1} Lambda.
template <class S>
struct RegularityMatrix {
  size_t p = 0;
  size_t n_ambient = 0;
  size_t q = 0;
  Matrix<S> a;

  Matrix<S> block(size_t k, size_t m) const { return a.block(k * p, m * n_ambient, p, n_ambient); }
  size_t row_blocks() const { return q + 2; }
  size_t col_blocks() const { return q + 1; }
};

template <class S>
RegularityMatrix<S> build_A(const std::vector<OneForm>& coframe, const CurveJet<S>& jet, size_t q);

template <class S>
RegularityMatrix<S> build_A(const Distribution& d, const CurveJet<S>& jet, size_t q) {
  return build_A(d.coframe(), jet, q);
}

struct RankOptions {
  int trials = 5;
  uint64_t bound = UINT64_MAX;
  uint64_t seed = 0;
};

struct WVerdict {
  bool regular = false;
  bool injective = false;
  size_t rank = 0;
  size_t rows = 0;
  size_t cols = 0;
  bool probabilistic = false;
  // Upper bound on the chance that a symbolic rank was under-reported.
  double failure_bound = 0;
  // "", "injectivity", "rank" or "tangency".
  std::string reason;
};

size_t min_q(long n, long p);
bool underdetermined(long n, long p, long q);

// Throws RegmatError when n q < p - n.
WVerdict is_W_regular(const Distribution& d, const QJet& jet, size_t q);
WVerdict is_W_regular(const Distribution& d, const PolyJet& jet, size_t q, const RankOptions& opts = {});

// Requires alpha >= 2q and a jet of order >= alpha + 1.
WVerdict is_in_W_alpha(const Distribution& d, const QJet& jet, size_t alpha, size_t q);

}  // namespace hjet

#endif  // HJET_REGMAT_HPP_
