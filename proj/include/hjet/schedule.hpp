#ifndef HJET_SCHEDULE_HPP_
#define HJET_SCHEDULE_HPP_

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjet/geometry.hpp"
#include "hjet/jets.hpp"
#include "hjet/matrix.hpp"

namespace hjet {

class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// zeta^bullet, or (zeta-hat^{s-1,bullet}, eta^{s,j}) with zeta-hat^{0} = zeta^bullet.
struct FrameLabel {
  enum class Kind { kFullZeta, kZetaHatWithEta };
  Kind kind = Kind::kFullZeta;
  int s = 0;
  int j = 0;

  static FrameLabel full_zeta() { return {}; }
  static FrameLabel zeta_hat_with_eta(int s, int j) { return {Kind::kZetaHatWithEta, s, j}; }
  bool is_full() const { return kind == Kind::kFullZeta; }
  std::string to_string() const;
  bool operator==(const FrameLabel&) const = default;
};

class SubframeSchedule {
 public:
  SubframeSchedule() = default;
  explicit SubframeSchedule(const GrowthVector& gv);

  const GrowthVector& growth() const { return gv_; }
  int levels() const { return gv_.step(); }
  int p() const { return gv_.corank(); }
  // p_s, with p_0 = 0.
  int p_level(int s) const { return s <= 0 ? 0 : gv_.jump(s); }

  int q_start() const { return q_start_; }
  int q_final() const { return static_cast<int>(labels_.size()) - 1; }
  const std::vector<FrameLabel>& labels() const { return labels_; }
  const FrameLabel& label(int block) const { return labels_.at(block); }
  const TauAssignment& tau() const { return tau_; }
  // q(m, K) for K = 1, 2, ...
  const std::vector<int>& q_values() const { return q_values_; }

  size_t width(const FrameLabel& label) const;
  size_t width_sum() const;
  // Schedule restricted to blocks 0..q.
  SubframeSchedule truncated(int q) const;
  // Labels used for P_k: blocks up to q(m, k-1) (the seed segment for k = 1)
  // become zeta^bullet, followed by round k; tau keeps every level <= q(m, k).
  SubframeSchedule level_view(int k) const;
  // One line per block, runs of zeta^bullet merged.
  std::vector<std::string> table() const;
  std::vector<std::string> tau_table() const;

  void set_label(int block, const FrameLabel& label);
  void set_tau(int q, const TauLabel& label) { tau_.set(q, label); }
  void set_q_start(int q) { q_start_ = q; }
  void push_q_value(int q) { q_values_.push_back(q); }
  bool operator==(const SubframeSchedule&) const = default;

 private:
  GrowthVector gv_;
  int q_start_ = 0;
  std::vector<FrameLabel> labels_;
  TauAssignment tau_;
  std::vector<int> q_values_;
};

// Labels block q with (zeta-hat, eta^{s,j}), puts tau^{s,j} at level q - d and
// recurses into the lower levels; returns the last block labeled.
int choose_subframe(SubframeSchedule& state, int q, int s, int j, int d);
// One round over all eta^{s,j} starting at block q_start; returns the last
// block labeled.
int choose_all_subframes(SubframeSchedule& state, int q_start);

// Blocks 0..q0 get zeta^bullet (q0 = min q by default), then K rounds of
// choose_all_subframes.
SubframeSchedule make_schedule(const GrowthVector& gv, int K, int q0 = -1);
int q_bound(const GrowthVector& gv, int K);

// Prescribed vectors for one column block.
std::vector<QVector> frame_vectors(const FrameLabel& label, const AdaptedFrameData& frame);
// Prescribed vectors followed by the leftmost standard basis vectors that
// complete them to a basis.
std::vector<QVector> extend_to_frame(const std::vector<QVector>& vectors, size_t dim);

struct ColumnTag {
  int block = 0;
  bool eta = false;
  int s = 0;
  int j = 0;
  bool operator==(const ColumnTag&) const = default;
};

struct BMatrix {
  PolyMatrix b;
  std::vector<ColumnTag> columns;
  // Row of the unit entry in the Lambda block of each zeta column; npos for
  // eta columns.
  std::vector<size_t> pivot_row;
  size_t p = 0;
  static constexpr size_t npos = static_cast<size_t>(-1);
};

// A over the recombined coframe with each column block relabeled by the
// schedule's frame, restricted to the prescribed columns.
BMatrix build_B(const Distribution& d, const AdaptedFrameData& frame, const SubframeSchedule& schedule,
                const PolyJet& jet);
// Same relabeling with every sub-frame extended to a full frame (A_1).
PolyMatrix build_A1(const Distribution& d, const AdaptedFrameData& frame, const SubframeSchedule& schedule,
                    const PolyJet& jet);

struct CMatrix {
  PolyMatrix c;
  // Rows and columns of B kept in C.
  std::vector<size_t> rows, cols;
  std::vector<ColumnTag> columns;
  // det B = sign * det C.
  int sign = 1;
  size_t eliminated = 0;
};

CMatrix reduce_to_C(const BMatrix& b);

struct CStructure {
  bool ok = false;
  std::string violation;
  // Per row of C: designated column, level q of X_q and its coefficient.
  std::vector<size_t> column;
  std::vector<int> level;
  std::vector<Rational> coefficient;
  QMatrix c_tilde;
  // c_tilde with columns in this order is upper triangular.
  std::vector<size_t> permutation;
};

// Variables are X_q = index q - 1.
CStructure check_C_structure(const PolyMatrix& c);

struct WitnessOptions {
  uint64_t seed = 0;
  int attempts = 32;
  // Initial range for X values, doubled after each failed attempt.
  uint64_t bound = 1u << 10;
};

struct CodimWitness {
  int K = 0;
  SubframeSchedule schedule;
  std::vector<int> q_values;
  // P_i = det C_i = +- det B_i.
  std::vector<MultiPoly> polys;
  std::vector<std::set<uint32_t>> variables;
  std::vector<CStructure> structure;
  std::vector<size_t> b_size, c_size;
  std::vector<Rational> point;
  bool nonzero = false;
  bool fresh = false;
  bool regular = false;
  int attempts_used = 0;
};

CodimWitness codim_witness(const Distribution& d, const AdaptedFrameData& frame, const QVector& first_jet, int K,
                           const WitnessOptions& opts = {});

}  // namespace hjet

#endif  // HJET_SCHEDULE_HPP_
