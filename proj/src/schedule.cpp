#include "hjet/schedule.hpp"

#include <algorithm>
#include <random>

#include "hjet/linalg.hpp"
#include "hjet/regmat.hpp"

namespace hjet {

std::string FrameLabel::to_string() const {
  if (is_full()) return "ζ^•";
  if (s == 1) return "(ζ^•, η^{1," + std::to_string(j) + "})";
  return "(ζ̂^{" + std::to_string(s - 1) + ",•}, η^{" + std::to_string(s) + "," + std::to_string(j) + "})";
}

SubframeSchedule::SubframeSchedule(const GrowthVector& gv) : gv_(gv.compressed()) {}

size_t SubframeSchedule::width(const FrameLabel& label) const {
  if (label.is_full()) return static_cast<size_t>(p());
  return static_cast<size_t>(p() - p_level(label.s - 1) + 1);
}

size_t SubframeSchedule::width_sum() const {
  size_t total = 0;
  for (const auto& l : labels_) total += width(l);
  return total;
}

SubframeSchedule SubframeSchedule::truncated(int q) const {
  SubframeSchedule out(gv_);
  out.q_start_ = q_start_;
  for (int b = 0; b <= q && b < static_cast<int>(labels_.size()); ++b) out.labels_.push_back(labels_[b]);
  for (const auto& [level, label] : tau_.entries())
    if (level <= q) out.tau_.set(level, label);
  for (int v : q_values_)
    if (v <= q) out.q_values_.push_back(v);
  return out;
}

SubframeSchedule SubframeSchedule::level_view(int k) const {
  if (k < 1 || k > static_cast<int>(q_values_.size())) throw ScheduleError("level out of range");
  SubframeSchedule out = truncated(q_values_[k - 1]);
  const int prefix = k == 1 ? q_start_ : q_values_[k - 2];
  for (int b = 0; b <= prefix; ++b) out.labels_[b] = FrameLabel::full_zeta();
  return out;
}

std::vector<std::string> SubframeSchedule::table() const {
  std::vector<std::string> out;
  size_t b = 0;
  while (b < labels_.size()) {
    if (!labels_[b].is_full()) {
      out.push_back("Pick " + labels_[b].to_string() + " for column-block " + std::to_string(b));
      ++b;
      continue;
    }
    size_t e = b;
    while (e + 1 < labels_.size() && labels_[e + 1].is_full()) ++e;
    if (e == b) {
      out.push_back("Pick ζ^• for column-block " + std::to_string(b));
    } else {
      out.push_back("Pick ζ^• for column-blocks " + std::to_string(b) + " to " + std::to_string(e));
    }
    b = e + 1;
  }
  return out;
}

std::vector<std::string> SubframeSchedule::tau_table() const {
  std::vector<std::string> out;
  for (const auto& [q, label] : tau_.entries()) {
    std::string value = label.to_string();
    if (label.kind == TauLabel::Kind::kTau) value = "τ^{" + std::to_string(label.s) + "," + std::to_string(label.j) + "}";
    out.push_back("τ^" + std::to_string(q) + " = " + value);
  }
  return out;
}

void SubframeSchedule::set_label(int block, const FrameLabel& label) {
  if (block < 0) throw ScheduleError("negative column block");
  if (static_cast<size_t>(block) >= labels_.size()) labels_.resize(block + 1);
  labels_[block] = label;
}

int choose_subframe(SubframeSchedule& state, int q, int s, int j, int d) {
  if (s < 1 || s > state.levels() || j < 1 || j > state.p_level(s) || d < 0 || q - d < 0) {
    throw ScheduleError("choose_subframe arguments out of range: q=" + std::to_string(q) + " s=" + std::to_string(s) +
                        " j=" + std::to_string(j) + " d=" + std::to_string(d));
  }
  if (d == 0) {
    state.set_tau(q, TauLabel::tau(s, j));
  } else {
    state.set_tau(q, TauLabel::zero());
    state.set_tau(q - d, TauLabel::tau(s, j));
  }
  state.set_label(q, FrameLabel::zeta_hat_with_eta(s, j));
  const int q0 = q;
  for (int a = 1; a <= state.p_level(s - 1); ++a) {
    for (int b = 1; b <= q0 + 1; ++b) {
      state.set_label(q + b, FrameLabel::full_zeta());
      state.set_tau(q + b, TauLabel::zero());
    }
    q = choose_subframe(state, q + q0 + 2, s - 1, a, q0 + 1);
  }
  return q;
}

int choose_all_subframes(SubframeSchedule& state, int q) {
  for (int s = 1; s <= state.levels(); ++s)
    for (int j = 1; j <= state.p_level(s); ++j) q = choose_subframe(state, q, s, j, 0) + 1;
  return q - 1;
}

SubframeSchedule make_schedule(const GrowthVector& gv, int K, int q0) {
  if (K < 1) throw ScheduleError("K must be at least 1");
  SubframeSchedule state(gv);
  if (state.p() == 0) throw ScheduleError("corank 0: there is nothing to schedule");
  if (q0 < 0) q0 = static_cast<int>(min_q(state.growth().rank(), state.p()));
  state.set_q_start(q0);
  for (int b = 0; b <= q0; ++b) state.set_label(b, FrameLabel::full_zeta());
  int q = q0;
  for (int k = 0; k < K; ++k) {
    q = choose_all_subframes(state, q + 1);
    state.push_q_value(q);
  }
  return state;
}

int q_bound(const GrowthVector& gv, int K) { return make_schedule(gv, K).q_values().back(); }

namespace {

void check_frame(const AdaptedFrameData& frame, const SubframeSchedule& schedule) {
  if (frame.type.has_zero_jump()) throw ScheduleError("adapted frame has zero-jump levels; use the compressed type");
  if (!(frame.type == schedule.growth())) {
    throw ScheduleError("schedule type " + schedule.growth().to_string() + " differs from the frame type " +
                        frame.type.to_string());
  }
}

std::vector<ColumnTag> frame_tags(const FrameLabel& label, const AdaptedFrameData& frame, int block) {
  std::vector<ColumnTag> tags;
  for (size_t s = 0; s < frame.zeta.size(); ++s) {
    if (!label.is_full() && static_cast<int>(s) + 2 == label.s) continue;
    for (size_t j = 0; j < frame.zeta[s].size(); ++j)
      tags.push_back({block, false, static_cast<int>(s) + 1, static_cast<int>(j) + 1});
  }
  if (!label.is_full()) tags.push_back({block, true, label.s, label.j});
  return tags;
}

QVector tag_vector(const ColumnTag& t, const AdaptedFrameData& frame) {
  const auto& src = t.eta ? frame.eta : frame.zeta;
  return src.at(t.s - 1).at(t.j - 1);
}

PolyMatrix relabel(const PolyMatrix& a, size_t n, const std::vector<std::pair<size_t, QVector>>& cols) {
  PolyMatrix out(a.rows(), cols.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    const auto& [block, w] = cols[c];
    for (size_t mu = 0; mu < n; ++mu) {
      if (w[mu] == 0) continue;
      for (size_t i = 0; i < a.rows(); ++i) {
        const MultiPoly& e = a(i, block * n + mu);
        if (!e.is_zero()) out(i, c) += e * w[mu];
      }
    }
  }
  return out;
}

RegularityMatrix<MultiPoly> recombined_A(const AdaptedFrameData& frame, const SubframeSchedule& schedule,
                                         const PolyJet& jet) {
  const int qf = schedule.q_final();
  if (qf < 0) throw ScheduleError("empty schedule");
  if (jet.order() < static_cast<size_t>(qf) + 1) throw ScheduleError("jet order too low for the schedule");
  return build_A(frame.lambda_flat(), jet.truncated(qf + 1), qf);
}

long permutation_sign(const std::vector<size_t>& perm) {
  long sign = 1;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t k = i + 1; k < perm.size(); ++k)
      if (perm[i] > perm[k]) sign = -sign;
  return sign;
}

}  // namespace

std::vector<QVector> frame_vectors(const FrameLabel& label, const AdaptedFrameData& frame) {
  std::vector<QVector> out;
  for (const auto& t : frame_tags(label, frame, 0)) out.push_back(tag_vector(t, frame));
  return out;
}

std::vector<QVector> extend_to_frame(const std::vector<QVector>& vectors, size_t dim) {
  std::vector<QVector> out = vectors;
  QMatrix m(dim, vectors.size() + dim);
  for (size_t c = 0; c < vectors.size(); ++c)
    for (size_t i = 0; i < dim; ++i) m(i, c) = vectors[c].at(i);
  for (size_t i = 0; i < dim; ++i) m(i, vectors.size() + i) = 1;
  const auto red = rref(m);
  size_t found = 0;
  for (size_t c : red.pivots) {
    if (c < vectors.size()) {
      ++found;
      continue;
    }
    QVector e(dim, Rational(0));
    e[c - vectors.size()] = 1;
    out.push_back(e);
  }
  if (found != vectors.size()) throw ScheduleError("prescribed sub-frame is linearly dependent");
  return out;
}

BMatrix build_B(const Distribution& d, const AdaptedFrameData& frame, const SubframeSchedule& schedule,
                const PolyJet& jet) {
  check_frame(frame, schedule);
  const size_t p = d.corank();
  const size_t n = d.ambient_dim();
  const int qf = schedule.q_final();
  if (schedule.width_sum() != p * static_cast<size_t>(qf + 2)) {
    throw ScheduleError("width sum " + std::to_string(schedule.width_sum()) + " differs from p(q+2) = " +
                        std::to_string(p * (qf + 2)));
  }
  const auto a = recombined_A(frame, schedule, jet);
  BMatrix out;
  out.p = p;
  std::vector<std::pair<size_t, QVector>> cols;
  for (int m = 0; m <= qf; ++m) {
    for (const auto& t : frame_tags(schedule.label(m), frame, m)) {
      cols.emplace_back(m, tag_vector(t, frame));
      out.columns.push_back(t);
      out.pivot_row.push_back(t.eta ? BMatrix::npos : (m + 1) * p + frame.level_offset(t.s) + (t.j - 1));
    }
  }
  out.b = relabel(a.a, n, cols);
  return out;
}

PolyMatrix build_A1(const Distribution& d, const AdaptedFrameData& frame, const SubframeSchedule& schedule,
                    const PolyJet& jet) {
  check_frame(frame, schedule);
  const size_t n = d.ambient_dim();
  const auto a = recombined_A(frame, schedule, jet);
  std::vector<std::pair<size_t, QVector>> cols;
  for (int m = 0; m <= schedule.q_final(); ++m)
    for (const auto& w : extend_to_frame(frame_vectors(schedule.label(m), frame), n)) cols.emplace_back(m, w);
  return relabel(a.a, n, cols);
}

CMatrix reduce_to_C(const BMatrix& input) {
  PolyMatrix b = input.b;
  if (b.rows() != b.cols()) throw ScheduleError("B is not square");
  std::vector<std::pair<size_t, size_t>> pivots;
  for (size_t c = 0; c < b.cols(); ++c) {
    if (input.pivot_row[c] == BMatrix::npos) continue;
    const size_t r = input.pivot_row[c];
    if (r >= b.rows() || !(b(r, c) == MultiPoly(Rational(1)))) {
      throw ScheduleError("missing Id pivot for column " + std::to_string(c) + " at row " + std::to_string(r));
    }
    pivots.emplace_back(r, c);
  }
  // Bottom-right to top-left: clear every pivot column except its unit entry.
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto [r, c] = *it;
    std::vector<size_t> support;
    for (size_t k = 0; k < b.cols(); ++k)
      if (!b(r, k).is_zero()) support.push_back(k);
    for (size_t i = 0; i < b.rows(); ++i) {
      if (i == r || b(i, c).is_zero()) continue;
      const MultiPoly f = b(i, c);
      for (size_t k : support) b(i, k) -= f * b(r, k);
    }
  }
  CMatrix out;
  out.eliminated = pivots.size();
  std::vector<bool> pivot_row(b.rows(), false), pivot_col(b.cols(), false);
  for (const auto& [r, c] : pivots) {
    pivot_row[r] = true;
    pivot_col[c] = true;
  }
  std::vector<size_t> row_perm, col_perm;
  for (size_t i = 0; i < b.rows(); ++i)
    if (!pivot_row[i]) out.rows.push_back(i);
  for (size_t c = 0; c < b.cols(); ++c)
    if (!pivot_col[c]) {
      out.cols.push_back(c);
      out.columns.push_back(input.columns[c]);
    }
  row_perm = out.rows;
  col_perm = out.cols;
  for (const auto& [r, c] : pivots) {
    row_perm.push_back(r);
    col_perm.push_back(c);
  }
  out.sign = static_cast<int>(permutation_sign(row_perm) * permutation_sign(col_perm));
  out.c = b.select_rows(out.rows).select_columns(out.cols);
  return out;
}

CStructure check_C_structure(const PolyMatrix& c) {
  CStructure out;
  const size_t n = c.rows();
  if (c.cols() != n) {
    out.violation = "C is not square";
    return out;
  }
  // vars[i][k]: variables of entry (i, k).
  std::vector<std::vector<std::vector<uint32_t>>> vars(n, std::vector<std::vector<uint32_t>>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) vars[i][k] = c(i, k).variables();
  auto appears = [&](size_t i, size_t k, uint32_t v) {
    return std::find(vars[i][k].begin(), vars[i][k].end(), v) != vars[i][k].end();
  };
  std::vector<bool> taken(n, false);
  for (size_t i = 0; i < n; ++i) {
    bool found = false;
    for (size_t k = 0; k < n && !found; ++k) {
      if (vars[i][k].empty()) continue;
      const uint32_t v = *std::max_element(vars[i][k].begin(), vars[i][k].end());
      const MultiPoly dv = c(i, k).derivative(v);
      if (!dv.is_constant()) continue;
      bool ok = true;
      for (size_t r = 0; r < n && ok; ++r)
        for (size_t kk = 0; kk < k && ok; ++kk)
          if (appears(r, kk, v)) ok = false;
      for (size_t r = i + 1; r < n && ok; ++r)
        if (appears(r, k, v)) ok = false;
      if (!ok || taken[k]) continue;
      found = true;
      taken[k] = true;
      out.column.push_back(k);
      out.level.push_back(static_cast<int>(v) + 1);
      out.coefficient.push_back(dv.constant_term());
    }
    if (!found) {
      out.violation = "row " + std::to_string(i) + " has no designated entry";
      return out;
    }
  }
  out.c_tilde = QMatrix(n, n);
  for (size_t row = 0; row < n; ++row) {
    const uint32_t v = static_cast<uint32_t>(out.level[row] - 1);
    const size_t k = out.column[row];
    for (size_t i = 0; i < n; ++i) {
      const MultiPoly dv = c(i, k).derivative(v);
      std::vector<Rational> zero(dv.nvars(), Rational(0));
      out.c_tilde(i, k) = dv.is_zero() ? Rational(0) : dv.evaluate(zero);
    }
  }
  out.permutation = out.column;
  for (size_t row = 0; row < n; ++row) {
    for (size_t i = row + 1; i < n; ++i) {
      if (out.c_tilde(i, out.permutation[row]) != 0) {
        out.violation = "C-tilde not triangular at row " + std::to_string(i) + ", column " +
                        std::to_string(out.permutation[row]);
        return out;
      }
    }
    if (out.c_tilde(row, out.permutation[row]) == 0) {
      out.violation = "zero diagonal in C-tilde at row " + std::to_string(row);
      return out;
    }
  }
  out.ok = true;
  return out;
}

CodimWitness codim_witness(const Distribution& d, const AdaptedFrameData& frame, const QVector& first_jet, int K,
                           const WitnessOptions& opts) {
  CodimWitness w;
  w.K = K;
  w.schedule = make_schedule(frame.type, K);
  w.q_values = w.schedule.q_values();
  const int qk = w.q_values.back();
  const PolyJet jet = symbolic_fiber(d, first_jet, static_cast<size_t>(qk), w.schedule.tau(), &frame);
  std::set<uint32_t> seen;
  w.fresh = true;
  for (int i = 0; i < K; ++i) {
    const int qi = w.q_values[i];
    const SubframeSchedule sub = w.schedule.level_view(i + 1);
    const BMatrix b = build_B(d, frame, sub, jet.truncated(qi + 1));
    const CMatrix c = reduce_to_C(b);
    w.b_size.push_back(b.b.rows());
    w.c_size.push_back(c.c.rows());
    w.structure.push_back(check_C_structure(c.c));
    if (!w.structure.back().ok) {
      throw ScheduleError("C structure check failed at level " + std::to_string(i + 1) + ": " +
                          w.structure.back().violation);
    }
    w.polys.push_back(determinant(c.c));
    const auto v = w.polys.back().variables();
    std::set<uint32_t> vs(v.begin(), v.end());
    if (i > 0 && std::all_of(vs.begin(), vs.end(), [&](uint32_t x) { return seen.count(x) > 0; })) w.fresh = false;
    seen.insert(vs.begin(), vs.end());
    w.variables.push_back(std::move(vs));
  }
  std::mt19937_64 rng(opts.seed);
  uint64_t bound = opts.bound;
  for (int attempt = 1; attempt <= opts.attempts && !w.nonzero; ++attempt) {
    std::uniform_int_distribution<uint64_t> pick(1, bound);
    std::vector<Rational> point;
    for (int q = 1; q <= qk; ++q) point.push_back(Rational(Integer(std::to_string(pick(rng)))));
    w.attempts_used = attempt;
    bool all = true;
    for (const auto& poly : w.polys) {
      MultiPoly g = poly;
      g.extend_nvars(static_cast<uint32_t>(qk));
      if (g.evaluate(point) == 0) {
        all = false;
        break;
      }
    }
    if (all) {
      w.nonzero = true;
      w.point = point;
    }
    if (bound < (uint64_t(1) << 62)) bound *= 2;
  }
  if (w.nonzero) w.regular = is_W_regular(d, specialize(jet, w.point), static_cast<size_t>(qk)).regular;
  return w;
}

}  // namespace hjet
