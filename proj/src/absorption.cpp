#include "thermolens/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "thermolens/errors.hpp"

namespace thermolens {

AbsorptionModel AbsorptionModel::instantaneous(double scale) {
  AbsorptionModel m;
  m.kind = AbsorptionKind::Instantaneous;
  m.scale = scale;
  return m;
}

AbsorptionModel AbsorptionModel::windowed(double scale, double t_start, int periods, double period) {
  AbsorptionModel m;
  m.kind = AbsorptionKind::WindowedAverage;
  m.scale = scale;
  m.t_start = t_start;
  m.window = periods * period;
  return m;
}

AbsorptionModel AbsorptionModel::full(double scale, double horizon) {
  AbsorptionModel m;
  m.kind = AbsorptionKind::FullAverage;
  m.scale = scale;
  m.horizon = horizon;
  return m;
}

void validate(const AbsorptionModel& m) {
  if (!(m.scale >= 0.0)) throw ValidationError("absorption.scale", "must be >= 0");
  if (m.kind == AbsorptionKind::WindowedAverage) {
    if (!(m.window > 0.0)) throw ValidationError("absorption.window", "must be > 0");
    if (!(m.t_start >= 0.0)) throw ValidationError("absorption.t_start", "must be >= 0");
  }
  if (m.kind == AbsorptionKind::FullAverage && !(m.horizon > 0.0)) {
    throw ValidationError("absorption.horizon", "must be > 0");
  }
}

double absorption_scale(const MediumParams& m) {
  const double c2 = m.c_a * m.c_a;
  return 2.0 * m.b / (m.rho_a * c2 * c2);
}

PtHistory::PtHistory(std::size_t capacity, int decimation)
    : capacity_(capacity), decimation_(std::max(decimation, 1)) {}

void PtHistory::push(double t, const Field& pt) {
  const bool keep = pushed_ % decimation_ == 0;
  ++pushed_;
  if (!keep) return;
  if (!samples_.empty() && !(t > samples_.back().t)) {
    throw ValidationError("history", "sample times must increase strictly");
  }
  samples_.push_back({t, pt});
  if (capacity_ > 0 && samples_.size() > capacity_) samples_.pop_front();
}

namespace {

// Random access over stored samples plus an optional trailing trial sample.
struct HistoryView {
  const std::deque<PtSample>* stored = nullptr;
  const std::vector<PtSample>* vec = nullptr;
  std::size_t count = 0;  // number of vec entries in use
  const PtSample* trial = nullptr;

  std::size_t size() const {
    const std::size_t base = stored ? stored->size() : count;
    return base + (trial ? 1 : 0);
  }
  const PtSample& operator[](std::size_t i) const {
    const std::size_t base = stored ? stored->size() : count;
    if (i == base) return *trial;
    return stored ? (*stored)[i] : (*vec)[i];
  }
};

void check_times(const HistoryView& h) {
  if (h.size() == 0) throw ValidationError("history", "empty p_t history");
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (!(h[i].t > h[i - 1].t)) throw ValidationError("history", "sample times must increase strictly");
  }
}

Field average_squares(const HistoryView& h, double a, double b, double scale) {
  const Field& first = h[0].pt;
  Field q(first.grid);
  const double t_last = h[h.size() - 1].t;
  const double end = std::min(b, t_last);
  // Averaging window not reached yet: nothing absorbed so far.
  if (end < a) return q;

  const std::size_t nodes = first.size();
  auto accumulate = [&](const Field& f, double w) {
    if (w == 0.0) return;
    for (std::size_t i = 0; i < nodes; ++i) q[i] += w * f[i] * f[i];
  };

  if (end == a || h.size() == 1) {
    // Degenerate window: point value at a, interpolated between samples.
    std::size_t k = 0;
    while (k + 1 < h.size() && h[k + 1].t <= a) ++k;
    if (k + 1 < h.size() && h[k].t < a) {
      const double th = (a - h[k].t) / (h[k + 1].t - h[k].t);
      accumulate(h[k].pt, 1.0 - th);
      accumulate(h[k + 1].pt, th);
    } else {
      accumulate(h[k].pt, 1.0);
    }
    for (double& v : q.values) v *= scale;
    return q;
  }

  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const double t0 = h[k].t;
    const double t1 = h[k + 1].t;
    const double s = std::max(t0, a);
    const double e = std::min(t1, end);
    if (!(e > s)) continue;
    const double len = t1 - t0;
    const double ts = (s - t0) / len;
    const double te = (e - t0) / len;
    const double half = 0.5 * (e - s);
    accumulate(h[k].pt, half * ((1.0 - ts) + (1.0 - te)));
    accumulate(h[k + 1].pt, half * (ts + te));
  }
  const double factor = scale / (end - a);
  for (double& v : q.values) v *= factor;
  return q;
}

Field evaluate(const AbsorptionModel& model, const HistoryView& h) {
  check_times(h);
  switch (model.kind) {
    case AbsorptionKind::Instantaneous: {
      const Field& pt = h[h.size() - 1].pt;
      Field q(pt.grid);
      for (std::size_t i = 0; i < pt.size(); ++i) q[i] = model.scale * pt[i] * pt[i];
      return q;
    }
    case AbsorptionKind::WindowedAverage:
      return average_squares(h, model.t_start, model.t_start + model.window, model.scale);
    case AbsorptionKind::FullAverage:
      return average_squares(h, 0.0, model.horizon, model.scale);
  }
  throw ValidationError("absorption.model", "unknown variant");
}

// Trapezoid weights in time for samples t_0..t_{m-1}.
std::vector<double> time_weights(const std::vector<PtSample>& s) {
  std::vector<double> w(s.size(), 0.0);
  if (s.size() == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double d = s[k + 1].t - s[k].t;
    w[k] += 0.5 * d;
    w[k + 1] += 0.5 * d;
  }
  return w;
}

void check_pair(const std::vector<PtSample>& u, const std::vector<PtSample>& v) {
  if (u.empty() || u.size() != v.size()) throw ValidationError("probe", "histories differ in length");
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k].t != v[k].t || u[k].pt.grid != v[k].pt.grid) {
      throw ValidationError("probe", "histories differ in times or grids");
    }
  }
}

double sup_sup(const std::vector<PtSample>& u) {
  double m = 0.0;
  for (const auto& s : u) m = std::max(m, max_abs(s.pt));
  return m;
}

}  // namespace

Field absorbed_energy(const AbsorptionModel& model, const std::deque<PtSample>& history,
                      const PtSample* trial) {
  HistoryView h;
  h.stored = &history;
  h.trial = trial;
  return evaluate(model, h);
}

Field absorbed_energy(const AbsorptionModel& model, const std::vector<PtSample>& history) {
  HistoryView h;
  h.vec = &history;
  h.count = history.size();
  return evaluate(model, h);
}

LipschitzProbe lipschitz_probe(const AbsorptionModel& model, const std::vector<PtSample>& u,
                               const std::vector<PtSample>& v) {
  check_pair(u, v);
  const auto w = time_weights(u);
  double lhs2 = 0.0;
  double diff2 = 0.0;
  for (std::size_t m = 0; m < u.size(); ++m) {
    HistoryView hu;
    hu.vec = &u;
    hu.count = m + 1;
    HistoryView hv;
    hv.vec = &v;
    hv.count = m + 1;
    const Field dq = evaluate(model, hu) - evaluate(model, hv);
    lhs2 += w[m] * inner(dq, dq);
    const Field d = u[m].pt - v[m].pt;
    diff2 += w[m] * inner(d, d);
  }
  LipschitzProbe r;
  r.lhs = std::sqrt(lhs2);
  r.rhs_factor = (sup_sup(u) + sup_sup(v)) * std::sqrt(diff2);
  r.ratio = r.rhs_factor > 0.0 ? r.lhs / r.rhs_factor : 0.0;
  return r;
}

LipschitzProbe lipschitz_probe_dt(const AbsorptionModel& model, const std::vector<PtSample>& u,
                                  const std::vector<PtSample>& ut, const std::vector<PtSample>& v,
                                  const std::vector<PtSample>& vt) {
  check_pair(u, v);
  check_pair(u, ut);
  check_pair(v, vt);
  LipschitzProbe r;
  const auto w = time_weights(u);
  double lhs2 = 0.0;
  double u_l2linf2 = 0.0;
  double diff_l2linf2 = 0.0;
  double dut_linfl2 = 0.0;
  double vt_linfl2 = 0.0;
  // Averaged models: d/dt Q by backward differences over history prefixes.
  std::optional<Field> prev_u, prev_v;
  bool all_zero = true;
  for (std::size_t m = 0; m < u.size(); ++m) {
    const Field& a = u[m].pt;
    const Field& at = ut[m].pt;
    const Field& c = v[m].pt;
    const Field& ct = vt[m].pt;
    Field dq(a.grid);
    if (model.kind == AbsorptionKind::Instantaneous) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        dq[i] = 2.0 * model.scale * (a[i] * at[i] - c[i] * ct[i]);
      }
    } else {
      HistoryView hu;
      hu.vec = &u;
      hu.count = m + 1;
      HistoryView hv;
      hv.vec = &v;
      hv.count = m + 1;
      Field qu = evaluate(model, hu);
      Field qv = evaluate(model, hv);
      if (prev_u) {
        const double inv = 1.0 / (u[m].t - u[m - 1].t);
        dq = inv * ((qu - *prev_u) - (qv - *prev_v));
      }
      prev_u = std::move(qu);
      prev_v = std::move(qv);
    }
    for (double x : dq.values) all_zero = all_zero && x == 0.0;
    lhs2 += w[m] * inner(dq, dq);
    u_l2linf2 += w[m] * std::pow(max_abs(a), 2);
    diff_l2linf2 += w[m] * std::pow(max_abs(a - c), 2);
    dut_linfl2 = std::max(dut_linfl2, norm(at - ct, NormKind::L2));
    vt_linfl2 = std::max(vt_linfl2, norm(ct, NormKind::L2));
  }
  r.identically_zero = all_zero;
  r.lhs = std::sqrt(lhs2);
  r.rhs_factor = std::sqrt(u_l2linf2) * dut_linfl2 + vt_linfl2 * std::sqrt(diff_l2linf2);
  r.ratio = r.rhs_factor > 0.0 ? r.lhs / r.rhs_factor : 0.0;
  return r;
}

}  // namespace thermolens
