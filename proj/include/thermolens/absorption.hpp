#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "thermolens/grid.hpp"
#include "thermolens/material.hpp"

namespace thermolens {

enum class AbsorptionKind { Instantaneous, WindowedAverage, FullAverage };

// Absorbed acoustic energy Q(p_t) = scale * p_t^2, optionally time-averaged.
struct AbsorptionModel {
  AbsorptionKind kind = AbsorptionKind::Instantaneous;
  double scale = 0.0;
  double t_start = 0.0;  // windowed: start of the averaging window
  double window = 0.0;   // windowed: j * tau
  double horizon = 0.0;  // full average: T

  static AbsorptionModel instantaneous(double scale);
  static AbsorptionModel windowed(double scale, double t_start, int periods, double period);
  static AbsorptionModel full(double scale, double horizon);

  bool operator==(const AbsorptionModel&) const = default;
};

void validate(const AbsorptionModel& m);

// 2 b / (rho_a c_a^4)
double absorption_scale(const MediumParams& m);

struct PtSample {
  double t = 0.0;
  Field pt;
};

// Time-ordered p_t snapshots. Keeps every `decimation`-th pushed sample and
// drops the oldest once `capacity` (0 = unbounded) is reached.
class PtHistory {
 public:
  explicit PtHistory(std::size_t capacity = 0, int decimation = 1);

  void push(double t, const Field& pt);
  const std::deque<PtSample>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }

 private:
  std::size_t capacity_;
  int decimation_;
  long pushed_ = 0;
  std::deque<PtSample> samples_;
};

// Q evaluated at the latest time of the history. `trial`, when given, is
// treated as one more sample after the stored ones.
Field absorbed_energy(const AbsorptionModel& model, const std::deque<PtSample>& history,
                      const PtSample* trial = nullptr);
Field absorbed_energy(const AbsorptionModel& model, const std::vector<PtSample>& history);

struct LipschitzProbe {
  double lhs = 0.0;
  double rhs_factor = 0.0;
  double ratio = 0.0;
  bool identically_zero = false;
};

// ||Q(u) - Q(v)||_{L2 L2} against (||u||_{Linf Linf} + ||v||_{Linf Linf}) ||u - v||_{L2 L2},
// with Q re-evaluated on every history prefix.
LipschitzProbe lipschitz_probe(const AbsorptionModel& model, const std::vector<PtSample>& u,
                               const std::vector<PtSample>& v);

// Time-derivative bound. The instantaneous model uses d/dt Q(u) = 2 scale u u_t;
// averaged models difference Q between history prefixes, so a completed
// average reports identically_zero.
LipschitzProbe lipschitz_probe_dt(const AbsorptionModel& model, const std::vector<PtSample>& u,
                                  const std::vector<PtSample>& ut, const std::vector<PtSample>& v,
                                  const std::vector<PtSample>& vt);

}  // namespace thermolens
