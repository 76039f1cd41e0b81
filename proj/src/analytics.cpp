#include "giftsim/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace giftsim {

namespace {

void require_open_unit(double coefficient, const char* what) {
  if (!(coefficient > 0.0 && coefficient < 1.0)) {
    std::ostringstream msg;
    msg << what << ": yield coefficient must lie in (0, 1), got " << coefficient;
    throw std::domain_error(msg.str());
  }
}

}  // namespace

double ucr(double coefficient) {
  if (!(coefficient > 0.0)) {
    throw std::domain_error("ucr: a <= 0 never decays, the credit ratio is unbounded");
  }
  if (!(coefficient < 1.0)) {
    throw std::domain_error("ucr: a >= 1 exhausts the yield in one step");
  }
  return -1.0 / std::log1p(-coefficient);
}

std::vector<double> ultimate_distribution(std::span<const double> coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("ultimate_distribution: no coefficients");
  std::vector<double> ratios;
  ratios.reserve(coefficients.size());
  for (double a : coefficients) ratios.push_back(ucr(a));
  const double total = std::accumulate(ratios.begin(), ratios.end(), 0.0);
  for (double& r : ratios) r /= total;
  return ratios;
}

std::vector<double> empirical_distribution(const Trace& trace, std::span<const Transaction> targets) {
  if (trace.steps.empty()) throw AnalysisError("empirical_distribution: empty trace");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) throw std::invalid_argument("empirical_distribution: duplicate target");
    }
  }
  std::vector<double> counts(targets.size(), 0.0);
  for (const TraceStep& st : trace.steps) {
    for (std::size_t i = 0; i < targets.size(); ++i) counts[i] += static_cast<double>(st.selected.occurrences(targets[i]));
  }
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total == 0.0) throw AnalysisError("empirical_distribution: no target was ever selected");
  for (double& c : counts) c /= total;
  return counts;
}

DistributionReport distribution_report(const Trace& trace) {
  const CurveTable& curves = trace.scenario->curves;
  if (curves.empty()) throw AnalysisError("distribution: scenario has no curves");
  DistributionReport report;
  std::vector<double> coefficients;
  for (const auto& [t, curve] : curves) {
    if (t.supplier() != curves.begin()->first.supplier()) {
      throw AnalysisError("distribution: applies to a single supplier, scenario has several");
    }
    report.targets.push_back(t);
    coefficients.push_back(curve.coefficient());
  }
  try {
    report.predicted = ultimate_distribution(coefficients);
  } catch (const std::domain_error& e) {
    throw AnalysisError(std::string("distribution: ") + e.what());
  }
  report.empirical = empirical_distribution(trace, report.targets);
  report.max_abs_error = 0.0;
  for (std::size_t i = 0; i < report.predicted.size(); ++i) {
    report.max_abs_error = std::max(report.max_abs_error, std::abs(report.predicted[i] - report.empirical[i]));
  }
  return report;
}

IntersectionPoint intersection_point(const YieldCurve& p_curve, const YieldCurve& q_curve) {
  const double a = p_curve.coefficient(), b = p_curve.nominal();
  const double c = q_curve.coefficient(), d = q_curve.nominal();
  if (a + c == 0.0) throw std::domain_error("intersection_point: both curves are flat and parallel");
  return {(b - d) / (a + c), (a * d + b * c) / (a + c)};
}

Equilibrium canonical_equilibrium(const YieldCurve& p_curve, const YieldCurve& q_curve) {
  const double a = p_curve.coefficient(), b = p_curve.nominal();
  const double c = q_curve.coefficient(), d = q_curve.nominal();
  require_open_unit(a, "canonical_equilibrium");
  require_open_unit(c, "canonical_equilibrium");
  const double denom = a + c - a * c;
  return {((1.0 - c) * b - d) / denom, (b - (1.0 - a) * d) / denom, (a * d + b * c) / denom};
}

double alternating_map(double balance, const YieldCurve& p_curve, const YieldCurve& q_curve) {
  const double after_p = (1.0 - p_curve.coefficient()) * balance + p_curve.nominal();
  return (1.0 - q_curve.coefficient()) * after_p - q_curve.nominal();
}

double theoretical_contraction(const YieldCurve& p_curve, const YieldCurve& q_curve) {
  require_open_unit(p_curve.coefficient(), "theoretical_contraction");
  require_open_unit(q_curve.coefficient(), "theoretical_contraction");
  return (1.0 - p_curve.coefficient()) * (1.0 - q_curve.coefficient());
}

double measured_contraction(const Trace& trace, const EntityId& p, const EntityId& q, Parity parity) {
  const std::size_t n = trace.steps.size();
  // Samples x_0..x_n; the linear run starts after the last clamped or idle step.
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const TraceStep& st = trace.steps[i];
    const bool clamped = st.valuations.empty() ||
                         std::any_of(st.valuations.begin(), st.valuations.end(),
                                     [](const Valuation& v) { return !(v.yield > 0); });
    if (clamped) start = i + 1;
  }
  if (n - start < 6) throw AnalysisError("measured_contraction: insufficient steps in the linear regime");

  std::vector<Real> x;
  x.reserve(n - start + 1);
  for (std::size_t j = start; j <= n; ++j) x.push_back(trace.opening_balance(j + 1, p, q));

  std::vector<double> diff;  // diff[j] = x_j - x_{j+2}
  for (std::size_t j = 0; j + 2 < x.size(); ++j) diff.push_back(static_cast<double>(Real(x[j] - x[j + 2])));

  constexpr double kFloor = 1e-12;
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j + 2 < diff.size(); ++j) {
    const bool odd_sample = (start + j) % 2 == 0;  // x_0 opens step 1
    if (parity == Parity::Odd && !odd_sample) continue;
    if (parity == Parity::Even && odd_sample) continue;
    if (std::abs(diff[j]) <= kFloor) continue;
    num += diff[j] * diff[j + 2];
    den += diff[j] * diff[j];
  }
  if (den == 0.0) throw AnalysisError("measured_contraction: already converged");
  return num / den;
}

double measured_contraction(const Trace& trace, Parity parity) {
  const auto& entities = trace.scenario->entities;
  if (entities.size() != 2) throw AnalysisError("measured_contraction: scenario must have exactly two entities");
  return measured_contraction(trace, entities[0], entities[1], parity);
}

std::vector<CyclePoint> detect_cycle(const Trace& trace, double tolerance) {
  const auto& entities = trace.scenario->entities;
  if (entities.size() < 2) throw AnalysisError("detect_cycle: need at least two entities");
  const std::size_t n = trace.steps.size();

  std::vector<std::pair<EntityId, EntityId>> pairs;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    for (std::size_t j = i + 1; j < entities.size(); ++j) pairs.emplace_back(entities[i], entities[j]);
  }
  // opening[i] holds the opening balances of step i + 1.
  std::vector<std::vector<double>> opening(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [p, q] : pairs) opening[i].push_back(static_cast<double>(trace.opening_balance(i + 1, p, q)));
  }
  auto same = [&](std::size_t i, std::size_t j) {
    if (!(trace.steps[i].selected == trace.steps[j].selected)) return false;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (!(std::abs(opening[i][k] - opening[j][k]) <= tolerance)) return false;
    }
    return true;
  };

  for (std::size_t k = 1; 3 * k <= n; ++k) {
    bool periodic = true;
    for (std::size_t i = n - 2 * k; i < n && periodic; ++i) periodic = same(i, i - k);
    if (!periodic) continue;
    std::vector<CyclePoint> points;
    for (std::size_t i = n - k; i < n; ++i) {
      points.push_back({trace.steps[i].index, opening[i][0], trace.steps[i].valuations});
    }
    return points;
  }
  throw AnalysisError("detect_cycle: no cycle within tolerance by the end of the trace");
}

}  // namespace giftsim
