#include "mmd/mdim.hpp"

#include "mmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace mmd {

namespace {

void check_grid(const std::vector<double>& eps) {
  if (eps.size() < 4) fail(ErrorKind::Validation, "slope extraction needs at least 4 grid points");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] < 1.0)) fail(ErrorKind::Validation, "grid points must lie in (0, 1)");
    require_non_dyadic(eps[i]);
    if (i > 0 && !(eps[i] < eps[i - 1])) fail(ErrorKind::Validation, "eps grid must be strictly decreasing");
  }
}

EntropyEstimate from_critical(const CriticalValue& c, QuantityId q, double eps) {
  EntropyEstimate est;
  est.quantity = q;
  est.eps = eps;
  est.trace = c.trace;
  est.value = c.s_star;
  est.bounds = c.bracket;
  est.mode = EstimateMode::Certified;
  est.family = c.family;
  return est;
}

std::string format_eps(double eps) {
  std::ostringstream out;
  out.precision(12);
  out << eps;
  return out.str();
}

struct NodeSpec {
  QuantityId quantity;
  std::string label;
  double factor;
  std::function<EntropyEstimate(double)> run;
};

ChainReport run_chain(const std::string& name, double eps, double tau, const std::vector<NodeSpec>& specs) {
  if (!(tau >= 0.0)) fail(ErrorKind::Validation, "chain tolerance must be nonnegative");
  ChainReport report;
  report.name = name;
  report.eps = eps;
  report.tau = tau;
  for (const NodeSpec& spec : specs) {
    const double arg = eps * spec.factor;
    ChainNode node;
    node.quantity = to_string(spec.quantity);
    node.eps_label = spec.label;
    node.eps = arg;
    try {
      const EntropyEstimate est = spec.run(arg);
      node.value = est.value;
      node.mode = est.mode;
      node.family = est.family;
    } catch (const Error& e) {
      fail(e.kind(), name + " node " + node.quantity + "(" + spec.label + "): " + e.what());
    }
    report.nodes.push_back(std::move(node));
  }
  for (std::size_t i = 0; i + 1 < report.nodes.size(); ++i) {
    ChainLink link;
    link.lhs = report.nodes[i];
    link.rhs = report.nodes[i + 1];
    link.slack = link.rhs.value - link.lhs.value;
    link.pass = link.slack >= -tau;
    report.links.push_back(std::move(link));
  }
  return report;
}

void require_chain_system(const ShiftSystem& sys, double eps) {
  if (!sys.exact_backend()) fail(ErrorKind::UnsupportedBackend, "inequality chains run in the first-difference backend");
  if (!(eps > 0.0)) fail(ErrorKind::Validation, "radius must be positive");
}

}  // namespace

SlopeReport slope_report(const std::vector<double>& eps, const std::vector<double>& values,
                         const std::string& quantity) {
  check_grid(eps);
  if (values.size() != eps.size()) fail(ErrorKind::Validation, "one value per grid point");
  SlopeReport r;
  r.quantity = quantity;
  r.eps = eps;
  r.values = values;
  r.bounds.assign(eps.size(), std::nullopt);
  r.modes.assign(eps.size(), EstimateMode::Exact);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!std::isfinite(values[i])) fail(ErrorKind::Validation, quantity + ": value at eps=" + format_eps(eps[i]) + " is not finite");
    r.ratios.push_back(values[i] / std::log(1.0 / eps[i]));
  }
  r.ratio_finest = r.ratios.back();

  const std::size_t n = eps.size();
  const std::size_t tail = std::max<std::size_t>(2, (n + 1) / 2);
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) {
    sx += std::log(1.0 / eps[i]);
    sy += values[i];
  }
  const double mx = sx / tail, my = sy / tail;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) {
    const double dx = std::log(1.0 / eps[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (values[i] - my);
  }
  r.slope = sxy / sxx;
  const auto [lo, hi] = std::minmax_element(r.ratios.begin() + (n - tail), r.ratios.end());
  r.lower = *lo;
  r.upper = *hi;
  return r;
}

SlopeReport slope_report(const std::vector<EntropyEstimate>& estimates, const std::string& quantity) {
  std::vector<double> eps, values;
  for (const auto& e : estimates) {
    eps.push_back(e.eps);
    values.push_back(e.value);
  }
  SlopeReport r = slope_report(eps, values, quantity);
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    r.bounds[i] = estimates[i].bounds;
    r.modes[i] = estimates[i].mode;
  }
  return r;
}

EntropyEstimate critical_estimate(const CriticalValue& c, QuantityId quantity, double eps) {
  return from_critical(c, quantity, eps);
}

EntropyEstimate estimate_quantity(QuantityId quantity, const MeasureModel& mu, const ShiftSystem& sys, double eps,
                                  const EstimatorSettings& s) {
  switch (quantity) {
    case QuantityId::SEP_COUNT_RATE:
      return eps_topological_entropy(sys, LeafSet::whole(), eps, s.sep_schedule);
    case QuantityId::KS_EPS:
      return ks_eps_entropy(mu, sys, eps, s.ks_max_depth, s.ks_schedule);
    case QuantityId::SHAPIRA_EPS:
      return shapira_eps(mu, sys, eps, 1.0 - s.delta, s.katok_schedule);
    case QuantityId::BK_UPPER:
      return bk_entropy(mu, sys, eps, Bound::Upper, s.bk_schedule, s.bk_sampling);
    case QuantityId::BK_LOWER:
      return bk_entropy(mu, sys, eps, Bound::Lower, s.bk_schedule, s.bk_sampling);
    case QuantityId::KATOK_UPPER:
      return katok_entropy(mu, sys, eps, s.delta, Bound::Upper, s.katok_schedule);
    case QuantityId::KATOK_LOWER:
      return katok_entropy(mu, sys, eps, s.delta, Bound::Lower, s.katok_schedule);
    case QuantityId::KATOK_UPPER_LIM:
      return katok_entropy_lim(mu, sys, eps, s.delta_grid, Bound::Upper, s.katok_schedule).estimate;
    case QuantityId::KATOK_LOWER_LIM:
      return katok_entropy_lim(mu, sys, eps, s.delta_grid, Bound::Lower, s.katok_schedule).estimate;
    case QuantityId::PS:
      return ps_entropy(mu, sys, eps, s.ps_grid, s.ps_schedule, s.threads);
    case QuantityId::OW_RETURN: {
      ReturnTimeSpec spec = s.ow;
      spec.threads = s.threads;
      return ow_return_entropy(mu, sys, eps, s.ow_schedule, spec);
    }
    case QuantityId::BOWEN_TOP:
      return from_critical(bowen_critical(sys, LeafSet::whole(), eps, s.critical_top), quantity, eps);
    case QuantityId::PACKING_TOP:
      return from_critical(packing_critical(sys, LeafSet::whole(), eps, s.critical_top), quantity, eps);
    case QuantityId::BOWEN_MU:
      return from_critical(katok_cp_limit(mu, sys, eps, s.delta_grid, s.critical).critical, quantity, eps);
    case QuantityId::PACKING_MU:
      return from_critical(packing_cp_limit(mu, sys, eps, s.delta_grid, s.critical).critical, quantity, eps);
    case QuantityId::PACKING_GENERIC:
      return packing_entropy_generic(mu, sys, eps, s.generic, s.threads);
    case QuantityId::PACKING_INF: {
      const EntropyEstimate whole =
          from_critical(packing_critical(sys, LeafSet::whole(), eps, s.critical_top), quantity, eps);
      EntropyEstimate generic = packing_entropy_generic(mu, sys, eps, s.generic, s.threads);
      EntropyEstimate out = generic.value < whole.value ? std::move(generic) : whole;
      out.quantity = quantity;
      out.bounds.reset();
      out.family = "min over {whole space, generic leaf set}: " + out.family;
      return out;
    }
  }
  fail(ErrorKind::Validation, "unknown quantity");
}

bool ChainReport::passed() const {
  return std::all_of(links.begin(), links.end(), [](const ChainLink& l) { return l.pass; });
}

std::vector<std::string> ChainReport::failures() const {
  std::vector<std::string> out;
  for (const auto& l : links) {
    if (l.pass) continue;
    std::ostringstream msg;
    msg << name << ": " << l.lhs.quantity << "(" << l.lhs.eps_label << ") [" << to_string(l.lhs.mode) << "] <= "
        << l.rhs.quantity << "(" << l.rhs.eps_label << ") [" << to_string(l.rhs.mode) << "] fails with slack "
        << l.slack << " < -" << tau;
    out.push_back(msg.str());
  }
  return out;
}

ChainReport lemma31_chain(const MeasureModel& mu, const ShiftSystem& sys, double eps, double tau,
                          const EstimatorSettings& s) {
  require_chain_system(sys, eps);
  auto q = [&](QuantityId id) {
    return [&, id](double arg) { return estimate_quantity(id, mu, sys, arg, s); };
  };
  return run_chain("lemma31", eps, tau,
                   {
                       {QuantityId::BK_UPPER, "2eps", 2.0, q(QuantityId::BK_UPPER)},
                       {QuantityId::KS_EPS, "eps", 1.0, q(QuantityId::KS_EPS)},
                       {QuantityId::SHAPIRA_EPS, "eps", 1.0, q(QuantityId::SHAPIRA_EPS)},
                       {QuantityId::KATOK_LOWER, "eps/4", 0.25, q(QuantityId::KATOK_LOWER)},
                       {QuantityId::KATOK_UPPER, "eps/4", 0.25, q(QuantityId::KATOK_UPPER)},
                       {QuantityId::KATOK_LOWER_LIM, "eps/32", 1.0 / 32, q(QuantityId::KATOK_LOWER_LIM)},
                       {QuantityId::KATOK_UPPER_LIM, "eps/32", 1.0 / 32, q(QuantityId::KATOK_UPPER_LIM)},
                       {QuantityId::BK_UPPER, "eps/64", 1.0 / 64, q(QuantityId::BK_UPPER)},
                   });
}

ChainReport lemma32_chain(const MeasureModel& mu, const ShiftSystem& sys, double eps, double tau,
                          const EstimatorSettings& s) {
  require_chain_system(sys, eps);
  auto q = [&](QuantityId id) {
    return [&, id](double arg) { return estimate_quantity(id, mu, sys, arg, s); };
  };
  return run_chain("lemma32", eps, tau,
                   {
                       {QuantityId::BK_UPPER, "eps", 1.0, q(QuantityId::BK_UPPER)},
                       {QuantityId::PACKING_MU, "eps/10", 0.1, q(QuantityId::PACKING_MU)},
                       {QuantityId::PACKING_INF, "eps/10", 0.1, q(QuantityId::PACKING_INF)},
                       {QuantityId::PACKING_GENERIC, "eps/10", 0.1, q(QuantityId::PACKING_GENERIC)},
                       {QuantityId::PS, "eps/10", 0.1, q(QuantityId::PS)},
                       {QuantityId::KATOK_UPPER_LIM, "eps/60", 1.0 / 60, q(QuantityId::KATOK_UPPER_LIM)},
                       {QuantityId::BK_UPPER, "eps/120", 1.0 / 120, q(QuantityId::BK_UPPER)},
                   });
}

std::vector<QuantityId> theorem11_quantities() {
  return {QuantityId::KS_EPS,          QuantityId::SHAPIRA_EPS,     QuantityId::BK_UPPER,   QuantityId::BK_LOWER,
          QuantityId::KATOK_UPPER,     QuantityId::KATOK_LOWER,     QuantityId::KATOK_UPPER_LIM,
          QuantityId::KATOK_LOWER_LIM, QuantityId::PS,              QuantityId::OW_RETURN,  QuantityId::BOWEN_MU,
          QuantityId::PACKING_MU,      QuantityId::PACKING_GENERIC};
}

Theorem11Report theorem11_experiment(const MeasureModel& mu, const ShiftSystem& sys, const std::vector<double>& eps,
                                     const std::vector<QuantityId>& quantities, const EstimatorSettings& s) {
  check_grid(eps);
  if (quantities.empty()) fail(ErrorKind::Validation, "no quantities requested");
  Theorem11Report report;
  const SlopeReport* katok_u = nullptr;
  const SlopeReport* katok_l = nullptr;
  report.slopes.reserve(quantities.size());
  for (QuantityId q : quantities) {
    std::vector<EntropyEstimate> row;
    for (double e : eps) {
      try {
        row.push_back(estimate_quantity(q, mu, sys, e, s));
      } catch (const Error& err) {
        fail(err.kind(), std::string(to_string(q)) + " at eps=" + format_eps(e) + ": " + err.what());
      }
    }
    report.slopes.push_back(slope_report(row, to_string(q)));
  }
  double lo = report.slopes.front().ratio_finest, hi = lo;
  for (const auto& r : report.slopes) {
    lo = std::min(lo, r.ratio_finest);
    hi = std::max(hi, r.ratio_finest);
    if (r.quantity == to_string(QuantityId::KATOK_UPPER)) katok_u = &r;
    if (r.quantity == to_string(QuantityId::KATOK_LOWER)) katok_l = &r;
  }
  report.discrepancy = hi - lo;
  if (katok_u && katok_l) report.katok_gap = std::abs(katok_u->upper - katok_l->upper);
  report.ratio_bound = std::log(static_cast<double>(sys.size())) / std::log(1.0 / eps.back());
  return report;
}

std::vector<GridLevel> dyadic_levels(int first, int last, double margin) {
  if (first < 1 || last < first || last > 7) fail(ErrorKind::Validation, "levels must satisfy 1 <= first <= last <= 7");
  if (!(margin > 0.0)) fail(ErrorKind::Validation, "margin must be positive");
  std::vector<GridLevel> out;
  for (int j = first; j <= last; ++j) {
    const int m = 1 << j;
    out.push_back({m, 4.0 * (1.0 + margin) / (m - 1)});
  }
  return out;
}

Example46Report example46_experiment(const Example46Spec& spec) {
  if (spec.levels.empty()) fail(ErrorKind::Validation, "no grid levels");
  if (!(spec.inflate > 1.0) || !(spec.deflate > 0.0 && spec.deflate < 1.0))
    fail(ErrorKind::Validation, "need inflate > 1 and 0 < deflate < 1");
  Example46Report report;
  std::vector<double> eps_defined, top_lo, top_hi, bk_hi;
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const GridLevel& level = spec.levels[i];
    if (level.m < 2) fail(ErrorKind::Validation, "grid levels need m >= 2");
    if (i > 0 && !(level.eps < spec.levels[i - 1].eps)) fail(ErrorKind::Validation, "level radii must decrease");
    Example46Row row;
    row.level = level;
    row.spacing = 1.0 / (level.m - 1);
    if (row.spacing > level.eps / 4.0)
      fail(ErrorKind::Validation, "grid spacing " + format_eps(row.spacing) + " exceeds eps/4 at m=" + std::to_string(level.m));
    const ShiftSystem sys(Alphabet::uniform_grid(level.m), std::nullopt, spec.sidedness,
                          SequenceMetric{MetricKind::WeightedSum, 40});
    row.lower_bracket = separated_rate_bracket(sys, spec.inflate * level.eps, spec.n_schedule, spec.max_block, spec.cap);
    row.upper_bracket = separated_rate_bracket(sys, spec.deflate * level.eps, spec.n_schedule, spec.max_block, spec.cap);
    row.bk_bracket = uniform_bk_bracket(sys, level.eps, spec.n_schedule);
    row.top = {row.lower_bracket.rate.lo, row.upper_bracket.rate.hi};
    row.bk = row.bk_bracket.rate;
    if (row.top.lo > row.top.hi) fail(ErrorKind::Bracket, "separated-count sandwich inverted at m=" + std::to_string(level.m));
    if (level.eps < 1.0) {
      const double L = std::log(1.0 / level.eps);
      row.top_ratio = Interval{row.top.lo / L, row.top.hi / L};
      row.bk_ratio = Interval{row.bk.lo / L, row.bk.hi / L};
      row.ratio_gap = std::max(0.0, std::max(row.top_ratio->lo, row.bk_ratio->lo) -
                                        std::min(row.top_ratio->hi, row.bk_ratio->hi));
      report.max_ratio_gap = std::max(report.max_ratio_gap, *row.ratio_gap);
      if (report.final_lower_ratio && row.top_ratio->lo < *report.final_lower_ratio) report.monotone = false;
      report.final_lower_ratio = row.top_ratio->lo;
      eps_defined.push_back(level.eps);
      top_lo.push_back(row.top.lo);
      top_hi.push_back(row.top.hi);
      bk_hi.push_back(row.bk.hi);
    }
    report.rows.push_back(std::move(row));
  }
  if (eps_defined.size() >= 4) {
    report.top_lower = slope_report(eps_defined, top_lo, "SEP_COUNT_RATE_LOWER");
    report.top_upper = slope_report(eps_defined, top_hi, "SEP_COUNT_RATE_UPPER");
    report.bk_upper = slope_report(eps_defined, bk_hi, "BK_UPPER");
  }
  return report;
}

}  // namespace mmd
