#include "mmd/extrapolate.hpp"

#include "mmd/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace mmd {

TailSummary summarize_tail(const Trace& trace, FiniteSizeBasis basis, int window) {
  if (trace.empty()) fail(ErrorKind::Validation, "empty trace");
  const int total = static_cast<int>(trace.size());
  const int count = std::min(total, std::max(1, window));
  const int first = total - count;
  int dims = basis == FiniteSizeBasis::Affine ? 2 : 3;
  dims = std::min(dims, count);

  Eigen::MatrixXd a(count, dims);
  Eigen::VectorXd y(count);
  for (int i = 0; i < count; ++i) {
    const double n = trace[first + i].first;
    y(i) = trace[first + i].second;
    a(i, 0) = 1.0;
    if (dims == 2) a(i, 1) = 1.0 / n;
    if (dims == 3) {
      a(i, 1) = 1.0 / std::sqrt(n);
      a(i, 2) = 1.0 / n;
    }
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);

  TailSummary out;
  out.basis = basis;
  out.coef.assign(coef.data(), coef.data() + coef.size());
  out.extrapolated = coef(0);
  out.points = count;
  out.upper = -std::numeric_limits<double>::infinity();
  out.lower = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    double corrected = y(i);
    for (int j = 1; j < dims; ++j) corrected -= coef(j) * a(i, j);
    out.upper = std::max(out.upper, corrected);
    out.lower = std::min(out.lower, corrected);
  }
  return out;
}

double TailSummary::finite_size(double n) const {
  if (coef.size() == 2) return coef[1] / n;
  if (coef.size() == 3) return coef[1] / std::sqrt(n) + coef[2] / n;
  return 0.0;
}

}  // namespace mmd
