#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clay/gradcheck/diff_op.hpp"
#include "clay/random.hpp"

namespace clay {

struct FdProbe {
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  bool passed = false;
  bool skipped = false;
};

struct FdReport {
  std::string op;
  double eps = 0.0;
  double tol = 0.0;
  std::vector<FdProbe> probes;

  std::size_t skipped() const {
    return static_cast<std::size_t>(std::count_if(probes.begin(), probes.end(), [](const FdProbe& p) { return p.skipped; }));
  }
  std::size_t checked() const { return probes.size() - skipped(); }
  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(probes.begin(), probes.end(), [](const FdProbe& p) { return !p.skipped && !p.passed; }));
  }
  double max_rel_error() const {
    double m = 0.0;
    for (const auto& p : probes)
      if (!p.skipped) m = std::max(m, p.rel_error);
    return m;
  }
  bool passed() const { return failures() == 0 && checked() > 0; }

  void append(const FdReport& other) { probes.insert(probes.end(), other.probes.begin(), other.probes.end()); }
};

inline double relative_error(double a, double f) {
  return std::abs(a - f) / std::max({std::abs(a), std::abs(f), 1e-8});
}

/// Unit vector with independent uniform [-1, 1) entries before normalization.
inline Vector random_unit(Eigen::Index n, const CounterRng& rng, std::uint64_t stream) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 2.0 * rng.uniform(static_cast<std::uint64_t>(i), stream) - 1.0;
  const double norm = v.norm();
  if (norm == 0.0) v[0] = 1.0;
  else v /= norm;
  return v;
}

inline double default_fd_step(const Vector& x) {
  return 1e-5 * std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 0.0);
}

/// Throws InconclusiveCheckError when more than 20% of the probes were skipped.
inline void require_conclusive(const FdReport& report) {
  if (5 * report.skipped() > report.probes.size()) {
    throw InconclusiveCheckError(report.op + ": " + std::to_string(report.skipped()) + " of " +
                                 std::to_string(report.probes.size()) +
                                 " probes crossed a discontinuity; choose a smoother configuration");
  }
}

/// Compares <vjp(u), v> with the central difference of <u, forward(x + t v)>
/// for `probes` random unit pairs (u, v). Probes whose perturbed points change
/// the op's signature are marked skipped. Never throws on skips.
inline FdReport probe_vjp(const DiffOp& op, const Vector& x, int probes, std::optional<double> eps, double tol,
                          std::uint64_t seed) {
  if (probes < 1) throw ConfigError("check_vjp needs at least one probe");
  if (!(tol > 0.0)) throw ConfigError("check_vjp tolerance must be positive");
  FdReport report;
  report.op = op.name;
  report.eps = eps.value_or(default_fd_step(x));
  report.tol = tol;
  if (!(report.eps > 0.0)) throw ConfigError("check_vjp step must be positive");

  const ForwardResult base = op.run(x);
  const bool has_sig = static_cast<bool>(op.signature);
  const std::uint64_t sig = has_sig ? op.signature(x) : 0;
  const CounterRng rng(seed);
  for (int p = 0; p < probes; ++p) {
    const Vector u = random_unit(op.output_dim, rng, 2 * static_cast<std::uint64_t>(p));
    const Vector v = random_unit(op.input_dim, rng, 2 * static_cast<std::uint64_t>(p) + 1);
    const Vector xp = x + report.eps * v, xm = x - report.eps * v;
    FdProbe probe;
    if (has_sig && (op.signature(xp) != sig || op.signature(xm) != sig)) {
      probe.skipped = true;
      report.probes.push_back(probe);
      continue;
    }
    probe.analytic = op.pullback(x, base.context, u).dot(v);
    probe.numeric = (u.dot(op.run(xp).output) - u.dot(op.run(xm).output)) / (2.0 * report.eps);
    probe.rel_error = relative_error(probe.analytic, probe.numeric);
    probe.passed = probe.rel_error <= tol;
    report.probes.push_back(probe);
  }
  return report;
}

/// probe_vjp followed by require_conclusive.
inline FdReport check_vjp(const DiffOp& op, const Vector& x, int probes, std::optional<double> eps, double tol,
                          std::uint64_t seed) {
  FdReport report = probe_vjp(op, x, probes, eps, tol, seed);
  require_conclusive(report);
  return report;
}

/// Largest |vjp(2u) - 2 vjp(u)| / max(1, |vjp(u)|) over random upstreams.
inline double vjp_linearity_error(const DiffOp& op, const Vector& x, int probes, std::uint64_t seed) {
  const ForwardResult base = op.run(x);
  const CounterRng rng(seed);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Vector u = random_unit(op.output_dim, rng, static_cast<std::uint64_t>(p));
    const Vector g1 = op.pullback(x, base.context, u);
    const Vector g2 = op.pullback(x, base.context, 2.0 * u);
    const double scale = std::max(1.0, g1.cwiseAbs().maxCoeff());
    worst = std::max(worst, (g2 - 2.0 * g1).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace clay
