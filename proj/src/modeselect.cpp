#include "hrelay/modeselect.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hrelay::modeselect {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using std::complex;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// rho_n / (1 - rho_n) |g_n|^2 summed over the active set, using raw
// forwarding channels. Falls back to the centered split when the operating
// point does not align with the active set (first call after a switch).
double g_t_approx(const channel::ChannelSet& ch, const channel::ModeAssignment& mode,
                  const bounds::OperatingPoint& op) {
  const std::vector<int> active = mode.active();
  const bool aligned = op.rho.size() == static_cast<Eigen::Index>(active.size());
  double gt = 0.0;
  for (size_t i = 0; i < active.size(); ++i) {
    const double rho = aligned ? op.rho(static_cast<Eigen::Index>(i)) : 0.5;
    gt += rho / (1.0 - rho) * std::norm(ch.g(active[i]));
  }
  return gt;
}

// Grid argmax of c0 + 2 Re(e^{j theta} c1); ties keep the lowest grid index.
double grid_argmax(const PhaseGrid& grid, complex<double> c1) {
  double best_val = -std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (const double theta : grid.points()) {
    const double val = 2.0 * std::real(std::polar(1.0, theta) * c1);
    if (val > best_val) {
      best_val = val;
      best_theta = theta;
    }
  }
  return best_theta;
}

// Maximizer of ||base + e^{j theta} v||^2 over theta, in [0, 2 pi).
double analytic_dg_theta(const VectorXcd& base, const VectorXcd& v) {
  const complex<double> c = base.dot(v);  // base^H v
  if (std::abs(c) == 0.0) return 0.0;
  double theta = -std::arg(c);
  if (theta < 0.0) theta += kTwoPi;
  return theta;
}

channel::ModeAssignment with_passive(const channel::ModeAssignment& mode, int idx) {
  channel::ModeAssignment out = mode;
  out.b[static_cast<size_t>(idx)] = 1;
  return out;
}

}  // namespace

std::vector<double> PhaseGrid::points() const {
  std::vector<double> pts(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) pts[static_cast<size_t>(i)] = kTwoPi * i / m;
  return pts;
}

Metric parse_metric(const std::string& name) {
  if (name == "max-snr") return Metric::max_snr;
  if (name == "max-dr") return Metric::max_dr;
  if (name == "max-rr") return Metric::max_rr;
  if (name == "max-dg") return Metric::max_dg;
  if (name == "min-rf") return Metric::min_rf;
  throw std::invalid_argument("unknown metric: " + name);
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::max_snr: return "max-snr";
    case Metric::max_dr: return "max-dr";
    case Metric::max_rr: return "max-rr";
    case Metric::max_dg: return "max-dg";
    case Metric::min_rf: return "min-rf";
  }
  throw std::logic_error("unreachable metric");
}

BoundChoice parse_bound(const std::string& name) {
  if (name == "direct") return BoundChoice::direct;
  if (name == "relay") return BoundChoice::relay;
  if (name == "auto") return BoundChoice::auto_pick;
  throw std::invalid_argument("unknown bound kind: " + name);
}

std::string bound_name(BoundChoice c) {
  switch (c) {
    case BoundChoice::direct: return "direct";
    case BoundChoice::relay: return "relay";
    case BoundChoice::auto_pick: return "auto";
  }
  throw std::logic_error("unreachable bound kind");
}

bounds::BoundResult eval_configuration(const channel::ChannelSet& ch,
                                       const channel::ModeAssignment& mode,
                                       const channel::ReflectionPlan& refl,
                                       double pt, double eta, BoundChoice choice,
                                       const bounds::AlgoParams& params) {
  const channel::EnhancedChannels enh = channel::enhance_all(ch, mode, refl);
  if (enh.active.empty() || choice == BoundChoice::direct)
    return bounds::eval_bound_direct(enh, pt, eta);
  if (choice == BoundChoice::relay) return bounds::eval_bound_relay(enh, pt, eta, params);
  bounds::BoundResult d = bounds::eval_bound_direct(enh, pt, eta);
  bounds::BoundResult r = bounds::eval_bound_relay(enh, pt, eta, params);
  return r.gamma > d.gamma ? r : d;
}

PhaseResult optimize_phase(int candidate, const channel::ChannelSet& ch,
                           const channel::ModeAssignment& mode,
                           const channel::ReflectionPlan& refl,
                           const bounds::OperatingPoint& op, double pt, double eta,
                           BoundChoice choice, const PhaseGrid& grid, double eps,
                           int max_iter, const bounds::AlgoParams& params) {
  if (!mode.is_passive(candidate))
    throw std::invalid_argument("optimize_phase: candidate is not passive");

  // f0_hat(theta) = base + e^{j theta} v with only the candidate's phase free.
  VectorXcd base = ch.f0;
  for (int n : mode.passive())
    if (n != candidate)
      base += refl.coefficient(n) * ch.g(n) * ch.f[static_cast<size_t>(n)];
  const VectorXcd v = refl.magnitude[static_cast<size_t>(candidate)] *
                      ch.g(candidate) * ch.f[static_cast<size_t>(candidate)];

  PhaseResult out;
  out.theta = refl.theta[static_cast<size_t>(candidate)];
  channel::ReflectionPlan cur = refl;
  VectorXcd w1 = op.w1;
  double gt = g_t_approx(ch, mode, op);
  double prev = -std::numeric_limits<double>::infinity();
  out.converged = false;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    // phase step: argmax of (1 + eta gt)||f0_hat||^2 + |w1^H f0_hat|^2
    complex<double> c1(0.0, 0.0);
    if (v.size() > 0) {
      c1 = (1.0 + eta * gt) * base.dot(v);
      if (w1.size() == base.size()) c1 += base.dot(w1) * w1.dot(v);
    }
    out.theta = grid_argmax(grid, c1);
    cur.theta[static_cast<size_t>(candidate)] = out.theta;

    // beamforming step on the re-enhanced channels
    out.bound = eval_configuration(ch, mode, cur, pt, eta, choice, params);
    out.snr = out.bound.gamma;
    w1 = out.bound.op.w1;
    gt = g_t_approx(ch, mode, out.bound.op);
    if (out.snr - prev <= eps) {
      out.converged = true;
      break;
    }
    prev = out.snr;
  }
  return out;
}

double metric_score(Metric kind, int candidate, const channel::ChannelSet& ch,
                    const channel::ModeAssignment& mode,
                    const channel::ReflectionPlan& refl,
                    const bounds::OperatingPoint& op, double eta, double pt,
                    BoundChoice choice, const PhaseGrid& grid,
                    const bounds::AlgoParams& params) {
  if (mode.is_passive(candidate))
    throw std::invalid_argument("metric_score: candidate is already passive");
  const channel::ModeAssignment switched = with_passive(mode, candidate);

  if (kind == Metric::min_rf) {
    // Pre-switch harvested RF power, negated so argmax keeps the weakest.
    const std::vector<int> active = mode.active();
    const auto pos = std::find(active.begin(), active.end(), candidate);
    const auto idx = static_cast<Eigen::Index>(pos - active.begin());
    const double rho =
        op.rho.size() == static_cast<Eigen::Index>(active.size()) ? op.rho(idx) : 0.5;
    const VectorXcd fn = channel::enhance_relay(ch, mode, refl, candidate);
    return -eta * rho * pt * std::norm(fn.dot(op.w1));
  }

  // Post-switch direct split for the phase-dependent metrics.
  VectorXcd base = ch.f0;
  for (int n : switched.passive())
    if (n != candidate)
      base += refl.coefficient(n) * ch.g(n) * ch.f[static_cast<size_t>(n)];
  const VectorXcd v = refl.magnitude[static_cast<size_t>(candidate)] *
                      ch.g(candidate) * ch.f[static_cast<size_t>(candidate)];

  switch (kind) {
    case Metric::max_snr: {
      channel::ReflectionPlan r2 = refl;
      r2.theta[static_cast<size_t>(candidate)] = analytic_dg_theta(base, v);
      return optimize_phase(candidate, ch, switched, r2, op, pt, eta, choice, grid,
                            1e-5, 100, params)
          .snr;
    }
    case Metric::max_dr: {
      // Beamformer held fixed; phase chosen for the direct-rate objective.
      complex<double> c1 = base.dot(v);
      if (op.w1.size() == base.size()) c1 += base.dot(op.w1) * op.w1.dot(v);
      const VectorXcd f0h = base + std::polar(1.0, grid_argmax(grid, c1)) * v;
      double score = pt * f0h.squaredNorm();
      if (op.w1.size() == f0h.size()) score += pt * std::norm(f0h.dot(op.w1));
      return score;
    }
    case Metric::max_rr: {
      channel::ReflectionPlan r2 = refl;
      r2.theta[static_cast<size_t>(candidate)] = analytic_dg_theta(base, v);
      const channel::EnhancedChannels enh = channel::enhance_all(ch, switched, r2);
      if (enh.active.empty()) return 0.0;
      return bounds::eval_bound_relay(enh, pt, eta, params).gamma;
    }
    case Metric::max_dg: {
      const double theta = analytic_dg_theta(base, v);
      return (base + std::polar(1.0, theta) * v).squaredNorm();
    }
    default:
      throw std::invalid_argument("metric_score: unknown metric kind");
  }
}

SelectionResult select_modes(const channel::Scenario& sc, const channel::ChannelSet& ch,
                             Metric metric, BoundChoice choice, const PhaseGrid& grid,
                             double eps, bool final_polish,
                             const bounds::AlgoParams& params) {
  SelectionResult res;
  res.metric = metric;
  res.mode = channel::ModeAssignment::all_active(sc.n);
  res.refl = channel::ReflectionPlan::zero(sc.n);
  for (double& m : res.refl.magnitude) m = sc.gamma_max;

  res.bound = eval_configuration(ch, res.mode, res.refl, sc.pt_mw, sc.eta, choice, params);
  res.gamma = res.bound.gamma;
  res.baseline_gamma = res.gamma;

  while (!res.mode.active().empty()) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int idx : res.mode.active()) {
      const double score = metric_score(metric, idx, ch, res.mode, res.refl,
                                        res.bound.op, sc.eta, sc.pt_mw, choice, grid,
                                        params);
      if (score > best_score) {
        best_score = score;
        best = idx;
      }
    }
    const channel::ModeAssignment switched = with_passive(res.mode, best);
    const PhaseResult pr = optimize_phase(best, ch, switched, res.refl, res.bound.op,
                                          sc.pt_mw, sc.eta, choice, grid, eps, 100,
                                          params);
    if (pr.snr <= res.gamma + eps) break;
    res.mode = switched;
    res.refl.theta[static_cast<size_t>(best)] = pr.theta;
    res.bound = pr.bound;
    res.gamma = pr.snr;
    res.per_iteration.emplace_back(best, pr.snr);
  }

  if (final_polish) {
    for (int pass = 0; pass < 10; ++pass) {
      double before = res.gamma;
      for (int n : res.mode.passive()) {
        const PhaseResult pr = optimize_phase(n, ch, res.mode, res.refl, res.bound.op,
                                              sc.pt_mw, sc.eta, choice, grid, eps, 100,
                                              params);
        if (pr.snr > res.gamma) {
          res.refl.theta[static_cast<size_t>(n)] = pr.theta;
          res.bound = pr.bound;
          res.gamma = pr.snr;
        }
      }
      if (res.gamma - before <= eps) break;
    }
  }
  return res;
}

SelectionResult brute_force_select(const channel::Scenario& sc,
                                   const channel::ChannelSet& ch, BoundChoice choice,
                                   int phase_sweeps, const bounds::AlgoParams& params) {
  if (sc.n > 12)
    throw std::invalid_argument("brute_force_select: at most 12 relays (2^N search)");

  SelectionResult best;
  best.gamma = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << sc.n); ++mask) {
    channel::ModeAssignment mode = channel::ModeAssignment::all_active(sc.n);
    for (int i = 0; i < sc.n; ++i)
      if (mask & (1u << i)) mode.b[static_cast<size_t>(i)] = 1;

    channel::ReflectionPlan refl = channel::ReflectionPlan::zero(sc.n);
    for (double& m : refl.magnitude) m = sc.gamma_max;

    // cyclic analytic phase alignment of the direct channel
    const std::vector<int> passive = mode.passive();
    for (int sweep = 0; sweep < phase_sweeps && !passive.empty(); ++sweep) {
      double change = 0.0;
      for (int n : passive) {
        Eigen::VectorXcd base = ch.f0;
        for (int m2 : passive)
          if (m2 != n) base += refl.coefficient(m2) * ch.g(m2) * ch.f[static_cast<size_t>(m2)];
        const Eigen::VectorXcd v =
            refl.magnitude[static_cast<size_t>(n)] * ch.g(n) * ch.f[static_cast<size_t>(n)];
        const double theta = analytic_dg_theta(base, v);
        change = std::max(change,
                          std::abs(theta - refl.theta[static_cast<size_t>(n)]));
        refl.theta[static_cast<size_t>(n)] = theta;
      }
      if (change <= 1e-9) break;
    }

    bounds::BoundResult b = eval_configuration(ch, mode, refl, sc.pt_mw, sc.eta, choice,
                                               params);
    if (b.gamma > best.gamma) {
      best.mode = mode;
      best.refl = refl;
      best.bound = b;
      best.gamma = b.gamma;
    }
    if (mask == 0) best.baseline_gamma = b.gamma;
  }
  return best;
}

std::vector<bool> check_passive_power(const channel::ModeAssignment& mode,
                                      const channel::ReflectionPlan& refl,
                                      const bounds::OperatingPoint& op, double pt,
                                      double pc, const channel::ChannelSet& ch) {
  std::vector<bool> ok(static_cast<size_t>(mode.size()), true);
  for (int n : mode.passive()) {
    // Enhanced channel at the passive relay: reflections of the others.
    Eigen::VectorXcd fn = ch.f[static_cast<size_t>(n)];
    for (int m : mode.passive())
      if (m != n) fn += refl.coefficient(m) * ch.z(m, n) * ch.f[static_cast<size_t>(m)];
    const double mag = refl.magnitude[static_cast<size_t>(n)];
    double captured = 0.0;
    if (op.w1.size() == fn.size()) captured += std::norm(fn.dot(op.w1));
    if (op.w2.size() == fn.size()) captured += std::norm(fn.dot(op.w2));
    ok[static_cast<size_t>(n)] = pc <= (1.0 - mag * mag) * pt * captured;
  }
  return ok;
}

}  // namespace hrelay::modeselect
