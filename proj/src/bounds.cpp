#include "hrelay/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrelay::bounds {

namespace {

Eigen::VectorXcd unit_or_e1(const Eigen::VectorXcd& v) {
  const double nrm = v.norm();
  if (nrm > 0.0) return v / nrm;
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(v.size());
  if (e.size() > 0) e(0) = 1.0;
  return e;
}

// Objective of the network beamforming step for fixed y.
double inner_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double num = x.dot(y);
  return num * num / (1.0 + x.squaredNorm());
}

// Cyclic coordinate ascent on |x^T y|^2 / (1 + ||x||^2) over 0 <= x_n <= cap_n.
// Per coordinate the stationary point is x_n = y_n (1 + ||x||^2 - x_n^2) / a
// with a = sum_{j != n} x_j y_j, and the objective decays past it.
double ascend(Eigen::VectorXd& x, const Eigen::VectorXd& y,
              const Eigen::VectorXd& cap, const AlgoParams& params) {
  const int n = static_cast<int>(x.size());
  double value = inner_value(x, y);
  for (int sweep = 0; sweep < params.inner_max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      if (cap(i) <= 0.0) {
        x(i) = 0.0;
        continue;
      }
      const double a = x.dot(y) - x(i) * y(i);
      const double b = x.squaredNorm() - x(i) * x(i);
      double t = cap(i);
      if (a > 0.0) t = std::min(cap(i), y(i) * (1.0 + b) / a);
      x(i) = std::max(0.0, t);
    }
    const double next = inner_value(x, y);
    const double gain = next - value;
    value = next;
    if (std::abs(gain) <= params.inner_tol * std::max(1.0, value)) break;
  }
  return value;
}

double xbar_at(const Algorithm1State& st, int i, double pt, double eta) {
  return x_bar(st.rho(i), st.s2(i), st.g2(i), pt, eta);
}

// Shared core of the direct-link-free bound; `per_relay_s2` selects the
// single-antenna substitution s_n^2 = |f_n|^2 instead of the max-min gain.
BoundResult relay_core(const channel::EnhancedChannels& enh, double pt, double eta,
                       const AlgoParams& params, bool per_relay_s2) {
  const int na = static_cast<int>(enh.active.size());
  if (na == 0)
    throw std::invalid_argument("relay bound undefined for an empty active set");
  const int k = static_cast<int>(enh.f0_hat.size());

  BoundResult r;
  r.kind = per_relay_s2 ? BoundKind::single_antenna : BoundKind::relay;

  Algorithm1State st;
  st.rho = Eigen::VectorXd::Constant(na, 0.5);
  st.s2 = Eigen::VectorXd::Zero(na);
  st.g2 = Eigen::VectorXd::Zero(na);
  st.beta = params.beta;
  for (int i = 0; i < na; ++i) st.g2(i) = std::norm(enh.g_hat(i));

  Eigen::VectorXcd w1;
  if (per_relay_s2 || k == 1) {
    // One antenna: |f_n^H w1|^2 = |f_n|^2 for any unit w1.
    w1 = Eigen::VectorXcd::Ones(k);
    for (int i = 0; i < na; ++i) st.s2(i) = enh.f_hat[static_cast<size_t>(i)].squaredNorm();
  } else {
    std::vector<Eigen::VectorXcd> fs(enh.f_hat.begin(), enh.f_hat.end());
    const conic::MinGainResult mg = conic::solve_min_gain_beamforming(fs);
    w1 = mg.w1;
    st.s2.setConstant(mg.s_min2);
    if (mg.status != conic::SolveStatus::optimal) r.converged = false;
  }
  r.first_hop_ref = channel::snr_first_hop(enh.f0_hat, w1, pt);

  const double s2max = st.s2.maxCoeff();
  if (s2max <= 1e-14) {
    // An active relay is orthogonal to every feasible beam: harvestable
    // power is zero and the bound collapses.
    r.degenerate = true;
    r.gamma = r.gamma1 = r.gamma2 = 0.0;
    r.op.w1 = w1;
    r.op.w2 = unit_or_e1(enh.f0_hat);
    r.op.rho = st.rho;
    r.op.p_mw = Eigen::VectorXd::Zero(na);
    r.op.x = Eigen::VectorXd::Zero(na);
    r.op.y = Eigen::VectorXd::Zero(na);
    r.op.x_hat = Eigen::VectorXd::Zero(na);
    r.trace.push_back(0.0);
    return r;
  }

  Eigen::VectorXd xb(na), yb(na);
  InnerResult inner;
  double prev = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  int iters = 0;
  const Eigen::VectorXd* warm = nullptr;
  for (int t = 0; t < params.max_outer; ++t) {
    ++iters;
    for (int i = 0; i < na; ++i) {
      xb(i) = xbar_at(st, i, pt, eta);
      yb(i) = y_bar(st.rho(i), st.s2(i), pt);
    }
    inner = inner_beamforming(xb, yb, warm, params);
    warm = &inner.x_hat;
    r.trace.push_back(inner.value);
    if (!std::isnan(prev) && std::abs(inner.value - prev) <= params.eps) {
      converged = true;
      break;
    }
    prev = inner.value;
    if (!ps_step(st, pt, eta, inner.x_hat, 1e-12, params.rho_floor)) {
      converged = true;  // every envelope is tight: fixed point
      break;
    }
  }

  r.iterations = iters;
  r.converged = r.converged && converged;
  r.gamma1 = 0.0;
  r.gamma2 = inner.value;
  r.gamma = inner.value;
  r.op.w1 = w1;
  r.op.w2 = unit_or_e1(enh.f0_hat);
  r.op.rho = st.rho;
  r.op.x_hat = inner.x_hat;
  r.op.y = inner.y;
  r.op.x = Eigen::VectorXd::Zero(na);
  r.op.p_mw = Eigen::VectorXd::Zero(na);
  for (int i = 0; i < na; ++i) {
    const double g = std::abs(enh.g_hat(i));
    r.op.x(i) = g > 0.0 ? inner.x_hat(i) / g : 0.0;
    r.op.p_mw(i) = r.op.x(i) * r.op.x(i) * (1.0 + inner.y(i) * inner.y(i));
  }
  return r;
}

}  // namespace

double x_bar(double rho, double s2, double g2, double pt, double eta) {
  return eta * rho * pt * s2 * g2 / (1.0 + (1.0 - rho) * pt * s2);
}

double y_bar(double rho, double s2, double pt) { return (1.0 - rho) * pt * s2; }

double closed_form_snr(const Eigen::VectorXd& rho, const Eigen::VectorXcd& w1,
                       const Eigen::VectorXcd& f0_hat, const Eigen::VectorXcd& g_hat,
                       double pt, double eta) {
  if (rho.size() != g_hat.size())
    throw std::invalid_argument("closed_form_snr: rho/g_hat size mismatch");
  const double f0n2 = f0_hat.squaredNorm();
  double gamma = pt * f0n2 + pt * std::norm(f0_hat.dot(w1));
  for (int i = 0; i < rho.size(); ++i) {
    if (!(rho(i) >= 0.0) || rho(i) >= 1.0)
      throw std::domain_error("closed_form_snr: rho outside [0,1)");
    gamma += eta * rho(i) * pt / (1.0 - rho(i)) * std::norm(g_hat(i)) * f0n2 - 1.0;
  }
  return gamma;
}

InnerResult inner_beamforming(const Eigen::VectorXd& x_bar_vec,
                              const Eigen::VectorXd& y_bar_vec,
                              const Eigen::VectorXd* warm_start,
                              const AlgoParams& params) {
  if (x_bar_vec.size() != y_bar_vec.size())
    throw std::invalid_argument("inner_beamforming: size mismatch");
  const int n = static_cast<int>(x_bar_vec.size());
  InnerResult best;
  best.y = y_bar_vec.cwiseMax(0.0).cwiseSqrt();
  const Eigen::VectorXd cap = x_bar_vec.cwiseMax(0.0).cwiseSqrt();
  best.x_hat = Eigen::VectorXd::Zero(n);
  best.value = 0.0;
  if (cap.maxCoeff() <= 0.0 || best.y.maxCoeff() <= 0.0) return best;

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(cap);  // corner start
  double scale = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    if (best.y(i) > 0.0 && cap(i) > 0.0) scale = std::min(scale, cap(i) / best.y(i));
  if (std::isfinite(scale))
    starts.push_back((scale * best.y).cwiseMin(cap));
  if (warm_start != nullptr && warm_start->size() == n)
    starts.push_back(warm_start->cwiseMax(0.0).cwiseMin(cap));

  for (Eigen::VectorXd& x : starts) {
    const double v = ascend(x, best.y, cap, params);
    if (v > best.value) {
      best.value = v;
      best.x_hat = x;
    }
  }
  return best;
}

bool ps_step(Algorithm1State& state, double pt, double eta,
             const Eigen::VectorXd& x_hat, double gap_tol, double rho_floor) {
  const int n = static_cast<int>(state.rho.size());
  int m = -1;
  double gmax = gap_tol;
  for (int i = 0; i < n; ++i) {
    const double gap = xbar_at(state, i, pt, eta) - x_hat(i) * x_hat(i);
    if (gap > gmax) {
      gmax = gap;
      m = i;
    }
  }
  if (m < 0) return false;

  // Solve x_bar(rho', s) = x_bar(rho, s) - beta * gap for rho' exactly:
  // with c = p_t s^2 the map is rho -> eta c g^2 rho / (1 + c - rho c), so
  // rho' = T (1 + c) / (c (eta g^2 + T)) for target value T.
  const double target = xbar_at(state, m, pt, eta) - state.beta * gmax;
  const double c = pt * state.s2(m);
  const double denom = c * (eta * state.g2(m) + target);
  double next = rho_floor;
  if (denom > 0.0) next = target * (1.0 + c) / denom;
  state.rho(m) = std::clamp(next, rho_floor, state.rho(m));
  return true;
}

double achieved_snr(const channel::EnhancedChannels& enh, const OperatingPoint& op,
                    double pt) {
  const double g1 = channel::snr_first_hop(enh.f0_hat, op.w1, pt);
  double num = std::sqrt(pt) * std::abs(enh.f0_hat.dot(op.w2));
  double den = 1.0;
  for (int i = 0; i < op.x_hat.size(); ++i) {
    num += op.x_hat(i) * op.y(i);
    den += op.x_hat(i) * op.x_hat(i);
  }
  return g1 + num * num / den;
}

BoundResult eval_bound_direct(const channel::EnhancedChannels& enh, double pt,
                              double eta) {
  const Eigen::VectorXcd& f0 = enh.f0_hat;
  const int k = static_cast<int>(f0.size());
  const int na = static_cast<int>(enh.active.size());
  const double f0n2 = f0.squaredNorm();

  BoundResult r;
  r.kind = BoundKind::direct;
  r.op.w2 = unit_or_e1(f0);
  r.op.rho = Eigen::VectorXd::Zero(na);
  r.op.p_mw = Eigen::VectorXd::Zero(na);
  r.op.x = Eigen::VectorXd::Zero(na);
  r.op.y = Eigen::VectorXd::Zero(na);
  r.op.x_hat = Eigen::VectorXd::Zero(na);

  if (na == 0) {
    r.op.w1 = r.op.w2;
    r.gamma1 = channel::snr_first_hop(f0, r.op.w1, pt);
    r.gamma2 = pt * f0n2;
    r.gamma = r.gamma1 + r.gamma2;
    r.relaxation_value = r.gamma;
    r.iterations = 0;
    return r;
  }

  conic::SdpProblem p;
  const int w1_block = p.add_block(2 * k);
  const int w1bar_block = p.add_block(2 * k);
  conic::LinExpr obj;
  obj.constant = pt * f0n2;
  obj.add_block(w1_block, pt * conic::quad_form_coeff(f0));
  std::vector<int> kappa(static_cast<size_t>(na)), s(static_cast<size_t>(na));
  for (int i = 0; i < na; ++i) {
    kappa[static_cast<size_t>(i)] = p.add_scalar();
    s[static_cast<size_t>(i)] = p.add_scalar();
    const Eigen::MatrixXd q = conic::quad_form_coeff(enh.f_hat[static_cast<size_t>(i)]);
    const double psi = eta * pt * std::norm(enh.g_hat(i)) * f0n2;
    obj.add_scalar(s[static_cast<size_t>(i)], pt);

    conic::LinExpr cap_kappa;
    cap_kappa.add_scalar(kappa[static_cast<size_t>(i)], 1.0).add_block(w1_block, -q);
    p.add_upper_bound(cap_kappa, 0.0);

    conic::LinExpr split;
    split.add_scalar(s[static_cast<size_t>(i)], 1.0)
        .add_block(w1_block, -q)
        .add_block(w1bar_block, q);
    p.add_equality(split, 0.0);

    conic::LinExpr m00, m01, m11;
    m00.add_scalar(kappa[static_cast<size_t>(i)], psi)
        .add_scalar(s[static_cast<size_t>(i)], -(1.0 + psi));
    m01.add_scalar(s[static_cast<size_t>(i)], std::sqrt(pt));
    m11.constant = 1.0;
    p.add_lmi({{m00, m01}, {m11}});
  }
  conic::LinExpr trace_cap;
  trace_cap.add_block(w1_block, 0.5 * Eigen::MatrixXd::Identity(2 * k, 2 * k));
  p.add_upper_bound(trace_cap, 1.0);
  // Loose cap on the splitting matrix: it keeps the dual strictly feasible
  // (the block would otherwise only see a rank-N_a dual slack) and is far
  // from binding at any recovered operating point.
  conic::LinExpr trace_cap_bar;
  trace_cap_bar.add_block(w1bar_block, 0.5 * Eigen::MatrixXd::Identity(2 * k, 2 * k));
  p.add_upper_bound(trace_cap_bar, 100.0);
  p.maximize(obj);

  const conic::SdpSolution sol = solve_sdp(p, 1e-7);
  r.relaxation_value = sol.objective;
  r.iterations = sol.iterations;
  r.converged = sol.status == conic::SolveStatus::optimal;

  const Eigen::MatrixXcd w1c = conic::unembed_hermitian(sol.blocks[static_cast<size_t>(w1_block)]);
  const Eigen::MatrixXcd w1barc =
      conic::unembed_hermitian(sol.blocks[static_cast<size_t>(w1bar_block)]);
  const double rho_floor = 1e-9;
  for (int i = 0; i < na; ++i) {
    const Eigen::VectorXcd& fn = enh.f_hat[static_cast<size_t>(i)];
    const double total = std::real(fn.dot(w1c * fn));
    const double kept = std::real(fn.dot(w1barc * fn));
    const double rho = total > 0.0 ? kept / total : 0.5;
    r.op.rho(i) = std::clamp(rho, rho_floor, 1.0 - rho_floor);
  }

  const Eigen::VectorXd rho = r.op.rho;
  // Relay amplification drawn from the harvested-power budget, but never past
  // the level that maximizes the combined second-hop SNR: amplifying beyond
  // the combiner's optimum only adds forwarded noise.
  const double c_direct = std::sqrt(pt * f0n2);
  const auto fill_op = [&](const Eigen::VectorXcd& w, OperatingPoint& op) {
    op.w1 = w;
    for (int i = 0; i < na; ++i) {
      const double gain = std::norm(enh.f_hat[static_cast<size_t>(i)].dot(w));
      const double gmag = std::abs(enh.g_hat(i));
      op.p_mw(i) = eta * rho(i) * pt * gain;
      op.y(i) = std::sqrt((1.0 - rho(i)) * pt * gain);
      double x = std::sqrt(op.p_mw(i) / (1.0 + op.y(i) * op.y(i)));
      if (c_direct > 0.0 && gmag > 0.0)
        x = std::min(x, op.y(i) / (c_direct * gmag));
      op.x(i) = x;
      op.x_hat(i) = x * gmag;
    }
  };
  const auto score = [&](const Eigen::VectorXcd& w) {
    OperatingPoint op = r.op;
    fill_op(w, op);
    return achieved_snr(enh, op, pt);
  };
  const Eigen::VectorXcd w1 =
      conic::extract_beamformer(w1c, score, 200, 0x8126aa5743c1bull);
  fill_op(w1, r.op);
  if (f0n2 == 0.0) r.degenerate = true;

  r.gamma = closed_form_snr(rho, r.op.w1, f0, enh.g_hat, pt, eta);
  r.gamma1 = channel::snr_first_hop(f0, r.op.w1, pt);
  r.gamma2 = r.gamma - r.gamma1;
  r.first_hop_ref = r.gamma1;
  return r;
}

BoundResult eval_bound_relay(const channel::EnhancedChannels& enh, double pt,
                             double eta, const AlgoParams& params) {
  return relay_core(enh, pt, eta, params, /*per_relay_s2=*/false);
}

BoundResult eval_bound_single_antenna(const channel::EnhancedChannels& enh, double pt,
                                      double eta, const AlgoParams& params) {
  if (enh.f0_hat.size() != 1)
    throw std::invalid_argument("single-antenna bound requires K = 1");
  return relay_core(enh, pt, eta, params, /*per_relay_s2=*/true);
}

}  // namespace hrelay::bounds
