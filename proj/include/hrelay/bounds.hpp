#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hrelay/channel.hpp"
#include "hrelay/conic.hpp"

namespace hrelay::bounds {

enum class BoundKind { direct, relay, single_antenna };

/// Full operating state of one feasible solution: HAP beamformers,
/// per-active-relay power split, transmit power, and amplification chain.
struct OperatingPoint {
  Eigen::VectorXcd w1;
  Eigen::VectorXcd w2;
  Eigen::VectorXd rho;    // per active relay, in (0,1)
  Eigen::VectorXd p_mw;   // relay transmit power
  Eigen::VectorXd x;      // amplification coefficients
  Eigen::VectorXd y;      // received-amplitude magnitudes
  Eigen::VectorXd x_hat;  // x_n * |g_hat_n|
};

struct BoundResult {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma = 0.0;  // always gamma1 + gamma2
  BoundKind kind = BoundKind::direct;
  OperatingPoint op;
  int iterations = 0;
  bool converged = true;
  bool degenerate = false;     // s_min = 0: active relay orthogonal to every beam
  double first_hop_ref = 0.0;  // p_t |f0_hat^H w1|^2, diagnostic for the relay bound
  double relaxation_value = 0.0;  // SDP objective before beamformer recovery (direct kind)
  std::vector<double> trace;      // per-iteration objective (relay kind)
};

struct AlgoParams {
  double beta = 0.5;            // fraction of the constraint gap removed per step
  double eps = 1e-5;            // outer convergence threshold on the objective
  int max_outer = 500;
  double rho_floor = 1e-9;
  double inner_tol = 1e-10;
  int inner_max_sweeps = 500;
};

/// State of the alternating optimization over (x_hat, y) and rho.
struct Algorithm1State {
  Eigen::VectorXd rho;
  Eigen::VectorXd s2;   // per-relay beamforming gain s_n^2 (s_min^2 when K > 1)
  Eigen::VectorXd g2;   // |g_hat_n|^2
  double beta = 0.5;
};

// Constraint envelopes of the direct-link-free bound.
double x_bar(double rho, double s2, double g2, double pt, double eta);
double y_bar(double rho, double s2, double pt);

double closed_form_snr(const Eigen::VectorXd& rho, const Eigen::VectorXcd& w1,
                       const Eigen::VectorXcd& f0_hat, const Eigen::VectorXcd& g_hat,
                       double pt, double eta);

struct InnerResult {
  Eigen::VectorXd x_hat;
  Eigen::VectorXd y;
  double value = 0.0;
};

/// Network beamforming step: maximize |x^T y|^2 / (1 + ||x||^2) over
/// 0 <= x_n <= sqrt(x_bar_n) with y_n = sqrt(y_bar_n), by cyclic coordinate
/// ascent from several deterministic starts (plus an optional warm start).
InnerResult inner_beamforming(const Eigen::VectorXd& x_bar_vec,
                              const Eigen::VectorXd& y_bar_vec,
                              const Eigen::VectorXd* warm_start = nullptr,
                              const AlgoParams& params = {});

/// One power-splitting update: picks the relay with the largest constraint
/// gap and shrinks its rho so the envelope drops by beta times the gap.
/// Returns false (no-op) when every gap is at tolerance.
bool ps_step(Algorithm1State& state, double pt, double eta,
             const Eigen::VectorXd& x_hat, double gap_tol = 1e-12,
             double rho_floor = 1e-9);

/// SNR of an operating point evaluated through the actual two-hop MRC
/// formulas (as opposed to the bound values, which may exceed it when the
/// relaxation is not rank one).
double achieved_snr(const channel::EnhancedChannels& enh, const OperatingPoint& op,
                    double pt);

BoundResult eval_bound_direct(const channel::EnhancedChannels& enh, double pt,
                              double eta);

BoundResult eval_bound_relay(const channel::EnhancedChannels& enh, double pt,
                             double eta, const AlgoParams& params = {});

BoundResult eval_bound_single_antenna(const channel::EnhancedChannels& enh, double pt,
                                      double eta, const AlgoParams& params = {});

}  // namespace hrelay::bounds
