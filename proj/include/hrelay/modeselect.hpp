#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hrelay/bounds.hpp"
#include "hrelay/channel.hpp"

namespace hrelay::modeselect {

/// Discrete phase search domain: M evenly spaced points in [0, 2*pi).
struct PhaseGrid {
  int m = 20;
  std::vector<double> points() const;
};

enum class Metric { max_snr, max_dr, max_rr, max_dg, min_rf };

Metric parse_metric(const std::string& name);  // throws on unknown name
std::string metric_name(Metric m);

/// Which SNR bound scores a configuration; auto_pick evaluates both and
/// keeps the larger (both are feasible lower bounds).
enum class BoundChoice { direct, relay, auto_pick };

BoundChoice parse_bound(const std::string& name);
std::string bound_name(BoundChoice c);

/// Enhance channels for the given mode/reflections and evaluate the chosen
/// bound. An empty active set always falls back to the direct bound.
bounds::BoundResult eval_configuration(const channel::ChannelSet& ch,
                                       const channel::ModeAssignment& mode,
                                       const channel::ReflectionPlan& refl,
                                       double pt, double eta, BoundChoice choice,
                                       const bounds::AlgoParams& params = {});

struct PhaseResult {
  double theta = 0.0;
  double snr = 0.0;
  bounds::BoundResult bound;
  int iterations = 0;
  bool converged = true;
};

/// Alternating phase/beamforming optimization for one passive relay: the
/// phase step maximizes f0_hat(theta)^H A f0_hat(theta) over the grid with
/// A = (1 + eta*g_t) I + w1 w1^H, g_t = sum_{n active} rho_n/(1-rho_n)|g_n|^2
/// (raw forwarding channels); the beamforming step re-solves the bound on
/// the re-enhanced channels. Stops when the SNR gain drops to `eps`.
PhaseResult optimize_phase(int candidate, const channel::ChannelSet& ch,
                           const channel::ModeAssignment& mode,
                           const channel::ReflectionPlan& refl,
                           const bounds::OperatingPoint& op, double pt, double eta,
                           BoundChoice choice, const PhaseGrid& grid = {},
                           double eps = 1e-5, int max_iter = 100,
                           const bounds::AlgoParams& params = {});

/// Score an active relay as a passive-mode candidate under one of the five
/// selection metrics (higher is better for every metric).
double metric_score(Metric kind, int candidate, const channel::ChannelSet& ch,
                    const channel::ModeAssignment& mode,
                    const channel::ReflectionPlan& refl,
                    const bounds::OperatingPoint& op, double eta, double pt,
                    BoundChoice choice, const PhaseGrid& grid = {},
                    const bounds::AlgoParams& params = {});

struct SelectionResult {
  channel::ModeAssignment mode;
  channel::ReflectionPlan refl;
  bounds::BoundResult bound;  // evaluation of the returned configuration
  double gamma = 0.0;
  double baseline_gamma = 0.0;  // all-active starting point
  std::vector<std::pair<int, double>> per_iteration;  // (switched relay, gamma)
  Metric metric = Metric::max_snr;
};

/// Greedy mode selection: start all-active, repeatedly switch the
/// best-scoring active relay to passive while the move improves the bound
/// by more than eps. Ties break to the lowest relay index. `final_polish`
/// re-runs the phase optimization cyclically over the final passive set.
SelectionResult select_modes(const channel::Scenario& sc, const channel::ChannelSet& ch,
                             Metric metric, BoundChoice choice,
                             const PhaseGrid& grid = {}, double eps = 1e-5,
                             bool final_polish = false,
                             const bounds::AlgoParams& params = {});

/// Exhaustive oracle over all 2^N assignments (N <= 12) with cyclic analytic
/// per-relay phase updates before each bound evaluation.
SelectionResult brute_force_select(const channel::Scenario& sc,
                                   const channel::ChannelSet& ch, BoundChoice choice,
                                   int phase_sweeps = 50,
                                   const bounds::AlgoParams& params = {});

/// Passive power budget per relay: p_c <= (1-|Gamma_n|^2) p_t
/// (|f_hat_n^H w1|^2 + |f_hat_n^H w2|^2) for n passive (active relays are
/// vacuously feasible). f_hat_n folds in reflections of the other passive
/// relays.
std::vector<bool> check_passive_power(const channel::ModeAssignment& mode,
                                      const channel::ReflectionPlan& refl,
                                      const bounds::OperatingPoint& op, double pt,
                                      double pc, const channel::ChannelSet& ch);

}  // namespace hrelay::modeselect
