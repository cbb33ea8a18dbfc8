#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace hrelay::channel {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

/// Log-distance propagation model: L(d) = l0_db + 10*alpha*log10(d/d_ref).
struct PathLossModel {
  double l0_db = 30.0;
  double alpha = 2.0;
  double d_ref_m = 1.0;
};

/// Physical description of one two-hop relay network. Distances in meters,
/// powers in milliwatts. `seed` drives all channel phase randomness.
struct Scenario {
  int k = 3;  // HAP antenna count
  int n = 5;  // relay count
  Vec2 hap;
  Vec2 receiver;
  std::vector<Vec2> relays;
  double pt_mw = 50.0;
  double eta = 0.5;
  double gamma_max = 0.5;
  double pc_mw = 0.0;
  double noise_density_dbm = -90.0;
  bool noise_is_total = false;  // interpret noise_density_dbm as total power
  double bandwidth_hz = 100e3;
  double antenna_gain_db = 15.0;
  PathLossModel pathloss;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Total noise power in mW. Per-Hz density unless noise_is_total is set.
  double noise_power_mw() const;
};

/// One channel realization. Channels are noise-normalized: every linear
/// amplitude is divided by sqrt(total noise power), so SNR formulas
/// downstream assume unit noise.
struct ChannelSet {
  Eigen::VectorXcd f0;              // HAP -> receiver, length K
  std::vector<Eigen::VectorXcd> f;  // HAP -> relay n, N entries of length K
  Eigen::VectorXcd g;               // relay n -> receiver, length N
  Eigen::MatrixXcd z;               // relay n -> relay k, symmetric, diag unused
};

struct ModeAssignment {
  std::vector<int> b;  // b[n]=0 active, b[n]=1 passive

  static ModeAssignment all_active(int n);
  std::vector<int> active() const;
  std::vector<int> passive() const;
  bool is_passive(int i) const { return b.at(static_cast<size_t>(i)) != 0; }
  int size() const { return static_cast<int>(b.size()); }
};

/// Reflection coefficients Gamma_n = magnitude_n * exp(j*theta_n), stored for
/// every relay index; only entries of passive relays are used.
struct ReflectionPlan {
  std::vector<double> theta;
  std::vector<double> magnitude;

  static ReflectionPlan zero(int n);
  std::complex<double> coefficient(int i) const;
};

/// Effective channels seen by the active set once passive reflections fold in.
struct EnhancedChannels {
  Eigen::VectorXcd f0_hat;
  std::vector<int> active;                // relay indices of the rows below
  std::vector<Eigen::VectorXcd> f_hat;    // per active relay
  Eigen::VectorXcd g_hat;                 // per active relay
};

double path_loss_db(double d_m, const PathLossModel& model);

ChannelSet generate_channels(const Scenario& sc);

Eigen::VectorXcd enhance_direct(const ChannelSet& ch, const ModeAssignment& mode,
                                const ReflectionPlan& refl);
Eigen::VectorXcd enhance_relay(const ChannelSet& ch, const ModeAssignment& mode,
                               const ReflectionPlan& refl, int k);
std::complex<double> enhance_forward(const ChannelSet& ch, const ModeAssignment& mode,
                                     const ReflectionPlan& refl, int k);

// Bundles the three enhancements for every active relay. `enhance_g=false`
// keeps the raw forwarding channels g_k (ablation hook).
EnhancedChannels enhance_all(const ChannelSet& ch, const ModeAssignment& mode,
                             const ReflectionPlan& refl, bool enhance_g = true);

double snr_first_hop(const Eigen::VectorXcd& f0_hat, const Eigen::VectorXcd& w1,
                     double pt_mw);
double snr_second_hop(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXcd& g_hat, const Eigen::VectorXcd& f0_hat,
                      const Eigen::VectorXcd& w2, double pt_mw);

}  // namespace hrelay::channel
