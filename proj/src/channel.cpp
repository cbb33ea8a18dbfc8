#include "hrelay/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace hrelay::channel {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform phase in [0, 2pi) from the top 53 bits of the generator output.
// Hand-rolled so the stream is identical across standard libraries.
double next_phase(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u * kTwoPi;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument("scenario: " + what);
}

}  // namespace

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void Scenario::validate() const {
  require(k >= 1, "k must be >= 1");
  require(n >= 1, "n must be >= 1");
  require(static_cast<int>(relays.size()) == n, "relays_xy must have n entries");
  require(pt_mw > 0.0, "pt_mw must be positive");
  require(eta > 0.0 && eta <= 1.0, "eta must lie in (0,1]");
  require(gamma_max > 0.0 && gamma_max < 1.0, "gamma_max must lie in (0,1)");
  require(pc_mw >= 0.0, "pc_mw must be nonnegative");
  require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
  require(pathloss.alpha > 0.0, "pathloss.alpha must be positive");
  require(pathloss.d_ref_m > 0.0, "pathloss.d_ref_m must be positive");
  require(distance(hap, receiver) > 0.0, "hap_xy and rx_xy must not coincide");
  for (int i = 0; i < n; ++i) {
    require(distance(relays[i], hap) > 0.0,
            "relay " + std::to_string(i + 1) + " coincides with the HAP");
    require(distance(relays[i], receiver) > 0.0,
            "relay " + std::to_string(i + 1) + " coincides with the receiver");
  }
}

double Scenario::noise_power_mw() const {
  const double total_dbm = noise_is_total
                               ? noise_density_dbm
                               : noise_density_dbm + 10.0 * std::log10(bandwidth_hz);
  return std::pow(10.0, total_dbm / 10.0);
}

ModeAssignment ModeAssignment::all_active(int n) {
  ModeAssignment m;
  m.b.assign(static_cast<size_t>(n), 0);
  return m;
}

std::vector<int> ModeAssignment::active() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (b[static_cast<size_t>(i)] == 0) out.push_back(i);
  return out;
}

std::vector<int> ModeAssignment::passive() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (b[static_cast<size_t>(i)] != 0) out.push_back(i);
  return out;
}

ReflectionPlan ReflectionPlan::zero(int n) {
  ReflectionPlan r;
  r.theta.assign(static_cast<size_t>(n), 0.0);
  r.magnitude.assign(static_cast<size_t>(n), 0.0);
  return r;
}

std::complex<double> ReflectionPlan::coefficient(int i) const {
  const auto idx = static_cast<size_t>(i);
  return std::polar(magnitude.at(idx), theta.at(idx));
}

double path_loss_db(double d_m, const PathLossModel& model) {
  if (d_m <= 0.0) throw std::domain_error("path_loss_db: distance must be positive");
  return model.l0_db + 10.0 * model.alpha * std::log10(d_m / model.d_ref_m);
}

ChannelSet generate_channels(const Scenario& sc) {
  sc.validate();
  const double noise_mw = sc.noise_power_mw();
  const double inv_sqrt_noise = 1.0 / std::sqrt(noise_mw);

  auto link_amplitude = [&](double d) {
    const double net_db = sc.antenna_gain_db - path_loss_db(d, sc.pathloss);
    return std::pow(10.0, net_db / 20.0) * inv_sqrt_noise;
  };

  std::mt19937_64 rng(sc.seed);
  ChannelSet ch;

  const double a0 = link_amplitude(distance(sc.hap, sc.receiver));
  ch.f0.resize(sc.k);
  for (int i = 0; i < sc.k; ++i) ch.f0[i] = std::polar(a0, next_phase(rng));

  ch.f.resize(static_cast<size_t>(sc.n));
  for (int nr = 0; nr < sc.n; ++nr) {
    const double a = link_amplitude(distance(sc.hap, sc.relays[static_cast<size_t>(nr)]));
    auto& fn = ch.f[static_cast<size_t>(nr)];
    fn.resize(sc.k);
    for (int i = 0; i < sc.k; ++i) fn[i] = std::polar(a, next_phase(rng));
  }

  ch.g.resize(sc.n);
  for (int nr = 0; nr < sc.n; ++nr) {
    const double a = link_amplitude(distance(sc.relays[static_cast<size_t>(nr)], sc.receiver));
    ch.g[nr] = std::polar(a, next_phase(rng));
  }

  ch.z = Eigen::MatrixXcd::Zero(sc.n, sc.n);
  for (int nr = 0; nr < sc.n; ++nr) {
    for (int kr = nr + 1; kr < sc.n; ++kr) {
      const double a = link_amplitude(
          distance(sc.relays[static_cast<size_t>(nr)], sc.relays[static_cast<size_t>(kr)]));
      const std::complex<double> v = std::polar(a, next_phase(rng));
      ch.z(nr, kr) = v;
      ch.z(kr, nr) = v;  // reciprocity
    }
  }
  return ch;
}

Eigen::VectorXcd enhance_direct(const ChannelSet& ch, const ModeAssignment& mode,
                                const ReflectionPlan& refl) {
  Eigen::VectorXcd out = ch.f0;
  for (int n : mode.passive()) {
    if (static_cast<size_t>(n) >= refl.theta.size())
      throw std::invalid_argument("enhance_direct: reflection plan misses a passive relay");
    out += refl.coefficient(n) * ch.g[n] * ch.f[static_cast<size_t>(n)];
  }
  return out;
}

Eigen::VectorXcd enhance_relay(const ChannelSet& ch, const ModeAssignment& mode,
                               const ReflectionPlan& refl, int k) {
  if (mode.is_passive(k))
    throw std::invalid_argument("enhance_relay: relay is not active");
  Eigen::VectorXcd out = ch.f[static_cast<size_t>(k)];
  for (int n : mode.passive())
    out += refl.coefficient(n) * ch.z(n, k) * ch.f[static_cast<size_t>(n)];
  return out;
}

std::complex<double> enhance_forward(const ChannelSet& ch, const ModeAssignment& mode,
                                     const ReflectionPlan& refl, int k) {
  if (mode.is_passive(k))
    throw std::invalid_argument("enhance_forward: relay is not active");
  std::complex<double> out = ch.g[k];
  for (int n : mode.passive()) out += refl.coefficient(n) * ch.z(n, k) * ch.g[n];
  return out;
}

EnhancedChannels enhance_all(const ChannelSet& ch, const ModeAssignment& mode,
                             const ReflectionPlan& refl, bool enhance_g) {
  EnhancedChannels enh;
  enh.f0_hat = enhance_direct(ch, mode, refl);
  enh.active = mode.active();
  enh.f_hat.reserve(enh.active.size());
  enh.g_hat.resize(static_cast<Eigen::Index>(enh.active.size()));
  for (size_t i = 0; i < enh.active.size(); ++i) {
    const int k = enh.active[i];
    enh.f_hat.push_back(enhance_relay(ch, mode, refl, k));
    enh.g_hat[static_cast<Eigen::Index>(i)] =
        enhance_g ? enhance_forward(ch, mode, refl, k) : ch.g[k];
  }
  return enh;
}

double snr_first_hop(const Eigen::VectorXcd& f0_hat, const Eigen::VectorXcd& w1,
                     double pt_mw) {
  if (w1.norm() > 1.0 + 1e-9)
    throw std::invalid_argument("snr_first_hop: ||w1|| exceeds 1");
  return pt_mw * std::norm(f0_hat.dot(w1));
}

double snr_second_hop(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXcd& g_hat, const Eigen::VectorXcd& f0_hat,
                      const Eigen::VectorXcd& w2, double pt_mw) {
  if (x.size() != y.size() || x.size() != g_hat.size())
    throw std::invalid_argument("snr_second_hop: active-set dimension mismatch");
  if (w2.norm() > 1.0 + 1e-9)
    throw std::invalid_argument("snr_second_hop: ||w2|| exceeds 1");
  std::complex<double> signal = std::sqrt(pt_mw) * f0_hat.dot(w2);
  double relay_noise = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    signal += x[i] * g_hat[i] * y[i];
    relay_noise += x[i] * x[i] * std::norm(g_hat[i]);
  }
  return std::norm(signal) / (1.0 + relay_noise);
}

}  // namespace hrelay::channel
