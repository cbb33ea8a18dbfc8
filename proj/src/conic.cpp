#include "hrelay/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <cstdio>

namespace hrelay::conic {

namespace {

using Eigen::MatrixXd;
using Eigen::MatrixXcd;
using Eigen::VectorXd;
using Eigen::VectorXcd;

MatrixXd symmetrized(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// One linear map A_i in standard form: a list of (block, symmetric matrix).
using Terms = std::vector<std::pair<int, MatrixXd>>;
using BlockVec = std::vector<MatrixXd>;

double dot(const Terms& terms, const BlockVec& x) {
  double out = 0.0;
  for (const auto& [b, m] : terms) out += m.cwiseProduct(x[static_cast<size_t>(b)]).sum();
  return out;
}

double frob_norm(const Terms& terms) {
  double s = 0.0;
  for (const auto& [b, m] : terms) s += m.squaredNorm();
  return std::sqrt(s);
}

struct StdForm {
  std::vector<int> sides;
  std::vector<Terms> a;  // m constraints
  VectorXd b;
  Terms cost;            // C (minimization)
  double cost_shift = 0.0;
  bool negated = false;  // true when lowered from a maximization
  int n_user_blocks = 0;
  int n_scalars = 0;     // scalar i lives in block n_user_blocks + i
};

// Matrix sqrt and inverse sqrt of a symmetric PD matrix, eigenvalues clamped.
void psd_sqrt(const MatrixXd& m, MatrixXd& root, MatrixXd& inv_root) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  VectorXd d = es.eigenvalues();
  const double floor = std::max(1e-300, d.maxCoeff() * 1e-14);
  VectorXd sq(d.size()), isq(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double v = std::sqrt(std::max(d[i], floor));
    sq[i] = v;
    isq[i] = 1.0 / v;
  }
  root = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
  inv_root = es.eigenvectors() * isq.asDiagonal() * es.eigenvectors().transpose();
}

// Largest alpha in (0,1] with X + alpha*dX remaining PSD, times a damping.
double max_step(const MatrixXd& x, const MatrixXd& dx) {
  Eigen::LLT<MatrixXd> llt(x);
  MatrixXd l;
  if (llt.info() == Eigen::Success) {
    l = llt.matrixL();
  } else {
    // ridge fallback for iterates touching the boundary
    MatrixXd xr = x + 1e-12 * x.norm() * MatrixXd::Identity(x.rows(), x.cols());
    l = Eigen::LLT<MatrixXd>(xr).matrixL();
  }
  MatrixXd s = l.triangularView<Eigen::Lower>().solve(dx);
  MatrixXd t = l.triangularView<Eigen::Lower>().solve(s.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(t));
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return 1.0;
  return std::min(1.0, -1.0 / lmin);
}

struct IpmResult {
  BlockVec x;
  VectorXd y;
  double pobj = 0.0;
  double gap = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iterations;
};

IpmResult solve_standard(StdForm sf, double tol, int max_iter) {
  // Equilibrate: unit-norm constraint rows and objective. Beamforming
  // problems mix channel powers spanning many orders of magnitude, and the
  // Schur complement becomes numerically singular without this.
  for (size_t i = 0; i < sf.a.size(); ++i) {
    const double rs = frob_norm(sf.a[i]);
    if (rs > 0.0) {
      for (auto& [b, mat] : sf.a[i]) mat /= rs;
      sf.b[static_cast<Eigen::Index>(i)] /= rs;
    }
  }
  const double cscale = std::max(1.0, frob_norm(sf.cost));
  for (auto& [b, mat] : sf.cost) mat /= cscale;

  const int m = static_cast<int>(sf.a.size());
  const int nb = static_cast<int>(sf.sides.size());
  int dim = 0;
  for (int s : sf.sides) dim += s;

  // initial point scaling, SDPT3-flavored
  double xi_p = 10.0, xi_d = 10.0;
  for (int i = 0; i < m; ++i) {
    const double an = frob_norm(sf.a[i]);
    xi_p = std::max(xi_p, std::sqrt(static_cast<double>(dim)) *
                              (1.0 + std::abs(sf.b[i])) / (1.0 + an));
    xi_d = std::max(xi_d, an);
  }
  xi_d = std::max(xi_d, frob_norm(sf.cost) / std::sqrt(static_cast<double>(std::max(dim, 1))));

  BlockVec x(static_cast<size_t>(nb)), z(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b) {
    x[static_cast<size_t>(b)] = xi_p * MatrixXd::Identity(sf.sides[static_cast<size_t>(b)],
                                                          sf.sides[static_cast<size_t>(b)]);
    z[static_cast<size_t>(b)] = xi_d * MatrixXd::Identity(sf.sides[static_cast<size_t>(b)],
                                                          sf.sides[static_cast<size_t>(b)]);
  }
  VectorXd y = VectorXd::Zero(m);

  BlockVec c_full(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b)
    c_full[static_cast<size_t>(b)] = MatrixXd::Zero(sf.sides[static_cast<size_t>(b)],
                                                    sf.sides[static_cast<size_t>(b)]);
  for (const auto& [b, mat] : sf.cost) c_full[static_cast<size_t>(b)] += mat;

  const double bnorm = 1.0 + sf.b.norm();
  double cnorm = 1.0;
  for (const auto& cb : c_full) cnorm = std::max(cnorm, cb.norm());

  IpmResult res;
  int stalls = 0;
  const double feas_tol = 10.0 * tol;
  double best_merit = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iter; ++iter) {
    res.iterations = iter;

    // residuals
    VectorXd rp(m);
    for (int i = 0; i < m; ++i) rp[i] = sf.b[i] - dot(sf.a[i], x);
    BlockVec rd = c_full;
    for (size_t b = 0; b < rd.size(); ++b) rd[b] -= z[b];
    for (int i = 0; i < m; ++i)
      for (const auto& [b, mat] : sf.a[i]) rd[static_cast<size_t>(b)] -= y[i] * mat;

    double mu = 0.0;
    for (size_t b = 0; b < x.size(); ++b) mu += x[b].cwiseProduct(z[b]).sum();
    mu /= static_cast<double>(dim);

    double pobj = 0.0;
    for (size_t b = 0; b < x.size(); ++b) pobj += c_full[b].cwiseProduct(x[b]).sum();
    const double dobj = sf.b.dot(y);
    const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    double rd_norm = 0.0;
    for (const auto& rdb : rd) rd_norm = std::max(rd_norm, rdb.norm());
    const double pinf = rp.norm() / bnorm;
    const double dinf = rd_norm / cnorm;

    // Late iterations can lose positive definiteness and drift away from
    // the solution; keep the best iterate seen and report that one.
    const double merit = std::max({rel_gap, pinf, dinf});
    if (merit < best_merit) {
      best_merit = merit;
      res.x = x;
      res.y = y;
      res.pobj = pobj * cscale;
      res.gap = rel_gap;
    }

#ifdef HRELAY_IPM_TRACE
    double zmin = 1e300, xmin = 1e300;
    for (const auto& zb : z)
      zmin = std::min(zmin, Eigen::SelfAdjointEigenSolver<MatrixXd>(zb).eigenvalues().minCoeff());
    for (const auto& xb : x)
      xmin = std::min(xmin, Eigen::SelfAdjointEigenSolver<MatrixXd>(xb).eigenvalues().minCoeff());
    std::fprintf(stderr,
                 "it=%d mu=%.3e pobj=%.9f dobj=%.9f gap=%.3e pinf=%.3e dinf=%.3e zmin=%.3e xmin=%.3e\n",
                 iter, mu, pobj, dobj, rel_gap, pinf, dinf, zmin, xmin);
#endif

    if (rel_gap <= tol && pinf <= feas_tol && dinf <= feas_tol) {
      res.status = SolveStatus::optimal;
      res.x = x;
      res.y = y;
      res.pobj = pobj * cscale;
      res.gap = rel_gap;
      return res;
    }
    if (y.lpNorm<Eigen::Infinity>() > 1e12 || mu > 1e30) {
      res.status = SolveStatus::infeasible;
      return res;
    }
    if (!(mu > 0.0) || merit > 1e4 * best_merit) {
      res.status = SolveStatus::max_iterations;
      return res;
    }

    // NT scaling per block: W Z W = X
    BlockVec w(static_cast<size_t>(nb));
    BlockVec zinv(static_cast<size_t>(nb));
    for (size_t b = 0; b < w.size(); ++b) {
      MatrixXd zr, zir;
      psd_sqrt(z[b], zr, zir);
      MatrixXd t = zr * x[b] * zr;
      MatrixXd tr, tir;
      psd_sqrt(symmetrized(t), tr, tir);
      w[b] = symmetrized(zir * tr * zir);
      zinv[b] = symmetrized(zir * zir);
    }

    // Schur complement M_ij = sum_b <W A_i W, A_j>
    std::vector<BlockVec> waw(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      waw[static_cast<size_t>(i)].resize(static_cast<size_t>(nb));
      for (const auto& [b, mat] : sf.a[static_cast<size_t>(i)])
        waw[static_cast<size_t>(i)][static_cast<size_t>(b)] =
            w[static_cast<size_t>(b)] * mat * w[static_cast<size_t>(b)];
    }
    MatrixXd schur = MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double v = 0.0;
        for (const auto& [b, mat] : sf.a[static_cast<size_t>(j)]) {
          const auto& wb = waw[static_cast<size_t>(i)][static_cast<size_t>(b)];
          if (wb.size() != 0) v += wb.cwiseProduct(mat).sum();
        }
        schur(i, j) = v;
      }
    }
    schur = symmetrized(schur);
    Eigen::LDLT<MatrixXd> schur_fac(schur +
                                    1e-13 * schur.trace() / std::max(m, 1) *
                                        MatrixXd::Identity(m, m));

    BlockVec wrdw(static_cast<size_t>(nb));
    for (size_t b = 0; b < wrdw.size(); ++b) wrdw[b] = w[b] * rd[b] * w[b];

    // direction for a given centering target Rc = sigma*mu*Z^{-1} - X
    auto solve_direction = [&](double sigma_mu, VectorXd& dy, BlockVec& dx,
                               BlockVec& dz) {
      BlockVec rc(static_cast<size_t>(nb));
      for (size_t b = 0; b < rc.size(); ++b) rc[b] = sigma_mu * zinv[b] - x[b];
      VectorXd rhs(m);
      for (int i = 0; i < m; ++i) {
        double v = rp[i];
        for (const auto& [b, mat] : sf.a[static_cast<size_t>(i)])
          v -= mat.cwiseProduct(rc[static_cast<size_t>(b)] - wrdw[static_cast<size_t>(b)]).sum();
        rhs[i] = v;
      }
      dy = schur_fac.solve(rhs);
      dz.assign(static_cast<size_t>(nb), MatrixXd());
      dx.assign(static_cast<size_t>(nb), MatrixXd());
      for (int b = 0; b < nb; ++b) {
        dz[static_cast<size_t>(b)] = rd[static_cast<size_t>(b)];
      }
      for (int i = 0; i < m; ++i)
        for (const auto& [b, mat] : sf.a[static_cast<size_t>(i)])
          dz[static_cast<size_t>(b)] -= dy[i] * mat;
      for (int b = 0; b < nb; ++b) {
        const auto ub = static_cast<size_t>(b);
        dx[ub] = symmetrized(rc[ub] - w[ub] * dz[ub] * w[ub]);
        dz[ub] = symmetrized(dz[ub]);
      }
    };

    // predictor
    VectorXd dy_a;
    BlockVec dx_a, dz_a;
    solve_direction(0.0, dy_a, dx_a, dz_a);
    double ap = 1.0, ad = 1.0;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(x[static_cast<size_t>(b)], dx_a[static_cast<size_t>(b)]));
      ad = std::min(ad, max_step(z[static_cast<size_t>(b)], dz_a[static_cast<size_t>(b)]));
    }
    double mu_aff = 0.0;
    for (size_t b = 0; b < x.size(); ++b)
      mu_aff += (x[b] + 0.98 * ap * dx_a[b]).cwiseProduct(z[b] + 0.98 * ad * dz_a[b]).sum();
    mu_aff /= static_cast<double>(dim);
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
    sigma = std::clamp(sigma, 1e-8, 1.0);

    // corrector
    VectorXd dy;
    BlockVec dx, dz;
    solve_direction(sigma * mu, dy, dx, dz);
    ap = 1.0;
    ad = 1.0;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(x[static_cast<size_t>(b)], dx[static_cast<size_t>(b)]));
      ad = std::min(ad, max_step(z[static_cast<size_t>(b)], dz[static_cast<size_t>(b)]));
    }
    ap = std::min(1.0, 0.98 * ap);
    ad = std::min(1.0, 0.98 * ad);

    if (ap < 1e-10 && ad < 1e-10) {
      if (++stalls >= 3) {
        res.status = (pinf > 100 * tol || dinf > 100 * tol) ? SolveStatus::infeasible
                                                            : SolveStatus::max_iterations;
        return res;
      }
    } else {
      stalls = 0;
    }

    for (size_t b = 0; b < x.size(); ++b) {
      x[b] = symmetrized(x[b] + ap * dx[b]);
      z[b] = symmetrized(z[b] + ad * dz[b]);
    }
    y += ad * dy;
  }

  res.iterations = max_iter;
  res.status = SolveStatus::max_iterations;
  return res;
}

}  // namespace

LinExpr& LinExpr::add_block(int block, const Eigen::MatrixXd& coeff) {
  auto it = block_coeffs.find(block);
  if (it == block_coeffs.end())
    block_coeffs.emplace(block, coeff);
  else
    it->second += coeff;
  return *this;
}

LinExpr& LinExpr::add_scalar(int scalar, double coeff) {
  scalar_coeffs[scalar] += coeff;
  return *this;
}

int SdpProblem::add_block(int side) {
  if (side < 1) throw std::invalid_argument("SdpProblem: block side must be >= 1");
  block_sides_.push_back(side);
  return static_cast<int>(block_sides_.size()) - 1;
}

int SdpProblem::add_scalar() { return n_scalars_++; }

void SdpProblem::add_equality(const LinExpr& e, double rhs) {
  constraints_.push_back({e, rhs, true});
}

void SdpProblem::add_upper_bound(const LinExpr& e, double rhs) {
  constraints_.push_back({e, rhs, false});
}

void SdpProblem::add_lmi(const std::vector<std::vector<LinExpr>>& entries) {
  lmis_.push_back(entries);
}

void SdpProblem::maximize(const LinExpr& objective) { objective_ = objective; }

struct Lowering {
  static StdForm lower(const SdpProblem& p) {
    StdForm sf;
    sf.n_user_blocks = static_cast<int>(p.block_sides_.size());
    sf.n_scalars = p.n_scalars_;
    sf.sides = p.block_sides_;
    for (int i = 0; i < p.n_scalars_; ++i) sf.sides.push_back(1);

    auto expr_to_terms = [&](const LinExpr& e) {
      Terms t;
      for (const auto& [b, mat] : e.block_coeffs) {
        if (b < 0 || b >= sf.n_user_blocks)
          throw std::invalid_argument("SdpProblem: bad block index in expression");
        if (mat.rows() != sf.sides[static_cast<size_t>(b)] ||
            mat.cols() != sf.sides[static_cast<size_t>(b)])
          throw std::invalid_argument("SdpProblem: coefficient dimension mismatch");
        t.emplace_back(b, symmetrized(mat));
      }
      for (const auto& [s, c] : e.scalar_coeffs) {
        if (s < 0 || s >= sf.n_scalars)
          throw std::invalid_argument("SdpProblem: bad scalar index in expression");
        MatrixXd one(1, 1);
        one(0, 0) = c;
        t.emplace_back(sf.n_user_blocks + s, one);
      }
      return t;
    };

    std::vector<double> rhs;
    for (const auto& con : p.constraints_) {
      Terms t = expr_to_terms(con.expr);
      if (!con.is_equality) {
        const int slack = static_cast<int>(sf.sides.size());
        sf.sides.push_back(1);
        MatrixXd one(1, 1);
        one(0, 0) = 1.0;
        t.emplace_back(slack, one);
      }
      sf.a.push_back(std::move(t));
      rhs.push_back(con.rhs - con.expr.constant);
    }

    for (const auto& lmi : p.lmis_) {
      const int side = static_cast<int>(lmi.size());
      if (side < 1) throw std::invalid_argument("SdpProblem: empty LMI");
      const int sblock = static_cast<int>(sf.sides.size());
      sf.sides.push_back(side);
      for (int i = 0; i < side; ++i) {
        if (static_cast<int>(lmi[static_cast<size_t>(i)].size()) < side - i)
          throw std::invalid_argument("SdpProblem: LMI upper triangle incomplete");
        for (int j = i; j < side; ++j) {
          const LinExpr& e = lmi[static_cast<size_t>(i)][static_cast<size_t>(j - i)];
          Terms t = expr_to_terms(e);
          MatrixXd pick = MatrixXd::Zero(side, side);
          if (i == j) {
            pick(i, i) = -1.0;
          } else {
            pick(i, j) = -0.5;
            pick(j, i) = -0.5;
          }
          t.emplace_back(sblock, pick);
          sf.a.push_back(std::move(t));
          rhs.push_back(-e.constant);
        }
      }
    }

    sf.b = Eigen::Map<VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));

    // maximize obj -> minimize -obj
    sf.negated = true;
    sf.cost = expr_to_terms(p.objective_);
    for (auto& [b, mat] : sf.cost) mat = -mat;
    sf.cost_shift = p.objective_.constant;
    return sf;
  }
};

SdpSolution solve_sdp(const SdpProblem& p, double tol, int max_iter) {
  if (!(tol > 0.0 && tol <= 1e-2))
    throw std::invalid_argument("solve_sdp: tol must lie in (0, 1e-2]");
  StdForm sf = Lowering::lower(p);
  IpmResult r = solve_standard(sf, tol, max_iter);

  SdpSolution sol;
  sol.status = r.status;
  sol.iterations = r.iterations;
  sol.gap = r.gap;
  sol.objective = -r.pobj + sf.cost_shift;
  if (!r.x.empty()) {
    sol.blocks.assign(r.x.begin(), r.x.begin() + sf.n_user_blocks);
    for (int s = 0; s < sf.n_scalars; ++s)
      sol.scalars.push_back(r.x[static_cast<size_t>(sf.n_user_blocks + s)](0, 0));
  }
  return sol;
}

Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& h) {
  const Eigen::Index k = h.rows();
  MatrixXd out(2 * k, 2 * k);
  out.topLeftCorner(k, k) = h.real();
  out.bottomRightCorner(k, k) = h.real();
  out.topRightCorner(k, k) = -h.imag();
  out.bottomLeftCorner(k, k) = h.imag();
  return out;
}

Eigen::MatrixXcd unembed_hermitian(const Eigen::MatrixXd& x) {
  const Eigen::Index k = x.rows() / 2;
  MatrixXcd w(k, k);
  MatrixXd re = 0.5 * (x.topLeftCorner(k, k) + x.bottomRightCorner(k, k));
  MatrixXd q = x.topRightCorner(k, k);
  MatrixXd im = 0.5 * (q.transpose() - q);
  w.real() = 0.5 * (re + re.transpose());
  w.imag() = 0.5 * (im - im.transpose());
  return w;
}

Eigen::MatrixXd quad_form_coeff(const Eigen::VectorXcd& f) {
  return 0.5 * embed_hermitian(f * f.adjoint());
}

Eigen::VectorXcd extract_beamformer(
    const Eigen::MatrixXcd& w,
    const std::function<double(const Eigen::VectorXcd&)>& score, int trials,
    std::uint64_t seed) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(w);
  const VectorXd evals = es.eigenvalues();
  const double wnorm = w.norm();
  if (evals.minCoeff() < -1e-8 * (1.0 + wnorm))
    throw std::invalid_argument("extract_beamformer: matrix is not PSD");
  const double tr = std::max(evals.sum(), 0.0);
  const Eigen::Index k = w.rows();
  if (tr <= 0.0) return VectorXcd::Unit(k, 0);

  const Eigen::Index top = k - 1;  // eigenvalues ascending
  if (evals[top] / tr >= 1.0 - 1e-6) {
    VectorXcd v = es.eigenvectors().col(top);
    return v / v.norm();
  }

  VectorXcd best;
  double best_score = -std::numeric_limits<double>::infinity();
  auto consider = [&](const VectorXcd& cand) {
    const double nrm = cand.norm();
    if (nrm <= 0.0) return;
    VectorXcd u = cand / nrm;
    const double s = score(u);
    if (s > best_score) {
      best_score = s;
      best = u;
    }
  };

  for (Eigen::Index i = 0; i < k; ++i)
    if (evals[i] > 0.0) consider(es.eigenvectors().col(i));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd sqrt_evals = evals.cwiseMax(0.0).cwiseSqrt();
  for (int t = 0; t < trials; ++t) {
    VectorXcd e(k);
    for (Eigen::Index i = 0; i < k; ++i)
      e[i] = std::complex<double>(gauss(rng), gauss(rng)) * (0.5 * std::sqrt(2.0));
    consider(es.eigenvectors() * sqrt_evals.asDiagonal() * e);
  }
  return best;
}

namespace {

double min_gain(const std::vector<VectorXcd>& fs, const VectorXcd& w) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : fs) m = std::min(m, std::norm(f.dot(w)));
  return m;
}

// Smoothed-min ascent on the unit sphere; sharpens the soft-min until the
// iterate pins the true max-min point.
VectorXcd polish_min_gain(const std::vector<VectorXcd>& fs, VectorXcd w) {
  w.normalize();
  double scale = 0.0;
  for (const auto& f : fs) scale = std::max(scale, f.squaredNorm());
  if (scale <= 0.0) return w;

  for (double tau = 20.0 / scale; tau <= 2e7 / scale; tau *= 5.0) {
    double step = 0.5 / (tau * scale * scale + scale);
    for (int it = 0; it < 300; ++it) {
      // soft-min weights and gradient of sum_n wgt_n |f_n^H w|^2
      double qmin = min_gain(fs, w);
      double wsum = 0.0;
      VectorXcd grad = VectorXcd::Zero(w.size());
      for (const auto& f : fs) {
        const std::complex<double> inner = f.dot(w);
        const double q = std::norm(inner);
        const double wgt = std::exp(-tau * (q - qmin));
        wsum += wgt;
        grad += wgt * inner * f;
      }
      grad /= wsum;
      VectorXcd next = w + step * grad;
      next.normalize();
      if ((next - w).norm() < 1e-14) break;
      if (min_gain(fs, next) >= qmin) {
        w = next;
        step *= 1.2;
      } else {
        step *= 0.5;
        if (step < 1e-18) break;
      }
    }
  }
  return w;
}

}  // namespace

MinGainResult solve_min_gain_beamforming(const std::vector<Eigen::VectorXcd>& vectors) {
  if (vectors.empty())
    throw std::invalid_argument("solve_min_gain_beamforming: empty vector list");
  const Eigen::Index k = vectors.front().size();
  for (const auto& f : vectors)
    if (f.size() != k)
      throw std::invalid_argument("solve_min_gain_beamforming: mixed dimensions");

  SdpProblem p;
  const int wb = p.add_block(static_cast<int>(2 * k));
  const int t = p.add_scalar();
  for (const auto& f : vectors) {
    LinExpr e;  // t - f^H W f <= 0
    e.add_scalar(t, 1.0);
    e.add_block(wb, -quad_form_coeff(f));
    p.add_upper_bound(e, 0.0);
  }
  LinExpr trace_cap;  // complex trace(W) <= 1
  trace_cap.add_block(wb, 0.5 * MatrixXd::Identity(2 * k, 2 * k));
  p.add_upper_bound(trace_cap, 1.0);
  LinExpr obj;
  obj.add_scalar(t, 1.0);
  p.maximize(obj);

  SdpSolution sol = solve_sdp(p);
  MinGainResult out;
  out.status = sol.status;
  if (sol.blocks.empty()) {
    out.w1 = VectorXcd::Unit(k, 0);
    out.s_min2 = min_gain(vectors, out.w1);
    return out;
  }
  MatrixXcd w_mat = unembed_hermitian(sol.blocks[0]);
  auto score = [&](const VectorXcd& v) { return min_gain(vectors, v); };
  VectorXcd w = extract_beamformer(w_mat, score, 200, 0x5eed5eedULL);
  w = polish_min_gain(vectors, w);
  out.w1 = w;
  out.s_min2 = min_gain(vectors, w);
  return out;
}

}  // namespace hrelay::conic
