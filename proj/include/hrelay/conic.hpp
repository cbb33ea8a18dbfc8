#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace hrelay::conic {

enum class SolveStatus { optimal, max_iterations, infeasible };

/// Affine expression over PSD matrix blocks and nonnegative scalar variables:
///   sum_b <coeff_b, X_b> + sum_s c_s * x_s + constant
/// Matrix coefficients are symmetrized on use; <A,X> = trace(A X).
struct LinExpr {
  std::map<int, Eigen::MatrixXd> block_coeffs;
  std::map<int, double> scalar_coeffs;
  double constant = 0.0;

  LinExpr& add_block(int block, const Eigen::MatrixXd& coeff);
  LinExpr& add_scalar(int scalar, double coeff);
};

/// Small dense SDP in the form the beamforming reformulations produce:
/// PSD matrix blocks, nonnegative scalars, linear equalities/upper bounds,
/// and affine LMI constraints. Inequalities and LMIs are lowered to
/// standard form with slack blocks before the interior-point solve.
class SdpProblem {
 public:
  int add_block(int side);
  int add_scalar();

  void add_equality(const LinExpr& e, double rhs);
  void add_upper_bound(const LinExpr& e, double rhs);  // e <= rhs
  // entries[i][j] for i<=j of a symmetric affine matrix constrained PSD.
  void add_lmi(const std::vector<std::vector<LinExpr>>& entries);

  void maximize(const LinExpr& objective);

  int blocks() const { return static_cast<int>(block_sides_.size()); }
  int scalars() const { return n_scalars_; }

 private:
  friend struct Lowering;
  std::vector<int> block_sides_;
  int n_scalars_ = 0;
  struct Constraint {
    LinExpr expr;
    double rhs;
    bool is_equality;
  };
  std::vector<Constraint> constraints_;
  std::vector<std::vector<std::vector<LinExpr>>> lmis_;
  LinExpr objective_;
};

struct SdpSolution {
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<double> scalars;
  double objective = 0.0;
  double gap = 0.0;  // relative duality gap at exit
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iterations;
};

SdpSolution solve_sdp(const SdpProblem& p, double tol = 1e-8, int max_iter = 200);

// ---- complex <-> real-symmetric embedding -------------------------------

/// [[Re H, -Im H], [Im H, Re H]] for Hermitian H.
Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& h);

/// Inverse map for a general symmetric 2K x 2K matrix; averages the two
/// copies so constraint values written with embedded coefficients carry over.
Eigen::MatrixXcd unembed_hermitian(const Eigen::MatrixXd& x);

/// Coefficient A with <A, X> = f^H W f when X is the embedding of W.
Eigen::MatrixXd quad_form_coeff(const Eigen::VectorXcd& f);

// ---- beamformer recovery -------------------------------------------------

/// Unit-norm vector from a PSD matrix solution: top eigenvector when W is
/// numerically rank one, otherwise the best of `trials` Gaussian-randomized
/// candidates (plus the eigenvectors) under `score`.
Eigen::VectorXcd extract_beamformer(
    const Eigen::MatrixXcd& w,
    const std::function<double(const Eigen::VectorXcd&)>& score, int trials,
    std::uint64_t seed = 0);

struct MinGainResult {
  Eigen::VectorXcd w1;
  double s_min2 = 0.0;  // realized min_n |f_n^H w1|^2, re-evaluated
  SolveStatus status = SolveStatus::optimal;
};

/// max_{||w||<=1} min_n |f_n^H w|^2 via the SDP relaxation, randomized
/// extraction, and a smoothed-min polish on the unit sphere.
MinGainResult solve_min_gain_beamforming(const std::vector<Eigen::VectorXcd>& vectors);

}  // namespace hrelay::conic
