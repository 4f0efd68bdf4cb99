#pragma once

#include "effrank/panel.hpp"
#include "effrank/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace effrank {

enum class DgpKind { Rrsra, Irra };

/// Ground truth for one simulation design. Coefficients are drawn once per
/// (design, seed); replications reuse them and redraw only the noise.
struct SimScenario {
  DgpKind kind = DgpKind::Rrsra;
  Eigen::MatrixXd B;   // N x r
  Eigen::MatrixXd Bc;  // N x (N - r)
  Eigen::MatrixXd A;   // p x (N - r)
  std::vector<Eigen::MatrixXd> Phis;  // d blocks, p x p
  int r = 0, p = 0, N = 0, T = 0, d = 0;
  int rank_A = 0;
  std::vector<std::pair<int, int>> support_Phi;  // RRSRA design
  std::vector<int> ranks_Phi;                    // IRRA design
  double stationarity_scale = 1.0;               // joint rescale applied to the IRRA blocks
  std::uint64_t seed = 0;

  /// [Phi_1, ..., Phi_d].
  Eigen::MatrixXd stacked_phi() const;
};

struct SimSample {
  Panel x;            // T x N
  Panel y;            // T x p
  Eigen::MatrixXd f;  // r x T factor paths
  Eigen::MatrixXd z;  // (N - r) x T, z_t = Bc' x_t
};

inline constexpr int kSimRankA = 5;
inline constexpr int kSimPhiNonzeros = 20;
inline constexpr double kSimPhiNorm = 0.9;
inline constexpr int kSimIrraPhiRank = 3;
inline constexpr int kSimIrraLags = 2;
inline constexpr double kSimCompanionRadius = 0.95;

/// Haar-distributed orthogonal matrix: QR of an iid standard normal matrix
/// with R's diagonal made positive.
Eigen::MatrixXd random_orthogonal(int n, Rng& rng);

/// A = U D V' with kSimRankA singular values from U[0.1, 1); Phi with
/// kSimPhiNonzeros entries on (-1, -0.1] u [0.1, 1), scaled to spectral norm 0.9.
SimScenario make_scenario_rrsra(int p, int N, int r, int T, std::uint64_t seed);

/// Same A; two rank-3 lag blocks built like A, jointly shrunk by the largest
/// c <= 1 that keeps the companion spectral radius at most 0.95.
SimScenario make_scenario_irra(int p, int N, int r, int T, std::uint64_t seed);

/// iid standard normal innovations, column t is time t+1.
struct Innovations {
  Eigen::MatrixXd u;    // r x T
  Eigen::MatrixXd eps;  // N x T
  Eigen::MatrixXd e;    // p x T
};

/// Draws u_t, eps_t, e_t for t = 1..T in that order.
Innovations draw_innovations(const SimScenario& scenario, Rng& rng);

/// Runs the recursions on given innovations.
SimSample generate(const SimScenario& scenario, const Innovations& noise);

/// f_t = f_{t-1} + sqrt(N) u_t (f_0 = 0), x_t = B f_t + eps_t, z_t = Bc' x_t,
/// y_t = A z_{t-1} + sum_i Phi_i y_{t-i} + e_t with zero pre-sample values.
SimSample generate(const SimScenario& scenario, Rng& rng);

/// The noise stream for a replication: stream 0 is reserved for the coefficients.
inline Rng replication_rng(std::uint64_t seed, std::uint64_t replication) {
  return Rng(seed, replication + 1);
}

}  // namespace effrank
