#include "effrank/simulate.hpp"

#include "effrank/error.hpp"
#include "effrank/linalg.hpp"

#include <Eigen/QR>

#include <cmath>
#include <algorithm>
#include <numeric>
#include <string>

namespace effrank {

Eigen::MatrixXd SimScenario::stacked_phi() const {
  Eigen::MatrixXd out(p, p * static_cast<Eigen::Index>(Phis.size()));
  for (std::size_t i = 0; i < Phis.size(); ++i)
    out.middleCols(static_cast<Eigen::Index>(i) * p, p) = Phis[i];
  return out;
}

Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("random_orthogonal needs n >= 1");
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

namespace {

void check_sizes(int p, int N, int r, int T, int rank, const char* what) {
  if (p < 1 || N < 1 || T < 2 || r < 0) throw InvalidArgument(std::string(what) + ": sizes must be positive");
  if (r >= N) throw InvalidArgument(std::string(what) + ": need r < N");
  if (rank > std::min(p, N - r))
    throw InvalidArgument(std::string(what) + ": rank " + std::to_string(rank) +
                          " exceeds min(p, N - r)");
}

/// U D V' with `rank` singular values iid U[0.1, 1) on the leading diagonal.
Eigen::MatrixXd low_rank(int rows, int cols, int rank, Rng& rng) {
  const Eigen::MatrixXd U = random_orthogonal(rows, rng);
  const Eigen::MatrixXd V = random_orthogonal(cols, rng);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows, cols);
  for (int i = 0; i < rank; ++i) D(i, i) = rng.uniform(0.1, 1.0);
  return U * D * V.transpose();
}

void draw_loadings(SimScenario& s, Rng& rng) {
  const Eigen::MatrixXd Q = random_orthogonal(s.N, rng);
  s.B = Q.leftCols(s.r);
  s.Bc = Q.rightCols(s.N - s.r);
}

}  // namespace

SimScenario make_scenario_rrsra(int p, int N, int r, int T, std::uint64_t seed) {
  check_sizes(p, N, r, T, kSimRankA, "make_scenario_rrsra");
  if (kSimPhiNonzeros > p * p) throw InvalidArgument("make_scenario_rrsra: need p^2 >= 20");

  SimScenario s;
  s.kind = DgpKind::Rrsra;
  s.p = p, s.N = N, s.r = r, s.T = T, s.d = 1, s.seed = seed;
  s.rank_A = kSimRankA;
  Rng rng(seed, 0);
  draw_loadings(s, rng);
  s.A = low_rank(p, N - r, kSimRankA, rng);

  // Partial Fisher-Yates over the p*p cells picks distinct locations.
  std::vector<int> cells(static_cast<std::size_t>(p * p));
  std::iota(cells.begin(), cells.end(), 0);
  for (int i = 0; i < kSimPhiNonzeros; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(p * p - i)));
    std::swap(cells[i], cells[j]);
  }
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < kSimPhiNonzeros; ++i) {
    const double magnitude = rng.uniform(0.1, 1.0);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    phi(cells[i] / p, cells[i] % p) = sign * magnitude;
  }
  phi *= kSimPhiNorm / linalg::spectral_norm(phi);
  for (int i = 0; i < kSimPhiNonzeros; ++i) s.support_Phi.emplace_back(cells[i] / p, cells[i] % p);
  std::sort(s.support_Phi.begin(), s.support_Phi.end());
  s.Phis = {phi};
  return s;
}

SimScenario make_scenario_irra(int p, int N, int r, int T, std::uint64_t seed) {
  check_sizes(p, N, r, T, kSimRankA, "make_scenario_irra");
  if (p < kSimIrraPhiRank) throw InvalidArgument("make_scenario_irra: need p >= 3");

  SimScenario s;
  s.kind = DgpKind::Irra;
  s.p = p, s.N = N, s.r = r, s.T = T, s.d = kSimIrraLags, s.seed = seed;
  s.rank_A = kSimRankA;
  Rng rng(seed, 0);
  draw_loadings(s, rng);
  s.A = low_rank(p, N - r, kSimRankA, rng);
  for (int i = 0; i < kSimIrraLags; ++i) {
    s.Phis.push_back(low_rank(p, p, kSimIrraPhiRank, rng));
    s.ranks_Phi.push_back(kSimIrraPhiRank);
  }

  auto radius_at = [&](double c) {
    std::vector<Eigen::MatrixXd> scaled;
    for (const auto& m : s.Phis) scaled.push_back(c * m);
    return linalg::companion_spectral_radius(scaled);
  };
  double c = 1.0;
  if (radius_at(1.0) > kSimCompanionRadius) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (radius_at(mid) <= kSimCompanionRadius ? lo : hi) = mid;
    }
    c = lo;
    if (!(c > 0.0) || radius_at(c) > kSimCompanionRadius)
      throw StationarityFailure("cannot rescale lag blocks to a stable VAR");
  }
  for (auto& m : s.Phis) m *= c;
  s.stationarity_scale = c;
  return s;
}

Innovations draw_innovations(const SimScenario& s, Rng& rng) {
  Innovations out{Eigen::MatrixXd(s.r, s.T), Eigen::MatrixXd(s.N, s.T), Eigen::MatrixXd(s.p, s.T)};
  for (int t = 0; t < s.T; ++t) {
    for (int i = 0; i < s.r; ++i) out.u(i, t) = rng.normal();
    for (int i = 0; i < s.N; ++i) out.eps(i, t) = rng.normal();
    for (int i = 0; i < s.p; ++i) out.e(i, t) = rng.normal();
  }
  return out;
}

SimSample generate(const SimScenario& s, const Innovations& noise) {
  const int T = s.T, N = s.N, p = s.p, r = s.r, d = static_cast<int>(s.Phis.size());
  if (noise.u.rows() != r || noise.eps.rows() != N || noise.e.rows() != p || noise.u.cols() != T ||
      noise.eps.cols() != T || noise.e.cols() != T)
    throw InvalidArgument("innovations do not match the scenario dimensions");
  const double factor_scale = std::sqrt(static_cast<double>(N));

  Eigen::MatrixXd f(r, T), x(N, T), y(p, T), z(N - r, T);
  Eigen::VectorXd f_prev = Eigen::VectorXd::Zero(r);
  Eigen::VectorXd z_prev = Eigen::VectorXd::Zero(N - r);
  for (int t = 0; t < T; ++t) {
    f.col(t) = f_prev + factor_scale * noise.u.col(t);
    f_prev = f.col(t);
    x.col(t) = s.B * f.col(t) + noise.eps.col(t);

    Eigen::VectorXd yt = s.A * z_prev + noise.e.col(t);
    for (int i = 1; i <= d && i <= t; ++i) yt += s.Phis[i - 1] * y.col(t - i);
    y.col(t) = yt;
    z.col(t) = s.Bc.transpose() * x.col(t);
    z_prev = z.col(t);
  }
  return SimSample{Panel(x.transpose()), Panel(y.transpose()), std::move(f), std::move(z)};
}

SimSample generate(const SimScenario& s, Rng& rng) { return generate(s, draw_innovations(s, rng)); }

}  // namespace effrank
