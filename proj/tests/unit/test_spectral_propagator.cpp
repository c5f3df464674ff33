#include "pauli_scft/fields.hpp"
#include "pauli_scft/scf_engine.hpp"
#include "pauli_scft/spectral_propagator.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace pscft;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;

// direct quadrature of int f_m w f_n 4 pi r^2 dr
Eigen::MatrixXd direct_potential_matrix(const Discretization& d, const Eigen::VectorXd& w) {
  return d.table * (d.grid.volume_weights.cwiseProduct(w)).asDiagonal() * d.table.transpose();
}

Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
  }
  return 0.5 * (a + a.transpose());
}

double lowest_hydrogenic(int z) {
  const double radius = 15.0;
  const Discretization d(radius, default_modes(z, radius));
  const ModeMatrix h = assemble(d.basis, d.grid, external_field(z, d.grid));
  return lowest_eigenpairs(h, 1).values[0];
}
}  // namespace

TEST_CASE("assemble: free and constant fields", "[spectral_propagator]") {
  const Discretization d(7.0, 40);
  const ModeMatrix h0 = assemble(d.basis, d.grid, Eigen::VectorXd::Zero(d.grid.size()));
  Eigen::VectorXd kin(40);
  for (int n = 0; n < 40; ++n) kin[n] = 0.5 * d.basis.wavenumber(n) * d.basis.wavenumber(n);
  CHECK((h0.h - Eigen::MatrixXd(kin.asDiagonal())).cwiseAbs().maxCoeff() < 1e-14);

  const ModeMatrix hc = assemble(d.basis, d.grid, Eigen::VectorXd::Constant(d.grid.size(), -0.75));
  const Eigen::MatrixXd want = Eigen::MatrixXd(kin.asDiagonal()) - 0.75 * Eigen::MatrixXd::Identity(40, 40);
  CHECK((hc.h - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("cosine-moment assembly matches direct quadrature", "[spectral_propagator]") {
  const Discretization d(10.0, 120);
  const ModeAssembler assembler(d.basis, d.grid);
  const Eigen::ArrayXd r = d.grid.nodes.array();
  const std::vector<Eigen::VectorXd> fields{(-r).exp().matrix(), (-3.0 / r).matrix(),
                                            (r.square() * (-0.3 * r).exp()).matrix(),
                                            (2.0 / r * (-r).exp() + 5.7 * (-4.0 * r).exp()).matrix()};
  for (const auto& w : fields) {
    const Eigen::MatrixXd fast = assembler.potential_matrix(w);
    const Eigen::MatrixXd slow = direct_potential_matrix(d, w);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, slow.cwiseAbs().maxCoeff()));
    CHECK((fast - fast.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  Eigen::VectorXd bad = fields[0];
  bad[3] = std::nan("");
  CHECK_THROWS_AS(assembler.potential_matrix(bad), std::invalid_argument);
  CHECK_THROWS_AS(assembler.potential_matrix(Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST_CASE("hydrogenic lowest eigenvalue at the default discretization", "[spectral_propagator]") {
  for (int z : {1, 2, 3}) {
    INFO("Z=" << z);
    CHECK_THAT(lowest_hydrogenic(z), WithinAbs(-0.5 * z * z, 1e-3));
  }
}

TEST_CASE("diagonalize: small exact cases", "[spectral_propagator]") {
  ModeMatrix two{Eigen::MatrixXd(2, 2)};
  two.h << 2.0, 1.0, 1.0, 2.0;
  const EigenSystem e2 = diagonalize(two);
  CHECK_THAT(e2.values[0], WithinAbs(1.0, 1e-14));
  CHECK_THAT(e2.values[1], WithinAbs(3.0, 1e-14));
  CHECK_THAT(std::abs(e2.vectors(0, 0)), WithinAbs(std::sqrt(0.5), 1e-14));

  ModeMatrix diag{Eigen::MatrixXd(Eigen::Vector3d(3.0, -1.0, 2.0).asDiagonal())};
  const EigenSystem e3 = diagonalize(diag);
  CHECK(e3.values.isApprox(Eigen::Vector3d(-1.0, 2.0, 3.0)));
}

TEST_CASE("diagonalize: residuals, orthonormality and reconstruction", "[spectral_propagator]") {
  for (int n : {50, 200, 600}) {
    Eigen::MatrixXd a = random_symmetric(n, 7u + static_cast<unsigned>(n));
    for (int i = 0; i < n; ++i) a(i, i) += 0.02 * i * i;  // kinetic-like spread
    const ModeMatrix m{a};
    const EigenSystem full = diagonalize(m);
    INFO("n=" << n);
    const Eigen::MatrixXd gram = full.vectors.transpose() * full.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
    for (int p = 0; p < n; ++p) {
      const double res = (a * full.vectors.col(p) - full.values[p] * full.vectors.col(p)).norm();
      REQUIRE(res < 1e-9 * std::max(1.0, std::abs(full.values[p])));
    }
    const Eigen::MatrixXd back = full.vectors * full.values.asDiagonal() * full.vectors.transpose();
    CHECK((back - a).cwiseAbs().maxCoeff() < 1e-9 * a.cwiseAbs().maxCoeff());
    for (int p = 1; p < n; ++p) REQUIRE(full.values[p] >= full.values[p - 1]);

    const EigenSystem part = lowest_eigenpairs(m, 12);
    REQUIRE(part.size() == 12);
    CHECK((part.values - full.values.head(12)).cwiseAbs().maxCoeff() < 1e-10 * full.values.cwiseAbs().maxCoeff());
    const Eigen::MatrixXd pg = part.vectors.transpose() * part.vectors;
    CHECK((pg - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("diagonalize rejects bad matrices", "[spectral_propagator]") {
  ModeMatrix asym{Eigen::MatrixXd::Identity(3, 3)};
  asym.h(0, 1) = 1e-3;
  CHECK_THROWS_AS(diagonalize(asym), std::invalid_argument);
  ModeMatrix nonfinite{Eigen::MatrixXd::Identity(3, 3)};
  nonfinite.h(2, 2) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(diagonalize(nonfinite), std::invalid_argument);
  CHECK_THROWS_AS(diagonalize(ModeMatrix{}), std::invalid_argument);
}

TEST_CASE("thermal eigenpairs cover the Boltzmann window", "[spectral_propagator]") {
  const Discretization d(15.0, 144);
  const ModeMatrix h = assemble(d.basis, d.grid, external_field(1, d.grid));
  const EigenSystem full = diagonalize(h);
  for (double beta : {0.5, 5.0, 80.0}) {
    int hint = 2;
    const EigenSystem e = thermal_eigenpairs(h, beta, hint);
    INFO("beta=" << beta);
    const bool covered = e.size() == 144 || beta * (e.values[e.size() - 1] - e.values[0]) > 50.0;
    CHECK(covered);
    CHECK((e.values - full.values.head(e.size())).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(hint >= 1);
  }
  int hint = 4;
  CHECK_THROWS_AS(thermal_eigenpairs(h, 0.0, hint), std::invalid_argument);
}

TEST_CASE("group solution: normalization and positivity", "[spectral_propagator][property]") {
  const Discretization d(15.0, 144);
  const ModeMatrix h = assemble(d.basis, d.grid, external_field(1, d.grid));
  for (double beta : {1.0, 5.0, 20.0, 80.0}) {
    for (int occupation : {1, 2, 8}) {
      int hint = 8;
      const GroupSolution s = group_solution(thermal_eigenpairs(h, beta, hint), beta, occupation, d);
      INFO("beta=" << beta << " N=" << occupation);
      CHECK_THAT(integrate(d.grid, s.density), WithinRel(static_cast<double>(occupation), 1e-8));
      CHECK(s.density.minCoeff() >= -1e-12);
      CHECK_THAT(s.weights.sum(), WithinRel(1.0, 1e-14));
    }
  }
}

TEST_CASE("group solution: zero-temperature limit", "[spectral_propagator]") {
  const Discretization d(15.0, 144);
  const ModeMatrix h = assemble(d.basis, d.grid, external_field(1, d.grid));
  int hint = 8;
  const GroupSolution s40 = group_solution(thermal_eigenpairs(h, 40.0, hint), 40.0, 1, d);
  const GroupSolution s80 = group_solution(thermal_eigenpairs(h, 80.0, hint), 80.0, 1, d);
  const double l2 = std::sqrt(integrate(d.grid, (s40.density - s80.density).cwiseAbs2()));
  CHECK(l2 < 1e-6);
  // ground state alone
  const EigenSystem e = lowest_eigenpairs(h, 1);
  const Eigen::VectorXd psi = d.eval(e.vectors.col(0));
  CHECK((s80.density - psi.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(s80.excited_weight < 1e-12);
  CHECK_THAT(s80.lambda_min, WithinAbs(-0.5, 1e-3));
  CHECK_THAT(s80.log_partition, WithinRel(-80.0 * s80.lambda_min, 1e-12));
}

TEST_CASE("group solution: free contour at high temperature", "[spectral_propagator]") {
  // with s-wave modes only, maximum entropy spreads 4 pi r^2 n evenly in r
  const double radius = 5.0;
  const Discretization d(radius, 400);
  const ModeMatrix h = assemble(d.basis, d.grid, Eigen::VectorXd::Zero(d.grid.size()));
  const double beta = 1e-4;
  int hint = 400;
  const GroupSolution s = group_solution(thermal_eigenpairs(h, beta, hint), beta, 4, d);
  const Eigen::ArrayXd r = d.grid.nodes.array();
  const Eigen::ArrayXd radial = 4.0 * pi * r.square() * s.density.array();
  for (Eigen::Index j = 0; j < d.grid.size(); ++j) {
    if (r[j] > 1.0 && r[j] < 4.0) REQUIRE_THAT(radial[j], WithinRel(4.0 / radius, 0.02));
  }
  CHECK_THAT(integrate(d.grid, s.density), WithinRel(4.0, 1e-8));
}

TEST_CASE("entropic terms are invariant under constant field shifts", "[spectral_propagator][property]") {
  const Discretization d(15.0, 200);
  const Eigen::VectorXd w = external_field(2, d.grid);
  for (double beta : {5.0, 80.0}) {
    int hint = 8;
    const GroupSolution a = group_solution(thermal_eigenpairs(assemble(d.basis, d.grid, w), beta, hint), beta, 2, d);
    for (double shift : {-3.0, 0.7, 25.0}) {
      const Eigen::VectorXd ws = (w.array() + shift).matrix();
      const GroupSolution b =
          group_solution(thermal_eigenpairs(assemble(d.basis, d.grid, ws), beta, hint), beta, 2, d);
      INFO("beta=" << beta << " shift=" << shift);
      CHECK(std::abs(entropic_terms(a, w, d.grid).sum() - entropic_terms(b, ws, d.grid).sum()) < 1e-9);
      CHECK((a.density - b.density).cwiseAbs().maxCoeff() < 1e-9);
      CHECK_THAT(b.log_partition, WithinAbs(a.log_partition - beta * shift, 1e-8));
    }
  }
}

TEST_CASE("group solution argument checks", "[spectral_propagator]") {
  const Discretization d(5.0, 10);
  const EigenSystem e = diagonalize(assemble(d.basis, d.grid, Eigen::VectorXd::Zero(d.grid.size())));
  CHECK_THROWS_AS(group_solution(e, 0.0, 1, d), std::invalid_argument);
  CHECK_THROWS_AS(group_solution(e, 1.0, 0, d), std::invalid_argument);
  CHECK_THROWS_AS(group_solution(EigenSystem{}, 1.0, 1, d), std::invalid_argument);
  const Discretization other(5.0, 12);
  CHECK_THROWS_AS(group_solution(e, 1.0, 1, other), std::invalid_argument);
}
