#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "fraclap/constants.hpp"
#include "fraclap/error.hpp"
#include "fraclap/operator_matrix.hpp"
#include "fraclap/spectral.hpp"
#include "oracles.hpp"

using namespace fraclap;

namespace {

double sup_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

Field random_field(const Grid& g, unsigned seed, int comps = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(g.node_count() * comps);
  for (double& x : v) x = u(rng);
  return Field(g, comps, v);
}

// C integral over the complement of the box [lo, hi)^2 of |x - y|^{-2-alpha} dy, by
// inclusion-exclusion: four half-planes minus four corner quadrants.
double box_exterior_2d(double x, double y, double lo, double hi, double alpha, double C) {
  using boost::math::tgamma;
  const double B = std::sqrt(std::numbers::pi) * tgamma(0.5 * (1.0 + alpha)) / tgamma(1.0 + 0.5 * alpha);
  auto half = [&](double d) { return B * std::pow(d, -alpha) / alpha; };
  boost::math::quadrature::exp_sinh<double> es;
  auto quadrant = [&](double d1, double d2) {
    return es.integrate(
        [&](double s) {
          return es.integrate([&](double t) { return std::pow(s * s + t * t, -1.0 - 0.5 * alpha); }, d2,
                              std::numeric_limits<double>::infinity());
        },
        d1, std::numeric_limits<double>::infinity());
  };
  const double dl = x - lo, dr = hi - x, db = y - lo, dt = hi - y;
  const double total = half(dl) + half(dr) + half(db) + half(dt) - quadrant(dr, dt) - quadrant(dl, dt) -
                       quadrant(dl, db) - quadrant(dr, db);
  return C * total;
}

}  // namespace

TEST_CASE("spectral operator reproduces the symbol on Fourier modes") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const Grid g(1, std::numbers::pi, 128, Topology::periodic);
    for (int k : {1, 5, 20}) {
      const Field u = sample(g, [k](double x, double) { return std::cos(k * x); });
      const Field Au = apply_spectral(u, alpha);
      const double lambda = std::pow(k, alpha);
      double err = 0.0;
      for (std::size_t i = 0; i < g.node_count(); ++i) err = std::max(err, std::abs(Au(i) - lambda * u(i)));
      CHECK(err / lambda < 1e-12);
    }
  }
  const Grid g2(2, 2.0, 32, Topology::periodic);  // xi = pi m / 2
  const Field u = sample(g2, [](double x, double y) { return std::sin(0.5 * std::numbers::pi * (3 * x - 2 * y)); });
  const double lambda = std::pow(0.5 * std::numbers::pi * std::sqrt(13.0), 1.3);
  const Field Au = apply_spectral(u, 1.3);
  double err = 0.0;
  for (std::size_t i = 0; i < g2.node_count(); ++i) err = std::max(err, std::abs(Au(i) - lambda * u(i)));
  CHECK(err / lambda < 1e-12);
}

TEST_CASE("spectral operator edge cases") {
  const Grid g(1, 1.0, 16, Topology::periodic);
  const Field c(g, 1, std::vector<double>(16, 4.0));
  CHECK(field_norms(apply_spectral(c, 0.7)).sup_norm < 1e-12);
  CHECK_THROWS_AS(apply_spectral(Field(Grid(1, 1.0, 16, Topology::truncated)), 1.0), ValidationError);
  CHECK_THROWS_AS(apply_spectral(c, 2.0), ValidationError);

  const Field v = random_field(g, 3, 2);
  const Field Av = apply_spectral(v, 0.9);
  CHECK(sup_diff(Av.component(1), apply_spectral(v.component(1), 0.9)) < 1e-14);

  RealFft fft(g);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  std::vector<double> back(16);
  const Field r = random_field(g, 4);
  fft.forward(r.values(), spec);
  fft.inverse(spec, back);
  for (int i = 0; i < 16; ++i) CHECK(back[i] == doctest::Approx(r(i)).epsilon(1e-14).scale(1.0));
  CHECK(fft.wavenumber_magnitude()[3] == doctest::Approx(3.0 * std::numbers::pi));
}

TEST_CASE("hand-computed 1-D weights") {
  const Grid g(1, 2.0, 4, Topology::truncated);  // h = 1
  const OperatorMatrix A = build_operator_matrix(g, 1.0);
  const double C = 1.0 / std::numbers::pi;
  // K(1, 1) = -2 zeta(0) = 1, so the self cell adds C / 2 to each nearest neighbour.
  CHECK(A.self_cell_weight() == doctest::Approx(C / 2.0));
  CHECK(A.weight(0, 1) == doctest::Approx(C * 1.5));
  CHECK(A.weight(0, 2) == doctest::Approx(C / 4.0));
  CHECK(A.weight(0, 3) == doctest::Approx(C / 9.0));
  CHECK(A.weight(2, 2) == 0.0);
  // Node 0 at x = -2, box [-2.5, 1.5): exterior distances 0.5 and 3.5, missing left neighbour.
  const double tail0 = C * (1.0 / 0.5 + 1.0 / 3.5) + C / 2.0;
  CHECK(A.tail()[0] == doctest::Approx(tail0));
  CHECK(A.diagonal()[0] == doctest::Approx(tail0 + C * (1.5 + 0.25 + 1.0 / 9.0)));
}

TEST_CASE("quadrature operator structure") {
  for (const Grid& g : {Grid(1, 3.0, 24, Topology::truncated), Grid(1, 3.0, 24, Topology::periodic),
                        Grid(2, 2.0, 10, Topology::truncated), Grid(2, 2.0, 10, Topology::periodic)}) {
    const OperatorMatrix A = build_operator_matrix(g, 0.8);
    const std::size_t N = A.size();
    double worst_symmetry = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        CHECK(A.weight(i, j) >= 0.0);
        worst_symmetry = std::max(worst_symmetry, std::abs(A.weight(i, j) - A.weight(j, i)));
        row += A.weight(i, j);
      }
      CHECK(A.diagonal()[i] == doctest::Approx(row + A.tail()[i]).epsilon(1e-12));
      CHECK(A.tail()[i] >= 0.0);
    }
    CHECK(worst_symmetry == 0.0);

    const Field u = random_field(g, 11);
    const Eigen::MatrixXd M = A.dense();
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(u.values().data(), N);
    const Eigen::VectorXd y = M * x;
    const Field Au = A.apply(u);
    for (std::size_t i = 0; i < N; ++i) {
      CHECK(Au(i) == doctest::Approx(y[i]).epsilon(1e-12).scale(1.0));
      CHECK(A.apply_at(u, i) == doctest::Approx(Au(i)).epsilon(1e-12).scale(1.0));
    }
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("truncated 2-D row sums match direct sums") {
  const Grid g(2, 3.0, 14, Topology::truncated);
  const OperatorMatrix A = build_operator_matrix(g, 1.3);
  for (std::size_t i = 0; i < A.size(); ++i) {
    double direct = 0.0;
    for (std::size_t j = 0; j < A.size(); ++j) direct += A.weight(i, j);
    CHECK(A.diagonal()[i] - A.tail()[i] == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("exterior tails match independent integrals") {
  for (double alpha : {0.4, 1.0, 1.7}) {
    const Grid g(1, 4.0, 16, Topology::truncated);
    const OperatorMatrix A = build_operator_matrix(g, alpha);
    const double C = normalization_constant(1, alpha);
    const double h = g.spacing();
    const double lo = -4.0 - 0.5 * h, hi = 4.0 - 0.5 * h;
    boost::math::quadrature::exp_sinh<double> es;
    for (std::size_t i = 0; i < A.size(); ++i) {
      const double x = g.coordinates(i)[0];
      const double right = es.integrate([&](double y) { return std::pow(y - x, -1.0 - alpha); }, hi,
                                        std::numeric_limits<double>::infinity());
      const double left = es.integrate([&](double y) { return std::pow(x - y, -1.0 - alpha); },
                                       -std::numeric_limits<double>::infinity(), lo);
      const int missing = (i == 0) + (i + 1 == A.size());
      CHECK(A.tail()[i] == doctest::Approx(C * (left + right) + missing * A.self_cell_weight()).epsilon(1e-10));
    }
  }
  const double alpha = 0.9;
  const Grid g(2, 2.0, 8, Topology::truncated);
  const OperatorMatrix A = build_operator_matrix(g, alpha);
  const double C = normalization_constant(2, alpha);
  const double h = g.spacing();
  for (std::size_t i : {std::size_t{0}, g.node_of(3, 5), g.node_of(4, 4), g.node_of(7, 1)}) {
    const auto x = g.coordinates(i);
    const auto idx = g.node_indices(i);
    int missing = 0;
    for (int a = 0; a < 2; ++a) missing += (idx[a] == 0) + (idx[a] == 7);
    const double ref = box_exterior_2d(x[0], x[1], -2.0 - 0.5 * h, 2.0 - 0.5 * h, alpha, C);
    CHECK(A.tail()[i] == doctest::Approx(ref + missing * A.self_cell_weight()).epsilon(1e-8));
  }
}

TEST_CASE("constants and exterior data") {
  const Grid gp(2, 2.0, 12, Topology::periodic);
  const Field c(gp, 1, std::vector<double>(gp.node_count(), 2.5));
  const OperatorMatrix Ap = build_operator_matrix(gp, 1.1);
  CHECK(field_norms(Ap.apply(c)).sup_norm < 1e-12 * Ap.diagonal()[0]);

  const Grid g(1, 3.0, 32, Topology::truncated);
  const Field one(g, 1, std::vector<double>(32, 1.0));
  const OperatorMatrix A0 = build_operator_matrix(g, 0.6);
  const Field t = A0.apply(one);
  for (std::size_t i = 0; i < 32; ++i) CHECK(t(i) == doctest::Approx(A0.tail()[i]).epsilon(1e-12));
  const OperatorMatrix A1 = build_operator_matrix(g, 0.6, ExteriorData::constant(1.0));
  CHECK(field_norms(A1.apply(one)).sup_norm < 1e-12 * A1.diagonal()[0]);
  CHECK(sup_diff(A1.apply_homogeneous(one), t) < 1e-13);
  CHECK(sup_diff(A0.apply_with_exterior(one, 1.0), A1.apply(one)) < 1e-13);

  const RadialProfile flat{0.0, g.spacing() / 2, std::vector<double>(200, 0.7), 0.0};
  const OperatorMatrix Ar = build_operator_matrix(g, 0.6, ExteriorData::radial(flat));
  const OperatorMatrix Ac = build_operator_matrix(g, 0.6, ExteriorData::constant(0.7));
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(Ar.exterior_rhs()[i] == doctest::Approx(Ac.exterior_rhs()[i]).epsilon(1e-10));
  }
  const Grid g2(2, 2.0, 8, Topology::truncated);
  const RadialProfile flat2{0.0, g2.spacing() / 2, std::vector<double>(100, 0.7), 0.0};
  const OperatorMatrix Ar2 = build_operator_matrix(g2, 1.2, ExteriorData::radial(flat2));
  const OperatorMatrix Ac2 = build_operator_matrix(g2, 1.2, ExteriorData::constant(0.7));
  for (std::size_t i = 0; i < g2.node_count(); ++i) {
    CHECK(Ar2.exterior_rhs()[i] == doctest::Approx(Ac2.exterior_rhs()[i]).epsilon(1e-10));
  }
}

TEST_CASE("construction errors") {
  const Grid gp(1, 1.0, 8, Topology::periodic);
  const Grid gt(1, 1.0, 8, Topology::truncated);
  CHECK_THROWS_AS(build_operator_matrix(gp, 1.0, ExteriorData::constant(1.0)), ValidationError);
  CHECK_THROWS_AS(build_operator_matrix(gt, 1.0, ExteriorData::periodic()), ValidationError);
  CHECK_THROWS_WITH_AS(build_operator_matrix(gt, 2.5), doctest::Contains("(0, 2)"), ValidationError);
  const RadialProfile coarse{0.0, 1.0, {1.0, 1.0, 1.0}, 0.0};
  CHECK_THROWS_AS(build_operator_matrix(gt, 1.0, ExteriorData::radial(coarse)), ValidationError);
  const RadialProfile single{0.0, 0.1, {1.0}, 0.0};
  CHECK_THROWS_AS(build_operator_matrix(gt, 1.0, ExteriorData::radial(single)), ValidationError);
  const OperatorMatrix A = build_operator_matrix(gt, 1.0);
  CHECK_THROWS_AS(A.apply(Field(gp)), ValidationError);
  CHECK_THROWS_AS(carre_du_champ(Field(gp), A), ValidationError);
}

TEST_CASE("periodic operator converges to the spectral operator") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    double prev = 0.0;
    for (int n : {64, 128, 256}) {
      const Grid g(1, std::numbers::pi, n, Topology::periodic);
      const Field u = sample(g, [](double x, double) { return std::exp(std::sin(x)); });
      const double d = sup_diff(build_operator_matrix(g, alpha).apply(u), apply_spectral(u, alpha));
      if (prev > 0.0) CHECK(std::log2(prev / d) >= 2.0 - alpha - 0.2);
      prev = d;
    }
  }
}

TEST_CASE("Gaussian at the origin matches the Fourier integral") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const Grid g(1, 8.0, 256, Topology::truncated);
    const Field u = sample(g, [](double x, double) { return std::exp(-0.5 * x * x); });
    const OperatorMatrix A = build_operator_matrix(g, alpha);
    const double ref = oracle::gaussian_fourier(1, alpha);
    CHECK(A.apply_at(u, g.node_of(128)) == doctest::Approx(ref).epsilon(1e-4));
  }
  const Grid g(2, 6.0, 64, Topology::truncated);
  const Field u = sample(g, [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); });
  const OperatorMatrix A = build_operator_matrix(g, 1.0);
  CHECK(A.apply_at(u, g.node_of(32, 32)) == doctest::Approx(oracle::gaussian_fourier(2, 1.0)).epsilon(1e-3));
}

TEST_CASE("symmetries") {
  const Grid g(1, 3.0, 30, Topology::truncated);
  const OperatorMatrix A = build_operator_matrix(g, 1.2);
  const Field u = random_field(g, 5);
  std::vector<double> r(30);
  for (int i = 0; i < 30; ++i) r[i] = u(29 - i);
  const Field Au = A.apply(u);
  const Field Ar = A.apply(Field(g, 1, r));
  for (int i = 0; i < 30; ++i) CHECK(Ar(i) == doctest::Approx(Au(29 - i)).epsilon(1e-12).scale(1.0));

  const Grid gp(2, 2.0, 8, Topology::periodic);
  const OperatorMatrix Ap = build_operator_matrix(gp, 0.7);
  const Field v = random_field(gp, 6);
  std::vector<double> s(gp.node_count());
  for (int i0 = 0; i0 < 8; ++i0) {
    for (int i1 = 0; i1 < 8; ++i1) s[gp.node_of(i0, i1)] = v(gp.node_of((i0 + 3) % 8, (i1 + 5) % 8));
  }
  const Field Av = Ap.apply(v);
  const Field As = Ap.apply(Field(gp, 1, s));
  for (int i0 = 0; i0 < 8; ++i0) {
    for (int i1 = 0; i1 < 8; ++i1) {
      CHECK(As(gp.node_of(i0, i1)) == doctest::Approx(Av(gp.node_of((i0 + 3) % 8, (i1 + 5) % 8))).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("carre du champ") {
  // Four-node periodic line: Gamma_0 = w01 (1-2)^2 + w02 (1-0)^2 + w03 (1+1)^2.
  const Grid g4(1, 2.0, 4, Topology::periodic);
  const OperatorMatrix A4 = build_operator_matrix(g4, 1.0);
  const Field u4(g4, 1, {1.0, 2.0, 0.0, -1.0});
  const Field G4 = carre_du_champ(u4, A4);
  const double w1 = A4.weight(0, 1), w2 = A4.weight(0, 2), w3 = A4.weight(0, 3);
  CHECK(w1 == doctest::Approx(w3));
  CHECK(G4(0) == doctest::Approx(w1 * 1.0 + w2 * 1.0 + w3 * 4.0));
  CHECK(G4(2) == doctest::Approx(w1 * 4.0 + w2 * 1.0 + w1 * 1.0));

  for (const ExteriorData& ext : {ExteriorData::zero(), ExteriorData::constant(0.4)}) {
    const Grid g(1, 3.0, 40, Topology::truncated);
    const OperatorMatrix A = build_operator_matrix(g, 0.9, ext);
    const Field u = random_field(g, 9);
    std::vector<double> sq(40);
    for (int i = 0; i < 40; ++i) sq[i] = u(i) * u(i);
    const double g0 = ext.value();
    const Field Asq = A.apply_with_exterior(Field(g, 1, sq), g0 * g0);
    const Field Au = A.apply(u);
    const Field G = carre_du_champ(u, A);
    for (int i = 0; i < 40; ++i) {
      CHECK(G(i) >= 0.0);
      CHECK(std::abs(Asq(i) - 2.0 * u(i) * Au(i) + G(i)) < 1e-12);
    }
  }
  const Grid g(1, 1.0, 8, Topology::truncated);
  const RadialProfile prof{0.0, 0.1, {1.0, 1.0}, 0.0};
  CHECK_THROWS_AS(carre_du_champ(Field(g), build_operator_matrix(g, 1.0, ExteriorData::radial(prof))), ValidationError);
}

TEST_CASE("matrix dump layout") {
  const Grid g(1, 1.0, 6, Topology::truncated);
  const OperatorMatrix A = build_operator_matrix(g, 1.0);
  const auto path = std::filesystem::temp_directory_path() / "fraclap_dump.mat";
  A.write_dump(path.string());
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 8 + 8 + 36 * 8);
  CHECK(bytes.substr(0, 8) == "FRACMAT1");
  double m01 = 0.0;
  std::memcpy(&m01, bytes.data() + 16 + 8, 8);
  CHECK(m01 == -A.weight(0, 1));
  std::filesystem::remove(path);
}
