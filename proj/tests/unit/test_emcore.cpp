#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "common/fixtures.hpp"
#include "emkm/emcore.hpp"
#include "emkm/error.hpp"
#include "emkm/scene.hpp"

using namespace emkm;
using namespace emkm::testing;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMat3 gram(const ComplexMat3& a, const ComplexMat3& b) { return a * b; }

// Random off-source configuration at a few wavelengths.
struct Pair {
  Point3 x, y;
  Wavenumber k{1.0};
};

Pair random_pair(Gen& gen) {
  Pair p{gen.point(-3.0, 3.0), gen.point(-3.0, 3.0), Wavenumber(gen.uniform(0.5, 20.0))};
  if ((p.x - p.y).norm() < 0.1) p.y = p.y + Point3{0.5, 0.0, 0.0};
  return p;
}

}  // namespace

TEST(Wavenumber, Construction) {
  const MediumParams m = vacuum();
  EXPECT_DOUBLE_EQ(Wavenumber::from_frequency(kF0, m).wavelength(), kLambda0);
  EXPECT_DOUBLE_EQ(Wavenumber::from_omega(2 * kPi * kF0, m).value(), 2 * kPi / kLambda0);
  EXPECT_THROW(Wavenumber(-1.0), DomainError);
  EXPECT_THROW(Wavenumber(std::nan("")), DomainError);
  EXPECT_NO_THROW(Wavenumber(0.0));
}

TEST(Medium, Validate) {
  EXPECT_NO_THROW(vacuum().validate());
  EXPECT_THROW((MediumParams{0.0, 1.0}).validate(), DomainError);
  EXPECT_THROW((MediumParams{1.0, -1.0}).validate(), DomainError);
  EXPECT_NEAR(vacuum().epsilon() * vacuum().mu * kC * kC, 1.0, 1e-15);
}

TEST(AcousticGreen, Examples) {
  const cplx g = acoustic_green({0, 0, 1}, {0, 0, 0}, Wavenumber(2 * kPi));
  EXPECT_NEAR(g.real(), 1.0 / (4 * kPi), 1e-15);
  EXPECT_NEAR(g.imag(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g), 0.0795775, 1e-7);
  const cplx g0 = acoustic_green({0.5, 0, 0}, {0, 0, 0}, Wavenumber(0.0));
  EXPECT_NEAR(g0.real(), 1.0 / (2 * kPi), 1e-15);
  EXPECT_THROW(acoustic_green({1, 2, 3}, {1, 2, 3}, Wavenumber(1.0)), SingularEvaluation);
}

TEST(DyadicGreen, AxisAlignedIsDiagonal) {
  const Wavenumber k(3.0);
  const auto G = dyadic_green({0, 0, 2}, {0, 0, 0}, k);
  const auto e = dyadic_green_eigen(k, 2.0);
  const auto expect = ComplexMat3::diagonal(e.lambda2, e.lambda2, e.lambda1);
  EXPECT_LT(relative_difference(G, expect), 1e-14);
}

TEST(DyadicGreen, Errors) {
  EXPECT_THROW(dyadic_green({0, 0, 1}, {0, 0, 1}, Wavenumber(1.0)), SingularEvaluation);
  EXPECT_THROW(dyadic_green({0, 0, 1}, {0, 0, 0}, Wavenumber(0.0)), DomainError);
  EXPECT_THROW(dyadic_green_eigen(Wavenumber(1.0), 0.0), DomainError);
}

TEST(DyadicGreen, EigenStructure) {
  Gen gen(11);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_pair(gen);
    const Point3 r = p.x - p.y;
    const double R = r.norm();
    const Point3 rhat = (1.0 / R) * r;
    const auto G = dyadic_green(p.x, p.y, p.k);
    const auto e = dyadic_green_eigen(p.k, R);
    EXPECT_NEAR(std::abs(e.lambda1 - (-2.0 * green_m(p.k.value() * R) * acoustic_green(p.x, p.y, p.k))), 0.0,
                1e-14 * std::abs(e.lambda1));

    const ComplexVec3 u{{rhat.x, rhat.y, rhat.z}};
    EXPECT_LT(relative_difference(G * u, e.lambda1 * u), 1e-12);
    // Any vector orthogonal to r.
    const Point3 a = gen.point(-1, 1);
    const Point3 v = a - rhat.dot(a) * rhat;
    const ComplexVec3 vv{{v.x, v.y, v.z}};
    EXPECT_LT(relative_difference(G * vv, e.lambda2 * vv), 1e-12);

    const auto rr = ComplexMat3::outer(rhat, rhat);
    const auto rebuilt = e.lambda1 * rr + e.lambda2 * (ComplexMat3::identity() - rr);
    EXPECT_LT(relative_difference(G, rebuilt), 1e-12);
  }
}

TEST(DyadicGreen, NormalAndReciprocal) {
  Gen gen(12);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_pair(gen);
    const auto G = dyadic_green(p.x, p.y, p.k);
    EXPECT_LT(relative_difference(gram(G, G.adjoint()), gram(G.adjoint(), G)), 1e-12);
    EXPECT_LT(relative_difference(dyadic_green(p.y, p.x, p.k).transpose(), G), 1e-12);
    EXPECT_TRUE(G.is_symmetric(1e-12));
  }
}

TEST(DyadicGreen, CoefficientFormMatches) {
  Gen gen(13);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_pair(gen);
    const auto c = dyadic_coefficients(p.x, p.y, p.k);
    const auto rebuilt = c.identity * ComplexMat3::identity() + c.outer * ComplexMat3::outer(c.r, c.r);
    EXPECT_LT(relative_difference(rebuilt, dyadic_green(p.x, p.y, p.k)), 1e-13);
  }
}

// Finite-difference oracle: each column of the dyadic Green function is a
// divergence-free solution of the Helmholtz equation away from the source.
TEST(DyadicGreen, SolvesCurlCurlEquation) {
  const Wavenumber k(2 * kPi);
  const Point3 y{0.1, -0.2, 0.0};
  const double h = 1e-3;
  Gen gen(14);
  for (int t = 0; t < 10; ++t) {
    const Point3 x = gen.point(0.6, 1.5);
    auto G = [&](const Point3& p) { return dyadic_green(p, y, k); };
    const Point3 e[3] = {{h, 0, 0}, {0, h, 0}, {0, 0, h}};
    const ComplexMat3 g0 = G(x);
    ComplexMat3 lap;
    for (const auto& d : e) lap += (1.0 / (h * h)) * (G(x + d) + G(x - d) - 2.0 * g0);
    // Helmholtz residual, entrywise.
    const auto residual = lap + (k.value() * k.value()) * g0;
    EXPECT_LT(residual.frobenius() / ((k.value() * k.value()) * g0.frobenius()), 1e-5);
    // Divergence of each column.
    for (int col = 0; col < 3; ++col) {
      cplx div = 0.0;
      for (int i = 0; i < 3; ++i) div += (G(x + e[i])(i, col) - G(x - e[i])(i, col)) / (2 * h);
      EXPECT_LT(std::abs(div) / (k.value() * g0.frobenius()), 1e-5);
    }
  }
}

TEST(GreenConditionNumber, Examples) {
  const double c100 = green_condition_number(Wavenumber(100.0), 1.0);
  EXPECT_GE(c100, 49.0);
  EXPECT_LE(c100, 51.0);
  const double c1000 = green_condition_number(Wavenumber(1000.0), 1.0);
  EXPECT_GE(c1000 / 500.0, 0.99);
  EXPECT_LE(c1000 / 500.0, 1.01);
  const auto e = dyadic_green_eigen(Wavenumber(7.0), 3.0);
  EXPECT_NEAR(green_condition_number(Wavenumber(7.0), 3.0), std::abs(e.lambda2 / e.lambda1), 1e-12);
}

TEST(GreenConditionNumber, MonotoneAboveTen) {
  double prev = 0.0;
  for (double kr = 10.0; kr < 5000.0; kr *= 1.05) {
    const double c = green_condition_number(Wavenumber(kr), 1.0);
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(Projector, Properties) {
  EXPECT_EQ(projector({0, 0, 1}, {0, 0, 0}), ComplexMat3::diagonal(1.0, 1.0, 0.0));
  Gen gen(15);
  for (int t = 0; t < 100; ++t) {
    const Point3 x = gen.point(-2, 2), y = gen.point(-2, 2);
    const auto P = projector(x, y);
    EXPECT_LT((P * P - P).frobenius(), 1e-14);
    EXPECT_EQ(P, P.transpose());
    const Point3 r = x - y;
    EXPECT_LT((P * ComplexVec3{{r.x, r.y, r.z}}).norm(), 1e-14 * r.norm());
    EXPECT_NEAR(P.trace().real(), 2.0, 1e-14);
  }
  EXPECT_THROW(projector({1, 1, 1}, {1, 1, 1}), SingularEvaluation);
}

TEST(ParaxialGreen, OnAxisAndModulus) {
  const Wavenumber k = k0();
  const cplx g = paraxial_green({0, 0}, {0, 0, kRange}, k, kRange);
  const cplx expect = std::exp(cplx(0, k.value() * kRange)) / (4 * kPi * kRange);
  EXPECT_LT(std::abs(g - expect), 1e-15 * std::abs(expect));
  Gen gen(16);
  for (int t = 0; t < 50; ++t) {
    const Point2 xr{gen.uniform(-1, 1), gen.uniform(-1, 1)};
    const Point3 y = gen.imaging_point(kRange, 0.5);
    EXPECT_NEAR(std::abs(paraxial_green(xr, y, k, kRange)), 1.0 / (4 * kPi * kRange), 1e-15);
  }
  EXPECT_THROW(paraxial_green({0, 0}, {0, 0, 1}, k, 0.0), DomainError);
}

TEST(ParaxialGreen, ApproximatesExactGreenAtScale) {
  const Wavenumber k = k0();
  auto worst = [&](double a, const Point3& y) {
    const auto array = make_square_array(a, 24);
    double w = 0.0;
    for (const auto& xr : array.positions()) {
      const cplx exact = acoustic_green(xr.lift(), y, k);
      const cplx approx = paraxial_green(xr, y, k, kRange);
      w = std::max(w, std::abs(exact - approx) / std::abs(approx));
    }
    return w;
  };
  // On axis the error comes from the aperture alone.
  for (const Point3 y : {Point3{0, 0, kRange}, Point3{0, 0, kRange + kLambda0}}) {
    const double full = worst(kAperture, y);
    EXPECT_LT(full, 0.1);
    EXPECT_LT(worst(kAperture / 2, y), full / 4);
  }
  // Off axis the dropped k b²/2L phase dominates.
  const Point3 off{kLambda0, -2 * kLambda0, kRange};
  const double theta_b = k.value() * 5 * kLambda0 * kLambda0 / (2 * kRange);
  EXPECT_LT(worst(kAperture, off), theta_b + 0.05);
}

TEST(DyadicGreen, FraunhoferFactorization) {
  const Wavenumber k = k0();
  const auto array = make_square_array(kAperture, 16);
  double worst_c = 0.0;
  for (const auto& xr : array.positions()) {
    for (const Point3 y : {Point3{0, 0, kRange}, Point3{3 * kLambda0, 2 * kLambda0, kRange - kLambda0}}) {
      const auto G = dyadic_green(xr.lift(), y, k);
      const auto approx = acoustic_green(xr.lift(), y, k) * projector(xr.lift(), y);
      worst_c = std::max(worst_c, relative_difference(approx, G) * k.value() * kRange);
    }
  }
  EXPECT_LE(worst_c, 3.0);
}
