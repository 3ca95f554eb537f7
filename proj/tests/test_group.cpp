#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <hyperwalk/group.hpp>
#include <hyperwalk/quad.hpp>

using namespace hyperwalk;
using cd = std::complex<double>;

namespace {

const double kLog3 = std::log(3.0);

DiskPoint<double> random_interior(std::mt19937_64& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return DiskPoint<double>(std::polar(rmax * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng)));
}

}  // namespace

TEST(GroupElement, FromXExamples) {
  EXPECT_NEAR(from_x(0.5).gamma(), kLog3, 1e-15);
  EXPECT_EQ(from_x(0.0).gamma(), 0.0);
  EXPECT_THROW(from_x(1.0), DomainError);
  EXPECT_THROW(from_x(-1.0), DomainError);
  EXPECT_NEAR(GroupElement<double>(kLog3).x(), 0.5, 1e-15);
  EXPECT_THROW(GroupElement<double>(std::nan("")), DomainError);
}

TEST(GroupElement, ApplyExamples) {
  const auto g = GroupElement<double>(kLog3);
  const auto z = apply(g, DiskPoint<double>());
  EXPECT_NEAR(std::abs(z.value() - cd(0.5, 0.0)), 0.0, 1e-15);
  EXPECT_EQ(apply(g, DiskPoint<double>(1.0, 0.0)).value(), cd(1.0, 0.0));
  EXPECT_EQ(apply(g, DiskPoint<double>(-1.0, 0.0)).value(), cd(-1.0, 0.0));
  // (0.5 + 0.5)/(1 + 0.25)
  EXPECT_NEAR(apply(g, DiskPoint<double>(0.5, 0.0)).re(), 0.8, 1e-15);
}

TEST(GroupElement, ComposeAddsParameters) {
  const auto a = GroupElement<double>(0.7), b = GroupElement<double>(-1.9);
  EXPECT_EQ(compose(a, b).gamma(), 0.7 + -1.9);
  EXPECT_EQ(a.inverse().gamma(), -0.7);
  const auto other = GroupElement<double>(0.1, Pole<double>::from_angle(1.0));
  EXPECT_THROW(compose(a, other), PoleMismatch);
}

TEST(GroupElement, CompositionMatchesPointwiseApplication) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> gd(-4.0, 4.0);
  const auto pole = Pole<double>::from_angle(2.5);
  for (int i = 0; i < 20; ++i) {
    const GroupElement<double> a(gd(rng), pole), b(gd(rng), pole);
    const auto z = random_interior(rng);
    const auto two_step = apply(a, apply(b, z));
    const auto one_step = apply(compose(a, b), z);
    EXPECT_LE(std::abs(two_step.value() - one_step.value()), 1e-12);
    const auto swapped = apply(b, apply(a, z));
    EXPECT_LE(std::abs(two_step.value() - swapped.value()), 1e-12);
    EXPECT_LE(std::abs(apply(a.inverse(), apply(a, z)).value() - z.value()), 1e-12);
  }
}

TEST(GroupElement, IsometryInDouble) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> gd(-8.0, 8.0);
  const auto pole = Pole<double>::from_angle(-0.8);
  for (int i = 0; i < 2000; ++i) {
    const GroupElement<double> g(gd(rng), pole);
    const auto z = random_interior(rng), w = random_interior(rng);
    const double d = poincare_distance(z, w);
    EXPECT_NEAR(poincare_distance(apply(g, z), apply(g, w)), d, 1e-9 * std::max(1.0, d));
  }
}

TEST(GroupElement, IsometryInBinary128) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> gd(-20.0, 20.0), u(0.0, 1.0);
  const auto pole = Pole<quad>::from_angle(quad(0.4));
  for (int i = 0; i < 300; ++i) {
    const GroupElement<quad> g(quad(gd(rng)), pole);
    auto pt = [&] {
      const cd c = std::polar(0.95 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
      return DiskPoint<quad>(complex_t<quad>(quad(c.real()), quad(c.imag())));
    };
    const auto z = pt(), w = pt();
    const quad d = poincare_distance(z, w);
    EXPECT_LE(static_cast<double>(abs(poincare_distance(apply(g, z), apply(g, w)) - d)), 1e-9);
  }
}

TEST(GroupElement, SaturatesOntoAttractingPole) {
  const auto pole = Pole<double>::from_angle(1.2);
  const DiskPoint<double> z(0.1, 0.2);
  EXPECT_EQ(apply(GroupElement<double>(701.0, pole), z).value(), pole.value());
  EXPECT_EQ(apply(GroupElement<double>(-701.0, pole), z).value(), -pole.value());
  EXPECT_TRUE(GroupElement<double>(701.0).saturated());
  EXPECT_FALSE(GroupElement<double>(700.0).saturated());
}

TEST(GroupElement, PreservesOrbitCircles) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> gd(-6.0, 6.0);
  const auto pole = Pole<double>::from_angle(0.3);
  for (int i = 0; i < 1000; ++i) {
    const auto z = random_interior(rng);
    const auto u = apply(GroupElement<double>(gd(rng), pole), z);
    EXPECT_TRUE(on_orbit_circle(u.value(), z, pole));
  }
}

TEST(Tz, Examples) {
  const auto alpha = Pole<double>::unit();
  const DiskPoint<double> z(0.2, 0.3);
  EXPECT_LE(std::abs(apply_Tz(alpha, z, DiskPoint<double>()).value() - z.value()), 1e-15);
  EXPECT_LE(std::abs(apply_Tz(alpha, z, DiskPoint<double>(1.0, 0.0)).value() - 1.0), 1e-15);
  EXPECT_LE(std::abs(apply_Tz(alpha, z, DiskPoint<double>(-1.0, 0.0)).value() + 1.0), 1e-15);
}

TEST(TauHat, Examples) {
  const auto alpha = Pole<double>::unit();
  const DiskPoint<double> z(0.2, 0.3);
  EXPECT_LE(std::abs(tau_hat(alpha, z, 0.0).value() - z.value()), 1e-15);
  EXPECT_LE(std::abs(tau_hat(alpha, DiskPoint<double>(), kLog3).value() - 0.5), 1e-15);
  const cd tz = apply_Tz(alpha, DiskPoint<double>(0.0, 0.5), DiskPoint<double>(0.5, 0.0)).value();
  EXPECT_LE(std::abs(tz - cd(0.5, 0.5) / cd(1.0, 0.25)), 1e-15);
  EXPECT_THROW(tau_hat(alpha, DiskPoint<double>(0.0, 1.0), 1.0), DomainError);
}

TEST(TauHat, AgreesWithTheGroupOrbit) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> gd(-6.0, 6.0);
  const auto pole = Pole<double>::from_angle(-2.0);
  for (int i = 0; i < 1000; ++i) {
    const auto z = random_interior(rng);
    const double a = gd(rng);
    EXPECT_LE(std::abs(tau_hat(pole, z, a).value() - apply(GroupElement<double>(a, pole), z).value()),
              1e-9);
  }
}

// H_z ∩ D is a hypercycle at distance h from l_α with cosh h = 1/cos ς, so
// sinh(d/2) = sinh(|δ1−δ2|/2)/cos ς; on l_α itself (ς = 0) the parametrization
// is an isometry.
TEST(TauHat, DistanceAlongTheOrbit) {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> gd(-6.0, 6.0), xd(-0.9, 0.9);
  const auto pole = Pole<double>::from_angle(0.8);
  for (int i = 0; i < 1000; ++i) {
    const auto z = random_interior(rng);
    const double a = gd(rng), b = gd(rng);
    const double d = poincare_distance(tau_hat(pole, z, a), tau_hat(pole, z, b));
    const double c = std::cos(to_bipolar(z, pole).varsigma);
    EXPECT_NEAR(std::sinh(d / 2), std::sinh(std::abs(a - b) / 2) / c,
                1e-8 * std::max(1.0, std::sinh(d / 2)));

    const DiskPoint<double> on_line(xd(rng) * pole.value());
    const double dl = poincare_distance(tau_hat(pole, on_line, a), tau_hat(pole, on_line, b));
    EXPECT_NEAR(dl, std::abs(a - b), 1e-8 * std::max(1.0, std::abs(a - b)));
  }
}

TEST(ExactSum, IsCorrectlyRoundedAndOrderFree) {
  std::vector<double> v = {1e100, 1.0, -1e100, 1e-100};
  EXPECT_EQ(exact_sum<double>(v), 1.0);
  std::vector<double> tenths(10, 0.1);
  EXPECT_EQ(exact_sum<double>(tenths), 1.0);
  EXPECT_EQ(exact_sum<double>(std::vector<double>{}), 0.0);

  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> terms(5000);
  for (auto& t : terms) t = d(rng) * std::pow(10.0, 6 * d(rng));
  const double ref = exact_sum<double>(terms);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(terms.begin(), terms.end(), rng);
    EXPECT_EQ(exact_sum<double>(terms), ref);
  }
}

TEST(ComposeAll, OrderIndependentAndPoleChecked) {
  const auto pole = Pole<double>::from_angle(0.6);
  std::vector<GroupElement<double>> elems;
  for (double g : {0.1, 0.2, 0.3, -0.7, 1e-17}) elems.emplace_back(g, pole);
  const double fwd = compose_all<double>(elems, pole).gamma();
  std::reverse(elems.begin(), elems.end());
  EXPECT_EQ(compose_all<double>(elems, pole).gamma(), fwd);
  elems.emplace_back(0.1, Pole<double>::unit());
  EXPECT_THROW(compose_all<double>(elems, pole), PoleMismatch);
}
