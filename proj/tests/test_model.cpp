#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "relaxlab/model.hpp"

using namespace relaxlab;

namespace {

PhysParams params(double lambda, double mu, double eps = 1.0) {
  PhysParams p;
  p.lambda = lambda;
  p.mu = mu;
  p.epsilon = eps;
  return p;
}

}  // namespace

TEST_CASE("damping profile closed forms") {
  PhysParams p = params(1.0, 2.0);
  CHECK(p.b(3.0) == 2.0);                      // (1+3)^1 / 2
  CHECK(p.B(1.0) == doctest::Approx(0.75).epsilon(1e-15));  // (2^2-1)/(2*2)

  PhysParams q = params(1.0, 1.0);
  CHECK(q.Binv(std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-14));

  PhysParams c = params(0.0, 4.0);  // constant damping
  CHECK(c.b(7.0) == 0.25);
  CHECK(c.B(8.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c.Binv(0.5) == doctest::Approx(2.0).epsilon(1e-15));

  PhysParams o = params(-0.5, 2.0);  // overdamped branch
  CHECK(o.B(4.0) == doctest::Approx(std::sqrt(5.0) - 1.0).epsilon(1e-14));

  PhysParams s = params(2.0, 0.5);
  CHECK(s.b(1.0) == 8.0);
  CHECK(s.B(1.0) == doctest::Approx(7.0 / 1.5).epsilon(1e-14));
}

TEST_CASE("B and Binv are primitives of b and 1/b") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> lam(-1.0, 2.0), logmu(-1.5, 1.5),
      tt(0.1, 30.0);
  for (int k = 0; k < 200; ++k) {
    PhysParams p = params(lam(rng), std::exp(logmu(rng)));
    double t = tt(rng);
    double h = 1e-5 * (1.0 + t);
    double dB = (p.B(t + h) - p.B(t - h)) / (2.0 * h);
    double dI = (p.Binv(t + h) - p.Binv(t - h)) / (2.0 * h);
    double db = (p.b(t + h) - p.b(t - h)) / (2.0 * h);
    CHECK(dB == doctest::Approx(p.b(t)).epsilon(1e-8));
    CHECK(dI == doctest::Approx(1.0 / p.b(t)).epsilon(1e-8));
    CHECK(db == doctest::Approx(p.bprime(t)).epsilon(1e-7));
  }
  // lambda = 1 hits the logarithmic branch of Binv
  PhysParams p1 = params(1.0, 3.0);
  CHECK(p1.Binv(5.0) == doctest::Approx(3.0 * std::log(6.0)).epsilon(1e-14));
}

TEST_CASE("enthalpy change of variables") {
  PhysParams p;  // gamma = 2, A = 1/2, rho_bar = 1: n(rho) = rho - 1
  CHECK(p.n_of_rho(1.2) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(p.n_of_rho(1.0) == 0.0);
  CHECK(p.G(0.2) == doctest::Approx(0.2).epsilon(1e-13));  // G(n) = n here

  PhysParams iso = params(0.0, 1.0);  // isothermal: n = A log(rho/rho_bar)
  iso.gamma = 1.0;
  iso.A = 2.0;
  CHECK(iso.n_of_rho(std::exp(1.0)) == doctest::Approx(2.0).epsilon(1e-13));

  for (double gamma : {1.0, 1.4, 2.0, 3.0}) {
    PhysParams q;
    q.gamma = gamma;
    q.A = 0.7;
    q.rho_bar = 1.3;
    for (double rho = 0.4; rho < 4.0; rho += 0.37) {
      double back = q.rho_of_n(q.n_of_rho(rho));
      CHECK(back == doctest::Approx(rho).epsilon(1e-12));
    }
  }
}

TEST_CASE("pressure law values") {
  PhysParams p;
  p.gamma = 1.4;
  p.A = 0.8;
  CHECK(p.pressure(2.0) == doctest::Approx(0.8 * std::pow(2.0, 1.4)).epsilon(1e-15));
  CHECK(p.pressure_prime(2.0) ==
        doctest::Approx(0.8 * 1.4 * std::pow(2.0, 0.4)).epsilon(1e-15));
  CHECK(p.Pprime_bar() == doctest::Approx(p.pressure_prime(p.rho_bar)).epsilon(1e-15));
}

TEST_CASE("rho_of_n rejects values outside the map range") {
  PhysParams p;  // gamma = 2: n = rho - 1 is bounded below by -1
  CHECK_THROWS_AS((void)p.rho_of_n(-2.0), std::domain_error);
}

TEST_CASE("parameter validation rejects unusable inputs") {
  auto bad = [](auto&& mutate) {
    PhysParams p;
    mutate(p);
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
  };
  bad([](PhysParams& p) { p.epsilon = 0.0; });
  bad([](PhysParams& p) { p.epsilon = -0.1; });
  bad([](PhysParams& p) { p.epsilon = 1.5; });
  bad([](PhysParams& p) { p.mu = 0.0; });
  bad([](PhysParams& p) { p.mu = -1.0; });
  bad([](PhysParams& p) { p.lambda = 2.5; });
  bad([](PhysParams& p) { p.rho_bar = 0.0; });
  bad([](PhysParams& p) { p.gamma = 0.9; });
  bad([](PhysParams& p) { p.A = 0.0; });
  bad([](PhysParams& p) { p.dim = 3; });

  // boundary values are accepted
  PhysParams ok;
  ok.epsilon = 1.0;
  ok.lambda = 2.0;
  ok.gamma = 1.0;
  CHECK_NOTHROW(validate_params(ok));
}

TEST_CASE("regime classification and the critical margin") {
  CHECK(validate_params(params(-0.5, 1.0)).regime == Regime::Overdamped);
  CHECK(validate_params(params(-0.5, 1.0)).guaranteed);
  CHECK(validate_params(params(0.0, 1.0)).regime == Regime::ConstantDamping);
  CHECK(validate_params(params(0.5, 1.0)).regime == Regime::Underdamped);
  CHECK(validate_params(params(0.5, 1.0)).guaranteed);

  RegimeReport stable = validate_params(params(1.0, 4.0, 1.0));
  CHECK(stable.regime == Regime::CriticalStable);
  CHECK(stable.guaranteed);
  CHECK(stable.critical_margin == doctest::Approx(2.0).epsilon(1e-15));

  RegimeReport violated = validate_params(params(1.0, 1.0, 1.0));
  CHECK(violated.regime == Regime::CriticalViolated);
  CHECK_FALSE(violated.guaranteed);
  CHECK(violated.critical_margin == doctest::Approx(-1.0).epsilon(1e-15));

  // mu = 2 eps^2 exactly sits on the violated side
  CHECK(validate_params(params(1.0, 2.0, 1.0)).regime == Regime::CriticalViolated);
  CHECK(validate_params(params(1.0, 0.6, 0.5)).regime == Regime::CriticalStable);

  RegimeReport super = validate_params(params(1.5, 1.0));
  CHECK(super.regime == Regime::Supercritical);
  CHECK_FALSE(super.guaranteed);
  CHECK(validate_params(params(2.0, 1.0)).regime == Regime::Supercritical);
}
