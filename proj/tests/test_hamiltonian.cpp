#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "hj/hamiltonian.hpp"

using namespace hj;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// dual objective the prox is defined to minimize
double obj_1d(const Hamiltonian1D& h, double x, double t, double dp, double dm,
              double v0p, double v0m, double rho, double sigma, double vp,
              double vm) {
  const double star = h.conjugate(x, t, vp, vm);
  if (star == kInf) return kInf;
  const double w = rho / (2.0 * sigma);
  return star - (dp * vp + dm * vm) +
         w * ((vp - v0p) * (vp - v0p) + (vm - v0m) * (vm - v0m));
}

double obj_2d(const Hamiltonian2D& h, const double d[4], const double v0[4],
              double rho, double sigma, const double v[4]) {
  const double star = h.conjugate(0.3, 0.7, 0.2, v);
  if (star == kInf) return kInf;
  double out = star;
  const double w = rho / (2.0 * sigma);
  for (int c = 0; c < 4; ++c)
    out += -d[c] * v[c] + w * (v[c] - v0[c]) * (v[c] - v0[c]);
  return out;
}

// brute-force conjugate sup_p { <v,p> - Hhat(p) } on a square p-grid
double grid_conjugate_1d(const Hamiltonian1D& h, double x, double t, double vp,
                         double vm, double lim, int n) {
  double best = -kInf;
  for (int i = 0; i <= n; ++i) {
    const double pp = -lim + 2.0 * lim * i / n;
    for (int j = 0; j <= n; ++j) {
      const double pm = -lim + 2.0 * lim * j / n;
      best = std::max(best, vp * pp + vm * pm - h.eval(x, t, pp, pm));
    }
  }
  return best;
}

double grid_conjugate_2d(const Hamiltonian2D& h, const double v[4], double lim,
                         int n) {
  double best = -kInf;
  std::vector<double> axis(n + 1);
  for (int i = 0; i <= n; ++i) axis[i] = -lim + 2.0 * lim * i / n;
  for (double p0 : axis)
    for (double p1 : axis)
      for (double p2 : axis)
        for (double p3 : axis)
          best = std::max(best, v[0] * p0 + v[1] * p1 + v[2] * p2 + v[3] * p3 -
                                    h.eval(0.3, 0.7, 0.2, p0, p1, p2, p3));
  return best;
}

}  // namespace

TEST_CASE("numerical Hamiltonian values and consistency") {
  auto quad = make_quadratic_1d();
  CHECK(quad->eval(0, 0, -1.0, 2.0) == doctest::Approx(2.5));
  CHECK(quad->eval(0, 0, 1.0, -2.0) == doctest::Approx(0.0));  // both upwinded away

  auto l1 = make_l1_1d();
  CHECK(l1->eval(0, 0, -1.0, 2.0) == doctest::Approx(3.0));
  CHECK(l1->eval(0, 0, 0.5, -0.5) == doctest::Approx(0.0));

  auto norm = make_norm_potential_1d();
  CHECK(norm->eval(0, 0, -3.0, 4.0) == doctest::Approx(5.0));

  // Hhat(p,p) = H(p): upwinding is exact on one-sided agreement
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  auto norm2 = make_norm_potential_2d();
  auto quad2 = make_quadratic_2d();
  for (int it = 0; it < 50; ++it) {
    const double p = u(rng), q = u(rng);
    CHECK(quad->eval(0, 0, p, p) == doctest::Approx(0.5 * p * p));
    CHECK(l1->eval(0, 0, p, p) == doctest::Approx(std::abs(p)));
    CHECK(quad2->eval(0, 0, 0, p, p, q, q) ==
          doctest::Approx(0.5 * (p * p + q * q)));
    CHECK(norm2->eval(0, 0, 0, p, p, q, q) ==
          doctest::Approx(std::sqrt(p * p + q * q)));
  }
}

TEST_CASE("monotone: non-increasing in p+, non-decreasing in p-") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> bump(0.0, 2.0);
  std::vector<std::shared_ptr<Hamiltonian1D>> hams = {
      make_quadratic_1d(), make_l1_1d(),
      make_norm_potential_1d([](double x, double) { return 1.0 + x; })};
  for (auto& h : hams) {
    for (int it = 0; it < 200; ++it) {
      const double pp = u(rng), pm = u(rng), step = bump(rng);
      const double base = h->eval(0.4, 0.1, pp, pm);
      CHECK(h->eval(0.4, 0.1, pp + step, pm) <= base + 1e-12);
      CHECK(h->eval(0.4, 0.1, pp, pm + step) >= base - 1e-12);
    }
  }
}

TEST_CASE("L1 Hamiltonian rejects non-positive speeds") {
  auto h = make_l1_1d([](double, double) { return 0.0; });
  CHECK_THROWS_AS(h->eval(0, 0, 1, 1), std::domain_error);
}

TEST_CASE("conjugates match a brute-force sup over slopes") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  SUBCASE("quadratic 1d") {
    auto h = make_quadratic_shifted_1d([](double x, double t) { return x - t; });
    for (int it = 0; it < 60; ++it) {
      const double vp = -u01(rng), vm = u01(rng);
      const double exact = h->conjugate(0.4, 0.1, vp, vm);
      const double gridv = grid_conjugate_1d(*h, 0.4, 0.1, vp, vm, 3.0, 300);
      CHECK(gridv <= exact + 1e-9);   // restricted sup can never exceed
      CHECK(exact - gridv <= 1e-3);   // and the grid is fine enough to saturate
    }
    // infeasible side: finite-slope sup already exceeds any feasible value
    CHECK(h->conjugate(0.4, 0.1, 0.5, 0.5) == kInf);
  }

  SUBCASE("l1 1d") {
    auto h = make_l1_1d([](double, double) { return 2.0; },
                        [](double x, double) { return x; });
    for (int it = 0; it < 60; ++it) {
      const double vp = -2.0 * u01(rng), vm = 2.0 * u01(rng);
      const double exact = h->conjugate(0.4, 0.1, vp, vm);
      const double gridv = grid_conjugate_1d(*h, 0.4, 0.1, vp, vm, 3.0, 300);
      CHECK(gridv <= exact + 1e-9);
      CHECK(exact - gridv <= 1e-9);  // sup attained at p = 0, a grid point
    }
    CHECK(h->conjugate(0.4, 0.1, -2.1, 0.0) == kInf);
  }

  SUBCASE("norm potential 1d") {
    auto h = make_norm_potential_1d([](double x, double) { return 1.0 + x; });
    for (int it = 0; it < 60; ++it) {
      double vp = -u01(rng), vm = u01(rng);
      const double r = std::hypot(vp, vm);
      if (r > 0.95) {
        vp *= 0.95 / r;
        vm *= 0.95 / r;
      }
      const double exact = h->conjugate(0.4, 0.1, vp, vm);
      const double gridv = grid_conjugate_1d(*h, 0.4, 0.1, vp, vm, 3.0, 300);
      CHECK(gridv <= exact + 1e-9);
      CHECK(exact - gridv <= 1e-9);
    }
    CHECK(h->conjugate(0.4, 0.1, -0.9, 0.9) == kInf);  // norm 1.27 > 1
  }

  SUBCASE("quadratic 2d") {
    auto h = make_quadratic_2d();
    for (int it = 0; it < 10; ++it) {
      const double v[4] = {-u01(rng), u01(rng), -u01(rng), u01(rng)};
      const double exact = h->conjugate(0.3, 0.7, 0.2, v);
      const double gridv = grid_conjugate_2d(*h, v, 2.0, 40);
      CHECK(gridv <= exact + 1e-9);
      CHECK(exact - gridv <= 5e-3);
    }
  }

  SUBCASE("norm potential 2d") {
    auto h = make_norm_potential_2d(
        [](double, double, double t) { return 2.0 - t; });
    for (int it = 0; it < 10; ++it) {
      double v[4] = {-u01(rng), u01(rng), -u01(rng), u01(rng)};
      double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
      if (r > 0.95)
        for (double& c : v) c *= 0.95 / r;
      const double exact = h->conjugate(0.3, 0.7, 0.2, v);
      const double gridv = grid_conjugate_2d(*h, v, 2.0, 40);
      CHECK(gridv <= exact + 1e-9);
      CHECK(exact - gridv <= 1e-9);  // attained at p = 0
    }
  }
}

TEST_CASE("prox hand values") {
  double vp, vm;

  auto quad = make_quadratic_1d();
  quad->conjugate_prox(0, 0, -1.0, 1.0, 0.0, 0.0, 1.0, 1.0, vp, vm);
  CHECK(vp == doctest::Approx(-0.5));
  CHECK(vm == doctest::Approx(0.5));
  // pull toward the infeasible quadrant gets clamped to zero
  quad->conjugate_prox(0, 0, 2.0, -2.0, 0.0, 0.0, 1.0, 1.0, vp, vm);
  CHECK(vp == doctest::Approx(0.0));
  CHECK(vm == doctest::Approx(0.0));

  auto l1 = make_l1_1d();
  l1->conjugate_prox(0, 0, -3.0, 0.2, 0.0, 0.0, 1.0, 1.0, vp, vm);
  CHECK(vp == doctest::Approx(-1.0));  // box edge
  CHECK(vm == doctest::Approx(0.2));
  // rho = 0 degenerates to a linear program over the box: follow sign(d)
  l1->conjugate_prox(0, 0, -1.0, 1.0, 0.5, 0.5, 0.0, 1.0, vp, vm);
  CHECK(vp == doctest::Approx(-1.0));
  CHECK(vm == doctest::Approx(1.0));
  l1->conjugate_prox(0, 0, 0.0, -1.0, 0.5, 0.5, 0.0, 1.0, vp, vm);
  CHECK(vp == doctest::Approx(0.0));  // tie toward zero
  CHECK(vm == doctest::Approx(0.0));

  auto norm = make_norm_potential_1d();
  norm->conjugate_prox(0, 0, 0.0, 0.0, -2.0, 2.0, 1.0, 1.0, vp, vm);
  CHECK(vp == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(vm == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::hypot(vp, vm) <= 1.0 + 1e-12);
}

TEST_CASE("prox rejects bad step parameters") {
  double vp, vm;
  double v4[4], d4[4] = {0, 0, 0, 0}, v04[4] = {0, 0, 0, 0};
  std::vector<std::shared_ptr<Hamiltonian1D>> hams = {
      make_quadratic_1d(), make_l1_1d(), make_norm_potential_1d()};
  for (auto& h : hams) {
    CHECK_THROWS_AS(h->conjugate_prox(0, 0, 0, 0, 0, 0, 1.0, 0.0, vp, vm),
                    std::invalid_argument);
    CHECK_THROWS_AS(h->conjugate_prox(0, 0, 0, 0, 0, 0, 1.0, -1.0, vp, vm),
                    std::invalid_argument);
    CHECK_THROWS_AS(h->conjugate_prox(0, 0, 0, 0, 0, 0, -0.1, 1.0, vp, vm),
                    std::invalid_argument);
  }
  auto h2 = make_norm_potential_2d();
  CHECK_THROWS_AS(h2->conjugate_prox(0, 0, 0, d4, v04, -0.1, 1.0, v4),
                  std::invalid_argument);
}

TEST_CASE("conjugate_value refuses infeasible duals") {
  auto quad = make_quadratic_1d();
  CHECK(conjugate_value(*quad, 0, 0, -0.5, 0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(conjugate_value(*quad, 0, 0, 0.5, 0.5), std::domain_error);
  auto l12 = make_l1_2d();
  const double bad[4] = {-2.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(conjugate_value(*l12, 0, 0, 0, bad), std::domain_error);
}

namespace {

struct ProxDraw {
  double dp, dm, v0p, v0m, rho, sigma;
};

ProxDraw draw(std::mt19937& rng, bool allow_zero_rho) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> ur(0.0, 3.0);
  std::uniform_real_distribution<double> us(0.1, 2.0);
  ProxDraw p{u(rng), u(rng), u(rng), u(rng), ur(rng), us(rng)};
  if (allow_zero_rho && (rng() % 8) == 0) p.rho = 0.0;
  return p;
}

// 1D grid search over [lo, hi] x [lo2, hi2] at the given step
double grid_search_obj(const Hamiltonian1D& h, double x, double t,
                       const ProxDraw& p, double lop, double hip, double lom,
                       double him, double step) {
  double best = kInf;
  const int np = static_cast<int>((hip - lop) / step + 0.5);
  const int nm = static_cast<int>((him - lom) / step + 0.5);
  for (int i = 0; i <= np; ++i) {
    const double vp = lop + i * step;
    for (int j = 0; j <= nm; ++j) {
      const double vm = lom + j * step;
      best = std::min(best, obj_1d(h, x, t, p.dp, p.dm, p.v0p, p.v0m, p.rho,
                                   p.sigma, vp, vm));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("prox beats a fine grid search (1d families)") {
  std::mt19937 rng(101);
  const double x = 0.4, t = 0.3;

  SUBCASE("quadratic") {
    auto h = make_quadratic_shifted_1d([](double x_, double t_) { return x_ + t_; });
    for (int it = 0; it < 30; ++it) {
      const ProxDraw p = draw(rng, true);
      double vp, vm;
      h->conjugate_prox(x, t, p.dp, p.dm, p.v0p, p.v0m, p.rho, p.sigma, vp, vm);
      const double mine =
          obj_1d(*h, x, t, p.dp, p.dm, p.v0p, p.v0m, p.rho, p.sigma, vp, vm);
      REQUIRE(mine < kInf);
      // the two components never leave [-3,0] and [0,3] for these draws
      const double best =
          grid_search_obj(*h, x, t, p, -3.0, 0.0, 0.0, 3.0, 1e-3);
      CHECK(mine <= best + 1e-8);
    }
  }

  SUBCASE("l1 box") {
    auto h = make_l1_1d([](double x_, double) { return 1.0 + x_; }, {});
    for (int it = 0; it < 30; ++it) {
      const ProxDraw p = draw(rng, true);
      double vp, vm;
      h->conjugate_prox(x, t, p.dp, p.dm, p.v0p, p.v0m, p.rho, p.sigma, vp, vm);
      const double mine =
          obj_1d(*h, x, t, p.dp, p.dm, p.v0p, p.v0m, p.rho, p.sigma, vp, vm);
      REQUIRE(mine < kInf);
      const double g = 1.0 + x;
      const double best = grid_search_obj(*h, x, t, p, -g, 0.0, 0.0, g, 1e-3);
      CHECK(mine <= best + 1e-8);
    }
  }

  SUBCASE("norm ball") {
    auto h = make_norm_potential_1d();
    for (int it = 0; it < 30; ++it) {
      const ProxDraw p = draw(rng, false);
      double vp, vm;
      h->conjugate_prox(x, t, p.dp, p.dm, p.v0p, p.v0m, p.rho, p.sigma, vp, vm);
      const double mine =
          obj_1d(*h, x, t, p.dp, p.dm, p.v0p, p.v0m, p.rho, p.sigma, vp, vm);
      REQUIRE(mine < kInf);
      const double best =
          grid_search_obj(*h, x, t, p, -1.0, 0.0, 0.0, 1.0, 1e-3);
      CHECK(mine <= best + 1e-8);
    }
  }
}

TEST_CASE("prox beats grid search componentwise (2d separable families)") {
  // for the quadratic and L1 conjugates the objective splits into four
  // independent scalar problems, so four 1D sweeps cover the full 4D grid
  std::mt19937 rng(202);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> ur(0.0, 3.0);
  std::uniform_real_distribution<double> us(0.1, 2.0);

  std::vector<std::shared_ptr<Hamiltonian2D>> hams = {
      make_quadratic_2d(), make_l1_2d([](double, double, double) { return 1.5; }, {})};
  for (auto& h : hams) {
    for (int it = 0; it < 25; ++it) {
      const double d[4] = {u(rng), u(rng), u(rng), u(rng)};
      const double v0[4] = {u(rng), u(rng), u(rng), u(rng)};
      const double rho = (it % 7 == 0) ? 0.0 : ur(rng);
      const double sigma = us(rng);
      double v[4];
      h->conjugate_prox(0.3, 0.7, 0.2, d, v0, rho, sigma, v);
      const double mine = obj_2d(*h, d, v0, rho, sigma, v);
      REQUIRE(mine < kInf);

      for (int c = 0; c < 4; ++c) {
        const bool plus = (c % 2 == 0);  // components 0,2 live in (-inf,0]
        const double lo = plus ? -3.0 : 0.0;
        const double hi = plus ? 0.0 : 3.0;
        double trial[4] = {v[0], v[1], v[2], v[3]};
        double best = mine;
        for (double s = lo; s <= hi + 1e-12; s += 1e-3) {
          trial[c] = s;
          best = std::min(best, obj_2d(*h, d, v0, rho, sigma, trial));
        }
        CHECK(mine <= best + 1e-8);
      }
    }
  }
}

TEST_CASE("norm-ball prox in 2d is the exact cone-and-ball projection") {
  // With u = v_old + sigma d / rho the objective is squared distance to u
  // plus the feasibility indicator, so v* must satisfy the projection
  // inequality <u - v*, w - v*> <= 0 for every feasible w.  Random feasible
  // w probe it; a 1e-3 line search toward each w guards the objective too.
  std::mt19937 rng(303);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> ur(0.05, 3.0);
  std::uniform_real_distribution<double> us(0.1, 2.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto h = make_norm_potential_2d();

  for (int it = 0; it < 40; ++it) {
    const double d[4] = {u(rng), u(rng), u(rng), u(rng)};
    const double v0[4] = {u(rng), u(rng), u(rng), u(rng)};
    const double rho = ur(rng), sigma = us(rng);
    double v[4];
    h->conjugate_prox(0.3, 0.7, 0.2, d, v0, rho, sigma, v);
    const double mine = obj_2d(*h, d, v0, rho, sigma, v);
    REQUIRE(mine < kInf);

    double uu[4];
    for (int c = 0; c < 4; ++c) uu[c] = v0[c] + sigma * d[c] / rho;

    for (int probe = 0; probe < 50; ++probe) {
      // random feasible w: clamp signs, then shrink into the ball
      double w[4] = {-u01(rng), u01(rng), -u01(rng), u01(rng)};
      const double r =
          std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3]);
      const double scale = u01(rng) / std::max(r, 1e-12);
      for (double& c : w) c *= scale;

      double ip = 0.0;
      for (int c = 0; c < 4; ++c) ip += (uu[c] - v[c]) * (w[c] - v[c]);
      CHECK(ip <= 1e-9);

      double trial[4];
      double best = mine;
      for (double s = 0.0; s <= 1.0; s += 1e-3) {
        for (int c = 0; c < 4; ++c) trial[c] = v[c] + s * (w[c] - v[c]);
        best = std::min(best, obj_2d(*h, d, v0, rho, sigma, trial));
      }
      CHECK(mine <= best + 1e-8);
    }
  }
}
