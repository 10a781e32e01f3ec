#include "doctest.h"

#include <cmath>

#include "gsc/margins.hpp"
#include "gsc/response.hpp"
#include "gsc/rng.hpp"
#include "oracle/oracles.hpp"

using namespace gsc;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

LinearModel model2(double a, double b) { return LinearModel{vec2(a, b)}; }

// User objective for GP-family settings: indicator of the desired prediction.
std::function<double(const Vec&)> gp_utility(const LinearModel& m, int z) {
  return [&m, z](const Vec& v) { return sign_pred(dot(m.w, v)) == z ? 1.0 : 0.0; };
}

LinearModel random_model(Rng& rng, int d) {
  Vec w(d);
  do {
    for (int i = 0; i < d; ++i) w[i] = rng.normal();
  } while (w.norm() < 1e-3);
  // norms between roughly 1 and 3 exercise the normalization
  w *= (1.0 + 2.0 * rng.uniform()) / w.norm();
  return LinearModel{w};
}

}  // namespace

TEST_CASE("target_label per setting") {
  Example ex{vec2(0, 0), TargetLabel{-1}, +1};
  CHECK(target_label(ResponseSetting::sc(), ex) == +1);
  CHECK(target_label(ResponseSetting::adv(), ex) == -1);
  CHECK(target_label(ResponseSetting::nl(0.1), ex) == -1);
  CHECK(target_label(ResponseSetting::gp(), ex) == -1);

  Example no_target{vec2(0, 0), std::monostate{}, +1};
  CHECK_THROWS_AS(target_label(ResponseSetting::gp(), no_target), std::invalid_argument);
}

TEST_CASE("respond_gp_exact: reachable point lands on the boundary") {
  Vec moved = respond_gp_exact(model2(1, 0), vec2(-1, 0), +1);
  CHECK(moved[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(moved[1] == doctest::Approx(0.0).epsilon(1e-12));
  // cross-check against the grid argmax of the user objective
  LinearModel m = model2(1, 0);
  auto grid = oracle::grid_argmax_response(gp_utility(m, +1), vec2(-1, 0), 0.5, 5.0, 0.01);
  CHECK(oracle::response_objective(gp_utility(m, +1), vec2(-1, 0), moved, 0.5) >=
        grid.objective - 0.01);
}

TEST_CASE("respond_gp_exact: too expensive and already-satisfied points stay") {
  CHECK(respond_gp_exact(model2(1, 0), vec2(-3, 0), +1) == vec2(-3, 0));
  CHECK(respond_gp_exact(model2(1, 0), vec2(2, 5), +1) == vec2(2, 5));
}

TEST_CASE("respond_gp_exact: negative-target user overshoots by eta") {
  const double eta = 1e-9;
  LinearModel m = model2(2, 0);
  Vec moved = respond_gp_exact(m, vec2(1, 1), -1, eta);
  CHECK(moved[0] == doctest::Approx(0.0 - eta).epsilon(1e-3));
  CHECK(moved[1] == doctest::Approx(1.0));
  CHECK(sign_pred(dot(m.w, moved)) == -1);
  auto grid = oracle::grid_argmax_response(gp_utility(m, -1), vec2(1, 1), 0.5, 5.0, 0.01);
  CHECK(oracle::response_objective(gp_utility(m, -1), vec2(1, 1), moved, 0.5) >=
        grid.objective - 0.01);
}

TEST_CASE("respond_gp_exact: exact indifference stays put") {
  // flipping cost exactly equals the budget
  CHECK(respond_gp_exact(model2(1, 0), vec2(-2, 0), +1) == vec2(-2, 0));
}

TEST_CASE("respond_gp_exact: boundary point with negative target moves") {
  LinearModel m = model2(1, 0);
  Vec moved = respond_gp_exact(m, vec2(0, 3), -1);
  CHECK(sign_pred(dot(m.w, moved)) == -1);
  CHECK((moved - vec2(0, 3)).norm() <= 1e-8);
}

TEST_CASE("respond_gp_smoothed: gate values across the band") {
  LinearModel m = model2(1, 0);

  // s = -1: cond = 1, gate = sigmoid(1) ~ 0.731; result between x and projection
  Vec x = vec2(-1, 0);
  Vec smoothed = respond_gp_smoothed(m, x, +1, 1.0);
  double gate = 1.0 / (1.0 + std::exp(-1.0));
  CHECK(smoothed[0] == doctest::Approx(-1.0 + gate));
  CHECK(smoothed[0] > -1.0);
  CHECK(smoothed[0] < 0.0);

  // s = -5 and s = +3: saturated gate (sigma(-15) ~ 3e-7), no movement
  CHECK((respond_gp_smoothed(m, vec2(-5, 0), +1, 1.0) - vec2(-5, 0)).norm() < 1e-5);
  CHECK((respond_gp_smoothed(m, vec2(3, 0), +1, 1.0) - vec2(3, 0)).norm() < 1e-5);
}

TEST_CASE("respond_gp_smoothed converges to the exact response at high temperature") {
  Rng rng(11);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Rng r = rng.split(trial);
    LinearModel m = random_model(r, 2);
    Vec x = vec2(4.0 * r.normal(), 4.0 * r.normal());
    int z = r.rademacher();
    double s = z * dot(m.w, x) / m.w.norm();
    if (std::abs(s) < 0.05 || std::abs(s + 2.0) < 0.05) continue;  // boundary set
    Vec exact = respond_gp_exact(m, x, z);
    Vec smoothed = respond_gp_smoothed(m, x, z, 1e3);
    CHECK((exact - smoothed).norm() <= 1e-6);
    ++checked;
  }
  CHECK(checked > 300);
}

TEST_CASE("respond_noise: zero perturbation reduces to plain response") {
  LinearModel theta = model2(1, 0);
  Vec x = vec2(-1.5, 2);
  CHECK(respond_noise(theta, x, Vec::Zero(2)) == respond_gp_exact(theta, x, +1));
}

TEST_CASE("respond_noise: responds against the perturbed model") {
  LinearModel theta = model2(1, 0);
  Vec z = vec2(-1, 1);  // theta + z = (0, 1)
  Vec x = vec2(3, -1);
  Vec moved = respond_noise(theta, x, z);
  LinearModel perturbed = model2(0, 1);
  auto grid =
      oracle::grid_argmax_response(gp_utility(perturbed, +1), x, 0.5, 5.0, 0.01);
  CHECK(oracle::response_objective(gp_utility(perturbed, +1), x, moved, 0.5) >=
        grid.objective - 0.01);
  CHECK(moved[1] == doctest::Approx(0.0).epsilon(1e-12));

  // already positive under theta + z: unchanged
  CHECK(respond_noise(theta, vec2(0, 4), z) == vec2(0, 4));
  CHECK_THROWS_AS(respond_noise(theta, x, Vec::Zero(3)), std::invalid_argument);
}

TEST_CASE("respond_ppe_squared: scalar case, realized history, huge n") {
  BilinearModel W{Mat::Ones(1, 1)};
  History z;
  z.items = Mat::Ones(1, 1);
  z.labels = Vec::Ones(1);
  Vec x0 = Vec::Zero(1);
  Vec moved = respond_ppe_squared(W, x0, z);
  CHECK(moved[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  // fine numeric minimization of (x'-1)^2 + 0.5 x'^2 agrees
  double best = 0.0, best_obj = 1e100;
  for (double v = -2.0; v <= 2.0; v += 1e-5) {
    double obj = (v - 1.0) * (v - 1.0) + 0.5 * v * v;
    if (obj < best_obj) {
      best_obj = obj;
      best = v;
    }
  }
  CHECK(moved[0] == doctest::Approx(best).epsilon(1e-4));

  // history already realized at x: both terms minimized at x
  Vec x1 = Vec::Ones(1);
  CHECK((respond_ppe_squared(W, x1, z) - x1).norm() <= 1e-12);

  // dominant regularizer: keep the loss term fixed (one live item, the rest
  // zero vectors) while n scales the movement penalty; x' -> x
  History big;
  const int n = 1000000;
  big.items = Mat::Zero(n, 1);
  big.items(0, 0) = 1.0;
  big.labels = -Vec::Ones(n);
  Vec far = vec2(3, 0).head(1);
  CHECK((respond_ppe_squared(W, far, big) - far).norm() <= 1e-4);
}

TEST_CASE("respond_ppe_iterative: fixed points and movement direction") {
  // margins already >= 1 under the hinge: zero gradient at init
  BilinearModel W{Mat::Identity(2, 2)};
  History z;
  z.items = Mat(1, 2);
  z.items << 1, 0;
  z.labels = Vec::Ones(1);
  Vec x = vec2(2, 1);  // margin = 2
  CHECK((respond_ppe_iterative(W, x, z, PpeUserLoss::Hinge) - x).norm() <= 1e-12);

  // single active history item: movement is along a^T W
  Vec x_active = vec2(0, 1);
  Vec moved = respond_ppe_iterative(W, x_active, z, PpeUserLoss::Hinge);
  Vec dir = moved - x_active;
  CHECK(dir[0] > 0.0);
  CHECK(std::abs(dir[1]) <= 1e-12);

  // grid search over the user objective confirms the approximate minimizer
  auto objective = [&](const Vec& v) {
    double hinge = std::max(0.0, 1.0 - z.labels[0] * z.items.row(0).dot(W.W * v));
    return hinge + 0.5 * (v - x_active).squaredNorm();
  };
  double best_obj = 1e100;
  Vec best = x_active;
  for (double a = -2.0; a <= 2.0; a += 0.005) {
    for (double b = -2.0; b <= 2.0; b += 0.005) {
      Vec v = vec2(a, b);
      if (objective(v) < best_obj) {
        best_obj = objective(v);
        best = v;
      }
    }
  }
  CHECK((moved - best).norm() <= 0.02);

  // contradictory logistic pair: at a^T W x = 0 the exponential gradients
  // cancel by symmetry and the user stays put
  History pair;
  pair.items = Mat(2, 2);
  pair.items << 1, 0, 1, 0;
  pair.labels = Vec(2);
  pair.labels << 1, -1;
  Vec x_sym = vec2(0, 1);
  CHECK((respond_ppe_iterative(W, x_sym, pair, PpeUserLoss::Logistic) - x_sym).norm() <=
        1e-12);
}

TEST_CASE("respond dispatch: setting equivalences") {
  LinearModel m = model2(1.3, -0.4);
  Vec x = vec2(-0.7, 0.9);

  Example sc_ex{x, std::monostate{}, -1};
  Example gp_pos{x, TargetLabel{+1}, -1};
  CHECK(respond(ResponseSetting::sc(), m, sc_ex) == respond(ResponseSetting::gp(), m, gp_pos));

  Example adv_ex{x, std::monostate{}, +1};
  Example gp_neg{x, TargetLabel{-1}, +1};
  CHECK(respond(ResponseSetting::adv(), m, adv_ex) ==
        respond(ResponseSetting::gp(), m, gp_neg));

  Example nl_ex{x, TargetLabel{+1}, +1};
  CHECK(respond(ResponseSetting::nl(0.0), m, nl_ex) ==
        respond(ResponseSetting::gp(), m, gp_pos));

  PpeExample pex{x, History{}, vec2(1, 0), +1};
  CHECK_THROWS_AS(respond(ResponseSetting::sc(), BilinearModel{Mat::Identity(2, 2)}, pex),
                  std::invalid_argument);
}

TEST_CASE("grid oracle: degenerate objectives keep users in place") {
  LinearModel m = model2(1, 0);
  Vec x = vec2(-1, 0);
  // enormous cost weight: any move is unaffordable
  auto grid = oracle::grid_argmax_response(gp_utility(m, +1), x, 1e9, 2.0, 0.05);
  CHECK(grid.argmax == x);
  // constant utility: strict improvement never triggers
  auto flat = oracle::grid_argmax_response([](const Vec&) { return 0.25; }, x, 0.5, 2.0, 0.05);
  CHECK(flat.argmax == x);
}

TEST_CASE("response properties on random GP instances") {
  Rng rng(23);
  const double eta = 1e-9;
  for (int trial = 0; trial < 1000; ++trial) {
    Rng r = rng.split(trial);
    LinearModel m = random_model(r, 2);
    Vec x = vec2(5.0 * (2.0 * r.uniform() - 1.0), 5.0 * (2.0 * r.uniform() - 1.0));
    int z = r.rademacher();
    Vec moved = respond_gp_exact(m, x, z, eta);

    // strict improvement: moving must strictly beat staying
    auto util = gp_utility(m, z);
    double gain = util(moved) - 0.5 * (x - moved).norm() - util(x);
    if ((moved - x).norm() > 0.0) {
      CHECK(gain > 0.0);
    } else {
      CHECK(gain == 0.0);
    }

    // budget: movement is at most 2 (+eta)
    CHECK((moved - x).norm() <= 2.0 + 2.0 * eta);

    // idempotence up to eta
    Vec again = respond_gp_exact(m, moved, z, eta);
    CHECK((again - moved).norm() <= 2.0 * eta);
  }
}

TEST_CASE("flip behavior matches the flipping-cost rule on random instances") {
  Rng rng(29);
  for (int trial = 0; trial < 2000; ++trial) {
    Rng r = rng.split(trial);
    int d = 2 + static_cast<int>(r.uniform_int(4));
    LinearModel m = random_model(r, d);
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = 4.0 * r.normal();
    int target = r.rademacher();
    Example ex{x, TargetLabel{target}, +1};
    ResponseSetting setting = ResponseSetting::nl(0.0);

    int before = sign_pred(dot(m.w, x));
    int after = post_response_label(setting, m, ex);
    Vec moved = respond(setting, m, ex);
    // geometric sign agrees whenever the landing is not on the fp boundary
    if (std::abs(dot(m.w, moved)) > 1e-12 * m.w.norm()) {
      CHECK(after == sign_pred(dot(m.w, moved)));
    }

    if (before == target) {
      CHECK(after == before);
      CHECK(moved == x);
    } else {
      bool flipped = after != before;
      CHECK(flipped == (flipping_cost(m, x) < 2.0));
    }
  }
}
