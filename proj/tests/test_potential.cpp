#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kdvnf/potential.hpp"

using namespace kdvnf;

TEST_CASE("trig potential construction") {
  Potential zero = make_trig_potential({});
  CHECK(zero.l2_norm() == 0.0);
  CHECK(eval_potential(zero, 0.37) == 0.0);

  Potential cosq = make_trig_potential({{1, 1.0}, {-1, 1.0}});
  for (double x : {0.0, 0.2, 0.31, 0.77})
    CHECK(eval_potential(cosq, x) == doctest::Approx(2.0 * std::cos(2 * kPi * x)).epsilon(1e-13));

  Potential mix = make_trig_potential(
      {{1, 1.0}, {-1, 1.0}, {2, cplx{0, -0.5}}, {-2, cplx{0, 0.5}}});
  for (double x : {0.1, 0.43, 0.9})
    CHECK(eval_potential(mix, x) ==
          doctest::Approx(2.0 * std::cos(2 * kPi * x) + std::sin(4 * kPi * x)).epsilon(1e-13));

  CHECK_THROWS_AS(make_trig_potential({{1, cplx{0, 1.0}}, {-1, cplx{0, 1.0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_trig_potential({{0, 1.0}}), std::invalid_argument);
}

TEST_CASE("lame generator basics") {
  auto small = make_lame_one_gap(1e-4);
  CHECK(fn_sup(small.q.as_fn()) < 1e-5);

  auto lame = make_lame_one_gap(0.5);
  CHECK(std::abs(lame.q.coeff(0)) < 1e-12);
  // sampled mean
  double mean = 0;
  int N = 512;
  for (int i = 0; i < N; ++i) mean += eval_potential(lame.q, double(i) / N);
  CHECK(std::abs(mean / N) < 1e-12);
  CHECK(lame.q.as_fn().is_hermitian());
  // closed forms for K, E at k = 0.5
  CHECK(lame.K == doctest::Approx(1.6857503548125960429).epsilon(1e-13));
  CHECK(lame.E == doctest::Approx(1.4674622093394271383).epsilon(1e-13));

  CHECK_THROWS_AS(make_lame_one_gap(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lame_one_gap(1.0), std::invalid_argument);
}

TEST_CASE("reversal") {
  Potential zero = make_trig_potential({});
  CHECK(reverse_potential(zero).l2_norm() == 0.0);

  Potential cosq = make_trig_potential({{1, 1.0}, {-1, 1.0}});
  Potential rc = reverse_potential(cosq);
  for (int n = -1; n <= 1; ++n) CHECK(rc.coeff(n) == cosq.coeff(n));

  Potential sinq = make_trig_potential({{2, cplx{0, -0.5}}, {-2, cplx{0, 0.5}}});
  Potential rs = reverse_potential(sinq);
  CHECK(rs.coeff(2) == -sinq.coeff(2));

  auto lame = make_lame_one_gap(0.37).q;
  Potential rr = reverse_potential(reverse_potential(lame));
  for (int n = -lame.n_pot; n <= lame.n_pot; ++n) CHECK(rr.coeff(n) == lame.coeff(n));

  // eval(reverse(q), x) = eval(q, -x) on the grid
  for (int i = 0; i < 16; ++i) {
    double x = double(i) / 16;
    CHECK(eval_potential(reverse_potential(lame), x) ==
          doctest::Approx(eval_potential(lame, -x)).epsilon(1e-12));
  }
}

TEST_CASE("translation") {
  Potential cosq = make_trig_potential({{1, 1.0}, {-1, 1.0}});
  Potential t0 = translate_potential(cosq, 0.0);
  Potential t1 = translate_potential(cosq, 1.0);
  for (int n : {-1, 1}) {
    CHECK(std::abs(t0.coeff(n) - cosq.coeff(n)) < 1e-15);
    CHECK(std::abs(t1.coeff(n) - cosq.coeff(n)) < 1e-14);
  }
  Potential tq = translate_potential(cosq, 0.25);
  for (double x : {0.1, 0.6})
    CHECK(eval_potential(tq, x) == doctest::Approx(-2.0 * std::sin(2 * kPi * x)).epsilon(1e-13));

  // group property
  auto lame = make_lame_one_gap(0.6).q;
  Potential a = translate_potential(translate_potential(lame, 0.13), 0.29);
  Potential b = translate_potential(lame, 0.42);
  for (int n = -lame.n_pot; n <= lame.n_pot; ++n)
    CHECK(std::abs(a.coeff(n) - b.coeff(n)) < 1e-14 * std::max(1.0, std::abs(b.coeff(n))));
}

TEST_CASE("pointwise evaluation and derivatives") {
  Potential zero = make_trig_potential({});
  CHECK(eval_potential(zero, 0.5) == 0.0);
  Potential cosq = make_trig_potential({{1, 1.0}, {-1, 1.0}});
  CHECK(std::abs(eval_derivative(cosq, 0.0, 1)) < 1e-13);
  CHECK(std::abs(eval_potential(cosq, 0.25)) < 1e-13);
  CHECK(eval_derivative(cosq, 0.0, 2) == doctest::Approx(-2.0 * sqr(2 * kPi)).epsilon(1e-12));
}

TEST_CASE("hkdv invariances") {
  auto lame = make_lame_one_gap(0.5).q;
  double h0 = hkdv(lame);
  CHECK(hkdv(translate_potential(lame, 0.3217)) == doctest::Approx(h0).epsilon(1e-9));
  CHECK(hkdv(reverse_potential(lame)) == doctest::Approx(h0).epsilon(1e-9));
  // closed form for q = 2 cos(2 pi x): 1/2 int q_x^2 = (2 pi)^2, int q^3 = 0
  Potential cosq = make_trig_potential({{1, 1.0}, {-1, 1.0}});
  CHECK(hkdv(cosq) == doctest::Approx(sqr(2 * kPi)).epsilon(1e-13));
}

TEST_CASE("json round trip") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::pair<int, cplx>> coeffs;
  for (int n = 1; n <= 5; ++n) {
    cplx v{u(rng), u(rng)};
    coeffs.push_back({n, v});
    coeffs.push_back({-n, std::conj(v)});
  }
  Potential q = make_trig_potential(coeffs);
  Potential r = potential_from_json(potential_to_json(q));
  REQUIRE(r.n_pot == q.n_pot);
  for (int n = -q.n_pot; n <= q.n_pot; ++n) CHECK(std::abs(r.coeff(n) - q.coeff(n)) < 1e-15);
}
