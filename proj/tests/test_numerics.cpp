#include <doctest.h>

#include "iirrelay/errors.hpp"
#include "iirrelay/numerics.hpp"
#include "test_support.hpp"

using namespace iirrelay;
using testsupport::max_abs_diff;

TEST_CASE("dft of an impulse is all ones") {
  const CVec v{1, 0, 0, 0};
  const CVec out = dft(v);
  for (auto x : out) CHECK(std::abs(x - Complex{1, 0}) < 1e-15);
}

TEST_CASE("dft of a constant is a DC spike") {
  const CVec out = dft(CVec{1, 1, 1, 1});
  CHECK(std::abs(out[0] - Complex{4, 0}) < 1e-15);
  for (int k = 1; k < 4; ++k) CHECK(std::abs(out[k]) < 1e-15);
}

TEST_CASE("idft scales by 1/N") {
  const CVec out = idft(CVec{4, 0, 0, 0});
  for (auto x : out) CHECK(std::abs(x - Complex{1, 0}) < 1e-15);
  const CVec z = idft(CVec(8));
  for (auto x : z) CHECK(x == Complex{});
}

TEST_CASE("empty transforms are rejected") {
  CHECK_THROWS_AS(dft(CVec{}), InvalidInput);
  CHECK_THROWS_AS(idft(CVec{}), InvalidInput);
  CHECK_THROWS_AS(FftPlan(0), InvalidInput);
  CVec wrong(3);
  CHECK_THROWS_AS(FftPlan(4).forward(wrong), InvalidInput);
}

TEST_CASE("round trip and agreement with the direct sum") {
  Rng rng(7);
  for (std::size_t n : {4u, 16u, 128u, 1024u, 12u, 7u}) {
    CAPTURE(n);
    const CVec v = testsupport::random_vector(rng, n);
    const CVec f = dft(v);
    CHECK(max_abs_diff(f, testsupport::naive_dft(v)) < 1e-9 * double(n));
    CHECK(max_abs_diff(idft(f), v) < 1e-12);
  }
}

TEST_CASE("Parseval holds") {
  Rng rng(11);
  const CVec v = testsupport::random_vector(rng, 128);
  const CVec f = dft(v);
  double et = 0.0, ef = 0.0;
  for (auto x : v) et += std::norm(x);
  for (auto x : f) ef += std::norm(x);
  CHECK(std::abs(et - ef / 128.0) / et < 1e-9);
}

TEST_CASE("dft is linear") {
  Rng rng(3);
  const CVec u = testsupport::random_vector(rng, 64);
  const CVec v = testsupport::random_vector(rng, 64);
  const Complex a{0.3, -1.2}, b{2.0, 0.5};
  CVec w(64);
  for (std::size_t i = 0; i < 64; ++i) w[i] = a * u[i] + b * v[i];
  const CVec fu = dft(u), fv = dft(v), fw = dft(w);
  for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(fw[k] - (a * fu[k] + b * fv[k])) < 1e-10);
}

TEST_CASE("gaussian_complex") {
  SUBCASE("zero variance gives exact zero") {
    Rng rng(1);
    CHECK(gaussian_complex(rng, 0.0) == Complex{});
  }
  SUBCASE("negative variance is rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(gaussian_complex(rng, -1e-3), InvalidInput);
  }
  SUBCASE("sample statistics") {
    Rng rng(42);
    const std::size_t draws = 1'000'000;
    double p = 0.0, re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const Complex z = gaussian_complex(rng, 1.0);
      p += std::norm(z);
      re += z.real();
      im += z.imag();
      re2 += z.real() * z.real();
      im2 += z.imag() * z.imag();
      cross += z.real() * z.imag();
    }
    p /= draws;
    CHECK(p >= 0.99);
    CHECK(p <= 1.01);
    CHECK(std::abs(re / draws) < 5e-3);
    CHECK(std::abs(im / draws) < 5e-3);
    CHECK(re2 / draws == doctest::Approx(0.5).epsilon(0.01));
    CHECK(im2 / draws == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(cross / draws) < 5e-3);
  }
  SUBCASE("same seed twice gives the same sequence") {
    Rng a(99), b(99);
    for (int i = 0; i < 1000; ++i) {
      const Complex x = gaussian_complex(a, 2.0);
      const Complex y = gaussian_complex(b, 2.0);
      CHECK(x == y);
    }
  }
  SUBCASE("zero variance keeps the generator aligned") {
    Rng a(5), b(5);
    gaussian_complex(a, 0.0);
    gaussian_complex(b, 1.0);
    CHECK(a.next() == b.next());
  }
}

TEST_CASE("rng streams differ and are reproducible") {
  Rng a(10, 0), b(10, 1), c(10, 1);
  const auto xa = a.next(), xb = b.next();
  CHECK(xa != xb);
  CHECK(xb == c.next());
  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("db conversions") {
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(-15.0) == doctest::Approx(0.0316227766));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
  CHECK(std::isinf(linear_to_db(0.0)));
  CHECK(mean_power(CVec{{1, 1}, {0, 0}}) == doctest::Approx(1.0));
}
