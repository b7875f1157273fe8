#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cspd/snapshot.hpp"
#include "support.hpp"

using namespace cspd;
using namespace testing;

namespace {

template <class F, class S>
concept CanApply = requires(F f, S s) { apply_multiplier(f, s); };

auto matrix_symbol = [](const Vec2d&) { return Matrix2c::Identity().eval(); };
auto scalar_symbol = [](const Vec2d&) { return cplx(1.0); };

}  // namespace

// A matrix-valued symbol on a scalar field is rejected at compile time.
static_assert(!CanApply<ScalarField, decltype(matrix_symbol)>);
static_assert(CanApply<SpinorField, decltype(matrix_symbol)>);
static_assert(CanApply<ScalarField, decltype(scalar_symbol)>);
static_assert(CanApply<SpinorField, decltype(scalar_symbol)>);

TEST_SUITE("spectral") {

TEST_CASE("grid geometry") {
  const Grid g(64, 10.0);
  CHECK(g.mode_spacing() == doctest::Approx(2.0 * std::numbers::pi / 10.0).epsilon(1e-15));
  CHECK(g.position(0) == 0.0);
  CHECK(g.position(32) == doctest::Approx(-5.0));
  CHECK(g.wavenumber(63) == doctest::Approx(-g.mode_spacing()));
  CHECK(g.derivative_wavenumber(32) == 0.0);
  CHECK_THROWS_AS(Grid(63, 1.0), ParameterError);
  CHECK_THROWS_AS(Grid(64, -1.0), ParameterError);
}

TEST_CASE("transform round trip and Parseval") {
  const Grid g(64, 7.0);
  const auto f = random_field<2>(g);
  const auto back = to_physical(to_fourier(f));
  CHECK(max_abs_diff(f, back) / max_abs(f) < 1e-12);
  const double a = squared_l2_norm(f), b = squared_l2_norm(to_fourier(f));
  CHECK(std::abs(a - b) / a < 1e-12);
}

TEST_CASE("representation tags are enforced") {
  const Grid g(16, 1.0);
  const auto f = random_field<1>(g);
  CHECK_THROWS_AS(to_physical(f), RepresentationError);
  CHECK_THROWS_AS(apply_multiplier(f, scalar_symbol), RepresentationError);
  CHECK_THROWS_AS(f + to_fourier(f), RepresentationError);
  CHECK_THROWS_AS(f + random_field<1>(Grid(16, 2.0)), GridMismatch);
}

TEST_CASE("apply_multiplier examples") {
  const Grid g(64, 2.0 * std::numbers::pi * 4.0);  // dk = 1/4
  const auto f = to_fourier(random_field<2>(g));
  CHECK(max_abs_diff(apply_multiplier(f, scalar_symbol), f) == 0.0);

  // <xi> on e^{i x1}: mode 4 has |k| = 1
  const auto pw = to_fourier(plane_wave(g, 4, 0, Vector2c(1.0, 0.0)));
  const auto scaled = apply_multiplier(pw, [](const Vec2d& xi) { return cplx(japanese(xi)); });
  CHECK(max_abs_diff(scaled, std::sqrt(2.0) * pw) < 1e-14);

  // i xi_1 on cos(x1) gives -sin(x1)
  ScalarField c(g, Space::Physical), s(g, Space::Physical);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      c[0](i, j) = std::cos(g.position(i));
      s[0](i, j) = -std::sin(g.position(i));
    }
  const auto d = to_physical(apply_multiplier(to_fourier(c), [](const Vec2d& xi) { return cplx(0.0, xi(0)); }));
  CHECK(max_abs_diff(d, s) < 1e-13);
}

TEST_CASE("matrix multiplier acts modewise") {
  const Grid g(16, 3.0);
  const auto f = to_fourier(random_field<2>(g));
  const Matrix2c m = (Matrix2c() << cplx(1, 2), cplx(0, -1), cplx(3, 0), cplx(-1, 1)).finished();
  const auto out = apply_multiplier(f, [&](const Vec2d&) { return m; });
  const Vector2c v(f[0](3, 5), f[1](3, 5));
  const Vector2c w = m * v;
  CHECK(std::abs(out[0](3, 5) - w(0)) < 1e-15);
  CHECK(std::abs(out[1](3, 5) - w(1)) < 1e-15);
}

TEST_CASE("Littlewood-Paley cutoffs") {
  CHECK(lp_mother(0.5) == 1.0);
  CHECK(lp_mother(2.5) == 0.0);
  CHECK(lp_mother(1.5) == doctest::Approx(0.5));
  CHECK(lp_annulus(1.0, 1.0) == 1.0);
  CHECK(lp_annulus(0.4, 1.0) == 0.0);
  CHECK(lp_annulus(2.0, 1.0) == 0.0);
  for (double r = 0.05; r < 20.0; r += 0.0371) {
    const double s = lp_annulus(r, 0.5) + lp_annulus(r, 1.0) + lp_annulus(r, 2.0) + lp_annulus(r, 4.0);
    if (r >= 0.5 && r <= 4.0) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("lp_project examples") {
  const Grid g(64, 2.0 * std::numbers::pi * 8.0);  // dk = 1/8
  const Vector2c v(1.0, cplx(0.0, 2.0));

  // |k| = N = 1 where rho_N = 1
  const auto on = to_fourier(plane_wave(g, 8, 0, v));
  CHECK(max_abs_diff(lp_project(on, 1.0), on) < 1e-15);
  // applying twice with the same cutoff where rho_N is 0 or 1
  CHECK(max_abs_diff(lp_project(lp_project(on, 1.0), 1.0), lp_project(on, 1.0)) < 1e-15);

  const auto off = to_fourier(plane_wave(g, 32, 0, v));  // |k| = 4
  CHECK(max_abs(lp_project(off, 1.0)) < 1e-14);
  const auto zero_mode = to_fourier(plane_wave(g, 0, 0, v));  // rho_N(0) = 0
  CHECK(max_abs(lp_project(zero_mode, 1.0)) == 0.0);

  CHECK_THROWS_AS(lp_project(on, 3.0), DomainError);       // not a power of two
  CHECK_THROWS_AS(lp_project(on, 1.0 / 64), DomainError);  // below the band
  CHECK_THROWS_AS(lp_project(on, 64.0), DomainError);      // above the band
}

TEST_CASE("fattened projection reproduces P_N") {
  const Grid g(64, 20.0);
  const auto f = to_fourier(random_field<2>(g));
  const double N = 2.0;
  const auto p = lp_project(f, N);
  const auto fat = lp_project(p, N / 2) + lp_project(p, N) + lp_project(p, 2 * N);
  CHECK(max_abs_diff(fat, p) / max_abs(p) < 1e-12);
}

TEST_CASE("partition of unity over the resolvable band") {
  const Grid g(64, 20.0);
  const auto dyadics = resolvable_dyadics(g);
  REQUIRE(dyadics.size() >= 3);
  const double lo = dyadics.front(), hi = dyadics.back();
  auto f = to_fourier(random_field<2>(g));
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const double r = g.xi(i, j).norm();
      if (r < lo || r > hi) f[0](i, j) = f[1](i, j) = 0.0;
    }
  SpinorField sum(g, Space::Fourier);
  for (double N : dyadics) sum += lp_project(f, N);
  CHECK(max_abs_diff(sum, f) / max_abs(f) < 1e-12);
}

TEST_CASE("separated annuli are orthogonal") {
  const Grid g(64, 20.0);
  const auto f = to_fourier(random_field<2>(g));
  const auto a = lp_project(f, 1.0), b = lp_project(f, 4.0);
  CHECK(std::abs(inner_product(a, b)) <= 1e-12 * squared_l2_norm(f));
}

TEST_CASE("free_evolve") {
  const Grid g(32, 9.0);
  const auto f = to_fourier(random_field<2>(g));
  CHECK(max_abs_diff(free_evolve(f, 0.0, Sign::Plus), f) == 0.0);
  const auto e = free_evolve(f, 3.7, Sign::Minus);
  CHECK(std::abs(l2_norm(e) - l2_norm(f)) / l2_norm(f) < 1e-13);
  CHECK(max_abs_diff(free_evolve(e, -3.7, Sign::Minus), f) / max_abs(f) < 1e-12);

  // plane-wave phase against a long double reference
  const Grid h(32, 2.0 * std::numbers::pi);
  const auto pw = to_fourier(plane_wave(h, 3, -2, Vector2c(1.0, 0.0)));
  const double t = 12.25;
  const auto out = free_evolve(pw, t, Sign::Plus);
  const long double w = std::sqrt(1.0L + 9.0L + 4.0L);
  const cplx expect(static_cast<double>(std::cos(-t * w)), static_cast<double>(std::sin(-t * w)));
  CHECK(std::abs(out[0](3, fft_index(h, -2)) - expect) < 1e-12);

  // commutes with a radial multiplier
  auto radial = [](const Vec2d& xi) { return cplx(std::exp(-xi.squaredNorm())); };
  const auto ab = apply_multiplier(free_evolve(f, 2.0, Sign::Plus), radial);
  const auto ba = free_evolve(apply_multiplier(f, radial), 2.0, Sign::Plus);
  CHECK(max_abs_diff(ab, ba) < 1e-13);
}

TEST_CASE("dealias") {
  const Grid g(32, 2.0 * std::numbers::pi);
  const Vector2c v(1.0, 0.0);
  const auto inside = to_fourier(plane_wave(g, 7, -7, v));
  CHECK(max_abs_diff(dealias(inside), inside) < 1e-14);
  const auto outside = to_fourier(plane_wave(g, 8, 0, v));
  CHECK(max_abs(dealias(outside)) < 1e-14);
  CHECK_THROWS_AS(dealias(plane_wave(g, 1, 1, v)), RepresentationError);
}

TEST_CASE("dealiased cubic product equals the truncated mode sum") {
  const Grid g(32, 2.0 * std::numbers::pi);
  const Vector2c v(1.0, 0.0);
  struct Case {
    int a1, a2, b1, b2, c1, c2;
  };
  // (7,0)x3 aliases into -11, which the cut removes; the second stays inside.
  for (const Case& k : {Case{3, -2, 5, 1, -4, 6}, Case{7, 0, 7, 0, 7, 0}, Case{-6, 5, -7, 4, 6, -7}}) {
    const cplx A(0.3, 0.1), B(-0.2, 0.5), C(0.7, -0.4);
    const auto a = plane_wave(g, k.a1, k.a2, v, A);
    const auto b = plane_wave(g, k.b1, k.b2, v, B);
    const auto c = plane_wave(g, k.c1, k.c2, v, C);
    ScalarField prod(g, Space::Physical);
    prod[0] = a[0] * b[0] * c[0];
    const auto got = dealias(to_fourier(prod));

    ScalarField expect(g, Space::Fourier);
    const int s1 = k.a1 + k.b1 + k.c1, s2 = k.a2 + k.b2 + k.c2;
    if (std::abs(s1) < 8 && std::abs(s2) < 8) expect[0](fft_index(g, s1), fft_index(g, s2)) = A * B * C;
    CHECK(max_abs_diff(got, expect) < 1e-15);
  }
}

TEST_CASE("snapshot round trip and header layout") {
  const Grid g(8, 3.5);
  const auto f = to_fourier(random_field<2>(g));
  const auto path = std::filesystem::temp_directory_path() / "cspd_snapshot_test.cspd";
  write_snapshot(path.string(), f);
  const auto back = field_from_snapshot<2>(read_snapshot(path.string()));
  CHECK(back.space == Space::Fourier);
  CHECK(back.grid == g);
  CHECK(max_abs_diff(back, f) == 0.0);

  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::memcmp(magic, "CSPD", 4) == 0);
  std::uint32_t version = 0, n = 0;
  double L = 0.0;
  std::uint8_t rep = 9, comps = 9;
  is.read(reinterpret_cast<char*>(&version), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&L), 8);
  is.read(reinterpret_cast<char*>(&rep), 1);
  is.read(reinterpret_cast<char*>(&comps), 1);
  CHECK(version == 1);
  CHECK(n == 8);
  CHECK(L == 3.5);
  CHECK(rep == 1);
  CHECK(comps == 2);
  // first point: component 0 then component 1
  double re = 0.0, im = 0.0;
  is.read(reinterpret_cast<char*>(&re), 8);
  is.read(reinterpret_cast<char*>(&im), 8);
  CHECK(cplx(re, im) == f[0](0, 0));
  is.read(reinterpret_cast<char*>(&re), 8);
  is.read(reinterpret_cast<char*>(&im), 8);
  CHECK(cplx(re, im) == f[1](0, 0));
  is.close();

  {
    std::ofstream bad(path, std::ios::binary);
    bad << "NOPE";
  }
  CHECK_THROWS_AS(read_snapshot(path.string()), FormatError);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
