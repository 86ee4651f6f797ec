// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "qrs/bell.hpp"
#include "qrs/bloch.hpp"
#include "qrs/density_matrix.hpp"
#include "qrs/measurement.hpp"
#include "qrs/parallel.hpp"
#include "qrs/pauli.hpp"
#include "qrs/rng.hpp"
#include "qrs/sensing.hpp"

#include "oracles.hpp"

using namespace qrs;

namespace {

BlochVector random_bloch(SplitRng& rng) {
  for (;;) {
    const double x = 2.0 * rng.uniform01() - 1.0;
    const double y = 2.0 * rng.uniform01() - 1.0;
    const double z = 2.0 * rng.uniform01() - 1.0;
    if (x * x + y * y + z * z <= 1.0) return {x, y, z};
  }
}

template <int Dim>
DensityMatrix<Dim> random_density(SplitRng& rng) {
  Eigen::Matrix<cplx, Dim, Dim> g;
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j)
      g(i, j) = cplx(2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0);
  Eigen::Matrix<cplx, Dim, Dim> m = g * g.adjoint();
  m /= m.trace();
  return DensityMatrix<Dim>::from_matrix(m);
}

}  // namespace

TEST_CASE("pauli matrices and kron layout") {
  REQUIRE((sigma(Axis::X) - oracle::sx()).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((sigma(Axis::Y) - oracle::sy()).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((sigma(Axis::Z) - oracle::sz()).cwiseAbs().maxCoeff() == 0.0);
  // first factor owns the high-order bit of the |c s> index
  const Mat4 k = kron(sigma_z(), identity2());
  REQUIRE(k(0, 0) == cplx(1, 0));
  REQUIRE(k(1, 1) == cplx(1, 0));
  REQUIRE(k(2, 2) == cplx(-1, 0));
  REQUIRE(k(3, 3) == cplx(-1, 0));
  SplitRng rng(11);
  for (int n = 0; n < 20; ++n) {
    Mat2 a, b;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        a(i, j) = cplx(rng.uniform01(), rng.uniform01());
        b(i, j) = cplx(rng.uniform01(), rng.uniform01());
      }
    REQUIRE((kron(a, b) - oracle::kron(a, b)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("projectors are idempotent and complementary") {
  for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
    const Mat2 p = plus_projector(ax);
    const Mat2 q = minus_projector(ax);
    REQUIRE((p * p - p).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((q * q - q).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((p + q - identity2()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("density matrix validation and clamping") {
  // non-Hermitian
  Mat2 bad = Mat2::Zero();
  bad(0, 0) = 0.5;
  bad(1, 1) = 0.5;
  bad(0, 1) = cplx(0.1, 0.0);
  bad(1, 0) = cplx(0.3, 0.0);
  REQUIRE_THROWS_AS(Density2::from_matrix(bad), invalid_state_error);

  // wrong trace
  Mat2 off = Mat2::Identity();
  REQUIRE_THROWS_AS(Density2::from_matrix(off), invalid_state_error);

  // genuinely negative eigenvalue is a hard error
  Mat2 neg = Mat2::Zero();
  neg(0, 0) = 1.0 + 1e-9;
  neg(1, 1) = -1e-9;
  REQUIRE_THROWS_AS(Density2::from_matrix(neg), invalid_state_error);

  // tiny float drift is clamped back to a valid state
  Mat2 drift = Mat2::Zero();
  drift(0, 0) = 1.0 + 5e-11;
  drift(1, 1) = -5e-11;
  const Density2 fixed = Density2::from_matrix(drift);
  fixed.validate();
  REQUIRE(std::abs(fixed.matrix().trace().real() - 1.0) < 1e-12);
  REQUIRE(oracle::eig2(fixed.matrix())[1] >= 0.0);
}

TEST_CASE("density_from_bloch examples") {
  const Density2 mixed = density_from_bloch({0.0, 0.0, 0.0});
  REQUIRE((mixed.matrix() - 0.5 * Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  const Density2 plus = density_from_bloch({1.0, 0.0, 0.0});
  Mat2 plus_lit;
  plus_lit << 0.5, 0.5, 0.5, 0.5;
  REQUIRE((plus.matrix() - plus_lit).cwiseAbs().maxCoeff() < 1e-15);

  const Density2 tilted = density_from_bloch({0.6, 0.0, 0.8});
  const auto eig = oracle::eig2(tilted.matrix());
  REQUIRE(eig[0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(eig[1] == Catch::Approx(0.0).margin(1e-12));

  REQUIRE_THROWS_AS(density_from_bloch({1.0, 1.0, 0.0}), invalid_state_error);
}

TEST_CASE("bloch round trip on random states") {
  SplitRng rng(42);
  for (int n = 0; n < 1000; ++n) {
    const BlochVector b = random_bloch(rng);
    const BlochVector back = bloch_from_density(density_from_bloch(b));
    REQUIRE(std::abs(back.x - b.x) < 1e-12);
    REQUIRE(std::abs(back.y - b.y) < 1e-12);
    REQUIRE(std::abs(back.z - b.z) < 1e-12);
  }
}

TEST_CASE("bell states match literal vectors and are orthonormal") {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Vec4 v = bell_vector(i, j);
      const oracle::V4 ref = oracle::bell(i, j);
      REQUIRE((v - ref).cwiseAbs().maxCoeff() < 1e-15);
      // maximal entanglement: both marginals are I/2
      for (Slot slot : {Slot::transmitted, Slot::kept}) {
        const Density2 red = partial_trace(bell_state(i, j), slot);
        REQUIRE((red.matrix() - 0.5 * Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const cplx ip = oracle::bell(a >> 1, a & 1).adjoint() * bell_vector(b >> 1, b & 1);
      REQUIRE(std::abs(ip - (a == b ? cplx(1, 0) : cplx(0, 0))) < 1e-15);
    }
}

TEST_CASE("partial trace agrees with index-summation oracle") {
  SplitRng rng(7);
  for (int n = 0; n < 50; ++n) {
    const Density4 rho = random_density<4>(rng);
    const Mat2 kept = partial_trace(rho, Slot::kept).matrix();
    const Mat2 trans = partial_trace(rho, Slot::transmitted).matrix();
    REQUIRE((kept - oracle::trace_out_first(rho.matrix())).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((trans - oracle::trace_out_second(rho.matrix())).cwiseAbs().maxCoeff() < 1e-12);
  }
  // product state: tracing out the first factor leaves the second
  const Vec2 zero = (Vec2() << 1.0, 0.0).finished();
  const Vec2 plus = (Vec2() << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)).finished();
  const Density4 prod = Density4::pure(kron(zero, plus));
  const Mat2 back = partial_trace(prod, Slot::kept).matrix();
  Mat2 plus_lit;
  plus_lit << 0.5, 0.5, 0.5, 0.5;
  REQUIRE((back - plus_lit).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fidelity against pure references") {
  const Density4 phi = bell_state(0, 0);
  REQUIRE(fidelity_pure(phi, phi) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(fidelity_pure(bell_state(0, 1), phi) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(fidelity_pure(bell_state(1, 0), phi) == Catch::Approx(0.0).margin(1e-12));

  // linearity of the trace
  const Mat4 mix = 0.8 * phi.matrix() + 0.2 * bell_state(1, 0).matrix();
  REQUIRE(fidelity_pure(Density4::from_matrix(mix), phi) == Catch::Approx(0.8).margin(1e-12));

  SplitRng rng(3);
  for (int n = 0; n < 30; ++n) {
    const Density4 a = random_density<4>(rng);
    const Density4 b = random_density<4>(rng);
    const double lam = rng.uniform01();
    const Mat4 m = lam * a.matrix() + (1.0 - lam) * b.matrix();
    const double lhs = fidelity_pure(Density4::from_matrix(m), phi);
    const double rhs = lam * fidelity_pure(a, phi) + (1.0 - lam) * fidelity_pure(b, phi);
    REQUIRE(lhs == Catch::Approx(rhs).margin(1e-12));
  }

  // the reference must be pure
  const Density4 mixed = Density4::from_matrix(0.25 * Mat4::Identity());
  REQUIRE_THROWS_AS(fidelity_pure(phi, mixed), invalid_observable_error);
}

TEST_CASE("fidelity with the maximally mixed state") {
  REQUIRE(fidelity_maximally_mixed(density_from_bloch({0, 0, 0})) ==
          Catch::Approx(1.0).margin(1e-12));
  REQUIRE(fidelity_maximally_mixed(density_from_bloch({1, 0, 0})) ==
          Catch::Approx(0.5).margin(1e-12));
  const double eps = 0.1;
  const double r = 2.0 * std::sqrt(eps - eps * eps);
  REQUIRE(fidelity_maximally_mixed(density_from_bloch({r, 0, 0})) ==
          Catch::Approx(1.0 - eps).margin(1e-12));
  SplitRng rng(5);
  for (int n = 0; n < 50; ++n) {
    const Density2 rho = density_from_bloch(random_bloch(rng));
    const double via_uhlmann = oracle::uhlmann2(rho.matrix(), 0.5 * Mat2::Identity());
    REQUIRE(fidelity_maximally_mixed(rho) == Catch::Approx(via_uhlmann).margin(1e-12));
  }
}

TEST_CASE("sensing field timing") {
  SensingField f{0.1, 1.0, 0.2, 0.3, 10.0};
  REQUIRE(f.repetition_count() == 6);  // floor(10 / 1.5)
  f.T = 1.0;
  f.t_p = 0.0;
  f.t_r = 0.0;
  REQUIRE(f.repetition_count() == 1);
  f.T = 0.5;
  REQUIRE_THROWS_AS(f.repetition_count(), parameter_error);
  f.t = 0.0;
  REQUIRE_THROWS_AS(f.validate(), parameter_error);
  REQUIRE_THROWS_AS((SensingField{0.0, 1.0, -0.1, 0.0, 0.0}.validate()), parameter_error);
}

TEST_CASE("phase evolution is exact") {
  const Density2 plus = density_from_bloch({1, 0, 0});

  // omega*t = 0 is the identity
  REQUIRE((evolve_phase(plus, {0.0, 1.0, 0, 0, 0}).matrix() - plus.matrix())
              .cwiseAbs()
              .maxCoeff() < 1e-15);

  // quarter rotation about z sends +x to +y
  const BlochVector quarter =
      bloch_from_density(evolve_phase(plus, {std::acos(-1.0) / 2.0, 1.0, 0, 0, 0}));
  REQUIRE(quarter.x == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(quarter.y == Catch::Approx(1.0).margin(1e-12));

  // omega*t = 0.3 against a literal unitary-conjugation oracle
  const double wt = 0.3;
  const Density2 rotated = evolve_phase(plus, {wt, 1.0, 0, 0, 0});
  oracle::M2 u = oracle::M2::Zero();
  u(0, 0) = std::exp(oracle::cplx(0, -wt / 2));
  u(1, 1) = std::exp(oracle::cplx(0, wt / 2));
  const oracle::M2 ref = u * plus.matrix() * u.adjoint();
  REQUIRE((rotated.matrix() - ref).cwiseAbs().maxCoeff() < 1e-15);
  REQUIRE(born_probability(rotated, plus_projector(Axis::Y)) ==
          Catch::Approx((1.0 + std::sin(0.3)) / 2.0).margin(1e-12));

  // exact conservation laws on random states and angles
  SplitRng rng(9);
  for (int n = 0; n < 200; ++n) {
    const BlochVector b = random_bloch(rng);
    const Density2 rho = density_from_bloch(b);
    const double angle = 20.0 * rng.uniform01() - 10.0;
    const Density2 out = evolve_phase(rho, {angle, 1.0, 0, 0, 0});
    const BlochVector ob = bloch_from_density(out);
    REQUIRE(ob.z == b.z);  // diagonal untouched, bitwise
    REQUIRE(std::abs((ob.x * ob.x + ob.y * ob.y) - (b.x * b.x + b.y * b.y)) < 1e-12);
    REQUIRE(std::abs(out.matrix().trace().real() - 1.0) < 1e-15);
    const auto e0 = oracle::eig2(rho.matrix());
    const auto e1 = oracle::eig2(out.matrix());
    REQUIRE(std::abs(e0[0] - e1[0]) < 1e-12);
    REQUIRE(std::abs(e0[1] - e1[1]) < 1e-12);
  }
}

TEST_CASE("born probabilities") {
  const Density2 plus = density_from_bloch({1, 0, 0});
  REQUIRE(born_probability(plus, plus_projector(Axis::Y)) == Catch::Approx(0.5).margin(1e-12));
  const Density2 mixed = density_from_bloch({0, 0, 0});
  REQUIRE(born_probability(mixed, plus_projector(Axis::X)) == Catch::Approx(0.5).margin(1e-12));

  SplitRng rng(13);
  for (int n = 0; n < 200; ++n) {
    const BlochVector b = random_bloch(rng);
    const Density2 rho = density_from_bloch(b);
    const double p = born_probability(rho, plus_projector(Axis::Y));
    REQUIRE(p == Catch::Approx(oracle::born_plus(rho.matrix(), 0, 1, 0)).margin(1e-12));
    REQUIRE(p == Catch::Approx((1.0 + b.y) / 2.0).margin(1e-12));
    const double q = born_probability(rho, minus_projector(Axis::Y));
    REQUIRE(p + q == Catch::Approx(1.0).margin(1e-12));
  }

  Mat2 not_proj;
  not_proj << 0.5, 0.0, 0.0, 0.25;
  REQUIRE_THROWS_AS(born_probability(plus, not_proj), invalid_observable_error);
}

TEST_CASE("single-qubit sampling follows the Born rule") {
  SplitRng rng(17);
  const Density2 plus = density_from_bloch({1, 0, 0});
  for (int n = 0; n < 200; ++n) {
    auto [out, post] = sample_outcome(plus, Axis::X, rng);
    REQUIRE(out.bit == 1);  // eigenstate
    REQUIRE((post.matrix() - plus.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }

  const std::uint64_t n = 100000;
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < n; ++i) ones += sample_outcome(plus, Axis::Y, rng).first.bit;
  REQUIRE(std::abs(static_cast<double>(ones) / n - 0.5) < 0.005);

  const Density2 tilted = density_from_bloch({0.0, 0.6, 0.0});
  ones = 0;
  for (std::uint64_t i = 0; i < n; ++i) ones += sample_outcome(tilted, Axis::Y, rng).first.bit;
  REQUIRE(std::abs(static_cast<double>(ones) / n - 0.8) < 0.004);

  // Lueders collapse: post-state is the normalized projection
  auto [out, post] = sample_outcome(tilted, Axis::Y, rng);
  const Mat2 proj = out.bit ? plus_projector(Axis::Y) : minus_projector(Axis::Y);
  Mat2 expect = proj * tilted.matrix() * proj;
  expect /= expect.trace();
  REQUIRE((post.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pair measurements on Bell states are perfectly (anti)correlated") {
  SplitRng rng(19);
  const auto always = [&](const Density4& rho, Axis ax, bool equal) {
    for (int n = 0; n < 300; ++n) {
      auto [c, s] = pauli_pair_measure(rho, ax, rng);
      REQUIRE((c.bit == s.bit) == equal);
    }
  };
  always(bell_state(0, 0), Axis::X, true);
  always(bell_state(0, 0), Axis::Z, true);
  always(bell_state(1, 0), Axis::Z, true);
  always(bell_state(1, 0), Axis::X, false);  // sigma_x x sigma_x eigenvalue -1
  always(bell_state(0, 1), Axis::X, true);
  always(bell_state(0, 1), Axis::Z, false);
  always(bell_state(1, 1), Axis::X, false);
  always(bell_state(1, 1), Axis::Z, false);
}

TEST_CASE("pair measurement joint statistics match Born probabilities") {
  SplitRng rng(23);
  const Density4 rho = random_density<4>(rng);
  const std::uint64_t n = 40000;
  for (Axis ax : {Axis::X, Axis::Z}) {
    std::array<std::uint64_t, 4> counts{0, 0, 0, 0};
    for (std::uint64_t i = 0; i < n; ++i) {
      auto [c, s] = pauli_pair_measure(rho, ax, rng);
      ++counts[2 * c.bit + s.bit];
    }
    for (int c = 0; c < 2; ++c)
      for (int s = 0; s < 2; ++s) {
        const Mat2 pc = c ? plus_projector(ax) : minus_projector(ax);
        const Mat2 ps = s ? plus_projector(ax) : minus_projector(ax);
        const double p = born_probability(rho, Mat4(kron(pc, ps)));
        const double freq = static_cast<double>(counts[2 * c + s]) / n;
        REQUIRE(std::abs(freq - p) < 5.0 * oracle::binomial_sigma(std::max(p, 1e-3), n));
      }
  }
}

TEST_CASE("measure_slot collapses the partner qubit") {
  SplitRng rng(29);
  // measuring the transmitted half of a clean pair along x leaves |+> or |->
  for (int n = 0; n < 100; ++n) {
    auto [out, kept] = measure_slot(bell_state(0, 0), Slot::transmitted, Axis::X, rng);
    const BlochVector b = bloch_from_density(kept);
    REQUIRE(b.x == Catch::Approx(out.bit ? 1.0 : -1.0).margin(1e-12));
    REQUIRE(b.y == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(b.z == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("rng reference vectors and derived streams") {
  SplitRng rng(0);
  REQUIRE(rng.next_u64() == 0xe220a8397b1dcdafull);
  REQUIRE(rng.next_u64() == 0x6e789e6aa1b965f4ull);
  REQUIRE(rng.next_u64() == 0x06c45d188009454full);

  SplitRng a(12345);
  SplitRng b(12345);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

  // substreams depend only on the parent seed, not its consumption state
  const SplitRng parent(99);
  SplitRng drained(99);
  for (int i = 0; i < 10; ++i) drained.next_u64();
  REQUIRE(parent.substream(4).seed() == drained.substream(4).seed());
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(parent.substream(i).seed());
  REQUIRE(seeds.size() == 1000);

  SplitRng u(31);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform01();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    REQUIRE(u.uniform_below(7) < 7);
  }
  REQUIRE_THROWS_AS(u.uniform_below(0), parameter_error);

  std::uint64_t heads = 0;
  for (int i = 0; i < 100000; ++i) heads += u.bernoulli(0.3) ? 1 : 0;
  REQUIRE(std::abs(heads / 1e5 - 0.3) < 5.0 * oracle::binomial_sigma(0.3, 1e5));
}

TEST_CASE("shuffle is a uniform permutation") {
  SplitRng rng(37);
  std::vector<int> v{0, 1, 2, 3, 4};
  rng.shuffle(v);
  std::set<int> s(v.begin(), v.end());
  REQUIRE(s.size() == 5);

  // position of element 0 should be uniform over the 5 slots
  const int trials = 20000;
  std::array<int, 5> where{0, 0, 0, 0, 0};
  for (int n = 0; n < trials; ++n) {
    std::vector<int> w{0, 1, 2, 3, 4};
    rng.shuffle(w);
    for (int i = 0; i < 5; ++i)
      if (w[i] == 0) ++where[i];
  }
  for (int i = 0; i < 5; ++i)
    REQUIRE(std::abs(where[i] / static_cast<double>(trials) - 0.2) <
            5.0 * oracle::binomial_sigma(0.2, trials));

  // deterministic per seed
  SplitRng r1(41), r2(41);
  std::vector<int> v1{1, 2, 3, 4, 5, 6, 7}, v2{1, 2, 3, 4, 5, 6, 7};
  r1.shuffle(v1);
  r2.shuffle(v2);
  REQUIRE(v1 == v2);
}

TEST_CASE("parallel_for covers every index exactly once and propagates errors") {
  std::vector<std::atomic<int>> hits(997);
  parallel_for(hits.size(), [&](std::uint64_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) REQUIRE(h.load() == 1);

  REQUIRE(worker_count() >= 1);

  REQUIRE_THROWS_AS(parallel_for(10,
                                 [&](std::uint64_t i) {
                                   if (i == 3) throw parameter_error("boom");
                                 }),
                    parameter_error);

  // nested use degrades to serial execution instead of deadlocking
  std::atomic<int> total{0};
  parallel_for(8, [&](std::uint64_t) {
    parallel_for(8, [&](std::uint64_t) { total.fetch_add(1); });
  });
  REQUIRE(total.load() == 64);
}
