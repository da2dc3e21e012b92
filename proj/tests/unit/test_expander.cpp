#include "doctest.h"

#include <cmath>
#include <numbers>

#include "expander/cayley.hpp"
#include "util/rng.hpp"

using namespace qtanner;
using namespace qtanner::expander;

namespace {

// Plain 2x2 product mod N, independent of the group class.
Mat2 naive_mul(const Mat2& x, const Mat2& y, std::uint64_t n) {
  Mat2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      unsigned __int128 s = static_cast<unsigned __int128>(x.at(r, 0)) * y.at(0, c) +
                            static_cast<unsigned __int128>(x.at(r, 1)) * y.at(1, c);
      out.at(r, c) = static_cast<std::uint64_t>(s % n);
    }
  return out;
}

Coords random_coords(const CongruenceGroup& g, Rng& rng) {
  return {uniform_below(rng, g.q()), uniform_below(rng, g.q()), uniform_below(rng, g.q())};
}

}  // namespace

TEST_CASE("phi_encode examples") {
  CongruenceGroup g3(3, 1);
  CHECK(g3.encode({0, 0, 0}) == Mat2{});
  Mat2 m = g3.encode({1, 0, 0});
  CHECK(m.e == std::array<std::uint64_t, 4>{4, 0, 0, 7});
  CHECK(g3.det(m) == 1);
  CongruenceGroup g2(2, 2);
  Mat2 m2 = g2.encode({1, 1, 1});
  // d = 3 so the lower-right entry is 1 + 2*3 = 7 mod 8
  CHECK(m2.at(1, 1) == 7);
  CHECK(g2.det(m2) == 1);
}

TEST_CASE("phi_decode examples and errors") {
  CongruenceGroup g(3, 1);
  CHECK(g.decode(Mat2{}) == Coords{0, 0, 0});
  Mat2 m;
  m.e = {4, 0, 0, 7};
  CHECK(g.decode(m) == Coords{1, 0, 0});
  m.e = {1, 3, 0, 1};
  CHECK(g.decode(m) == Coords{0, 1, 0});
  m.e = {1, 1, 0, 1};
  CHECK_THROWS_AS(g.decode(m), NotInKernel);
  m.e = {4, 3, 0, 1};
  CHECK_THROWS_AS(g.decode(m), NotInKernel);
}

TEST_CASE("phi is a bijection") {
  for (auto [p, m] : {std::pair{3u, 1u}, {3u, 2u}, {2u, 3u}}) {
    CongruenceGroup g(p, m);
    for (std::uint64_t i = 0; i < g.order64(); ++i) {
      const Coords x = g.coords(i);
      const Mat2 mat = g.encode(x);
      CHECK(g.det(mat) == 1);
      CHECK(g.decode(mat) == x);
      CHECK(g.index(x) == i);
    }
  }
}

TEST_CASE("group axioms") {
  CongruenceGroup small(3, 1);
  for (std::uint64_t i = 0; i < 27; ++i)
    for (std::uint64_t j = 0; j < 27; ++j) {
      const Coords x = small.coords(i), y = small.coords(j);
      CHECK(small.encode(small.mul(x, y)) == naive_mul(small.encode(x), small.encode(y), 9));
      for (std::uint64_t k = 0; k < 27; k += 5) {
        const Coords z = small.coords(k);
        CHECK(small.mul(small.mul(x, y), z) == small.mul(x, small.mul(y, z)));
      }
    }
  CongruenceGroup g(3, 3);
  Rng rng(7);
  for (int t = 0; t < 10000; ++t) {
    const Coords x = random_coords(g, rng), y = random_coords(g, rng), z = random_coords(g, rng);
    CHECK(g.mul(x, Coords{}) == x);
    CHECK(g.mul(x, g.inv(x)) == Coords{});
    if (t < 100) CHECK(g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z)));
  }
}

TEST_CASE("generation at degree 4 is impossible for the elementary abelian level-1 quotient") {
  CHECK_THROWS_AS(default_generators(3, 1, 4), GenerationFailure);
  auto s = default_generators(3, 1, 4, 0, GenerationPolicy::best_effort);
  CHECK(s.size() == 4);
  CHECK_FALSE(s.generates);
  CHECK(bfs_closure(s) < 27);
}

TEST_CASE("default generators at degree 6 generate") {
  auto s = default_generators(3, 1, 6);
  CHECK(s.size() == 6);
  CHECK(s.generates);
  CHECK(bfs_closure(s) == 27);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.group.mul(s.elements[i], s.elements[s.inverse[i]]) == Coords{});
    CHECK(s.inverse[s.inverse[i]] == i);
  }
  auto padded = with_identity(s);
  CHECK(padded.size() == 7);
  CHECK(bfs_closure(padded) == 27);
  auto s7 = default_generators(3, 1, 7);
  CHECK(s7.elements.back() == Coords{});
  auto s2 = default_generators(3, 2, 6);
  CHECK(bfs_closure(s2) == 729);
  CHECK(default_generators(3, 1, 6, 0).elements == s.elements);
}

TEST_CASE("neighbor agrees with explicit multiplication") {
  for (std::uint32_t m : {1u, 2u}) {
    auto s = default_generators(3, m, 6);
    CayleyMultigraph gr(s);
    const auto& g = gr.group();
    for (std::uint64_t v = 0; v < g.order64(); ++v)
      for (std::size_t i = 0; i < gr.degree(); ++i) {
        const Mat2 prod = naive_mul(g.encode(s.elements[i]), g.encode(g.coords(v)), g.modulus());
        const std::uint64_t w = gr.neighbor(v, i);
        CHECK(g.encode(g.coords(w)) == prod);
        CHECK(gr.neighbor(w, s.inverse[i]) == v);
      }
  }
  auto padded = CayleyMultigraph(with_identity(default_generators(3, 1, 6)));
  for (std::uint64_t v = 0; v < 27; ++v) CHECK(padded.neighbor(v, 6) == v);
}

TEST_CASE("strongly explicit neighbor at large level") {
  auto s = default_generators(3, 30, 6);
  CayleyMultigraph gr(s);
  CHECK(gr.vertex_count() == 0);  // 3^90 does not fit in 64 bits
  const BigIndex v = gr.group().order() - 12345;
  for (std::size_t i = 0; i < gr.degree(); ++i) {
    const BigIndex w = gr.neighbor(v, i);
    CHECK(w < gr.group().order());
    CHECK(gr.neighbor(w, s.inverse[i]) == v);
  }
}

TEST_CASE("spectral examples on circulants") {
  const std::uint64_t n = 9;
  auto complete = [&](std::uint64_t v, std::size_t i) { return (v + i + 1) % n; };
  auto rep = spectral_expansion(n, n - 1, complete);
  CHECK(rep.lambda == doctest::Approx(1.0).epsilon(1e-9));
  const std::uint64_t c = 11;
  auto cycle = [&](std::uint64_t v, std::size_t i) { return i == 0 ? (v + 1) % c : (v + c - 1) % c; };
  rep = spectral_expansion(c, 2, cycle);
  CHECK(rep.lambda == doctest::Approx(2 * std::cos(std::numbers::pi / c)).epsilon(1e-9));
  // the largest |eigenvalue| other than 2 on an odd cycle is |2cos(2*pi*k/n)| maximised at k=(n-1)/2
  CHECK(rep.lambda == doctest::Approx(std::abs(2 * std::cos(2 * std::numbers::pi * 5 / c))).epsilon(1e-9));
  CHECK(std::abs(rep.second - 2 * std::cos(2 * std::numbers::pi / c)) < 1e-9);
}

TEST_CASE("power iteration matches dense path") {
  auto s = default_generators(3, 2, 6);
  CayleyMultigraph gr(s);
  auto dense = spectral_expansion(gr);
  SpectralOptions opts;
  opts.dense_limit = 10;
  opts.tolerance = 1e-10;
  auto power = spectral_expansion(gr, opts);
  CHECK(power.method == "power");
  CHECK(power.lambda == doctest::Approx(dense.lambda).epsilon(1e-4));
  CHECK(power.second == doctest::Approx(dense.second).epsilon(1e-4));
  opts.iterative_limit = 100;
  CHECK_THROWS_AS(spectral_expansion(gr, opts), BudgetExceeded);
  opts.iterative_limit = 1'000'000;
  opts.max_iterations = 2;
  CHECK_THROWS_AS(spectral_expansion(gr, opts), ConvergenceFailure);
}

TEST_CASE("level-1 Cayley graph expands and identity shifts the spectrum") {
  auto s = default_generators(3, 1, 6);
  CayleyMultigraph gr(s);
  auto rep = spectral_expansion(gr);
  CHECK(rep.lambda < 6.0);
  CayleyMultigraph padded(with_identity(s));
  auto nb = [&](const CayleyMultigraph& g) {
    return [&g](std::uint64_t v, std::size_t i) { return g.neighbor(v, i); };
  };
  auto base = adjacency_spectrum(27, 6, nb(gr));
  auto shifted = adjacency_spectrum(27, 7, nb(padded));
  REQUIRE(base.size() == shifted.size());
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(shifted[i] == doctest::Approx(base[i] + 1).epsilon(1e-9));
}

TEST_CASE("generator json round trip") {
  auto s = default_generators(3, 2, 7);
  auto j = to_json(s);
  auto back = generators_from_json(j);
  CHECK(back.elements == s.elements);
  CHECK(back.inverse == s.inverse);
  j["generators"][0] = {1, 0, 0};
  CHECK_THROWS_AS(generators_from_json(j), InvalidArgument);
}
