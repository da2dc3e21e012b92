// One line per acceptance criterion; exit status is the number of failures.
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "csp/lin.hpp"
#include "inner/entropy.hpp"
#include "inner/prodexp.hpp"
#include "inner/search.hpp"
#include "nlts/spread.hpp"
#include "pipeline/hash.hpp"
#include "pipeline/pipeline.hpp"
#include "tanner/measure.hpp"
#include "util/rng.hpp"

using namespace qtanner;
using gf::Elem;
using gf::FMatrix;
using gf::FVector;
using gf::PrimeField;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void expect(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

tanner::CssCode planted(std::uint32_t p, std::uint32_t gp, std::size_t delta, std::size_t ka, std::size_t kb,
                        tanner::GridConvention conv = tanner::GridConvention::local_inverse) {
  auto s = expander::default_generators(gp, 1, delta, 0, expander::GenerationPolicy::best_effort);
  auto pair = inner::search_inner_pair(p, delta, ka, kb, 0.0, 10, 5);
  return tanner::build_code(tanner::build_complex(s, s), pair, conv);
}

// H_X H_Z^T over F_p from the sparse column lists, entry by entry
bool orthogonal_oracle(const tanner::CssCode& c) {
  const auto& f = c.hx.field();
  for (std::size_t i = 0; i < c.hx.rows(); ++i)
    for (std::size_t j = 0; j < c.hz.rows(); ++j) {
      std::uint64_t s = 0;
      for (std::size_t q = 0; q < c.n(); ++q) s += std::uint64_t{c.hx.get(i, q)} * c.hz.get(j, q);
      if (s % f.p() != 0) return false;
    }
  return true;
}

std::size_t locality_oracle(const FMatrix& h) {
  std::size_t best = 0;
  std::vector<std::size_t> col(h.cols(), 0);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    std::size_t row = 0;
    for (std::size_t j = 0; j < h.cols(); ++j)
      if (h.get(i, j)) ++row, ++col[j];
    best = std::max(best, row);
  }
  for (auto w : col) best = std::max(best, w);
  return best;
}

void css_validity(Outcome& o) {
  std::size_t built = 0;
  for (std::uint32_t p : {2u, 3u})
    for (std::size_t delta : {3u, 4u, 5u}) {
      auto code = planted(p, 3, delta, 2, delta - 2);
      ++built;
      const std::string tag = "p=" + std::to_string(p) + " delta=" + std::to_string(delta);
      o.expect(orthogonal_oracle(code), tag + " H_X H_Z^T != 0");
      o.expect(std::max(locality_oracle(code.hx), locality_oracle(code.hz)) <= delta * delta, tag + " locality");
    }
  o.note << built << " codes, H_X H_Z^T = 0 and locality <= delta^2";
}

void planting(Outcome& o) {
  auto check_code = [&](const tanner::CssCode& code, const std::string& tag) {
    auto rep = tanner::verify_planted(code);
    const auto p = code.hx.field().p();
    o.expect(code.n() % p != 0, tag + " gcd(n,p)");
    o.expect(rep.all(), tag + " planted flags");
    // all-ones against every check row, independently
    for (const FMatrix* h : {&code.hx, &code.hz})
      for (std::size_t i = 0; i < h->rows(); ++i) {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < h->cols(); ++j) s += h->get(i, j);
        o.expect(s % p == 0, tag + " row sum");
      }
    return tanner::code_dimension(code);
  };
  auto d675 = check_code(planted(2, 3, 5, 2, 3), "p=2 n=675");
  o.expect(d675.k >= 1, "k >= 1 at n=675");
  o.note << "n=675 k=" << d675.k;
  for (auto [p, gp] : {std::pair{3u, 2u}, {5u, 3u}}) {
    auto code = planted(p, gp, 4, 2, 2);
    const std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(code.n());
    auto dim = check_code(code, tag);
    const double bound = 0.0 - (1 - 2 * 0.5) * (1 - 2 * 0.5) * static_cast<double>(code.n());
    o.expect(dim.counting_bound && *dim.counting_bound == bound, tag + " counting bound");
    o.expect(dim.k >= 1, tag + " k >= 1 at rate 1/2");
    o.note << "; R=1/2 " << tag << " bound=" << bound << " k=" << dim.k;
  }
}

// plain 2x2 product mod N
expander::Mat2 naive_mul(const expander::Mat2& x, const expander::Mat2& y, std::uint64_t n) {
  expander::Mat2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      unsigned __int128 s = static_cast<unsigned __int128>(x.at(r, 0)) * y.at(0, c) +
                            static_cast<unsigned __int128>(x.at(r, 1)) * y.at(1, c);
      out.at(r, c) = static_cast<std::uint64_t>(s % n);
    }
  return out;
}

void group_law(Outcome& o) {
  for (std::uint32_t m : {1u, 2u}) {
    expander::CongruenceGroup g(3, m);
    std::set<std::vector<std::uint64_t>> images;
    for (std::uint64_t i = 0; i < g.order64(); ++i) {
      const auto x = g.coords(i);
      const auto mat = g.encode(x);
      o.expect(g.decode(mat) == x, "decode(encode)");
      o.expect(g.det(mat) == 1, "det");
      // reduction mod p is the identity on the level-1 subgroup
      o.expect(mat.at(0, 0) % 3 == 1 && mat.at(1, 1) % 3 == 1 && mat.at(0, 1) % 3 == 0 && mat.at(1, 0) % 3 == 0,
               "congruence");
      images.insert({mat.at(0, 0), mat.at(0, 1), mat.at(1, 0), mat.at(1, 1)});
    }
    o.expect(images.size() == g.order64(), "encode injective");
    auto s = expander::default_generators(3, m, 6);
    const auto closure = expander::bfs_closure(s);
    o.expect(closure == g.order64(), "closure at m=" + std::to_string(m));
    // neighbor against explicit multiplication
    expander::CayleyMultigraph gr(s);
    for (std::uint64_t v = 0; v < g.order64(); ++v)
      for (std::size_t i = 0; i < gr.degree(); ++i)
        o.expect(g.encode(g.coords(gr.neighbor(v, i))) ==
                     naive_mul(g.encode(s.elements[i]), g.encode(g.coords(v)), g.modulus()),
                 "neighbor");
    o.note << g.order64() << " elements bijective, closure " << closure << "; ";
  }
  expander::CayleyMultigraph big(expander::default_generators(3, 30, 6));
  const expander::BigIndex v = big.group().order() - 987654321;
  const auto t0 = Clock::now();
  expander::BigIndex w = big.neighbor(v, 2);
  const double ms = seconds_since(t0) * 1e3;
  o.expect(w < big.group().order(), "m=30 neighbor in range");
  o.expect(ms < 10, "m=30 neighbor time");
  o.note << "m=30 neighbor in " << ms << " ms";
}

void spectral(Outcome& o) {
  double worst = 0;
  for (std::uint64_t n : {5u, 8u, 11u, 16u, 27u}) {
    auto cycle = [n](std::uint64_t v, std::size_t i) { return i == 0 ? (v + 1) % n : (v + n - 1) % n; };
    auto rep = expander::spectral_expansion(n, 2, cycle);
    worst = std::max(worst, std::abs(rep.second - 2 * std::cos(2 * std::numbers::pi / n)));
  }
  o.expect(worst <= 1e-9, "cycle second eigenvalue");
  auto s = expander::default_generators(3, 1, 6);
  expander::CayleyMultigraph gr(s);
  auto rep = expander::spectral_expansion(gr);
  o.expect(rep.lambda < 6.0, "lambda < Delta");
  expander::CayleyMultigraph padded(expander::with_identity(s));
  auto base = expander::adjacency_spectrum(27, 6, [&](std::uint64_t v, std::size_t i) { return gr.neighbor(v, i); });
  auto shifted =
      expander::adjacency_spectrum(27, 7, [&](std::uint64_t v, std::size_t i) { return padded.neighbor(v, i); });
  double shift_err = 0;
  o.expect(base.size() == 27 && shifted.size() == 27, "spectrum size");
  for (std::size_t i = 0; i < std::min(base.size(), shifted.size()); ++i)
    shift_err = std::max(shift_err, std::abs(shifted[i] - base[i] - 1));
  o.expect(shift_err <= 1e-9, "identity shift");
  o.note << "cycle error " << worst << "; 27-vertex lambda " << rep.lambda << " < 6; identity shift error "
         << shift_err;
}

// all k-dim subspaces of F_2^n, by reduced row echelon bit masks
std::vector<gf::LinearCode> all_binary_codes(std::size_t n, std::size_t k) {
  PrimeField f(2);
  if (k == 0) return {gf::LinearCode::zero(f, n)};
  std::set<std::set<std::uint32_t>> spans;
  std::vector<gf::LinearCode> out;
  std::vector<std::uint32_t> pick(k);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t depth, std::uint32_t start) {
    if (depth == k) {
      std::set<std::uint32_t> span;
      for (std::uint32_t s = 0; s < (1u << k); ++s) {
        std::uint32_t v = 0;
        for (std::size_t i = 0; i < k; ++i)
          if ((s >> i) & 1) v ^= pick[i];
        span.insert(v);
      }
      if (span.size() != (1u << k) || !spans.insert(span).second) return;
      FMatrix m(f, k, n);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) m.set(i, j, (pick[i] >> j) & 1);
      out.push_back(gf::LinearCode::from_generators(m));
      return;
    }
    for (std::uint32_t v = start; v < (1u << n); ++v) {
      pick[depth] = v;
      rec(depth + 1, v + 1);
    }
  };
  rec(0, 1);
  return out;
}

std::vector<std::uint32_t> words(const gf::LinearCode& c) {
  const std::size_t n = c.length(), k = c.dim();
  std::vector<std::uint32_t> rows(k, 0), out;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c.basis().get(i, j)) rows[i] |= 1u << j;
  for (std::uint32_t s = 0; s < (1u << k); ++s) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < k; ++i)
      if ((s >> i) & 1) v ^= rows[i];
    out.push_back(v);
  }
  return out;
}

// min over decompositions x = c + r of (nonzero columns of c + nonzero rows of r), as an exact fraction w/d
struct Ratio {
  bool vacuous = true;
  std::uint64_t w = 0, d = 1;
};
Ratio decomposition_oracle(const gf::LinearCode& c1, const gf::LinearCode& c2) {
  const std::size_t n = c1.length();
  auto grids = [&](const std::vector<std::uint32_t>& ws, bool columns) {
    std::vector<std::pair<std::uint64_t, std::size_t>> out;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= ws.size();
    for (std::uint64_t t = 0; t < total; ++t) {
      std::uint64_t u = t, mask = 0;
      std::size_t lines = 0;
      for (std::size_t l = 0; l < n; ++l) {
        const std::uint32_t w = ws[u % ws.size()];
        u /= ws.size();
        lines += w != 0;
        for (std::size_t s = 0; s < n; ++s)
          if ((w >> s) & 1) mask |= std::uint64_t{1} << (columns ? s * n + l : l * n + s);
      }
      out.push_back({mask, lines});
    }
    return out;
  };
  const auto cs = grids(words(c1), true), rs = grids(words(c2), false);
  std::map<std::uint64_t, std::size_t> best;
  for (const auto& [cm, cl] : cs)
    for (const auto& [rm, rl] : rs) {
      auto [it, fresh] = best.emplace(cm ^ rm, cl + rl);
      if (!fresh) it->second = std::min(it->second, cl + rl);
    }
  Ratio r;
  for (const auto& [x, d] : best) {
    if (x == 0) continue;
    const std::uint64_t w = std::popcount(x);
    if (r.vacuous || w * r.d < r.w * d) r = {false, w, d};
  }
  return r;
}

std::size_t min_weight(const gf::LinearCode& c) {
  std::size_t best = c.length() + 1;
  for (auto w : words(c))
    if (w) best = std::min<std::size_t>(best, std::popcount(w));
  return best;
}

void product_expansion(Outcome& o) {
  std::size_t pairs = 0, lemma_pairs = 0;
  for (std::size_t n : {2u, 3u, 4u}) {
    std::vector<gf::LinearCode> codes;
    for (std::size_t k = 0; k <= 2; ++k)
      for (auto& c : all_binary_codes(n, k)) codes.push_back(c);
    for (const auto& c1 : codes)
      for (const auto& c2 : codes) {
        ++pairs;
        auto r = inner::product_expansion_exact(c1, c2);
        auto oracle = decomposition_oracle(c1, c2);
        o.expect(r.vacuous == oracle.vacuous, "vacuity");
        if (r.vacuous || oracle.vacuous) continue;
        o.expect(r.weight * oracle.d == oracle.w * r.cost, "rho mismatch at n=" + std::to_string(n));
        if (c1.dim() == 0 || c2.dim() == 0) continue;
        ++lemma_pairs;
        // rho n <= d
        o.expect(r.rho * n <= std::min(min_weight(c1), min_weight(c2)) + 1e-12, "rho n <= d");
        // codimension-one subcodes keep rho^2/2
        const auto w1 = words(c1);
        for (const auto& sub : all_binary_codes(n, c1.dim() - 1)) {
          const auto ws = words(sub);
          if (!std::all_of(ws.begin(), ws.end(), [&](std::uint32_t v) {
                return std::find(w1.begin(), w1.end(), v) != w1.end();
              }))
            continue;
          auto rs = inner::product_expansion_exact(sub, c2);
          if (!rs.vacuous) o.expect(rs.rho + 1e-12 >= r.rho * r.rho / 2, "subcode bound");
        }
      }
  }
  o.note << pairs << " pairs matched the decomposition oracle; lemmas on " << lemma_pairs << " pairs";
}

void cluster_lemma(Outcome& o) {
  auto code = tanner::steane_code();
  for (auto basis : {nlts::Basis::z, nlts::Basis::x}) {
    auto set = nlts::enumerate_syndrome_set(code, basis, 1.0 / 3);
    auto part = nlts::build_clusters(set, 0.2);
    auto rep = nlts::verify_cluster_lemma(part, 1.0 / 7);
    const std::string b = nlts::to_string(basis);
    o.expect(rep.partition, b + " partition");
    o.expect(rep.separation, b + " separation");
    o.expect(rep.translate, b + " translate law");
    o.expect(rep.decoder, b + " decoder law");
    o.note << b << ": " << set.size() << " of 128 vectors, " << part.clusters.size() << " clusters, min separation "
           << (rep.min_separation ? std::to_string(*rep.min_separation) : "none") << "; ";
  }
  o.note << "eps'=1/3 c1=0.2 c2=1/7";
}

void sector_law(Outcome& o) {
  for (const auto& code : {tanner::steane_code(), tanner::shor_code()}) {
    auto ham = nlts::build_code_hamiltonian(code);
    auto rep = nlts::check_sector_law(code, ham);
    const auto k = tanner::code_dimension(code).k;
    o.expect(rep.max_spectrum_error < 1e-9 && rep.max_residual < 1e-9, code.name + " eigenvalues");
    o.expect(rep.null_dimension == (std::size_t{1} << k), code.name + " null space");
    // each sector energy as an exact fraction, against a direct count of violated checks
    const auto mx = code.hx.rows(), mz = code.hz.rows();
    const auto rx = nlts::row_masks(code.hx), rz = nlts::row_masks(code.hz);
    for (nlts::Bits e : nlts::syndrome_representatives(rx, code.n()))
      for (nlts::Bits f : nlts::syndrome_representatives(rz, code.n())) {
        std::uint64_t sx = 0, sz = 0;
        for (auto r : rx) sx += std::popcount(r & e) & 1;
        for (auto r : rz) sz += std::popcount(r & f) & 1;
        auto fr = nlts::sector_energy(ham, e, f);
        o.expect(fr.num * 2 * mx * mz == (sx * mz + sz * mx) * fr.den, code.name + " sector fraction");
      }
    o.note << code.name << ": " << rep.sectors << " sectors, spectrum error " << rep.max_spectrum_error
           << ", null dim " << rep.null_dimension << "; ";
  }
}

Eigen::MatrixXcd random_unitary(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ();
}

nlts::DensityMatrix random_density(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g;
  const std::size_t rank = 1 + uniform_below(rng, dim);
  Eigen::MatrixXcd m(dim, rank);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < rank; ++j) m(i, j) = {g(rng), g(rng)};
  nlts::DensityMatrix rho = m * m.adjoint();
  return rho / rho.trace().real();
}

void uncertainty(Outcome& o) {
  Eigen::MatrixXcd x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const double bound = 0.5 + 0.5 / std::sqrt(2.0);
  Rng rng(20240917);
  double worst = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t extra = 1u << uniform_below(rng, 3);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(extra, extra);
    const Eigen::MatrixXcd xi = Eigen::kroneckerProduct(x, id), zi = Eigen::kroneckerProduct(z, id);
    auto u = random_unitary(2 * extra, rng);
    Eigen::MatrixXcd a = u * xi * u.adjoint(), b = u * zi * u.adjoint();
    a = (a + a.adjoint()).eval() / 2.0;
    b = (b + b.adjoint()).eval() / 2.0;
    auto rho = random_density(2 * extra, rng);
    const double ta = std::abs((a * rho).trace().real()), tb = std::abs((b * rho).trace().real());
    worst = std::max(worst, std::min(ta, tb));
    o.expect(std::min(ta, tb) <= bound + 1e-9, "uncertainty bound");
    o.expect(nlts::uncertainty_check(a, b, rho).holds, "uncertainty_check");
  }
  o.note << "worst min(|Tr A rho|,|Tr B rho|) over 1e4 trials " << worst << " <= " << bound << "; ";
  struct Case {
    tanner::CssCode code;
    double eps, c1;
  };
  for (const auto& [code, eps, c1] :
       {Case{tanner::steane_code(), 1.0 / 3, 0.2}, Case{tanner::shor_code(), 1.0 / 6, 0.2}}) {
    auto px = nlts::build_clusters(nlts::enumerate_syndrome_set(code, nlts::Basis::x, eps), c1);
    auto pz = nlts::build_clusters(nlts::enumerate_syndrome_set(code, nlts::Basis::z, eps), c1);
    auto lg = nlts::find_logicals(code);
    Rng srng(7);
    std::size_t ok = 0;
    for (int t = 0; t < 200; ++t) {
      auto r = nlts::measure_spread(nlts::random_sector_state(code, eps, srng), px, pz, lg);
      // independent reading of the dichotomy: one basis carries mu' on both sides
      const bool spread_x = std::min(r.x.mass0, r.x.mass1) >= nlts::kMuPrime;
      const bool spread_z = std::min(r.z.mass0, r.z.mass1) >= nlts::kMuPrime;
      ok += r.in_sector && r.dichotomy && (spread_x || spread_z);
    }
    o.expect(ok == 200, code.name + " dichotomy");
    o.note << code.name << " dichotomy " << ok << "/200; ";
  }
  o.note << "mu'=" << nlts::kMuPrime;
}

void csp_emission(Outcome& o) {
  auto code = planted(2, 3, 5, 2, 3);
  auto inst = csp::emit_planted_instance(code);
  o.expect(csp::certify_unsat(inst).inconsistent, "rank certificate");
  // independent rank test: rank [H_Z^T | beta] > rank H_Z^T
  FMatrix a = code.hz.transpose();
  FMatrix aug(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.set(i, j, a.get(i, j));
    aug.set(i, a.cols(), 1);
  }
  const auto r0 = gf::rank(a), r1 = gf::rank(aug);
  o.expect(r1 == r0 + 1, "augmented rank");
  const auto ell = locality_oracle(code.hz);
  o.expect(inst.arity <= ell, "arity");
  for (const auto& c : inst.constraints) o.expect(c.vars.size() <= ell, "constraint arity");

  csp::ConstraintOracle oracle(code.provenance);
  for (std::uint64_t i = 0; i < inst.n(); ++i) o.expect(oracle.constraint(i) == inst.constraints[i], "accessor");
  const auto t0 = Clock::now();
  std::size_t sink = 0;
  for (std::uint64_t i = 0; i < 2000; ++i) sink += oracle.constraint((i * 101) % inst.n()).vars.size();
  const double us = seconds_since(t0) * 1e6 / 2000;
  o.expect(sink > 0 && us < 100, "accessor time");

  const double c1 = 0.05, c2 = 0.2;
  const double m = static_cast<double>(inst.m), l = static_cast<double>(ell);
  o.expect(std::abs(csp::sos_level_bound(c1, c2, m, l) - c1 * c2 * m / (4 * l)) < 1e-12, "sos formula");
  o.note << "n=" << inst.n() << " rank " << r0 << " -> " << r1 << ", arity " << inst.arity << " <= " << ell
         << ", accessor " << us << " us";
}

bool satisfiable(std::uint64_t vars, const std::vector<std::pair<std::vector<std::uint64_t>, unsigned>>& rows) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars); ++a) {
    bool ok = true;
    for (const auto& [vs, rhs] : rows) {
      unsigned s = 0;
      for (auto v : vs) s ^= (a >> v) & 1;
      if (s != rhs) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

void three_xor(Outcome& o) {
  Rng rng(4242);
  std::size_t tested = 0, sat = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    csp::LinInstance inst;
    inst.p = 2;
    inst.m = 2 + uniform_below(rng, 9);
    std::vector<std::pair<std::vector<std::uint64_t>, unsigned>> rows;
    const std::size_t count = 1 + uniform_below(rng, 6);
    for (std::size_t i = 0; i < count; ++i) {
      csp::LinConstraint c;
      for (std::uint64_t v = 0; v < inst.m; ++v)
        if (uniform_below(rng, 2)) c.vars.push_back(v);
      c.coeffs.assign(c.vars.size(), 1);
      c.rhs = static_cast<Elem>(uniform_below(rng, 2));
      inst.arity = std::max(inst.arity, c.vars.size());
      rows.emplace_back(c.vars, c.rhs);
      inst.constraints.push_back(std::move(c));
    }
    auto red = csp::reduce_to_3xor(inst);
    if (red.vars > 16) continue;
    ++tested;
    std::vector<std::pair<std::vector<std::uint64_t>, unsigned>> rrows;
    for (const auto& c : red.clauses) {
      o.expect(c.vars.size() <= 3, "output arity");
      rrows.emplace_back(c.vars, c.rhs);
    }
    const bool before = satisfiable(inst.m, rows), after = satisfiable(red.vars, rrows);
    o.expect(before == after, "satisfiability preserved");
    sat += before;
  }
  o.note << tested << " instances (" << sat << " satisfiable), all <= 16 variables after reduction";
}

void entropy(Outcome& o) {
  double worst = 0;
  for (double q : {2.0, 3.0})
    for (int i = 0; i < 100; ++i) {
      const double y = i / 99.0;
      worst = std::max(worst, std::abs(inner::q_entropy(inner::q_entropy_inv(y, q), q) - y));
    }
  o.expect(worst <= 1e-12, "round trip");
  o.note << "max |H_q(H_q^-1(y)) - y| = " << worst;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void determinism(Outcome& o) {
  const auto root = std::filesystem::temp_directory_path() / "qtanner-acceptance";
  std::filesystem::remove_all(root);
  std::map<std::string, std::string> hashes[2];
  for (int run = 0; run < 2; ++run) {
    auto cfg = pipeline::config_from_json({{"seed", 31337}, {"output_dir", (root / std::to_string(run)).string()}});
    pipeline::run_pipeline(cfg);
    for (const auto& e : std::filesystem::directory_iterator(root / std::to_string(run)))
      hashes[run][e.path().filename().string()] = pipeline::sha256_hex(slurp(e.path()));
  }
  o.expect(!hashes[0].empty() && hashes[0] == hashes[1], "artifact hashes differ");
  o.note << hashes[0].size() << " artifacts byte-identical across reruns, manifest "
         << hashes[0]["manifest.json"].substr(0, 16);
  std::filesystem::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<std::tuple<int, std::string, double, std::function<void(Outcome&)>>> criteria = {
      {1, "CSS validity over the build grid", 120, css_validity},
      {2, "planting and positive dimension at rate 1/2", 300, planting},
      {3, "coordinate bijection, closure, explicit neighbor", 60, group_law},
      {4, "spectral sanity", 0, spectral},
      {5, "product-expansion oracle and lemmas", 600, product_expansion},
      {6, "cluster lemma on Steane", 0, cluster_lemma},
      {7, "Hamiltonian sector law", 0, sector_law},
      {8, "uncertainty principle and spread dichotomy", 0, uncertainty},
      {9, "CSP emission", 0, csp_emission},
      {10, "3-XOR reduction", 120, three_xor},
      {11, "entropy round trip", 0, entropy},
      {12, "pipeline determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& [id, name, limit, run] : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    const double took = seconds_since(t0);
    if (limit > 0 && took > limit) {
      o.pass = false;
      o.note << "; over the " << limit << " s limit";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << o.note.str() << " ("
              << std::fixed << std::setprecision(2) << took << " s)" << std::defaultfloat << std::setprecision(6)
              << std::endl;
  }
  std::cout << (12 - failures) << "/12 criteria passed" << std::endl;
  return failures;
}
