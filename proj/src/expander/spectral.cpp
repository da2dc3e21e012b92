#include "expander/spectral.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "util/error.hpp"

namespace qtanner::expander {

namespace {

Eigen::MatrixXd adjacency(std::uint64_t n, std::size_t degree, const NeighborFn& nb) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::uint64_t v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < degree; ++i) {
      a(static_cast<Eigen::Index>(nb(v, i)), static_cast<Eigen::Index>(v)) += 1.0;
    }
  }
  return a;
}

}  // namespace

std::vector<double> adjacency_spectrum(std::uint64_t vertices, std::size_t degree, const NeighborFn& nb) {
  Eigen::MatrixXd a = adjacency(vertices, degree, nb);
  if (!a.isApprox(a.transpose())) throw PreconditionViolated("adjacency matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

SpectralReport spectral_expansion(std::uint64_t n, std::size_t degree, const NeighborFn& nb,
                                  const SpectralOptions& opts) {
  SpectralReport rep;
  rep.degree = degree;
  rep.vertices = n;
  if (n == 0) throw InvalidArgument("spectral_expansion: empty graph");
  if (n > opts.iterative_limit) {
    throw BudgetExceeded("spectral_expansion: " + std::to_string(n) + " vertices exceeds iterative budget");
  }
  const double d = static_cast<double>(degree);

  if (n <= opts.dense_limit) {
    const auto ev = adjacency_spectrum(n, degree, nb);
    // The top eigenvalue d belongs to the all-ones vector.
    if (n == 1) {
      rep.lambda = rep.second = 0.0;
    } else {
      rep.second = ev[n - 2];
      rep.lambda = std::max(std::abs(ev[0]), std::abs(ev[n - 2]));
    }
    rep.method = "dense";
    rep.tolerance = 1e-9;
  } else {
    std::vector<std::uint64_t> table(n * degree);
    for (std::uint64_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < degree; ++i) table[v * degree + i] = nb(v, i);
    }
    auto run = [&](double shift, std::uint64_t seed, std::size_t& iterations) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(n)), y(static_cast<Eigen::Index>(n));
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> g(0, 1);
      for (auto& xi : x) xi = g(rng);
      x.array() -= x.mean();
      x.normalize();
      double prev = -1;
      for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        y = shift * x;
        for (std::uint64_t v = 0; v < n; ++v) {
          const double xv = x[static_cast<Eigen::Index>(v)];
          for (std::size_t i = 0; i < degree; ++i) y[static_cast<Eigen::Index>(table[v * degree + i])] += xv;
        }
        y.array() -= y.mean();
        const double est = y.norm();
        if (est == 0 || std::abs(est - prev) <= opts.tolerance * std::max(1.0, d)) {
          iterations += it + 1;
          return est;
        }
        x = y / est;
        prev = est;
      }
      throw ConvergenceFailure("power iteration did not converge within " + std::to_string(opts.max_iterations) +
                               " iterations");
    };
    rep.lambda = run(0.0, opts.seed, rep.iterations);
    rep.second = run(d, opts.seed + 1, rep.iterations) - d;
    rep.method = "power";
    rep.tolerance = opts.tolerance;
  }
  rep.lambda = std::min(std::max(rep.lambda, 0.0), d);
  rep.ratio = degree ? rep.lambda / d : 0.0;
  rep.ramanujan = degree >= 1 && rep.lambda <= 2.0 * std::sqrt(d - 1.0) + 1e-9;
  return rep;
}

nlohmann::json to_json(const SpectralReport& r) {
  return {{"degree", r.degree},   {"vertices", r.vertices}, {"lambda", r.lambda},
          {"second", r.second}, {"ratio", r.ratio},     {"ramanujan", r.ramanujan}, {"method", r.method},
          {"tolerance", r.tolerance}, {"iterations", r.iterations}};
}

}  // namespace qtanner::expander
