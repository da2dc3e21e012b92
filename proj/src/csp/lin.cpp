#include "csp/lin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gf/io.hpp"
#include "inner/search.hpp"
#include "util/rng.hpp"

namespace qtanner::csp {

using gf::Elem;
using gf::FMatrix;
using gf::FVector;
using gf::PrimeField;

gf::FMatrix LinInstance::matrix() const {
  PrimeField f(p);
  FMatrix a(f, constraints.size(), m);
  for (std::size_t i = 0; i < constraints.size(); ++i)
    for (std::size_t j = 0; j < constraints[i].vars.size(); ++j) a.set(i, constraints[i].vars[j], constraints[i].coeffs[j]);
  return a;
}

gf::FVector LinInstance::rhs() const {
  FVector b(PrimeField(p), constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) b[i] = constraints[i].rhs;
  return b;
}

LinInstance emit_lin_instance(const tanner::CssCode& code, const FVector& beta) {
  if (beta.size() != code.n())
    throw DimensionMismatch("beta has length " + std::to_string(beta.size()) + ", code has n = " + std::to_string(code.n()));
  if (!code.hx.multiply(beta).is_zero()) throw BetaNotAdmissible("beta is not in C_X (H_X beta != 0)");
  if (gf::in_rowspace(code.hz, beta)) throw BetaNotAdmissible("beta lies in C_Z^perp");
  LinInstance inst;
  inst.p = code.field().p();
  inst.m = code.hz.rows();
  const FMatrix t = code.hz.transpose();
  inst.constraints.resize(code.n());
  for (std::size_t i = 0; i < code.n(); ++i) {
    auto& c = inst.constraints[i];
    for (const auto& e : t.row_entries(i)) {
      c.vars.push_back(e.col);
      c.coeffs.push_back(e.value);
    }
    c.rhs = beta[i];
    inst.arity = std::max(inst.arity, c.vars.size());
  }
  inst.provenance = {{"code", code.name}, {"beta", gf::to_json(beta)}};
  if (code.provenance.is_object() && !code.provenance.empty()) inst.provenance["code_provenance"] = code.provenance;
  return inst;
}

LinInstance emit_planted_instance(const tanner::CssCode& code) {
  FVector ones(code.field(), code.n());
  for (std::size_t i = 0; i < code.n(); ++i) ones[i] = 1;
  auto inst = emit_lin_instance(code, ones);
  inst.provenance["beta"] = "one";
  return inst;
}

struct ConstraintOracle::Impl {
  tanner::SquareComplex complex;
  tanner::GridConvention conv;
  PrimeField field;
  std::vector<std::vector<Elem>> ad, bd;  // dense dual bases
  std::uint64_t order;
};

namespace {

std::vector<std::vector<Elem>> dense(const gf::LinearCode& c) { return c.basis().dense_rows(); }

}  // namespace

ConstraintOracle::ConstraintOracle(const nlohmann::json& prov) {
  if (!prov.is_object() || prov.value("kind", "") != "tanner")
    throw PreconditionViolated("constraint oracle needs a Tanner code provenance");
  auto a = expander::generators_from_json(prov.at("generators"));
  auto b = prov.contains("generators_b") ? expander::generators_from_json(prov.at("generators_b")) : a;
  auto pair = inner::pair_from_json(prov.at("inner"));
  auto cx = tanner::build_complex(a, b);
  impl_ = std::make_unique<Impl>(Impl{std::move(cx),
                                      tanner::grid_convention_from_string(prov.at("convention").get<std::string>()),
                                      pair.a.field(), dense(pair.a.dual()), dense(pair.b.dual()), 0});
  impl_->order = impl_->complex.group_order();
}

ConstraintOracle::~ConstraintOracle() = default;
ConstraintOracle::ConstraintOracle(ConstraintOracle&&) noexcept = default;
ConstraintOracle& ConstraintOracle::operator=(ConstraintOracle&&) noexcept = default;

std::uint64_t ConstraintOracle::n() const { return impl_->complex.face_count(); }
std::uint64_t ConstraintOracle::m() const { return 2 * impl_->order * impl_->ad.size() * impl_->bd.size(); }
std::uint32_t ConstraintOracle::p() const { return impl_->field.p(); }

LinConstraint ConstraintOracle::constraint(std::uint64_t i) const {
  const auto& cx = impl_->complex;
  if (i >= cx.face_count()) throw InvalidArgument("constraint index out of range");
  const std::size_t delta = cx.delta();
  const std::size_t j = i % delta, fi = (i / delta) % delta;
  const auto corners = cx.corners(i);
  const bool inv = impl_->conv == tanner::GridConvention::local_inverse;
  const auto& ia = cx.graph_a().generators().inverse;
  const auto& ib = cx.graph_b().generators().inverse;
  const std::size_t da = impl_->ad.size(), db = impl_->bd.size();
  // grid cell of face i in Q(v01) and Q(v10)
  const std::size_t r01 = inv ? ia[fi] : fi, s01 = j;
  const std::size_t r10 = fi, s10 = inv ? ib[j] : j;
  LinConstraint c;
  c.rhs = 1;
  auto add = [&](std::uint64_t block, std::uint64_t h, std::size_t r, std::size_t s) {
    for (std::size_t x = 0; x < da; ++x) {
      const Elem ex = impl_->ad[x][r];
      if (ex == 0) continue;
      for (std::size_t y = 0; y < db; ++y) {
        const Elem v = impl_->field.mul(ex, impl_->bd[y][s]);
        if (v == 0) continue;
        c.vars.push_back(((block * impl_->order + h) * da + x) * db + y);
        c.coeffs.push_back(v);
      }
    }
  };
  add(0, corners[1], r01, s01);
  add(1, corners[2], r10, s10);
  return c;
}

UnsatReport certify_unsat(const LinInstance& inst) {
  const FMatrix a = inst.matrix();
  const FVector b = inst.rhs();
  UnsatReport r;
  r.certificate = gf::inconsistency_certificate(a, b);
  r.inconsistent = r.certificate.has_value();
  if (!r.inconsistent) r.assignment = gf::solve(a, b);
  return r;
}

std::string to_string(SatMode m) { return m == SatMode::exact ? "exact" : "local-search"; }

SatMode sat_mode_from_string(const std::string& s) {
  if (s == "exact") return SatMode::exact;
  if (s == "ls" || s == "local-search" || s == "local_search") return SatMode::local_search;
  throw InvalidArgument("unknown max-sat mode '" + s + "'");
}

namespace {

// Residual lhs - rhs per constraint with incremental updates.
struct Evaluator {
  const LinInstance& inst;
  PrimeField f;
  std::vector<std::vector<std::pair<std::size_t, Elem>>> occurs;  // var -> (constraint, coeff)
  std::vector<Elem> residual;
  std::size_t satisfied = 0;

  explicit Evaluator(const LinInstance& in) : inst(in), f(in.p), occurs(in.m), residual(in.n()) {
    for (std::size_t i = 0; i < in.n(); ++i) {
      const auto& c = in.constraints[i];
      if (c.vars.size() != c.coeffs.size()) throw InvalidArgument("constraint " + std::to_string(i) + " is malformed");
      for (std::size_t j = 0; j < c.vars.size(); ++j) {
        if (c.vars[j] >= in.m) throw InvalidArgument("constraint " + std::to_string(i) + " names a variable >= m");
        occurs[c.vars[j]].emplace_back(i, f.reduce(c.coeffs[j]));
      }
    }
  }
  void reset(const std::vector<Elem>& y) {
    satisfied = 0;
    for (std::size_t i = 0; i < inst.n(); ++i) {
      const auto& c = inst.constraints[i];
      Elem s = f.neg(f.reduce(c.rhs));
      for (std::size_t j = 0; j < c.vars.size(); ++j) s = f.add(s, f.mul(f.reduce(c.coeffs[j]), y[c.vars[j]]));
      residual[i] = s;
      satisfied += s == 0;
    }
  }
  // Adds delta to variable v.
  void shift(std::size_t v, Elem delta) {
    for (auto [i, a] : occurs[v]) {
      satisfied -= residual[i] == 0;
      residual[i] = f.add(residual[i], f.mul(a, delta));
      satisfied += residual[i] == 0;
    }
  }
  // Number satisfied if variable v were shifted by delta.
  std::ptrdiff_t gain(std::size_t v, Elem delta) const {
    std::ptrdiff_t g = 0;
    for (auto [i, a] : occurs[v]) {
      const Elem r = f.add(residual[i], f.mul(a, delta));
      g += (r == 0) - (residual[i] == 0);
    }
    return g;
  }
};

void annotate(SatReport& r) {
  if (!r.soundness) {
    r.verdict = r.mode == SatMode::exact ? "exact maximum" : "lower bound on the maximum";
    return;
  }
  const double limit = 1 - *r.soundness;
  const bool above = r.fraction > limit + 1e-12;
  if (r.mode == SatMode::exact)
    r.verdict = above ? "exact maximum exceeds 1 - c1: soundness fails" : "exact maximum is at most 1 - c1: soundness holds";
  else
    r.verdict = above ? "assignment exceeds 1 - c1: soundness fails"
                      : "no assignment found above 1 - c1: consistent with soundness (not a proof)";
}

}  // namespace

std::size_t count_satisfied(const LinInstance& inst, const std::vector<Elem>& y) {
  if (y.size() != inst.m) throw DimensionMismatch("assignment length differs from the variable count");
  Evaluator ev(inst);
  ev.reset(y);
  return ev.satisfied;
}

SatReport max_sat(const LinInstance& inst, SatMode mode, std::uint64_t seed, const SatOptions& opts) {
  Evaluator ev(inst);
  SatReport r;
  r.mode = mode;
  r.total = inst.n();
  r.soundness = opts.c1;
  const PrimeField& f = ev.f;
  if (mode == SatMode::exact) {
    const std::uint64_t budget = opts.budget ? opts.budget : gf::enumeration_budget();
    const std::uint64_t count = gf::checked_pow(inst.p, inst.m);
    if (count == 0 || count > budget)
      throw BudgetExceeded("exact max-sat needs " + std::to_string(inst.p) + "^" + std::to_string(inst.m) +
                           " assignments, budget is " + std::to_string(budget));
    std::vector<Elem> y(inst.m, 0);
    ev.reset(y);
    r.satisfied = ev.satisfied;
    r.assignment = y;
    // modular Gray order: step t adds 1 to digit v_p(t)
    for (std::uint64_t t = 1; t < count && r.satisfied < r.total; ++t) {
      std::uint64_t u = t;
      std::size_t d = 0;
      while (u % inst.p == 0) {
        u /= inst.p;
        ++d;
      }
      y[d] = f.add(y[d], 1);
      ev.shift(d, 1);
      ++r.evaluated;
      if (ev.satisfied > r.satisfied) {
        r.satisfied = ev.satisfied;
        r.assignment = y;
      }
    }
    r.evaluated += 1;
  } else {
    Rng rng(seed);
    const std::size_t steps = opts.max_steps ? opts.max_steps : 20 * (inst.m + 1);
    r.satisfied = 0;
    bool first = true;
    for (std::size_t rs = 0; rs < std::max<std::size_t>(opts.restarts, 1); ++rs) {
      std::vector<Elem> y(inst.m);
      for (auto& v : y) v = static_cast<Elem>(uniform_below(rng, inst.p));
      ev.reset(y);
      for (std::size_t st = 0; st < steps && inst.m > 0; ++st) {
        std::ptrdiff_t best = 0;
        std::size_t bv = 0;
        Elem bd = 0;
        for (std::size_t v = 0; v < inst.m; ++v)
          for (Elem d = 1; d < inst.p; ++d) {
            const auto g = ev.gain(v, d);
            if (g > best) {
              best = g;
              bv = v;
              bd = d;
            }
          }
        if (best <= 0) break;
        y[bv] = f.add(y[bv], bd);
        ev.shift(bv, bd);
        ++r.evaluated;
      }
      if (first || ev.satisfied > r.satisfied) {
        r.satisfied = ev.satisfied;
        r.assignment = y;
        first = false;
      }
      if (r.satisfied == r.total) break;
    }
  }
  r.fraction = r.total ? static_cast<double>(r.satisfied) / static_cast<double>(r.total) : 1.0;
  annotate(r);
  return r;
}

double sos_level_bound(double c1, double c2, double m, double arity) {
  for (double v : {c1, c2, m, arity})
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("sos_level_bound needs positive finite inputs");
  return c1 * c2 * m / (4 * arity);
}

XorInstance reduce_to_3xor(const LinInstance& inst) {
  if (inst.p != 2) throw UnsupportedField("3-XOR reduction is only defined over F_2");
  XorInstance out;
  out.original_vars = inst.m;
  out.vars = inst.m;
  for (const auto& c : inst.constraints) {
    std::vector<std::uint64_t> xs;
    for (std::size_t j = 0; j < c.vars.size(); ++j)
      if (c.coeffs[j] % 2) xs.push_back(c.vars[j]);
    const std::uint8_t b = static_cast<std::uint8_t>(c.rhs % 2);
    const std::size_t w = xs.size();
    if (w <= 3) {
      out.clauses.push_back({xs, b});
      continue;
    }
    // x1 + x2 + z1 = 0, z_{j-1} + x_{j+1} + z_j = 0, z_{w-2} + x_w = b
    const std::uint64_t z0 = out.vars;
    out.vars += w - 2;
    out.clauses.push_back({{xs[0], xs[1], z0}, 0});
    for (std::size_t j = 2; j <= w - 2; ++j) out.clauses.push_back({{z0 + j - 2, xs[j], z0 + j - 1}, 0});
    out.clauses.push_back({{z0 + w - 3, xs[w - 1]}, b});
  }
  return out;
}

LinInstance to_lin(const XorInstance& x) {
  LinInstance inst;
  inst.p = 2;
  inst.m = x.vars;
  for (const auto& c : x.clauses) {
    LinConstraint lc;
    lc.vars = c.vars;
    lc.coeffs.assign(c.vars.size(), 1);
    lc.rhs = c.rhs;
    inst.arity = std::max(inst.arity, lc.vars.size());
    inst.constraints.push_back(std::move(lc));
  }
  return inst;
}

nlohmann::json to_json(const LinConstraint& c) { return {{"vars", c.vars}, {"coeffs", c.coeffs}, {"rhs", c.rhs}}; }

nlohmann::json to_json(const LinInstance& inst) {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : inst.constraints) cs.push_back(to_json(c));
  return {{"p", inst.p}, {"m", inst.m}, {"arity", inst.arity}, {"constraints", cs}, {"provenance", inst.provenance}};
}

LinInstance lin_from_json(const nlohmann::json& j) {
  try {
    LinInstance inst;
    inst.p = j.at("p").get<std::uint32_t>();
    PrimeField f(inst.p);
    inst.m = j.at("m").get<std::uint64_t>();
    for (const auto& c : j.at("constraints")) {
      LinConstraint lc;
      lc.vars = c.at("vars").get<std::vector<std::uint64_t>>();
      lc.coeffs = c.at("coeffs").get<std::vector<Elem>>();
      lc.rhs = f.reduce(c.at("rhs").get<Elem>());
      if (lc.vars.size() != lc.coeffs.size()) throw IoError("constraint vars and coeffs differ in length");
      for (auto v : lc.vars)
        if (v >= inst.m) throw IoError("constraint variable " + std::to_string(v) + " >= m");
      for (auto& a : lc.coeffs) a = f.reduce(a);
      inst.arity = std::max(inst.arity, lc.vars.size());
      inst.constraints.push_back(std::move(lc));
    }
    if (j.contains("provenance")) inst.provenance = j.at("provenance");
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed LIN instance: ") + e.what());
  }
}

nlohmann::json to_json(const UnsatReport& r) {
  nlohmann::json j = {{"inconsistent", r.inconsistent}};
  j["certificate"] = r.certificate ? gf::to_json(*r.certificate) : nlohmann::json(nullptr);
  j["assignment"] = r.assignment ? gf::to_json(*r.assignment) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const SatReport& r) {
  nlohmann::json j = {{"mode", to_string(r.mode)}, {"satisfied", r.satisfied}, {"total", r.total},
                      {"fraction", r.fraction},    {"assignment", r.assignment}, {"evaluated", r.evaluated},
                      {"verdict", r.verdict}};
  if (r.soundness) j["c1"] = *r.soundness;
  return j;
}

nlohmann::json to_json(const XorInstance& x) {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : x.clauses) cs.push_back({{"vars", c.vars}, {"rhs", c.rhs}});
  return {{"vars", x.vars}, {"original_vars", x.original_vars}, {"clauses", cs}};
}

std::string to_dimacs(const XorInstance& x) {
  std::ostringstream os;
  os << "p xor " << x.vars << ' ' << x.clauses.size() << '\n';
  for (const auto& c : x.clauses) {
    os << 'x';
    for (auto v : c.vars) os << ' ' << v + 1;
    os << ' ' << static_cast<int>(c.rhs) << '\n';
  }
  return os.str();
}

}  // namespace qtanner::csp
