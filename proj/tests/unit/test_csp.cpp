#include "doctest.h"

#include <chrono>

#include "csp/lin.hpp"
#include "util/rng.hpp"

using namespace qtanner;
using namespace qtanner::csp;
using gf::FVector;
using gf::PrimeField;

namespace {

tanner::CssCode planted_675() {
  auto s = expander::default_generators(3, 1, 5, 0, expander::GenerationPolicy::best_effort);
  auto pair = inner::search_inner_pair(2, 5, 2, 3, 0.0, 10, 5);
  return tanner::build_code(tanner::build_complex(s, s), pair);
}

LinInstance from_rows(std::uint32_t p, std::uint64_t m, const std::vector<std::pair<std::vector<std::uint64_t>, gf::Elem>>& rows) {
  LinInstance inst;
  inst.p = p;
  inst.m = m;
  for (const auto& [vars, rhs] : rows) {
    LinConstraint c;
    c.vars = vars;
    c.coeffs.assign(vars.size(), 1);
    c.rhs = rhs;
    inst.arity = std::max(inst.arity, vars.size());
    inst.constraints.push_back(c);
  }
  return inst;
}

// brute force: is there an assignment satisfying everything
bool perfectly_satisfiable(const LinInstance& inst) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << inst.m); ++a) {
    bool ok = true;
    for (const auto& c : inst.constraints) {
      unsigned s = 0;
      for (auto v : c.vars) s ^= (a >> v) & 1;
      if (s != c.rhs) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("emission from toy codes") {
  auto steane = tanner::steane_code();
  auto inst = emit_planted_instance(steane);
  CHECK(inst.n() == 7);
  CHECK(inst.m == 3);
  // constraint i lists the rows of H_Z with a one in column i
  for (std::size_t i = 0; i < 7; ++i) {
    std::vector<std::uint64_t> expect;
    for (std::size_t r = 0; r < 3; ++r)
      if (steane.hz.get(r, i)) expect.push_back(r);
    CHECK(inst.constraints[i].vars == expect);
    CHECK(inst.constraints[i].rhs == 1);
  }
  CHECK(inst.arity <= steane.locality());
  CHECK_THROWS_AS(emit_lin_instance(steane, FVector(steane.field(), 7)), BetaNotAdmissible);
  FVector e0(steane.field(), 7);
  e0[0] = 1;
  CHECK_THROWS_AS(emit_lin_instance(steane, e0), BetaNotAdmissible);
}

TEST_CASE("unsat certificates") {
  auto inst = emit_planted_instance(tanner::steane_code());
  auto r = certify_unsat(inst);
  CHECK(r.inconsistent);
  REQUIRE(r.certificate.has_value());
  // lambda^T A = 0 and lambda . b != 0
  const auto a = inst.matrix();
  const auto lam = *r.certificate;
  for (std::size_t j = 0; j < inst.m; ++j) {
    unsigned s = 0;
    for (std::size_t i = 0; i < inst.n(); ++i) s ^= lam[i] & a.get(i, j);
    CHECK(s == 0);
  }
  CHECK(lam.dot(inst.rhs()) != 0);

  auto consistent = from_rows(2, 3, {{{0, 1}, 1}, {{1, 2}, 0}});
  auto c = certify_unsat(consistent);
  CHECK_FALSE(c.inconsistent);
  REQUIRE(c.assignment.has_value());
  std::vector<gf::Elem> y = c.assignment->data();
  CHECK(count_satisfied(consistent, y) == 2);

  auto zero = from_rows(2, 1, {{{}, 1}});
  CHECK(certify_unsat(zero).inconsistent);
}

TEST_CASE("planted Tanner instance and the indexed accessor") {
  auto code = planted_675();
  auto inst = emit_planted_instance(code);
  CHECK(inst.n() == 675);
  CHECK(inst.m == code.hz.rows());
  CHECK(inst.arity <= code.locality());
  CHECK(certify_unsat(inst).inconsistent);

  ConstraintOracle oracle(code.provenance);
  CHECK(oracle.n() == 675);
  CHECK(oracle.m() == inst.m);
  for (std::uint64_t i = 0; i < oracle.n(); ++i) CHECK(oracle.constraint(i) == inst.constraints[i]);
  for (auto conv : {tanner::GridConvention::direct}) {
    auto s = expander::default_generators(3, 1, 5, 0, expander::GenerationPolicy::best_effort);
    auto other = tanner::build_code(tanner::build_complex(s, s), inner::search_inner_pair(2, 5, 2, 3, 0.0, 10, 5), conv);
    auto oi = emit_planted_instance(other);
    ConstraintOracle o2(other.provenance);
    for (std::uint64_t i = 0; i < o2.n(); i += 7) CHECK(o2.constraint(i) == oi.constraints[i]);
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t sink = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) sink += oracle.constraint((i * 37) % 675).vars.size();
  const double per = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count() / 1000;
  CHECK(sink > 0);
  CHECK(per < 100.0);
  CHECK_THROWS_AS(ConstraintOracle(tanner::steane_code().provenance), PreconditionViolated);
}

TEST_CASE("max-sat") {
  auto pair = from_rows(2, 1, {{{0}, 0}, {{0}, 1}});
  auto r = max_sat(pair, SatMode::exact, 0);
  CHECK(r.fraction == 0.5);
  auto consistent = from_rows(2, 4, {{{0, 1}, 1}, {{1, 2, 3}, 0}, {{3}, 1}});
  auto c = max_sat(consistent, SatMode::exact, 0);
  CHECK(c.fraction == 1.0);
  CHECK(count_satisfied(consistent, c.assignment) == 3);
  CHECK(max_sat(consistent, SatMode::local_search, 3).fraction == 1.0);

  for (const auto& code : {tanner::steane_code(), tanner::shor_code()}) {
    auto inst = emit_planted_instance(code);
    auto ex = max_sat(inst, SatMode::exact, 0, {.c1 = 0.05});
    CHECK(ex.fraction < 1.0);
    // unsatisfied count = distance from beta to the row space of H_Z
    FVector ones(code.field(), code.n());
    for (std::size_t i = 0; i < code.n(); ++i) ones[i] = 1;
    CHECK(ex.satisfied == inst.n() - gf::coset_min_weight(ones, code.hz));
    CHECK(count_satisfied(inst, ex.assignment) == ex.satisfied);
    auto ls = max_sat(inst, SatMode::local_search, 1);
    CHECK(ls.fraction <= ex.fraction);
  }
  // exact over F_3 against a direct scan
  LinInstance f3;
  f3.p = 3;
  f3.m = 3;
  f3.constraints = {{{0, 1}, {1, 2}, 1}, {{1, 2}, {1, 1}, 2}, {{0, 2}, {2, 2}, 0}, {{0}, {1}, 2}, {{2}, {1}, 1}};
  std::size_t best = 0;
  for (gf::Elem a = 0; a < 3; ++a)
    for (gf::Elem b = 0; b < 3; ++b)
      for (gf::Elem c3 = 0; c3 < 3; ++c3) best = std::max(best, count_satisfied(f3, {a, b, c3}));
  CHECK(max_sat(f3, SatMode::exact, 0).satisfied == best);
  LinInstance big = from_rows(2, 40, {{{0}, 1}});
  CHECK_THROWS_AS(max_sat(big, SatMode::exact, 0), BudgetExceeded);
}

TEST_CASE("sos level bound") {
  CHECK(sos_level_bound(1, 1, 100, 25) == doctest::Approx(1.0));
  CHECK(sos_level_bound(0.01, 0.1, 1e4, 25) == doctest::Approx(0.1));
  CHECK(sos_level_bound(0.01, 0.1, 2e4, 25) == doctest::Approx(2 * sos_level_bound(0.01, 0.1, 1e4, 25)));
  CHECK_THROWS_AS(sos_level_bound(0, 1, 1, 1), DomainError);
}

TEST_CASE("3-XOR reduction") {
  auto three = from_rows(2, 3, {{{0, 1, 2}, 1}});
  auto r3 = reduce_to_3xor(three);
  CHECK(r3.vars == 3);
  CHECK(r3.clauses.size() == 1);

  auto five = from_rows(2, 5, {{{0, 1, 2, 3, 4}, 1}});
  auto r5 = reduce_to_3xor(five);
  CHECK(r5.vars == 8);
  CHECK(r5.clauses.size() == 4);
  for (const auto& c : r5.clauses) CHECK(c.vars.size() <= 3);
  CHECK(perfectly_satisfiable(to_lin(r5)) == perfectly_satisfiable(five));

  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t m = 2 + uniform_below(rng, 6);
    std::vector<std::pair<std::vector<std::uint64_t>, gf::Elem>> rows;
    const std::size_t count = 1 + uniform_below(rng, 5);
    std::uint64_t extra = 0;
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<std::uint64_t> vars;
      for (std::uint64_t v = 0; v < m; ++v)
        if (uniform_below(rng, 2)) vars.push_back(v);
      extra += vars.size() > 3 ? vars.size() - 2 : 0;
      rows.emplace_back(vars, static_cast<gf::Elem>(uniform_below(rng, 2)));
    }
    if (m + extra > 16) continue;
    auto inst = from_rows(2, m, rows);
    auto red = reduce_to_3xor(inst);
    CHECK(red.vars == m + extra);
    CHECK(red.clauses.size() >= inst.n());
    for (const auto& c : red.clauses) CHECK(c.vars.size() <= 3);
    CHECK(perfectly_satisfiable(to_lin(red)) == perfectly_satisfiable(inst));
  }
  LinInstance f3;
  f3.p = 3;
  CHECK_THROWS_AS(reduce_to_3xor(f3), UnsupportedField);
}

TEST_CASE("instance serialization") {
  auto inst = emit_planted_instance(tanner::steane_code());
  auto back = lin_from_json(to_json(inst));
  CHECK(back.constraints == inst.constraints);
  CHECK(back.m == inst.m);
  auto red = reduce_to_3xor(from_rows(2, 5, {{{0, 1, 2, 3, 4}, 1}}));
  CHECK(to_dimacs(red) == "p xor 8 4\nx 1 2 6 0\nx 6 3 7 0\nx 7 4 8 0\nx 8 5 1\n");
  CHECK_THROWS_AS(lin_from_json(nlohmann::json::parse(R"({"p":2,"m":1,"constraints":[{"vars":[3],"coeffs":[1],"rhs":0}]})")),
                  IoError);
}
