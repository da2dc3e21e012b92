#include "tanner/code.hpp"

#include <algorithm>

#include "gf/io.hpp"

namespace qtanner::tanner {

using gf::FMatrix;
using gf::FVector;

std::size_t CssCode::locality() const {
  return std::max({hx.max_row_weight(), hx.max_col_weight(), hz.max_row_weight(), hz.max_col_weight()});
}

CssCode make_css(FMatrix hx, FMatrix hz, std::string name) {
  if (!(hx.field() == hz.field())) throw InvalidArgument("H_X and H_Z are over different fields");
  if (hx.cols() != hz.cols()) throw DimensionMismatch("H_X and H_Z have different block lengths");
  CssCode c{std::move(hx), std::move(hz), std::move(name), nlohmann::json::object()};
  if (!c.orthogonal()) throw PreconditionViolated("H_X H_Z^T != 0: not a CSS code");
  return c;
}

CssCode build_code(const SquareComplex& complex, const inner::InnerCodePair& pair, GridConvention conv) {
  const std::size_t delta = complex.delta();
  if (pair.delta() != delta) {
    throw DimensionMismatch("inner code length " + std::to_string(pair.delta()) + " != complex degree " +
                            std::to_string(delta));
  }
  const auto& f = pair.a.field();
  const std::uint64_t order = complex.group_order();
  const std::uint64_t n = complex.face_count();
  const gf::LinearCode ad = pair.a.dual(), bd = pair.b.dual();

  auto tensor_rows = [&](const gf::LinearCode& ca, const gf::LinearCode& cb, Corner c0, Corner c1) {
    FMatrix h(f, 2 * order * ca.dim() * cb.dim(), n);
    std::size_t row = 0;
    for (Corner corner : {c0, c1}) {
      for (std::uint64_t g = 0; g < order; ++g) {
        std::vector<std::uint64_t> faces(delta * delta);
        for (std::size_t r = 0; r < delta; ++r) {
          for (std::size_t s = 0; s < delta; ++s) faces[r * delta + s] = complex.local_face(corner, g, r, s, conv);
        }
        for (std::size_t x = 0; x < ca.dim(); ++x) {
          const auto arow = ca.basis().row_entries(x);
          for (std::size_t y = 0; y < cb.dim(); ++y) {
            const auto brow = cb.basis().row_entries(y);
            for (const auto& ea : arow) {
              for (const auto& eb : brow) h.set(row, faces[ea.col * delta + eb.col], f.mul(ea.value, eb.value));
            }
            ++row;
          }
        }
      }
    }
    return h;
  };

  CssCode code;
  code.hx = tensor_rows(pair.a, pair.b, Corner::v00, Corner::v11);
  code.hz = tensor_rows(ad, bd, Corner::v01, Corner::v10);
  code.name = "quantum-tanner";
  code.provenance = {{"kind", "tanner"},
                     {"group_p", complex.graph_a().group().p()},
                     {"group_m", complex.graph_a().group().m()},
                     {"delta", delta},
                     {"convention", to_string(conv)},
                     {"k_A", pair.a.dim()},
                     {"k_B", pair.b.dim()},
                     {"generators", expander::to_json(complex.graph_a().generators())},
                     {"generators_b", expander::to_json(complex.graph_b().generators())},
                     {"inner", inner::to_json(pair)}};
  return code;
}

DimensionReport code_dimension(const CssCode& code) {
  DimensionReport r;
  r.n = code.n();
  r.rank_x = gf::rank(code.hx);
  r.rank_z = gf::rank(code.hz);
  r.k = r.n - r.rank_x - r.rank_z;
  const auto& p = code.provenance;
  if (p.is_object() && p.value("kind", "") == "tanner") {
    const double delta = p.at("delta").get<double>();
    const double ra = p.at("k_A").get<double>() / delta, rb = p.at("k_B").get<double>() / delta;
    r.counting_bound = -(1 - 2 * ra) * (1 - 2 * rb) * static_cast<double>(r.n);
  }
  return r;
}

PlantedReport verify_planted(const CssCode& code) {
  const auto& f = code.field();
  const FVector one = FVector::ones(f, code.n());
  PlantedReport r;
  r.one_in_cx = code.hx.multiply(one).is_zero();
  r.one_in_cz = code.hz.multiply(one).is_zero();
  r.one_not_in_cz_perp = !gf::in_rowspace(code.hz, one);
  r.one_not_in_cx_perp = !gf::in_rowspace(code.hx, one);
  r.row_sums_zero = true;
  for (const FMatrix* h : {&code.hx, &code.hz}) {
    for (std::size_t row = 0; row < h->rows() && r.row_sums_zero; ++row) {
      std::uint64_t sum = 0;
      for (const auto& e : h->row_entries(row)) sum += e.value;
      r.row_sums_zero = sum % f.p() == 0;
    }
  }
  r.n_mod_p = static_cast<std::uint32_t>(code.n() % f.p());
  return r;
}

namespace {

FMatrix binary(std::size_t cols, const std::vector<std::vector<std::size_t>>& supports) {
  FMatrix m(gf::PrimeField(2), supports.size(), cols);
  for (std::size_t r = 0; r < supports.size(); ++r) {
    for (std::size_t c : supports[r]) m.set(r, c, 1);
  }
  return m;
}

}  // namespace

CssCode steane_code() {
  // Hamming [7,4] checks: column j is the binary expansion of j+1.
  FMatrix h(gf::PrimeField(2), 3, 7);
  for (std::size_t j = 0; j < 7; ++j) {
    for (std::size_t b = 0; b < 3; ++b) h.set(b, j, ((j + 1) >> b) & 1);
  }
  auto c = make_css(h, h, "steane");
  c.provenance = {{"kind", "toy"}, {"name", "steane"}};
  return c;
}

CssCode shor_code() {
  // Z-checks compare neighbours inside each block of three; X-checks compare blocks.
  auto hz = binary(9, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {6, 7}, {7, 8}});
  auto hx = binary(9, {{0, 1, 2, 3, 4, 5}, {3, 4, 5, 6, 7, 8}});
  auto c = make_css(hx, hz, "shor");
  c.provenance = {{"kind", "toy"}, {"name", "shor"}};
  return c;
}

CssCode toy_code(const std::string& name) {
  if (name == "steane") return steane_code();
  if (name == "shor") return shor_code();
  throw InvalidArgument("unknown toy code '" + name + "' (expected steane or shor)");
}

nlohmann::json to_json(const CssCode& code) {
  return {{"name", code.name},
          {"p", code.field().p()},
          {"n", code.n()},
          {"H_X", gf::to_json(code.hx)},
          {"H_Z", gf::to_json(code.hz)},
          {"locality", code.locality()},
          {"provenance", code.provenance}};
}

CssCode code_from_json(const nlohmann::json& j) {
  try {
    auto c = make_css(gf::matrix_from_json(j.at("H_X")), gf::matrix_from_json(j.at("H_Z")),
                      j.value("name", std::string()));
    if (j.contains("provenance")) c.provenance = j.at("provenance");
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("code json: ") + ex.what());
  }
}

nlohmann::json to_json(const DimensionReport& r) {
  nlohmann::json j{{"n", r.n}, {"rank_X", r.rank_x}, {"rank_Z", r.rank_z}, {"k", r.k}};
  j["counting_bound"] = r.counting_bound ? nlohmann::json(*r.counting_bound) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const PlantedReport& r) {
  return {{"one_in_CX", r.one_in_cx},
          {"one_in_CZ", r.one_in_cz},
          {"one_not_in_CZperp", r.one_not_in_cz_perp},
          {"one_not_in_CXperp", r.one_not_in_cx_perp},
          {"row_sums_zero", r.row_sums_zero},
          {"n_mod_p", r.n_mod_p},
          {"all", r.all()}};
}

}  // namespace qtanner::tanner
