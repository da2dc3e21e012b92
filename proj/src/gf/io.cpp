#include "gf/io.hpp"

#include <sstream>

namespace qtanner::gf {

namespace {

void write_index(std::ostringstream& os, std::size_t idx, Elem val, bool with_value) {
  os << idx + 1;
  if (with_value) os << ':' << val;
}

std::pair<std::size_t, Elem> parse_index(const std::string& tok, bool with_value) {
  try {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) {
      if (with_value) throw IoError("alist: missing value for entry '" + tok + "'");
      return {std::stoull(tok), 1};
    }
    return {std::stoull(tok.substr(0, colon)), static_cast<Elem>(std::stoul(tok.substr(colon + 1)))};
  } catch (const std::logic_error&) {
    throw IoError("alist: malformed entry '" + tok + "'");
  }
}

}  // namespace

std::string to_alist(const FMatrix& m) {
  const bool with_value = m.field().p() > 2;
  const FMatrix t = m.transpose();
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << '\n';
  os << m.max_row_weight() << ' ' << m.max_col_weight() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) os << (r ? " " : "") << m.row_weight(r);
  os << '\n';
  const auto cw = m.column_weights();
  for (std::size_t c = 0; c < cw.size(); ++c) os << (c ? " " : "") << cw[c];
  os << '\n';
  for (const FMatrix* src : {&m, &t}) {
    for (std::size_t r = 0; r < src->rows(); ++r) {
      bool first = true;
      for (const auto& e : src->row_entries(r)) {
        if (!first) os << ' ';
        first = false;
        write_index(os, e.col, e.value, with_value);
      }
      os << '\n';
    }
  }
  return os.str();
}

FMatrix from_alist(const std::string& text, std::uint32_t p) {
  const PrimeField field(p);
  const bool with_value = p > 2;
  std::istringstream is(text);
  std::string line;
  auto next_line = [&]() {
    if (!std::getline(is, line)) throw IoError("alist: unexpected end of input");
    return std::istringstream(line);
  };
  std::size_t rows = 0, cols = 0, maxr = 0, maxc = 0;
  if (!(next_line() >> rows >> cols)) throw IoError("alist: bad dimension line");
  if (!(next_line() >> maxr >> maxc)) throw IoError("alist: bad max weight line");
  std::vector<std::size_t> rw(rows), cw(cols);
  {
    auto ls = next_line();
    for (auto& w : rw) {
      if (!(ls >> w)) throw IoError("alist: bad row weight line");
    }
  }
  {
    auto ls = next_line();
    for (auto& w : cw) {
      if (!(ls >> w)) throw IoError("alist: bad column weight line");
    }
  }
  FMatrix m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto ls = next_line();
    std::string tok;
    std::size_t count = 0;
    while (ls >> tok) {
      auto [idx, val] = parse_index(tok, with_value);
      if (idx == 0 || idx > cols) throw IoError("alist: column index out of range");
      if (val == 0 || val >= p) throw IoError("alist: entry value out of range");
      m.set(r, idx - 1, val);
      ++count;
    }
    if (count != rw[r]) throw IoError("alist: row weight mismatch at row " + std::to_string(r + 1));
  }
  for (std::size_t c = 0; c < cols; ++c) {
    auto ls = next_line();
    std::string tok;
    std::size_t count = 0;
    while (ls >> tok) {
      auto [idx, val] = parse_index(tok, with_value);
      if (idx == 0 || idx > rows || m.get(idx - 1, c) != val) {
        throw IoError("alist: column list disagrees with row lists at column " + std::to_string(c + 1));
      }
      ++count;
    }
    if (count != cw[c]) throw IoError("alist: column weight mismatch at column " + std::to_string(c + 1));
  }
  if (m.max_row_weight() != maxr || m.max_col_weight() != maxc) throw IoError("alist: max weight mismatch");
  return m;
}

nlohmann::json to_json(const FMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (const auto& e : m.row_entries(r)) entries.push_back({r, e.col, e.value});
  }
  return {{"p", m.field().p()}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

FMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    const PrimeField field(j.at("p").get<std::uint32_t>());
    FMatrix m(field, j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    for (const auto& e : j.at("entries")) {
      const auto val = e.at(2).get<std::uint64_t>();
      if (val >= field.p()) throw IoError("matrix json: entry value out of range");
      m.set(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), static_cast<Elem>(val));
    }
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("matrix json: ") + ex.what());
  }
}

nlohmann::json to_json(const FVector& v) { return v.data(); }

FVector vector_from_json(const nlohmann::json& j, PrimeField field) {
  try {
    std::vector<Elem> data;
    for (const auto& x : j) {
      const auto val = x.get<std::int64_t>();
      data.push_back(field.reduce(val));
    }
    return FVector(field, std::move(data));
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("vector json: ") + ex.what());
  }
}

}  // namespace qtanner::gf
