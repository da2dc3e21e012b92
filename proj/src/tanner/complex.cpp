#include "tanner/complex.hpp"

namespace qtanner::tanner {

std::string to_string(GridConvention c) { return c == GridConvention::direct ? "direct" : "local_inverse"; }

GridConvention grid_convention_from_string(const std::string& s) {
  if (s == "direct") return GridConvention::direct;
  if (s == "local_inverse" || s == "local-inverse") return GridConvention::local_inverse;
  throw InvalidArgument("unknown grid convention '" + s + "'");
}

SquareComplex::SquareComplex(expander::GeneratorMultiset a, expander::GeneratorMultiset b)
    : a_(std::move(a)), b_(std::move(b)), delta_(a_.degree()), order_(a_.vertex_count()) {
  if (!(a_.group() == b_.group())) throw GroupMismatch("A and B generate different groups");
  if (a_.degree() != b_.degree()) throw DimensionMismatch("|A| and |B| must be equal");
  if (order_ == 0) throw BudgetExceeded("group order too large to materialize a complex");
}

std::array<std::uint64_t, 4> SquareComplex::corners(std::uint64_t f) const {
  const std::size_t j = f % delta_;
  const std::size_t i = (f / delta_) % delta_;
  const std::uint64_t g = f / delta_ / delta_;
  const std::uint64_t ag = a_.neighbor(g, i);
  return {g, ag, b_.neighbor_right(g, j), b_.neighbor_right(ag, j)};
}

std::uint64_t SquareComplex::local_face(Corner corner, std::uint64_t h, std::size_t r, std::size_t s,
                                        GridConvention conv) const {
  const auto& ia = a_.generators().inverse;
  const auto& ib = b_.generators().inverse;
  switch (corner) {
    case Corner::v00:
      return face(h, r, s);
    case Corner::v01:
      // a_i g = h, so g = a_i^{-1} h
      if (conv == GridConvention::local_inverse) return face(a_.neighbor(h, r), ia[r], s);
      return face(a_.neighbor(h, ia[r]), r, s);
    case Corner::v10:
      if (conv == GridConvention::local_inverse) return face(b_.neighbor_right(h, s), r, ib[s]);
      return face(b_.neighbor_right(h, ib[s]), r, s);
    case Corner::v11:
      if (conv == GridConvention::local_inverse) {
        return face(b_.neighbor_right(a_.neighbor(h, r), s), ia[r], ib[s]);
      }
      return face(b_.neighbor_right(a_.neighbor(h, ia[r]), ib[s]), r, s);
  }
  throw InvalidArgument("bad corner");
}

SquareComplex build_complex(const expander::GeneratorMultiset& a, const expander::GeneratorMultiset& b) {
  return SquareComplex(a, b);
}

}  // namespace qtanner::tanner
