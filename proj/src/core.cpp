#include "netlap/core.hpp"

#include <algorithm>
#include <iterator>

namespace netlap {

VertexSet make_set(std::vector<Index> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

VertexSet all_vertices(std::size_t n) {
  VertexSet s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

VertexSet set_complement(const VertexSet& s, std::size_t n) {
  VertexSet out;
  out.reserve(n - std::min(n, s.size()));
  auto it = s.begin();
  for (Index x = 0; x < n; ++x) {
    while (it != s.end() && *it < x) ++it;
    if (it == s.end() || *it != x) out.push_back(x);
  }
  return out;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(const VertexSet& s, Index x) {
  return std::binary_search(s.begin(), s.end(), x);
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::size_t position_in(const VertexSet& s, Index x) {
  auto it = std::lower_bound(s.begin(), s.end(), x);
  if (it == s.end() || *it != x) {
    throw InputError("vertex " + std::to_string(x) + " is not in the required set");
  }
  return static_cast<std::size_t>(it - s.begin());
}

Field Field::on(VertexSet support, Vector values) {
  if (static_cast<std::size_t>(values.size()) != support.size()) {
    throw InputError("field: value count does not match support size");
  }
  if (!std::is_sorted(support.begin(), support.end()) ||
      std::adjacent_find(support.begin(), support.end()) != support.end()) {
    throw InputError("field: support must be sorted and duplicate-free");
  }
  if (!values.allFinite()) throw InputError("field: non-finite value");
  return Field{std::move(support), std::move(values)};
}

Field Field::zero(VertexSet support) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(support.size()));
  return Field{std::move(support), std::move(v)};
}

Field Field::full(Vector values) {
  auto n = static_cast<std::size_t>(values.size());
  return Field{all_vertices(n), std::move(values)};
}

Scalar Field::at(Index x) const {
  return values(static_cast<Eigen::Index>(position_in(support, x)));
}

Vector Field::restrict_to(const VertexSet& subset) const {
  if (!is_subset(subset, support)) throw InputError("support mismatch");
  Vector out(static_cast<Eigen::Index>(subset.size()));
  std::size_t j = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    while (support[j] != subset[i]) ++j;
    out(static_cast<Eigen::Index>(i)) = values(static_cast<Eigen::Index>(j));
  }
  return out;
}

Scalar Measure::integrate(const Field& f) const {
  Vector v = f.restrict_to(support);
  return weights.transpose() * v;
}

double Solution::max_residual() const {
  double r = 0.0;
  for (const auto& [name, value] : residuals) r = std::max(r, value);
  return r;
}

double max_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
double max_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace netlap
