#include <doctest.h>

#include "vkm/atom_space.hpp"

using namespace vkm;

namespace {

AtomSpace make(std::vector<std::string> ids, std::vector<double> w) {
  AtomSpace::CoordMatrix c(static_cast<Index>(ids.size()), 1);
  for (Index i = 0; i < c.rows(); ++i) c(i, 0) = static_cast<double>(i);
  return AtomSpace(std::move(ids), std::move(c), Eigen::Map<RVector>(w.data(), static_cast<Index>(w.size())));
}

}  // namespace

TEST_CASE("atom space accessors") {
  const AtomSpace s = make({"a", "b", "c"}, {1.0, 0.0, 2.5});
  CHECK(s.size() == 3);
  CHECK(s.dim() == 1);
  CHECK(s.id(1) == "b");
  CHECK(s.index_of("c") == 2);
  CHECK(s.contains("a"));
  CHECK_FALSE(s.contains("z"));
  CHECK(s.total_mass() == 3.5);
  const AtomRef r = s.atom(2);
  CHECK(r.id == "c");
  CHECK(r.coords.size() == 1);
  CHECK(r.coords[0] == 2.0);
}

TEST_CASE("atom space rejects bad input") {
  CHECK_THROWS_AS(make({"a", "a"}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(make({"a", ""}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(make({"a", "b"}, {1.0, -1.0}), ValidationError);
  CHECK_THROWS_AS(make({"a", "b"}, {1.0, std::nan("")}), ValidationError);
  CHECK_THROWS_AS((void)make({"a"}, {1.0}).index_of("b"), ValidationError);
}

TEST_CASE("with_weights keeps labels and coordinates") {
  const AtomSpace s = make({"a", "b"}, {1.0, 2.0});
  RVector w(2);
  w << 3.0, 0.0;
  const AtomSpace t = s.with_weights(w);
  CHECK(t.ids() == s.ids());
  CHECK(t.weight(0) == 3.0);
  CHECK(t.weight(1) == 0.0);
  CHECK(t.coords() == s.coords());
  CHECK_THROWS_AS((void)s.with_weights(RVector::Ones(3)), ValidationError);
}

TEST_CASE("zero-dimensional coordinates are allowed") {
  const AtomSpace s({"a", "b"}, AtomSpace::CoordMatrix(2, 0), RVector::Ones(2));
  CHECK(s.dim() == 0);
  CHECK(s.atom(0).coords.empty());
}
