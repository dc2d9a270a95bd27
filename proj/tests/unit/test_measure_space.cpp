#include <doctest.h>

#include <cmath>

#include "support/zoo.hpp"
#include "vkm/kernel_spec.hpp"
#include "vkm/measure_space.hpp"

using namespace vkm;
using namespace vkm::testing;

TEST_CASE("pseudo_metric examples") {
  SUBCASE("constant kernel does not separate points") {
    const PseudoMetricMatrix d = pseudo_metric(line_space({0, 1}, {1, 1}), build_kernel(KernelSpec::constant(1.0)));
    CHECK(d(0, 1) == 0.0);
  }
  SUBCASE("gaussian at 0 and 1: d^2 = K(a,a) + K(b,b) - 2 K(a,b)") {
    const PseudoMetricMatrix d = pseudo_metric(line_space({0, 1}, {1, 1}), build_kernel(KernelSpec::gaussian(1.0)));
    CHECK(d(0, 1) == doctest::Approx(std::sqrt(2.0 - 2.0 * std::exp(-1.0))).epsilon(1e-14));
    CHECK(d(1, 0) == d(0, 1));
    CHECK(d(0, 0) == 0.0);
  }
  SUBCASE("matrix case uses the operator norm") {
    // K_a - K_b has Gram diag(2,2) - 0 for the 2x2 identity kernel: d = sqrt 2.
    const PseudoMetricMatrix d = pseudo_metric(line_space({0, 1}, {1, 1}), build_kernel(KernelSpec::delta(2)));
    CHECK(d(0, 1) == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("pseudo_metric_prime examples") {
  const AtomSpace s = line_space({0, 1, 2.5}, {1, 1, 1});
  SUBCASE("scalar kernels: d' = d") {
    const MatrixKernel k = build_kernel(KernelSpec::gaussian(0.7));
    const PseudoMetricMatrix d = pseudo_metric(s, k);
    const PseudoMetricMatrix dp = pseudo_metric_prime(s, k);
    CHECK((d.d - dp.d).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("identity 2x2: d' = 2, d = sqrt 2") {
    const MatrixKernel k = build_kernel(KernelSpec::delta(2));
    CHECK(pseudo_metric_prime(s, k)(0, 1) == doctest::Approx(2.0));
    CHECK(pseudo_metric(s, k)(0, 1) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("constant kernel: d' = 0") {
    CHECK(pseudo_metric_prime(s, build_kernel(KernelSpec::constant(1.0)))(0, 2) == 0.0);
  }
}

TEST_CASE("quotient examples") {
  SUBCASE("constant kernel: one class, representative a") {
    const AtomSpace s = line_space({0, 1}, {1, 1});
    const Quotient q = quotient(s, pseudo_metric(s, build_kernel(KernelSpec::constant(1.0))), 1e-9);
    CHECK(q.num_classes() == 1);
    CHECK(q.representatives[0] == 0);
    CHECK(q.class_of == std::vector<Index>{0, 0});
  }
  SUBCASE("gaussian, distinct positions: singletons") {
    const AtomSpace s = line_space({0, 1, 2}, {1, 1, 1});
    const Quotient q = quotient(s, pseudo_metric(s, build_kernel(KernelSpec::gaussian(1.0))), 1e-9);
    CHECK(q.num_classes() == 3);
  }
  SUBCASE("transitive closure of duplicates") {
    const AtomSpace s = line_space({0.5, 0.5, 0.5, 2.0}, {1, 1, 1, 1});
    const Quotient q = quotient(s, pseudo_metric(s, build_kernel(KernelSpec::gaussian(1.0))), 1e-9);
    CHECK(q.num_classes() == 2);
    CHECK(q.class_of == std::vector<Index>{0, 0, 0, 1});
    CHECK(q.members[0] == std::vector<Index>{0, 1, 2});
    CHECK(q.representatives == std::vector<Index>{0, 3});
  }
  SUBCASE("chain closure: a~b and b~c by tolerance gives one class even if d(a,c) > tol") {
    RMatrix d(3, 3);
    d << 0.0, 0.6, 1.2, 0.6, 0.0, 0.6, 1.2, 0.6, 0.0;
    const Quotient q = quotient(line_space({0, 1, 2}, {1, 1, 1}), PseudoMetricMatrix{d}, 0.7);
    CHECK(q.num_classes() == 1);
  }
}

TEST_CASE("support examples") {
  const MatrixKernel g = build_kernel(KernelSpec::gaussian(1.0));
  SUBCASE("zero-mass isolated atom is excluded") {
    const AtomSpace s = line_space({0, 1, 2}, {1, 1, 0});
    const SupportSet sup = support(s, pseudo_metric(s, g), 1e-9);
    CHECK(sup.members == std::vector<Index>{0, 1});
    CHECK_FALSE(sup.contains(2));
  }
  SUBCASE("zero-mass atom at distance zero joins the support") {
    const AtomSpace s = line_space({0, 0}, {1, 0});
    const SupportSet sup = support(s, pseudo_metric(s, g), 1e-9);
    CHECK(sup.members == std::vector<Index>{0, 1});
  }
  SUBCASE("all positive masses: everything") {
    const AtomSpace s = line_space({0, 1, 2}, {1, 2, 3});
    CHECK(support(s, pseudo_metric(s, g), 1e-9).size() == 3);
  }
  SUBCASE("full measure and collapse") {
    const AtomSpace s = line_space({0, 0, 1, 3}, {1, 0.25, 0, 2});
    const Quotient q = quotient(s, pseudo_metric(s, g), 1e-9);
    const SupportSet sup = support(s, q);
    CHECK(measure_of(s, sup) == s.total_mass());
    const AtomSpace c = collapse(s, q);
    CHECK(c.size() == 3);
    CHECK(c.weight(0) == 1.25);
    CHECK(c.id(1) == "c");
    CHECK(c.total_mass() == s.total_mass());
  }
}

TEST_CASE("default tol_quotient scales with the kernel diagonal") {
  const AtomSpace s = line_space({0, 1}, {1, 1});
  CHECK(default_tol_quotient(s, build_kernel(KernelSpec::constant(4.0))) == doctest::Approx(3e-9));
  CHECK(default_tol_quotient(s, build_kernel(KernelSpec::constant(0.0))) == doctest::Approx(1e-9));
}
