#include "doctest.h"
#include "pdcqed/basis.hpp"
#include "pdcqed/errors.hpp"

using namespace pdc;

TEST_CASE("flatten and unflatten are inverse, matter most significant") {
  FockMode a, b;
  a.label = 1, a.n_max = 3, a.omega = 1.0;
  b.label = 2, b.n_max = 2, b.omega = 0.5;
  CoupledBasis basis(4, {a, b}, BathBasis(3, 2));
  CHECK(basis.factor_count() == 4);
  CHECK(basis.dimension() == 4 * 4 * 3 * 10);
  CHECK(basis.stride(0) == 4 * 3 * 10);
  CHECK(basis.mode_factor(2) == 2);
  CHECK(basis.bath_factor() == 3);
  CHECK(basis.has_mode(1));
  CHECK(!basis.has_mode(3));
  CHECK_THROWS_AS(basis.mode_factor(3), ConfigError);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto l = basis.unflatten(i);
    CHECK(basis.flatten(l) == i);
    for (std::size_t f = 0; f < basis.factor_count(); ++f) CHECK(basis.component(i, f) == l[f]);
  }
  CHECK(basis.flatten({1, 0, 0, 0}) == basis.stride(0));
}

TEST_CASE("descriptor identifies the shape") {
  FockMode a;
  a.label = 1, a.n_max = 3, a.omega = 1.0;
  CHECK(CoupledBasis(4, {a}).descriptor() != CoupledBasis(5, {a}).descriptor());
  CHECK(CoupledBasis(4, {a}).descriptor() == CoupledBasis(4, {a}).descriptor());
}
