#include "doctest.h"
#include "pdcqed/errors.hpp"
#include "pdcqed/hamiltonian.hpp"
#include "synthetic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

using namespace pdc;
using namespace pdc::testing;

namespace {

// Untruncated q of a mode, computed on many levels and cut afterwards.
CMatrix q_big(const FockMode& m, int extra = 6) {
  const int L = m.n_max + 1 + extra;
  const CMatrix a = dense_a(L);
  return (a + a.adjoint()) / std::sqrt(2.0 * m.omega);
}

// H = h_el + sum w (n + 1/2) - sum lambda q (e.P) + |sum lambda q e|^2 / 2, assembled densely.
CMatrix dense_oracle(const MatterOperators& mat, const std::vector<FockMode>& modes) {
  const int nm = mat.size();
  std::vector<CMatrix> ids{CMatrix::Identity(nm, nm)};
  for (const auto& m : modes) ids.push_back(CMatrix::Identity(m.dim(), m.dim()));
  auto with = [&](std::vector<std::pair<std::size_t, CMatrix>> ops) {
    auto f = ids;
    for (auto& [k, o] : ops) f[k] = o;
    return dense_kron(f);
  };
  CMatrix h = with({{0, mat.h_el}});
  for (std::size_t a = 0; a < modes.size(); ++a) {
    const auto& m = modes[a];
    const int d = m.dim();
    const CMatrix qa = q_big(m).topLeftCorner(d, d);
    CMatrix num = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) num(k, k) = m.omega * (k + 0.5);
    h += with({{a + 1, num}});
    const CMatrix eP = m.polarization[0] * mat.px + m.polarization[1] * mat.py;
    h -= m.lambda * with({{0, eP}, {a + 1, qa}});
    const CMatrix qb = q_big(m);
    h += 0.5 * m.lambda * m.lambda * with({{a + 1, (qb * qb).topLeftCorner(d, d)}});
    for (std::size_t b = 0; b < modes.size(); ++b) {
      if (b == a) continue;
      const auto& n = modes[b];
      const double c = 0.5 * m.lambda * n.lambda * dot(m.polarization, n.polarization);
      h += c * with({{a + 1, qa}, {b + 1, q_big(n).topLeftCorner(n.dim(), n.dim())}});
    }
  }
  return h;
}

}  // namespace

TEST_CASE("mixing-angle geometries") {
  const double t = std::numbers::pi / 3;
  const auto e1 = polarization_for(1, {t, 0, 0}, Geometry::kDegenerate);
  CHECK(e1[0] == doctest::Approx(0.5));
  CHECK(e1[1] == doctest::Approx(std::sqrt(3.0) / 2));
  const auto e2 = polarization_for(2, {t, 0, 0}, Geometry::kDegenerate);
  CHECK(e2[0] == 0.0);
  CHECK(e2[1] == 1.0);
  const MixingAngles nd{0.0, std::numbers::pi / 2, std::numbers::pi / 2};
  const auto n1 = polarization_for(1, nd, Geometry::kNonDegenerate);
  const auto n2 = polarization_for(2, nd, Geometry::kNonDegenerate);
  const auto n3 = polarization_for(3, nd, Geometry::kNonDegenerate);
  CHECK(n1[0] == 1.0);
  CHECK(n2[0] == doctest::Approx(-1.0));
  CHECK(n3[0] == doctest::Approx(1.0));
  CHECK(std::abs(n2[1]) < 1e-15);
  // theta = 0 puts both degenerate modes on orthogonal axes.
  CHECK(dot(polarization_for(1, {}, Geometry::kDegenerate), polarization_for(2, {}, Geometry::kDegenerate)) == 0.0);
}

TEST_CASE("coupled Hamiltonian equals the dense oracle") {
  const auto mat = synthetic_matter(5, 3);
  std::vector<FockMode> modes{make_mode(1, 0.9, 4, 0.05, {0.6, 0.8}), make_mode(2, 0.45, 3, 0.07, {0.0, 1.0}),
                              make_mode(3, 0.3, 2, 0.03, {1.0, 0.0})};
  CoupledBasis basis(5, modes);
  const auto h = assemble_coupled(basis, mat);
  CHECK(h.defect() < 1e-14);
  CHECK((h.matrix().to_dense() - dense_oracle(mat, modes)).norm() < 1e-12);
}

TEST_CASE("degenerate and non-degenerate assemblers set polarizations from angles") {
  const auto mat = synthetic_matter(4, 8);
  const double t1 = 0.4;
  std::vector<FockMode> modes{make_mode(1, 0.9, 3, 0.05), make_mode(2, 0.45, 3, 0.05)};
  CoupledBasis basis(4, modes);
  auto ref = modes;
  apply_geometry(ref, {t1, 0, 0}, Geometry::kDegenerate);
  CHECK((assemble_degenerate(basis, mat, t1).matrix().to_dense() - dense_oracle(mat, ref)).norm() < 1e-12);

  std::vector<FockMode> three{make_mode(1, 0.9, 2, 0.05), make_mode(2, 0.3, 2, 0.05), make_mode(3, 0.6, 2, 0.05)};
  CoupledBasis b3(4, three);
  const MixingAngles ang{0.0, 1.2, 0.7};
  auto ref3 = three;
  apply_geometry(ref3, ang, Geometry::kNonDegenerate);
  CHECK((assemble_system(b3, mat, ang).matrix().to_dense() - dense_oracle(mat, ref3)).norm() < 1e-12);
}

TEST_CASE("zero coupling leaves a diagonal, uncoupled spectrum") {
  const auto mat = synthetic_matter(4, 2);
  std::vector<FockMode> modes{make_mode(1, 0.9, 3, 0.0), make_mode(2, 0.45, 3, 0.0)};
  CoupledBasis basis(4, modes);
  const CMatrix h = assemble_coupled(basis, mat).matrix().to_dense();
  CHECK((h - CMatrix(h.diagonal().asDiagonal())).norm() == 0.0);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto l = basis.unflatten(i);
    const double e = mat.h_el(l[0], l[0]).real() + 0.9 * (l[1] + 0.5) + 0.45 * (l[2] + 0.5);
    CHECK(h(i, i).real() == doctest::Approx(e).epsilon(1e-14));
  }
}

TEST_CASE("few-level Hamiltonian equals the full one on the restricted matter") {
  const auto mat = synthetic_matter(7, 4);
  const std::vector<int> levels{0, 3, 4};
  std::vector<FockMode> modes{make_mode(1, 0.8, 3, 0.06, {0.0, 1.0}), make_mode(2, 0.4, 3, 0.06, {1.0, 0.0})};
  CoupledBasis basis(3, modes);
  const auto few = assemble_few_level(levels, mat, basis);
  const auto ref = assemble_coupled(basis, mat.restricted(levels));
  CHECK((few.matrix().to_dense() - ref.matrix().to_dense()).norm() == 0.0);
  CoupledBasis wrong(4, modes);
  CHECK_THROWS_AS(assemble_few_level(levels, mat, wrong), ConfigError);
}

TEST_CASE("kron-term assembly equals the dense Kronecker sum") {
  std::vector<FockMode> modes{make_mode(1, 1.0, 2, 0.0), make_mode(2, 1.0, 3, 0.0)};
  CoupledBasis basis(2, modes);
  const auto a1 = ladder_ops(modes[0]).annihilate;
  const auto a2 = ladder_ops(modes[1]).create;
  SparseMatrix sx = SparseMatrix::from_dense((CMatrix(2, 2) << 0, 1, 1, 0).finished());
  const std::vector<KronTerm> terms{{cplx(0.5, 1.0), {{0, sx}, {2, a2}}}, {2.0, {{1, a1}}}};
  const CMatrix got = assemble_kron_terms(basis, terms).to_dense();
  const CMatrix i2 = CMatrix::Identity(2, 2), i3 = CMatrix::Identity(3, 3), i4 = CMatrix::Identity(4, 4);
  const CMatrix want = cplx(0.5, 1.0) * dense_kron({sx.to_dense(), i3, a2.to_dense()}) +
                       2.0 * dense_kron({i2, a1.to_dense(), i4});
  CHECK((got - want).norm() < 1e-14);
}

TEST_CASE("bath terms: Hermitian, and at zero bath coupling only the bath energy is added") {
  const auto mat = synthetic_matter(3, 5);
  std::vector<FockMode> modes{make_mode(1, 0.9, 2, 0.05, {1.0, 0.0}), make_mode(2, 0.45, 2, 0.05, {0.0, 1.0})};
  BathSpec spec;
  spec.windows = {{2.0, 6.0, 4, 2}};
  spec.lambda_bath = 0.0;
  auto pol = [&](int l) { return modes[l - 1].polarization; };
  const auto bath0 = sample_bath(spec, pol);
  CoupledBasis basis(3, modes, bath0.basis);
  const CMatrix h = assemble_coupled(basis, mat, &bath0).matrix().to_dense();
  CoupledBasis sys(3, modes);
  const CMatrix hs = assemble_coupled(sys, mat).matrix().to_dense();
  std::vector<double> w;
  double zp = 0.0;
  for (const auto& b : bath0.modes) w.push_back(b.omega), zp += 0.5 * b.omega;
  const CMatrix hb = bath0.basis.number_form(w).to_dense() + zp * CMatrix::Identity(bath0.basis.size(), bath0.basis.size());
  const CMatrix want = dense_kron({hs, CMatrix::Identity(hb.rows(), hb.rows())}) +
                       dense_kron({CMatrix::Identity(hs.rows(), hs.rows()), hb});
  CHECK((h - want).norm() < 1e-12);

  spec.lambda_bath = 0.01;
  const auto bath = sample_bath(spec, pol);
  const auto hb1 = assemble_coupled(basis, mat, &bath);
  CHECK(hb1.defect() < 1e-14);
  CHECK((hb1.matrix().to_dense() - want).norm() > 1e-4);
}

TEST_CASE("time-dependent model applies H0 + c(t) V + s(t)") {
  const auto mat = synthetic_matter(3, 9);
  std::vector<FockMode> modes{make_mode(1, 0.9, 2, 0.05)};
  CoupledBasis basis(3, modes);
  HamiltonianModel model(assemble_coupled(basis, mat));
  auto v = std::make_shared<SparseHermitianOp>(
      assemble_kron_terms(basis, {{1.0, {{1, quadratures(modes[0]).q.matrix()}}}}));
  model.add_term({"drive", v, [](double t) { return std::sin(t); }});
  model.set_scalar([](double t) { return t * t; });
  CHECK(model.time_dependent());
  CVector x = CVector::Random(basis.dimension()), y(basis.dimension());
  const double t = 0.7;
  model.apply(t, x.data(), y.data());
  const CVector want = model.static_part() * x + std::sin(t) * ((*v) * x) + t * t * x;
  CHECK((y - want).norm() < 1e-13);
}
