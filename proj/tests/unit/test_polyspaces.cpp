#include "ddr/polyspaces.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace ddr;

namespace {

int p3(int l) { return l < 0 ? 0 : (l + 1) * (l + 2) * (l + 3) / 6; }
int p2(int l) { return l < 0 ? 0 : (l + 1) * (l + 2) / 2; }

// Closed-form dimensions on a cell
int cell_dim(BasisKind k, int l) {
  switch (k) {
  case BasisKind::P: return p3(l);
  case BasisKind::VP: return 3 * p3(l);
  case BasisKind::G: return p3(l + 1) - 1;
  case BasisKind::CG: return 3 * p3(l) - p3(l + 1) + 1;
  case BasisKind::R: return 3 * p3(l + 1) - p3(l + 2) + 1;
  case BasisKind::CR: return p3(l - 1);
  case BasisKind::NE: return l * (l + 2) * (l + 3) / 2;
  case BasisKind::RT: return l * (l + 1) * (l + 3) / 2;
  case BasisKind::P0: return p3(l) - 1;
  }
  return -1;
}

int face_dim(BasisKind k, int l) {
  switch (k) {
  case BasisKind::P: return p2(l);
  case BasisKind::VP: return 2 * p2(l);
  case BasisKind::G:
  case BasisKind::R: return p2(l + 1) - 1;
  case BasisKind::CG:
  case BasisKind::CR: return p2(l - 1);
  case BasisKind::NE:
  case BasisKind::RT: return l * (l + 2);
  case BasisKind::P0: return p2(l) - 1;
  }
  return -1;
}

const BasisKind k_all[] = {BasisKind::P, BasisKind::VP, BasisKind::G,  BasisKind::CG, BasisKind::R,
                           BasisKind::CR, BasisKind::NE, BasisKind::RT, BasisKind::P0};

bool has_min_degree(BasisKind k, int l) {
  return !((k == BasisKind::NE || k == BasisKind::RT) && l < 1);
}

Points random_points_in_cube(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Points p(3, n);
  for (int j = 0; j < n; ++j) p.col(j) = ddr_test::random_point(rng);
  return p;
}

double residual_outside(const PolyBasis& target, const Values& v, const QuadRule& rule) {
  const Values tv = target.values3(rule.points);
  const Eigen::MatrixXd c = gram(tv, v, rule.weights);
  Values r(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) r[k] = v[k] - tv[k] * c;
  return std::sqrt(gram(r, r, rule.weights).diagonal().maxCoeff());
}

} // namespace

TEST_CASE("basis dimensions") {
  const Mesh m = agglomerate_pairs(generate_cubic_mesh(2), 0);
  for (int l = 0; l <= 3; ++l) {
    for (BasisKind k : k_all) {
      if (!has_min_degree(k, l)) continue;
      CHECK(analytic_dim(k, 3, l) == cell_dim(k, l));
      CHECK(analytic_dim(k, 2, l) == face_dim(k, l));
      CHECK(make_basis(m, {3, 0}, k, l).dim() == cell_dim(k, l));
      CHECK(make_basis(m, {2, 3}, k, l).dim() == face_dim(k, l));
    }
    CHECK(make_basis(m, {1, 0}, BasisKind::P, l).dim() == l + 1);
  }
  CHECK(make_basis(m, {3, 0}, BasisKind::P, 1).dim() == 4);
  CHECK(make_basis(m, {2, 0}, BasisKind::P, 2).dim() == 6);
  CHECK(make_basis(m, {3, 0}, BasisKind::CG, 1).dim() == 3);
  CHECK(make_basis(m, {3, 0}, BasisKind::CG, 2).dim() == 11);
  CHECK(make_basis(m, {2, 0}, BasisKind::R, 0).dim() == 2);
  CHECK(make_basis(m, {3, 0}, BasisKind::R, 0).dim() == 3);
  CHECK_THROWS_AS(make_basis(m, {1, 0}, BasisKind::VP, 1), ArgumentError);
}

TEST_CASE("orthonormality and first member") {
  const Mesh m = agglomerate_pairs(generate_cubic_mesh(2), 0);
  for (EntityRef e : {EntityRef{3, 1}, EntityRef{2, 5}, EntityRef{1, 2}}) {
    const QuadRule rule = entity_rule(m, e, 10);
    for (int l = 0; l <= 3; ++l) {
      for (BasisKind k : k_all) {
        if (!has_min_degree(k, l) || (e.dim == 1 && k != BasisKind::P)) continue;
        const PolyBasis b = make_basis(m, e, k, l);
        if (b.dim() == 0) continue;
        const Values v = b.values3(rule.points);
        const Eigen::MatrixXd G = gram(v, v, rule.weights);
        if (k == BasisKind::NE || k == BasisKind::RT) {
          // union of two orthonormal pieces
          CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues()(0) > 1e-6);
          continue;
        }
        CHECK((G - Eigen::MatrixXd::Identity(b.dim(), b.dim())).cwiseAbs().maxCoeff() < 1e-11);
        if (k == BasisKind::P) {
          const double c = 1. / std::sqrt(m.measure(e));
          CHECK((v[0].col(0).array() - c).abs().maxCoeff() < 1e-12 * c);
        }
      }
    }
  }
}

TEST_CASE("decompositions and hierarchy") {
  const Mesh m = generate_cubic_mesh(2);
  for (EntityRef e : {EntityRef{3, 2}, EntityRef{2, 7}}) {
    const QuadRule rule = entity_rule(m, e, 10);
    for (int l = 0; l <= 3; ++l) {
      const PolyBasis vp = make_basis(m, e, BasisKind::VP, l);
      for (auto [S, Sc] : {std::pair{BasisKind::G, BasisKind::CG}, std::pair{BasisKind::R, BasisKind::CR}}) {
        const PolyBasis a = make_basis(m, e, S, l), b = make_basis(m, e, Sc, l);
        CHECK(a.dim() + b.dim() == vp.dim());
        // the union spans vP^l: stacked Gram of the two bases is nonsingular
        Values u = a.values3(rule.points);
        const Values bv = b.values3(rule.points);
        for (std::size_t c = 0; c < u.size(); ++c) {
          Eigen::MatrixXd s(u[c].rows(), u[c].cols() + bv[c].cols());
          s << u[c], bv[c];
          u[c] = s;
        }
        const Eigen::MatrixXd G = gram(u, u, rule.weights);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        CHECK(es.eigenvalues()(0) > 1e-6);
        // members of vP^l
        CHECK(residual_outside(vp, u, rule) < 1e-10);
        if (l >= 1) {
          const PolyBasis lower = make_basis(m, e, Sc, l - 1);
          if (lower.dim() > 0) CHECK(residual_outside(b, lower.values3(rule.points), rule) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("isomorphisms between complements and ranges") {
  const Mesh m = agglomerate_pairs(generate_cubic_mesh(2), 1);
  for (int l = 1; l <= 3; ++l) {
    const EntityRef T{3, 0}, F{2, 0};
    const QuadRule rt = entity_rule(m, T, 2 * l + 2), rf = entity_rule(m, F, 2 * l + 2);
    auto min_sv = [](const Eigen::MatrixXd& M) {
      return M.rows() == M.cols() ? Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues().minCoeff() : -1.;
    };
    const PolyBasis cgT = make_basis(m, T, BasisKind::CG, l), rT = make_basis(m, T, BasisKind::R, l - 1);
    CHECK(min_sv(gram(rT.values(rt.points), curl(cgT).values(rt.points), rt.weights)) > 1e-6);
    const PolyBasis crT = make_basis(m, T, BasisKind::CR, l), pT = make_basis(m, T, BasisKind::P, l - 1);
    CHECK(min_sv(gram(pT.values(rt.points), div(crT).values(rt.points), rt.weights)) > 1e-6);
    const PolyBasis crF = make_basis(m, F, BasisKind::CR, l), pF = make_basis(m, F, BasisKind::P, l - 1);
    CHECK(min_sv(gram(pF.values(rf.points), div(crF).values(rf.points), rf.weights)) > 1e-6);
    const PolyBasis p0F = make_basis(m, F, BasisKind::P0, l), rF = make_basis(m, F, BasisKind::R, l - 1);
    CHECK(min_sv(gram(rF.values(rf.points), vrot_face(p0F).values(rf.points), rf.weights)) > 1e-6);
  }
}

TEST_CASE("face R^0 is the constant tangent fields") {
  const Mesh m = generate_tet_mesh(1);
  for (int f = 0; f < 3; ++f) {
    const QuadRule rule = entity_rule(m, {2, f}, 4);
    const PolyBasis r0 = make_basis(m, {2, f}, BasisKind::R, 0);
    Values t(3, Eigen::MatrixXd(rule.size(), 2));
    for (int c = 0; c < 3; ++c) {
      t[c].col(0).setConstant(m.face(f).frame[0](c));
      t[c].col(1).setConstant(m.face(f).frame[1](c));
    }
    CHECK(residual_outside(r0, t, rule) < 1e-12);
  }
}

TEST_CASE("l2 projection") {
  const Mesh m = agglomerate_pairs(generate_cubic_mesh(2), 0);
  const EntityRef T{3, 0};
  const QuadRule rule = entity_rule(m, T, 10);
  for (int l = 0; l <= 3; ++l) {
    const PolyBasis b = make_basis(m, T, BasisKind::P, l, rule);
    const Eigen::MatrixXd self = l2_project(b, rule, b.values(rule.points));
    CHECK((self - Eigen::MatrixXd::Identity(b.dim(), b.dim())).cwiseAbs().maxCoeff() < 1e-12);

    // a polynomial of degree l in physical coordinates is reproduced
    auto f = [l](const Vec3& x) { return 1. + std::pow(x(0) - 0.3 * x(2), l) - 0.5 * std::pow(x(1), std::max(l - 1, 0)); };
    Values fv(1, Eigen::MatrixXd(rule.size(), 1));
    for (std::size_t q = 0; q < rule.size(); ++q) fv[0](q, 0) = f(rule.points.col(q));
    const Eigen::VectorXd a = l2_project(b, rule, fv).col(0);
    const Points pts = random_points_in_cube(20, 3);
    const Eigen::VectorXd rec = b.values(pts)[0] * a;
    for (int j = 0; j < 20; ++j) CHECK(rec(j) == doctest::Approx(f(pts.col(j))).epsilon(1e-10));
  }
}

TEST_CASE("cG projection against a raw normal-equations oracle") {
  // cG^0(T) = {0}, so the first nontrivial degree is used
  const Mesh m = generate_cubic_mesh(1);
  const EntityRef T{3, 0};
  const QuadRule rule = entity_rule(m, T, 8);
  const Vec3 xT = m.cell(0).center;
  for (int l = 1; l <= 2; ++l) {
    // raw generators (x - x_T) x (e_c m_j), m_j unscaled monomials of degree <= l-1
    const auto& ex = monomial_exponents(3, l - 1);
    const int ng = 3 * static_cast<int>(ex.size());
    auto gen = [&](int i, const Vec3& x) {
      Vec3 e = Vec3::Zero();
      e(i / static_cast<int>(ex.size())) = 1.;
      const auto& a = ex[i % ex.size()];
      const Vec3 y = x - xT;
      return Vec3(y.cross(e) * std::pow(y(0), a[0]) * std::pow(y(1), a[1]) * std::pow(y(2), a[2]));
    };
    for (const Vec3& cst : {Vec3(1., -2., 0.5), Vec3(0.3, 0.1, -1.)}) {
      auto field = [&](const Vec3& x) { return Vec3(cst + Vec3(x(1), -x(2), 2. * x(0))); };
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(ng, ng);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ng);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec3 x = rule.points.col(q);
        for (int i = 0; i < ng; ++i) {
          rhs(i) += rule.weights(q) * gen(i, x).dot(field(x));
          for (int j = 0; j < ng; ++j) G(i, j) += rule.weights(q) * gen(i, x).dot(gen(j, x));
        }
      }
      const Eigen::VectorXd a = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(G).solve(rhs);

      const PolyBasis cg = make_basis(m, T, BasisKind::CG, l, rule);
      Values fv(3, Eigen::MatrixXd(rule.size(), 1));
      for (std::size_t q = 0; q < rule.size(); ++q)
        for (int c = 0; c < 3; ++c) fv[c](q, 0) = field(rule.points.col(q))(c);
      const Eigen::VectorXd coef = l2_project(cg, rule, fv).col(0);
      const Points pts = random_points_in_cube(10, 4);
      const Values bv = cg.values(pts);
      for (int j = 0; j < 10; ++j) {
        Vec3 oracle = Vec3::Zero();
        for (int i = 0; i < ng; ++i) oracle += a(i) * gen(i, pts.col(j));
        for (int c = 0; c < 3; ++c) CHECK(std::abs((bv[c].row(j) * coef)(0) - oracle(c)) < 1e-11);
      }
    }
  }
}

TEST_CASE("recovery operator") {
  const Mesh m = generate_cubic_mesh(2);
  std::mt19937_64 rng(17);
  auto rnd = [&](int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = ddr_test::uniform(rng, -1., 1.);
    return v;
  };
  double lo = 1e300, hi = 0.;
  for (int d : {2, 3}) {
    for (int idx = 0; idx < static_cast<int>(m.n_entities(d)); ++idx) {
      const EntityRef e{d, idx};
      for (int l = 1; l <= 3; ++l) {
        const QuadRule rule = entity_rule(m, e, 2 * l + 2);
        const PolyBasis vp = make_basis(m, e, BasisKind::VP, l, rule);
        const Values vv = vp.values(rule.points);
        for (auto [sk, sck] : {std::pair{BasisKind::G, BasisKind::CG}, std::pair{BasisKind::R, BasisKind::CR}}) {
          const PolyBasis S = make_basis(m, e, sk, l, rule), Sc = make_basis(m, e, sck, l, rule);
          const Eigen::MatrixXd pS = gram(S.values(rule.points), vv, rule.weights);
          const Eigen::MatrixXd pSc = gram(Sc.values(rule.points), vv, rule.weights);
          for (int s = 0; s < 5; ++s) {
            const Eigen::VectorXd a0 = rnd(vp.dim());
            CHECK((recovery(S, Sc, vp, rule, pS * a0, pSc * a0) - a0).norm() < 1e-10 * a0.norm());
            const Eigen::VectorXd b = rnd(S.dim()), c = rnd(Sc.dim());
            const Eigen::VectorXd a = recovery(S, Sc, vp, rule, b, c);
            CHECK((pS * a - b).norm() < 1e-10);
            CHECK((pSc * a - c).norm() < 1e-10);
            const double ratio = a.norm() / (b.norm() + c.norm());
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
          }
          CHECK(projection_coupling(S, Sc, rule) < 1.);
        }
      }
    }
  }
  CHECK(lo >= 0.25);
  CHECK(hi <= 4.);
}
