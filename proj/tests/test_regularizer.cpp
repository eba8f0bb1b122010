#include <doctest.h>

#include <cmath>

#include "local_regret/oracles.hpp"
#include "local_regret/regularizer.hpp"
#include "support.hpp"

using namespace local_regret;
using Eigen::MatrixXd;

TEST_CASE("regularizer at the zero matrix") {
  const auto e = eval_regularizer(MatrixXd::Zero(2, 2), 2);
  CHECK(e.value == 0.0);
  CHECK((e.gradient - 2.0 * MatrixXd::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("regularizer at the uniform matrix is log(1 + n)") {
  for (int n = 1; n <= 4; ++n)
    for (int L = 1; L <= 4; ++L) {
      const auto m = uniform_matrix({n, L});
      CHECK(eval_regularizer(m).value == doctest::Approx(std::log(1.0 + n)).epsilon(1e-12));
      CHECK(eval_regularizer(m).value ==
            doctest::Approx(testing_support::log_det_regularizer(m.entries, L)).epsilon(1e-12));
    }
}

TEST_CASE("indefinite I + L M is rejected with the eigenvalue named") {
  MatrixXd m = MatrixXd::Zero(2, 2);
  m(0, 0) = -1.0;  // I + 2 M has eigenvalue -1
  try {
    eval_regularizer(m, 2);
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("-1") != std::string::npos);
  }
}

TEST_CASE("gradient matches central differences of a Cholesky log det") {
  Rng rng = make_rng(1, "grad");
  const std::vector<ProblemDims> dims = {{1, 2}, {2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}, {1, 9}};
  for (int c = 0; c < 21; ++c) {
    const ProblemDims d = dims[c % dims.size()];
    const auto m = random_feasible(d, rng);
    const auto e = eval_regularizer(m);
    CHECK(e.gradient == e.gradient.transpose());
    const MatrixXd fd = testing_support::central_gradient(
        [&](const MatrixXd& x) { return testing_support::log_det_regularizer(x, d.n_labels); }, m.entries, 1e-5);
    CHECK((e.gradient - fd).norm() / fd.norm() <= 1e-4);
    CHECK((shifted_inverse(m.entries, d.n_labels) * d.n_labels - e.gradient).norm() < 1e-10);
  }
}

TEST_CASE("diameter bound") {
  CHECK(diameter_bound({4, 3}) == 12.0);
  CHECK(diameter_bound({1, 1}) == 1.0);
  CHECK(eval_regularizer(MatrixXd::Ones(1, 1), 1).value == doctest::Approx(std::log(2.0)));
  CHECK(diameter_bound({2, 2}) == 4.0);
  CHECK(eval_regularizer(uniform_matrix({2, 2})).value == doctest::Approx(std::log(3.0)));
  Rng rng = make_rng(2, "diam");
  for (int c = 0; c < 50; ++c) {
    const ProblemDims d(2 + c % 3, 2 + c % 4);
    CHECK(std::abs(eval_regularizer(random_feasible(d, rng)).value) <= diameter_bound(d));
  }
}

TEST_CASE("inverse-Hessian quadratic form") {
  SUBCASE("all-ones payoff at the uniform matrix is -1") {
    for (int L = 2; L <= 5; ++L) {
      const auto m = uniform_matrix({3, L});
      const auto q = inv_hessian_quadform(m, 0, 2, MatrixXd::Ones(L, L));
      CHECK(q.value == doctest::Approx(-1.0).epsilon(1e-12));
      CHECK(q.block_sum == doctest::Approx(L).epsilon(1e-12));
    }
  }
  SUBCASE("zero payoff") {
    CHECK(inv_hessian_quadform(uniform_matrix({2, 3}), 0, 1, MatrixXd::Zero(3, 3)).value == 0.0);
  }
  SUBCASE("factored form equals the four-index sum") {
    Rng rng = make_rng(3, "qf");
    for (int c = 0; c < 40; ++c) {
      const ProblemDims d(2 + c % 3, 2 + c % 3);
      const auto m = random_feasible(d, rng);
      const int i = c % d.n_items, j = (c + 1) % d.n_items;
      const MatrixXd p = testing_support::random_block(d.n_labels, rng);
      const MatrixXd b = MatrixXd::Identity(d.side(), d.side()) + d.n_labels * m.entries;
      const MatrixXd x = b.block(i * d.n_labels, j * d.n_labels, d.n_labels, d.n_labels);
      const auto q = inv_hessian_quadform(m, i, j, p);
      CHECK(q.value == doctest::Approx(testing_support::quadform_by_summation(x, p, d.n_labels)).epsilon(1e-12));
      CHECK(q.block_sum == doctest::Approx(x.sum()).epsilon(1e-12));
    }
  }
  SUBCASE("diagonal pair adds the identity block") {
    const auto m = uniform_matrix({2, 2});
    const auto q = inv_hessian_quadform(m, 1, 1, MatrixXd::Ones(2, 2));
    CHECK(q.block_sum == doctest::Approx(4.0));
  }
}

TEST_CASE("gamma bound over the dims sweep") {
  Rng rng = make_rng(4, "gamma");
  double worst = 0.0;
  int checked = 0;
  for (int n : {2, 3, 4})
    for (int L : {2, 3, 5})
      for (int c = 0; c < 112; ++c) {
        const ProblemDims d(n, L);
        const auto m = random_feasible(d, rng);
        const int i = static_cast<int>(uniform_index(rng, n));
        const int j = (i + 1 + static_cast<int>(uniform_index(rng, n - 1))) % n;
        const auto q = inv_hessian_quadform(m, i, j, testing_support::random_block(L, rng));
        CHECK(std::abs(q.value) <= q.block_sum * q.block_sum / (L * L) + 1e-12);
        worst = std::max(worst, std::abs(q.value));
        ++checked;
      }
  CHECK(checked >= 1000);
  CHECK(worst <= 4.0);
  MESSAGE("max |quadform| = " << worst);
}

TEST_CASE("closed-form Hessian and its inverse") {
  SUBCASE("uniform matrices multiply to identity") {
    CHECK(hessian_inverse_identity_check(uniform_matrix({1, 2})).identity_deviation <= 1e-8);
    CHECK(hessian_inverse_identity_check(uniform_matrix({2, 2})).identity_deviation <= 1e-8);
  }
  SUBCASE("random feasible matrices, nL <= 8") {
    Rng rng = make_rng(5, "hess");
    for (const ProblemDims d : {ProblemDims(2, 2), ProblemDims(3, 2), ProblemDims(2, 4), ProblemDims(4, 2)}) {
      const auto h = hessian_inverse_identity_check(random_feasible(d, rng));
      CHECK(h.identity_deviation <= 1e-6);
      CHECK(h.fd_relative_error <= 1e-3);
    }
  }
  SUBCASE("nL > 8 is refused") {
    CHECK_THROWS(hessian_inverse_identity_check(uniform_matrix({3, 3})));
    CHECK_THROWS(dense_hessian(uniform_matrix({3, 3})));
  }
}

TEST_CASE("Hessian is negative semidefinite on symmetric directions") {
  Rng rng = make_rng(6, "concave");
  for (const ProblemDims d : {ProblemDims(2, 2), ProblemDims(2, 3), ProblemDims(4, 2)}) {
    const auto m = random_feasible(d, rng);
    const MatrixXd h = dense_hessian(m);
    const int N = d.side();
    MatrixXd basis = MatrixXd::Zero(N * N, N * (N + 1) / 2);
    int col = 0;
    for (int w = 0; w < N; ++w)
      for (int x = w; x < N; ++x, ++col) {
        basis(w * N + x, col) += 1.0;
        if (x != w) basis(x * N + w, col) += 1.0;
      }
    const MatrixXd restricted = basis.transpose() * h * basis;
    const double top = Eigen::SelfAdjointEigenSolver<MatrixXd>(0.5 * (restricted + restricted.transpose()))
                           .eigenvalues()
                           .maxCoeff();
    CHECK(top <= 1e-9 * restricted.norm());
  }
}
