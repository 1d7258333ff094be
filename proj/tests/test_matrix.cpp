// Copyright 2026 The gioq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "gioq/matrix.hpp"
#include "support/generators.hpp"

using namespace gioq;
using Catch::Approx;

namespace {

ComplexMatrix random_hermitian(std::mt19937_64& g, int d) {
    return symmetrize(testing::random_ginibre(g, d));
}

}  // namespace

TEST_CASE("schur_product basics", "[matrix]") {
    auto g = testing::rng(11);
    const DensityMatrix rho = testing::random_density(g, 3);

    SECTION("all-ones matrix is the identity element") {
        REQUIRE(max_abs_diff(schur_product(ones_matrix(3), rho.mat), rho.mat) == 0.0);
    }
    SECTION("identity matrix dephases") {
        const ComplexMatrix out = schur_product(identity_matrix(3), rho.mat);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j)
                    REQUIRE(out(i, j) == rho.mat(i, j));
                else
                    REQUIRE(out(i, j) == cplx{});
            }
    }
    SECTION("dimension mismatch throws") {
        REQUIRE_THROWS_AS(schur_product(ones_matrix(2), rho.mat), std::invalid_argument);
    }
    SECTION("tau0 formula maps the matched pure state to rho entrywise") {
        // tau0_ij = rho_ij / sqrt(rho_ii rho_jj) applied to |psi><psi| with
        // psi_i = sqrt(rho_ii) must reproduce rho exactly.
        ComplexMatrix tau0(3), proj(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double pi = rho.mat(i, i).real();
                const double pj = rho.mat(j, j).real();
                tau0(i, j) = rho.mat(i, j) / std::sqrt(pi * pj);
                proj(i, j) = std::sqrt(pi) * std::sqrt(pj);
            }
        REQUIRE(max_abs_diff(schur_product(tau0, proj), rho.mat) < 1e-12);
    }
}

TEST_CASE("eig_hermitian known spectra", "[matrix]") {
    SECTION("identity") {
        const EigenDecomposition e = eig_hermitian(identity_matrix(3));
        for (double l : e.eigenvalues) REQUIRE(l == Approx(1.0).margin(1e-12));
    }
    SECTION("pauli x") {
        ComplexMatrix m(2);
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        const EigenDecomposition e = eig_hermitian(m);
        REQUIRE(e.eigenvalues[0] == Approx(-1.0).margin(1e-12));
        REQUIRE(e.eigenvalues[1] == Approx(1.0).margin(1e-12));
    }
    SECTION("known 2x2 with negative eigenvalue") {
        ComplexMatrix m(2);
        m(0, 0) = 1.0;
        m(1, 1) = 1.0;
        m(0, 1) = 2.0;
        m(1, 0) = 2.0;
        REQUIRE(min_eigenvalue(m) == Approx(-1.0).margin(1e-12));
    }
    SECTION("rank-one projector") {
        const ComplexMatrix psi = testing::pure_density(std::vector<cplx>{
                                      cplx(1 / std::sqrt(3.0), 0), cplx(1 / std::sqrt(3.0), 0),
                                      cplx(1 / std::sqrt(3.0), 0)})
                                      .mat;
        REQUIRE(min_eigenvalue(psi) == Approx(0.0).margin(1e-12));
    }
    SECTION("non-Hermitian input rejected") {
        ComplexMatrix m(2);
        m(0, 1) = 1.0;
        REQUIRE_THROWS_AS(eig_hermitian(m), std::invalid_argument);
    }
}

TEST_CASE("eig_hermitian reconstruction and orthonormality", "[matrix]") {
    auto g = testing::rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + static_cast<int>(g() % 5);  // up to 6, includes the d=5 case
        const ComplexMatrix a = random_hermitian(g, d);
        const EigenDecomposition e = eig_hermitian(a);

        REQUIRE(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));

        // V diag(lambda) V^dag == a
        ComplexMatrix rec(d);
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    rec(i, j) += e.eigenvalues[k] * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
        REQUIRE(max_abs_diff(rec, a) < 1e-10 * std::max(1.0, frobenius_norm(a)));

        // V^dag V == I
        const ComplexMatrix vhv = matmul(adjoint(e.eigenvectors), e.eigenvectors);
        REQUIRE(max_abs_diff(vhv, identity_matrix(d)) < 1e-10);

        // eigenvalue sum equals trace
        double sum = 0.0;
        for (double l : e.eigenvalues) sum += l;
        REQUIRE(sum == Approx(trace(a).real()).margin(1e-9));
    }
}

TEST_CASE("schur product of PSD matrices is PSD", "[matrix]") {
    auto g = testing::rng(37);
    for (int rep = 0; rep < 25; ++rep) {
        const int d = 2 + static_cast<int>(g() % 3);
        const ComplexMatrix a = testing::random_ginibre(g, d);
        const ComplexMatrix b = testing::random_ginibre(g, d);
        const ComplexMatrix pa = matmul(a, adjoint(a));
        const ComplexMatrix pb = matmul(b, adjoint(b));
        REQUIRE(min_eigenvalue(symmetrize(schur_product(pa, pb))) >= -1e-9);
    }
}

TEST_CASE("conj_entrywise", "[matrix]") {
    SECTION("real matrix unchanged") {
        ComplexMatrix m(2);
        m(0, 0) = 1.0;
        m(0, 1) = 0.25;
        m(1, 0) = 0.25;
        m(1, 1) = 1.0;
        REQUIRE(max_abs_diff(conj_entrywise(m), m) == 0.0);
    }
    SECTION("pauli y flips sign") {
        ComplexMatrix m(2);
        m(0, 1) = cplx(0, 1);
        m(1, 0) = cplx(0, -1);
        const ComplexMatrix c = conj_entrywise(m);
        REQUIRE(c(0, 1) == cplx(0, -1));
        REQUIRE(c(1, 0) == cplx(0, 1));
    }
    SECTION("worked-example entry conjugates to 13/45 + (4/45)i") {
        const double theta = std::atan2(4.0, 3.0);
        OmegaElement w;
        w.weights = {1.0 / 3.0, 2.0 / 3.0};
        w.phases = {{0.0, theta, 0.0}, {0.0, 0.0, theta}};
        const ComplexMatrix M = omega_materialize(w, 3);
        const ComplexMatrix Mc = conj_entrywise(M);
        REQUIRE(Mc(0, 1).real() == Approx(13.0 / 45.0).margin(1e-12));
        REQUIRE(Mc(0, 1).imag() == Approx(4.0 / 45.0).margin(1e-12));
    }
    SECTION("involution on random input") {
        auto g = testing::rng(5);
        const ComplexMatrix m = testing::random_ginibre(g, 4);
        REQUIRE(max_abs_diff(conj_entrywise(conj_entrywise(m)), m) == 0.0);
    }
}

TEST_CASE("non-finite entries rejected", "[matrix]") {
    ComplexMatrix m = identity_matrix(2);
    m(0, 0) = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    REQUIRE_FALSE(m.all_finite());
    REQUIRE_THROWS_AS(eig_hermitian(m), std::invalid_argument);
}
