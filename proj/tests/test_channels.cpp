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

#include "gioq/channels.hpp"
#include "support/generators.hpp"

using namespace gioq;
using Catch::Approx;

namespace {

double constraint_residual(const std::vector<LinearConstraint>& cons, const ComplexMatrix& x) {
    double worst = 0.0;
    for (const auto& c : cons) {
        cplx t{};
        for (int i = 0; i < x.dim; ++i)
            for (int j = 0; j < x.dim; ++j) t += c.a(i, j) * x(j, i);
        worst = std::max(worst, std::abs(t.real() - c.rhs));
    }
    return worst;
}

}  // namespace

TEST_CASE("apply_schur", "[channels]") {
    auto g = testing::rng(41);
    const DensityMatrix rho = testing::random_density(g, 3);

    SECTION("all-ones channel is the identity") {
        const SchurChannel id{ones_matrix(3)};
        REQUIRE(max_abs_diff(apply_schur(id, rho).mat, rho.mat) == 0.0);
    }
    SECTION("identity correlation matrix dephases") {
        const SchurChannel deph{identity_matrix(3)};
        REQUIRE(max_abs_diff(apply_schur(deph, rho).mat, dephase(rho).mat) == 0.0);
    }
    SECTION("diagonal preserved exactly for random channels") {
        for (int rep = 0; rep < 10; ++rep) {
            const SchurChannel ch = testing::random_schur_channel(g, 3);
            const DensityMatrix out = apply_schur(ch, rho);
            for (int i = 0; i < 3; ++i) REQUIRE(out.mat(i, i) == rho.mat(i, i));
        }
    }
    SECTION("diagonal states are fixed points") {
        const DensityMatrix diag = dephase(rho);
        for (int rep = 0; rep < 5; ++rep) {
            const SchurChannel ch = testing::random_schur_channel(g, 3);
            REQUIRE(max_abs_diff(apply_schur(ch, diag).mat, diag.mat) == 0.0);
        }
    }
    SECTION("dimension mismatch") {
        const SchurChannel id{ones_matrix(2)};
        REQUIRE_THROWS_AS(apply_schur(id, rho), std::invalid_argument);
    }
}

TEST_CASE("kraus_from_schur / schur_from_kraus", "[channels]") {
    auto g = testing::rng(43);

    SECTION("identity correlation matrix yields the basis projectors' channel") {
        const KrausSet ks = kraus_from_schur(SchurChannel{identity_matrix(3)});
        REQUIRE(ks.operators.size() == 3);
        // channel action agreement is the contract (the set is unique only
        // up to unitary mixing)
        const DensityMatrix rho = testing::random_density(g, 3);
        ComplexMatrix acc(3);
        for (const auto& k : ks.operators) {
            const ComplexMatrix term = matmul(matmul(k, rho.mat), adjoint(k));
            for (size_t t = 0; t < acc.entries.size(); ++t) acc.entries[t] += term.entries[t];
        }
        REQUIRE(max_abs_diff(acc, dephase(rho).mat) < 1e-10);
    }
    SECTION("all-ones correlation matrix is a single identity Kraus operator") {
        const KrausSet ks = kraus_from_schur(SchurChannel{ones_matrix(3)});
        REQUIRE(ks.operators.size() == 1);
        REQUIRE(max_abs_diff(ks.operators[0], identity_matrix(3)) < 1e-10);
    }
    SECTION("completeness and action agreement on random channels") {
        for (int rep = 0; rep < 10; ++rep) {
            const SchurChannel ch = testing::random_schur_channel(g, 3);
            const KrausSet ks = kraus_from_schur(ch);

            ComplexMatrix comp(3);
            for (const auto& k : ks.operators) {
                const ComplexMatrix t = matmul(adjoint(k), k);
                for (size_t u = 0; u < comp.entries.size(); ++u) comp.entries[u] += t.entries[u];
            }
            REQUIRE(max_abs_diff(comp, identity_matrix(3)) < 1e-9);

            for (int s = 0; s < 20; ++s) {
                const DensityMatrix rho = testing::random_density(g, 3);
                ComplexMatrix acc(3);
                for (const auto& k : ks.operators) {
                    const ComplexMatrix term = matmul(matmul(k, rho.mat), adjoint(k));
                    for (size_t u = 0; u < acc.entries.size(); ++u) acc.entries[u] += term.entries[u];
                }
                REQUIRE(max_abs_diff(acc, apply_schur(ch, rho).mat) < 1e-10);
            }
        }
    }
    SECTION("round trip recovers tau") {
        for (int rep = 0; rep < 10; ++rep) {
            const SchurChannel ch = testing::random_schur_channel(g, 3);
            const SchurChannel back = schur_from_kraus(kraus_from_schur(ch));
            REQUIRE(max_abs_diff(back.tau, ch.tau) < 1e-10);
        }
    }
    SECTION("named small sets") {
        KrausSet projectors;
        for (int i = 0; i < 3; ++i) {
            ComplexMatrix k(3);
            k(i, i) = 1.0;
            projectors.operators.push_back(std::move(k));
        }
        REQUIRE(max_abs_diff(schur_from_kraus(projectors).tau, identity_matrix(3)) < 1e-12);

        KrausSet identity_only;
        identity_only.operators.push_back(identity_matrix(3));
        REQUIRE(max_abs_diff(schur_from_kraus(identity_only).tau, ones_matrix(3)) < 1e-12);
    }
    SECTION("non-diagonal Kraus operator rejected") {
        KrausSet bad;
        ComplexMatrix k = identity_matrix(2);
        k(0, 1) = 0.5;
        bad.operators.push_back(std::move(k));
        REQUIRE_THROWS_AS(schur_from_kraus(bad), std::invalid_argument);
    }
}

TEST_CASE("compose_schur", "[channels]") {
    auto g = testing::rng(47);
    const SchurChannel a = testing::random_schur_channel(g, 3);
    const SchurChannel b = testing::random_schur_channel(g, 3);

    SECTION("all-ones is neutral, identity absorbs") {
        REQUIRE(max_abs_diff(compose_schur(a, SchurChannel{ones_matrix(3)}).tau, a.tau) == 0.0);
        REQUIRE(max_abs_diff(compose_schur(a, SchurChannel{identity_matrix(3)}).tau, identity_matrix(3)) == 0.0);
    }
    SECTION("action equals sequential application") {
        const SchurChannel ab = compose_schur(a, b);
        for (int s = 0; s < 20; ++s) {
            const DensityMatrix rho = testing::random_density(g, 3);
            REQUIRE(max_abs_diff(apply_schur(ab, rho).mat, apply_schur(a, apply_schur(b, rho)).mat) < 1e-12);
        }
    }
}

TEST_CASE("selective_apply", "[channels]") {
    auto g = testing::rng(53);
    const DensityMatrix rho = testing::random_density(g, 3);

    SECTION("identity channel: one branch, untouched state") {
        KrausSet ks;
        ks.operators.push_back(identity_matrix(3));
        const auto branches = selective_apply(ks, rho);
        REQUIRE(branches.size() == 1);
        REQUIRE(branches[0].first == Approx(1.0).margin(1e-12));
        REQUIRE(max_abs_diff(branches[0].second.mat, rho.mat) < 1e-12);
    }
    SECTION("projector set: branch probabilities are the diagonal") {
        KrausSet ks;
        for (int i = 0; i < 3; ++i) {
            ComplexMatrix k(3);
            k(i, i) = 1.0;
            ks.operators.push_back(std::move(k));
        }
        const auto branches = selective_apply(ks, rho);
        REQUIRE(branches.size() == 3);
        double total = 0.0;
        for (size_t i = 0; i < branches.size(); ++i) {
            const int idx = static_cast<int>(i);
            REQUIRE(branches[i].first == Approx(rho.mat(idx, idx).real()).margin(1e-12));
            REQUIRE(branches[i].second.mat(idx, idx).real() == Approx(1.0).margin(1e-12));
            total += branches[i].first;
        }
        REQUIRE(total == Approx(1.0).margin(1e-9));
    }
    SECTION("probabilities sum to one for random channels") {
        for (int rep = 0; rep < 10; ++rep) {
            const KrausSet ks = kraus_from_schur(testing::random_schur_channel(g, 3));
            const auto branches = selective_apply(ks, rho);
            double total = 0.0;
            for (const auto& [p, st] : branches) total += p;
            REQUIRE(total == Approx(1.0).margin(1e-9));
        }
    }
}

TEST_CASE("dephase", "[channels]") {
    auto g = testing::rng(59);
    const DensityMatrix rho = testing::random_density(g, 3);
    SECTION("idempotent, diagonal fixed") {
        const DensityMatrix d = dephase(rho);
        REQUIRE(max_abs_diff(dephase(d).mat, d.mat) == 0.0);
        for (int i = 0; i < 3; ++i) REQUIRE(d.mat(i, i).real() == Approx(rho.mat(i, i).real()).margin(1e-15));
    }
    SECTION("maximally coherent state dephases to the maximally mixed one") {
        const DensityMatrix out = dephase(maximally_coherent(3));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) REQUIRE(out.mat(i, j) == (i == j ? cplx(1.0 / 3.0, 0.0) : cplx{}));
    }
}

TEST_CASE("apply_choi", "[channels]") {
    auto g = testing::rng(61);
    const DensityMatrix rho = testing::random_density(g, 3);

    SECTION("identity channel Choi") {
        const ChoiMatrix id = choi_from_schur(SchurChannel{ones_matrix(3)});
        REQUIRE(max_abs_diff(apply_choi(id, rho).mat, rho.mat) < 1e-12);
    }
    SECTION("dephasing Choi") {
        const ChoiMatrix deph = choi_from_schur(SchurChannel{identity_matrix(3)});
        REQUIRE(max_abs_diff(apply_choi(deph, rho).mat, dephase(rho).mat) < 1e-12);
    }
    SECTION("cross-representation agreement on random channels") {
        for (int rep = 0; rep < 10; ++rep) {
            const SchurChannel ch = testing::random_schur_channel(g, 3);
            const ChoiMatrix J = choi_from_schur(ch);
            const DensityMatrix s = testing::random_density(g, 3);
            REQUIRE(max_abs_diff(apply_choi(J, s).mat, apply_schur(ch, s).mat) < 1e-10);
        }
    }
}

TEST_CASE("class_constraints", "[channels]") {
    SECTION("identity channel satisfies the GIO constraints") {
        const ChoiMatrix id = choi_from_schur(SchurChannel{ones_matrix(3)});
        REQUIRE(constraint_residual(class_constraints(ChannelClass::GIO, 3), id.mat) < 1e-12);
    }
    SECTION("every Schur channel satisfies GIO, DIO and MIO constraints") {
        auto g = testing::rng(67);
        for (int rep = 0; rep < 10; ++rep) {
            const int d = 2 + static_cast<int>(g() % 3);
            const ChoiMatrix J = choi_from_schur(testing::random_schur_channel(g, d));
            for (ChannelClass cls : {ChannelClass::GIO, ChannelClass::DIO, ChannelClass::MIO, ChannelClass::CPTP})
                REQUIRE(constraint_residual(class_constraints(cls, d), J.mat) < 1e-12);
        }
    }
    SECTION("validation accepts exactly the tagged class") {
        const SchurChannel deph{identity_matrix(2)};
        const ComplexMatrix J = choi_from_schur(deph).mat;
        for (ChannelClass cls : {ChannelClass::GIO, ChannelClass::DIO, ChannelClass::MIO, ChannelClass::CPTP})
            REQUIRE_NOTHROW(ChoiMatrix::from(2, J, cls));

        // the bit-flip classical channel swaps the basis states: CPTP and
        // MIO, but not genuinely incoherent
        ComplexMatrix K(4);
        K(0 * 2 + 1, 0 * 2 + 1) = 1.0;  // Phi(|0><0|) = |1><1|
        K(1 * 2 + 0, 1 * 2 + 0) = 1.0;  // Phi(|1><1|) = |0><0|
        REQUIRE_NOTHROW(ChoiMatrix::from(2, K, ChannelClass::MIO));
        REQUIRE_THROWS_AS(ChoiMatrix::from(2, K, ChannelClass::GIO), std::invalid_argument);
    }
}

TEST_CASE("maximally_coherent", "[channels]") {
    SECTION("d = 2") {
        const DensityMatrix p = maximally_coherent(2);
        for (const cplx& z : p.mat.entries) REQUIRE(z == cplx(0.5, 0.0));
    }
    SECTION("d = 3 entries, rank and trace") {
        const DensityMatrix p = maximally_coherent(3);
        for (const cplx& z : p.mat.entries) REQUIRE(std::abs(z - cplx(1.0 / 3.0, 0.0)) < 1e-15);
        REQUIRE(trace(p.mat).real() == Approx(1.0).margin(1e-12));
        const EigenDecomposition e = eig_hermitian(p.mat);
        REQUIRE(e.eigenvalues[2] == Approx(1.0).margin(1e-12));  // rank one
        REQUIRE(e.eigenvalues[1] == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("omega_materialize", "[channels]") {
    SECTION("single component with zero phases gives psi-plus") {
        OmegaElement w;
        w.weights = {1.0};
        w.phases = {{0.0, 0.0, 0.0}};
        REQUIRE(max_abs_diff(omega_materialize(w, 3), maximally_coherent(3).mat) < 1e-15);
    }
    SECTION("worked-example off-diagonals and diagonal") {
        const double theta = std::atan2(4.0, 3.0);
        OmegaElement w;
        w.weights = {1.0 / 3.0, 2.0 / 3.0};
        w.phases = {{0.0, theta, 0.0}, {0.0, 0.0, theta}};
        const ComplexMatrix M = omega_materialize(w, 3);
        REQUIRE(M(0, 1).real() == Approx(13.0 / 45.0).margin(1e-12));
        REQUIRE(M(0, 1).imag() == Approx(-4.0 / 45.0).margin(1e-12));
        REQUIRE(M(0, 2).real() == Approx(11.0 / 45.0).margin(1e-12));
        REQUIRE(M(0, 2).imag() == Approx(-8.0 / 45.0).margin(1e-12));
        REQUIRE(M(1, 2).real() == Approx(1.0 / 5.0).margin(1e-12));
        REQUIRE(M(1, 2).imag() == Approx(-4.0 / 45.0).margin(1e-12));
        // unit trace forces 1/3 on the diagonal
        for (int i = 0; i < 3; ++i) REQUIRE(std::abs(M(i, i) - cplx(1.0 / 3.0, 0.0)) < 1e-12);
    }
    SECTION("outputs are PSD with diagonal 1/d and bounded off-diagonals") {
        auto g = testing::rng(71);
        for (int rep = 0; rep < 15; ++rep) {
            const int d = 2 + static_cast<int>(g() % 3);
            const ComplexMatrix M = omega_materialize(testing::random_omega(g, d, 1 + static_cast<int>(g() % 4)), d);
            REQUIRE(min_eigenvalue(M) >= -1e-9);
            for (int i = 0; i < d; ++i) {
                REQUIRE(std::abs(M(i, i) - cplx(1.0 / d, 0.0)) < 1e-12);
                for (int j = 0; j < d; ++j) REQUIRE(std::abs(M(i, j)) <= 1.0 / d + 1e-12);
            }
        }
    }
    SECTION("bad weights rejected") {
        OmegaElement w;
        w.weights = {0.5, 0.4};
        w.phases = {{0, 0}, {0, 0}};
        REQUIRE_THROWS_AS(omega_materialize(w, 2), std::invalid_argument);
    }
}

TEST_CASE("rho_p family", "[channels]") {
    SECTION("endpoints") {
        const DensityMatrix mixed = rho_p(3, 0.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) REQUIRE(mixed.mat(i, j) == (i == j ? cplx(1.0 / 3.0, 0.0) : cplx{}));
        REQUIRE(max_abs_diff(rho_p(3, 1.0).mat, maximally_coherent(3).mat) < 1e-15);
    }
    SECTION("interior point") {
        const DensityMatrix r = rho_p(3, 0.5);
        REQUIRE(r.mat(0, 1).real() == Approx(1.0 / 6.0).margin(1e-15));
        REQUIRE(r.mat(0, 0).real() == Approx(1.0 / 3.0).margin(1e-15));
    }
    SECTION("out-of-range p rejected") {
        REQUIRE_THROWS_AS(rho_p(3, -0.1), std::invalid_argument);
        REQUIRE_THROWS_AS(rho_p(3, 1.1), std::invalid_argument);
    }
}

TEST_CASE("density validation", "[channels]") {
    SECTION("rejects trace violations") { REQUIRE_THROWS_AS(DensityMatrix::from(identity_matrix(2)), std::invalid_argument); }
    SECTION("rejects indefinite matrices") {
        ComplexMatrix m(2);
        m(0, 0) = 1.5;
        m(1, 1) = -0.5;
        REQUIRE_THROWS_AS(DensityMatrix::from(m), std::invalid_argument);
    }
    SECTION("keeps a clipped state normalized and PSD") {
        ComplexMatrix m(2);
        m(0, 0) = 0.5;
        m(1, 1) = 0.5;
        m(0, 1) = 0.5 + 4e-10;  // pushes one eigenvalue just below zero
        m(1, 0) = 0.5 + 4e-10;
        const DensityMatrix r = DensityMatrix::from(m);
        REQUIRE(trace(r.mat).real() == Approx(1.0).margin(1e-12));
        REQUIRE(min_eigenvalue(r.mat) >= -1e-12);
    }
}
