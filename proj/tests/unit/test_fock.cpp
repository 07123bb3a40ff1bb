#include <doctest.h>

#include <cmath>
#include <random>

#include "jmott/fock.hpp"

using namespace jmott;

namespace {

BasisPtr make(int sites, int n_max, std::optional<int> sector = std::nullopt, std::optional<int> cap = std::nullopt)
{
    return std::make_shared<const FockBasis>(FockBasis::enumerate(sites, n_max, sector, cap));
}

// Independent enumeration: digits of k in base n_max + 1, site 0 most significant.
std::vector<std::vector<int>> brute_states(int sites, int n_max, std::optional<int> sector = std::nullopt)
{
    std::vector<std::vector<int>> out;
    const int base = n_max + 1;
    const int total = static_cast<int>(std::pow(base, sites));
    for (int k = 0; k < total; ++k) {
        std::vector<int> occ(sites);
        int rest = k, sum = 0;
        for (int s = sites - 1; s >= 0; --s) {
            occ[s] = rest % base;
            rest /= base;
            sum += occ[s];
        }
        if (!sector || sum == *sector) out.push_back(occ);
    }
    return out;
}

CMatrix brute_annihilation(const std::vector<std::vector<int>>& states, int site)
{
    const auto n = static_cast<Eigen::Index>(states.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) {
            auto lowered = states[c];
            if (lowered[site] == 0) continue;
            lowered[site] -= 1;
            if (lowered == states[r]) m(r, c) = std::sqrt(static_cast<double>(states[c][site]));
        }
    return m;
}

CMatrix brute_number(const std::vector<std::vector<int>>& states, int site)
{
    const auto n = static_cast<Eigen::Index>(states.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) m(k, k) = states[k][site];
    return m;
}

// a_to^+ a_from by direct action on occupation vectors, with the n_max cut.
CMatrix brute_hopping(const std::vector<std::vector<int>>& states, int to, int from, int n_max)
{
    const auto n = static_cast<Eigen::Index>(states.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        auto occ = states[c];
        if (occ[from] == 0) continue;
        occ[from] -= 1;
        if (occ[to] == n_max) continue;
        // <m| a_to^+ a_from |n> = sqrt(n_from (n_to + 1)), rounded once.
        const double amp = std::sqrt(static_cast<double>(states[c][from] * (occ[to] + 1)));
        occ[to] += 1;
        for (Eigen::Index r = 0; r < n; ++r)
            if (states[r] == occ) m(r, c) += amp;
    }
    return m;
}

}  // namespace

TEST_CASE("basis enumeration examples")
{
    auto b = make(1, 2);
    CHECK(b->dim() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(b->occupation(k, 0) == static_cast<int>(k));

    b = make(2, 2, 2);
    REQUIRE(b->dim() == 3);
    CHECK(b->occupation(0, 0) == 0);
    CHECK(b->occupation(0, 1) == 2);
    CHECK(b->occupation(1, 0) == 1);
    CHECK(b->occupation(2, 0) == 2);

    CHECK(make(4, 4)->dim() == 625);
    CHECK_THROWS(FockBasis::enumerate(2, 2, 5));
    CHECK_THROWS(FockBasis::enumerate(2, 2, -1));
    CHECK_THROWS(FockBasis::enumerate(0, 2));
    CHECK_THROWS(FockBasis::enumerate(2, 0));
}

TEST_CASE("basis is ordered and the index inverts it")
{
    for (int sites = 1; sites <= 4; ++sites)
        for (int n_max = 1; n_max <= 3; ++n_max)
            for (std::optional<int> sector : {std::optional<int>{}, std::optional<int>{sites}}) {
                const auto b = make(sites, n_max, sector);
                const auto brute = brute_states(sites, n_max, sector);
                REQUIRE(b->dim() == brute.size());
                for (std::size_t k = 0; k < b->dim(); ++k) {
                    const auto s = b->state(k);
                    CHECK(std::vector<int>(s.begin(), s.end()) == brute[k]);
                    CHECK(b->find(s) == k);
                }
            }
}

TEST_CASE("total cap keeps only states at or below the cap")
{
    const auto b = make(3, 2, std::nullopt, 2);
    std::size_t expected = 0;
    for (const auto& s : brute_states(3, 2))
        if (s[0] + s[1] + s[2] <= 2) ++expected;
    CHECK(b->dim() == expected);
    for (std::size_t k = 0; k < b->dim(); ++k) CHECK(b->total(k) <= 2);
}

TEST_CASE("single-mode ladder")
{
    const auto b = make(1, 2);
    const auto a = annihilation(*b, 0);
    const auto ad = creation(*b, 0);
    CHECK(a.coeff(1, 2) == cplx(std::sqrt(2.0)));
    CHECK(a.coeff(0, 1) == cplx(1.0));
    CHECK(a.dense().col(0).norm() == 0.0);

    const auto n = (ad * a).dense();
    CMatrix diag = CMatrix::Zero(3, 3);
    diag.diagonal() << 0, 1, 2;
    CHECK((n - diag).norm() < 1e-14);
    CHECK((adjoint(a) * a).dense() == n);
    CHECK((number(*b, 0).dense() - diag).norm() == 0.0);
    // The creation operator from the top level is truncated.
    CHECK(ad.dense().col(2).norm() == 0.0);
}

TEST_CASE("compose algebra")
{
    const auto b = make(2, 2);
    const auto x = hopping(*b, 0, 1) + cplx(0.0, 0.3) * annihilation(*b, 1);
    CHECK(adjoint(adjoint(x)).dense() == x.dense());
    CHECK(compose(x, x, ComposeOp::scale, 0.0).nonzeros() == 0);
    CHECK((x - x).nonzeros() == 0);
    CHECK_THROWS_AS(compose(x, SparseOperator::identity(3), ComposeOp::add), DimensionError);
    CHECK_THROWS_AS(x * SparseOperator::identity(3), DimensionError);

    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    const auto y = creation(*b, 0) * annihilation(*b, 1) + number(*b, 1);
    for (int trial = 0; trial < 5; ++trial) {
        CVector v(b->dim());
        for (auto& c : v) c = cplx(nd(rng), nd(rng));
        const CVector lhs = jmott::apply(x * y, v);
        const CVector rhs = jmott::apply(x, jmott::apply(y, v));
        CHECK((lhs - rhs).norm() < 1e-12);
    }
}

TEST_CASE("apply and expectation examples")
{
    const auto b = make(1, 2);
    QuantumState two = QuantumState::basis_state(b, 2);
    CHECK(jmott::apply(SparseOperator::identity(3), two) == two.amplitudes());
    CHECK(jmott::apply(number(*b, 0), two) == CVector(2.0 * two.amplitudes()));

    CVector v(3);
    v << 0, 1, 1;
    const QuantumState s(b, v);
    const CVector av = jmott::apply(annihilation(*b, 0), s);
    CHECK(std::abs(av[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(av[1] - 1.0) < 1e-15);
    CHECK(std::abs(av[2]) == 0.0);

    CHECK(expectation(number(*b, 0), QuantumState::basis_state(b, 1)) == cplx(1.0));
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(expectation(annihilation(*b, 0), QuantumState::basis_state(b, k)) == cplx(0.0));

    const cplx c0(0.6, 0.0), c1(0.0, 0.8);
    CVector w(3);
    w << c0, c1, 0;
    CHECK(std::abs(expectation(annihilation(*b, 0), QuantumState(b, w)) - std::conj(c0) * c1) < 1e-15);

    CHECK_THROWS_AS(jmott::apply(number(*make(2, 2), 0), s), DimensionError);
}

TEST_CASE("state normalisation")
{
    const auto b = make(1, 2);
    CVector v(3);
    v << 1, 1, 1;
    CHECK(std::abs(QuantumState(b, v).norm() - 1.0) < 1e-15);
    CHECK_THROWS_AS(QuantumState(b, v, Normalization::verify), NumericalError);
    CHECK_THROWS(QuantumState(b, CVector::Zero(3)));
    CHECK_THROWS(QuantumState(b, CVector::Ones(2)));
}

TEST_CASE("truncation identity a a^+ = n + 1 below the cap")
{
    for (int sites = 1; sites <= 3; ++sites)
        for (int n_max = 1; n_max <= 3; ++n_max) {
            const auto b = make(sites, n_max);
            if (b->dim() > 100) continue;
            for (int i = 0; i < sites; ++i) {
                const CMatrix lhs = (annihilation(*b, i) * creation(*b, i)).dense();
                CMatrix expected = CMatrix::Zero(b->dim(), b->dim());
                for (std::size_t k = 0; k < b->dim(); ++k)
                    if (b->occupation(k, i) < n_max) expected(k, k) = b->occupation(k, i) + 1.0;
                CHECK((lhs - expected).norm() < 1e-14);
            }
        }
}

TEST_CASE("sector number operator is N times identity")
{
    for (int n = 0; n <= 6; ++n) {
        const auto b = make(3, 2, n);
        const CMatrix m = total_number(*b).dense();
        CHECK((m - CMatrix::Identity(b->dim(), b->dim()) * double(n)).norm() == 0.0);
    }
}

TEST_CASE("sector annihilation is a rectangular map between sectors")
{
    const auto from = make(2, 2, 2);
    const auto to = make(2, 2, 1);
    const auto a = annihilation(*from, *to, 0);
    CHECK(a.rows() == to->dim());
    CHECK(a.cols() == from->dim());
    // Compare against the full-basis operator restricted to the sectors.
    const auto full = make(2, 2);
    const auto af = annihilation(*full, 0);
    for (std::size_t c = 0; c < from->dim(); ++c)
        for (std::size_t r = 0; r < to->dim(); ++r)
            CHECK(a.coeff(r, c) == af.coeff(*full->find(to->state(r)), *full->find(from->state(c))));
    CHECK_THROWS(annihilation(*from, 0));
}

TEST_CASE("operators equal dense brute-force constructions exactly")
{
    for (int sites = 1; sites <= 2; ++sites)
        for (int n_max = 1; n_max <= 2; ++n_max) {
            const auto b = make(sites, n_max);
            const auto states = brute_states(sites, n_max);
            for (int i = 0; i < sites; ++i) {
                const CMatrix a = brute_annihilation(states, i);
                CHECK(annihilation(*b, i).dense() == a);
                CHECK(creation(*b, i).dense() == CMatrix(a.adjoint()));
                CHECK(number(*b, i).dense() == brute_number(states, i));
                for (int j = 0; j < sites; ++j)
                    if (i != j) CHECK(hopping(*b, i, j).dense() == brute_hopping(states, i, j, n_max));
            }
            for (int n = 0; n <= sites * n_max; ++n) {
                const auto bs = make(sites, n_max, n);
                const auto ss = brute_states(sites, n_max, n);
                for (int i = 0; i < sites; ++i) {
                    CHECK(number(*bs, i).dense() == brute_number(ss, i));
                    for (int j = 0; j < sites; ++j)
                        if (i != j) CHECK(hopping(*bs, i, j).dense() == brute_hopping(ss, i, j, n_max));
                }
            }
        }
}
