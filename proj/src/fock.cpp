#include "jmott/fock.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace jmott {

FockBasis FockBasis::enumerate(int site_count, int n_max, std::optional<int> sector, std::optional<int> total_cap)
{
    if (site_count < 1) throw std::invalid_argument("site_count must be >= 1");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (n_max > 255) throw std::invalid_argument("n_max must fit in 8 bits");
    if (sector && (*sector < 0 || *sector > n_max * site_count))
        throw std::invalid_argument("sector out of range [0, n_max * site_count]");
    if (total_cap && *total_cap < 0) throw std::invalid_argument("total cap must be >= 0");

    double span = std::pow(static_cast<double>(n_max + 1), site_count);
    if (span > static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2))
        throw std::invalid_argument("basis too wide for packed occupation keys");

    FockBasis b;
    b.site_count_ = site_count;
    b.n_max_ = n_max;
    b.sector_ = sector;
    b.total_cap_ = total_cap;

    const int limit = sector ? *sector : (total_cap ? *total_cap : n_max * site_count);
    std::vector<std::uint8_t> occ(site_count, 0);

    // Depth-first in lexicographic order, pruning on the remaining budget.
    auto recurse = [&](auto&& self, int site, int used) -> void {
        const int remaining_sites = site_count - site;
        if (remaining_sites == 0) {
            if (sector && used != *sector) return;
            b.occupations_.insert(b.occupations_.end(), occ.begin(), occ.end());
            ++b.count_;
            return;
        }
        for (int n = 0; n <= n_max && used + n <= limit; ++n) {
            if (sector && *sector - used - n > (remaining_sites - 1) * n_max) continue;
            occ[site] = static_cast<std::uint8_t>(n);
            self(self, site + 1, used + n);
        }
        occ[site] = 0;
    };
    recurse(recurse, 0, 0);

    b.index_.reserve(b.count_);
    for (std::size_t k = 0; k < b.count_; ++k) b.index_.emplace(b.key(b.state(k)), k);
    return b;
}

int FockBasis::total(std::size_t k) const
{
    auto s = state(k);
    return std::accumulate(s.begin(), s.end(), 0);
}

std::uint64_t FockBasis::key(std::span<const std::uint8_t> occ) const
{
    std::uint64_t k = 0;
    for (auto n : occ) k = k * static_cast<std::uint64_t>(n_max_ + 1) + n;
    return k;
}

std::optional<std::size_t> FockBasis::find(std::span<const std::uint8_t> occ) const
{
    if (static_cast<int>(occ.size()) != site_count_) return std::nullopt;
    int sum = 0;
    for (auto n : occ) {
        if (n > n_max_) return std::nullopt;
        sum += n;
    }
    if (sector_ && sum != *sector_) return std::nullopt;
    if (total_cap_ && sum > *total_cap_) return std::nullopt;
    auto it = index_.find(key(occ));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------

SparseOperator::SparseOperator(std::size_t rows, std::size_t cols) : m_(rows, cols) { m_.makeCompressed(); }

SparseOperator SparseOperator::identity(std::size_t dim)
{
    Storage m(dim, dim);
    m.setIdentity();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::from_triplets(std::size_t rows, std::size_t cols,
                                             const std::vector<Eigen::Triplet<cplx>>& entries)
{
    Storage m(rows, cols);
    m.setFromTriplets(entries.begin(), entries.end());
    m.prune(cplx(0.0));
    return SparseOperator(std::move(m));
}

double SparseOperator::hermiticity_residual() const
{
    if (!square()) throw DimensionError("hermiticity residual needs a square operator");
    Storage diff = m_ - Storage(m_.adjoint());
    double worst = 0.0;
    for (int r = 0; r < diff.outerSize(); ++r)
        for (Storage::InnerIterator it(diff, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

SparseOperator compose(const SparseOperator& lhs, const SparseOperator& rhs, ComposeOp op, cplx factor)
{
    switch (op) {
    case ComposeOp::add:
    case ComposeOp::sub: {
        if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
            throw DimensionError("operator shapes differ");
        SparseOperator::Storage m =
            op == ComposeOp::add ? SparseOperator::Storage(lhs.matrix() + rhs.matrix())
                                 : SparseOperator::Storage(lhs.matrix() - rhs.matrix());
        m.prune(cplx(0.0));
        return SparseOperator(std::move(m));
    }
    case ComposeOp::mul: {
        if (lhs.cols() != rhs.rows()) throw DimensionError("inner dimensions differ");
        SparseOperator::Storage m = lhs.matrix() * rhs.matrix();
        m.prune(cplx(0.0));
        return SparseOperator(std::move(m));
    }
    case ComposeOp::scale: {
        SparseOperator::Storage m = factor * lhs.matrix();
        m.prune(cplx(0.0));
        return SparseOperator(std::move(m));
    }
    case ComposeOp::adjoint:
        return SparseOperator(SparseOperator::Storage(lhs.matrix().adjoint()));
    }
    throw std::invalid_argument("unknown compose op");
}

SparseOperator adjoint(const SparseOperator& x) { return compose(x, x, ComposeOp::adjoint); }
SparseOperator operator+(const SparseOperator& l, const SparseOperator& r) { return compose(l, r, ComposeOp::add); }
SparseOperator operator-(const SparseOperator& l, const SparseOperator& r) { return compose(l, r, ComposeOp::sub); }
SparseOperator operator*(const SparseOperator& l, const SparseOperator& r) { return compose(l, r, ComposeOp::mul); }
SparseOperator operator*(cplx f, const SparseOperator& x) { return compose(x, x, ComposeOp::scale, f); }

// ---------------------------------------------------------------------------

QuantumState::QuantumState(BasisPtr basis, CVector amplitudes, Normalization mode)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes))
{
    if (!basis_) throw std::invalid_argument("state needs a basis");
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dim())
        throw DimensionError("amplitude vector does not match basis dimension");
    const double n = amplitudes_.norm();
    if (mode == Normalization::verify) {
        if (!(std::abs(n - 1.0) <= 1e-10)) throw NumericalError("state norm drifted to " + std::to_string(n));
        return;
    }
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalise a zero or non-finite state");
    amplitudes_ /= n;
}

QuantumState QuantumState::basis_state(BasisPtr basis, std::size_t k)
{
    CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dim()));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return QuantumState(std::move(basis), std::move(v));
}

namespace {

void check_site(const FockBasis& b, int site)
{
    if (site < 0 || site >= b.site_count()) throw std::out_of_range("invalid site " + std::to_string(site));
}

}  // namespace

SparseOperator annihilation(const FockBasis& basis, int site)
{
    if (basis.sector()) throw DimensionError("sector basis: use the two-basis annihilation overload");
    return annihilation(basis, basis, site);
}

SparseOperator annihilation(const FockBasis& from, const FockBasis& to, int site)
{
    check_site(from, site);
    if (from.site_count() != to.site_count()) throw DimensionError("bases have different site counts");
    std::vector<Eigen::Triplet<cplx>> entries;
    std::vector<std::uint8_t> occ(from.site_count());
    for (std::size_t col = 0; col < from.dim(); ++col) {
        auto s = from.state(col);
        const int n = s[site];
        if (n == 0) continue;
        std::copy(s.begin(), s.end(), occ.begin());
        occ[site] = static_cast<std::uint8_t>(n - 1);
        if (auto row = to.find(occ)) entries.emplace_back(*row, col, std::sqrt(static_cast<double>(n)));
    }
    return SparseOperator::from_triplets(to.dim(), from.dim(), entries);
}

SparseOperator creation(const FockBasis& basis, int site) { return adjoint(annihilation(basis, site)); }

SparseOperator number(const FockBasis& basis, int site)
{
    check_site(basis, site);
    std::vector<Eigen::Triplet<cplx>> entries;
    for (std::size_t k = 0; k < basis.dim(); ++k)
        if (int n = basis.occupation(k, site)) entries.emplace_back(k, k, static_cast<double>(n));
    return SparseOperator::from_triplets(basis.dim(), basis.dim(), entries);
}

SparseOperator hopping(const FockBasis& basis, int to_site, int from_site)
{
    check_site(basis, to_site);
    check_site(basis, from_site);
    if (to_site == from_site) return number(basis, to_site);
    std::vector<Eigen::Triplet<cplx>> entries;
    std::vector<std::uint8_t> occ(basis.site_count());
    for (std::size_t col = 0; col < basis.dim(); ++col) {
        auto s = basis.state(col);
        const int nf = s[from_site];
        const int nt = s[to_site];
        if (nf == 0 || nt == basis.n_max()) continue;
        std::copy(s.begin(), s.end(), occ.begin());
        occ[from_site] = static_cast<std::uint8_t>(nf - 1);
        occ[to_site] = static_cast<std::uint8_t>(nt + 1);
        if (auto row = basis.find(occ))
            entries.emplace_back(*row, col, std::sqrt(static_cast<double>(nf) * static_cast<double>(nt + 1)));
    }
    return SparseOperator::from_triplets(basis.dim(), basis.dim(), entries);
}

SparseOperator pair_interaction(const FockBasis& basis, std::span<const int> sites)
{
    for (int s : sites) check_site(basis, s);
    std::vector<Eigen::Triplet<cplx>> entries;
    for (std::size_t k = 0; k < basis.dim(); ++k) {
        double e = 0.0;
        for (int s : sites) {
            const double n = basis.occupation(k, s);
            e += 0.5 * n * (n - 1.0);
        }
        if (e != 0.0) entries.emplace_back(k, k, e);
    }
    return SparseOperator::from_triplets(basis.dim(), basis.dim(), entries);
}

SparseOperator total_number(const FockBasis& basis, std::span<const int> sites)
{
    for (int s : sites) check_site(basis, s);
    std::vector<Eigen::Triplet<cplx>> entries;
    for (std::size_t k = 0; k < basis.dim(); ++k) {
        int n = 0;
        for (int s : sites) n += basis.occupation(k, s);
        if (n) entries.emplace_back(k, k, static_cast<double>(n));
    }
    return SparseOperator::from_triplets(basis.dim(), basis.dim(), entries);
}

SparseOperator total_number(const FockBasis& basis)
{
    std::vector<int> all(basis.site_count());
    std::iota(all.begin(), all.end(), 0);
    return total_number(basis, all);
}

CVector apply(const SparseOperator& op, const CVector& v)
{
    if (op.cols() != static_cast<std::size_t>(v.size())) throw DimensionError("operator/vector dimension mismatch");
    return op.matrix() * v;
}

CVector apply(const SparseOperator& op, const QuantumState& s) { return apply(op, s.amplitudes()); }

cplx expectation(const SparseOperator& op, const CVector& v)
{
    if (!op.square() || op.cols() != static_cast<std::size_t>(v.size()))
        throw DimensionError("expectation needs a square operator matching the state");
    return v.dot(op.matrix() * v);
}

cplx expectation(const SparseOperator& op, const QuantumState& s) { return expectation(op, s.amplitudes()); }

}  // namespace jmott
