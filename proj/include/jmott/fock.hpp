#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "jmott/types.hpp"

namespace jmott {

/// Truncated occupation-number basis over `site_count` bosonic modes.
///
/// States are stored in lexicographic order (site 0 most significant). An
/// optional sector fixes the total particle number; an optional total cap
/// bounds it from above without fixing it.
class FockBasis {
public:
    static FockBasis enumerate(int site_count, int n_max, std::optional<int> sector = std::nullopt,
                               std::optional<int> total_cap = std::nullopt);

    int site_count() const { return site_count_; }
    int n_max() const { return n_max_; }
    std::optional<int> sector() const { return sector_; }
    std::optional<int> total_cap() const { return total_cap_; }
    std::size_t dim() const { return count_; }

    std::span<const std::uint8_t> state(std::size_t k) const
    {
        return {occupations_.data() + k * site_count_, static_cast<std::size_t>(site_count_)};
    }
    int occupation(std::size_t k, int site) const { return occupations_[k * site_count_ + site]; }
    int total(std::size_t k) const;

    std::optional<std::size_t> find(std::span<const std::uint8_t> occ) const;

    bool operator==(const FockBasis& other) const
    {
        return site_count_ == other.site_count_ && n_max_ == other.n_max_ && sector_ == other.sector_ &&
               total_cap_ == other.total_cap_;
    }

private:
    FockBasis() = default;
    std::uint64_t key(std::span<const std::uint8_t> occ) const;

    int site_count_ = 0;
    int n_max_ = 0;
    std::optional<int> sector_;
    std::optional<int> total_cap_;
    std::size_t count_ = 0;
    std::vector<std::uint8_t> occupations_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

/// Complex sparse matrix, possibly rectangular (sector-changing maps).
class SparseOperator {
public:
    using Storage = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

    SparseOperator() = default;
    SparseOperator(std::size_t rows, std::size_t cols);
    explicit SparseOperator(Storage m) : m_(std::move(m)) { m_.makeCompressed(); }

    static SparseOperator identity(std::size_t dim);
    static SparseOperator from_triplets(std::size_t rows, std::size_t cols,
                                        const std::vector<Eigen::Triplet<cplx>>& entries);

    std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
    std::size_t dim() const { return rows(); }
    bool square() const { return rows() == cols(); }
    std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }

    const Storage& matrix() const { return m_; }
    CMatrix dense() const { return CMatrix(m_); }
    cplx coeff(std::size_t r, std::size_t c) const { return m_.coeff(r, c); }

    /// Largest |H - H^dagger| entry; requires a square operator.
    double hermiticity_residual() const;

private:
    Storage m_;
};

enum class ComposeOp { add, sub, mul, scale, adjoint };

/// Sparse algebra. For `scale` the factor is taken from `factor` and `rhs` is
/// ignored; for `adjoint` only `lhs` is used.
SparseOperator compose(const SparseOperator& lhs, const SparseOperator& rhs, ComposeOp op, cplx factor = 1.0);

SparseOperator adjoint(const SparseOperator& x);
SparseOperator operator+(const SparseOperator& lhs, const SparseOperator& rhs);
SparseOperator operator-(const SparseOperator& lhs, const SparseOperator& rhs);
SparseOperator operator*(const SparseOperator& lhs, const SparseOperator& rhs);
SparseOperator operator*(cplx factor, const SparseOperator& x);

enum class Normalization {
    rescale,  ///< divide by the norm
    verify,   ///< keep amplitudes as given; throw NumericalError if |norm - 1| > 1e-10
};

/// Normalised state over a basis.
class QuantumState {
public:
    QuantumState(BasisPtr basis, CVector amplitudes, Normalization mode = Normalization::rescale);

    static QuantumState basis_state(BasisPtr basis, std::size_t k);

    const FockBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    const CVector& amplitudes() const { return amplitudes_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    double norm() const { return amplitudes_.norm(); }

private:
    BasisPtr basis_;
    CVector amplitudes_;
};

/// a_site on a square (unrestricted or capped) basis.
SparseOperator annihilation(const FockBasis& basis, int site);
/// a_site as a map from `from` (sector N) into `to` (sector N-1).
SparseOperator annihilation(const FockBasis& from, const FockBasis& to, int site);
SparseOperator creation(const FockBasis& basis, int site);
SparseOperator number(const FockBasis& basis, int site);
/// a_i^dagger a_j within one basis; works for sector-restricted bases.
SparseOperator hopping(const FockBasis& basis, int to_site, int from_site);
/// sum_i (1/2) n_i (n_i - 1) over the given sites.
SparseOperator pair_interaction(const FockBasis& basis, std::span<const int> sites);
SparseOperator total_number(const FockBasis& basis, std::span<const int> sites);
SparseOperator total_number(const FockBasis& basis);

CVector apply(const SparseOperator& op, const CVector& v);
CVector apply(const SparseOperator& op, const QuantumState& s);
cplx expectation(const SparseOperator& op, const QuantumState& s);
cplx expectation(const SparseOperator& op, const CVector& v);

}  // namespace jmott
