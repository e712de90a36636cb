// Exact integer lattice layer: Hermite/Smith style reductions, pointed
// rational cones with facet descriptions, sublattice normalization, and
// bounded lattice-point enumeration.

#pragma once

#include "frobken/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace frobken {

/// Degree window: facet pairings are confined to [b_i, b_i + size].
struct BoxBound {
    int size = 8;
};

/// Fraction-free (Bareiss) determinant of a square integer matrix.
Int determinant(const IMat& A);

/// Rank over Q of an integer matrix.
int rank(const IMat& A);

/// Adjugate matrix, so that A * adjugate(A) = det(A) * I.
IMat adjugate(const IMat& A);

/// Column Hermite data for an integer matrix A (m x d, rank d expected by the
/// solvers): H = A * V with V unimodular, H in column echelon form with
/// positive pivots and reduced entries to the right of each pivot.
struct HnfBasis {
    IMat H;                       // m x r, nonzero echelon columns only
    IMat V;                       // d x r, preimages of the columns of H
    std::vector<int> pivot_rows;  // row index of the pivot of each column
};

HnfBasis hnf_basis(const IMat& A);

/// Canonical representative of b + A*Z^d inside Z^m. Idempotent and constant
/// on cosets. Requires rank(A) = number of columns.
IVec hnf_coset_reduce(const IVec& b, const IMat& A);
IVec hnf_coset_reduce(const IVec& b, const HnfBasis& basis);

/// Solves A z = w over the integers. Returns nullopt when w is not in the
/// column lattice of A.
std::optional<IVec> solve_in_column_lattice(const HnfBasis& basis, const IVec& w);

/// Primitive kernel vector of a (d-1) x d integer matrix of rank d-1,
/// computed by cofactor expansion.
IVec cross_kernel(const IMat& rows);

/// Full-dimensional pointed rational cone with its facet description.
struct ConeData {
    int dim = 0;
    std::vector<IVec> rays;  // primitive generators
    IMat facets;             // rows are primitive inner facet normals, lex sorted
    std::string label;
    HnfBasis facet_lattice;  // column HNF data of the facet matrix

    static std::shared_ptr<const ConeData> from_rays(std::string label,
                                                     std::vector<IVec> rays);

    /// Heights A*x of a lattice point against all facets.
    IVec heights(const IVec& x) const;
    bool contains(const IVec& x) const;
};

using ConePtr = std::shared_ptr<const ConeData>;

/// Primitive inner normals of all facets of cone(rays), rows sorted
/// lexicographically. Throws NotFullDimensional / NotPointed.
IMat facet_normals(const std::vector<IVec>& rays);

/// Extremal rays of {x : A x >= 0}, primitive, lex sorted.
std::vector<IVec> rays_from_inequalities(const IMat& A);

/// Finite-index sublattice of Z^d, either by an explicit basis (columns) or by
/// a single congruence sum_i weights_i * v_i = 0 mod modulus.
struct LatticePresentation {
    int dim = 0;
    std::optional<IMat> basis;
    struct Congruence {
        Int modulus;
        IVec weights;
    };
    std::optional<Congruence> congruence;

    static LatticePresentation standard(int dim);
    static LatticePresentation from_basis(IMat basis);
    static LatticePresentation cyclic(Int modulus, IVec weights);
};

/// Result of rewriting a cone in coordinates where the sublattice becomes Z^d.
struct NormalizedLattice {
    IMat basis;      // d x d, columns span the sublattice L inside Z^d
    QMat inverse;    // basis^{-1}, maps L isomorphically onto Z^d
    Int index;       // [Z^d : L] = |det basis|
    ConePtr cone;    // the cone expressed in L-coordinates
    // Coordinates of an ambient rational vector in the normalized lattice.
    QVec to_normalized(const QVec& t) const;
};

/// Integer basis (columns) of ker(M) intersected with Z^cols.
IMat kernel_basis(const IMat& M);

NormalizedLattice normalize_lattice(const LatticePresentation& pres,
                                    const std::vector<IVec>& rays,
                                    const std::string& label);

/// All x in Z^d with lo_i <= <a_i, x> <= hi_i for every row a_i of A,
/// deterministically lex sorted. Requires rank(A) = d.
std::vector<IVec> enumerate_points(const IMat& A, const IVec& lo, const IVec& hi);

inline std::vector<IVec> enumerate_points(const IMat& A, const IVec& b, const BoxBound& box) {
    IVec hi(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) hi(i) = b(i) + box.size;
    return enumerate_points(A, b, hi);
}

}  // namespace frobken
