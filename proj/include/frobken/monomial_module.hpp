// Monomial (conic) modules over an affine semigroup ring, given by a facet
// bound vector, together with minimal generators, tight bounds, and
// translation-class canonicalization.

#pragma once

#include "frobken/lattice.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace frobken {

/// Isomorphism class of a monomial module: the canonical coset representative
/// of its tight bound vector modulo A * Z^d.
struct ClassId {
    std::string cone_label;
    IVec residue;

    friend bool operator==(const ClassId& a, const ClassId& b) {
        return a.cone_label == b.cone_label && a.residue == b.residue;
    }
    friend bool operator<(const ClassId& a, const ClassId& b) {
        if (a.cone_label != b.cone_label) return a.cone_label < b.cone_label;
        return lex_less(a.residue, b.residue);
    }
    std::string str() const { return cone_label + ":" + frobken::to_string(residue); }
};

/// Module with lattice-point set {x in Z^d : A x >= b}. Immutable after the
/// lazily computed fields (generators, tight bound) are published.
class MonomialModule {
public:
    static MonomialModule from_bound(ConePtr cone, IVec bound);
    /// Con(t): bound = ceil(A t), point set Z^d intersect (t + cone).
    static MonomialModule from_shift(const QVec& t, ConePtr cone);

    MonomialModule(const MonomialModule& other);
    MonomialModule& operator=(const MonomialModule& other);

    const ConePtr& cone() const { return cone_; }
    const IVec& bound() const { return bound_; }
    const std::optional<QVec>& origin_shift() const { return shift_; }

    bool contains(const IVec& x) const;

    /// Points of the module not of the form point + nonzero semigroup element.
    /// The search window doubles until completeness is certified or the cap is
    /// reached (BoxExhausted).
    const std::vector<IVec>& minimal_generators(const BoxBound& box = {}) const;

    /// Componentwise minimum of facet heights over the point set.
    const IVec& tight_bound(const BoxBound& box = {}) const;

    ClassId canonical_class(const BoxBound& box = {}) const;

    /// The translate with point set z + points(*this). Keeps the conic origin
    /// shift when present.
    MonomialModule translated(const IVec& z) const;

    /// The representative of this module's class whose bound equals the
    /// canonical residue vector (a translate of *this).
    MonomialModule canonical_representative(const BoxBound& box = {}) const;

    /// Window points {x : b <= A x <= b + N} relative to the tight bound.
    std::vector<IVec> window_points(const BoxBound& box) const;

private:
    MonomialModule(ConePtr cone, IVec bound, std::optional<QVec> shift);

    void compute_lazy(const BoxBound& box) const;

    ConePtr cone_;
    IVec bound_;
    std::optional<QVec> shift_;

    struct Lazy {
        std::vector<IVec> generators;
        IVec tight;
    };
    mutable std::mutex mu_;
    mutable std::shared_ptr<const Lazy> lazy_;  // compute-then-publish
};

/// Multiset of isomorphism classes with positive multiplicities, plus the
/// canonical representative of each class.
struct Decomposition {
    std::map<ClassId, Int> multiplicity;
    std::map<ClassId, MonomialModule> representatives;
    Int total_rank = 0;
    long p = 0;
    int e = 0;
    std::string source;

    void add(const ClassId& id, const MonomialModule& rep, const Int& count = 1);
    std::vector<ClassId> class_ids() const;
};

/// True iff the class sets coincide (multiplicities are ignored; they are
/// positive by invariant). Throws ConeMismatch on different cones.
bool is_equivalent(const Decomposition& a, const Decomposition& b);

}  // namespace frobken
