// Hom modules between monomial modules, the endomorphism algebra of a
// multiplicity-free direct sum as a lattice quiver, and the degreewise
// verification of the hom-tensor and module-action isomorphisms.

#pragma once

#include "frobken/monomial_module.hpp"

#include <string>
#include <vector>

namespace frobken {

/// Hom(src, tgt) = {z : z + points(src) subset points(tgt)}; by tightness this
/// is the monomial module with bound tight(tgt) - tight(src).
struct HomModule {
    ClassId source;
    ClassId target;
    MonomialModule mod;
};

HomModule hom_module(const MonomialModule& src, const MonomialModule& tgt,
                     const BoxBound& box = {});

/// End algebra of a multiplicity-free sum of class representatives, stored as
/// the n x n grid of Hom modules with their minimal generators. Composition is
/// vector addition, so associativity is structural; closure is verified on the
/// generators at build time.
struct EndAlgebra {
    ConePtr cone;
    std::vector<MonomialModule> reps;
    std::vector<ClassId> ids;
    std::vector<Int> multiplicities;  // bookkeeping only, grid is on representatives
    std::vector<HomModule> cells;     // row-major, cell(i,j) = Hom(rep_i, rep_j)
    std::vector<std::vector<IVec>> generators;  // per cell

    int size() const { return static_cast<int>(reps.size()); }
    const HomModule& cell(int i, int j) const {
        return cells[static_cast<size_t>(i * size() + j)];
    }
    const std::vector<IVec>& cell_generators(int i, int j) const {
        return generators[static_cast<size_t>(i * size() + j)];
    }
};

EndAlgebra build_end_algebra(const std::vector<MonomialModule>& reps,
                             const std::vector<Int>& multiplicities,
                             const BoxBound& box = {});

enum class Verdict { Certified, Inconclusive, Fail };

std::string verdict_name(Verdict v);

/// Result of a windowed degreewise verification. Truncation shows up as
/// inconclusive degrees, never as failures.
struct VerifyReport {
    Verdict verdict = Verdict::Certified;
    long degrees_checked = 0;
    long failures = 0;
    long inconclusive = 0;
    std::vector<std::string> issues;  // deterministic order

    void note_failure(const std::string& msg);
    void note_inconclusive(const std::string& msg);
    void merge(const VerifyReport& other);
};

/// Degreewise surjectivity of composition
/// Hom(M,N) (x) Hom(L,M) -> Hom(L,N) on mutually equivalent class systems.
/// Dimension counts match automatically: all graded pieces are 0/1.
VerifyReport verify_hom_tensor_surjectivity(const std::vector<MonomialModule>& l_classes,
                                            const std::vector<MonomialModule>& m_classes,
                                            const std::vector<MonomialModule>& n_classes,
                                            const BoxBound& box);

/// Degreewise surjectivity of the evaluation map Hom(M,N) x M -> N on
/// equivalent class systems.
VerifyReport verify_module_action_iso(const std::vector<MonomialModule>& m_classes,
                                      const std::vector<MonomialModule>& n_classes,
                                      const BoxBound& box);

}  // namespace frobken
