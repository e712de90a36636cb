// Noncommutative blowups: D-blowups of semigroup rings, NC blowups of tame
// diagonal quotient covers, the Frobenius bimodule Hom(M, M_e), and the
// replayable degreewise Kunz-regularity certificate.

#pragma once

#include "frobken/end_algebra.hpp"
#include "frobken/frobenius.hpp"

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace frobken {

/// A regular cover Y -> X = Y / (Z/n) acting diagonally with the given
/// weights. basis columns span the invariant lattice inside Y's exponent
/// lattice; anchors are the rational offsets of the character pieces of O_Y in
/// normalized X-coordinates.
struct CoverData {
    Int group_order;
    IVec weights;
    IMat basis;    // Y-coordinates of the X-lattice basis
    QMat inverse;  // maps Y exponents into X-coordinates
    std::vector<QVec> anchors;
    std::vector<MonomialModule> pieces;  // character piece at anchor, translated to the lattice
};

/// NCB(M/X) = (End(M), M): the decomposition of M, the End algebra on its
/// multiplicity-free representatives, and the provenance of M.
struct NCBlowup {
    ConePtr cone;
    long p = 0;
    int e0 = 0;  // D-blowup level; 0 for covers
    Decomposition decomposition;
    EndAlgebra end_algebra;
    std::optional<CoverData> cover;
};

/// DB_{e0}(X) = NCB(F^{e0}_* R / X).
NCBlowup build_dblowup(const ConePtr& cone, long p, int e0,
                       const EnumLimits& limits = {}, const BoxBound& box = {});

/// NCB(Y/X) for Y = affine d-space and X its quotient by the diagonal
/// Z/n-action with the given weights. Requires gcd(n, p) = 1.
NCBlowup build_cover_ncb(const Int& n, const IVec& weights, long p,
                         const EnumLimits& limits = {}, const BoxBound& box = {});

/// One column of the Frobenius bimodule: the summand of M_e at (source class,
/// residue), identified with the projective column of class_index via an
/// integral translation.
struct TranslationEntry {
    int source_class = 0;
    IVec residue;
    int class_index = 0;
    IVec shift;
};

/// Replayable degreewise evidence that Hom(M, M_e) is a direct sum of
/// projective right End(M)-columns inside the truncation window.
struct FrobeniusCertificate {
    long p = 0;
    int e = 0;
    int e0 = 0;
    int box = 0;
    std::string cone_label;
    std::vector<TranslationEntry> table;
    Verdict verdict = Verdict::Inconclusive;
    long degrees_checked = 0;
    long failures = 0;
    long inconclusive = 0;
    std::vector<std::string> issues;

    nlohmann::json to_json() const;
    static FrobeniusCertificate from_json(const nlohmann::json& j);
};

/// Builds the residue-to-class table for level e and replays the degreewise
/// verification. Requires F-steadiness of M up to e (NotFSteady otherwise).
FrobeniusCertificate frobenius_certificate(const NCBlowup& ncb, int e, const BoxBound& box,
                                           const EnumLimits& limits = {});

/// Re-runs the degreewise verification of a stored table, overwriting the
/// verdict fields. Deterministic: a certified certificate replays bit-for-bit.
void replay_certificate(const NCBlowup& ncb, FrobeniusCertificate& cert,
                        const EnumLimits& limits = {});

/// Projection square: evaluation Hom(M, M_e) x M -> M_e is degreewise
/// surjective inside the window.
VerifyReport verify_projection_compat(const NCBlowup& ncb, int e, const BoxBound& box,
                                      const EnumLimits& limits = {});

/// F^{e+e'} = F^e after F^{e'} at decomposition level and at the level of
/// residue-to-class tables (composition consistent up to integral shifts).
VerifyReport verify_frobenius_iteration(const NCBlowup& ncb, int e, int e2,
                                        const EnumLimits& limits = {});

/// Coforgetful compatibility for regular covers: the canonical map
/// O_{Y_e} (x)_{O_Y} End(O_Y) -> Hom_X(O_Y, O_{Y_e}) is degreewise surjective
/// inside the window.
VerifyReport verify_cover_coforgetful(const NCBlowup& ncb, int e, const BoxBound& box,
                                      const EnumLimits& limits = {});

}  // namespace frobken
