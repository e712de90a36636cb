// Frobenius pushforward decomposition and the F-singularity battery:
// F-purity, witnessed FFRT, F-steadiness, F-signature estimates, and the
// commutative Kunz criterion.

#pragma once

#include "frobken/monomial_module.hpp"

#include <optional>
#include <vector>

namespace frobken {

struct EnumLimits {
    Int cap = Int(1) << 20;  // maximum number of residues q^d
    int threads = 1;
    bool force = false;  // overrides the cap
};

/// Residue summand of F^e_* M: the module {w : q w + u in points(M)},
/// presented as Con((t - u)/q). Requires an origin shift.
MonomialModule frobenius_summand(const MonomialModule& m, const Int& q, const IVec& u);

/// Decomposition of F^e_* M into residue summands: for q = p^e, the classes of
/// the modules {w : q w + u in M} over u in {0..q-1}^d. Total rank q^d.
/// Requires M to be presented as Con(t) (MissingShift otherwise).
Decomposition frobenius_pushforward(const MonomialModule& M, long p, int e,
                                    const EnumLimits& limits = {});

/// Pushforward of a direct sum: each class representative is pushed and the
/// results are aggregated with the incoming multiplicities.
Decomposition pushforward_of_decomposition(const Decomposition& d, long p, int e,
                                           const EnumLimits& limits = {});

struct FPureResult {
    bool f_pure = false;
    std::optional<IVec> witness_residue;  // first residue giving the free class
};

/// Splitting test: the free class occurs in F_* R.
FPureResult f_pure_check(const MonomialModule& ring, long p, const EnumLimits& limits = {});

struct FfrtScan {
    std::vector<Decomposition> per_e;  // index 0 holds e = 1
    std::optional<int> stabilized_from;  // least e0 with identical class sets on [e0, e_max]
};

/// Class-set stabilization scan for e = 1..e_max. Stabilization is reported
/// only when witnessed by at least two consecutive identical class sets.
FfrtScan ffrt_scan(const MonomialModule& ring, long p, int e_max,
                   const EnumLimits& limits = {});

struct SteadyCheck {
    bool steady = true;
    int first_failing_e = 0;  // meaningful when !steady
    std::vector<std::vector<ClassId>> class_sets;  // per e, 0 = the module itself
};

/// M is F-steady up to e_max iff classes(F^e_* M) = classes(M) for all e <= e_max.
SteadyCheck f_steady_check(const Decomposition& m, long p, int e_max,
                           const EnumLimits& limits = {});

/// Multiplicity of the free class in F^e_* R divided by p^{e d}.
Rat f_signature_estimate(const MonomialModule& ring, long p, int e,
                         const EnumLimits& limits = {});

/// Kunz: regular iff F_* R is free, i.e. the level-1 decomposition consists of
/// the free class only.
bool kunz_commutative_test(const MonomialModule& ring, long p, const EnumLimits& limits = {});

/// F^{e+e'} = F^e after F^{e'}: pushing each level-e summand by e' reproduces
/// the level-(e+e') decomposition as an exact multiset.
bool pushforward_composition_check(const MonomialModule& m, long p, int e, int e2,
                                   const EnumLimits& limits = {});

}  // namespace frobken
