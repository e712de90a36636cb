#include "frobken/end_algebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace frobken {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "CERTIFIED";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
        case Verdict::Fail: return "FAIL";
    }
    return "FAIL";
}

void VerifyReport::note_failure(const std::string& msg) {
    ++failures;
    issues.push_back("FAIL " + msg);
    verdict = Verdict::Fail;
}

void VerifyReport::note_inconclusive(const std::string& msg) {
    ++inconclusive;
    issues.push_back("INCONCLUSIVE " + msg);
    if (verdict == Verdict::Certified) verdict = Verdict::Inconclusive;
}

void VerifyReport::merge(const VerifyReport& other) {
    degrees_checked += other.degrees_checked;
    failures += other.failures;
    inconclusive += other.inconclusive;
    issues.insert(issues.end(), other.issues.begin(), other.issues.end());
    if (other.verdict == Verdict::Fail || verdict == Verdict::Fail) {
        verdict = Verdict::Fail;
    } else if (other.verdict == Verdict::Inconclusive || verdict == Verdict::Inconclusive) {
        verdict = Verdict::Inconclusive;
    }
}

HomModule hom_module(const MonomialModule& src, const MonomialModule& tgt, const BoxBound& box) {
    if (src.cone()->label != tgt.cone()->label) {
        throw EngineError("ConeMismatch", "hom module between different cones");
    }
    IVec bound = tgt.tight_bound(box) - src.tight_bound(box);
    return HomModule{src.canonical_class(box), tgt.canonical_class(box),
                     MonomialModule::from_bound(src.cone(), std::move(bound))};
}

EndAlgebra build_end_algebra(const std::vector<MonomialModule>& reps,
                             const std::vector<Int>& multiplicities,
                             const BoxBound& box) {
    EndAlgebra alg;
    if (reps.empty()) throw EngineError("DuplicateClass", "no class representatives given");
    alg.cone = reps[0].cone();
    alg.reps = reps;
    alg.multiplicities = multiplicities.empty()
                             ? std::vector<Int>(reps.size(), Int(1))
                             : multiplicities;
    std::set<ClassId> seen;
    for (const auto& rep : reps) {
        ClassId id = rep.canonical_class(box);
        if (!seen.insert(id).second) {
            throw EngineError("DuplicateClass", "representatives are not pairwise non-isomorphic: " + id.str());
        }
        alg.ids.push_back(id);
    }
    const int n = alg.size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            HomModule cell = hom_module(reps[static_cast<size_t>(i)], reps[static_cast<size_t>(j)], box);
            if (i == j && !cell.mod.contains(IVec::Zero(alg.cone->dim))) {
                throw EngineError("ClosureViolation", "identity missing on the diagonal");
            }
            alg.generators.push_back(cell.mod.minimal_generators(box));
            alg.cells.push_back(std::move(cell));
        }
    }
    // Closure on generators: Hom(i,j) + Hom(j,k) lands in Hom(i,k).
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (const IVec& g : alg.cell_generators(i, j)) {
                    for (const IVec& h : alg.cell_generators(j, k)) {
                        if (!alg.cell(i, k).mod.contains(IVec(g + h))) {
                            throw EngineError("ClosureViolation",
                                              "generator composite escapes its cell");
                        }
                    }
                }
            }
        }
    }
    return alg;
}

namespace {

enum class WitnessState { Found, BeyondWindow, Absent };

// Searches for an integer z2 with lo <= A z2 and A z2 <= exact_hi, preferring
// the window cap lo + N. A miss inside the window with candidates beyond it is
// reported as BeyondWindow, never as Absent.
WitnessState window_witness(const IMat& A, const IVec& lo, const IVec& exact_hi, int window) {
    IVec capped(lo.size());
    bool truncated = false;
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        Int wcap = lo(i) + window;
        if (exact_hi(i) > wcap) {
            capped(i) = wcap;
            truncated = true;
        } else {
            capped(i) = exact_hi(i);
        }
    }
    if (!enumerate_points(A, lo, capped).empty()) return WitnessState::Found;
    if (!truncated) return WitnessState::Absent;
    if (!enumerate_points(A, lo, exact_hi).empty()) return WitnessState::BeyondWindow;
    return WitnessState::Absent;
}

void require_equivalent(const std::vector<const std::vector<MonomialModule>*>& systems,
                        const BoxBound& box) {
    std::set<ClassId> first;
    for (size_t s = 0; s < systems.size(); ++s) {
        std::set<ClassId> ids;
        for (const auto& m : *systems[s]) ids.insert(m.canonical_class(box));
        if (s == 0) {
            first = std::move(ids);
        } else if (ids != first) {
            throw EngineError("NotEquivalent", "class systems are not equivalent");
        }
    }
}

std::string degree_tag(const std::string& what, const ClassId& a, const ClassId& b, const IVec& z) {
    std::ostringstream os;
    os << what << " " << a.str() << "->" << b.str() << " degree " << to_string(z);
    return os.str();
}

}  // namespace

VerifyReport verify_hom_tensor_surjectivity(const std::vector<MonomialModule>& l_classes,
                                            const std::vector<MonomialModule>& m_classes,
                                            const std::vector<MonomialModule>& n_classes,
                                            const BoxBound& box) {
    require_equivalent({&l_classes, &m_classes, &n_classes}, box);
    VerifyReport report;
    const IMat& A = l_classes[0].cone()->facets;
    for (const auto& l : l_classes) {
        const IVec& tl = l.tight_bound(box);
        for (const auto& n : n_classes) {
            const IVec& tn = n.tight_bound(box);
            IVec hb = tn - tl;
            IVec hi(hb.size());
            for (Eigen::Index i = 0; i < hb.size(); ++i) hi(i) = hb(i) + box.size;
            for (const IVec& z : enumerate_points(A, hb, hi)) {
                ++report.degrees_checked;
                IVec az = A * z;
                WitnessState best = WitnessState::Absent;
                for (const auto& m : m_classes) {
                    const IVec& tm = m.tight_bound(box);
                    IVec lo = tm - tl;             // bound of Hom(L, M')
                    IVec exact_hi = az - (tn - tm);  // keeps z - z2 inside Hom(M', N)
                    WitnessState st = window_witness(A, lo, exact_hi, box.size);
                    if (st == WitnessState::Found) { best = st; break; }
                    if (st == WitnessState::BeyondWindow) best = st;
                }
                if (best == WitnessState::Found) continue;
                if (best == WitnessState::BeyondWindow) {
                    report.note_inconclusive(degree_tag("hom-tensor", l.canonical_class(box),
                                                        n.canonical_class(box), z));
                } else {
                    report.note_failure(degree_tag("hom-tensor", l.canonical_class(box),
                                                   n.canonical_class(box), z));
                }
            }
        }
    }
    return report;
}

VerifyReport verify_module_action_iso(const std::vector<MonomialModule>& m_classes,
                                      const std::vector<MonomialModule>& n_classes,
                                      const BoxBound& box) {
    require_equivalent({&m_classes, &n_classes}, box);
    VerifyReport report;
    const IMat& A = m_classes[0].cone()->facets;
    for (const auto& n : n_classes) {
        const IVec& tn = n.tight_bound(box);
        for (const IVec& y : n.window_points(box)) {
            ++report.degrees_checked;
            IVec ay = A * y;
            WitnessState best = WitnessState::Absent;
            for (const auto& m : m_classes) {
                const IVec& tm = m.tight_bound(box);
                IVec lo = tn - tm;        // bound of Hom(M', N)
                IVec exact_hi = ay - tm;  // keeps y - psi inside M'
                WitnessState st = window_witness(A, lo, exact_hi, box.size);
                if (st == WitnessState::Found) { best = st; break; }
                if (st == WitnessState::BeyondWindow) best = st;
            }
            if (best == WitnessState::Found) continue;
            if (best == WitnessState::BeyondWindow) {
                report.note_inconclusive(degree_tag("evaluation", m_classes[0].canonical_class(box),
                                                    n.canonical_class(box), y));
            } else {
                report.note_failure(degree_tag("evaluation", m_classes[0].canonical_class(box),
                                               n.canonical_class(box), y));
            }
        }
    }
    return report;
}

}  // namespace frobken
