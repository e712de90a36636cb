#include "frobken/ncb.hpp"

#include "frobken/report.hpp"

#include <algorithm>
#include <sstream>

namespace frobken {

namespace {

using nlohmann::json;

std::vector<MonomialModule> sorted_representatives(const Decomposition& d) {
    std::vector<MonomialModule> reps;
    for (const auto& [id, rep] : d.representatives) reps.push_back(rep);
    return reps;  // std::map iteration is already ordered by ClassId
}

std::vector<Int> sorted_multiplicities(const Decomposition& d) {
    std::vector<Int> mult;
    for (const auto& [id, m] : d.multiplicity) mult.push_back(m);
    return mult;
}

int class_index_of(const std::vector<ClassId>& ids, const ClassId& id) {
    auto it = std::find(ids.begin(), ids.end(), id);
    return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
}

IVec translation_between(const ConePtr& cone, const IVec& tight_from, const IVec& tight_to) {
    auto z = solve_in_column_lattice(cone->facet_lattice, IVec(tight_to - tight_from));
    if (!z) {
        throw EngineError("RankDeficient", "modules are not integral translates");
    }
    return *z;
}

}  // namespace

NCBlowup build_dblowup(const ConePtr& cone, long p, int e0, const EnumLimits& limits,
                       const BoxBound& box) {
    NCBlowup ncb;
    ncb.cone = cone;
    ncb.p = p;
    ncb.e0 = e0;
    MonomialModule ring = MonomialModule::from_shift(QVec::Zero(cone->dim), cone);
    ncb.decomposition = frobenius_pushforward(ring, p, e0, limits);
    ncb.end_algebra = build_end_algebra(sorted_representatives(ncb.decomposition),
                                        sorted_multiplicities(ncb.decomposition), box);
    return ncb;
}

NCBlowup build_cover_ncb(const Int& n, const IVec& weights, long p, const EnumLimits& limits,
                         const BoxBound& box) {
    const int d = static_cast<int>(weights.size());
    if (n <= 0) throw EngineError("ValidationError", "group order must be positive");
    Int g;
    mpz_gcd_ui(g.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
    if (g != 1) {
        throw EngineError("WildGroupOrder", "p divides the group order " + n.get_str());
    }
    Int wg = content(weights);
    mpz_gcd(wg.get_mpz_t(), wg.get_mpz_t(), n.get_mpz_t());
    if (n > 1 && wg != 1) {
        throw EngineError("ValidationError", "weights and group order share a common factor");
    }

    std::ostringstream label;
    label << "cyclic-" << n;
    for (int i = 0; i < d; ++i) label << "-" << weights(i);

    std::vector<IVec> rays;
    for (int i = 0; i < d; ++i) {
        IVec e = IVec::Zero(d);
        e(i) = 1;
        rays.push_back(e);
    }
    NormalizedLattice norm =
        normalize_lattice(LatticePresentation::cyclic(n, weights), rays, label.str());

    NCBlowup ncb;
    ncb.cone = norm.cone;
    ncb.p = p;
    ncb.e0 = 0;
    CoverData cover;
    cover.group_order = n;
    cover.weights = weights;
    cover.basis = norm.basis;
    cover.inverse = norm.inverse;

    const unsigned long nn = n.get_ui();
    for (unsigned long chi = 0; chi < nn; ++chi) {
        // First Y-exponent realizing character chi, in odometer order.
        IVec v = IVec::Zero(d);
        bool found = false;
        while (!found) {
            Int s = dot<Int, Int>(weights, v) % n;
            if (s < 0) s += n;
            if (s == Int(chi)) {
                found = true;
                break;
            }
            int i = d - 1;
            while (i >= 0) {
                v(i) += 1;
                if (v(i) < n) break;
                v(i) = 0;
                --i;
            }
            if (i < 0) {
                throw EngineError("ValidationError",
                                  "character " + std::to_string(chi) + " is not realized");
            }
        }
        QVec vq(d);
        for (int i = 0; i < d; ++i) vq(i) = Rat(v(i));
        QVec anchor = norm.to_normalized(vq);
        QVec minus(d);
        for (int i = 0; i < d; ++i) minus(i) = -anchor(i);
        cover.anchors.push_back(anchor);
        cover.pieces.push_back(MonomialModule::from_shift(minus, norm.cone));
    }
    for (const auto& piece : cover.pieces) {
        ncb.decomposition.add(piece.canonical_class(box), piece.canonical_representative(box));
    }
    ncb.decomposition.p = p;
    ncb.decomposition.source = label.str();
    ncb.end_algebra = build_end_algebra(sorted_representatives(ncb.decomposition),
                                        sorted_multiplicities(ncb.decomposition), box);
    ncb.cover = std::move(cover);
    (void)limits;
    return ncb;
}

FrobeniusCertificate frobenius_certificate(const NCBlowup& ncb, int e, const BoxBound& box,
                                           const EnumLimits& limits) {
    SteadyCheck steady = f_steady_check(ncb.decomposition, ncb.p, e, limits);
    if (!steady.steady) {
        throw EngineError("NotFSteady",
                          "module is not F-steady at e = " + std::to_string(steady.first_failing_e));
    }
    FrobeniusCertificate cert;
    cert.p = ncb.p;
    cert.e = e;
    cert.e0 = ncb.e0;
    cert.box = box.size;
    cert.cone_label = ncb.cone->label;

    const EndAlgebra& alg = ncb.end_algebra;
    const Int q = pow_int(Int(ncb.p), static_cast<unsigned long>(e));
    const Int total = pow_int(q, static_cast<unsigned long>(ncb.cone->dim));
    if (!limits.force && total > limits.cap) {
        throw EngineError("CapExceeded", "residue count " + total.get_str() + " exceeds cap");
    }
    const unsigned long count = total.get_ui();
    const unsigned long qq = q.get_ui();
    for (int j = 0; j < alg.size(); ++j) {
        const MonomialModule& rep = alg.reps[static_cast<size_t>(j)];
        for (unsigned long k = 0; k < count; ++k) {
            IVec u(ncb.cone->dim);
            unsigned long kk = k;
            for (int i = ncb.cone->dim - 1; i >= 0; --i) {
                u(i) = static_cast<long>(kk % qq);
                kk /= qq;
            }
            MonomialModule summand = frobenius_summand(rep, q, u);
            ClassId id = summand.canonical_class(box);
            int idx = class_index_of(alg.ids, id);
            if (idx < 0) {
                throw EngineError("NotFSteady", "pushforward summand class " + id.str() +
                                                    " is not among the representatives");
            }
            TranslationEntry entry;
            entry.source_class = j;
            entry.residue = u;
            entry.class_index = idx;
            entry.shift = translation_between(
                ncb.cone, alg.reps[static_cast<size_t>(idx)].tight_bound(box),
                summand.tight_bound(box));
            cert.table.push_back(std::move(entry));
        }
    }
    replay_certificate(ncb, cert, limits);
    return cert;
}

void replay_certificate(const NCBlowup& ncb, FrobeniusCertificate& cert, const EnumLimits& limits) {
    (void)limits;
    cert.degrees_checked = 0;
    cert.failures = 0;
    cert.inconclusive = 0;
    cert.issues.clear();

    const EndAlgebra& alg = ncb.end_algebra;
    const IMat& A = ncb.cone->facets;
    const BoxBound box{cert.box};
    const Int q = pow_int(Int(cert.p), static_cast<unsigned long>(cert.e));
    const Int expected = pow_int(q, static_cast<unsigned long>(ncb.cone->dim)) * alg.size();
    if (Int(static_cast<long>(cert.table.size())) != expected) {
        cert.failures++;
        cert.issues.push_back("FAIL table does not cover all residues");
    }

    auto note_fail = [&](const std::string& msg) {
        cert.failures++;
        if (cert.issues.size() < 64) cert.issues.push_back("FAIL " + msg);
    };

    for (const TranslationEntry& entry : cert.table) {
        if (entry.source_class < 0 || entry.source_class >= alg.size() ||
            entry.class_index < 0 || entry.class_index >= alg.size()) {
            note_fail("table entry with out-of-range class index");
            continue;
        }
        const MonomialModule& src = alg.reps[static_cast<size_t>(entry.source_class)];
        const MonomialModule& proj = alg.reps[static_cast<size_t>(entry.class_index)];
        MonomialModule summand = frobenius_summand(src, q, entry.residue);
        const IVec& ts = summand.tight_bound(box);
        const IVec& tp = proj.tight_bound(box);
        IVec shifted_tp = tp + A * entry.shift;

        for (int i = 0; i < alg.size(); ++i) {
            const IVec& ti = alg.reps[static_cast<size_t>(i)].tight_bound(box);
            IVec lo1 = ts - ti;          // bound of Hom(C_i, summand)
            IVec lo2 = shifted_tp - ti;  // bound of the shifted projective column
            IVec lo(lo1.size()), hi(lo1.size());
            for (Eigen::Index r = 0; r < lo1.size(); ++r) {
                lo(r) = lo1(r) < lo2(r) ? lo1(r) : lo2(r);
                hi(r) = lo(r) + cert.box;
            }
            std::vector<IVec> window = enumerate_points(A, lo, hi);
            if (window.empty()) {
                cert.inconclusive++;
                if (cert.issues.size() < 64) {
                    cert.issues.push_back("INCONCLUSIVE empty window for residue " +
                                          to_string(entry.residue));
                }
                continue;
            }
            for (const IVec& x : window) {
                ++cert.degrees_checked;
                IVec h = A * x;
                bool in1 = true, in2 = true;
                for (Eigen::Index r = 0; r < h.size(); ++r) {
                    if (h(r) < lo1(r)) in1 = false;
                    if (h(r) < lo2(r)) in2 = false;
                }
                if (in1 != in2) {
                    note_fail("column mismatch at degree " + to_string(x) + " residue " +
                              to_string(entry.residue) + " source " +
                              std::to_string(entry.source_class));
                }
                if (!in1) continue;
                // Right End-action: precomposition by every generator must
                // commute with the translation identification.
                for (int k = 0; k < alg.size(); ++k) {
                    const IVec& tk = alg.reps[static_cast<size_t>(k)].tight_bound(box);
                    for (const IVec& gvec : alg.cell_generators(k, i)) {
                        IVec comp = x + gvec;
                        IVec hc = A * comp;
                        bool in_summand = true, in_proj = true;
                        for (Eigen::Index r = 0; r < hc.size(); ++r) {
                            if (hc(r) < ts(r) - tk(r)) in_summand = false;
                            if (hc(r) < shifted_tp(r) - tk(r)) in_proj = false;
                        }
                        if (!in_summand || !in_proj) {
                            note_fail("generator action mismatch at degree " + to_string(x) +
                                      " residue " + to_string(entry.residue));
                        }
                    }
                }
            }
        }
    }
    if (cert.failures > 0) {
        cert.verdict = Verdict::Fail;
    } else if (cert.inconclusive > 0 || cert.degrees_checked == 0) {
        cert.verdict = Verdict::Inconclusive;
    } else {
        cert.verdict = Verdict::Certified;
    }
}

VerifyReport verify_projection_compat(const NCBlowup& ncb, int e, const BoxBound& box,
                                      const EnumLimits& limits) {
    SteadyCheck steady = f_steady_check(ncb.decomposition, ncb.p, e, limits);
    if (!steady.steady) {
        throw EngineError("NotFSteady",
                          "module is not F-steady at e = " + std::to_string(steady.first_failing_e));
    }
    Decomposition pushed = pushforward_of_decomposition(ncb.decomposition, ncb.p, e, limits);
    return verify_module_action_iso(sorted_representatives(ncb.decomposition),
                                    sorted_representatives(pushed), box);
}

VerifyReport verify_frobenius_iteration(const NCBlowup& ncb, int e, int e2,
                                        const EnumLimits& limits) {
    VerifyReport report;
    const EndAlgebra& alg = ncb.end_algebra;
    const ConePtr& cone = ncb.cone;
    const int d = cone->dim;
    const Int q = pow_int(Int(ncb.p), static_cast<unsigned long>(e));
    const Int q2 = pow_int(Int(ncb.p), static_cast<unsigned long>(e2));
    const Int qq = q * q2;
    const Int total = pow_int(qq, static_cast<unsigned long>(d));
    if (!limits.force && total > limits.cap) {
        throw EngineError("CapExceeded", "residue count " + total.get_str() + " exceeds cap");
    }

    for (int j = 0; j < alg.size(); ++j) {
        const MonomialModule& rep = alg.reps[static_cast<size_t>(j)];
        if (!pushforward_composition_check(rep, ncb.p, e, e2, limits)) {
            report.note_failure("decomposition-level composition mismatch for class " +
                                alg.ids[static_cast<size_t>(j)].str());
        }
    }

    const unsigned long count = total.get_ui();
    const unsigned long qql = qq.get_ui();
    const unsigned long q2l = q2.get_ui();
    const unsigned long ql = q.get_ui();
    for (int j = 0; j < alg.size(); ++j) {
        const MonomialModule& rep = alg.reps[static_cast<size_t>(j)];
        for (unsigned long k = 0; k < count; ++k) {
            IVec u(d);
            unsigned long kk = k;
            for (int i = d - 1; i >= 0; --i) {
                u(i) = static_cast<long>(kk % qql);
                kk /= qql;
            }
            ++report.degrees_checked;

            // Direct route at level e + e2.
            MonomialModule direct = frobenius_summand(rep, qq, u);
            ClassId direct_id = direct.canonical_class();
            int jd = class_index_of(alg.ids, direct_id);
            if (jd < 0) {
                report.note_failure("direct summand class missing for residue " + to_string(u));
                continue;
            }
            IVec zd = translation_between(cone, alg.reps[static_cast<size_t>(jd)].tight_bound(),
                                          direct.tight_bound());

            // Composed route: F^{e2} first, then F^{e}.
            IVec u_low(d), v0(d);
            for (int i = 0; i < d; ++i) {
                u_low(i) = u(i) % Int(q2l);
                v0(i) = u(i) / Int(q2l);
            }
            MonomialModule s1 = frobenius_summand(rep, q2, u_low);
            ClassId id1 = s1.canonical_class();
            int j1 = class_index_of(alg.ids, id1);
            if (j1 < 0) {
                report.note_failure("level-" + std::to_string(e2) + " summand class missing");
                continue;
            }
            IVec z1 = translation_between(cone, alg.reps[static_cast<size_t>(j1)].tight_bound(),
                                          s1.tight_bound());
            IVec v_red(d), carry(d);
            for (int i = 0; i < d; ++i) {
                Int diff = v0(i) - z1(i);
                Int m = diff % Int(ql);
                if (m < 0) m += Int(ql);
                v_red(i) = m;
                carry(i) = (diff - m) / Int(ql);
            }
            MonomialModule s2 =
                frobenius_summand(alg.reps[static_cast<size_t>(j1)], q, v_red);
            ClassId id2 = s2.canonical_class();
            int j2 = class_index_of(alg.ids, id2);
            if (j2 < 0) {
                report.note_failure("composed summand class missing");
                continue;
            }
            IVec z2 = translation_between(cone, alg.reps[static_cast<size_t>(j2)].tight_bound(),
                                          s2.tight_bound());
            IVec z_comp = z2 - carry;
            if (jd != j2 || zd != z_comp) {
                report.note_failure("table composition mismatch at residue " + to_string(u) +
                                    " for class " + alg.ids[static_cast<size_t>(j)].str());
            }
        }
    }
    return report;
}

VerifyReport verify_cover_coforgetful(const NCBlowup& ncb, int e, const BoxBound& box,
                                      const EnumLimits& limits) {
    if (!ncb.cover) {
        throw EngineError("NotACover", "NC blowup was not built from a regular cover");
    }
    (void)limits;
    const CoverData& cover = *ncb.cover;
    const ConePtr& cone = ncb.cone;
    const IMat& A = cone->facets;
    const int d = cone->dim;
    const Int q = pow_int(Int(ncb.p), static_cast<unsigned long>(e));
    const unsigned long ql = q.get_ui();
    const unsigned long nn = cover.group_order.get_ui();

    // Membership of a rational point in O_{Y_e}: q * basis * y must be a
    // nonnegative integer vector.
    auto in_pushforward = [&](const QVec& y) {
        for (Eigen::Index r = 0; r < cover.basis.rows(); ++r) {
            Rat acc = 0;
            for (Eigen::Index c = 0; c < cover.basis.cols(); ++c) {
                acc += Rat(cover.basis(r, c)) * y(c);
            }
            acc *= Rat(q);
            acc.canonicalize();
            if (acc.get_den() != 1 || acc.get_num() < 0) return false;
        }
        return true;
    };

    VerifyReport report;
    const unsigned long residues = pow_int(q, static_cast<unsigned long>(d)).get_ui();
    for (unsigned long chi2 = 0; chi2 < nn; ++chi2) {
        const MonomialModule& piece2 = cover.pieces[chi2];
        const QVec& anchor2 = cover.anchors[chi2];
        for (unsigned long k = 0; k < residues; ++k) {
            IVec u(d);
            unsigned long kk = k;
            for (int i = d - 1; i >= 0; --i) {
                u(i) = static_cast<long>(kk % ql);
                kk /= ql;
            }
            MonomialModule target = frobenius_summand(piece2, q, u);
            QVec target_anchor(d);
            for (int i = 0; i < d; ++i) {
                target_anchor(i) = (anchor2(i) + Rat(u(i))) / Rat(q);
                target_anchor(i).canonicalize();
            }
            const IVec& tt = target.tight_bound(box);
            for (unsigned long chi = 0; chi < nn; ++chi) {
                const MonomialModule& piece = cover.pieces[chi];
                const QVec& anchor = cover.anchors[chi];
                const IVec& tsrc = piece.tight_bound(box);
                IVec lo = tt - tsrc;
                IVec hi(lo.size());
                for (Eigen::Index i = 0; i < lo.size(); ++i) hi(i) = lo(i) + box.size;
                for (const IVec& w : enumerate_points(A, lo, hi)) {
                    ++report.degrees_checked;
                    bool covered = false;
                    for (unsigned long chi1 = 0; chi1 < nn && !covered; ++chi1) {
                        const MonomialModule& mid = cover.pieces[chi1];
                        const QVec& anchor1 = cover.anchors[chi1];
                        IVec glo = mid.tight_bound(box) - tsrc;
                        // y = (target_anchor - anchor1) + (w - g) must lie in
                        // the cone, bounding the search exactly.
                        IVec ghi(glo.size());
                        bool feasible = true;
                        for (Eigen::Index r = 0; r < glo.size(); ++r) {
                            Rat bound = 0;
                            for (int c = 0; c < d; ++c) {
                                bound += Rat(A(r, c)) * (target_anchor(c) - anchor1(c));
                            }
                            Int aw = dot<Int, Int>(IVec(A.row(r).transpose()), w);
                            ghi(r) = aw + floor_rat(bound);
                            if (ghi(r) < glo(r)) feasible = false;
                        }
                        if (!feasible) continue;
                        for (const IVec& gv : enumerate_points(A, glo, ghi)) {
                            QVec y(d);
                            for (int c = 0; c < d; ++c) {
                                y(c) = target_anchor(c) - anchor1(c) + Rat(w(c) - gv(c));
                                y(c).canonicalize();
                            }
                            if (in_pushforward(y)) {
                                covered = true;
                                break;
                            }
                        }
                    }
                    if (!covered) {
                        report.note_failure("coforgetful degree uncovered: source chi=" +
                                            std::to_string(chi) + " target chi=" +
                                            std::to_string(chi2) + " residue " + to_string(u) +
                                            " degree " + to_string(w));
                    }
                }
            }
        }
    }
    if (report.degrees_checked == 0) report.note_inconclusive("no degrees inside the window");
    return report;
}

nlohmann::json FrobeniusCertificate::to_json() const {
    json j;
    j["schema"] = "frobken-certificate/1";
    j["p"] = p;
    j["e"] = e;
    j["e0"] = e0;
    j["box"] = box;
    j["cone"] = cone_label;
    j["verdict"] = verdict_name(verdict);
    j["degrees_checked"] = degrees_checked;
    j["failures"] = failures;
    j["inconclusive"] = inconclusive;
    json table_json = json::array();
    for (const auto& entry : table) {
        json t;
        t["source_class"] = entry.source_class;
        t["residue"] = json_ivec(entry.residue);
        t["class"] = entry.class_index;
        t["shift"] = json_ivec(entry.shift);
        table_json.push_back(std::move(t));
    }
    j["table"] = std::move(table_json);
    j["issues"] = issues;
    return j;
}

FrobeniusCertificate FrobeniusCertificate::from_json(const nlohmann::json& j) {
    FrobeniusCertificate cert;
    cert.p = j.at("p").get<long>();
    cert.e = j.at("e").get<int>();
    cert.e0 = j.at("e0").get<int>();
    cert.box = j.at("box").get<int>();
    cert.cone_label = j.at("cone").get<std::string>();
    for (const auto& t : j.at("table")) {
        TranslationEntry entry;
        entry.source_class = t.at("source_class").get<int>();
        entry.residue = ivec_from_json(t.at("residue"));
        entry.class_index = t.at("class").get<int>();
        entry.shift = ivec_from_json(t.at("shift"));
        cert.table.push_back(std::move(entry));
    }
    std::string v = j.at("verdict").get<std::string>();
    cert.verdict = v == "CERTIFIED" ? Verdict::Certified
                   : v == "FAIL"    ? Verdict::Fail
                                    : Verdict::Inconclusive;
    cert.degrees_checked = j.value("degrees_checked", 0L);
    cert.failures = j.value("failures", 0L);
    cert.inconclusive = j.value("inconclusive", 0L);
    return cert;
}

}  // namespace frobken
