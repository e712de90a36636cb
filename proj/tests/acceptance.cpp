// Acceptance battery: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include "frobken/catalog.hpp"
#include "frobken/ncb.hpp"
#include "frobken/report.hpp"
#include "frobken/ring_spec.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace frobken;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title)
        : number_(number), title_(std::move(title)),
          start_(std::chrono::steady_clock::now()) {}

    void require(bool ok, const std::string& what) {
        if (!ok && problem_.empty()) problem_ = what;
    }

    void finish(double time_budget_s = 0) {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                          .count();
        if (problem_.empty() && time_budget_s > 0 && secs > time_budget_s) {
            std::ostringstream os;
            os << "exceeded " << time_budget_s << " s budget (" << secs << " s)";
            problem_ = os.str();
        }
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        if (problem_.empty()) {
            line << "PASS criterion " << number_ << ": " << title_ << " (" << secs << " s)";
        } else {
            line << "FAIL criterion " << number_ << ": " << title_ << " — " << problem_;
            ++failures;
        }
        std::cout << line.str() << "\n";
    }

private:
    int number_;
    std::string title_;
    std::string problem_;
    std::chrono::steady_clock::time_point start_;
};

MonomialModule ring_of(const std::string& builtin) {
    RingSpec spec = builtin_spec(builtin);
    return MonomialModule::from_shift(QVec::Zero(spec.cone->dim), spec.cone);
}

std::string run_cli(const std::string& args, int* exit_code = nullptr) {
    static int counter = 0;
    auto tmp = std::filesystem::temp_directory_path() /
               ("frobken_acc_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::string cmd = std::string(FROBKEN_CLI_PATH) + " " + args + " > " + tmp.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    if (exit_code) *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    std::filesystem::remove(tmp);
    return ss.str();
}

}  // namespace

int main() {
    {
        Criterion c(1, "regular baseline: free pushforwards, Kunz regular, F-steady");
        for (int d = 1; d <= 3; ++d) {
            MonomialModule r = ring_of("A" + std::to_string(d));
            for (long p : {2L, 3L, 5L}) {
                for (int e = 1; e <= 2; ++e) {
                    if (pow_int(Int(p), static_cast<unsigned long>(e * d)) > Int(1) << 20) {
                        continue;
                    }
                    Decomposition dec = frobenius_pushforward(r, p, e);
                    c.require(dec.multiplicity.size() == 1, "A^d pushforward not a single class");
                    c.require(dec.multiplicity.begin()->first == r.canonical_class(),
                              "A^d pushforward class is not free");
                    c.require(dec.multiplicity.begin()->second ==
                                  pow_int(Int(p), static_cast<unsigned long>(e * d)),
                              "A^d free multiplicity wrong");
                }
                c.require(kunz_commutative_test(r, p), "A^d not Kunz regular");
                Decomposition m = frobenius_pushforward(r, p, 1);
                c.require(f_steady_check(m, p, 2).steady, "A^d not F-steady");
            }
        }
        c.finish(5.0);
    }

    {
        Criterion c(2, "A_1 at p=3: two classes, FFRT, F-pure, F-steady, oracle multiplicities");
        MonomialModule r = ring_of("cyclic-2-1-1");
        ClassId free_class = r.canonical_class();
        std::vector<ClassId> first_set;
        for (int e = 1; e <= 3; ++e) {
            Decomposition dec = frobenius_pushforward(r, 3, e);
            c.require(dec.multiplicity.size() == 2, "class count != 2 at e");
            if (e == 1) first_set = dec.class_ids();
            c.require(dec.class_ids() == first_set, "class sets differ across e");
            c.require(dec.multiplicity.count(free_class) == 1, "free class missing (F-purity)");
            auto oracle = oracles::brute_pushforward(r.cone(), QVec::Zero(2), 3, e);
            c.require(oracle.size() == dec.multiplicity.size(), "oracle class count differs");
            for (const auto& [id, mult] : dec.multiplicity) {
                auto it = oracle.find(id.residue);
                c.require(it != oracle.end() && Int(it->second) == mult,
                          "multiplicity differs from brute-force oracle");
            }
        }
        Decomposition m = frobenius_pushforward(r, 3, 1);
        c.require(f_steady_check(m, 3, 3).steady, "F_*R not F-steady up to e=3");
        c.finish(30.0);
    }

    {
        Criterion c(3, "Kunz-regularity certificates CERTIFIED; corrupted table FAILs");
        for (const auto& [name, p] : std::vector<std::pair<std::string, long>>{
                 {"cyclic-2-1-1", 3}, {"cyclic-3-1-2", 2}}) {
            auto t0 = std::chrono::steady_clock::now();
            NCBlowup ncb = build_dblowup(builtin_spec(name).cone, p, 1);
            FrobeniusCertificate cert = frobenius_certificate(ncb, 1, BoxBound{6});
            c.require(cert.verdict == Verdict::Certified, name + " certificate not CERTIFIED");
            c.require(cert.inconclusive == 0, name + " certificate has INCONCLUSIVE degrees");
            double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            c.require(secs < 60.0, name + " certificate exceeded 60 s");
            if (name == "cyclic-2-1-1") {
                FrobeniusCertificate bad = cert;
                bad.table[2].class_index = 1 - bad.table[2].class_index;
                replay_certificate(ncb, bad);
                c.require(bad.verdict == Verdict::Fail, "corrupted table did not FAIL");
            }
        }
        c.finish();
    }

    {
        Criterion c(4, "iteration law: composed = direct on all builtins; A_1 table level");
        for (const std::string& name : builtin_names()) {
            MonomialModule r = ring_of(name);
            const int d = r.cone()->dim;
            for (long p : {2L, 3L}) {
                for (int e = 1; e <= 2; ++e) {
                    for (int e2 = 0; e + e2 <= 3; ++e2) {
                        if (pow_int(Int(p), static_cast<unsigned long>((e + e2) * d)) >
                            Int(1) << 20) {
                            continue;
                        }
                        c.require(pushforward_composition_check(r, p, e, e2),
                                  name + " composition mismatch");
                    }
                }
            }
        }
        NCBlowup ncb = build_dblowup(builtin_spec("cyclic-2-1-1").cone, 3, 1);
        VerifyReport table = verify_frobenius_iteration(ncb, 1, 1);
        c.require(table.failures == 0, "A_1 table-level composition failed");
        c.finish();
    }

    {
        Criterion c(5, "hom-tensor and module-action isomorphisms verified degreewise");
        for (const auto& [name, p] : std::vector<std::pair<std::string, long>>{
                 {"cyclic-2-1-1", 3}, {"cyclic-3-1-2", 2}}) {
            MonomialModule r = ring_of(name);
            auto reps = [&](int e) {
                Decomposition dec = frobenius_pushforward(r, p, e);
                std::vector<MonomialModule> out;
                for (const auto& [id, rep] : dec.representatives) out.push_back(rep);
                return out;
            };
            auto m1 = reps(1);
            auto m2 = reps(2);
            BoxBound box{6};
            VerifyReport t = verify_hom_tensor_surjectivity(m1, m1, m2, box);
            c.require(t.failures == 0 && t.inconclusive == 0 && t.degrees_checked > 0,
                      name + " hom-tensor verification not clean");
            VerifyReport a = verify_module_action_iso(m1, m2, box);
            c.require(a.failures == 0 && a.inconclusive == 0 && a.degrees_checked > 0,
                      name + " module-action verification not clean");
        }
        c.finish();
    }

    {
        Criterion c(6, "cover coforgetful maps CERTIFIED for 1/2(1,1) p=3 and 1/3(1,2) p=2");
        NCBlowup c211 = build_cover_ncb(2, ivec({1, 1}), 3);
        VerifyReport r1 = verify_cover_coforgetful(c211, 1, BoxBound{6});
        c.require(r1.verdict == Verdict::Certified, "1/2(1,1) coforgetful not CERTIFIED");
        NCBlowup c312 = build_cover_ncb(3, ivec({1, 2}), 2);
        VerifyReport r2 = verify_cover_coforgetful(c312, 1, BoxBound{6});
        c.require(r2.verdict == Verdict::Certified, "1/3(1,2) coforgetful not CERTIFIED");
        c.finish();
    }

    {
        Criterion c(7, "conifold at p=2: multiple classes, Kunz singular");
        MonomialModule r = ring_of("square-cone");
        Decomposition dec = frobenius_pushforward(r, 2, 1);
        c.require(dec.multiplicity.size() > 1, "conifold pushforward has one class");
        c.require(!kunz_commutative_test(r, 2), "conifold reported Kunz regular");
        c.finish();
    }

    {
        Criterion c(8, "A_1 f-signature estimates monotone toward the grid-volume oracle");
        MonomialModule r = ring_of("cyclic-2-1-1");
        Rat oracle = oracles::grid_volume_free_fraction(r.cone(), 16);
        Rat prev_gap(-1);
        Rat last_est(0);
        for (int e = 1; e <= 3; ++e) {
            last_est = f_signature_estimate(r, 3, e);
            Rat gap = last_est - oracle;
            if (gap < 0) gap = -gap;
            if (prev_gap >= 0) c.require(gap <= prev_gap, "gap to oracle not monotone");
            prev_gap = gap;
        }
        c.require(prev_gap < Rat(1, 10), "final estimate not within 0.1 of the oracle");
        c.finish();
    }

    {
        Criterion c(9, "property suites: invariance, idempotence, rank, enumeration, closure, "
                       "determinism");
        std::mt19937 rng(2026);
        std::uniform_int_distribution<long> coin(-10, 10);
        for (const std::string& name : builtin_names()) {
            MonomialModule base = ring_of(name);
            ClassId id = base.canonical_class();
            for (int trial = 0; trial < 200; ++trial) {
                IVec z(base.cone()->dim);
                for (int i = 0; i < base.cone()->dim; ++i) z(i) = coin(rng);
                if (!(base.translated(z).canonical_class() == id)) {
                    c.require(false, name + " canonical_class not translation invariant");
                    break;
                }
            }
            const IMat& A = base.cone()->facets;
            for (int trial = 0; trial < 50; ++trial) {
                IVec b(A.rows());
                for (Eigen::Index i = 0; i < A.rows(); ++i) b(i) = coin(rng);
                IVec r1 = hnf_coset_reduce(b, A);
                c.require(hnf_coset_reduce(r1, A) == r1, "hnf_coset_reduce not idempotent");
            }
            for (long p : {2L, 3L}) {
                Decomposition dec = frobenius_pushforward(base, p, 1);
                c.require(dec.total_rank ==
                              pow_int(Int(p), static_cast<unsigned long>(base.cone()->dim)),
                          name + " rank not conserved");
            }
            for (int N = 0; N <= 4; ++N) {
                IVec lo = IVec::Zero(A.rows());
                IVec hi = IVec::Constant(A.rows(), N);
                c.require(enumerate_points(A, lo, hi) == oracles::cube_points(A, lo, hi, 20),
                          name + " enumeration differs from the cube filter");
            }
        }
        // End-algebra closure on every generator pair of the two certificate systems.
        for (const auto& [name, p] : std::vector<std::pair<std::string, long>>{
                 {"cyclic-2-1-1", 3}, {"cyclic-3-1-2", 2}}) {
            NCBlowup ncb = build_dblowup(builtin_spec(name).cone, p, 1);
            const EndAlgebra& alg = ncb.end_algebra;
            for (int i = 0; i < alg.size(); ++i) {
                for (int j = 0; j < alg.size(); ++j) {
                    for (int k = 0; k < alg.size(); ++k) {
                        for (const IVec& g : alg.cell_generators(i, j)) {
                            for (const IVec& h : alg.cell_generators(j, k)) {
                                c.require(alg.cell(i, k).mod.contains(IVec(g + h)),
                                          name + " closure violated");
                            }
                        }
                    }
                }
            }
        }
        // Byte-identical reports across two runs with different worker counts.
        int rc1 = 0, rc2 = 0;
        std::string out1 =
            run_cli("decompose --input builtin:cyclic-3-1-2 --p 2 --e 2 --threads 1", &rc1);
        std::string out2 =
            run_cli("decompose --input builtin:cyclic-3-1-2 --p 2 --e 2 --threads 4", &rc2);
        c.require(rc1 == 0 && rc2 == 0, "CLI decompose failed");
        c.require(out1 == out2, "reports differ across worker counts");
        int cert_rc = 0;
        run_cli("ncb-certify --input builtin:cyclic-2-1-1 --p 3 --e 1 --e0 1 --box 6", &cert_rc);
        c.require(cert_rc == 0, "exit-code contract: CERTIFIED run did not exit 0");
        int err_rc = 0;
        run_cli("ncb-certify --input builtin:A2 --p 3 --e 1 --e0 0", &err_rc);
        c.require(err_rc == 1, "exit-code contract: error did not exit 1");
        c.finish();
    }

    if (failures == 0) {
        std::cout << "ALL CRITERIA PASSED\n";
    } else {
        std::cout << failures << " CRITERIA FAILED\n";
    }
    return failures;
}
