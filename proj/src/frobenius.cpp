#include "frobken/frobenius.hpp"

#include <thread>

namespace frobken {

namespace {

Int residue_count(int dim, const Int& q) {
    return pow_int(q, static_cast<unsigned long>(dim));
}

void check_cap(const Int& total, const EnumLimits& limits) {
    if (!limits.force && total > limits.cap) {
        throw EngineError("CapExceeded",
                          "residue count " + total.get_str() + " exceeds cap " +
                              limits.cap.get_str() + " (use force to override)");
    }
}

IVec residue_from_index(unsigned long k, int dim, unsigned long q) {
    IVec u(dim);
    for (int i = dim - 1; i >= 0; --i) {
        u(i) = static_cast<long>(k % q);
        k /= q;
    }
    return u;
}

}  // namespace

MonomialModule frobenius_summand(const MonomialModule& m, const Int& q, const IVec& u) {
    if (!m.origin_shift()) {
        throw EngineError("MissingShift", "module is not presented as Con(t)");
    }
    const QVec& t = *m.origin_shift();
    QVec s(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        s(i) = (t(i) - Rat(u(i))) / Rat(q);
        s(i).canonicalize();
    }
    return MonomialModule::from_shift(s, m.cone());
}

Decomposition frobenius_pushforward(const MonomialModule& m, long p, int e,
                                    const EnumLimits& limits) {
    if (!m.origin_shift()) {
        throw EngineError("MissingShift", "module is not presented as Con(t)");
    }
    const int dim = m.cone()->dim;
    const Int q = pow_int(Int(p), static_cast<unsigned long>(e));
    const Int total = residue_count(dim, q);
    check_cap(total, limits);
    const unsigned long n = total.get_ui();
    const unsigned long qq = q.get_ui();

    Decomposition out;
    out.p = p;
    out.e = e;
    out.total_rank = 0;
    out.source = m.cone()->label;

    auto run_range = [&](unsigned long k0, unsigned long k1, Decomposition& acc) {
        for (unsigned long k = k0; k < k1; ++k) {
            IVec u = residue_from_index(k, dim, qq);
            MonomialModule summand = frobenius_summand(m, q, u);
            ClassId id = summand.canonical_class();
            acc.add(id, summand.canonical_representative());
        }
    };

    const int threads = std::max(1, limits.threads);
    if (threads == 1 || n < 64) {
        run_range(0, n, out);
    } else {
        const unsigned long chunk = (n + threads - 1) / static_cast<unsigned long>(threads);
        std::vector<Decomposition> parts(static_cast<size_t>(threads));
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            unsigned long k0 = std::min(n, chunk * static_cast<unsigned long>(t));
            unsigned long k1 = std::min(n, k0 + chunk);
            pool.emplace_back(run_range, k0, k1, std::ref(parts[static_cast<size_t>(t)]));
        }
        for (auto& th : pool) th.join();
        // Merge in chunk order so representatives come from the
        // lexicographically first residue, independent of thread count.
        for (const auto& part : parts) {
            for (const auto& [id, mult] : part.multiplicity) {
                out.add(id, part.representatives.at(id), mult);
            }
        }
    }
    return out;
}

Decomposition pushforward_of_decomposition(const Decomposition& d, long p, int e,
                                           const EnumLimits& limits) {
    Decomposition out;
    out.p = p;
    out.e = e;
    out.source = d.source;
    for (const auto& [id, mult] : d.multiplicity) {
        Decomposition part = frobenius_pushforward(d.representatives.at(id), p, e, limits);
        for (const auto& [pid, pmult] : part.multiplicity) {
            out.add(pid, part.representatives.at(pid), Int(pmult * mult));
        }
    }
    return out;
}

FPureResult f_pure_check(const MonomialModule& ring, long p, const EnumLimits& limits) {
    if (!ring.origin_shift()) {
        throw EngineError("MissingShift", "ring module must be Con(0)");
    }
    const int dim = ring.cone()->dim;
    const Int q(p);
    check_cap(residue_count(dim, q), limits);
    const ClassId free_class = ring.canonical_class();
    const unsigned long n = residue_count(dim, q).get_ui();
    FPureResult res;
    for (unsigned long k = 0; k < n; ++k) {
        IVec u = residue_from_index(k, dim, static_cast<unsigned long>(p));
        MonomialModule summand = frobenius_summand(ring, q, u);
        if (summand.canonical_class() == free_class) {
            res.f_pure = true;
            res.witness_residue = u;
            break;
        }
    }
    return res;
}

FfrtScan ffrt_scan(const MonomialModule& ring, long p, int e_max, const EnumLimits& limits) {
    if (e_max < 2) throw EngineError("ValidationError", "ffrt scan needs e_max >= 2");
    FfrtScan scan;
    for (int e = 1; e <= e_max; ++e) {
        scan.per_e.push_back(frobenius_pushforward(ring, p, e, limits));
    }
    std::vector<std::vector<ClassId>> sets;
    for (const auto& d : scan.per_e) sets.push_back(d.class_ids());
    int e0 = e_max;
    while (e0 > 1 && sets[static_cast<size_t>(e0 - 2)] == sets[static_cast<size_t>(e_max - 1)]) --e0;
    if (e0 < e_max) scan.stabilized_from = e0;
    return scan;
}

SteadyCheck f_steady_check(const Decomposition& m, long p, int e_max, const EnumLimits& limits) {
    SteadyCheck res;
    res.class_sets.push_back(m.class_ids());
    for (int e = 1; e <= e_max; ++e) {
        Decomposition pushed = pushforward_of_decomposition(m, p, e, limits);
        res.class_sets.push_back(pushed.class_ids());
        if (res.steady && !is_equivalent(m, pushed)) {
            res.steady = false;
            res.first_failing_e = e;
        }
    }
    return res;
}

Rat f_signature_estimate(const MonomialModule& ring, long p, int e, const EnumLimits& limits) {
    Decomposition d = frobenius_pushforward(ring, p, e, limits);
    const ClassId free_class = ring.canonical_class();
    Int free_mult = 0;
    auto it = d.multiplicity.find(free_class);
    if (it != d.multiplicity.end()) free_mult = it->second;
    Rat s(free_mult, d.total_rank);
    s.canonicalize();
    return s;
}

bool kunz_commutative_test(const MonomialModule& ring, long p, const EnumLimits& limits) {
    Decomposition d = frobenius_pushforward(ring, p, 1, limits);
    return d.multiplicity.size() == 1 &&
           d.multiplicity.begin()->first == ring.canonical_class();
}

bool pushforward_composition_check(const MonomialModule& m, long p, int e, int e2,
                                   const EnumLimits& limits) {
    Decomposition direct = frobenius_pushforward(m, p, e + e2, limits);
    Decomposition level_e = frobenius_pushforward(m, p, e, limits);
    Decomposition composed = pushforward_of_decomposition(level_e, p, e2, limits);
    if (direct.multiplicity.size() != composed.multiplicity.size()) return false;
    for (const auto& [id, mult] : direct.multiplicity) {
        auto it = composed.multiplicity.find(id);
        if (it == composed.multiplicity.end() || it->second != mult) return false;
    }
    return true;
}

}  // namespace frobken
