#include "frobken/monomial_module.hpp"

#include <algorithm>

namespace frobken {

MonomialModule::MonomialModule(ConePtr cone, IVec bound, std::optional<QVec> shift)
    : cone_(std::move(cone)), bound_(std::move(bound)), shift_(std::move(shift)) {}

MonomialModule::MonomialModule(const MonomialModule& other)
    : cone_(other.cone_), bound_(other.bound_), shift_(other.shift_) {
    std::lock_guard<std::mutex> lock(other.mu_);
    lazy_ = other.lazy_;
}

MonomialModule& MonomialModule::operator=(const MonomialModule& other) {
    if (this == &other) return *this;
    std::shared_ptr<const Lazy> snapshot;
    {
        std::lock_guard<std::mutex> lock(other.mu_);
        snapshot = other.lazy_;
    }
    cone_ = other.cone_;
    bound_ = other.bound_;
    shift_ = other.shift_;
    std::lock_guard<std::mutex> lock(mu_);
    lazy_ = std::move(snapshot);
    return *this;
}

MonomialModule MonomialModule::from_bound(ConePtr cone, IVec bound) {
    if (bound.size() != cone->facets.rows()) {
        throw EngineError("ConeMismatch", "bound length does not match facet count");
    }
    return MonomialModule(std::move(cone), std::move(bound), std::nullopt);
}

MonomialModule MonomialModule::from_shift(const QVec& t, ConePtr cone) {
    IVec bound = ceil_vec(pair_rows(cone->facets, t));
    return MonomialModule(std::move(cone), std::move(bound), t);
}

bool MonomialModule::contains(const IVec& x) const {
    IVec h = cone_->facets * x;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        if (h(i) < bound_(i)) return false;
    }
    return true;
}

void MonomialModule::compute_lazy(const BoxBound& box) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (lazy_) return;
    }
    const IMat& A = cone_->facets;
    const Eigen::Index m = A.rows();
    std::shared_ptr<Lazy> result;

    // Fast path for simplicial facet matrices: if A x = b has an integral
    // solution, that point dominates every other module point, so it is the
    // unique minimal generator and the bound is already tight.
    if (m == A.cols()) {
        IVec num = adjugate(A) * bound_;
        Int det = determinant(A);
        bool integral = det != 0;
        for (Eigen::Index i = 0; integral && i < m; ++i) {
            if (num(i) % det != 0) integral = false;
        }
        if (integral) {
            IVec x(m);
            for (Eigen::Index i = 0; i < m; ++i) x(i) = num(i) / det;
            auto lazy = std::make_shared<Lazy>();
            lazy->generators = {std::move(x)};
            lazy->tight = bound_;
            std::lock_guard<std::mutex> lock(mu_);
            if (!lazy_) lazy_ = lazy;
            return;
        }
    }

    const int cap = std::max(32, box.size);
    int N = std::max(1, box.size);
    for (; N <= cap; N = (N == cap) ? cap + 1 : std::min(2 * N, cap)) {
        IVec hi(m);
        for (Eigen::Index i = 0; i < m; ++i) hi(i) = bound_(i) + N;
        std::vector<IVec> window = enumerate_points(A, bound_, hi);
        if (window.empty()) continue;

        std::vector<IVec> heights;
        heights.reserve(window.size());
        for (const IVec& x : window) heights.push_back(A * x);

        // x is a generator iff no other window point sits below it in the
        // semigroup order; witnesses never leave the window.
        std::vector<IVec> gens;
        std::vector<size_t> gen_idx;
        for (size_t i = 0; i < window.size(); ++i) {
            bool gen = true;
            for (size_t j = 0; j < window.size() && gen; ++j) {
                if (j == i) continue;
                bool below = true;
                for (Eigen::Index k = 0; k < m; ++k) {
                    if (heights[j](k) > heights[i](k)) { below = false; break; }
                }
                if (below) gen = false;
            }
            if (gen) {
                gens.push_back(window[i]);
                gen_idx.push_back(i);
            }
        }
        if (gens.empty()) continue;

        // Completeness certificate: no generator touches the outer shell, and
        // every shell point is reached from an interior generator.
        bool certified = true;
        auto on_shell = [&](const IVec& h) {
            for (Eigen::Index k = 0; k < m; ++k) {
                if (h(k) == bound_(k) + N) return true;
            }
            return false;
        };
        for (size_t gi : gen_idx) {
            if (on_shell(heights[gi])) { certified = false; break; }
        }
        if (certified) {
            for (size_t i = 0; i < window.size() && certified; ++i) {
                if (!on_shell(heights[i])) continue;
                bool covered = false;
                for (size_t gi : gen_idx) {
                    if (gi == i) continue;
                    bool below = true;
                    for (Eigen::Index k = 0; k < m; ++k) {
                        if (heights[gi](k) > heights[i](k)) { below = false; break; }
                    }
                    if (below) { covered = true; break; }
                }
                if (!covered) certified = false;
            }
        }
        if (!certified) continue;

        auto lazy = std::make_shared<Lazy>();
        lazy->generators = std::move(gens);
        std::sort(lazy->generators.begin(), lazy->generators.end(), lex_less);
        lazy->tight = IVec(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            Int best = dot<Int, Int>(IVec(A.row(k).transpose()), lazy->generators[0]);
            for (const IVec& g : lazy->generators) {
                Int h = dot<Int, Int>(IVec(A.row(k).transpose()), g);
                if (h < best) best = h;
            }
            lazy->tight(k) = best;
        }
        result = lazy;
        break;
    }
    if (!result) {
        throw EngineError("BoxExhausted",
                          "generator window cap reached for bound " + frobken::to_string(bound_) +
                              " on cone " + cone_->label);
    }
    std::lock_guard<std::mutex> lock(mu_);
    if (!lazy_) lazy_ = result;
}

const std::vector<IVec>& MonomialModule::minimal_generators(const BoxBound& box) const {
    compute_lazy(box);
    return lazy_->generators;
}

const IVec& MonomialModule::tight_bound(const BoxBound& box) const {
    compute_lazy(box);
    return lazy_->tight;
}

ClassId MonomialModule::canonical_class(const BoxBound& box) const {
    IVec residue = hnf_coset_reduce(tight_bound(box), cone_->facet_lattice);
    return ClassId{cone_->label, std::move(residue)};
}

MonomialModule MonomialModule::translated(const IVec& z) const {
    IVec nb = bound_ + cone_->facets * z;
    std::optional<QVec> ns;
    if (shift_) {
        QVec s = *shift_;
        for (Eigen::Index i = 0; i < s.size(); ++i) s(i) += Rat(z(i));
        ns = std::move(s);
    }
    return MonomialModule(cone_, std::move(nb), std::move(ns));
}

MonomialModule MonomialModule::canonical_representative(const BoxBound& box) const {
    const IVec& t = tight_bound(box);
    IVec residue = hnf_coset_reduce(t, cone_->facet_lattice);
    auto z = solve_in_column_lattice(cone_->facet_lattice, IVec(t - residue));
    if (!z) {
        throw EngineError("RankDeficient", "tight bound not congruent to its residue");
    }
    MonomialModule rep = translated(IVec(-*z));
    rep.bound_ = residue;  // same point set, canonical bound
    return rep;
}

std::vector<IVec> MonomialModule::window_points(const BoxBound& box) const {
    const IVec& t = tight_bound(box);
    IVec hi(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) hi(i) = t(i) + box.size;
    return enumerate_points(cone_->facets, t, hi);
}

void Decomposition::add(const ClassId& id, const MonomialModule& rep, const Int& count) {
    auto [it, inserted] = multiplicity.emplace(id, count);
    if (!inserted) it->second += count;
    representatives.emplace(id, rep);  // keep-first
    total_rank += count;
}

std::vector<ClassId> Decomposition::class_ids() const {
    std::vector<ClassId> ids;
    ids.reserve(multiplicity.size());
    for (const auto& [id, mult] : multiplicity) ids.push_back(id);
    return ids;
}

bool is_equivalent(const Decomposition& a, const Decomposition& b) {
    auto label = [](const Decomposition& d) -> const std::string& {
        static const std::string empty;
        return d.multiplicity.empty() ? empty : d.multiplicity.begin()->first.cone_label;
    };
    if (!a.multiplicity.empty() && !b.multiplicity.empty() && label(a) != label(b)) {
        throw EngineError("ConeMismatch", "decompositions live over different cones");
    }
    auto ids_a = a.class_ids();
    auto ids_b = b.class_ids();
    return ids_a == ids_b;
}

}  // namespace frobken
