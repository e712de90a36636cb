#include "frobken/lattice.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace frobken {

IVec primitive(const IVec& v) {
    Int g = content(v);
    if (g == 0) return v;
    IVec r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = v(i) / g;
    return r;
}

Int content(const IVec& v) {
    Int g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        Int a = abs(v(i));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    }
    return g;
}

std::string to_string(const IVec& v) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v(i);
    }
    os << ")";
    return os.str();
}

std::string to_string(const QVec& v) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v(i);
    }
    os << ")";
    return os.str();
}

Int determinant(const IMat& A) {
    const Eigen::Index n = A.rows();
    if (n != A.cols()) throw EngineError("RankDeficient", "determinant of non-square matrix");
    if (n == 0) return 1;
    IMat M = A;
    Int prev = 1;
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (M(k, k) == 0) {
            Eigen::Index piv = -1;
            for (Eigen::Index i = k + 1; i < n; ++i) {
                if (M(i, k) != 0) { piv = i; break; }
            }
            if (piv < 0) return 0;
            M.row(k).swap(M.row(piv));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            for (Eigen::Index j = k + 1; j < n; ++j) {
                M(i, j) = (M(k, k) * M(i, j) - M(i, k) * M(k, j)) / prev;
            }
            M(i, k) = 0;
        }
        prev = M(k, k);
    }
    return sign > 0 ? M(n - 1, n - 1) : Int(-M(n - 1, n - 1));
}

int rank(const IMat& A) {
    IMat M = A;
    const Eigen::Index rows = M.rows(), cols = M.cols();
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index piv = -1;
        for (Eigen::Index i = r; i < rows; ++i) {
            if (M(i, c) != 0) { piv = i; break; }
        }
        if (piv < 0) continue;
        M.row(r).swap(M.row(piv));
        for (Eigen::Index i = r + 1; i < rows; ++i) {
            if (M(i, c) == 0) continue;
            Int a = M(r, c), b = M(i, c);
            Int g;
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            Int fa = a / g, fb = b / g;
            M.row(i) = fa * M.row(i) - fb * M.row(r);
        }
        ++r;
    }
    return static_cast<int>(r);
}

IMat adjugate(const IMat& A) {
    const Eigen::Index n = A.rows();
    IMat adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    IMat minor(n - 1, n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Eigen::Index mi = 0;
            for (Eigen::Index r = 0; r < n; ++r) {
                if (r == i) continue;
                Eigen::Index mj = 0;
                for (Eigen::Index c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(mi, mj) = A(r, c);
                    ++mj;
                }
                ++mi;
            }
            Int m = determinant(minor);
            adj(j, i) = ((i + j) % 2 == 0) ? m : Int(-m);
        }
    }
    return adj;
}

namespace {

struct ColumnEchelon {
    IMat H;  // m x d, reduced
    IMat V;  // d x d unimodular with H = A * V
    std::vector<int> pivot_rows;     // per pivot column, in order
    std::vector<Eigen::Index> pivot_cols;
};

ColumnEchelon column_echelon(const IMat& A) {
    const Eigen::Index m = A.rows(), d = A.cols();
    ColumnEchelon ce;
    ce.H = A;
    ce.V = IMat::Identity(d, d);
    IMat& H = ce.H;
    IMat& V = ce.V;
    Eigen::Index c = 0;
    for (Eigen::Index r = 0; r < m && c < d; ++r) {
        // Euclidean column reduction in row r over columns >= c.
        while (true) {
            Eigen::Index best = -1;
            for (Eigen::Index j = c; j < d; ++j) {
                if (H(r, j) == 0) continue;
                if (best < 0 || abs(H(r, j)) < abs(H(r, best))) best = j;
            }
            if (best < 0) break;
            if (best != c) {
                H.col(c).swap(H.col(best));
                V.col(c).swap(V.col(best));
            }
            bool others = false;
            for (Eigen::Index j = c + 1; j < d; ++j) {
                if (H(r, j) == 0) continue;
                Int q = floor_div(H(r, j), H(r, c));
                H.col(j) -= q * H.col(c);
                V.col(j) -= q * V.col(c);
                if (H(r, j) != 0) others = true;
            }
            if (!others) break;
        }
        if (H(r, c) == 0) continue;
        if (H(r, c) < 0) {
            H.col(c) = -H.col(c);
            V.col(c) = -V.col(c);
        }
        // Reduce earlier pivot columns against the new pivot.
        for (Eigen::Index j = 0; j < c; ++j) {
            Int q = floor_div(H(r, j), H(r, c));
            H.col(j) -= q * H.col(c);
            V.col(j) -= q * V.col(c);
        }
        ce.pivot_rows.push_back(static_cast<int>(r));
        ce.pivot_cols.push_back(c);
        ++c;
    }
    return ce;
}

}  // namespace

HnfBasis hnf_basis(const IMat& A) {
    ColumnEchelon ce = column_echelon(A);
    const Eigen::Index r = static_cast<Eigen::Index>(ce.pivot_rows.size());
    HnfBasis basis;
    basis.H = ce.H.leftCols(r);
    basis.V = ce.V.leftCols(r);
    basis.pivot_rows = ce.pivot_rows;
    return basis;
}

IMat kernel_basis(const IMat& M) {
    ColumnEchelon ce = column_echelon(M);
    const Eigen::Index d = M.cols();
    const Eigen::Index r = static_cast<Eigen::Index>(ce.pivot_rows.size());
    return ce.V.rightCols(d - r);
}

IVec hnf_coset_reduce(const IVec& b, const HnfBasis& basis) {
    IVec r = b;
    for (Eigen::Index c = 0; c < basis.H.cols(); ++c) {
        const int p = basis.pivot_rows[static_cast<size_t>(c)];
        Int q = floor_div(r(p), basis.H(p, c));
        r -= q * basis.H.col(c);
    }
    return r;
}

IVec hnf_coset_reduce(const IVec& b, const IMat& A) {
    HnfBasis basis = hnf_basis(A);
    if (basis.H.cols() < A.cols()) {
        throw EngineError("RankDeficient", "matrix does not have full column rank");
    }
    return hnf_coset_reduce(b, basis);
}

std::optional<IVec> solve_in_column_lattice(const HnfBasis& basis, const IVec& w) {
    IVec res = w;
    IVec y(basis.H.cols());
    for (Eigen::Index c = 0; c < basis.H.cols(); ++c) {
        const int p = basis.pivot_rows[static_cast<size_t>(c)];
        if (res(p) % basis.H(p, c) != 0) return std::nullopt;
        y(c) = res(p) / basis.H(p, c);
        res -= y(c) * basis.H.col(c);
    }
    for (Eigen::Index i = 0; i < res.size(); ++i) {
        if (res(i) != 0) return std::nullopt;
    }
    return IVec(basis.V * y);
}

IVec cross_kernel(const IMat& rows) {
    const Eigen::Index d = rows.cols();
    IVec n(d);
    IMat minor(d - 1, d - 1);
    for (Eigen::Index i = 0; i < d; ++i) {
        Eigen::Index mj = 0;
        for (Eigen::Index c = 0; c < d; ++c) {
            if (c == i) continue;
            for (Eigen::Index r = 0; r + 1 < d; ++r) minor(r, mj) = rows(r, c);
            ++mj;
        }
        Int m = determinant(minor);
        n(i) = (i % 2 == 0) ? m : Int(-m);
    }
    return primitive(n);
}

namespace {

// All (k choose size) index subsets in lexicographic order.
void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k > n || k <= 0) return;
    std::vector<int> idx(static_cast<size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
}

// Supporting hyperplanes of a set of vectors: normals of hyperplanes spanned
// by (d-1)-subsets on whose nonnegative side all vectors lie.
std::vector<IVec> supporting_normals(const std::vector<IVec>& vecs, int d) {
    std::set<IVec, IVecLexLess> found;
    if (d == 1) {
        int sign = 0;
        for (const IVec& v : vecs) {
            int s = sgn(v(0));
            if (s == 0) continue;
            if (sign == 0) sign = s;
            if (s != sign) return {};
        }
        if (sign == 0) return {};
        found.insert(ivec({sign}));
    } else {
        const int n = static_cast<int>(vecs.size());
        for_each_subset(n, d - 1, [&](const std::vector<int>& idx) {
            IMat rows(d - 1, d);
            for (int r = 0; r < d - 1; ++r) rows.row(r) = vecs[static_cast<size_t>(idx[static_cast<size_t>(r)])].transpose();
            if (rank(rows) != d - 1) return;
            IVec nrm = cross_kernel(rows);
            bool pos = false, neg = false;
            for (const IVec& v : vecs) {
                Int s = dot<Int, Int>(nrm, v);
                if (s > 0) pos = true;
                if (s < 0) neg = true;
            }
            if (pos && neg) return;
            if (neg) nrm = -nrm;
            if (!pos && !neg) return;  // all vectors inside the hyperplane
            found.insert(nrm);
        });
    }
    return {found.begin(), found.end()};
}

IMat rows_to_matrix(const std::vector<IVec>& rows, int d) {
    IMat A(static_cast<Eigen::Index>(rows.size()), d);
    for (size_t i = 0; i < rows.size(); ++i) A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return A;
}

}  // namespace

IMat facet_normals(const std::vector<IVec>& rays) {
    if (rays.empty()) throw EngineError("NotFullDimensional", "no rays given");
    const int d = static_cast<int>(rays[0].size());
    for (const IVec& r : rays) {
        if (static_cast<int>(r.size()) != d) {
            throw EngineError("NotFullDimensional", "rays of mixed dimension");
        }
    }
    if (rank(rows_to_matrix(rays, d)) != d) {
        throw EngineError("NotFullDimensional", "rays do not span R^d");
    }
    std::vector<IVec> normals = supporting_normals(rays, d);
    IMat A = rows_to_matrix(normals, d);
    if (A.rows() == 0 || rank(A) != d) {
        throw EngineError("NotPointed", "cone contains a line");
    }
    return A;
}

std::vector<IVec> rays_from_inequalities(const IMat& A) {
    const int d = static_cast<int>(A.cols());
    std::vector<IVec> rows;
    rows.reserve(static_cast<size_t>(A.rows()));
    for (Eigen::Index i = 0; i < A.rows(); ++i) rows.push_back(IVec(A.row(i).transpose()));
    // Rays of {Ax >= 0} are the supporting-hyperplane normals of the row cone.
    std::vector<IVec> rays = supporting_normals(rows, d);
    std::vector<IVec> kept;
    for (const IVec& r : rays) {
        bool ok = true;
        for (const IVec& a : rows) {
            if (dot<Int, Int>(a, r) < 0) { ok = false; break; }
        }
        if (ok) kept.push_back(r);
    }
    if (kept.empty()) throw EngineError("NotFullDimensional", "inequality system has no rays");
    return kept;
}

std::shared_ptr<const ConeData> ConeData::from_rays(std::string label, std::vector<IVec> rays) {
    auto cone = std::make_shared<ConeData>();
    std::set<IVec, IVecLexLess> uniq;
    for (const IVec& r : rays) uniq.insert(primitive(r));
    cone->rays.assign(uniq.begin(), uniq.end());
    cone->dim = cone->rays.empty() ? 0 : static_cast<int>(cone->rays[0].size());
    cone->facets = facet_normals(cone->rays);
    cone->facet_lattice = hnf_basis(cone->facets);
    cone->label = std::move(label);
    return cone;
}

IVec ConeData::heights(const IVec& x) const { return facets * x; }

bool ConeData::contains(const IVec& x) const {
    IVec h = heights(x);
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        if (h(i) < 0) return false;
    }
    return true;
}

LatticePresentation LatticePresentation::standard(int dim) {
    LatticePresentation p;
    p.dim = dim;
    return p;
}

LatticePresentation LatticePresentation::from_basis(IMat basis) {
    LatticePresentation p;
    p.dim = static_cast<int>(basis.cols());
    p.basis = std::move(basis);
    return p;
}

LatticePresentation LatticePresentation::cyclic(Int modulus, IVec weights) {
    LatticePresentation p;
    p.dim = static_cast<int>(weights.size());
    p.congruence = Congruence{std::move(modulus), std::move(weights)};
    return p;
}

QVec NormalizedLattice::to_normalized(const QVec& t) const {
    QVec r(t.size());
    for (Eigen::Index i = 0; i < inverse.rows(); ++i) {
        Rat acc = 0;
        for (Eigen::Index j = 0; j < inverse.cols(); ++j) acc += inverse(i, j) * t(j);
        r(i) = acc;
    }
    return r;
}

NormalizedLattice normalize_lattice(const LatticePresentation& pres,
                                    const std::vector<IVec>& rays,
                                    const std::string& label) {
    const int d = pres.dim;
    IMat B;
    if (pres.congruence) {
        const auto& cg = *pres.congruence;
        if (cg.modulus <= 0) throw EngineError("InfiniteIndex", "congruence modulus must be positive");
        if (static_cast<int>(cg.weights.size()) != d) {
            throw EngineError("InfiniteIndex", "weight vector length does not match dimension");
        }
        // L = { v : <w, v> = 0 mod n } is the projection to the first d
        // coordinates of ker [w | -n].
        IMat M(1, d + 1);
        for (int j = 0; j < d; ++j) M(0, j) = cg.weights(j);
        M(0, d) = -cg.modulus;
        IMat K = kernel_basis(M);
        B = K.topRows(d);
    } else if (pres.basis) {
        B = *pres.basis;
        if (B.rows() != d || B.cols() != d) {
            throw EngineError("InfiniteIndex", "basis matrix must be square");
        }
    } else {
        B = IMat::Identity(d, d);
    }
    Int det = determinant(B);
    if (det == 0) throw EngineError("InfiniteIndex", "sublattice is not of finite index");
    // Canonical basis via column HNF, for deterministic coordinates.
    B = hnf_basis(B).H;
    det = determinant(B);
    IMat adj = adjugate(B);
    Int index = abs(det);

    NormalizedLattice out;
    out.basis = B;
    out.index = index;
    out.inverse = QMat(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            out.inverse(i, j) = Rat(adj(i, j), det);
            out.inverse(i, j).canonicalize();
        }
    }
    std::vector<IVec> new_rays;
    for (const IVec& r : rays) {
        IVec img = adj * r;  // det * B^{-1} r, integral positive multiple up to sign
        if (det < 0) img = -img;
        new_rays.push_back(primitive(img));
    }
    out.cone = ConeData::from_rays(label, new_rays);
    return out;
}

std::vector<IVec> enumerate_points(const IMat& A, const IVec& lo, const IVec& hi) {
    const Eigen::Index m = A.rows(), d = A.cols();
    for (Eigen::Index i = 0; i < m; ++i) {
        if (hi(i) < lo(i)) return {};
    }
    // Pick the lexicographically first row subset with nonzero determinant.
    std::vector<int> pick;
    IMat A0(d, d);
    bool found = false;
    for_each_subset(static_cast<int>(m), static_cast<int>(d), [&](const std::vector<int>& idx) {
        if (found) return;
        IMat cand(d, d);
        for (Eigen::Index r = 0; r < d; ++r) cand.row(r) = A.row(idx[static_cast<size_t>(r)]);
        if (determinant(cand) != 0) {
            found = true;
            pick = idx;
            A0 = cand;
        }
    });
    if (!found) throw EngineError("RankDeficient", "facet matrix does not have rank d");
    const Int det = determinant(A0);
    const IMat adj = adjugate(A0);

    Int volume = 1;
    for (int i : pick) volume *= hi(i) - lo(i) + 1;
    if (volume > Int(1) << 26) {
        throw EngineError("CapExceeded", "enumeration window too large: " + volume.get_str());
    }

    std::vector<IVec> out;
    IVec y(d);
    for (Eigen::Index r = 0; r < d; ++r) y(r) = lo(pick[static_cast<size_t>(r)]);
    while (true) {
        IVec num = adj * y;
        bool integral = true;
        for (Eigen::Index i = 0; i < d; ++i) {
            if (num(i) % det != 0) { integral = false; break; }
        }
        if (integral) {
            IVec x(d);
            for (Eigen::Index i = 0; i < d; ++i) x(i) = num(i) / det;
            IVec h = A * x;
            bool ok = true;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (h(i) < lo(i) || h(i) > hi(i)) { ok = false; break; }
            }
            if (ok) out.push_back(std::move(x));
        }
        // Odometer over the selected-row window.
        Eigen::Index r = d - 1;
        while (r >= 0) {
            ++y(r);
            if (y(r) <= hi(pick[static_cast<size_t>(r)])) break;
            y(r) = lo(pick[static_cast<size_t>(r)]);
            --r;
        }
        if (r < 0) break;
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

}  // namespace frobken
