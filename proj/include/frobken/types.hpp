// Exact scalar types and Eigen aliases used throughout the engine.
//
// All lattice arithmetic is done over GMP integers/rationals; Eigen supplies
// the dense containers and expression machinery.

#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
    using Real = mpz_class;
    using NonInteger = mpq_class;
    using Nested = mpz_class;
    using Literal = long;
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 1,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 30,
        MulCost = 50
    };
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
    using Real = mpq_class;
    using NonInteger = mpq_class;
    using Nested = mpq_class;
    using Literal = long;
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 0,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 60,
        MulCost = 100
    };
};

}  // namespace Eigen

namespace frobken {

using Int = mpz_class;
using Rat = mpq_class;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IMat = DenseMatrix<Int>;
using IVec = DenseVector<Int>;
using QMat = DenseMatrix<Rat>;
using QVec = DenseVector<Rat>;

/// Error with a stable machine-readable code (e.g. "NotPointed", "CapExceeded").
class EngineError : public std::runtime_error {
public:
    EngineError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int floor_rat(const Rat& r) { return floor_div(r.get_num(), r.get_den()); }
inline Int ceil_rat(const Rat& r) { return ceil_div(r.get_num(), r.get_den()); }

inline Int pow_int(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

/// Exact inner product, valid for mixed integer/rational operands.
template <typename S1, typename S2>
auto dot(const DenseVector<S1>& a, const DenseVector<S2>& b) {
    using R = std::conditional_t<std::is_same_v<S1, Rat> || std::is_same_v<S2, Rat>, Rat, Int>;
    R acc = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) acc += R(a(i)) * R(b(i));
    return acc;
}

/// Row-by-row pairing of an integer matrix against a rational vector.
inline QVec pair_rows(const IMat& A, const QVec& t) {
    QVec r(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        Rat acc = 0;
        for (Eigen::Index j = 0; j < A.cols(); ++j) acc += Rat(A(i, j)) * t(j);
        r(i) = acc;
    }
    return r;
}

inline IVec ceil_vec(const QVec& v) {
    IVec r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = ceil_rat(v(i));
    return r;
}

inline bool lex_less(const IVec& a, const IVec& b) {
    for (Eigen::Index i = 0; i < a.size() && i < b.size(); ++i) {
        if (a(i) != b(i)) return a(i) < b(i);
    }
    return a.size() < b.size();
}

struct IVecLexLess {
    bool operator()(const IVec& a, const IVec& b) const { return lex_less(a, b); }
};

/// Divides out the gcd of the entries, keeping the direction. The zero vector
/// is left unchanged.
IVec primitive(const IVec& v);

/// Content (gcd of entries), nonnegative.
Int content(const IVec& v);

inline IVec ivec(std::initializer_list<long> xs) {
    IVec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (long x : xs) v(i++) = x;
    return v;
}

inline QVec qvec(std::initializer_list<Rat> xs) {
    QVec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const Rat& x : xs) v(i++) = x;
    return v;
}

std::string to_string(const IVec& v);
std::string to_string(const QVec& v);

}  // namespace frobken
