#pragma once

#include <cstddef>

#include "chronoagg/snapshot.hpp"

namespace chronoagg {

/// Aggregation error estimate for one consecutive pair (A, B).
struct PairError {
    double epsilon_end = 0.0; ///< terminal discrepancy at the end of B
    double epsilon_mid = 0.0; ///< discrepancy at the switch point
    double xi = 0.0;          ///< (epsilon_end + epsilon_mid) * (dt_A + dt_B)
    std::size_t pair_index = 0;

    friend bool operator==(const PairError&, const PairError&) = default;
};

/// Products of transmission operators for every word over {A, B} up to
/// length three. A word is read left to right as a matrix product, so
/// `ba` is T(B) T(A): one step in A followed by one step in B.
///
/// Third-order words are formed as (two-letter word) * (letter), which is
/// the same evaluation order as the naive left-to-right triple product.
struct WordOperators {
    Matrix a, b;
    Matrix aa, bb, ab, ba;
    Matrix aab, aba, abb, baa, bab, bba;

    WordOperators(const Snapshot& first, const Snapshot& second)
        : a(transmission_operator(first)), b(transmission_operator(second))
    {
        aa.noalias() = a * a;
        bb.noalias() = b * b;
        ab.noalias() = a * b;
        ba.noalias() = b * a;
        aab.noalias() = aa * b;
        aba.noalias() = ab * a;
        abb.noalias() = ab * b;
        baa.noalias() = ba * a;
        bab.noalias() = ba * b;
        bba.noalias() = bb * a;
    }
};

/// Third-order BCH approximation of log(exp T(B) exp T(A)).
inline Matrix bch_third_order(const WordOperators& w)
{
    return w.b + w.a + 0.5 * (w.ba - w.ab) + (1.0 / 12.0) * (w.bba + w.abb + w.aab + w.baa) -
           (1.0 / 6.0) * (w.bab + w.aba);
}

inline Matrix bch_third_order(const Snapshot& a, const Snapshot& b)
{
    require_consecutive(a, b);
    return bch_third_order(WordOperators(a, b));
}

/// exp(C) - exp(T(A) + T(B)) truncated at third order. Positive terms are
/// paths that follow the chronology, negative ones paths that violate it.
inline Matrix difference_matrix_end(const WordOperators& w)
{
    return 0.5 * (w.ba - w.ab) + (1.0 / 3.0) * (w.bba + w.baa) -
           (1.0 / 6.0) * (w.bab + w.aba + w.abb + w.aab);
}

inline Matrix difference_matrix_end(const Snapshot& a, const Snapshot& b)
{
    require_consecutive(a, b);
    return difference_matrix_end(WordOperators(a, b));
}

/// Third-order difference between running A alone and running the pair
/// aggregate, both for the duration of A.
inline Matrix difference_matrix_mid(const Snapshot& a, const Snapshot& b)
{
    const Snapshot merged = aggregate(a, b);
    const double scale = a.beta() * a.duration();
    const Matrix x = scale * a.matrix();
    const Matrix y = scale * merged.matrix();
    const Matrix x2 = x * x;
    const Matrix y2 = y * y;
    return (x - y) + 0.5 * (x2 - y2) + (1.0 / 6.0) * (x2 * x - y2 * y);
}

namespace detail {

inline double absolute_spread(const Matrix& d, const ProbabilityVector& p0)
{
    if (p0.size() != d.cols())
        throw DataError("probability vector size does not match difference matrix");
    return (d.cwiseAbs() * p0).sum();
}

} // namespace detail

/// Sum over i of (|D| p0)_i for the terminal difference matrix.
inline double epsilon_end(const Snapshot& a, const Snapshot& b, const ProbabilityVector& p0)
{
    return detail::absolute_spread(difference_matrix_end(a, b), p0);
}

/// Sum over i of (|D| p0)_i for the midpoint difference matrix.
inline double epsilon_mid(const Snapshot& a, const Snapshot& b, const ProbabilityVector& p0)
{
    return detail::absolute_spread(difference_matrix_mid(a, b), p0);
}

/// Combined aggregation error of a consecutive pair, with p0 taken from the
/// degrees of the first snapshot.
inline PairError xi(const Snapshot& a, const Snapshot& b, std::size_t pair_index = 0)
{
    require_consecutive(a, b);
    const ProbabilityVector p0 = initial_condition(a);
    const WordOperators words(a, b);

    PairError out;
    out.pair_index = pair_index;
    out.epsilon_end = detail::absolute_spread(difference_matrix_end(words), p0);
    out.epsilon_mid = detail::absolute_spread(difference_matrix_mid(a, b), p0);
    out.xi = (out.epsilon_end + out.epsilon_mid) * (a.duration() + b.duration());
    return out;
}

} // namespace chronoagg
