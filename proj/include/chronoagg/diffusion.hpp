#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "chronoagg/snapshot.hpp"

namespace chronoagg {

/// Fixed-step RK4 settings. The step is step_fraction times the shortest
/// snapshot duration; each snapshot contributes sample_count - 1 new samples.
struct IntegratorConfig {
    double step_fraction = 0.02;
    int sample_count = 51;

    void validate() const
    {
        if (!(step_fraction > 0.0) || step_fraction > 0.1)
            throw InvalidArgument("step_fraction must lie in (0, 0.1]");
        if (sample_count < 2)
            throw InvalidArgument("sample_count must be at least 2");
    }
};

/// Sampled solution of the SI dynamics. totals[k] is the sum of states[k].
struct Trajectory {
    std::vector<double> times;
    std::vector<ProbabilityVector> states;
    std::vector<double> totals;
};

namespace detail {

inline void require_probability_vector(const ProbabilityVector& p, Eigen::Index n)
{
    if (p.size() != n)
        throw DataError("probability vector has length " + std::to_string(p.size()) + ", expected " +
                        std::to_string(n));
    if (!p.allFinite() || (p.array() < 0.0).any() || (p.array() > 1.0).any())
        throw DataError("probability vector entries must lie in [0, 1]");
}

} // namespace detail

/// Matrix exponential by scaling and squaring around a Taylor series. The
/// series runs until the next term no longer changes the sum in double
/// precision.
inline Matrix expm(const Matrix& a)
{
    if (a.rows() != a.cols())
        throw DataError("expm requires a square matrix");
    const Eigen::Index n = a.rows();
    if (n == 0)
        return Matrix(0, 0);

    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5)
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix scaled = a / std::ldexp(1.0, squarings);

    Matrix sum = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int k = 1; k <= 40; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() <= eps * 1e-2 * sum.cwiseAbs().maxCoeff())
            break;
    }
    for (int s = 0; s < squarings; ++s)
        sum = sum * sum;
    return sum;
}

/// exp(T(S)) p0: the linearized SI solution at the end of the snapshot.
inline ProbabilityVector propagate_linear(const Snapshot& s, const ProbabilityVector& p0)
{
    if (p0.size() != s.node_count())
        throw DataError("probability vector size does not match snapshot");
    return expm(transmission_operator(s)) * p0;
}

struct PairEndpoints {
    ProbabilityVector temporal;  ///< exp(T(B)) exp(T(A)) p0
    ProbabilityVector aggregate; ///< exp(T(A) + T(B)) p0
};

inline PairEndpoints pair_endpoints(const Snapshot& a, const Snapshot& b, const ProbabilityVector& p0)
{
    require_consecutive(a, b);
    if (p0.size() != a.node_count())
        throw DataError("probability vector size does not match snapshots");
    const Matrix ta = transmission_operator(a);
    const Matrix tb = transmission_operator(b);
    PairEndpoints out;
    out.temporal = expm(tb) * (expm(ta) * p0);
    out.aggregate = expm(ta + tb) * p0;
    return out;
}

/// Integrates dP/dt = (1 - P) o (beta A P) piecewise over the sequence with
/// classical RK4. Steps never straddle a snapshot boundary.
inline Trajectory integrate_si(const SnapshotSequence& seq, const ProbabilityVector& p0,
                               const IntegratorConfig& cfg = {})
{
    cfg.validate();
    detail::require_probability_vector(p0, seq.node_count());

    double min_duration = seq.front().duration();
    for (const auto& s : seq)
        min_duration = std::min(min_duration, s.duration());
    const double target_step = cfg.step_fraction * min_duration;
    const int segments = cfg.sample_count - 1;

    Trajectory out;
    const std::size_t expected = seq.size() * static_cast<std::size_t>(segments) + 1;
    out.times.reserve(expected);
    out.states.reserve(expected);
    out.totals.reserve(expected);

    ProbabilityVector p = p0;
    out.times.push_back(seq.start_time());
    out.states.push_back(p);
    out.totals.push_back(p.sum());

    const Eigen::Index n = seq.node_count();
    Vector k1(n), k2(n), k3(n), k4(n), tmp(n);
    constexpr double tolerance = 1e-9;

    for (const auto& s : seq) {
        const Matrix rate = s.beta() * s.matrix();
        auto rhs = [&rate](const Vector& x, Vector& dx) {
            dx.noalias() = rate * x;
            dx.array() *= (1.0 - x.array());
        };

        const double per_segment = s.duration() / static_cast<double>(segments);
        const int steps_per_segment =
            std::max(1, static_cast<int>(std::ceil(per_segment / target_step - 1e-9)));
        const double h = per_segment / static_cast<double>(steps_per_segment);

        for (int seg = 1; seg <= segments; ++seg) {
            for (int j = 0; j < steps_per_segment; ++j) {
                rhs(p, k1);
                tmp = p + (0.5 * h) * k1;
                rhs(tmp, k2);
                tmp = p + (0.5 * h) * k2;
                rhs(tmp, k3);
                tmp = p + h * k3;
                rhs(tmp, k4);
                p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            if ((p.array() < -tolerance).any() || (p.array() > 1.0 + tolerance).any() || !p.allFinite())
                throw RangeError("integration step too large: probabilities left [0, 1] near t = " +
                                 std::to_string(s.start_time() + seg * per_segment));
            out.times.push_back(s.start_time() + s.duration() * static_cast<double>(seg) / segments);
            out.states.push_back(p);
            out.totals.push_back(p.sum());
        }
    }
    return out;
}

} // namespace chronoagg
