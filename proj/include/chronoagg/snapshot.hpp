#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "chronoagg/error.hpp"

namespace chronoagg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Per-node infection probabilities P(t). Entries lie in [0, 1].
using ProbabilityVector = Eigen::VectorXd;

namespace detail {

inline bool nearly_equal_times(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace detail

/// A static contact network valid over [start_time, start_time + duration)
/// with transmission rate beta.
///
/// The matrix must be square, symmetric and non-negative. Diagonal entries
/// are self-contacts; they are zeroed on construction and counted.
class Snapshot {
public:
    Snapshot(Matrix matrix, double start_time, double duration, double beta)
        : matrix_(std::move(matrix)), start_time_(start_time), duration_(duration), beta_(beta)
    {
        if (matrix_.rows() != matrix_.cols())
            throw DataError("snapshot matrix must be square, got " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()));
        if (!(duration_ > 0.0) || !std::isfinite(duration_))
            throw DataError("snapshot duration must be positive");
        if (!(beta_ > 0.0) || !std::isfinite(beta_))
            throw DataError("snapshot beta must be positive");
        if (!std::isfinite(start_time_))
            throw DataError("snapshot start time must be finite");
        if (!matrix_.allFinite())
            throw DataError("snapshot matrix has non-finite entries");
        if ((matrix_.array() < 0.0).any())
            throw DataError("snapshot matrix has negative entries");

        const double scale = matrix_.size() == 0 ? 0.0 : matrix_.cwiseAbs().maxCoeff();
        if (matrix_.size() > 0 &&
            (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
            throw DataError("snapshot matrix must be symmetric");

        for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
            if (matrix_(i, i) != 0.0) {
                matrix_(i, i) = 0.0;
                ++self_contacts_dropped_;
            }
        }
    }

    const Matrix& matrix() const { return matrix_; }
    double start_time() const { return start_time_; }
    double duration() const { return duration_; }
    double end_time() const { return start_time_ + duration_; }
    double beta() const { return beta_; }
    Eigen::Index node_count() const { return matrix_.rows(); }
    std::size_t self_contacts_dropped() const { return self_contacts_dropped_; }

    /// Same matrix and beta over a different time interval.
    Snapshot retimed(double start_time, double duration) const
    {
        return Snapshot(matrix_, start_time, duration, beta_);
    }

private:
    Matrix matrix_;
    double start_time_;
    double duration_;
    double beta_;
    std::size_t self_contacts_dropped_ = 0;
};

inline void require_compatible(const Snapshot& x, const Snapshot& y)
{
    if (x.node_count() != y.node_count())
        throw DataError("snapshot dimension mismatch: " + std::to_string(x.node_count()) + " vs " +
                        std::to_string(y.node_count()));
    if (x.beta() != y.beta())
        throw DataError("snapshots have differing beta");
}

/// Throws unless y starts where x ends (1e-9 relative), with matching size and beta.
inline void require_consecutive(const Snapshot& x, const Snapshot& y)
{
    require_compatible(x, y);
    if (!detail::nearly_equal_times(x.end_time(), y.start_time()))
        throw DataError("snapshots are not consecutive: " + std::to_string(x.end_time()) +
                        " != " + std::to_string(y.start_time()));
}

/// An ordered run of consecutive snapshots on a shared node universe.
class SnapshotSequence {
public:
    explicit SnapshotSequence(std::vector<Snapshot> snapshots, std::vector<std::string> node_labels = {})
        : snapshots_(std::move(snapshots)), labels_(std::move(node_labels))
    {
        if (snapshots_.empty())
            throw DataError("snapshot sequence is empty");
        for (std::size_t k = 0; k + 1 < snapshots_.size(); ++k)
            require_consecutive(snapshots_[k], snapshots_[k + 1]);

        const auto n = static_cast<std::size_t>(node_count());
        if (labels_.empty()) {
            labels_.reserve(n);
            for (std::size_t i = 0; i < n; ++i)
                labels_.push_back(std::to_string(i));
        } else if (labels_.size() != n) {
            throw DataError("node label count " + std::to_string(labels_.size()) + " does not match node count " +
                            std::to_string(n));
        }
    }

    std::size_t size() const { return snapshots_.size(); }
    const Snapshot& operator[](std::size_t k) const { return snapshots_[k]; }
    const Snapshot& front() const { return snapshots_.front(); }
    const Snapshot& back() const { return snapshots_.back(); }
    auto begin() const { return snapshots_.begin(); }
    auto end() const { return snapshots_.end(); }
    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    const std::vector<std::string>& node_labels() const { return labels_; }

    Eigen::Index node_count() const { return snapshots_.front().node_count(); }
    double beta() const { return snapshots_.front().beta(); }
    double start_time() const { return snapshots_.front().start_time(); }
    double end_time() const { return snapshots_.back().end_time(); }

    double total_duration() const
    {
        double total = 0.0;
        for (const auto& s : snapshots_)
            total += s.duration();
        return total;
    }

    std::vector<double> start_times() const
    {
        std::vector<double> out;
        out.reserve(snapshots_.size());
        for (const auto& s : snapshots_)
            out.push_back(s.start_time());
        return out;
    }

private:
    std::vector<Snapshot> snapshots_;
    std::vector<std::string> labels_;
};

/// Duration-weighted mean of two consecutive snapshots.
inline Snapshot aggregate(const Snapshot& x, const Snapshot& y)
{
    require_consecutive(x, y);
    const double total = x.duration() + y.duration();
    Matrix merged = (x.duration() * x.matrix() + y.duration() * y.matrix()) / total;
    return Snapshot(std::move(merged), x.start_time(), total, x.beta());
}

/// Left fold of aggregate over snapshots [first, last).
inline Snapshot aggregate_range(const SnapshotSequence& seq, std::size_t first, std::size_t last)
{
    if (first >= last || last > seq.size())
        throw InvalidArgument("invalid aggregation range");
    Snapshot acc = seq[first];
    for (std::size_t k = first + 1; k < last; ++k)
        acc = aggregate(acc, seq[k]);
    return acc;
}

/// beta * duration * matrix.
inline Matrix transmission_operator(const Snapshot& s)
{
    return (s.beta() * s.duration()) * s.matrix();
}

/// Largest per-entry spreading scale beta * duration * weight of a snapshot.
inline double transmission_scale(const Snapshot& s)
{
    if (s.node_count() == 0)
        return 0.0;
    return s.beta() * s.duration() * s.matrix().maxCoeff();
}

/// Degree-proportional initial condition normalized to sum 1. Weighted row
/// sums are used as degrees; a snapshot with no contacts yields 1/N.
inline ProbabilityVector initial_condition(const Snapshot& s)
{
    const Eigen::Index n = s.node_count();
    if (n == 0)
        throw DataError("initial condition requires at least one node");
    Vector degree = s.matrix().rowwise().sum();
    const double total = degree.sum();
    if (total <= 0.0)
        return Vector::Constant(n, 1.0 / static_cast<double>(n));
    return degree / total;
}

struct TauRange {
    double min = 0.0; ///< smallest nonzero beta * duration * weight
    double max = 0.0; ///< largest beta * duration * weight
};

inline TauRange tau_range(const SnapshotSequence& seq)
{
    TauRange out;
    bool any = false;
    for (const auto& s : seq) {
        const double scale = s.beta() * s.duration();
        for (Eigen::Index j = 0; j < s.node_count(); ++j) {
            for (Eigen::Index i = 0; i < s.node_count(); ++i) {
                const double w = s.matrix()(i, j);
                if (w <= 0.0)
                    continue;
                const double tau = scale * w;
                if (!any) {
                    out.min = out.max = tau;
                    any = true;
                } else {
                    out.min = std::min(out.min, tau);
                    out.max = std::max(out.max, tau);
                }
            }
        }
    }
    return out;
}

/// Splits every snapshot at the given interior times. Each piece keeps the
/// matrix of the snapshot it came from, so dynamics are unchanged.
inline SnapshotSequence split_at(const SnapshotSequence& seq, std::vector<double> cuts)
{
    std::sort(cuts.begin(), cuts.end());
    std::vector<Snapshot> out;
    out.reserve(seq.size() + cuts.size());
    auto cut = cuts.begin();
    for (const auto& s : seq) {
        double left = s.start_time();
        const double right = s.end_time();
        while (cut != cuts.end() && *cut <= left + 1e-9 * std::max(1.0, std::abs(left)))
            ++cut;
        while (cut != cuts.end() && *cut < right - 1e-9 * std::max(1.0, std::abs(right))) {
            out.push_back(s.retimed(left, *cut - left));
            left = *cut;
            ++cut;
        }
        out.push_back(s.retimed(left, right - left));
    }
    return SnapshotSequence(std::move(out), seq.node_labels());
}

} // namespace chronoagg
