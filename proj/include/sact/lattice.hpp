#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <vector>

#include "sact/error.hpp"

namespace sact {

struct LatticePoint {
    int k1 = 0;
    int k2 = 0;

    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
    LatticePoint operator-(const LatticePoint& o) const noexcept { return {k1 - o.k1, k2 - o.k2}; }
    LatticePoint operator-() const noexcept { return {-k1, -k2}; }
};

/// The lattice rectangle E = [lo1, hi1] x [lo2, hi2] of shifts that can touch
/// supp(f). Points are stored row-major: k1 outer, k2 inner.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(int lo1, int hi1, int lo2, int hi2) : lo1_(lo1), hi1_(hi1), lo2_(lo2), hi2_(hi2) {
        if (hi1 < lo1 || hi2 < lo2) return;
        points_.reserve(static_cast<std::size_t>(hi1 - lo1 + 1) * (hi2 - lo2 + 1));
        for (int a = lo1; a <= hi1; ++a)
            for (int b = lo2; b <= hi2; ++b) points_.push_back({a, b});
    }

    /// Arbitrary ordering of lattice points; bounds are their bounding box.
    static IndexSet from_points(std::vector<LatticePoint> pts) {
        if (pts.empty()) throw EmptyProblemError("index set is empty");
        IndexSet e;
        e.lo1_ = e.hi1_ = pts.front().k1;
        e.lo2_ = e.hi2_ = pts.front().k2;
        for (const auto& p : pts) {
            e.lo1_ = std::min(e.lo1_, p.k1);
            e.hi1_ = std::max(e.hi1_, p.k1);
            e.lo2_ = std::min(e.lo2_, p.k2);
            e.hi2_ = std::max(e.hi2_, p.k2);
        }
        e.points_ = std::move(pts);
        return e;
    }

    const std::vector<LatticePoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const LatticePoint& operator[](std::size_t i) const { return points_[i]; }

    int lo1() const noexcept { return lo1_; }
    int hi1() const noexcept { return hi1_; }
    int lo2() const noexcept { return lo2_; }
    int hi2() const noexcept { return hi2_; }

private:
    int lo1_ = 0, hi1_ = -1, lo2_ = 0, hi2_ = -1;
    std::vector<LatticePoint> points_;
};

/// One coefficient c_k per lattice point, in the index set's order.
struct CoefficientField {
    IndexSet index_set;
    std::vector<double> values;

    CoefficientField() = default;
    CoefficientField(IndexSet e, std::vector<double> v) : index_set(std::move(e)), values(std::move(v)) {
        if (values.size() != index_set.size())
            throw InvalidArgument("coefficient count does not match the index set");
    }

    std::size_t size() const noexcept { return values.size(); }
};

} // namespace sact
