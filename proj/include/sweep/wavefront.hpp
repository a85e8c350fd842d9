#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "sweep/geometry.hpp"

namespace sweep {

/// Interior contamination has never been occupied beyond the current interior
/// bound (the sensor midpoint radius of the running cycle); everything that
/// has, and all its descendants, is exterior.
enum class Lineage : std::uint8_t { interior = 0, exterior = 1 };

/// Area cleared by the sensor over one time step: either an annular sector
/// (rotation about the origin) or the quadrilateral spanned by two segments.
struct SweptRegion {
    bool sector = false;
    double inner = 0.0;
    double outer = 0.0;
    Vec2 u0;  // direction at the start of the step
    Vec2 u1;  // direction at the end of the step
    Segment from;
    Segment to;

    /// Counter-clockwise sector from angle0 to angle1; the span must be below pi.
    static SweptRegion annular(double inner, double outer, double angle0, double angle1) {
        SweptRegion s;
        s.sector = true;
        s.inner = inner;
        s.outer = outer;
        s.u0 = unit_at(angle0);
        s.u1 = unit_at(angle1);
        return s;
    }

    static SweptRegion quad(const Segment& from, const Segment& to) {
        SweptRegion s;
        s.from = from;
        s.to = to;
        return s;
    }

    double quad_area2() const {
        const Vec2 p[4] = {from.a, from.b, to.b, to.a};
        double a = 0.0;
        for (int k = 0; k < 4; ++k) a += cross(p[k], p[(k + 1) % 4]);
        return a;
    }

    bool contains(Vec2 c) const {
        if (sector) {
            const double rr = dot(c, c);
            if (rr < inner * inner || rr > outer * outer) return false;
            return cross(u0, c) >= 0.0 && cross(c, u1) >= 0.0 && dot(c, u0 + u1) >= 0.0;
        }
        const Vec2 p[4] = {from.a, from.b, to.b, to.a};
        const double s = quad_area2() > 0.0 ? 1.0 : -1.0;
        for (int k = 0; k < 4; ++k) {
            if (s * orient(p[k], p[(k + 1) % 4], c) < 0.0) return false;
        }
        return true;
    }

    /// False for a segment sliding along its own axis: that sweeps no area.
    bool has_area(double h) const {
        if (sector) return outer > inner && cross(u0, u1) > 0.0;
        return std::abs(quad_area2()) > 1e-12 * h * h;
    }

    void bounds(Vec2& lo, Vec2& hi, double pad) const {
        Vec2 pts[4];
        if (sector) {
            pts[0] = inner * u0;
            pts[1] = outer * u0;
            pts[2] = inner * u1;
            pts[3] = outer * u1;
        } else {
            pts[0] = from.a;
            pts[1] = from.b;
            pts[2] = to.a;
            pts[3] = to.b;
        }
        lo = hi = pts[0];
        for (const Vec2& q : pts) {
            lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
            hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
        }
        lo = lo - Vec2{pad, pad};
        hi = hi + Vec2{pad, pad};
    }
};

/// Occupancy grid with continuous-time wavefront growth.
///
/// Each occupied cell carries a seed (point, time) from which its
/// contamination spread at speed VT; a free cell becomes occupied when the
/// earliest seed offered by an occupied neighbour reaches its centre. Seeds are
/// passed on unchanged, so growth follows true Euclidean distance with no
/// accumulated metrication error. Links that cross the sensor are refused, and
/// a cleaned cell only accepts seeds that reach it after it was cleaned.
class Wavefront {
public:
    static constexpr double kNever = std::numeric_limits<double>::infinity();

    Wavefront(double extent, double h, double VT)
        : h_(h), VT_(VT), n_(static_cast<int>(std::ceil(2.0 * extent / h))),
          extent_(0.5 * n_ * h) {
        const size_t cells = static_cast<size_t>(n_) * static_cast<size_t>(n_);
        occ_.assign(cells, 0);
        lineage_.assign(cells, 0);
        seeded_.assign(cells, 0);
        pending_.assign(cells, 0);
        epoch_.assign(cells, 0);
        t_clean_.assign(cells, -kNever);
        occ_time_.assign(cells, 0.0);
        seed_.assign(cells, Vec2{});
        seed_t_.assign(cells, 0.0);
    }

    int size() const { return n_; }
    double resolution() const { return h_; }
    double extent() const { return extent_; }
    long occupied_count() const { return count_; }
    double now() const { return now_; }

    Vec2 center(int i, int j) const { return {-extent_ + (i + 0.5) * h_, -extent_ + (j + 0.5) * h_}; }
    Vec2 center(int idx) const { return center(idx % n_, idx / n_); }
    bool occupied(int i, int j) const { return occ_[index(i, j)] != 0; }
    bool occupied_at(int idx) const { return occ_[static_cast<size_t>(idx)] != 0; }
    Lineage lineage_at(int idx) const { return static_cast<Lineage>(lineage_[static_cast<size_t>(idx)]); }
    int index(int i, int j) const { return j * n_ + i; }

    /// Cells occupied beyond radius b from now on are labelled exterior.
    void set_interior_bound(double b) { interior_bound_ = b; }

    /// Occupies every cell whose square meets the closed disk of radius R
    /// (outward rounding) and queues the first ring of outward growth.
    void seed_disk(double R, const Segment& sensor) {
        disk_radius_ = R;
        const double half = 0.5 * h_;
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < n_; ++i) {
                const Vec2 c = center(i, j);
                const double dx = std::max(std::abs(c.x) - half, 0.0);
                const double dy = std::max(std::abs(c.y) - half, 0.0);
                if (dx * dx + dy * dy <= R * R) {
                    const size_t k = static_cast<size_t>(index(i, j));
                    occ_[k] = 1;
                    lineage_[k] = label(Lineage::interior, c);
                    ++count_;
                }
            }
        }
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i)
                if (!occupied(i, j)) refresh(index(i, j), sensor);
    }

    /// Grows the occupied set up to time t. `sensor` is the sensor segment at t;
    /// growth may not cross it. `on_occupy(idx)` is called for each new cell.
    template <class F>
    void grow_until(double t, const Segment& sensor, F&& on_occupy) {
        now_ = t;
        while (!heap_.empty() && heap_.top().arrival <= t) {
            const Candidate c = heap_.top();
            heap_.pop();
            const size_t x = static_cast<size_t>(c.cell);
            if (epoch_[x] != c.cell_epoch) continue;  // cell cleaned since the offer
            --pending_[x];
            if (occ_[x]) continue;
            const bool valid = occ_[static_cast<size_t>(c.src)] &&
                               epoch_[static_cast<size_t>(c.src)] == c.src_epoch &&
                               !segments_intersect({center(c.src), center(c.cell)}, sensor);
            if (!valid) {
                if (pending_[x] == 0) refresh(c.cell, sensor);
                continue;
            }
            occ_[x] = 1;
            ++count_;
            seeded_[x] = 1;
            seed_[x] = c.seed;
            seed_t_[x] = c.seed_t;
            lineage_[x] = label(static_cast<Lineage>(c.lineage), center(c.cell));
            occ_time_[x] = std::max(c.arrival, t_clean_[x]);
            on_occupy(c.cell);
            offer_to_neighbours(c.cell, sensor);
        }
    }

    void grow_until(double t, const Segment& sensor) {
        grow_until(t, sensor, [](int) {});
    }

    /// Clears every cell whose centre lies in `region` (closed test, so no
    /// partially covered cell is cleared unless its centre is swept) at time t,
    /// then lets occupied cells outside the region re-enter through its boundary.
    void clean(const SweptRegion& region, double t, const Segment& sensor) {
        now_ = t;
        if (!region.has_area(h_)) return;
        Vec2 lo, hi;
        region.bounds(lo, hi, h_);
        const int i0 = std::max(0, static_cast<int>(std::ceil((lo.x + extent_) / h_ - 0.5)));
        const int i1 = std::min(n_ - 1, static_cast<int>(std::floor((hi.x + extent_) / h_ - 0.5)));
        const int j0 = std::max(0, static_cast<int>(std::ceil((lo.y + extent_) / h_ - 0.5)));
        const int j1 = std::min(n_ - 1, static_cast<int>(std::floor((hi.y + extent_) / h_ - 0.5)));
        cleaned_.clear();
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                if (!region.contains(center(i, j))) continue;
                const size_t k = static_cast<size_t>(index(i, j));
                if (occ_[k]) {
                    occ_[k] = 0;
                    --count_;
                }
                ++epoch_[k];
                pending_[k] = 0;
                t_clean_[k] = t;
                seeded_[k] = 0;
                cleaned_.push_back(index(i, j));
            }
        }
        for (int x : cleaned_) reenter(x, region, t, sensor);
    }

    /// Number of queued growth candidates (diagnostics).
    size_t queued() const { return heap_.size(); }

    /// Outer reach of the contamination held by cell idx at time t: the seed
    /// disk's far edge, capped one cell beyond the centre.
    double reach(int idx, double t) const {
        const size_t k = static_cast<size_t>(idx);
        const double rc = norm(center(idx));
        if (!seeded_[k]) return rc;
        const double rs = norm(seed_[k]) + VT_ * (t - seed_t_[k]);
        return std::min(rs, rc + h_);
    }

private:
    struct Candidate {
        double arrival;
        int cell;
        int src;
        std::uint32_t cell_epoch;
        std::uint32_t src_epoch;
        Vec2 seed;
        double seed_t;
        std::uint8_t lineage;
    };

    struct Later {
        bool operator()(const Candidate& a, const Candidate& b) const {
            if (a.arrival != b.arrival) return a.arrival > b.arrival;
            if (a.cell != b.cell) return a.cell > b.cell;
            return a.src > b.src;
        }
    };

    template <class F>
    void for_neighbours(int idx, F&& f) const {
        const int i = idx % n_;
        const int j = idx / n_;
        for (int dj = -1; dj <= 1; ++dj) {
            const int jj = j + dj;
            if (jj < 0 || jj >= n_) continue;
            for (int di = -1; di <= 1; ++di) {
                const int ii = i + di;
                if ((di == 0 && dj == 0) || ii < 0 || ii >= n_) continue;
                f(index(ii, jj));
            }
        }
    }

    /// Earliest time the contamination held by z can be at point q: z's seed
    /// disk, or the initial disk for cells never reseeded.
    double earliest(int z, Vec2 q) const {
        const size_t zk = static_cast<size_t>(z);
        if (seeded_[zk]) return seed_t_[zk] + norm(q - seed_[zk]) / VT_;
        return std::max(norm(q) - disk_radius_, 0.0) / VT_;
    }

    std::uint8_t label(Lineage inherited, Vec2 c) const {
        const bool ext = inherited == Lineage::exterior || dot(c, c) > interior_bound_ * interior_bound_;
        return static_cast<std::uint8_t>(ext ? Lineage::exterior : Lineage::interior);
    }

    void push(int x, int z, double arrival, Vec2 seed, double seed_t, std::uint8_t lin) {
        const size_t xk = static_cast<size_t>(x);
        heap_.push({arrival, x, z, epoch_[xk], epoch_[static_cast<size_t>(z)], seed, seed_t, lin});
        ++pending_[xk];
    }

    /// Candidate for free cell x offered by occupied neighbour z.
    void offer(int z, int x) {
        const size_t zk = static_cast<size_t>(z);
        const size_t xk = static_cast<size_t>(x);
        const Vec2 cx = center(x);
        const Vec2 cz = center(z);
        const double cleaned_at = t_clean_[xk];
        const double d = norm(cx - cz);
        const double off = std::min(d, h_ / std::sqrt(2.0));
        // Earliest time contamination held in z's cell can reach x.
        const double via_z = occ_time_[zk] + (d - off) / VT_;
        if (seeded_[zk]) {
            const double a = seed_t_[zk] + norm(cx - seed_[zk]) / VT_;
            if (a >= cleaned_at && a >= via_z) {
                push(x, z, a, seed_[zk], seed_t_[zk], lineage_[zk]);
                return;
            }
        } else if (cleaned_at == -kNever) {
            // Never-cleaned cell next to the initial disk: exact disk growth.
            const double rx = norm(cx);
            const double a = std::max(rx - disk_radius_, 0.0) / VT_;
            const Vec2 foot = rx > 0.0 ? (std::min(disk_radius_, rx) / rx) * cx : cx;
            push(x, z, a, foot, 0.0, lineage_[zk]);
            return;
        }
        // The seed cannot explain the arrival. Restart from the boundary of
        // z's cell, no earlier than the cleaning, z's own occupation or now.
        const Vec2 q = cz + (off / d) * (cx - cz);
        const double t0 = std::max({cleaned_at, occ_time_[zk], now_, earliest(z, q)});
        push(x, z, t0 + (d - off) / VT_, q, t0, lineage_[zk]);
    }

    void offer_to_neighbours(int z, const Segment& sensor) {
        const Vec2 cz = center(z);
        for_neighbours(z, [&](int x) {
            if (occ_[static_cast<size_t>(x)]) return;
            if (segments_intersect({cz, center(x)}, sensor)) return;
            offer(z, x);
        });
    }

    /// Re-derives the candidates of free cell x from all occupied neighbours.
    void refresh(int x, const Segment& sensor) {
        const Vec2 cx = center(x);
        for_neighbours(x, [&](int z) {
            if (!occ_[static_cast<size_t>(z)]) return;
            if (segments_intersect({center(z), cx}, sensor)) return;
            offer(z, x);
        });
    }

    /// Seeds for a freshly cleaned cell x: contamination from each occupied
    /// neighbour enters the region where the link crosses its boundary.
    void reenter(int x, const SweptRegion& region, double t, const Segment& sensor) {
        const Vec2 cx = center(x);
        for_neighbours(x, [&](int z) {
            if (!occ_[static_cast<size_t>(z)]) return;
            const Vec2 cz = center(z);
            if (segments_intersect({cz, cx}, sensor)) return;
            double lo = 0.0;
            double hi = 1.0;
            for (int it = 0; it < 24; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (region.contains(cz + mid * (cx - cz))) hi = mid; else lo = mid;
            }
            const Vec2 q = cz + hi * (cx - cz);
            const double tq = std::max(t, earliest(z, q));
            push(x, z, tq + norm(cx - q) / VT_, q, tq, lineage_[static_cast<size_t>(z)]);
        });
    }

    double h_;
    double VT_;
    int n_;
    double extent_;
    double disk_radius_ = 0.0;
    double interior_bound_ = kNever;
    double now_ = 0.0;
    long count_ = 0;
    std::vector<std::uint8_t> occ_;
    std::vector<std::uint8_t> lineage_;
    std::vector<std::uint8_t> seeded_;
    std::vector<std::uint32_t> pending_;  // live offers for the current epoch
    std::vector<std::uint32_t> epoch_;
    std::vector<double> t_clean_;
    std::vector<double> occ_time_;
    std::vector<Vec2> seed_;
    std::vector<double> seed_t_;
    std::vector<int> cleaned_;
    std::priority_queue<Candidate, std::vector<Candidate>, Later> heap_;
};

}  // namespace sweep
