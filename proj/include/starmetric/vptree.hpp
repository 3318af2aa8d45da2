#ifndef STARMETRIC_VPTREE_HPP
#define STARMETRIC_VPTREE_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/point.hpp"
#include "starmetric/rng.hpp"
#include "starmetric/space.hpp"
#include "starmetric/tdefiner.hpp"

namespace starmetric {

struct Neighbor {
    std::size_t index = 0;  // stable input index
    double distance = 0.0;
    Point point;
};

struct KnnResult {
    std::vector<Neighbor> neighbors;  // ascending (distance, index)
    bool short_result = false;        // k exceeded the number of points
    std::size_t distance_evaluations = 0;
};

/// One pruned subtree: the item range it covered, which side it was, the
/// residuum lower bound that justified the skip, and the threshold in force
/// at skip time (tau for knn, the radius for range queries). Enough to replay
/// the decision against brute force.
struct SkipEvent {
    std::size_t first_item = 0;  // [first_item, last_item) in tree item order
    std::size_t last_item = 0;
    bool inner_side = false;
    double lower_bound = 0.0;
    double threshold = 0.0;
};

struct QueryAudit {
    std::vector<SkipEvent> skips;
    std::size_t distance_evaluations = 0;
};

/// Lower bound on d(q, x) for x in the inner subtree (d(pivot, x) <= mu),
/// given D = d(q, pivot). From M3*:  D <= d(q,x) (*) d(x,pivot) <= d(q,x) (*) mu,
/// so by the residuation property  d(q,x) >= mu -o D. Under the lukasiewicz
/// t-definer this is the classical max(0, D - mu).
inline double inner_lower_bound(const TDefiner& star, double mu, double pivot_query_dist,
                                const ToleranceConfig& cfg = {}) {
    return residuum(star, mu, pivot_query_dist, cfg);
}

/// Lower bound on d(q, x) for x in the outer subtree (d(pivot, x) >= mu):
/// mu <= d(pivot,x) <= d(pivot,q) (*) d(q,x) = D (*) d(q,x), so
/// d(q,x) >= D -o mu; classically max(0, mu - D).
inline double outer_lower_bound(const TDefiner& star, double pivot_query_dist, double mu,
                                const ToleranceConfig& cfg = {}) {
    return residuum(star, pivot_query_dist, mu, cfg);
}

/// Vantage-point tree over a star-metric space. Pivots are drawn uniformly
/// with a seeded generator, mu is the lower median of pivot distances, and
/// boundary points (distance exactly mu) go to the inner side; the outer
/// invariant uses >= so both partitions stay sound. A built tree is immutable
/// and safe for concurrent queries; each query allocates only its own state.
class VpTree {
public:
    struct Node {
        std::size_t begin = 0, end = 0;  // item range covered by this subtree
        bool leaf = true;
        double mu = 0.0;       // internal nodes: median distance to the pivot
        int inner = -1;        // child node ids; -1 = absent
        int outer = -1;
    };

    VpTree(PointSet points, StarMetricSpace space, std::size_t leaf_size = 16,
           std::uint64_t seed = 0, ToleranceConfig cfg = {})
        : space_(std::move(space)),
          points_(std::move(points)),
          leaf_size_(leaf_size),
          seed_(seed),
          cfg_(cfg) {
        if (points_.empty()) throw usage_error("VpTree requires a nonempty point set");
        if (leaf_size_ == 0) throw usage_error("VpTree leaf_size must be positive");
        validate_points(space_, points_);
        items_.resize(points_.size());
        for (std::size_t i = 0; i < items_.size(); ++i) items_[i] = i;
        scratch_.resize(points_.size());
        Rng rng(seed_);
        root_ = build(0, items_.size(), rng);
        scratch_.clear();
        scratch_.shrink_to_fit();
    }

    std::size_t size() const { return points_.size(); }
    const StarMetricSpace& space() const { return space_; }
    std::size_t leaf_size() const { return leaf_size_; }
    std::uint64_t build_seed() const { return seed_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return root_; }
    const std::vector<std::size_t>& items() const { return items_; }
    const Point& point(std::size_t original_index) const { return points_[original_index]; }

    /// Original indices of the points inside an item range (for audit replay).
    std::vector<std::size_t> subtree_items(std::size_t first, std::size_t last) const {
        return {items_.begin() + static_cast<std::ptrdiff_t>(first),
                items_.begin() + static_cast<std::ptrdiff_t>(last)};
    }

    /// k nearest neighbors by (distance, input index). Ties at the k-th
    /// distance resolve toward the smaller input index, matching the brute
    /// force oracle's ordering exactly. k > size() returns everything with
    /// short_result set.
    KnnResult knn(const Point& q, std::size_t k, QueryAudit* audit = nullptr) const {
        if (k == 0) throw usage_error("knn requires k >= 1");
        validate_point(space_, q);
        KnnResult result;
        result.short_result = k > points_.size();
        std::priority_queue<Candidate> heap;
        std::size_t evals = 0;
        search_knn(root_, q, k, heap, evals, audit);
        result.distance_evaluations = evals;
        if (audit) audit->distance_evaluations = evals;
        result.neighbors.resize(heap.size());
        for (std::size_t i = heap.size(); i-- > 0;) {
            const Candidate& top = heap.top();
            result.neighbors[i] = Neighbor{top.index, top.dist, points_[top.index]};
            heap.pop();
        }
        return result;
    }

    /// All points with d(q, x) < radius (strict, matching open-ball
    /// semantics), ascending (distance, index).
    std::vector<Neighbor> range_query(const Point& q, double radius,
                                      QueryAudit* audit = nullptr) const {
        if (!(radius > 0.0)) throw usage_error("range_query requires a positive radius");
        validate_point(space_, q);
        std::vector<Neighbor> found;
        std::size_t evals = 0;
        search_range(root_, q, radius, found, evals, audit);
        if (audit) audit->distance_evaluations = evals;
        std::sort(found.begin(), found.end(), [](const Neighbor& a, const Neighbor& b) {
            return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
        });
        return found;
    }

private:
    struct Candidate {
        double dist;
        std::size_t index;
        bool operator<(const Candidate& o) const {
            return dist != o.dist ? dist < o.dist : index < o.index;
        }
    };

    struct BuildEntry {
        std::size_t item;
        double dist;
    };

    int build(std::size_t lo, std::size_t hi, Rng& rng) {
        const std::size_t count = hi - lo;
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(Node{lo, hi, true, 0.0, -1, -1});
        if (count <= leaf_size_) return id;

        // Pivot to the front of the range.
        std::swap(items_[lo], items_[lo + rng.index(count)]);
        const Point& pivot = points_[items_[lo]];

        auto* entries = scratch_.data() + lo + 1;
        const std::size_t m = count - 1;
        for (std::size_t i = 0; i < m; ++i) {
            entries[i].item = items_[lo + 1 + i];
            entries[i].dist = space_.dist(pivot, points_[entries[i].item]);
        }

        // Lower median of the pivot distances.
        std::vector<double> dists(m);
        for (std::size_t i = 0; i < m; ++i) dists[i] = entries[i].dist;
        const std::size_t median_pos = (m - 1) / 2;
        std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(median_pos),
                         dists.end());
        const double mu = dists[median_pos];

        // Boundary points go inner; stable partition keeps the item order
        // deterministic across standard libraries.
        auto* split = std::stable_partition(entries, entries + m,
                                            [mu](const BuildEntry& e) { return e.dist <= mu; });
        const std::size_t inner_count = static_cast<std::size_t>(split - entries);
        for (std::size_t i = 0; i < m; ++i) items_[lo + 1 + i] = entries[i].item;

        nodes_[id].leaf = false;
        nodes_[id].mu = mu;
        if (inner_count > 0) {
            const int inner = build(lo + 1, lo + 1 + inner_count, rng);
            nodes_[id].inner = inner;
        }
        if (inner_count < m) {
            const int outer = build(lo + 1 + inner_count, hi, rng);
            nodes_[id].outer = outer;
        }
        return id;
    }

    static double tau(const std::priority_queue<Candidate>& heap, std::size_t k) {
        return heap.size() == k ? heap.top().dist : std::numeric_limits<double>::infinity();
    }

    void offer(std::priority_queue<Candidate>& heap, std::size_t k, double d,
               std::size_t index) const {
        const Candidate c{d, index};
        if (heap.size() < k) {
            heap.push(c);
        } else if (c < heap.top()) {
            heap.pop();
            heap.push(c);
        }
    }

    void search_knn(int node_id, const Point& q, std::size_t k,
                    std::priority_queue<Candidate>& heap, std::size_t& evals,
                    QueryAudit* audit) const {
        const Node& node = nodes_[static_cast<std::size_t>(node_id)];
        if (node.leaf) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t idx = items_[i];
                ++evals;
                offer(heap, k, space_.dist(q, points_[idx]), idx);
            }
            return;
        }

        const std::size_t pivot_idx = items_[node.begin];
        ++evals;
        const double D = space_.dist(q, points_[pivot_idx]);
        offer(heap, k, D, pivot_idx);

        const double lb_in = inner_lower_bound(space_.star, node.mu, D, cfg_);
        const double lb_out = outer_lower_bound(space_.star, D, node.mu, cfg_);

        struct Side {
            int child;
            double lb;
            bool inner;
        };
        Side sides[2] = {{node.inner, lb_in, true}, {node.outer, lb_out, false}};
        if (D > node.mu) std::swap(sides[0], sides[1]);  // visit the nearer side first

        for (const Side& side : sides) {
            if (side.child < 0) continue;
            const double threshold = tau(heap, k);
            // Strict comparison: a subtree whose bound ties the threshold may
            // still hold an equally-distant neighbor with a smaller index.
            if (side.lb > threshold) {
                if (audit) {
                    const Node& child = nodes_[static_cast<std::size_t>(side.child)];
                    audit->skips.push_back(
                        SkipEvent{child.begin, child.end, side.inner, side.lb, threshold});
                }
                continue;
            }
            search_knn(side.child, q, k, heap, evals, audit);
        }
    }

    void search_range(int node_id, const Point& q, double radius, std::vector<Neighbor>& found,
                      std::size_t& evals, QueryAudit* audit) const {
        const Node& node = nodes_[static_cast<std::size_t>(node_id)];
        if (node.leaf) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t idx = items_[i];
                ++evals;
                const double d = space_.dist(q, points_[idx]);
                if (d < radius) found.push_back(Neighbor{idx, d, points_[idx]});
            }
            return;
        }

        const std::size_t pivot_idx = items_[node.begin];
        ++evals;
        const double D = space_.dist(q, points_[pivot_idx]);
        if (D < radius) found.push_back(Neighbor{pivot_idx, D, points_[pivot_idx]});

        const double lb_in = inner_lower_bound(space_.star, node.mu, D, cfg_);
        const double lb_out = outer_lower_bound(space_.star, D, node.mu, cfg_);

        struct Side {
            int child;
            double lb;
            bool inner;
        };
        const Side sides[2] = {{node.inner, lb_in, true}, {node.outer, lb_out, false}};
        for (const Side& side : sides) {
            if (side.child < 0) continue;
            // Membership is strict (d < radius), so lb >= radius excludes the
            // whole subtree.
            if (side.lb >= radius) {
                if (audit) {
                    const Node& child = nodes_[static_cast<std::size_t>(side.child)];
                    audit->skips.push_back(
                        SkipEvent{child.begin, child.end, side.inner, side.lb, radius});
                }
                continue;
            }
            search_range(side.child, q, radius, found, evals, audit);
        }
    }

    StarMetricSpace space_;
    PointSet points_;
    std::size_t leaf_size_;
    std::uint64_t seed_;
    ToleranceConfig cfg_;
    std::vector<std::size_t> items_;  // original indices in tree order
    std::vector<BuildEntry> scratch_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

/// Full-scan oracle: sort by (distance, stable input index), take k. Ground
/// truth for every index test.
inline KnnResult brute_force(const PointSet& points, const StarMetricSpace& space,
                             const Point& q, std::size_t k) {
    if (k == 0) throw usage_error("brute_force requires k >= 1");
    validate_points(space, points);
    validate_point(space, q);
    KnnResult result;
    result.short_result = k > points.size();
    std::vector<Neighbor> all;
    all.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        all.push_back(Neighbor{i, space.dist(q, points[i]), points[i]});
        ++result.distance_evaluations;
    }
    std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
    });
    all.resize(std::min(k, all.size()));
    result.neighbors = std::move(all);
    return result;
}

inline std::vector<Neighbor> brute_force_range(const PointSet& points,
                                               const StarMetricSpace& space, const Point& q,
                                               double radius) {
    if (!(radius > 0.0)) throw usage_error("brute_force_range requires a positive radius");
    validate_points(space, points);
    validate_point(space, q);
    std::vector<Neighbor> found;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = space.dist(q, points[i]);
        if (d < radius) found.push_back(Neighbor{i, d, points[i]});
    }
    std::sort(found.begin(), found.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
    });
    return found;
}

}  // namespace starmetric

#endif  // STARMETRIC_VPTREE_HPP
