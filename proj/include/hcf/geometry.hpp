#pragma once

#include <cstddef>
#include <vector>

#include "hcf/params.hpp"
#include "hcf/rng.hpp"

namespace hcf {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

enum class NodeKind { bs, ap, ue };

struct PointSet {
    NodeKind kind = NodeKind::bs;
    std::vector<Point> points;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] bool empty() const { return points.empty(); }
};

/// Homogeneous PPP on the centred disk: Poisson count, then uniform points
/// (radius via sqrt scaling, uniform angle).
PointSet sample_ppp(double density, double radius, NodeKind kind, Rng& rng);

/// Uniform points in the annulus r_in <= |x| < r_out with the count given.
void append_uniform_annulus(PointSet& set, std::size_t count, double r_in, double r_out, Rng& rng);

/// One network realisation. ue.points[0] is the typical UE at the origin.
struct NetworkDrop {
    PointSet bs{NodeKind::bs, {}};
    PointSet ap{NodeKind::ap, {}};
    PointSet ue{NodeKind::ue, {}};
    std::vector<int> assoc; ///< UE index -> nearest BS index (empty without a BS layer)
    double d00 = 0.0;       ///< typical UE to serving BS (0 without a BS layer)
    int bs_resamples = 0;   ///< empty BS draws thrown away
};

/// Nearest BS for each UE; ties go to the lower BS index.
std::vector<int> associate(const PointSet& bs, const PointSet& ue);

/// Builds association and d00 for given point sets; ue must already hold the
/// typical UE at index 0.
NetworkDrop assemble_drop(PointSet bs, PointSet ap, PointSet ue);

/// Samples BS, AP and UE layers. The BS layer is skipped when cfg.p_b == 0;
/// otherwise empty BS draws are resampled.
NetworkDrop make_drop(const NetworkConfig& cfg, Rng& rng);

/// Density of the distance to the nearest point of a PPP of intensity lambda.
double nearest_distance_pdf(double r, double lambda);

/// ref_gain * distance^-exponent; distance must be positive.
double path_loss(double distance, double ref_gain, double exponent);

} // namespace hcf
