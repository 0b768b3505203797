#include "hcf/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hcf/mathkit.hpp"

namespace hcf {

double distance(Point a, Point b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

void append_uniform_annulus(PointSet& set, std::size_t count, double r_in, double r_out, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double in2 = r_in * r_in;
    const double span = r_out * r_out - in2;
    set.points.reserve(set.points.size() + count);
    for (std::size_t i = 0; i < count; ++i) {
        const double r = std::sqrt(in2 + span * unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        set.points.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
}

PointSet sample_ppp(double density, double radius, NodeKind kind, Rng& rng)
{
    if (density < 0.0 || !(radius > 0.0)) {
        throw math::DomainError("sample_ppp: density must be >= 0 and radius > 0");
    }
    PointSet set{kind, {}};
    if (density == 0.0) {
        return set;
    }
    std::poisson_distribution<long long> count_dist(density * std::numbers::pi * radius * radius);
    const auto count = static_cast<std::size_t>(count_dist(rng));
    append_uniform_annulus(set, count, 0.0, radius, rng);
    return set;
}

std::vector<int> associate(const PointSet& bs, const PointSet& ue)
{
    std::vector<int> assoc(ue.size(), -1);
    if (bs.empty()) {
        return assoc;
    }
    for (std::size_t i = 0; i < ue.size(); ++i) {
        const Point u = ue.points[i];
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < bs.size(); ++m) {
            const double dx = bs.points[m].x - u.x;
            const double dy = bs.points[m].y - u.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2) {
                best_d2 = d2;
                best = static_cast<int>(m);
            }
        }
        assoc[i] = best;
    }
    return assoc;
}

NetworkDrop assemble_drop(PointSet bs, PointSet ap, PointSet ue)
{
    NetworkDrop drop;
    drop.bs = std::move(bs);
    drop.ap = std::move(ap);
    drop.ue = std::move(ue);
    if (!drop.bs.empty()) {
        drop.assoc = associate(drop.bs, drop.ue);
        drop.d00 = distance(drop.ue.points[0], drop.bs.points[drop.assoc[0]]);
    }
    return drop;
}

NetworkDrop make_drop(const NetworkConfig& cfg, Rng& rng)
{
    PointSet bs{NodeKind::bs, {}};
    int resamples = 0;
    if (cfg.p_b > 0.0) {
        bs = sample_ppp(cfg.lambda_b, cfg.radius, NodeKind::bs, rng);
        while (bs.empty()) {
            ++resamples;
            bs = sample_ppp(cfg.lambda_b, cfg.radius, NodeKind::bs, rng);
        }
    }
    PointSet ap = sample_ppp(cfg.lambda_a, cfg.radius, NodeKind::ap, rng);
    PointSet others = sample_ppp(cfg.lambda_u, cfg.radius, NodeKind::ue, rng);

    PointSet ue{NodeKind::ue, {}};
    ue.points.reserve(others.size() + 1);
    ue.points.push_back({0.0, 0.0});
    ue.points.insert(ue.points.end(), others.points.begin(), others.points.end());

    NetworkDrop drop = assemble_drop(std::move(bs), std::move(ap), std::move(ue));
    drop.bs_resamples = resamples;
    return drop;
}

double nearest_distance_pdf(double r, double lambda)
{
    if (r < 0.0) {
        throw math::DomainError("nearest_distance_pdf: r must be >= 0");
    }
    const double pi = std::numbers::pi;
    return 2.0 * lambda * pi * r * std::exp(-lambda * pi * r * r);
}

double path_loss(double distance, double ref_gain, double exponent)
{
    if (!(distance > 0.0)) {
        throw math::DomainError("path_loss: distance must be positive");
    }
    return ref_gain * std::pow(distance, -exponent);
}

} // namespace hcf
