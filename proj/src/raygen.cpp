#include "occray/raygen.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace occray {

std::vector<double> default_upper_elevations() {
    std::vector<double> out;
    for (int deg = 0; deg <= 10; ++deg) {
        out.push_back(deg * std::numbers::pi / 180.0);
    }
    return out;
}

LidarPatternConfig LidarPatternConfig::make_default() {
    LidarPatternConfig config;
    config.upper_elevations = default_upper_elevations();
    return config;
}

void validate(const LidarPatternConfig& config) {
    if (!(config.sensor_height > 0.0) || !std::isfinite(config.sensor_height)) {
        throw std::invalid_argument("lidar pattern: sensor_height must be positive");
    }
    if (config.azimuth_count <= 0) {
        throw std::invalid_argument("lidar pattern: azimuth_count must be positive");
    }
    if (!(config.ground_spacing > 0.0) || !std::isfinite(config.ground_spacing)) {
        throw std::invalid_argument("lidar pattern: ground_spacing must be positive");
    }
    if (!(config.r_min > 0.0) || !(config.r_max >= config.r_min)) {
        throw std::invalid_argument("lidar pattern: need 0 < r_min <= r_max");
    }
    for (double e : config.upper_elevations) {
        if (!std::isfinite(e)) {
            throw std::invalid_argument("lidar pattern: non-finite upper elevation");
        }
    }
}

std::vector<double> elevation_channels(const LidarPatternConfig& config) {
    validate(config);
    std::vector<double> channels;
    // The epsilon keeps r_max itself included when the span is an exact
    // multiple of the spacing.
    const auto steps = static_cast<std::size_t>(
        std::floor((config.r_max - config.r_min) / config.ground_spacing + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) {
        const double r = config.r_min + static_cast<double>(i) * config.ground_spacing;
        channels.push_back(-std::atan(config.sensor_height / r));
    }
    channels.insert(channels.end(), config.upper_elevations.begin(),
                    config.upper_elevations.end());
    std::sort(channels.begin(), channels.end());
    channels.erase(std::unique(channels.begin(), channels.end()), channels.end());
    return channels;
}

std::vector<Vec3> lidar_pattern(const LidarPatternConfig& config) {
    const std::vector<double> elevations = elevation_channels(config);
    std::vector<Vec3> directions;
    directions.reserve(elevations.size() * static_cast<std::size_t>(config.azimuth_count));
    for (double e : elevations) {
        const double ce = std::cos(e);
        const double se = std::sin(e);
        for (int j = 0; j < config.azimuth_count; ++j) {
            const double a = 2.0 * std::numbers::pi * j / config.azimuth_count;
            directions.emplace_back(ce * std::cos(a), ce * std::sin(a), se);
        }
    }
    return directions;
}

bool is_valid_rotation(const Mat3& m, double tol) {
    if (!m.allFinite()) {
        return false;
    }
    const Mat3 should_be_identity = m.transpose() * m;
    if ((should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    return std::abs(m.determinant() - 1.0) <= tol;
}

void validate(const Trajectory& trajectory) {
    if (trajectory.poses.empty()) {
        throw std::invalid_argument("trajectory: must contain at least one pose");
    }
    if (trajectory.current_index >= trajectory.poses.size()) {
        throw std::invalid_argument("trajectory: current_index out of range");
    }
    for (std::size_t i = 0; i < trajectory.poses.size(); ++i) {
        const Pose& pose = trajectory.poses[i];
        if (!is_valid_rotation(pose.rotation)) {
            throw std::invalid_argument("trajectory: pose " + std::to_string(i) +
                                        " has an invalid rotation");
        }
        if (!pose.translation.allFinite() || !std::isfinite(pose.timestamp)) {
            throw std::invalid_argument("trajectory: pose " + std::to_string(i) +
                                        " has non-finite values");
        }
        if (i > 0 && !(pose.timestamp > trajectory.poses[i - 1].timestamp)) {
            throw std::invalid_argument("trajectory: timestamps must be strictly increasing");
        }
    }
}

std::vector<Pose> temporal_origins(const Trajectory& trajectory, std::size_t n) {
    validate(trajectory);
    if (n == 0) {
        throw std::invalid_argument("temporal_origins: n must be at least 1");
    }
    const std::size_t len = trajectory.poses.size();
    std::vector<std::size_t> indices;
    if (len <= n) {
        indices.resize(len);
        for (std::size_t i = 0; i < len; ++i) {
            indices[i] = i;
        }
    } else if (n == 1) {
        indices = {trajectory.current_index};
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double pos = static_cast<double>(i) * static_cast<double>(len - 1) /
                               static_cast<double>(n - 1);
            indices.push_back(static_cast<std::size_t>(std::llround(pos)));
        }
        std::sort(indices.begin(), indices.end());
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
        if (std::find(indices.begin(), indices.end(), trajectory.current_index) ==
            indices.end()) {
            // Swap the nearest pick for the current pose so it is always cast.
            auto nearest = indices.begin();
            std::size_t best = static_cast<std::size_t>(-1);
            for (auto it = indices.begin(); it != indices.end(); ++it) {
                const std::size_t dist = *it > trajectory.current_index
                                             ? *it - trajectory.current_index
                                             : trajectory.current_index - *it;
                if (dist < best) {
                    best = dist;
                    nearest = it;
                }
            }
            *nearest = trajectory.current_index;
            std::sort(indices.begin(), indices.end());
        }
    }
    std::vector<Pose> out;
    out.reserve(indices.size());
    for (std::size_t idx : indices) {
        out.push_back(trajectory.poses[idx]);
    }
    return out;
}

RaySet build_query_rays(const std::vector<Vec3>& pattern, const std::vector<Pose>& origins) {
    if (pattern.empty()) {
        throw std::invalid_argument("build_query_rays: empty direction pattern");
    }
    if (origins.empty()) {
        throw std::invalid_argument("build_query_rays: empty origin list");
    }
    for (const Vec3& dir : pattern) {
        if (std::abs(dir.norm() - 1.0) > 1e-6) {
            throw std::invalid_argument("build_query_rays: pattern directions must be unit");
        }
    }
    RaySet set;
    set.rays.reserve(pattern.size() * origins.size());
    for (std::size_t p = 0; p < origins.size(); ++p) {
        const Pose& pose = origins[p];
        for (const Vec3& dir : pattern) {
            set.rays.push_back(Ray{pose.translation, pose.rotation * dir,
                                   static_cast<std::uint32_t>(p)});
        }
    }
    return set;
}

}  // namespace occray
