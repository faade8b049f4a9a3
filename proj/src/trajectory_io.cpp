#include "occray/trajectory_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace occray {

Trajectory parse_trajectory(std::istream& is, const std::string& source_name) {
    Trajectory trajectory;
    bool current_seen = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) {
            continue;  // blank or comment-only line
        }
        const auto fail = [&](const std::string& msg) -> std::runtime_error {
            return std::runtime_error(source_name + ":" + std::to_string(line_no) + ": " +
                                      msg);
        };
        if (first == "current") {
            std::size_t index = 0;
            if (!(ss >> index)) {
                throw fail("expected an index after 'current'");
            }
            std::string rest;
            if (ss >> rest) {
                throw fail("unexpected trailing token '" + rest + "'");
            }
            if (current_seen) {
                throw fail("duplicate 'current' line");
            }
            trajectory.current_index = index;
            current_seen = true;
            continue;
        }
        Pose pose;
        std::istringstream values(line);
        double fields[13];
        for (int i = 0; i < 13; ++i) {
            if (!(values >> fields[i])) {
                throw fail("expected 13 numeric fields per pose line");
            }
        }
        std::string rest;
        if (values >> rest) {
            throw fail("unexpected trailing token '" + rest + "'");
        }
        pose.timestamp = fields[0];
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                pose.rotation(r, c) = fields[1 + 3 * r + c];
            }
        }
        pose.translation = Vec3(fields[10], fields[11], fields[12]);
        trajectory.poses.push_back(pose);
    }
    try {
        validate(trajectory);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(source_name + ": " + e.what());
    }
    return trajectory;
}

Trajectory read_trajectory(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("read_trajectory: cannot open " + path.string());
    }
    return parse_trajectory(is, path.string());
}

void write_trajectory(const Trajectory& trajectory, std::ostream& os) {
    os << "current " << trajectory.current_index << "\n";
    os << std::setprecision(17);
    for (const Pose& pose : trajectory.poses) {
        os << pose.timestamp;
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                os << ' ' << pose.rotation(r, c);
            }
        }
        for (int a = 0; a < 3; ++a) {
            os << ' ' << pose.translation[a];
        }
        os << "\n";
    }
}

void write_trajectory(const Trajectory& trajectory, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("write_trajectory: cannot open " + path.string());
    }
    write_trajectory(trajectory, os);
    if (!os) {
        throw std::runtime_error("write_trajectory: failed writing " + path.string());
    }
}

}  // namespace occray
