#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "catenoid/dynamics.hpp"

namespace catenoid {

// Round-trip-exact serialization: 17 significant digits reproduce any double
// bit-for-bit on parse, which keeps golden-file comparisons byte-stable.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline const char* trajectory_csv_header() {
    return "t,theta,theta_unwound,p_theta,z,p_z,G1100,G1010,G1001,G0110,G0101,G0011,"
           "G2000,G0200,G0020,G0002,H_Q,U_theta,U_z";
}

inline std::string trajectory_csv_row(const TrajectorySample& s) {
    std::string row = format_g17(s.t);
    auto push = [&row](double v) {
        row += ',';
        row += format_g17(v);
    };
    push(s.state.point.theta);
    push(s.theta_unwound);
    push(s.state.point.p_theta);
    push(s.state.point.z);
    push(s.state.point.p_z);
    for (int i = 0; i < 10; ++i) push(s.state.g[static_cast<std::size_t>(i)]);
    push(s.h_q);
    push(s.u_theta);
    push(s.u_z);
    return row;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << trajectory_csv_header() << '\n';
    for (const TrajectorySample& s : traj.samples) os << trajectory_csv_row(s) << '\n';
}

} // namespace catenoid
