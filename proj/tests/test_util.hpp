#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ctlhorn/ctl_parser.hpp"
#include "ctlhorn/finite_engine.hpp"
#include "ctlhorn/parser.hpp"

#ifndef FIXTURE_DIR
#error "FIXTURE_DIR must be defined by the build"
#endif

namespace testutil {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

inline ctlhorn::TransitionSystem load_fixture(const std::string& name) {
    return ctlhorn::parse_system(read_file(fixture_path(name)));
}

inline const ctlhorn::Update& find_update(const ctlhorn::GuardedCommand& cmd,
                                          const std::string& var) {
    for (const auto& [name, up] : cmd.updates) {
        if (name == var) return up;
    }
    throw std::runtime_error("no update for " + var);
}

/// "w=-3..8,pc=0..12" — the CLI's bounds syntax, reparsed here so manifests
/// can pin bounds as strings.
inline ctlhorn::Bounds parse_bounds(const std::string& text) {
    ctlhorn::Bounds b;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto eq = item.find('=');
        auto dots = item.find("..", eq + 1);
        if (eq == std::string::npos || dots == std::string::npos) {
            throw std::runtime_error("bad bounds item: " + item);
        }
        ctlhorn::Int lo = std::stoll(item.substr(eq + 1, dots - eq - 1));
        ctlhorn::Int hi = std::stoll(item.substr(dots + 2));
        b.intervals[item.substr(0, eq)] = {lo, hi};
    }
    return b;
}

}  // namespace testutil
