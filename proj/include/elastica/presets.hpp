#ifndef ELASTICA_PRESETS_HPP
#define ELASTICA_PRESETS_HPP

#include <array>
#include <optional>
#include <string>

namespace elastica {

// The six benchmark stiffness profiles exercised throughout the tests.
struct Preset {
    const char* name;
    double m;
    double h;
};

inline constexpr std::array<Preset, 6> kPresets{{
    {"i", 1.0, 1.85},
    {"ii", 1.0, 1.0},
    {"iii", 1.0, 0.25},
    {"iv", 1.0, -0.5},
    {"v", 1.0, -2.0},
    {"vi", 0.0, -1.0},
}};

std::optional<Preset> find_preset(const std::string& name);

} // namespace elastica

#endif
