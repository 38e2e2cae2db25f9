#include "elastica/presets.hpp"

namespace elastica {

std::optional<Preset> find_preset(const std::string& name) {
    for (const Preset& p : kPresets)
        if (name == p.name) return p;
    return std::nullopt;
}

} // namespace elastica
