#ifndef ELASTICA_STATE_IO_HPP
#define ELASTICA_STATE_IO_HPP

#include <string>

#include "elastica/continuation.hpp"
#include "elastica/model.hpp"
#include "elastica/state.hpp"

namespace elastica {

// Canonical state serialization: fixed key order, reals printed with 17
// significant digits so files round-trip byte-for-byte.
//   {"n": ..., "mu": ..., "m": ..., "h": ...,
//    "rho": [...], "theta": [...], "lambda": [mass, x, y]}
std::string state_to_json(const DiscreteState& st, const ModelParams& params);
void write_state(const std::string& path, const DiscreteState& st, const ModelParams& params);

// Throws std::runtime_error("unreadable state: ...") on malformed input and
// rejects non-finite values.
struct LoadedState {
    DiscreteState state;
    ModelParams params;
};
LoadedState read_state(const std::string& path);

// CSV with header mu,rho_min,rho_max,energy,newton_iters,det_sign,arclength.
void write_branch_csv(const std::string& path, const Branch& branch);

std::string format_real(double v);  // %.17g

} // namespace elastica

#endif
