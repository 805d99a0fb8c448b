#pragma once

#include <string>

#include "tadv/sim.hpp"

namespace tadv {

// Loads a JSON run configuration. Unknown keys anywhere in the document are
// rejected so typos fail loudly instead of silently running defaults. The
// schema is documented in the README.
SimConfig load_config(const std::string& path);

// Built-in sit-to-stand run, mirrored by configs/standup.json: CoM surrogate
// body, assistance pulse on the hands channel, scripted feet ramp for the
// phase machine.
SimConfig default_standup_config();

}  // namespace tadv
