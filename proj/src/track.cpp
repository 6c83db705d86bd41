#include "fusemot/track.hpp"

#include "fusemot/error.hpp"

namespace fusemot {

std::string to_string(StepState state) {
    switch (state) {
        case StepState::D: return "D";
        case StepState::GP: return "GP";
        case StepState::BP: return "BP";
        case StepState::UP: return "UP";
    }
    throw InternalError("unknown step state");
}

StepState step_state_from_string(const std::string& text) {
    if (text == "D") return StepState::D;
    if (text == "GP") return StepState::GP;
    if (text == "BP") return StepState::BP;
    if (text == "UP") return StepState::UP;
    throw DataError("unknown track step state: \"" + text + "\"");
}

} // namespace fusemot
