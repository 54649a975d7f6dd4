#include "eifsim/types.hpp"

namespace eifsim {

const char* to_string(ActionPrimitive p) {
    switch (p) {
        case ActionPrimitive::Navigate: return "Navigate";
        case ActionPrimitive::PickUp: return "PickUp";
        case ActionPrimitive::Place: return "Place";
        case ActionPrimitive::Open: return "Open";
        case ActionPrimitive::Close: return "Close";
        case ActionPrimitive::ToggleOn: return "ToggleOn";
        case ActionPrimitive::ToggleOff: return "ToggleOff";
        case ActionPrimitive::Slice: return "Slice";
    }
    return "Navigate";
}

const char* to_string(MotionCmd c) {
    switch (c) {
        case MotionCmd::Forward: return "Forward";
        case MotionCmd::RotateLeft: return "RotateLeft";
        case MotionCmd::RotateRight: return "RotateRight";
    }
    return "Forward";
}

bool primitive_from_string(const std::string& s, ActionPrimitive& out) {
    if (s == "Navigate") out = ActionPrimitive::Navigate;
    else if (s == "PickUp") out = ActionPrimitive::PickUp;
    else if (s == "Place") out = ActionPrimitive::Place;
    else if (s == "Open") out = ActionPrimitive::Open;
    else if (s == "Close") out = ActionPrimitive::Close;
    else if (s == "ToggleOn") out = ActionPrimitive::ToggleOn;
    else if (s == "ToggleOff") out = ActionPrimitive::ToggleOff;
    else if (s == "Slice") out = ActionPrimitive::Slice;
    else return false;
    return true;
}

bool motion_from_string(const std::string& s, MotionCmd& out) {
    if (s == "Forward") out = MotionCmd::Forward;
    else if (s == "RotateLeft") out = MotionCmd::RotateLeft;
    else if (s == "RotateRight") out = MotionCmd::RotateRight;
    else return false;
    return true;
}

}  // namespace eifsim
