#include "freqstab/disturbance.hpp"

#include "freqstab/errors.hpp"

namespace freqstab {

const char* to_string(DisturbanceLabel label) {
  switch (label) {
    case DisturbanceLabel::ShortTerm: return "short-term";
    case DisturbanceLabel::Step: return "step";
    case DisturbanceLabel::SecondSlope: return "second-slope";
    case DisturbanceLabel::MinuteSlope: return "minute-slope";
  }
  return "unknown";
}

DisturbanceLabel label_from_string(const std::string& name) {
  if (name == "short-term") return DisturbanceLabel::ShortTerm;
  if (name == "step") return DisturbanceLabel::Step;
  if (name == "second-slope") return DisturbanceLabel::SecondSlope;
  if (name == "minute-slope") return DisturbanceLabel::MinuteSlope;
  throw Error(ErrorCode::InvalidParameter, "unknown disturbance label '" + name + "'");
}

}  // namespace freqstab
