#include "unseen/estimate.hpp"

namespace unseen {

const char* to_string(Target t) {
  switch (t) {
    case Target::unseen: return "unseen";
    case Target::total: return "total";
    case Target::rate: return "rate";
    case Target::probability: return "probability";
  }
  return "unseen";
}

const char* to_string(Bound b) {
  switch (b) {
    case Bound::lower: return "lower";
    case Bound::upper: return "upper";
    case Bound::point: return "point";
  }
  return "point";
}

}  // namespace unseen
