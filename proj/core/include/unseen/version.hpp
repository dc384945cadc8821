#ifndef UNSEEN_VERSION_HPP
#define UNSEEN_VERSION_HPP

namespace unseen {

inline constexpr const char* kVersion = "1.0.0";

}

#endif
