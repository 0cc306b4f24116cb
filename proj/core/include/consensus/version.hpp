#pragma once

#ifndef CONSENSUS_VERSION_STRING
#define CONSENSUS_VERSION_STRING "0.0.0"
#endif

namespace consensus {

inline constexpr const char* toolkit_version() { return CONSENSUS_VERSION_STRING; }

}  // namespace consensus
