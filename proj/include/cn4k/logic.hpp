// The five logics and their frame classes.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace cn4k {

enum class LogicId { CN4K, CN4K_PM, CN4K_YV, CN4K_JOIN, CN4K_ONE };

enum class FrameClass { General, PM, YV, Join, Mono };

inline constexpr std::array<LogicId, 5> all_logics{
    LogicId::CN4K, LogicId::CN4K_PM, LogicId::CN4K_YV, LogicId::CN4K_JOIN, LogicId::CN4K_ONE};

inline FrameClass frame_class_of(LogicId l) {
  switch (l) {
    case LogicId::CN4K: return FrameClass::General;
    case LogicId::CN4K_PM: return FrameClass::PM;
    case LogicId::CN4K_YV: return FrameClass::YV;
    case LogicId::CN4K_JOIN: return FrameClass::Join;
    case LogicId::CN4K_ONE: return FrameClass::Mono;
  }
  return FrameClass::General;
}

// Wire names used by the CLI and file formats.
inline std::string logic_name(LogicId l) {
  switch (l) {
    case LogicId::CN4K: return "cn4k";
    case LogicId::CN4K_PM: return "pm";
    case LogicId::CN4K_YV: return "yv";
    case LogicId::CN4K_JOIN: return "join";
    case LogicId::CN4K_ONE: return "one";
  }
  return "?";
}

inline std::optional<LogicId> parse_logic(std::string_view s) {
  if (s == "cn4k") return LogicId::CN4K;
  if (s == "pm") return LogicId::CN4K_PM;
  if (s == "yv") return LogicId::CN4K_YV;
  if (s == "join") return LogicId::CN4K_JOIN;
  if (s == "one") return LogicId::CN4K_ONE;
  return std::nullopt;
}

inline std::string frame_class_name(FrameClass c) {
  switch (c) {
    case FrameClass::General: return "general";
    case FrameClass::PM: return "pm";
    case FrameClass::YV: return "yv";
    case FrameClass::Join: return "join";
    case FrameClass::Mono: return "mono";
  }
  return "?";
}

inline std::optional<FrameClass> parse_frame_class(std::string_view s) {
  if (s == "general") return FrameClass::General;
  if (s == "pm") return FrameClass::PM;
  if (s == "yv") return FrameClass::YV;
  if (s == "join") return FrameClass::Join;
  if (s == "mono") return FrameClass::Mono;
  return std::nullopt;
}

// The extension lattice: CN4K below everything, PM/YV/JOIN below ONE.
inline bool logic_leq(LogicId a, LogicId b) {
  if (a == b) return true;
  if (a == LogicId::CN4K) return true;
  if (b == LogicId::CN4K_ONE) return true;
  return false;
}

} // namespace cn4k
