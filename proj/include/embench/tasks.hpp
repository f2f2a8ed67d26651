#pragma once

#include <array>
#include <string>
#include <string_view>

#include "embench/error.hpp"

namespace embench {

/// The 14 leaf sub-tasks of the benchmark taxonomy.
enum class Task {
  MOD,
  PE_DC,
  PE_PRF,
  PE_BW,
  PE_PW,
  PE_NoP,
  PI,
  RJR,
  CJR,
  SD,
  Anti_CJ,
  Anti_RJ,
  CJS,
  RJS,
};

inline constexpr std::array<Task, 14> kAllTasks = {
    Task::MOD, Task::PE_DC, Task::PE_PRF, Task::PE_BW, Task::PE_PW, Task::PE_NoP, Task::PI,
    Task::RJR, Task::CJR,   Task::SD,     Task::Anti_CJ, Task::Anti_RJ, Task::CJS, Task::RJS};

inline constexpr std::string_view task_name(Task t) {
  switch (t) {
    case Task::MOD: return "MOD";
    case Task::PE_DC: return "PE.DC";
    case Task::PE_PRF: return "PE.PRF";
    case Task::PE_BW: return "PE.BW";
    case Task::PE_PW: return "PE.PW";
    case Task::PE_NoP: return "PE.NoP";
    case Task::PI: return "PI";
    case Task::RJR: return "RJR";
    case Task::CJR: return "CJR";
    case Task::SD: return "SD";
    case Task::Anti_CJ: return "Anti-CJ";
    case Task::Anti_RJ: return "Anti-RJ";
    case Task::CJS: return "CJS";
    case Task::RJS: return "RJS";
  }
  return "?";
}

inline Task parse_task(std::string_view name) {
  for (Task t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  throw config_error("unknown task id: " + std::string(name));
}

inline constexpr bool is_reasoning(Task t) {
  return t == Task::Anti_CJ || t == Task::Anti_RJ || t == Task::CJS || t == Task::RJS;
}

inline constexpr bool is_perception(Task t) { return !is_reasoning(t); }

/// Tasks whose answer is a number (or pair of numbers) rather than a label.
inline constexpr bool is_numeric(Task t) {
  return t == Task::PE_DC || t == Task::PE_PRF || t == Task::PE_BW || t == Task::PE_PW ||
         t == Task::PE_NoP || t == Task::SD;
}

}  // namespace embench
