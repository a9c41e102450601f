#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

namespace coop {

// Modulatory transfer functions combining a feedforward drive R with a
// contextual input C into one scalar output.
//
// Cooperation is the context-driven rule: C decides whether the unit's
// output is pushed to the positive or negative side of the rectifier, so
// context can amplify or fully suppress transmission. The four TM variants
// are drive-centred alternatives: each is R times a context-dependent gain,
// so R = 0 transmits nothing and C = 0 passes R through unchanged.
enum class ModulationKind { Cooperation, TM1, TM2, TM3, TM4 };

// Pre-activation of the cooperation rule. The caller applies the outer
// nonlinearity (a ReLU in the sensory layer).
inline double cooperation_preact(double r, double c) {
  return r * r + 2.0 * r + 2.0 * c * (1.0 + std::abs(r));
}

// |r*c| cap before exponentiation in TM1/TM4; exp(709) is already the
// double-precision ceiling, so anything past this would overflow.
inline constexpr double kExpArgClamp = 500.0;

inline double modulate(ModulationKind kind, double r, double c) {
  switch (kind) {
    case ModulationKind::Cooperation: {
      const double pre = cooperation_preact(r, c);
      return pre > 0.0 ? pre : 0.0;
    }
    case ModulationKind::TM1: {
      const double rc = std::clamp(r * c, -kExpArgClamp, kExpArgClamp);
      return 0.5 * r * (1.0 + std::exp(rc));
    }
    case ModulationKind::TM2:
      return r + r * c;
    case ModulationKind::TM3:
      return r * (1.0 + std::tanh(r * c));
    case ModulationKind::TM4: {
      const double rc = std::clamp(r * c, -kExpArgClamp, kExpArgClamp);
      return r * std::exp2(rc);
    }
  }
  return 0.0;  // unreachable
}

inline std::string_view to_string(ModulationKind kind) {
  switch (kind) {
    case ModulationKind::Cooperation:
      return "cooperation";
    case ModulationKind::TM1:
      return "tm1";
    case ModulationKind::TM2:
      return "tm2";
    case ModulationKind::TM3:
      return "tm3";
    case ModulationKind::TM4:
      return "tm4";
  }
  return "cooperation";  // unreachable
}

inline std::optional<ModulationKind> parse_modulation(std::string_view name) {
  if (name == "cooperation") return ModulationKind::Cooperation;
  if (name == "tm1") return ModulationKind::TM1;
  if (name == "tm2") return ModulationKind::TM2;
  if (name == "tm3") return ModulationKind::TM3;
  if (name == "tm4") return ModulationKind::TM4;
  return std::nullopt;
}

}  // namespace coop
