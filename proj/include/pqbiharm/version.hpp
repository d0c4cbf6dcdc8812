#pragma once

namespace pqbiharm {
inline constexpr const char* kVersion = "0.1.0";
}
