#pragma once

namespace polariton
{
inline constexpr char const kToolName[] = "polariton_cli";
inline constexpr char const kVersion[] = "0.1.0";
}  // namespace polariton
