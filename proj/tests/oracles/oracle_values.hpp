#pragma once

// Generated by tests/oracles/oracles.py; do not edit.

namespace oracle {

inline constexpr double kConvTanh1 = 0.5100495944195433;
inline constexpr double kConvTanh5 = 0.9894463239487243;
inline constexpr double kConvTanh20 = 0.9999999967623474;
inline constexpr double kEffectiveExpAtom = 3.000000000008334;
inline constexpr double kLocaliser1000 = 0.9984387200675904;
inline constexpr double kWellRootLow = -0.7071067811865476;
inline constexpr double kWellRootMid = 0.0;
inline constexpr double kWellRootHigh = 0.7071067811865475;
inline constexpr double kTiltZMinus = 0.11270166537925831;
inline constexpr double kTiltZPlus = -0.9999999999999997;
inline constexpr double kTiltDeltaH = 0.3055947501931112;
inline constexpr double kDecayMinus = 0.8947330522541657;
inline constexpr double kDecayPlus = 1.826337485726998;
inline constexpr double kSymbolMinDet = 1.0;

}  // namespace oracle
