#pragma once

namespace lindblad {

/// Selects the OpenMP kernel or its serial reference. Both produce
/// bit-identical results; the serial path exists for testing and benchmarking.
enum class Exec { serial, parallel };

}  // namespace lindblad
