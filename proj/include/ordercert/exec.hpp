#pragma once

namespace ordercert {

/// Selects the OpenMP kernel or the serial reference path. Both produce
/// identical results; the serial path is kept for testing and benchmarks.
enum class Exec { serial, parallel };

}  // namespace ordercert
