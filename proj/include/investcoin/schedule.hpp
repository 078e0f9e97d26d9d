#pragma once

namespace investcoin {

// kSerial is the reference path; kParallel runs the same loop bodies under
// OpenMP. Both must produce identical results.
enum class Schedule { kSerial, kParallel };

}  // namespace investcoin
