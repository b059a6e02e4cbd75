#pragma once

// Refined magic parameters reused as fixtures; the magic tests recompute them.
namespace testdata {

inline constexpr double alpha1_U = 0.5856635583895586;

}  // namespace testdata
