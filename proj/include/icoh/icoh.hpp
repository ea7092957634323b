#ifndef ICOH_ICOH_HPP
#define ICOH_ICOH_HPP

#include "scalar.hpp"
#include "linalg.hpp"
#include "forms.hpp"
#include "model.hpp"
#include "calculus.hpp"
#include "cohomology.hpp"
#include "formality.hpp"
#include "massey.hpp"
#include "catalog.hpp"
#include "verify.hpp"

namespace icoh {

inline constexpr const char* kEngineVersion = "icoh 0.1.0";

}  // namespace icoh

#endif
