#pragma once

#include "qlitho/deposition.hpp"
#include "qlitho/errors.hpp"
#include "qlitho/estimation.hpp"
#include "qlitho/fock.hpp"
#include "qlitho/io.hpp"
#include "qlitho/numeric.hpp"
#include "qlitho/qubit.hpp"
#include "qlitho/synth.hpp"

namespace qlitho {
inline constexpr const char* kVersion = "0.1.0";
}
