#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "mzlab/detail/rng.hpp"
#include "mzlab/function_models.hpp"

namespace mzlab::test {

inline TrigPoly random_trig(int n, std::uint64_t seed, bool real = true)
{
    return std::get<TrigPoly>(random_model({Family::Trig, n, seed, real}).repr);
}

} // namespace mzlab::test
