#ifndef SPHWAV_SPHWAV_HPP
#define SPHWAV_SPHWAV_HPP

#include "error.hpp"
#include "quadrature.hpp"
#include "sphfn.hpp"
#include "profiles.hpp"
#include "admissibility.hpp"
#include "so3.hpp"
#include "parallel.hpp"
#include "transform.hpp"
#include "multiselect.hpp"
#include "presets.hpp"
#include "io.hpp"

#endif
