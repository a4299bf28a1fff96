#pragma once

#include "hopfsym/curve_conditions.hpp"
#include "hopfsym/error.hpp"
#include "hopfsym/first_integral.hpp"
#include "hopfsym/gallery.hpp"
#include "hopfsym/hopf_lemmas.hpp"
#include "hopfsym/io.hpp"
#include "hopfsym/matching.hpp"
#include "hopfsym/moving_plane.hpp"
#include "hopfsym/numeric.hpp"
#include "hopfsym/ode.hpp"
#include "hopfsym/planar_curve.hpp"
#include "hopfsym/sampled_function.hpp"
#include "hopfsym/shapes.hpp"
