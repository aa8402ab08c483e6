#pragma once

#include "intcond/errors.hpp"
#include "intcond/linalg.hpp"
#include "intcond/grassmann.hpp"
#include "intcond/binary_form.hpp"
#include "intcond/variety.hpp"
#include "intcond/intersect.hpp"
#include "intcond/condition.hpp"
#include "intcond/volume.hpp"
#include "intcond/tube.hpp"
#include "intcond/io.hpp"
