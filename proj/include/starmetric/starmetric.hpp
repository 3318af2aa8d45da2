#ifndef STARMETRIC_STARMETRIC_HPP
#define STARMETRIC_STARMETRIC_HPP

#include "starmetric/errors.hpp"
#include "starmetric/io.hpp"
#include "starmetric/law_report.hpp"
#include "starmetric/point.hpp"
#include "starmetric/rng.hpp"
#include "starmetric/space.hpp"
#include "starmetric/tdefiner.hpp"
#include "starmetric/topology.hpp"
#include "starmetric/vptree.hpp"

#endif  // STARMETRIC_STARMETRIC_HPP
