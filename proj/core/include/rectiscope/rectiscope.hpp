#pragma once

#include "rectiscope/beta.hpp"
#include "rectiscope/density.hpp"
#include "rectiscope/dyadic.hpp"
#include "rectiscope/errors.hpp"
#include "rectiscope/generators.hpp"
#include "rectiscope/io.hpp"
#include "rectiscope/mass_tree.hpp"
#include "rectiscope/parallel.hpp"
#include "rectiscope/measure.hpp"
#include "rectiscope/rectify.hpp"
#include "rectiscope/report.hpp"
