#pragma once

#include "genround/errors.hpp"
#include "genround/metric.hpp"
#include "genround/negtype.hpp"
#include "genround/weights.hpp"
#include "genround/trees.hpp"
#include "genround/scaleiso.hpp"
#include "genround/jacobi.hpp"
#include "genround/embed.hpp"
#include "genround/experiment.hpp"
#include "genround/io.hpp"
