#pragma once

#include "pdlink/common.hpp"
#include "pdlink/degree_dist.hpp"
#include "pdlink/ego.hpp"
#include "pdlink/empirical.hpp"
#include "pdlink/evaluation.hpp"
#include "pdlink/generators.hpp"
#include "pdlink/graph.hpp"
#include "pdlink/scorers.hpp"
