#pragma once

#include "pdlkit/error.hpp"
#include "pdlkit/syntax.hpp"
#include "pdlkit/parser.hpp"
#include "pdlkit/relation.hpp"
#include "pdlkit/model.hpp"
#include "pdlkit/semantics.hpp"
#include "pdlkit/enumerate.hpp"
#include "pdlkit/model_io.hpp"
#include "pdlkit/embedding.hpp"
#include "pdlkit/decision.hpp"
#include "pdlkit/pdl_sat.hpp"
#include "pdlkit/random_formula.hpp"
