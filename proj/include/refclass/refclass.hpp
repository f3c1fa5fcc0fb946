#pragma once

#include "refclass/bounds.hpp"
#include "refclass/class_term.hpp"
#include "refclass/constructions.hpp"
#include "refclass/dsl.hpp"
#include "refclass/error.hpp"
#include "refclass/inference_structure.hpp"
#include "refclass/interval.hpp"
#include "refclass/knowledge_base.hpp"
#include "refclass/rational.hpp"
#include "refclass/selection.hpp"
#include "refclass/set_reasoner.hpp"
#include "refclass/simplex.hpp"
#include "refclass/stat_index.hpp"
#include "refclass/trace_io.hpp"
