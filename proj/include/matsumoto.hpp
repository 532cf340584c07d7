#pragma once

#include "matsumoto/axioms.hpp"
#include "matsumoto/braid.hpp"
#include "matsumoto/coloring.hpp"
#include "matsumoto/dual.hpp"
#include "matsumoto/error.hpp"
#include "matsumoto/generators.hpp"
#include "matsumoto/graph.hpp"
#include "matsumoto/io.hpp"
#include "matsumoto/iso.hpp"
#include "matsumoto/linalg.hpp"
#include "matsumoto/ray.hpp"
#include "matsumoto/scalar.hpp"
#include "matsumoto/subgraph.hpp"
