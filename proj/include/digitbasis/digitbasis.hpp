#pragma once

// Umbrella header for the digitbasis library.

#include "fq.hpp"
#include "poly.hpp"
#include "local.hpp"
#include "binomial.hpp"
#include "quotient.hpp"
#include "basis.hpp"
#include "carlitz.hpp"
#include "hyperdiff.hpp"
#include "charzero.hpp"
#include "baker_tate.hpp"
#include "measures.hpp"
