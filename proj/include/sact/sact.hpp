#pragma once

// Umbrella header.

#include "sact/error.hpp"
#include "sact/quadrature.hpp"
#include "sact/generators.hpp"
#include "sact/lattice.hpp"
#include "sact/radon.hpp"
#include "sact/eligibility.hpp"
#include "sact/linalg.hpp"
#include "sact/sampling.hpp"
#include "sact/oracle.hpp"
#include "sact/reconstruct.hpp"
#include "sact/verify.hpp"
