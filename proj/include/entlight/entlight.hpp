#pragma once

// Convenience umbrella: pulls in the whole library.
#include "cavity.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "math.hpp"
#include "phase_matching.hpp"
#include "scenarios.hpp"
#include "state.hpp"
#include "witness.hpp"
