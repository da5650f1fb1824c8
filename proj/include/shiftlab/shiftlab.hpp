// Umbrella header.
#pragma once

#include "shiftlab/core.hpp"
#include "shiftlab/natset.hpp"
#include "shiftlab/lscsm.hpp"
#include "shiftlab/ideals.hpp"
#include "shiftlab/cantor.hpp"
#include "shiftlab/weights.hpp"
#include "shiftlab/seq_vector.hpp"
#include "shiftlab/shifts.hpp"
#include "shiftlab/targets.hpp"
#include "shiftlab/fhc.hpp"
#include "shiftlab/tm.hpp"
#include "shiftlab/equivalence.hpp"
#include "shiftlab/nonequivalence.hpp"
#include "shiftlab/verify.hpp"
