#pragma once

#include "lssmor/balanced_truncation.hpp"
#include "lssmor/loewner.hpp"
#include "lssmor/loewner_io.hpp"
#include "lssmor/model.hpp"
#include "lssmor/model_io.hpp"
#include "lssmor/reduction.hpp"
#include "lssmor/simulate.hpp"
#include "lssmor/simulate_io.hpp"
#include "lssmor/transfer.hpp"
#include "lssmor/transfer_io.hpp"
#include "lssmor/tuples.hpp"
#include "lssmor/tuples_io.hpp"
